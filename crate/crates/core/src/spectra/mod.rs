//! Complex spectra of Bloch, ribbon and finite-lattice Hamiltonians.
//!
//! Every diagonalization here is independent, so momentum samples are solved
//! on the current rayon pool and gathered back in input order.

mod certified;
mod io;

pub use certified::{
    certified_ribbon_block, gauge_radii, nonbloch_ribbon_spectrum, CertifiedBlock, CertifiedOptions,
};
pub use io::{read_csv, spectra_to_csv, CsvRow, CSV_HEADER};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{self, KGrid};
use crate::hamiltonian::{
    build_bloch, build_real_space, build_ribbon, Axis, BoundaryCondition, BoundaryLabel, LatticeSpec,
    ModelParams, RibbonGeometry,
};
use crate::linalg::{eigen_checked, eigenvalues_checked, sort_lex, CMat, EigenDecomp, C64};

pub const DEFAULT_STRIP: usize = 2;
pub const DEFAULT_EDGE_THRESHOLD: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumKind {
    Bloch,
    Ribbon,
    Lattice,
    /// Ribbon solved in skin-compensating gauges; weights refer to that frame.
    NonBlochRibbon,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumMeta {
    pub kind: SpectrumKind,
    pub bc: BoundaryLabel,
    pub params: ModelParams,
    pub params_digest: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub lattice: Option<LatticeSpec>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub ribbon: Option<RibbonSpec>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub grid: Option<KGrid>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub strip: Option<usize>,
}

impl SpectrumMeta {
    fn new(kind: SpectrumKind, bc: BoundaryLabel, params: &ModelParams) -> Self {
        Self {
            kind,
            bc,
            params: params.clone(),
            params_digest: params_digest(params),
            lattice: None,
            ribbon: None,
            grid: None,
            strip: None,
        }
    }
}

/// FNV-1a over the JSON form of the parameters.
pub fn params_digest(params: &ModelParams) -> String {
    let text = serde_json::to_string(params).unwrap_or_default();
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in text.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    format!("{h:016x}")
}

/// Eigenvalues with optional momentum labels and boundary weights.
///
/// When `block` is set, eigenvalues come in consecutive groups of that size,
/// one group per momentum sample, each sorted by (Re, Im).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexSpectrum {
    pub eigenvalues: Vec<C64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub kx: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub ky: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub boundary_weight: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub block: Option<usize>,
    pub meta: SpectrumMeta,
}

impl ComplexSpectrum {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn max_abs_im(&self) -> f64 {
        self.eigenvalues.iter().map(|e| e.im.abs()).fold(0.0, f64::max)
    }

    /// Momentum blocks as slices.
    pub fn blocks(&self) -> Result<Vec<&[C64]>> {
        match self.block {
            Some(b) if b > 0 && self.len().is_multiple_of(b) => Ok(self.eigenvalues.chunks(b).collect()),
            Some(b) => Err(Error::MalformedGrouping(format!(
                "{} eigenvalues do not split into blocks of {b}",
                self.len()
            ))),
            None => Err(Error::MalformedGrouping("spectrum has no momentum blocks".into())),
        }
    }

    /// Band `n` collects the n-th eigenvalue of every block.
    pub fn bands(&self) -> Result<Vec<Vec<C64>>> {
        let blocks = self.blocks()?;
        let b = self.block.unwrap_or(0);
        Ok((0..b).map(|n| blocks.iter().map(|blk| blk[n]).collect()).collect())
    }

    /// Sub-spectrum of the states selected by `keep`; block structure is
    /// dropped.
    pub fn select(&self, keep: impl Fn(usize) -> bool) -> ComplexSpectrum {
        let idx: Vec<usize> = (0..self.len()).filter(|&i| keep(i)).collect();
        let pick_f = |v: &Option<Vec<f64>>| v.as_ref().map(|v| idx.iter().map(|&i| v[i]).collect());
        ComplexSpectrum {
            eigenvalues: idx.iter().map(|&i| self.eigenvalues[i]).collect(),
            kx: pick_f(&self.kx),
            ky: pick_f(&self.ky),
            boundary_weight: pick_f(&self.boundary_weight),
            block: None,
            meta: self.meta.clone(),
        }
    }
}

/// Finite-size geometry with one open axis; `k_samples` equally spaced
/// momenta along the periodic axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RibbonSpec {
    pub open_axis: Axis,
    pub cells: usize,
    pub k_samples: usize,
}

impl RibbonSpec {
    pub fn new(open_axis: Axis, cells: usize, k_samples: usize) -> Self {
        Self {
            open_axis,
            cells,
            k_samples,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.cells < 2 {
            return Err(Error::InvalidRibbon(format!("cells must be at least 2, got {}", self.cells)));
        }
        if self.k_samples == 0 {
            return Err(Error::InvalidRibbon("k_samples must be positive".into()));
        }
        Ok(())
    }

    pub fn label(&self) -> BoundaryLabel {
        match self.open_axis {
            Axis::X => BoundaryLabel::XObc,
            Axis::Y => BoundaryLabel::YObc,
        }
    }

    pub fn momenta(&self) -> Vec<f64> {
        grid::line(self.k_samples)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumOptions {
    /// Boundary strip width in unit cells.
    pub strip: usize,
    /// Skip eigenvectors (and therefore boundary weights).
    pub eigenvalues_only: bool,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        Self {
            strip: DEFAULT_STRIP,
            eigenvalues_only: false,
        }
    }
}

impl SpectrumOptions {
    pub fn eigenvalues_only() -> Self {
        Self {
            eigenvalues_only: true,
            ..Self::default()
        }
    }
}

pub fn bloch_spectrum(params: &ModelParams, grid: &KGrid) -> Result<ComplexSpectrum> {
    grid.validate()?;
    let points = grid.points();
    let blocks: Vec<Vec<C64>> = points
        .par_iter()
        .map(|&(kx, ky)| {
            let mut v = eigenvalues_checked(&build_bloch(params, kx, ky), "bloch")
                .map_err(|e| relabel(e, &format!("bloch k = ({kx:.6}, {ky:.6})")))?;
            sort_lex(&mut v);
            Ok(v)
        })
        .collect::<Result<_>>()?;
    let mut meta = SpectrumMeta::new(SpectrumKind::Bloch, BoundaryLabel::Pbc, params);
    meta.grid = Some(*grid);
    Ok(ComplexSpectrum {
        eigenvalues: blocks.concat(),
        kx: Some(points.iter().flat_map(|p| [p.0; 4]).collect()),
        ky: Some(points.iter().flat_map(|p| [p.1; 4]).collect()),
        boundary_weight: None,
        block: Some(4),
        meta,
    })
}

pub fn ribbon_spectrum(params: &ModelParams, ribbon: &RibbonSpec) -> Result<ComplexSpectrum> {
    ribbon_spectrum_with(params, ribbon, &SpectrumOptions::default())
}

pub fn ribbon_spectrum_with(
    params: &ModelParams,
    ribbon: &RibbonSpec,
    opts: &SpectrumOptions,
) -> Result<ComplexSpectrum> {
    ribbon.validate()?;
    let ks = ribbon.momenta();
    let dim = 4 * ribbon.cells;
    let strip = strip_mask_1d(ribbon.cells, opts.strip);
    let solved: Vec<(Vec<C64>, Option<Vec<f64>>)> = ks
        .par_iter()
        .map(|&k| {
            let h = build_ribbon(params, &RibbonGeometry::new(ribbon.open_axis, ribbon.cells, k))?;
            let ctx = format!("{} ribbon k = {k:.6}", ribbon.open_axis);
            solve_sorted(&h, opts.eigenvalues_only, &strip, &ctx)
        })
        .collect::<Result<_>>()?;
    let (values, weights) = unzip_blocks(solved);
    let labels: Vec<f64> = ks.iter().flat_map(|&k| std::iter::repeat_n(k, dim)).collect();
    let (kx, ky) = match ribbon.open_axis {
        Axis::X => (None, Some(labels)),
        Axis::Y => (Some(labels), None),
    };
    let mut meta = SpectrumMeta::new(SpectrumKind::Ribbon, ribbon.label(), params);
    meta.ribbon = Some(*ribbon);
    meta.strip = (!opts.eigenvalues_only).then_some(opts.strip);
    Ok(ComplexSpectrum {
        eigenvalues: values,
        kx,
        ky,
        boundary_weight: weights,
        block: Some(dim),
        meta,
    })
}

pub fn full_spectrum(params: &ModelParams, lattice: &LatticeSpec) -> Result<ComplexSpectrum> {
    full_spectrum_with(params, lattice, &SpectrumOptions::default())
}

/// All `4 nx ny` eigenvalues of the finite lattice. The boundary strip runs
/// along the open axes; a fully periodic lattice uses the nominal edges of
/// both axes so its weights sit at the strip-area baseline.
pub fn full_spectrum_with(
    params: &ModelParams,
    lattice: &LatticeSpec,
    opts: &SpectrumOptions,
) -> Result<ComplexSpectrum> {
    let h = build_real_space(params, lattice)?;
    let mask = lattice_strip_mask(lattice, opts.strip);
    let ctx = format!("{} lattice {}x{}", lattice.label(), lattice.nx, lattice.ny);
    let (values, weights) = solve_sorted(&h, opts.eigenvalues_only, &mask, &ctx)?;
    let mut meta = SpectrumMeta::new(SpectrumKind::Lattice, lattice.label(), params);
    meta.lattice = Some(*lattice);
    meta.strip = (!opts.eigenvalues_only).then_some(opts.strip);
    Ok(ComplexSpectrum {
        eigenvalues: values,
        kx: None,
        ky: None,
        boundary_weight: weights,
        block: None,
        meta,
    })
}

/// Edge/bulk split by boundary weight.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModePartition {
    pub threshold: f64,
    pub edge: Vec<usize>,
    pub bulk: Vec<usize>,
}

impl ModePartition {
    pub fn edge_count(&self) -> usize {
        self.edge.len()
    }

    pub fn bulk_count(&self) -> usize {
        self.bulk.len()
    }

    pub fn is_edge(&self, i: usize) -> bool {
        self.edge.binary_search(&i).is_ok()
    }
}

/// States with boundary weight above `threshold` are edge states.
pub fn classify_modes(spectrum: &ComplexSpectrum, threshold: f64) -> Result<ModePartition> {
    let w = spectrum.boundary_weight.as_ref().ok_or(Error::MissingLocalization)?;
    let (edge, bulk): (Vec<usize>, Vec<usize>) = (0..w.len()).partition(|&i| w[i] > threshold);
    Ok(ModePartition { threshold, edge, bulk })
}

pub(crate) fn relabel(e: Error, context: &str) -> Error {
    match e {
        Error::Numerical { reason, .. } => Error::numerical(context, reason),
        other => other,
    }
}

pub(crate) fn strip_mask_1d(cells: usize, strip: usize) -> Vec<bool> {
    (0..4 * cells)
        .map(|i| {
            let c = i / 4;
            c < strip || c + strip >= cells
        })
        .collect()
}

fn lattice_strip_mask(lattice: &LatticeSpec, strip: usize) -> Vec<bool> {
    let open_x = lattice.bc_x == BoundaryCondition::Open;
    let open_y = lattice.bc_y == BoundaryCondition::Open;
    let (use_x, use_y) = if open_x || open_y { (open_x, open_y) } else { (true, true) };
    let near = |v: usize, n: usize| v < strip || v + strip >= n;
    (0..lattice.dim())
        .map(|i| {
            let cell = i / 4;
            let (x, y) = (cell % lattice.nx, cell / lattice.nx);
            (use_x && near(x, lattice.nx)) || (use_y && near(y, lattice.ny))
        })
        .collect()
}

/// Probability weight of each (unit-norm) eigenvector on the masked sites.
pub(crate) fn strip_weights(decomp: &EigenDecomp, mask: &[bool]) -> Vec<f64> {
    (0..decomp.values.len())
        .map(|k| {
            let mut w = 0.0;
            let mut total = 0.0;
            for (i, &m) in mask.iter().enumerate() {
                let p = decomp.vectors[(i, k)].norm_sqr();
                total += p;
                if m {
                    w += p;
                }
            }
            if total > 0.0 {
                (w / total).clamp(0.0, 1.0)
            } else {
                0.0
            }
        })
        .collect()
}

fn solve_sorted(
    h: &CMat,
    eigenvalues_only: bool,
    mask: &[bool],
    context: &str,
) -> Result<(Vec<C64>, Option<Vec<f64>>)> {
    if eigenvalues_only {
        let mut v = eigenvalues_checked(h, context).map_err(|e| relabel(e, context))?;
        sort_lex(&mut v);
        return Ok((v, None));
    }
    let d = eigen_checked(h, context).map_err(|e| relabel(e, context))?;
    let w = strip_weights(&d, mask);
    let mut order: Vec<usize> = (0..d.values.len()).collect();
    order.sort_by(|&a, &b| crate::linalg::lex_cmp(&d.values[a], &d.values[b]));
    Ok((
        order.iter().map(|&i| d.values[i]).collect(),
        Some(order.iter().map(|&i| w[i]).collect()),
    ))
}

fn unzip_blocks(solved: Vec<(Vec<C64>, Option<Vec<f64>>)>) -> (Vec<C64>, Option<Vec<f64>>) {
    let has_w = solved.iter().all(|s| s.1.is_some());
    let mut values = Vec::new();
    let mut weights = Vec::new();
    for (v, w) in solved {
        values.extend(v);
        if let Some(w) = w {
            weights.extend(w);
        }
    }
    (values, has_w.then_some(weights))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::PerturbationSpec;
    use crate::linalg::pair_multisets;

    #[test]
    fn bloch_counts_and_labels() {
        let s = bloch_spectrum(&ModelParams::reference(), &KGrid::new(3, 5)).unwrap();
        assert_eq!(s.len(), 60);
        assert_eq!(s.kx.as_ref().unwrap().len(), 60);
        assert_eq!(s.bands().unwrap().len(), 4);
        assert!(bloch_spectrum(&ModelParams::reference(), &KGrid::new(0, 4)).is_err());
    }

    #[test]
    fn periodic_lattice_matches_bloch_union() {
        let p = ModelParams::reference().with_perturbation(PerturbationSpec::alpha(0.3));
        let full = full_spectrum(&p, &LatticeSpec::periodic(3, 4)).unwrap();
        let bloch = bloch_spectrum(&p, &KGrid::new(3, 4)).unwrap();
        let pairing = pair_multisets(&full.eigenvalues, &bloch.eigenvalues).unwrap();
        assert!(pairing.max_distance < 1e-10);
    }

    #[test]
    fn ribbon_validation_and_shape() {
        let p = ModelParams::reference();
        assert!(ribbon_spectrum(&p, &RibbonSpec::new(Axis::Y, 1, 4)).is_err());
        assert!(ribbon_spectrum(&p, &RibbonSpec::new(Axis::Y, 4, 0)).is_err());
        let s = ribbon_spectrum(&p, &RibbonSpec::new(Axis::Y, 5, 3)).unwrap();
        assert_eq!(s.len(), 60);
        assert_eq!(s.block, Some(20));
        assert!(s.ky.is_none() && s.kx.is_some());
        let w = s.boundary_weight.unwrap();
        assert!(w.iter().all(|x| (0.0..=1.0).contains(x)));
    }

    #[test]
    fn periodic_states_sit_at_strip_baseline() {
        let opts = SpectrumOptions {
            strip: 1,
            eigenvalues_only: false,
        };
        let lat = LatticeSpec::periodic(10, 10);
        // Near-orthonormal eigenbasis: the weights average to the strip fraction.
        let h = ModelParams::hermitian(0.2, 0.4).with_perturbation(PerturbationSpec::alpha(0.13));
        let s = full_spectrum_with(&h, &lat, &opts).unwrap();
        let w = s.boundary_weight.as_ref().unwrap();
        let mean = w.iter().sum::<f64>() / w.len() as f64;
        assert!((mean - 0.36).abs() < 1e-3, "{mean}");
        // Generic point without degeneracies: every eigenvector is a plane wave.
        let p = ModelParams::new(0.23, 0.41, 0.17, 0.29).with_perturbation(PerturbationSpec::beta(0.31));
        let s = full_spectrum_with(&p, &LatticeSpec::periodic(11, 9), &opts).unwrap();
        assert_eq!(classify_modes(&s, DEFAULT_EDGE_THRESHOLD).unwrap().edge_count(), 0);
    }

    #[test]
    fn eigenvalues_only_has_no_weights() {
        let s = full_spectrum_with(
            &ModelParams::reference(),
            &LatticeSpec::open(3, 3),
            &SpectrumOptions::eigenvalues_only(),
        )
        .unwrap();
        assert!(matches!(classify_modes(&s, 0.5), Err(Error::MissingLocalization)));
    }

    #[test]
    fn strip_masks() {
        let m = strip_mask_1d(5, 2);
        let cells: Vec<bool> = m.chunks(4).map(|c| c[0]).collect();
        assert_eq!(cells, vec![true, true, false, true, true]);
        let lat = LatticeSpec::with_label(6, 6, BoundaryLabel::XObc);
        let mask = lattice_strip_mask(&lat, 1);
        assert_eq!(mask.iter().filter(|&&b| b).count(), 4 * 2 * 6);
    }

    #[test]
    fn digest_tracks_parameters() {
        let a = ModelParams::reference();
        let b = a.clone().with_perturbation(PerturbationSpec::beta(0.8));
        assert_eq!(params_digest(&a), params_digest(&a.clone()));
        assert_ne!(params_digest(&a), params_digest(&b));
    }
}
