//! Ribbon spectra that survive the exponential ill-conditioning caused by the
//! skin effect.
//!
//! Skin modes decay like `|beta|^c` along the open axis, so eigenvalue
//! condition numbers grow like `|beta|^-cells` and a plain dense solve of a
//! long ribbon returns roundoff. The similarity `S^-1 H S`, `S = diag(r^c)`,
//! leaves the spectrum unchanged and makes modes with `|beta| = r` extended.
//! Radii are read off the modular condition on a short probe ribbon, one
//! gauge per radius cluster. Each gauge contributes only eigenvalues whose
//! first-order error bound `eps ||H|| kappa` is below tolerance.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{relabel, strip_mask_1d, strip_weights, ComplexSpectrum, RibbonSpec, SpectrumKind, SpectrumMeta};
use crate::error::Result;
use crate::hamiltonian::{build_ribbon, characteristic_laurent, Axis, ModelParams, RibbonGeometry};
use crate::linalg::{condition_numbers, eigen_checked, eigenvalues, frobenius, lex_cmp, C64};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CertifiedOptions {
    pub probe_cells: usize,
    /// Largest accepted error bound.
    pub tol: f64,
    pub max_gauges: usize,
    pub strip: usize,
}

impl Default for CertifiedOptions {
    fn default() -> Self {
        Self {
            probe_cells: 20,
            tol: 1e-8,
            max_gauges: 4,
            strip: super::DEFAULT_STRIP,
        }
    }
}

/// Certified eigenvalues of one ribbon block, sorted by (Re, Im).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertifiedBlock {
    pub k: f64,
    pub eigenvalues: Vec<C64>,
    pub error_bounds: Vec<f64>,
    /// Gauge radius that certified each eigenvalue.
    pub gauges: Vec<f64>,
    /// Boundary weight of the eigenvector in its certifying gauge.
    pub boundary_weight: Vec<f64>,
    /// Gauge radii tried, in order.
    pub radii: Vec<f64>,
    /// Matrix dimension minus the number of certified eigenvalues.
    pub uncertified: usize,
}

/// Candidate gauge radii for a ribbon open along `axis` at transverse
/// momentum `k`, most populated cluster first. Falls back to `[1.0]` when the
/// characteristic polynomial degenerates.
pub fn gauge_radii(params: &ModelParams, axis: Axis, k: f64, probe_cells: usize) -> Result<Vec<f64>> {
    let probe = build_ribbon(params, &RibbonGeometry::new(axis, probe_cells.max(2), k))?;
    let energies = eigenvalues(&probe)?;
    let mut logs: Vec<f64> = energies
        .iter()
        .filter_map(|&e| {
            let roots = characteristic_laurent(params, axis, k, e).ok()?.roots().ok()?;
            let mut m: Vec<f64> = roots.iter().map(|r| r.norm()).collect();
            m.sort_by(f64::total_cmp);
            let r = (m[1] * m[2]).sqrt();
            (r.is_finite() && r > 0.0).then(|| r.ln())
        })
        .collect();
    if logs.is_empty() {
        return Ok(vec![1.0]);
    }
    logs.sort_by(f64::total_cmp);
    let mut clusters: Vec<Vec<f64>> = vec![vec![logs[0]]];
    for w in logs.windows(2) {
        if w[1] - w[0] < 0.1 {
            clusters.last_mut().unwrap().push(w[1]);
        } else {
            clusters.push(vec![w[1]]);
        }
    }
    clusters.sort_by_key(|c| std::cmp::Reverse(c.len()));
    Ok(clusters.iter().map(|c| c[c.len() / 2].exp()).collect())
}

/// One ribbon block solved across gauges until every eigenvalue is certified
/// or `max_gauges` is exhausted.
pub fn certified_ribbon_block(
    params: &ModelParams,
    axis: Axis,
    cells: usize,
    k: f64,
    opts: &CertifiedOptions,
) -> Result<CertifiedBlock> {
    let dim = 4 * cells;
    let radii = gauge_radii(params, axis, k, opts.probe_cells.min(cells))?;
    let mask = strip_mask_1d(cells, opts.strip);
    let mut accepted: Vec<Accepted> = Vec::new();
    let mut tried = Vec::new();
    for (g, &r) in radii.iter().take(opts.max_gauges.max(1)).enumerate() {
        tried.push(r);
        let h = build_ribbon(params, &RibbonGeometry::new(axis, cells, k).with_gauge(r))?;
        let ctx = format!("{axis} ribbon k = {k:.6} gauge {r:.4}");
        let d = eigen_checked(&h, &ctx).map_err(|e| relabel(e, &ctx))?;
        let kappa = condition_numbers(&d);
        let weights = strip_weights(&d, &mask);
        let scale = f64::EPSILON * frobenius(&h);
        for i in 0..d.values.len() {
            let bound = scale * kappa[i];
            if bound < opts.tol {
                merge(&mut accepted, g, d.values[i], bound, r, weights[i]);
            }
        }
        if accepted.len() >= dim {
            break;
        }
    }
    accepted.sort_by(|a, b| lex_cmp(&a.value, &b.value));
    accepted.truncate(dim);
    Ok(CertifiedBlock {
        k,
        uncertified: dim - accepted.len(),
        eigenvalues: accepted.iter().map(|a| a.value).collect(),
        error_bounds: accepted.iter().map(|a| a.bound).collect(),
        gauges: accepted.iter().map(|a| a.gauge).collect(),
        boundary_weight: accepted.iter().map(|a| a.weight).collect(),
        radii: tried,
    })
}

/// Ribbon spectrum from [`certified_ribbon_block`] at every momentum sample.
/// Boundary weights refer to the certifying gauge frame, where skin modes
/// are extended and only genuine edge modes carry boundary weight.
pub fn nonbloch_ribbon_spectrum(
    params: &ModelParams,
    ribbon: &RibbonSpec,
    opts: &CertifiedOptions,
) -> Result<ComplexSpectrum> {
    ribbon.validate()?;
    let ks = ribbon.momenta();
    let blocks: Vec<CertifiedBlock> = ks
        .par_iter()
        .map(|&k| certified_ribbon_block(params, ribbon.open_axis, ribbon.cells, k, opts))
        .collect::<Result<_>>()?;
    let missing: usize = blocks.iter().map(|b| b.uncertified).sum();
    if missing > 0 {
        log::warn!("{missing} ribbon eigenvalues could not be certified and are omitted");
    }
    let labels: Vec<f64> = blocks
        .iter()
        .flat_map(|b| std::iter::repeat_n(b.k, b.eigenvalues.len()))
        .collect();
    let (kx, ky) = match ribbon.open_axis {
        Axis::X => (None, Some(labels)),
        Axis::Y => (Some(labels), None),
    };
    let full = missing == 0;
    let mut meta = SpectrumMeta::new(SpectrumKind::NonBlochRibbon, ribbon.label(), params);
    meta.ribbon = Some(*ribbon);
    meta.strip = Some(opts.strip);
    Ok(ComplexSpectrum {
        eigenvalues: blocks.iter().flat_map(|b| b.eigenvalues.iter().copied()).collect(),
        boundary_weight: Some(blocks.iter().flat_map(|b| b.boundary_weight.iter().copied()).collect()),
        kx,
        ky,
        block: full.then_some(4 * ribbon.cells),
        meta,
    })
}

struct Accepted {
    value: C64,
    bound: f64,
    gauge: f64,
    weight: f64,
    seen_in: Vec<usize>,
}

/// One-to-one merge: a candidate from gauge `g` is the same eigenvalue as an
/// accepted one from another gauge when they agree to within their bounds.
/// Repeated eigenvalues inside one gauge are kept apart.
fn merge(accepted: &mut Vec<Accepted>, g: usize, value: C64, bound: f64, gauge: f64, weight: f64) {
    let best = accepted
        .iter_mut()
        .filter(|a| !a.seen_in.contains(&g))
        .map(|a| ((a.value - value).norm(), a))
        .filter(|(d, a)| *d < 1e-7 + 100.0 * (a.bound + bound))
        .min_by(|x, y| x.0.total_cmp(&y.0));
    match best {
        Some((_, a)) => {
            a.seen_in.push(g);
            if bound < a.bound {
                a.value = value;
                a.bound = bound;
                a.gauge = gauge;
                a.weight = weight;
            }
        }
        None => accepted.push(Accepted {
            value,
            bound,
            gauge,
            weight,
            seen_in: vec![g],
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::PerturbationSpec;
    use crate::linalg::pair_multisets;

    #[test]
    fn hermitian_needs_only_the_trivial_gauge() {
        let p = ModelParams::hermitian(0.2, 0.4);
        let r = gauge_radii(&p, Axis::Y, 0.3, 12).unwrap();
        assert!((r[0] - 1.0).abs() < 1e-6, "{r:?}");
        let b = certified_ribbon_block(&p, Axis::Y, 12, 0.3, &CertifiedOptions::default()).unwrap();
        assert_eq!(b.uncertified, 0);
        assert_eq!(b.radii.len(), 1);
    }

    #[test]
    fn short_ribbon_agrees_with_plain_solve() {
        let p = ModelParams::reference().with_perturbation(PerturbationSpec::beta(0.8));
        let cells = 10;
        let b = certified_ribbon_block(&p, Axis::Y, cells, 0.0, &CertifiedOptions::default()).unwrap();
        assert_eq!(b.uncertified, 0);
        let plain = eigenvalues(&build_ribbon(&p, &RibbonGeometry::new(Axis::Y, cells, 0.0)).unwrap()).unwrap();
        let pairing = pair_multisets(&b.eigenvalues, &plain).unwrap();
        assert!(pairing.max_distance < 1e-6, "{}", pairing.max_distance);
    }

    #[test]
    fn merge_keeps_repeats_within_a_gauge() {
        let mut acc = Vec::new();
        let e = C64::new(0.5, 0.0);
        merge(&mut acc, 0, e, 1e-12, 1.0, 0.1);
        merge(&mut acc, 0, e, 1e-12, 1.0, 0.1);
        merge(&mut acc, 1, e, 1e-13, 2.0, 0.2);
        assert_eq!(acc.len(), 2);
        assert_eq!(acc.iter().filter(|a| a.gauge == 2.0).count(), 1);
    }
}
