use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::grid;
use crate::hamiltonian::{build_bloch, Axis, ModelParams};
use crate::linalg::{eigenvalues, C64};
use crate::spectra::{classify_modes, ribbon_spectrum_with, RibbonSpec, SpectrumOptions, DEFAULT_EDGE_THRESHOLD};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SkinOptions {
    pub cells: usize,
    pub k_samples: usize,
    /// Momenta along the open axis for the periodic reference spectrum.
    pub bloch_samples: usize,
    pub strip: usize,
    pub distance_tol: f64,
    pub weight_factor: f64,
}

impl Default for SkinOptions {
    fn default() -> Self {
        Self {
            cells: 40,
            k_samples: 16,
            bloch_samples: 256,
            strip: 2,
            distance_tol: 0.03,
            weight_factor: 2.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SkinReport {
    pub axis: Axis,
    pub present: bool,
    /// Largest distance from a periodic eigenvalue to the ribbon spectrum at
    /// the same transverse momentum.
    pub displacement: f64,
    pub mean_boundary_weight: f64,
    /// Boundary weight of a uniformly spread state, `2 strip / cells`.
    pub baseline: f64,
    pub distance_tol: f64,
    pub weight_factor: f64,
}

/// Periodic eigenvalues at each transverse momentum of `ribbon`.
fn periodic_reference(params: &ModelParams, ribbon: &RibbonSpec, samples: usize) -> Result<Vec<Vec<C64>>> {
    let along = grid::line(samples);
    ribbon
        .momenta()
        .par_iter()
        .map(|&kt| {
            let mut out = Vec::with_capacity(4 * samples);
            for &k in &along {
                let h = match ribbon.open_axis {
                    Axis::X => build_bloch(params, k, kt),
                    Axis::Y => build_bloch(params, kt, k),
                };
                out.extend(eigenvalues(&h)?);
            }
            Ok(out)
        })
        .collect()
}

fn nearest(e: C64, set: &[C64]) -> f64 {
    set.iter().map(|x| (x - e).norm()).fold(f64::INFINITY, f64::min)
}

/// Skin effect along `axis` from two signals: the periodic spectrum is not
/// reproduced by the ribbon open along `axis`, and ribbon eigenstates pile up
/// at the boundary well beyond the uniform baseline.
pub fn skin_effect_indicator(params: &ModelParams, axis: Axis, opts: &SkinOptions) -> Result<SkinReport> {
    let ribbon = RibbonSpec::new(axis, opts.cells, opts.k_samples);
    let spectrum = ribbon_spectrum_with(
        params,
        &ribbon,
        &SpectrumOptions {
            strip: opts.strip,
            eigenvalues_only: false,
        },
    )?;
    let reference = periodic_reference(params, &ribbon, opts.bloch_samples)?;
    let blocks = spectrum.blocks()?;
    let displacement = reference
        .iter()
        .zip(&blocks)
        .flat_map(|(pbc, obc)| pbc.iter().map(move |e| nearest(*e, obc)))
        .fold(0.0, f64::max);
    let w = spectrum.boundary_weight.as_ref().expect("weights requested");
    let mean_boundary_weight = w.iter().sum::<f64>() / w.len() as f64;
    let baseline = (2 * opts.strip) as f64 / opts.cells as f64;
    Ok(SkinReport {
        axis,
        present: displacement > opts.distance_tol && mean_boundary_weight >= opts.weight_factor * baseline,
        displacement,
        mean_boundary_weight,
        baseline,
        distance_tol: opts.distance_tol,
        weight_factor: opts.weight_factor,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IsolatedEdgeReport {
    pub edge_states: usize,
    /// Edge states farther than `distance` from the periodic spectrum.
    pub isolated: usize,
    pub max_distance: f64,
    pub distance: f64,
}

/// Counts edge-classified ribbon states that do not sit on the periodic
/// spectrum at their transverse momentum.
pub fn isolated_edge_modes(
    params: &ModelParams,
    ribbon: &RibbonSpec,
    distance: f64,
    bloch_samples: usize,
) -> Result<IsolatedEdgeReport> {
    let spectrum = ribbon_spectrum_with(params, ribbon, &SpectrumOptions::default())?;
    let part = classify_modes(&spectrum, DEFAULT_EDGE_THRESHOLD)?;
    let reference = periodic_reference(params, ribbon, bloch_samples)?;
    let block = 4 * ribbon.cells;
    let mut isolated = 0;
    let mut max_distance = 0.0_f64;
    for &i in &part.edge {
        let d = nearest(spectrum.eigenvalues[i], &reference[i / block]);
        max_distance = max_distance.max(d);
        if d > distance {
            isolated += 1;
        }
    }
    Ok(IsolatedEdgeReport {
        edge_states: part.edge_count(),
        isolated,
        max_distance,
        distance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermitian_limit_has_no_skin_effect() {
        let p = ModelParams::hermitian(0.2, 0.4);
        let opts = SkinOptions {
            cells: 20,
            k_samples: 4,
            bloch_samples: 64,
            ..SkinOptions::default()
        };
        for axis in [Axis::X, Axis::Y] {
            let r = skin_effect_indicator(&p, axis, &opts).unwrap();
            assert!(!r.present, "{r:?}");
        }
    }
}
