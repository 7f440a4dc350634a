use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::hamiltonian::{characteristic_laurent, Axis, ModelParams};
use crate::linalg::C64;
use crate::spectra::{certified_ribbon_block, CertifiedOptions, DEFAULT_EDGE_THRESHOLD};

pub const GBZ_TOL: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GbzCheck {
    pub kx: f64,
    pub energy: C64,
    /// Moduli of the four roots in `beta_y`, ascending.
    pub root_moduli: [f64; 4],
    /// `| |beta_2| - |beta_3| |`.
    pub residual: f64,
    pub satisfied: bool,
}

/// Whether `energy` obeys the modular condition at `kx`: the two middle
/// roots of `beta_y^2 det(H(kx, beta_y) - E)` share one modulus.
pub fn gbz_condition_check(params: &ModelParams, kx: f64, energy: C64) -> Result<GbzCheck> {
    gbz_condition_check_with_tol(params, kx, energy, GBZ_TOL)
}

pub fn gbz_condition_check_with_tol(params: &ModelParams, kx: f64, energy: C64, tol: f64) -> Result<GbzCheck> {
    let roots = characteristic_laurent(params, Axis::Y, kx, energy)?.roots()?;
    let mut m = [0.0; 4];
    for (slot, r) in m.iter_mut().zip(&roots) {
        *slot = r.norm();
    }
    m.sort_by(f64::total_cmp);
    let residual = (m[1] - m[2]).abs();
    Ok(GbzCheck {
        kx,
        energy,
        root_moduli: m,
        residual,
        satisfied: residual < tol,
    })
}

/// Modular-condition statistics over the bulk states of a long y-ribbon.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GbzSurvey {
    pub kx: f64,
    pub cells: usize,
    pub bulk: usize,
    pub satisfied: usize,
    pub fraction: f64,
    pub max_residual: f64,
    pub median_residual: f64,
    pub uncertified: usize,
    pub gauge_radii: Vec<f64>,
}

/// Solves the y-ribbon at `kx` with the certified solver and checks every
/// bulk eigenvalue. Bulk means boundary weight at most the default edge
/// threshold in the certifying gauge frame.
pub fn gbz_survey(
    params: &ModelParams,
    kx: f64,
    cells: usize,
    opts: &CertifiedOptions,
    tol: f64,
) -> Result<GbzSurvey> {
    let block = certified_ribbon_block(params, Axis::Y, cells, kx, opts)?;
    let mut residuals = Vec::new();
    for (e, w) in block.eigenvalues.iter().zip(&block.boundary_weight) {
        if *w <= DEFAULT_EDGE_THRESHOLD {
            residuals.push(gbz_condition_check_with_tol(params, kx, *e, tol)?.residual);
        }
    }
    residuals.sort_by(f64::total_cmp);
    let satisfied = residuals.iter().filter(|&&r| r < tol).count();
    Ok(GbzSurvey {
        kx,
        cells,
        bulk: residuals.len(),
        satisfied,
        fraction: if residuals.is_empty() { 0.0 } else { satisfied as f64 / residuals.len() as f64 },
        max_residual: residuals.last().copied().unwrap_or(0.0),
        median_residual: residuals.get(residuals.len() / 2).copied().unwrap_or(0.0),
        uncertified: block.uncertified,
        gauge_radii: block.radii,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::{build_bloch, PerturbationSpec};
    use crate::linalg::eigenvalues;

    #[test]
    fn hermitian_bulk_energies_sit_on_the_unit_circle() {
        let p = ModelParams::hermitian(0.2, 0.4);
        for (kx, ky) in [(0.0, 0.4), (1.3, 2.0), (3.0, -1.0)] {
            for e in eigenvalues(&build_bloch(&p, kx, ky)).unwrap() {
                let c = gbz_condition_check(&p, kx, e).unwrap();
                assert!((c.root_moduli[1] - 1.0).abs() < 1e-8 && (c.root_moduli[2] - 1.0).abs() < 1e-8);
                assert!(c.satisfied);
            }
        }
    }

    #[test]
    fn moduli_are_sorted() {
        let p = ModelParams::reference().with_perturbation(PerturbationSpec::beta(0.8));
        let c = gbz_condition_check(&p, 0.5, C64::new(0.7, 0.02)).unwrap();
        assert!(c.root_moduli.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn short_ribbon_survey() {
        let p = ModelParams::reference().with_perturbation(PerturbationSpec::beta(0.8));
        let s = gbz_survey(&p, 0.0, 30, &CertifiedOptions::default(), GBZ_TOL).unwrap();
        assert_eq!(s.uncertified, 0);
        assert!(s.fraction > 0.9, "{s:?}");
    }
}
