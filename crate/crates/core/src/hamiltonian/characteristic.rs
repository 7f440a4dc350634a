use std::f64::consts::PI;

use super::{continued_hamiltonian, Axis, ModelParams};
use crate::error::{Error, Result};
use crate::linalg::{det, identity, polynomial_roots, scale, CMat, C64, ZERO};

const SAMPLES: usize = 8;

/// `det(H(beta) - E) = sum_{d=-2}^{2} coeffs[d + 2] beta^d` along one axis at
/// fixed transverse momentum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaurentQuartic {
    pub coeffs: [C64; 5],
}

impl LaurentQuartic {
    pub fn coeff(&self, power: i32) -> C64 {
        self.coeffs[(power + 2) as usize]
    }

    pub fn eval(&self, beta: C64) -> C64 {
        (-2..=2).map(|d| self.coeff(d) * beta.powi(d)).sum()
    }

    /// The four roots of `beta^2 * det(H(beta) - E)`, i.e. the solutions of
    /// the non-Bloch eigen-equation.
    pub fn roots(&self) -> Result<Vec<C64>> {
        let scale_ref = self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let (lead, trail) = (self.coeff(2).norm(), self.coeff(-2).norm());
        if scale_ref == 0.0 || lead <= 1e-13 * scale_ref || trail <= 1e-13 * scale_ref {
            return Err(Error::DegeneratePolynomial(format!(
                "beta^2 coefficient {lead:.3e}, beta^-2 coefficient {trail:.3e}"
            )));
        }
        let high_to_low: Vec<C64> = (-2..=2).rev().map(|d| self.coeff(d)).collect();
        polynomial_roots(&high_to_low)
    }
}

/// Laurent coefficients of `det(H - E)` with `e^{ik}` along `axis` replaced
/// by `beta`. Extracted exactly by sampling the determinant at the eighth
/// roots of unity; power slots outside `-2..=2` must come out empty.
pub fn characteristic_laurent(
    params: &ModelParams,
    axis: Axis,
    k_transverse: f64,
    energy: C64,
) -> Result<LaurentQuartic> {
    let shift = scale(&identity(4), energy);
    let transverse = C64::from_polar(1.0, k_transverse);
    let values: Vec<C64> = (0..SAMPLES)
        .map(|j| {
            let z = C64::from_polar(1.0, 2.0 * PI * j as f64 / SAMPLES as f64);
            let h: CMat = match axis {
                Axis::X => continued_hamiltonian(params, z, transverse),
                Axis::Y => continued_hamiltonian(params, transverse, z),
            };
            det(&(&h - &shift))
        })
        .collect();
    let coeff = |d: i32| -> C64 {
        let mut s = ZERO;
        for (j, v) in values.iter().enumerate() {
            s += v * C64::from_polar(1.0, -2.0 * PI * (j as f64) * d as f64 / SAMPLES as f64);
        }
        s / SAMPLES as f64
    };
    let coeffs = [coeff(-2), coeff(-1), coeff(0), coeff(1), coeff(2)];
    let size = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max).max(1e-300);
    for d in [-3, 3, 4] {
        let stray = coeff(d).norm();
        if stray > 1e-10 * size {
            return Err(Error::DegeneratePolynomial(format!(
                "unexpected beta^{d} coefficient {stray:.3e}"
            )));
        }
    }
    Ok(LaurentQuartic { coeffs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::{build_bloch, non_bloch_y, PerturbationSpec};

    fn model() -> ModelParams {
        ModelParams::reference().with_perturbation(PerturbationSpec::beta(0.8))
    }

    #[test]
    fn laurent_form_reproduces_determinant_off_circle() {
        let p = model();
        let e = C64::new(0.3, -0.1);
        let q = characteristic_laurent(&p, Axis::Y, 0.7, e).unwrap();
        for beta in [C64::new(0.5, 0.2), C64::new(-1.7, 0.9), C64::new(0.1, -0.05)] {
            let direct = det(&(&non_bloch_y(&p, 0.7, beta) - &scale(&identity(4), e)));
            assert!((q.eval(beta) - direct).norm() < 1e-12 * (1.0 + direct.norm()));
        }
    }

    #[test]
    fn bloch_eigenvalue_has_a_unit_modulus_root() {
        let p = model();
        let (kx, ky) = (0.4, 1.9);
        let e = crate::linalg::eigenvalues(&build_bloch(&p, kx, ky)).unwrap()[0];
        let roots = characteristic_laurent(&p, Axis::Y, kx, e).unwrap().roots().unwrap();
        let target = C64::from_polar(1.0, ky);
        let best = roots.iter().map(|r| (r - target).norm()).fold(f64::INFINITY, f64::min);
        assert!(best < 1e-9, "{roots:?}");
    }

    #[test]
    fn vanishing_inter_cell_hopping_is_degenerate() {
        let p = ModelParams::new(0.2, 0.0, 0.1, 0.0);
        let q = characteristic_laurent(&p, Axis::Y, 0.0, C64::new(0.1, 0.0)).unwrap();
        assert!(matches!(q.roots(), Err(Error::DegeneratePolynomial(_))));
    }
}
