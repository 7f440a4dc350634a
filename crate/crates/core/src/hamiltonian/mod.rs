//! Bloch and real-space Hamiltonians of the 2D non-Hermitian SSH lattice.
//!
//! The unit cell carries four internal states A, B, C, D (indices 0..4).
//! Hoppings are listed once, in [`BOND_TABLE`], as the entries of the forward
//! hopping matrix `h(k)`; the Hamiltonian is
//!
//! ```text
//! H(k) = h(k; gamma_in, gamma_ex) + h(k; gamma'_in, gamma'_ex)^dagger + V
//! ```
//!
//! with `V` the realized [`PerturbationSpec`]. An entry carrying the phase
//! `e^{i k . d}` is a hop between cell `r` (row state) and cell `r + d`
//! (column state); the same table therefore drives the Bloch matrix, the
//! real-space matrix and the non-Bloch continuation `e^{ik} -> z`.

mod characteristic;
mod lattice;
mod pauli;
mod real_space;

pub use characteristic::{characteristic_laurent, LaurentQuartic};
pub use lattice::{Axis, BoundaryCondition, BoundaryLabel, LatticeSpec};
pub use pauli::{parse_angle, PauliTerm, PerturbationSpec, ThetaVariant, THETA_CRITICAL};
pub use real_space::{build_real_space, build_ribbon, real_space_triplets, RibbonGeometry};

use serde::{Deserialize, Serialize};

use crate::linalg::{CMat, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum BondKind {
    Intra,
    Inter,
}

/// Entries of `h(k)`: `(row, col, dx, dy, kind)`. Row order is A, B, C, D.
pub(crate) const BOND_TABLE: [(usize, usize, i32, i32, BondKind); 8] = [
    (0, 1, 0, 0, BondKind::Intra),
    (0, 3, -1, 0, BondKind::Inter),
    (1, 0, 0, 1, BondKind::Inter),
    (1, 2, 0, 0, BondKind::Intra),
    (2, 1, 1, 0, BondKind::Inter),
    (2, 3, 0, 0, BondKind::Intra),
    (3, 0, 0, 0, BondKind::Intra),
    (3, 2, 0, -1, BondKind::Inter),
];

/// Hopping amplitudes and on-site/intra-cell perturbation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelParams {
    pub gamma_in: f64,
    pub gamma_ex: f64,
    /// Amplitude entering through `h^dagger` on intra-cell bonds.
    pub gamma_in_p: f64,
    /// Amplitude entering through `h^dagger` on inter-cell bonds.
    pub gamma_ex_p: f64,
    #[serde(default)]
    pub perturbation: PerturbationSpec,
}

impl ModelParams {
    pub fn new(gamma_in: f64, gamma_ex: f64, gamma_in_p: f64, gamma_ex_p: f64) -> Self {
        Self {
            gamma_in,
            gamma_ex,
            gamma_in_p,
            gamma_ex_p,
            perturbation: PerturbationSpec::new(),
        }
    }

    /// gamma_in = 0.2, gamma_ex = 0.4 with the reverse amplitudes at half
    /// strength: the reference asymmetric point for every sweep in this crate.
    pub fn reference() -> Self {
        Self::new(0.2, 0.4, 0.1, 0.2)
    }

    /// Reciprocal hoppings; Hermitian whenever the perturbation is.
    pub fn hermitian(gamma_in: f64, gamma_ex: f64) -> Self {
        Self::new(gamma_in, gamma_ex, gamma_in, gamma_ex)
    }

    pub fn with_perturbation(mut self, perturbation: PerturbationSpec) -> Self {
        self.perturbation = perturbation;
        self
    }

    pub fn is_reciprocal(&self) -> bool {
        self.gamma_in == self.gamma_in_p && self.gamma_ex == self.gamma_ex_p
    }

    pub(crate) fn forward(&self, kind: BondKind) -> f64 {
        match kind {
            BondKind::Intra => self.gamma_in,
            BondKind::Inter => self.gamma_ex,
        }
    }

    pub(crate) fn reverse(&self, kind: BondKind) -> f64 {
        match kind {
            BondKind::Intra => self.gamma_in_p,
            BondKind::Inter => self.gamma_ex_p,
        }
    }

    /// Every hop as `(row, col, dx, dy, amplitude)`: the forward table plus
    /// the transposed reverse table with `d -> -d`.
    pub fn bonds(&self) -> Vec<(usize, usize, i32, i32, f64)> {
        let mut out = Vec::with_capacity(2 * BOND_TABLE.len());
        for &(r, c, dx, dy, kind) in &BOND_TABLE {
            out.push((r, c, dx, dy, self.forward(kind)));
        }
        for &(r, c, dx, dy, kind) in &BOND_TABLE {
            out.push((c, r, -dx, -dy, self.reverse(kind)));
        }
        out
    }
}

/// Hatano-Nelson limit: equal intra- and inter-cell amplitudes in each
/// direction.
pub fn hatano_nelson_preset(gamma: f64, gamma_p: f64, perturbation: PerturbationSpec) -> ModelParams {
    ModelParams::new(gamma, gamma, gamma_p, gamma_p).with_perturbation(perturbation)
}

/// `H(k)` with the phases `e^{ik_x} -> zx`, `e^{ik_y} -> zy` continued off the
/// unit circle. The reverse part is `h(1/zx, 1/zy; gamma')^T`, which equals
/// `h(k; gamma')^dagger` on the unit circle because all amplitudes are real.
pub fn continued_hamiltonian(params: &ModelParams, zx: C64, zy: C64) -> CMat {
    let mut h = params.perturbation.realize();
    let zxi = zx.inv();
    let zyi = zy.inv();
    for &(r, c, dx, dy, kind) in &BOND_TABLE {
        let fwd = zx.powi(dx) * zy.powi(dy) * params.forward(kind);
        let rev = zxi.powi(dx) * zyi.powi(dy) * params.reverse(kind);
        h[(r, c)] += fwd;
        h[(c, r)] += rev;
    }
    h
}

/// The 4x4 Bloch Hamiltonian at momentum `(kx, ky)` (radians, period 2 pi).
pub fn build_bloch(params: &ModelParams, kx: f64, ky: f64) -> CMat {
    continued_hamiltonian(params, C64::from_polar(1.0, kx), C64::from_polar(1.0, ky))
}

/// `H(k_x, beta_y)`: the non-Bloch Hamiltonian with `e^{ik_y} -> beta_y`.
pub fn non_bloch_y(params: &ModelParams, kx: f64, beta_y: C64) -> CMat {
    continued_hamiltonian(params, C64::from_polar(1.0, kx), beta_y)
}

/// `H(beta_x, k_y)`: the non-Bloch Hamiltonian with `e^{ik_x} -> beta_x`.
pub fn non_bloch_x(params: &ModelParams, beta_x: C64, ky: f64) -> CMat {
    continued_hamiltonian(params, beta_x, C64::from_polar(1.0, ky))
}
