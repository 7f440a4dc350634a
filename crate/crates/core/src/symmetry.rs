//! Symmetry operators of the Bloch Hamiltonian and numerical relation checks.
//!
//! An operator is a unitary `U`, a relation kind `f`, an integer momentum map
//! `M` and a sign `s`; the relation it asserts is
//!
//! ```text
//! U H(k) U^dagger = s * f(H(M k)),   f in {identity, transpose, conj, adjoint}
//! ```
//!
//! Antiunitary operators such as time reversal are plain matrices whose
//! antiunitarity lives in `f`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::grid::KGrid;
use crate::hamiltonian::{build_bloch, ModelParams};
use crate::linalg::{adjoint, conj, identity, matmul, max_abs_diff, pauli_kron, scale, transpose, CMat, C64};
use crate::spectra::ComplexSpectrum;
use crate::error::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// `U H(k) U^dagger = s H(Mk)`; with `s = -1` this is anticommutation.
    Unitary,
    /// `U H(k) U^dagger = s H^T(Mk)`.
    Transpose,
    /// `U H(k) U^dagger = s H^*(Mk)`.
    ComplexConj,
    /// `U H(k) U^dagger = s H^dagger(Mk)`.
    Adjoint,
}

impl Relation {
    fn bits(self) -> (bool, bool) {
        match self {
            Relation::Unitary => (false, false),
            Relation::Transpose => (true, false),
            Relation::ComplexConj => (false, true),
            Relation::Adjoint => (true, true),
        }
    }

    fn from_bits(t: bool, c: bool) -> Self {
        match (t, c) {
            (false, false) => Relation::Unitary,
            (true, false) => Relation::Transpose,
            (false, true) => Relation::ComplexConj,
            (true, true) => Relation::Adjoint,
        }
    }

    pub fn then(self, other: Relation) -> Relation {
        let (t1, c1) = self.bits();
        let (t2, c2) = other.bits();
        Relation::from_bits(t1 ^ t2, c1 ^ c2)
    }

    pub fn apply(self, h: &CMat) -> CMat {
        match self {
            Relation::Unitary => h.clone(),
            Relation::Transpose => transpose(h),
            Relation::ComplexConj => conj(h),
            Relation::Adjoint => adjoint(h),
        }
    }

    /// Whether moving a unitary through this relation conjugates it.
    fn conjugates(self) -> bool {
        matches!(self, Relation::Transpose | Relation::ComplexConj)
    }
}

/// Integer linear map on momenta, `(kx, ky) -> M (kx, ky)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MomentumMap(pub [[i32; 2]; 2]);

impl MomentumMap {
    pub const IDENTITY: MomentumMap = MomentumMap([[1, 0], [0, 1]]);
    pub const NEGATE: MomentumMap = MomentumMap([[-1, 0], [0, -1]]);

    pub fn apply(&self, kx: f64, ky: f64) -> (f64, f64) {
        let m = self.0;
        (
            m[0][0] as f64 * kx + m[0][1] as f64 * ky,
            m[1][0] as f64 * kx + m[1][1] as f64 * ky,
        )
    }

    /// `self` applied after `first`.
    pub fn after(&self, first: &MomentumMap) -> MomentumMap {
        let (a, b) = (self.0, first.0);
        let mut out = [[0; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        MomentumMap(out)
    }
}

#[derive(Debug, Clone)]
pub struct SymmetryOp {
    pub name: String,
    pub unitary: CMat,
    pub relation: Relation,
    pub momentum: MomentumMap,
    pub sign: f64,
}

impl SymmetryOp {
    /// Inversion `sigma^x sigma^0`: `P H(k) P^dagger = H(-k)`.
    pub fn inversion() -> Self {
        Self {
            name: "P".into(),
            unitary: pauli_kron(1, 0),
            relation: Relation::Unitary,
            momentum: MomentumMap::NEGATE,
            sign: 1.0,
        }
    }

    /// Time reversal with unit matrix: `H(k) = H^*(-k)`.
    pub fn time_reversal() -> Self {
        Self {
            name: "T".into(),
            unitary: pauli_kron(0, 0),
            relation: Relation::ComplexConj,
            momentum: MomentumMap::NEGATE,
            sign: 1.0,
        }
    }

    /// `sigma^x sigma^x`: `U H(kx, ky) U^dagger = H^T(kx, -ky)`.
    pub fn reciprocal_mirror_x() -> Self {
        Self {
            name: "RMx".into(),
            unitary: pauli_kron(1, 1),
            relation: Relation::Transpose,
            momentum: MomentumMap([[1, 0], [0, -1]]),
            sign: 1.0,
        }
    }

    /// `sigma^0 sigma^x`: `U H(kx, ky) U^dagger = H^T(-kx, ky)`.
    pub fn reciprocal_mirror_y() -> Self {
        Self {
            name: "RMy".into(),
            unitary: pauli_kron(0, 1),
            relation: Relation::Transpose,
            momentum: MomentumMap([[-1, 0], [0, 1]]),
            sign: 1.0,
        }
    }

    /// `sigma^0 (sigma^x - i sigma^y)/2 + sigma^x (sigma^x + i sigma^y)/2`:
    /// `U H(kx, ky) U^dagger = H(ky, -kx)`.
    pub fn rotation_c4() -> Self {
        let i = C64::new(0.0, 1.0);
        let lower = &pauli_kron(0, 1) - &scale(&pauli_kron(0, 2), i);
        let upper = &pauli_kron(1, 1) + &scale(&pauli_kron(1, 2), i);
        let unitary = scale(&(&lower + &upper), C64::new(0.5, 0.0));
        Self {
            name: "C4".into(),
            unitary,
            relation: Relation::Unitary,
            momentum: MomentumMap([[0, 1], [-1, 0]]),
            sign: 1.0,
        }
    }

    /// Sublattice `sigma^0 sigma^z`: `S H(k) S^dagger = -H(k)`.
    pub fn sublattice() -> Self {
        Self {
            name: "S".into(),
            unitary: pauli_kron(0, 3),
            relation: Relation::Unitary,
            momentum: MomentumMap::IDENTITY,
            sign: -1.0,
        }
    }

    pub fn builtins() -> Vec<SymmetryOp> {
        vec![
            Self::inversion(),
            Self::time_reversal(),
            Self::reciprocal_mirror_x(),
            Self::reciprocal_mirror_y(),
            Self::rotation_c4(),
            Self::sublattice(),
        ]
    }

    /// Resolves a name such as `P`, `RMx`, `RMyC4`, `PT` or `RMx*S` into a
    /// built-in operator or a left-to-right composite of built-ins.
    pub fn by_name(name: &str) -> Result<SymmetryOp> {
        let mut rest = name.trim();
        let mut ops: Vec<SymmetryOp> = Vec::new();
        while !rest.is_empty() {
            rest = rest.trim_start_matches(['*', '.', ' ']);
            let (op, len) = if rest.starts_with("RMx") || rest.starts_with("RM_x") {
                (Self::reciprocal_mirror_x(), if rest.starts_with("RM_x") { 4 } else { 3 })
            } else if rest.starts_with("RMy") || rest.starts_with("RM_y") {
                (Self::reciprocal_mirror_y(), if rest.starts_with("RM_y") { 4 } else { 3 })
            } else if rest.starts_with("C4") {
                (Self::rotation_c4(), 2)
            } else if rest.starts_with('P') {
                (Self::inversion(), 1)
            } else if rest.starts_with('T') {
                (Self::time_reversal(), 1)
            } else if rest.starts_with('S') {
                (Self::sublattice(), 1)
            } else if rest.is_empty() {
                break;
            } else {
                return Err(Error::Config(format!("unknown symmetry `{name}`")));
            };
            ops.push(op);
            rest = &rest[len..];
        }
        let mut it = ops.into_iter();
        let first = it
            .next()
            .ok_or_else(|| Error::Config(format!("empty symmetry name `{name}`")))?;
        Ok(it.fold(first, |acc, op| compose(&acc, &op)))
    }

    /// Largest entry of `U U^dagger - 1`.
    pub fn unitarity_defect(&self) -> f64 {
        let n = self.unitary.nrows();
        max_abs_diff(&matmul(&self.unitary, &adjoint(&self.unitary)), &identity(n))
    }

    /// `max |U H(k) U^dagger - s f(H(Mk))|` at one momentum.
    pub fn residual_at(&self, params: &ModelParams, kx: f64, ky: f64) -> f64 {
        let lhs = matmul(&matmul(&self.unitary, &build_bloch(params, kx, ky)), &adjoint(&self.unitary));
        let (qx, qy) = self.momentum.apply(kx, ky);
        let rhs = scale(
            &self.relation.apply(&build_bloch(params, qx, qy)),
            C64::new(self.sign, 0.0),
        );
        max_abs_diff(&lhs, &rhs)
    }
}

/// Composite obtained by substituting `second`'s relation into `first`'s:
/// `U = W U_1`, `f = f_1 f_2`, `M = M_2 M_1`, `s = s_1 s_2`, where `W = U_2`,
/// conjugated when `f_1` is a transpose or complex conjugation.
pub fn compose(first: &SymmetryOp, second: &SymmetryOp) -> SymmetryOp {
    let w = if first.relation.conjugates() {
        conj(&second.unitary)
    } else {
        second.unitary.clone()
    };
    SymmetryOp {
        name: format!("{}{}", first.name, second.name),
        unitary: matmul(&w, &first.unitary),
        relation: first.relation.then(second.relation),
        momentum: second.momentum.after(&first.momentum),
        sign: first.sign * second.sign,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Preserved,
    Broken,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SymmetryReport {
    pub op_name: String,
    pub residual: f64,
    pub verdict: Verdict,
    pub grid: String,
}

pub fn check_symmetry(params: &ModelParams, op: &SymmetryOp, grid: &KGrid) -> Result<SymmetryReport> {
    check_symmetry_with_tol(params, op, grid, DEFAULT_TOL)
}

pub fn check_symmetry_with_tol(
    params: &ModelParams,
    op: &SymmetryOp,
    grid: &KGrid,
    tol: f64,
) -> Result<SymmetryReport> {
    grid.validate()?;
    let residual = grid
        .points()
        .into_iter()
        .map(|(kx, ky)| op.residual_at(params, kx, ky))
        .fold(0.0, f64::max);
    Ok(SymmetryReport {
        op_name: op.name.clone(),
        residual,
        verdict: if residual < tol { Verdict::Preserved } else { Verdict::Broken },
        grid: grid.describe(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PtPhase {
    Symmetric,
    Broken,
    Mixed,
}

impl fmt::Display for PtPhase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PtPhase::Symmetric => "symmetric",
            PtPhase::Broken => "broken",
            PtPhase::Mixed => "mixed",
        })
    }
}

/// Symmetric when every `|Im E| < tol`; broken when every band (the n-th
/// eigenvalue of each momentum block in (Re, Im) order) holds at least one
/// complex eigenvalue; mixed otherwise. Without band structure the spectrum
/// is one band.
pub fn classify_pt_phase(spectrum: &ComplexSpectrum, tol: f64) -> Result<PtPhase> {
    if spectrum.is_empty() {
        return Err(Error::EmptySpectrum("pt phase".into()));
    }
    let complex = |e: &C64| e.im.abs() >= tol;
    if !spectrum.eigenvalues.iter().any(complex) {
        return Ok(PtPhase::Symmetric);
    }
    let bands = match spectrum.block {
        Some(b) if b > 0 && spectrum.len().is_multiple_of(b) => spectrum.bands()?,
        _ => vec![spectrum.eigenvalues.clone()],
    };
    if bands.iter().all(|band| band.iter().any(complex)) {
        if bands.len() == 1 && !spectrum.eigenvalues.iter().all(complex) {
            return Ok(PtPhase::Mixed);
        }
        Ok(PtPhase::Broken)
    } else {
        Ok(PtPhase::Mixed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::PerturbationSpec;

    fn verdicts(params: &ModelParams, names: &[&str]) -> Vec<(String, Verdict)> {
        let grid = KGrid::square(12);
        names
            .iter()
            .map(|n| {
                let op = SymmetryOp::by_name(n).unwrap();
                (n.to_string(), check_symmetry(params, &op, &grid).unwrap().verdict)
            })
            .collect()
    }

    #[test]
    fn builtins_are_unitary() {
        for op in SymmetryOp::builtins() {
            assert!(op.unitarity_defect() < 1e-12, "{}", op.name);
        }
    }

    #[test]
    fn unperturbed_model_has_all_six() {
        let p = ModelParams::reference();
        for op in SymmetryOp::builtins() {
            let r = check_symmetry(&p, &op, &KGrid::square(32)).unwrap();
            assert!(r.residual < 1e-10, "{} {}", op.name, r.residual);
        }
    }

    #[test]
    fn alpha_potential_symmetries() {
        let p = ModelParams::reference().with_perturbation(PerturbationSpec::alpha(0.4));
        for (n, v) in verdicts(&p, &["P", "T", "RMxS", "RMyS", "RMxC4", "RMyC4", "PT"]) {
            assert_eq!(v, Verdict::Preserved, "{n}");
        }
        for (n, v) in verdicts(&p, &["S", "RMx", "RMy", "C4"]) {
            assert_eq!(v, Verdict::Broken, "{n}");
        }
    }

    #[test]
    fn beta_potential_symmetries() {
        let p = ModelParams::reference().with_perturbation(PerturbationSpec::beta(0.4));
        for (n, v) in verdicts(&p, &["RMy", "T", "RMxS", "RMyT"]) {
            assert_eq!(v, Verdict::Preserved, "{n}");
        }
        for (n, v) in verdicts(&p, &["P", "S", "RMx", "C4", "RMyS", "PT"]) {
            assert_eq!(v, Verdict::Broken, "{n}");
        }
    }

    #[test]
    fn sublattice_squared_is_identity_relation() {
        let ss = compose(&SymmetryOp::sublattice(), &SymmetryOp::sublattice());
        assert_eq!(ss.relation, Relation::Unitary);
        assert_eq!(ss.sign, 1.0);
        assert_eq!(ss.momentum, MomentumMap::IDENTITY);
        assert!(max_abs_diff(&ss.unitary, &identity(4)) < 1e-15);
        let p = ModelParams::reference().with_perturbation(PerturbationSpec::theta_mix(
            0.8,
            0.3,
            crate::hamiltonian::ThetaVariant::Zz0,
        ));
        let r = check_symmetry(&p, &ss, &KGrid::square(8)).unwrap();
        assert_eq!(r.residual, 0.0);
    }

    #[test]
    fn name_parsing() {
        assert_eq!(SymmetryOp::by_name("RMx*S").unwrap().name, "RMxS");
        assert_eq!(SymmetryOp::by_name("RM_yC4").unwrap().name, "RMyC4");
        assert_eq!(SymmetryOp::by_name("PT").unwrap().relation, Relation::ComplexConj);
        assert!(SymmetryOp::by_name("Q").is_err());
        assert!(SymmetryOp::by_name("").is_err());
    }
}
