use std::f64::consts::FRAC_PI_4;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{pauli_kron, CMat, C64};

/// `coeff * (sigma^mu (x) sigma^nu)` on the internal basis (A, B, C, D).
///
/// The first factor acts on the (AB | CD) block index, the second inside each
/// block, so `sigma^z sigma^0 = diag(1, 1, -1, -1)` and
/// `sigma^0 sigma^z = diag(1, -1, 1, -1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "(u8, u8, f64)", into = "(u8, u8, f64)")]
pub struct PauliTerm {
    mu: u8,
    nu: u8,
    coeff: f64,
}

impl PauliTerm {
    pub fn new(mu: u8, nu: u8, coeff: f64) -> Result<Self> {
        if mu > 3 || nu > 3 {
            return Err(Error::InvalidTerm { mu, nu });
        }
        Ok(Self { mu, nu, coeff })
    }

    pub fn mu(&self) -> u8 {
        self.mu
    }

    pub fn nu(&self) -> u8 {
        self.nu
    }

    pub fn coeff(&self) -> f64 {
        self.coeff
    }

    pub fn matrix(&self) -> CMat {
        let mut m = pauli_kron(self.mu, self.nu);
        let c = C64::new(self.coeff, 0.0);
        for j in 0..4 {
            for i in 0..4 {
                m[(i, j)] *= c;
            }
        }
        m
    }

    fn scaled(self, s: f64) -> Self {
        Self {
            coeff: self.coeff * s,
            ..self
        }
    }
}

impl TryFrom<(u8, u8, f64)> for PauliTerm {
    type Error = Error;

    fn try_from((mu, nu, coeff): (u8, u8, f64)) -> Result<Self> {
        PauliTerm::new(mu, nu, coeff)
    }
}

impl From<PauliTerm> for (u8, u8, f64) {
    fn from(t: PauliTerm) -> Self {
        (t.mu, t.nu, t.coeff)
    }
}

/// Which second term accompanies `cos(theta) sigma^0 sigma^z` in the
/// interpolating potential.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ThetaVariant {
    /// `sin(theta) sigma^z sigma^0`: B and C vanish at theta = pi/4.
    Zz0,
    /// `sin(theta) sigma^z sigma^z`: C and D vanish at theta = pi/4.
    Zzz,
}

impl ThetaVariant {
    pub fn second_term(self) -> (u8, u8) {
        match self {
            ThetaVariant::Zz0 => (3, 0),
            ThetaVariant::Zzz => (3, 3),
        }
    }
}

impl std::str::FromStr for ThetaVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "zz0" => Ok(ThetaVariant::Zz0),
            "zzz" => Ok(ThetaVariant::Zzz),
            other => Err(Error::Config(format!(
                "unknown theta variant `{other}` (expected zz0 or zzz)"
            ))),
        }
    }
}

/// Ordered real linear combination of Pauli products. Realizes to the sum of
/// its terms; the empty spec is the zero matrix.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PerturbationSpec {
    pub terms: Vec<PauliTerm>,
}

impl PerturbationSpec {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_terms(terms: Vec<PauliTerm>) -> Self {
        Self { terms }
    }

    pub fn with(mut self, term: PauliTerm) -> Self {
        self.terms.push(term);
        self
    }

    /// `alpha sigma^0 sigma^z`, the potential that restores a real spectrum
    /// under periodic boundaries.
    pub fn alpha(alpha: f64) -> Self {
        Self::from_terms(vec![PauliTerm { mu: 0, nu: 3, coeff: alpha }])
    }

    /// `beta sigma^z sigma^0`, the potential that restores a real spectrum
    /// under full open boundaries.
    pub fn beta(beta: f64) -> Self {
        Self::from_terms(vec![PauliTerm { mu: 3, nu: 0, coeff: beta }])
    }

    /// `amp (cos(theta) sigma^0 sigma^z + sin(theta) X)` with `X` chosen by
    /// `variant`.
    pub fn theta_mix(amp: f64, theta: f64, variant: ThetaVariant) -> Self {
        let (mu, nu) = variant.second_term();
        Self::from_terms(vec![
            PauliTerm { mu: 0, nu: 3, coeff: amp * theta.cos() },
            PauliTerm { mu, nu, coeff: amp * theta.sin() },
        ])
    }

    /// The inter-site switch `sigma^x sigma^x + sigma^y sigma^y`, scaled.
    pub fn xx_plus_yy(amp: f64) -> Self {
        Self::from_terms(vec![
            PauliTerm { mu: 1, nu: 1, coeff: amp },
            PauliTerm { mu: 2, nu: 2, coeff: amp },
        ])
    }

    /// `sigma^x sigma^0 + sigma^x sigma^z`, scaled.
    pub fn x0_plus_xz(amp: f64) -> Self {
        Self::from_terms(vec![
            PauliTerm { mu: 1, nu: 0, coeff: amp },
            PauliTerm { mu: 1, nu: 3, coeff: amp },
        ])
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self::from_terms(self.terms.iter().map(|t| t.scaled(s)).collect())
    }

    /// Concatenation; realizes to the sum of both realizations.
    pub fn plus(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend_from_slice(&other.terms);
        Self { terms }
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn realize(&self) -> CMat {
        let mut m = CMat::zeros(4, 4);
        for t in &self.terms {
            let tm = t.matrix();
            for j in 0..4 {
                for i in 0..4 {
                    m[(i, j)] += tm[(i, j)];
                }
            }
        }
        m
    }

    /// Diagonal of the realization when it is diagonal to within `tol`.
    pub fn onsite_values(&self, tol: f64) -> Result<[f64; 4]> {
        let m = self.realize();
        let mut off = 0.0_f64;
        let mut imag = 0.0_f64;
        for j in 0..4 {
            for i in 0..4 {
                if i != j {
                    off = off.max(m[(i, j)].norm());
                } else {
                    imag = imag.max(m[(i, i)].im.abs());
                }
            }
        }
        if off > tol || imag > tol {
            return Err(Error::NotDiagonal(off.max(imag)));
        }
        Ok([m[(0, 0)].re, m[(1, 1)].re, m[(2, 2)].re, m[(3, 3)].re])
    }
}

/// Parses `0.35pi`, `pi/4`, `0.7` and friends into radians.
pub fn parse_angle(s: &str) -> Result<f64> {
    let t = s.trim().replace(' ', "");
    let bad = || Error::Config(format!("cannot parse angle `{s}`"));
    if let Some(rest) = t.strip_prefix("pi/") {
        let d: f64 = rest.parse().map_err(|_| bad())?;
        return Ok(std::f64::consts::PI / d);
    }
    if t == "pi" {
        return Ok(std::f64::consts::PI);
    }
    if let Some(head) = t.strip_suffix("pi") {
        let head = head.trim_end_matches('*');
        let f: f64 = head.parse().map_err(|_| bad())?;
        return Ok(f * std::f64::consts::PI);
    }
    t.parse().map_err(|_| bad())
}

/// theta at which both interpolating variants switch off one pair of sites.
pub const THETA_CRITICAL: f64 = FRAC_PI_4;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_diff;

    #[test]
    fn empty_spec_is_zero() {
        assert_eq!(crate::linalg::max_abs(&PerturbationSpec::new().realize()), 0.0);
    }

    #[test]
    fn out_of_range_index_is_rejected() {
        assert!(matches!(PauliTerm::new(4, 0, 1.0), Err(Error::InvalidTerm { mu: 4, nu: 0 })));
        assert!(PauliTerm::new(0, 7, 1.0).is_err());
        let parsed: std::result::Result<PerturbationSpec, _> = serde_json::from_str("[[0,5,1.0]]");
        assert!(parsed.is_err());
    }

    #[test]
    fn theta_mix_at_critical_angle_switches_off_pairs() {
        let a = 0.8 * std::f64::consts::SQRT_2;
        let v = PerturbationSpec::theta_mix(0.8, THETA_CRITICAL, ThetaVariant::Zz0)
            .onsite_values(1e-14)
            .unwrap();
        let expect = [a, 0.0, 0.0, -a];
        for k in 0..4 {
            assert!((v[k] - expect[k]).abs() < 1e-14, "{v:?}");
        }
        let v = PerturbationSpec::theta_mix(0.8, THETA_CRITICAL, ThetaVariant::Zzz)
            .onsite_values(1e-14)
            .unwrap();
        let expect = [a, -a, 0.0, 0.0];
        for k in 0..4 {
            assert!((v[k] - expect[k]).abs() < 1e-14, "{v:?}");
        }
    }

    #[test]
    fn inter_site_terms_are_not_diagonal() {
        let s = PerturbationSpec::xx_plus_yy(1.0);
        assert!(matches!(s.onsite_values(1e-12), Err(Error::NotDiagonal(_))));
        // sigma^x sigma^x + sigma^y sigma^y is Hermitian in sum
        let m = s.realize();
        assert!(max_abs_diff(&m, &crate::linalg::adjoint(&m)) < 1e-15);
    }

    #[test]
    fn angle_parsing() {
        let pi = std::f64::consts::PI;
        assert!((parse_angle("0.35pi").unwrap() - 0.35 * pi).abs() < 1e-15);
        assert!((parse_angle("pi/4").unwrap() - pi / 4.0).abs() < 1e-15);
        assert!((parse_angle("0.25*pi").unwrap() - pi / 4.0).abs() < 1e-15);
        assert_eq!(parse_angle("0.7").unwrap(), 0.7);
        assert!(parse_angle("abc").is_err());
    }
}
