use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::hamiltonian::PerturbationSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Site {
    A,
    B,
    C,
    D,
}

impl Site {
    pub const ALL: [Site; 4] = [Site::A, Site::B, Site::C, Site::D];
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PatternClass {
    /// Equal magnitudes alternating in sign around the ring A-B-C-D, invariant
    /// under the inversion A <-> C, B <-> D.
    BalancedQuadrupole,
    /// Two ring-adjacent pairs of equal sign.
    DipolePair,
    /// Exactly two sites without potential.
    VanishingPair([Site; 2]),
    Imbalanced,
}

impl fmt::Display for PatternClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PatternClass::BalancedQuadrupole => f.write_str("balanced-quadrupole"),
            PatternClass::DipolePair => f.write_str("dipole-pair"),
            PatternClass::VanishingPair([a, b]) => write!(f, "vanishing-pair({a},{b})"),
            PatternClass::Imbalanced => f.write_str("imbalanced"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OnsitePattern {
    pub values: [f64; 4],
    /// -1, 0 or +1 per site, zero below tolerance.
    pub signs: [i8; 4],
    pub classification: PatternClass,
}

/// Classifies the diagonal potential of `spec`. Fails with
/// [`crate::Error::NotDiagonal`] for inter-site terms.
pub fn onsite_pattern(spec: &PerturbationSpec, tol: f64) -> Result<OnsitePattern> {
    let values = spec.onsite_values(tol)?;
    let signs = values.map(|v| if v.abs() < tol { 0 } else if v > 0.0 { 1 } else { -1 });
    let zeros: Vec<Site> = Site::ALL.iter().zip(&signs).filter(|(_, &s)| s == 0).map(|(&s, _)| s).collect();
    let classification = if zeros.len() == 2 {
        PatternClass::VanishingPair([zeros[0], zeros[1]])
    } else if zeros.is_empty() {
        let [a, b, c, d] = values;
        let [sa, sb, sc, sd] = signs;
        let equal_mag = values.iter().all(|v| (v.abs() - a.abs()).abs() < tol);
        let inversion = (a - c).abs() < tol && (b - d).abs() < tol;
        if sa == sc && sb == sd && sa != sb && equal_mag && inversion {
            PatternClass::BalancedQuadrupole
        } else if (sa == sb && sc == sd && sa != sc) || (sb == sc && sd == sa && sb != sd) {
            PatternClass::DipolePair
        } else {
            PatternClass::Imbalanced
        }
    } else {
        PatternClass::Imbalanced
    };
    Ok(OnsitePattern {
        values,
        signs,
        classification,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::{PauliTerm, ThetaVariant};
    use crate::Error;

    #[test]
    fn named_patterns() {
        let tol = 1e-12;
        let c = |s: PerturbationSpec| onsite_pattern(&s, tol).unwrap().classification;
        assert_eq!(c(PerturbationSpec::alpha(0.8)), PatternClass::BalancedQuadrupole);
        assert_eq!(c(PerturbationSpec::beta(0.8)), PatternClass::DipolePair);
        assert_eq!(
            c(PerturbationSpec::from_terms(vec![PauliTerm::new(3, 3, 0.5).unwrap()])),
            PatternClass::DipolePair
        );
        assert_eq!(
            c(PerturbationSpec::alpha(0.8).plus(&PerturbationSpec::beta(0.3))),
            PatternClass::Imbalanced
        );
        assert_eq!(
            c(PerturbationSpec::theta_mix(0.8, 0.2, ThetaVariant::Zz0)),
            PatternClass::Imbalanced
        );
    }

    #[test]
    fn inter_site_terms_are_rejected() {
        assert!(matches!(
            onsite_pattern(&PerturbationSpec::xx_plus_yy(0.3), 1e-12),
            Err(Error::NotDiagonal(_))
        ));
    }

    #[test]
    fn display() {
        assert_eq!(PatternClass::VanishingPair([Site::B, Site::C]).to_string(), "vanishing-pair(B,C)");
    }
}
