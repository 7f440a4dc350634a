use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hamiltonian::BoundaryLabel;
use crate::linalg::C64;
use crate::spectra::{classify_modes, ComplexSpectrum, DEFAULT_EDGE_THRESHOLD};

/// Which eigenvalues a [`RealityReport`] covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Scope {
    #[serde(rename = "all")]
    All,
    #[serde(rename = "PBC")]
    Pbc,
    #[serde(rename = "xOBC")]
    XObc,
    #[serde(rename = "yOBC")]
    YObc,
    #[serde(rename = "xyOBC")]
    XyObc,
    #[serde(rename = "bulk-only")]
    BulkOnly,
    #[serde(rename = "edge-only")]
    EdgeOnly,
}

impl Scope {
    pub fn boundary(label: BoundaryLabel) -> Scope {
        match label {
            BoundaryLabel::Pbc => Scope::Pbc,
            BoundaryLabel::XObc => Scope::XObc,
            BoundaryLabel::YObc => Scope::YObc,
            BoundaryLabel::XyObc => Scope::XyObc,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Scope::All => "all",
            Scope::Pbc => "PBC",
            Scope::XObc => "xOBC",
            Scope::YObc => "yOBC",
            Scope::XyObc => "xyOBC",
            Scope::BulkOnly => "bulk-only",
            Scope::EdgeOnly => "edge-only",
        }
    }
}

impl fmt::Display for Scope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RealityReport {
    pub max_abs_im: f64,
    pub mean_abs_im: f64,
    /// Share of eigenvalues with `|Im E| < tol`.
    pub fraction_real: f64,
    pub tol: f64,
    pub scope: Scope,
    pub count: usize,
}

impl RealityReport {
    pub fn is_real(&self) -> bool {
        self.fraction_real == 1.0
    }

    pub fn from_values(values: &[C64], tol: f64, scope: Scope) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySpectrum(scope.to_string()));
        }
        let n = values.len() as f64;
        let ims: Vec<f64> = values.iter().map(|e| e.im.abs()).collect();
        let max_abs_im = ims.iter().cloned().fold(0.0, f64::max);
        let real = ims.iter().filter(|&&x| x < tol).count();
        let report = Self {
            max_abs_im,
            mean_abs_im: ims.iter().sum::<f64>() / n,
            fraction_real: real as f64 / n,
            tol,
            scope,
            count: values.len(),
        };
        assert_eq!(report.is_real(), report.max_abs_im < tol);
        Ok(report)
    }
}

/// Reality statistics over the part of `spectrum` selected by `scope`.
/// Boundary scopes must match the spectrum's own boundary condition; bulk
/// and edge scopes split at the default edge threshold.
pub fn reality_report(spectrum: &ComplexSpectrum, tol: f64, scope: Scope) -> Result<RealityReport> {
    reality_report_with_threshold(spectrum, tol, scope, DEFAULT_EDGE_THRESHOLD)
}

pub fn reality_report_with_threshold(
    spectrum: &ComplexSpectrum,
    tol: f64,
    scope: Scope,
    edge_threshold: f64,
) -> Result<RealityReport> {
    let values: Vec<C64> = match scope {
        Scope::All => spectrum.eigenvalues.clone(),
        Scope::Pbc | Scope::XObc | Scope::YObc | Scope::XyObc => {
            if Scope::boundary(spectrum.meta.bc) == scope {
                spectrum.eigenvalues.clone()
            } else {
                Vec::new()
            }
        }
        Scope::BulkOnly | Scope::EdgeOnly => {
            let part = classify_modes(spectrum, edge_threshold)?;
            let idx = if scope == Scope::BulkOnly { part.bulk } else { part.edge };
            idx.iter().map(|&i| spectrum.eigenvalues[i]).collect()
        }
    };
    RealityReport::from_values(&values, tol, scope)
}

/// `max_E min(|Re E|, |Im E|)`: zero exactly when every eigenvalue lies on
/// the real or the imaginary axis.
pub fn cross_deviation(values: &[C64]) -> f64 {
    values
        .iter()
        .map(|e| e.re.abs().min(e.im.abs()))
        .fold(0.0, f64::max)
}
