use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::gap::line_gap;
use super::reality::{reality_report, RealityReport, Scope};
use crate::error::{Error, Result};
use crate::grid::KGrid;
use crate::hamiltonian::{LatticeSpec, ModelParams, PerturbationSpec, ThetaVariant};
use crate::spectra::{bloch_spectrum, full_spectrum_with, SpectrumOptions};

pub const SCAN_CSV_HEADER: &str = "param,value,max_abs_im,fraction_real,line_gap";

/// PBC reality threshold used by the transition search.
pub const TRANSITION_TOL: f64 = 1e-8;
pub const TRANSITION_RESOLUTION: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanSample {
    pub value: f64,
    pub reports: Vec<RealityReport>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub line_gap: Option<f64>,
}

impl ScanSample {
    pub fn report(&self, scope: Scope) -> Option<&RealityReport> {
        self.reports.iter().find(|r| r.scope == scope)
    }
}

/// One sweep: samples ordered by parameter value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanCurve {
    pub parameter: String,
    pub samples: Vec<ScanSample>,
    pub detected_transition: Option<f64>,
    /// Least-squares slope of `ln(max |Im E|)` against the parameter, for
    /// size scans.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub log_slope: Option<f64>,
}

impl ScanCurve {
    /// One row per (sample, report); the param column reads `name@scope`
    /// when a sample carries several reports.
    pub fn to_csv(&self) -> String {
        let mut out = format!("{SCAN_CSV_HEADER}\n");
        let num = |x: f64| format!("{x:.16e}");
        for s in &self.samples {
            let gap = s.line_gap.map(num).unwrap_or_default();
            if s.reports.is_empty() {
                let _ = writeln!(out, "{},{},,,{}", self.parameter, num(s.value), gap);
            }
            for r in &s.reports {
                let name = if s.reports.len() > 1 {
                    format!("{}@{}", self.parameter, r.scope)
                } else {
                    self.parameter.clone()
                };
                let _ = writeln!(
                    out,
                    "{},{},{},{},{}",
                    name,
                    num(s.value),
                    num(r.max_abs_im),
                    num(r.fraction_real),
                    gap
                );
            }
        }
        out
    }

    pub fn values(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.value).collect()
    }
}

fn check_increasing(values: &[f64], what: &str) -> Result<()> {
    if values.is_empty() {
        return Err(Error::InvalidScan(format!("{what}: no samples")));
    }
    if values.windows(2).any(|w| w[1] <= w[0]) || values.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidScan(format!("{what}: samples must be finite and increasing")));
    }
    Ok(())
}

fn with_alpha(base: &ModelParams, alpha: f64) -> ModelParams {
    let pert = base.perturbation.plus(&PerturbationSpec::alpha(alpha));
    base.clone().with_perturbation(pert)
}

fn pbc_report(params: &ModelParams, grid: &KGrid) -> Result<RealityReport> {
    reality_report(&bloch_spectrum(params, grid)?, TRANSITION_TOL, Scope::Pbc)
}

/// PBC reality along `alphas` (the coefficient of an added `sigma^0 sigma^z`
/// term). The transition is the smallest alpha with a fully real spectrum,
/// refined by bisection against the preceding complex sample.
pub fn pt_transition_scan(base: &ModelParams, alphas: &[f64], grid: &KGrid) -> Result<ScanCurve> {
    check_increasing(alphas, "alpha scan")?;
    grid.validate()?;
    let samples: Vec<ScanSample> = alphas
        .par_iter()
        .map(|&a| {
            Ok(ScanSample {
                value: a,
                reports: vec![pbc_report(&with_alpha(base, a), grid)?],
                line_gap: None,
            })
        })
        .collect::<Result<_>>()?;
    let first_real = samples.iter().position(|s| s.reports[0].is_real());
    let detected_transition = match first_real {
        None => None,
        Some(0) => Some(samples[0].value),
        Some(i) => {
            let (mut lo, mut hi) = (samples[i - 1].value, samples[i].value);
            while hi - lo > TRANSITION_RESOLUTION {
                let mid = 0.5 * (lo + hi);
                if pbc_report(&with_alpha(base, mid), grid)?.is_real() {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            Some(hi)
        }
    };
    Ok(ScanCurve {
        parameter: "alpha".into(),
        samples,
        detected_transition,
        log_slope: None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThetaScanOptions {
    pub grid: KGrid,
    /// Linear size of the square open lattice.
    pub obc_cells: usize,
    pub tol: f64,
}

impl Default for ThetaScanOptions {
    fn default() -> Self {
        Self {
            grid: KGrid::square(64),
            obc_cells: 16,
            tol: TRANSITION_TOL,
        }
    }
}

/// Sweep of `amplitude (cos(theta) sigma^0 sigma^z + sin(theta) X)` added to
/// `base`: PBC and xyOBC reality plus the central line gap per theta. The
/// reported transition is the theta with the smallest line gap.
pub fn theta_scan(
    base: &ModelParams,
    amplitude: f64,
    thetas: &[f64],
    variant: ThetaVariant,
    opts: &ThetaScanOptions,
) -> Result<ScanCurve> {
    check_increasing(thetas, "theta scan")?;
    opts.grid.validate()?;
    let lattice = LatticeSpec::open(opts.obc_cells, opts.obc_cells);
    let samples: Vec<ScanSample> = thetas
        .par_iter()
        .map(|&t| {
            let pert = base.perturbation.plus(&PerturbationSpec::theta_mix(amplitude, t, variant));
            let p = base.clone().with_perturbation(pert);
            let bloch = bloch_spectrum(&p, &opts.grid)?;
            let obc = full_spectrum_with(&p, &lattice, &SpectrumOptions::eigenvalues_only())?;
            Ok(ScanSample {
                value: t,
                reports: vec![
                    reality_report(&bloch, opts.tol, Scope::Pbc)?,
                    reality_report(&obc, opts.tol, Scope::XyObc)?,
                ],
                line_gap: Some(line_gap(&bloch)?),
            })
        })
        .collect::<Result<_>>()?;
    let detected_transition = samples
        .iter()
        .min_by(|a, b| a.line_gap.unwrap().total_cmp(&b.line_gap.unwrap()))
        .map(|s| s.value);
    Ok(ScanCurve {
        parameter: "theta".into(),
        samples,
        detected_transition,
        log_slope: None,
    })
}

/// xyOBC reality at each `(nx, ny)`; at least three strictly growing sizes.
/// With `scope = BulkOnly` edge-classified states are excluded. The sample
/// value is `sqrt(nx * ny)`.
pub fn finite_size_scaling(params: &ModelParams, sizes: &[(usize, usize)], scope: Scope) -> Result<ScanCurve> {
    if sizes.len() < 3 {
        return Err(Error::InvalidScan("finite-size scaling needs at least 3 sizes".into()));
    }
    let linear: Vec<f64> = sizes.iter().map(|&(x, y)| ((x * y) as f64).sqrt()).collect();
    check_increasing(&linear, "size scan")?;
    if !matches!(scope, Scope::XyObc | Scope::BulkOnly | Scope::EdgeOnly | Scope::All) {
        return Err(Error::InvalidScan(format!("scope {scope} does not apply to open lattices")));
    }
    let opts = if scope == Scope::XyObc || scope == Scope::All {
        SpectrumOptions::eigenvalues_only()
    } else {
        SpectrumOptions::default()
    };
    let samples: Vec<ScanSample> = sizes
        .par_iter()
        .zip(&linear)
        .map(|(&(nx, ny), &l)| {
            let s = full_spectrum_with(params, &LatticeSpec::open(nx, ny), &opts)?;
            Ok(ScanSample {
                value: l,
                reports: vec![reality_report(&s, TRANSITION_TOL, scope)?],
                line_gap: None,
            })
        })
        .collect::<Result<_>>()?;
    let pts: Vec<(f64, f64)> = samples
        .iter()
        .map(|s| (s.value, s.reports[0].max_abs_im.max(f64::MIN_POSITIVE).ln()))
        .collect();
    Ok(ScanCurve {
        parameter: "size".into(),
        samples,
        detected_transition: None,
        log_slope: Some(least_squares_slope(&pts)),
    })
}

pub(crate) fn least_squares_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_unordered_samples() {
        let p = ModelParams::reference();
        assert!(matches!(
            pt_transition_scan(&p, &[0.3, 0.1], &KGrid::square(4)),
            Err(Error::InvalidScan(_))
        ));
        assert!(finite_size_scaling(&p, &[(2, 2), (3, 3)], Scope::XyObc).is_err());
        assert!(finite_size_scaling(&p, &[(2, 2), (4, 4), (3, 3)], Scope::XyObc).is_err());
    }

    #[test]
    fn slope_of_a_line() {
        let pts = [(1.0, 3.0), (2.0, 1.0), (3.0, -1.0)];
        assert!((least_squares_slope(&pts) + 2.0).abs() < 1e-14);
    }

    #[test]
    fn coarse_alpha_scan_brackets_the_transition() {
        let curve = pt_transition_scan(&ModelParams::reference(), &[0.0, 0.2, 0.4, 0.6], &KGrid::square(16)).unwrap();
        let t = curve.detected_transition.unwrap();
        assert!(t > 0.2 && t <= 0.4, "{t}");
        let csv = curve.to_csv();
        assert!(csv.starts_with(SCAN_CSV_HEADER));
        assert_eq!(csv.lines().count(), 5);
    }
}
