//! Diagnostics on top of [`crate::spectra`]: reality statistics, parameter
//! scans, line gaps, on-site patterns, spectral winding numbers, the
//! non-Bloch modular condition and skin-effect indicators.

mod gap;
mod gbz;
mod pattern;
mod reality;
mod scan;
mod skin;
mod winding;

pub use gap::{line_gap, refined_line_gap};
pub use gbz::{gbz_condition_check, gbz_condition_check_with_tol, gbz_survey, GbzCheck, GbzSurvey, GBZ_TOL};
pub use pattern::{onsite_pattern, OnsitePattern, PatternClass, Site};
pub use reality::{cross_deviation, reality_report, reality_report_with_threshold, RealityReport, Scope};
pub use scan::{
    finite_size_scaling, pt_transition_scan, theta_scan, ScanCurve, ScanSample, ThetaScanOptions, SCAN_CSV_HEADER,
    TRANSITION_RESOLUTION, TRANSITION_TOL,
};
pub use skin::{isolated_edge_modes, skin_effect_indicator, IsolatedEdgeReport, SkinOptions, SkinReport};
pub use winding::{band_windings, spectral_winding, BandWinding, WindingResult, INTEGRALITY_TOL, REFERENCE_CLEARANCE};
