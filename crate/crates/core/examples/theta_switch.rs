//! Rotating between the two potentials closes the central line gap and
//! suppresses Im E under full OBC past the crossing point.

use std::f64::consts::PI;

use nhssh::prelude::*;

fn main() -> Result<()> {
    let thetas: Vec<f64> = (1..=9).map(|i| 0.05 * PI * i as f64).collect();
    let opts = ThetaScanOptions {
        grid: KGrid::square(48),
        obc_cells: 12,
        ..ThetaScanOptions::default()
    };
    let curve = theta_scan(&ModelParams::reference(), 0.8, &thetas, ThetaVariant::Zz0, &opts)?;
    for s in &curve.samples {
        println!(
            "theta {:.2}pi  gap {:.3e}  PBC max|Im| {:.3e}  xyOBC max|Im| {:.3e}",
            s.value / PI,
            s.line_gap.unwrap_or(f64::NAN),
            s.report(Scope::Pbc).map_or(f64::NAN, |r| r.max_abs_im),
            s.report(Scope::XyObc).map_or(f64::NAN, |r| r.max_abs_im),
        );
    }
    for v in [ThetaVariant::Zz0, ThetaVariant::Zzz] {
        let pat = onsite_pattern(&PerturbationSpec::theta_mix(0.8, PI / 4.0, v), 1e-12)?;
        println!("{v:?} at pi/4: {:?} -> {}", pat.values, pat.classification);
    }
    Ok(())
}
