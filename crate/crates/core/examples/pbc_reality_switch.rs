//! Sweep the sublattice potential and locate where the periodic spectrum
//! turns fully real.

use nhssh::prelude::*;

fn main() -> Result<()> {
    let alphas: Vec<f64> = (0..=12).map(|i| 0.05 * i as f64).collect();
    let curve = pt_transition_scan(&ModelParams::reference(), &alphas, &KGrid::square(64))?;
    for s in &curve.samples {
        let r = &s.reports[0];
        println!("alpha {:.2}  max |Im E| {:.3e}  fraction real {:.4}", s.value, r.max_abs_im, r.fraction_real);
    }
    println!("transition at alpha ~ {:.4?}", curve.detected_transition);
    Ok(())
}
