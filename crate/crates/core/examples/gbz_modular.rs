//! Long y-ribbon bulk energies and the middle pair of characteristic roots.

use std::f64::consts::PI;

use nhssh::prelude::*;

fn main() -> Result<()> {
    let p = ModelParams::reference().with_perturbation(PerturbationSpec::beta(0.8));
    let opts = CertifiedOptions::default();
    for kx in [0.0, PI / 2.0, PI] {
        let s = gbz_survey(&p, kx, 120, &opts, 1e-2)?;
        println!(
            "kx {kx:.3}: {}/{} bulk states satisfy |b2| = |b3| (median residual {:.1e}), gauges {:.3?}",
            s.satisfied, s.bulk, s.median_residual, s.gauge_radii
        );
    }
    // On the Hermitian Bloch spectrum the middle roots sit on the unit circle.
    let h = ModelParams::hermitian(0.2, 0.4);
    let e = nhssh::linalg::eigenvalues(&build_bloch(&h, 0.3, 1.1))?[0];
    let c = gbz_condition_check(&h, 0.3, C64::new(e.re, 0.0))?;
    println!("Hermitian root moduli at E = {:.4}: {:.6?}", e.re, c.root_moduli);
    Ok(())
}
