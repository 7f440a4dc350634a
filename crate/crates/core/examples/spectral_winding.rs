//! Directional winding numbers with the beta potential: none along x,
//! nonzero along y.

use std::f64::consts::PI;

use nhssh::prelude::*;

fn main() -> Result<()> {
    let p = ModelParams::reference().with_perturbation(PerturbationSpec::beta(0.8));
    let e = C64::new(-1.25, 0.0);
    for (axis, k) in [(Axis::X, 0.4), (Axis::Y, 0.0), (Axis::Y, PI / 2.0)] {
        match spectral_winding(&p, axis, k, e, 512) {
            Ok(w) => println!("{axis} at k {k:.3}: w = {} (max step {:.3})", w.winding, w.max_step),
            Err(err) => println!("{axis} at k {k:.3}: {err}"),
        }
    }
    for b in band_windings(&p, Axis::Y, 0.0, e, 512)? {
        println!("bands {:?}: w = {}", b.bands, b.winding);
    }
    Ok(())
}
