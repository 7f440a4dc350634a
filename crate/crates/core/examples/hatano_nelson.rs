//! Equal intra- and inter-cell hoppings reduce the model to coupled
//! Hatano-Nelson chains.

use nhssh::prelude::*;

fn main() -> Result<()> {
    let p = hatano_nelson_preset(0.4, 0.2, PerturbationSpec::beta(0.8));
    let pbc = bloch_spectrum(&p, &KGrid::square(48))?;
    let obc = full_spectrum(&p, &LatticeSpec::open(12, 12))?;
    println!("PBC max |Im E| {:.3e}", pbc.max_abs_im());
    println!("xyOBC max |Im E| {:.3e}", obc.max_abs_im());
    for axis in [Axis::X, Axis::Y] {
        let r = skin_effect_indicator(&p, axis, &SkinOptions::default())?;
        println!("{axis} skin effect: {} (mean boundary weight {:.3})", r.present, r.mean_boundary_weight);
    }
    Ok(())
}
