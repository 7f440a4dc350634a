//! Inter-site terms instead of on-site potentials.

use nhssh::prelude::*;

fn main() -> Result<()> {
    let grid = KGrid::square(48);
    for (name, spec) in [
        ("xx+yy", PerturbationSpec::xx_plus_yy(0.5)),
        ("x0+xz", PerturbationSpec::x0_plus_xz(0.5)),
    ] {
        let p = ModelParams::reference().with_perturbation(spec.clone());
        let pbc = bloch_spectrum(&p, &grid)?;
        let obc = full_spectrum(&p, &LatticeSpec::open(12, 12))?;
        println!(
            "{name}: PBC max |Im E| {:.3e}, xyOBC max |Im E| {:.3e}, on-site? {}",
            pbc.max_abs_im(),
            obc.max_abs_im(),
            onsite_pattern(&spec, 1e-12).is_ok()
        );
    }
    Ok(())
}
