//! Ribbon spectra against the periodic reference along each open axis.

use nhssh::prelude::*;

fn main() -> Result<()> {
    let p = ModelParams::reference().with_perturbation(PerturbationSpec::beta(0.8));
    let opts = SkinOptions::default();
    for axis in [Axis::X, Axis::Y] {
        let r = skin_effect_indicator(&p, axis, &opts)?;
        println!(
            "open {axis}: present {}, displacement {:.3e}, mean boundary weight {:.3} (baseline {:.3})",
            r.present, r.displacement, r.mean_boundary_weight, r.baseline
        );
    }
    let ribbon = RibbonSpec::new(Axis::X, 40, 16);
    let iso = isolated_edge_modes(&p, &ribbon, 0.02, 512)?;
    println!("x-ribbon: {} edge states, {} off the periodic spectrum", iso.edge_states, iso.isolated);
    Ok(())
}
