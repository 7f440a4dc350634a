//! Bloch spectrum at the reference hoppings, with and without the
//! sublattice potential that makes it real.

use nhssh::prelude::*;

fn main() -> Result<()> {
    let grid = KGrid::square(48);
    for alpha in [0.0, 0.6] {
        let p = ModelParams::reference().with_perturbation(PerturbationSpec::alpha(alpha));
        let s = bloch_spectrum(&p, &grid)?;
        let r = reality_report(&s, 1e-8, Scope::All)?;
        println!(
            "alpha {alpha:.1}: {} eigenvalues, max |Im E| {:.3e}, fraction real {:.3}, phase {:?}",
            s.len(),
            r.max_abs_im,
            r.fraction_real,
            classify_pt_phase(&s, 1e-8)
        );
    }
    Ok(())
}
