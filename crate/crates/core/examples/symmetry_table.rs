//! Which relations survive each on-site potential.

use nhssh::prelude::*;

fn main() -> Result<()> {
    let grid = KGrid::square(32);
    let names = ["P", "T", "RMx", "RMy", "C4", "S", "RMxS", "RMyS", "RMxC4", "RMyC4", "PT"];
    let models = [
        ("none", PerturbationSpec::new()),
        ("alpha=0.4", PerturbationSpec::alpha(0.4)),
        ("beta=0.4", PerturbationSpec::beta(0.4)),
    ];
    print!("{:<10}", "");
    for n in names {
        print!("{n:>7}");
    }
    println!();
    for (label, spec) in models {
        let p = ModelParams::reference().with_perturbation(spec);
        print!("{label:<10}");
        for n in names {
            let r = check_symmetry(&p, &SymmetryOp::by_name(n)?, &grid)?;
            print!("{:>7}", if r.verdict == Verdict::Preserved { "yes" } else { "." });
        }
        println!();
    }
    Ok(())
}
