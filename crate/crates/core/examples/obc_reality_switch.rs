//! With the beta potential the spectrum stays complex under PBC while the
//! open lattice becomes nearly real, and more so as it grows.

use nhssh::prelude::*;

fn main() -> Result<()> {
    let p = ModelParams::reference().with_perturbation(PerturbationSpec::beta(0.8));
    let pbc = bloch_spectrum(&p, &KGrid::square(64))?;
    println!("PBC max |Im E| {:.3e}", pbc.max_abs_im());

    let obc = full_spectrum(&p, &LatticeSpec::open(16, 16))?;
    let part = classify_modes(&obc, DEFAULT_EDGE_THRESHOLD)?;
    println!(
        "16x16 xyOBC max |Im E| {:.3e} ({} edge, {} bulk states)",
        obc.max_abs_im(),
        part.edge_count(),
        part.bulk_count()
    );

    let curve = finite_size_scaling(&p, &[(8, 8), (12, 12), (16, 16), (20, 20)], Scope::XyObc)?;
    for s in &curve.samples {
        println!("L = {:>4.1}  max |Im E| {:.3e}", s.value, s.reports[0].max_abs_im);
    }
    if let Some(k) = curve.log_slope {
        println!("log-log slope {k:.3}");
    }
    Ok(())
}
