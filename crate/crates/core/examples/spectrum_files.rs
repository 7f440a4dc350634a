//! Writes CSV, JSON and SVG for all four boundary conditions.

use nhssh::plot::{svg_scatter, Series};
use nhssh::prelude::*;

fn main() -> Result<()> {
    let p = ModelParams::reference().with_perturbation(PerturbationSpec::beta(0.8));
    let spectra = [
        bloch_spectrum(&p, &KGrid::square(32))?,
        ribbon_spectrum(&p, &RibbonSpec::new(Axis::X, 16, 32))?,
        ribbon_spectrum(&p, &RibbonSpec::new(Axis::Y, 16, 32))?,
        full_spectrum(&p, &LatticeSpec::open(12, 12))?,
    ];
    let dir = std::env::temp_dir().join("nhssh-example");
    std::fs::create_dir_all(&dir)?;
    std::fs::write(dir.join("spectrum.csv"), spectra_to_csv(spectra.iter().map(|s| (s, "beta0.8"))))?;
    std::fs::write(dir.join("pbc.json"), spectra[0].to_json()?)?;
    let series: Vec<Series> = spectra
        .iter()
        .map(|s| Series {
            label: s.meta.bc.as_str(),
            points: s.eigenvalues.clone(),
        })
        .collect();
    std::fs::write(dir.join("spectrum.svg"), svg_scatter("beta = 0.8", &series))?;
    println!("wrote {}", dir.display());
    Ok(())
}
