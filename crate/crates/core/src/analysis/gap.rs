use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::grid::KGrid;
use crate::hamiltonian::{build_bloch, ModelParams};
use crate::linalg::{eigenvalues, C64};
use crate::spectra::{bloch_spectrum, ComplexSpectrum};

fn central_separation(block: &[C64]) -> f64 {
    let mut b = block.to_vec();
    b.sort_by(|x, y| x.re.total_cmp(&y.re));
    (b[1] - b[2]).norm()
}

/// Minimum over momentum blocks of `|E_2 - E_3|`, the two central eigenvalues
/// after sorting each block by real part.
pub fn line_gap(spectrum: &ComplexSpectrum) -> Result<f64> {
    if spectrum.block != Some(4) {
        return Err(Error::MalformedGrouping(format!(
            "line gap needs blocks of 4 eigenvalues, got {:?}",
            spectrum.block
        )));
    }
    Ok(spectrum
        .blocks()?
        .into_iter()
        .map(central_separation)
        .fold(f64::INFINITY, f64::min))
}

fn gap_at(params: &ModelParams, kx: f64, ky: f64) -> Result<f64> {
    Ok(central_separation(&eigenvalues(&build_bloch(params, kx, ky))?))
}

/// [`line_gap`] on `grid`, followed by a compass search in momentum space
/// from the `starts` best grid points. Catches closings at isolated momenta
/// that fall between grid points.
pub fn refined_line_gap(params: &ModelParams, grid: &KGrid, starts: usize) -> Result<f64> {
    let spectrum = bloch_spectrum(params, grid)?;
    let blocks = spectrum.blocks()?;
    let points = grid.points();
    let mut order: Vec<(f64, usize)> = blocks
        .iter()
        .enumerate()
        .map(|(i, b)| (central_separation(b), i))
        .collect();
    order.sort_by(|a, b| a.0.total_cmp(&b.0));
    let h0 = TAU / grid.nkx.max(grid.nky) as f64;
    let mut best = order[0].0;
    for &(g0, i) in order.iter().take(starts.max(1)) {
        let (mut kx, mut ky) = points[i];
        let mut g = g0;
        let mut h = h0;
        for _ in 0..400 {
            if h < 1e-12 {
                break;
            }
            let mut moved = false;
            for (dx, dy) in [(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0), (1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
                let (qx, qy) = (kx + dx * h, ky + dy * h);
                let gq = gap_at(params, qx, qy)?;
                if gq < g {
                    (kx, ky, g) = (qx, qy, gq);
                    moved = true;
                    break;
                }
            }
            if !moved {
                h *= 0.5;
            }
        }
        best = best.min(g);
    }
    Ok(best)
}
