use std::f64::consts::{FRAC_PI_2, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid;
use crate::hamiltonian::{build_bloch, Axis, ModelParams};
use crate::linalg::{det, eigenvalues, identity, pair_multisets, scale, C64};

/// Largest tolerated distance from an integer, in cycles.
pub const INTEGRALITY_TOL: f64 = 0.05;
/// Smallest allowed distance between the reference energy and the sampled
/// spectrum.
pub const REFERENCE_CLEARANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindingResult {
    pub direction: Axis,
    pub transverse_momentum: f64,
    pub reference_energy: C64,
    pub winding: i64,
    /// Unrounded phase accumulation in units of 2 pi.
    pub cycles: f64,
    pub max_step: f64,
    pub samples: usize,
}

fn hamiltonian(params: &ModelParams, direction: Axis, k: f64, k_trans: f64) -> crate::linalg::CMat {
    match direction {
        Axis::X => build_bloch(params, k, k_trans),
        Axis::Y => build_bloch(params, k_trans, k),
    }
}

fn phase_steps(values: &[C64]) -> Result<(f64, f64)> {
    let mut total = 0.0;
    let mut max_step = 0.0_f64;
    for j in 0..values.len() {
        let step = (values[(j + 1) % values.len()] / values[j]).arg();
        if step.abs() > FRAC_PI_2 {
            return Err(Error::PhaseAmbiguity { step });
        }
        max_step = max_step.max(step.abs());
        total += step;
    }
    Ok((total, max_step))
}

/// Winding of `det(H(k) - E_ref)` as the momentum along `direction` runs over
/// `[0, 2 pi)` with the other momentum fixed.
pub fn spectral_winding(
    params: &ModelParams,
    direction: Axis,
    transverse_momentum: f64,
    reference_energy: C64,
    k_samples: usize,
) -> Result<WindingResult> {
    if k_samples < 2 {
        return Err(Error::InvalidGrid("winding needs at least 2 momentum samples".into()));
    }
    let shift = scale(&identity(4), reference_energy);
    let mut dets = Vec::with_capacity(k_samples);
    let mut clearance = f64::INFINITY;
    for k in grid::line(k_samples) {
        let h = hamiltonian(params, direction, k, transverse_momentum);
        for e in eigenvalues(&h)? {
            clearance = clearance.min((e - reference_energy).norm());
        }
        dets.push(det(&(&h - &shift)));
    }
    if clearance <= REFERENCE_CLEARANCE {
        return Err(Error::ReferenceOnSpectrum {
            re: reference_energy.re,
            im: reference_energy.im,
            distance: clearance,
        });
    }
    let (total, max_step) = phase_steps(&dets)?;
    let cycles = total / TAU;
    let winding = cycles.round();
    if (cycles - winding).abs() >= INTEGRALITY_TOL {
        return Err(Error::NonIntegerWinding { cycles });
    }
    Ok(WindingResult {
        direction,
        transverse_momentum,
        reference_energy,
        winding: winding as i64,
        cycles,
        max_step,
        samples: k_samples,
    })
}

/// Winding of a set of bands that permute into each other over one period.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BandWinding {
    /// Band indices at `k = 0`, sorted by (Re, Im).
    pub bands: Vec<usize>,
    pub winding: i64,
}

/// Per-band windings of `E_n(k) - E_ref`, with bands followed continuously by
/// nearest-neighbor matching between consecutive momenta. Bands that trade
/// places over one period are reported together.
pub fn band_windings(
    params: &ModelParams,
    direction: Axis,
    transverse_momentum: f64,
    reference_energy: C64,
    k_samples: usize,
) -> Result<Vec<BandWinding>> {
    let ks = grid::line(k_samples);
    let mut first = eigenvalues(&hamiltonian(params, direction, ks[0], transverse_momentum))?;
    crate::linalg::sort_lex(&mut first);
    let n = first.len();
    let mut current = first.clone();
    let mut phase = vec![0.0; n];
    let mut advance = |current: &mut Vec<C64>, next: Vec<C64>| -> Result<()> {
        let pairing = pair_multisets(current, &next)
            .ok_or_else(|| Error::MalformedGrouping("band count changed".into()))?;
        let mut moved = current.clone();
        for &(i, j) in &pairing.pairs {
            let a = current[i] - reference_energy;
            let b = next[j] - reference_energy;
            if a.norm() <= REFERENCE_CLEARANCE || b.norm() <= REFERENCE_CLEARANCE {
                return Err(Error::ReferenceOnSpectrum {
                    re: reference_energy.re,
                    im: reference_energy.im,
                    distance: a.norm().min(b.norm()),
                });
            }
            let step = (b / a).arg();
            if step.abs() > FRAC_PI_2 {
                return Err(Error::PhaseAmbiguity { step });
            }
            phase[i] += step;
            moved[i] = next[j];
        }
        *current = moved;
        Ok(())
    };
    for &k in &ks[1..] {
        let next = eigenvalues(&hamiltonian(params, direction, k, transverse_momentum))?;
        advance(&mut current, next)?;
    }
    advance(&mut current, first.clone())?;
    // Where each tracked band lands after one period.
    let closing = pair_multisets(&current, &first).unwrap();
    let mut target = vec![0; n];
    for &(i, j) in &closing.pairs {
        target[i] = j;
    }
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            cycle.push(i);
            i = target[i];
        }
        let total: f64 = cycle.iter().map(|&b| phase[b]).sum::<f64>() / TAU;
        let w = total.round();
        if (total - w).abs() >= INTEGRALITY_TOL {
            return Err(Error::NonIntegerWinding { cycles: total });
        }
        cycle.sort_unstable();
        out.push(BandWinding {
            bands: cycle,
            winding: w as i64,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::{hatano_nelson_preset, PerturbationSpec};

    #[test]
    fn hermitian_limit_never_winds() {
        let p = ModelParams::hermitian(0.2, 0.4);
        for e in [C64::new(0.1, 0.2), C64::new(-0.4, -0.05)] {
            for axis in [Axis::X, Axis::Y] {
                assert_eq!(spectral_winding(&p, axis, 0.7, e, 256).unwrap().winding, 0);
            }
        }
    }

    #[test]
    fn reference_on_spectrum_is_rejected() {
        let p = ModelParams::reference();
        let e = eigenvalues(&build_bloch(&p, 0.0, 0.3)).unwrap()[0];
        assert!(matches!(
            spectral_winding(&p, Axis::X, 0.3, e, 64),
            Err(Error::ReferenceOnSpectrum { .. })
        ));
    }

    #[test]
    fn coarse_sampling_is_ambiguous() {
        let p = ModelParams::reference().with_perturbation(PerturbationSpec::beta(0.8));
        assert!(matches!(
            spectral_winding(&p, Axis::Y, 0.0, C64::new(0.8, 0.01), 3),
            Err(Error::PhaseAmbiguity { .. })
        ));
    }

    #[test]
    fn band_windings_add_up() {
        let p = hatano_nelson_preset(0.4, 0.1, PerturbationSpec::new());
        let e = C64::new(0.05, 0.02);
        let total = spectral_winding(&p, Axis::Y, 0.4, e, 512).unwrap().winding;
        let bands = band_windings(&p, Axis::Y, 0.4, e, 512).unwrap();
        assert_eq!(bands.iter().map(|b| b.winding).sum::<i64>(), total);
        assert_eq!(bands.iter().map(|b| b.bands.len()).sum::<usize>(), 4);
    }
}
