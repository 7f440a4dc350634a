use super::{Axis, BoundaryCondition, LatticeSpec, ModelParams};
use crate::error::{Error, Result};
use crate::linalg::{CMat, C64, ZERO};

/// Sparse (COO) assembly of the real-space Hamiltonian. Duplicate coordinates
/// are summed by consumers; wrap bonds appear exactly on periodic axes.
pub fn real_space_triplets(params: &ModelParams, lattice: &LatticeSpec) -> Result<Vec<(usize, usize, C64)>> {
    lattice.validate()?;
    let (nx, ny) = (lattice.nx as i64, lattice.ny as i64);
    let onsite = params.perturbation.realize();
    let bonds = params.bonds();
    let mut out = Vec::with_capacity(lattice.dim() * (bonds.len() + 4) / 4);

    let wrap = |v: i64, n: i64, bc: BoundaryCondition| -> Option<usize> {
        if (0..n).contains(&v) {
            Some(v as usize)
        } else if bc == BoundaryCondition::Periodic {
            Some(v.rem_euclid(n) as usize)
        } else {
            None
        }
    };

    for y in 0..lattice.ny {
        for x in 0..lattice.nx {
            for a in 0..4 {
                for b in 0..4 {
                    let v = onsite[(a, b)];
                    if v != ZERO {
                        out.push((lattice.site(a, x, y), lattice.site(b, x, y), v));
                    }
                }
            }
            for &(r, c, dx, dy, amp) in &bonds {
                if amp == 0.0 {
                    continue;
                }
                let Some(x2) = wrap(x as i64 + dx as i64, nx, lattice.bc_x) else { continue };
                let Some(y2) = wrap(y as i64 + dy as i64, ny, lattice.bc_y) else { continue };
                out.push((lattice.site(r, x, y), lattice.site(c, x2, y2), C64::new(amp, 0.0)));
            }
        }
    }
    Ok(out)
}

/// Dense real-space Hamiltonian of dimension `4 * nx * ny`.
pub fn build_real_space(params: &ModelParams, lattice: &LatticeSpec) -> Result<CMat> {
    let trip = real_space_triplets(params, lattice)?;
    let n = lattice.dim();
    let mut h = CMat::zeros(n, n);
    for (i, j, v) in trip {
        h[(i, j)] += v;
    }
    Ok(h)
}

/// A strip that is open along `open_axis` (with `cells` unit cells) and
/// periodic along the other axis, block-diagonalized at transverse momentum
/// `k`. `gauge` applies the similarity `S^-1 H S`, `S = diag(gauge^c)` over
/// the open-axis cell index `c`; `gauge = 1` is the plain ribbon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RibbonGeometry {
    pub open_axis: Axis,
    pub cells: usize,
    pub k: f64,
    pub gauge: f64,
}

impl RibbonGeometry {
    pub fn new(open_axis: Axis, cells: usize, k: f64) -> Self {
        Self {
            open_axis,
            cells,
            k,
            gauge: 1.0,
        }
    }

    pub fn with_gauge(mut self, gauge: f64) -> Self {
        self.gauge = gauge;
        self
    }
}

/// Ribbon matrix of dimension `4 * cells`, sites ordered internal index
/// fastest then open-axis cell.
pub fn build_ribbon(params: &ModelParams, geom: &RibbonGeometry) -> Result<CMat> {
    if geom.cells == 0 {
        return Err(Error::InvalidRibbon("ribbon needs at least one cell".into()));
    }
    if !(geom.gauge.is_finite() && geom.gauge > 0.0) {
        return Err(Error::InvalidRibbon(format!("gauge must be positive, got {}", geom.gauge)));
    }
    let n = geom.cells as i64;
    let onsite = params.perturbation.realize();
    let mut h = CMat::zeros(4 * geom.cells, 4 * geom.cells);
    for c in 0..geom.cells {
        for a in 0..4 {
            for b in 0..4 {
                h[(4 * c + a, 4 * c + b)] += onsite[(a, b)];
            }
        }
    }
    for (r, col, dx, dy, amp) in params.bonds() {
        let (d_open, d_trans) = match geom.open_axis {
            Axis::X => (dx, dy),
            Axis::Y => (dy, dx),
        };
        let w = C64::from_polar(amp, geom.k * d_trans as f64) * geom.gauge.powi(d_open);
        for c in 0..n {
            let c2 = c + d_open as i64;
            if (0..n).contains(&c2) {
                h[(4 * c as usize + r, 4 * c2 as usize + col)] += w;
            }
        }
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::{build_bloch, BoundaryLabel, PerturbationSpec};
    use crate::linalg::{adjoint, max_abs_diff};

    fn beta_model() -> ModelParams {
        ModelParams::reference().with_perturbation(PerturbationSpec::beta(0.8))
    }

    #[test]
    fn dimension_and_validation() {
        let p = beta_model();
        assert_eq!(build_real_space(&p, &LatticeSpec::open(3, 2)).unwrap().nrows(), 24);
        assert!(matches!(
            build_real_space(&p, &LatticeSpec::periodic(1, 3)),
            Err(Error::InvalidLattice(_))
        ));
        assert!(build_real_space(&p, &LatticeSpec::open(0, 3)).is_err());
        assert!(build_real_space(&p, &LatticeSpec::open(1, 1)).is_ok());
    }

    #[test]
    fn single_open_cell_has_intra_cell_terms_only() {
        let p = ModelParams::reference().with_perturbation(PerturbationSpec::alpha(0.3));
        let h = build_real_space(&p, &LatticeSpec::open(1, 1)).unwrap();
        let mut expect = p.perturbation.realize();
        // intra-cell ring: h_{AB}, h_{BC}, h_{CD}, h_{DA} forward, reverse transposed
        for (i, j) in [(0, 1), (1, 2), (2, 3), (3, 0)] {
            expect[(i, j)] += C64::new(p.gamma_in, 0.0);
            expect[(j, i)] += C64::new(p.gamma_in_p, 0.0);
        }
        assert!(max_abs_diff(&h, &expect) < 1e-15);
    }

    #[test]
    fn hermitian_limit_all_boundary_conditions() {
        let p = ModelParams::hermitian(0.2, 0.4).with_perturbation(PerturbationSpec::alpha(0.5));
        for label in BoundaryLabel::ALL {
            let h = build_real_space(&p, &LatticeSpec::with_label(3, 4, label)).unwrap();
            assert!(max_abs_diff(&h, &adjoint(&h)) < 1e-12, "{label}");
        }
    }

    #[test]
    fn open_matrix_is_periodic_with_wraps_removed() {
        let p = beta_model().with_perturbation(PerturbationSpec::theta_mix(0.8, 0.4, crate::hamiltonian::ThetaVariant::Zz0));
        let (nx, ny) = (4, 3);
        for label in [BoundaryLabel::XObc, BoundaryLabel::YObc, BoundaryLabel::XyObc] {
            let lat = LatticeSpec::with_label(nx, ny, label);
            let open = build_real_space(&p, &lat).unwrap();
            let mut periodic = build_real_space(&p, &LatticeSpec::periodic(nx, ny)).unwrap();
            let cell = |i: usize| ((i / 4) % nx, (i / 4) / nx);
            for i in 0..lat.dim() {
                for j in 0..lat.dim() {
                    let (xi, yi) = cell(i);
                    let (xj, yj) = cell(j);
                    let wraps_x = xi.abs_diff(xj) == nx - 1;
                    let wraps_y = yi.abs_diff(yj) == ny - 1;
                    let (ox, oy) = (lat.bc_x == BoundaryCondition::Open, lat.bc_y == BoundaryCondition::Open);
                    if (ox && wraps_x) || (oy && wraps_y) {
                        periodic[(i, j)] = ZERO;
                    }
                }
            }
            assert_eq!(max_abs_diff(&open, &periodic), 0.0, "{label}");
        }
    }

    #[test]
    fn ribbon_blocks_resum_to_bloch() {
        // For an interior cell c, sum_d block(c, c + d) e^{i k d} = H(k) with the
        // transverse momentum carried by the ribbon itself.
        let p = beta_model();
        let (kx, ky) = (0.9, -2.2);
        for (axis, k_trans, k_open) in [(Axis::Y, kx, ky), (Axis::X, ky, kx)] {
            let h = build_ribbon(&p, &RibbonGeometry::new(axis, 5, k_trans)).unwrap();
            let c = 2;
            let mut sum = CMat::zeros(4, 4);
            for d in -1i32..=1 {
                let c2 = (c as i32 + d) as usize;
                let ph = C64::from_polar(1.0, k_open * d as f64);
                for a in 0..4 {
                    for b in 0..4 {
                        sum[(a, b)] += h[(4 * c + a, 4 * c2 + b)] * ph;
                    }
                }
            }
            assert!(max_abs_diff(&sum, &build_bloch(&p, kx, ky)) < 1e-15, "{axis}");
        }
    }

    #[test]
    fn gauge_is_a_similarity_transform() {
        let p = beta_model();
        let g = RibbonGeometry::new(Axis::Y, 5, 0.3);
        let h = build_ribbon(&p, &g).unwrap();
        let r = 0.6_f64;
        let hg = build_ribbon(&p, &g.with_gauge(r)).unwrap();
        for i in 0..20 {
            for j in 0..20 {
                let s = r.powi((j / 4) as i32 - (i / 4) as i32);
                assert!((hg[(i, j)] - h[(i, j)] * s).norm() < 1e-15);
            }
        }
    }
}
