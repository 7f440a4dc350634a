use std::f64::consts::TAU;

use nhssh::linalg::{self, pair_multisets};
use nhssh::prelude::*;
use proptest::prelude::*;

fn hopping() -> impl Strategy<Value = f64> {
    0.05..1.0f64
}

fn term() -> impl Strategy<Value = PauliTerm> {
    (0u8..4, 0u8..4, -1.0..1.0f64).prop_map(|(m, n, c)| PauliTerm::new(m, n, c).unwrap())
}

fn model() -> impl Strategy<Value = ModelParams> {
    (hopping(), hopping(), hopping(), hopping(), prop::collection::vec(term(), 0..3))
        .prop_map(|(a, b, c, d, t)| ModelParams::new(a, b, c, d).with_perturbation(PerturbationSpec::from_terms(t)))
}

fn complex() -> impl Strategy<Value = C64> {
    (-2.0..2.0f64, -1.0..1.0f64).prop_map(|(re, im)| C64::new(re, im))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn periodic_lattice_matches_bloch_grid(p in model(), nx in 2usize..5, ny in 2usize..5) {
        let real = full_spectrum_with(&p, &LatticeSpec::periodic(nx, ny), &SpectrumOptions::eigenvalues_only()).unwrap();
        let bloch = bloch_spectrum(&p, &KGrid::new(nx, ny)).unwrap();
        let d = pair_multisets(&real.eigenvalues, &bloch.eigenvalues).unwrap().max_distance;
        prop_assert!(d < 1e-8, "distance {d}");
    }

    #[test]
    fn hermitian_hoppings_give_real_spectra(
        a in hopping(), b in hopping(), terms in prop::collection::vec(term(), 0..3),
        nx in 2usize..6, ny in 2usize..6, label in 0usize..4,
    ) {
        let labels = [BoundaryLabel::Pbc, BoundaryLabel::XObc, BoundaryLabel::YObc, BoundaryLabel::XyObc];
        let p = ModelParams::hermitian(a, b).with_perturbation(PerturbationSpec::from_terms(terms));
        let s = full_spectrum_with(&p, &LatticeSpec::with_label(nx, ny, labels[label]), &SpectrumOptions::eigenvalues_only()).unwrap();
        prop_assert!(s.max_abs_im() < 1e-10, "{}", s.max_abs_im());
    }

    #[test]
    fn unperturbed_model_keeps_all_six(a in hopping(), b in hopping(), c in hopping(), d in hopping()) {
        let p = ModelParams::new(a, b, c, d);
        for op in SymmetryOp::builtins() {
            let r = check_symmetry(&p, &op, &KGrid::square(8)).unwrap();
            prop_assert_eq!(r.verdict, Verdict::Preserved, "{}", op.name);
        }
    }

    #[test]
    fn preserved_relations_compose(p in model(), i in 0usize..6, j in 0usize..6) {
        let ops = SymmetryOp::builtins();
        let grid = KGrid::square(6);
        let kept = |op: &SymmetryOp| check_symmetry(&p, op, &grid).unwrap().verdict == Verdict::Preserved;
        if kept(&ops[i]) && kept(&ops[j]) {
            prop_assert!(kept(&compose(&ops[i], &ops[j])));
        }
    }

    #[test]
    fn reality_report_is_coherent(values in prop::collection::vec(complex(), 1..40), tol in 1e-12..1e-1f64) {
        let r = RealityReport::from_values(&values, tol, Scope::All).unwrap();
        let all_within = values.iter().all(|e| e.im.abs() <= tol);
        prop_assert_eq!(r.is_real(), all_within);
        prop_assert_eq!(r.fraction_real == 1.0, all_within);
        prop_assert!(r.mean_abs_im <= r.max_abs_im);
    }

    #[test]
    fn winding_is_stable_under_refinement(p in model(), k in 0.0..TAU, e in complex(), y in any::<bool>()) {
        let axis = if y { Axis::Y } else { Axis::X };
        if let (Ok(a), Ok(b)) = (spectral_winding(&p, axis, k, e, 512), spectral_winding(&p, axis, k, e, 1024)) {
            prop_assert_eq!(a.winding, b.winding);
        }
    }

    #[test]
    fn pairing_a_permutation_is_exact(values in prop::collection::vec(complex(), 1..30), shift in 0usize..30) {
        let mut moved = values.clone();
        moved.rotate_left(shift % values.len());
        prop_assert_eq!(pair_multisets(&values, &moved).unwrap().max_distance, 0.0);
    }

    #[test]
    fn trace_matches_eigenvalue_sum(p in model(), kx in 0.0..TAU, ky in 0.0..TAU) {
        let h = build_bloch(&p, kx, ky);
        let values = linalg::eigenvalues(&h).unwrap();
        prop_assert!(linalg::trace_defect(&h, &values) < 1e-12);
    }

    #[test]
    fn csv_round_trip_is_exact(p in model()) {
        let s = bloch_spectrum(&p, &KGrid::new(3, 2)).unwrap();
        let rows = read_csv(&s.to_csv("prop")).unwrap();
        prop_assert_eq!(rows.len(), s.len());
        for (r, e) in rows.iter().zip(&s.eigenvalues) {
            prop_assert_eq!(r.value, *e);
        }
    }

    #[test]
    fn theta_mix_has_constant_norm(amp in 0.1..2.0f64, theta in 0.0..TAU, zzz in any::<bool>()) {
        let v = if zzz { ThetaVariant::Zzz } else { ThetaVariant::Zz0 };
        let d = PerturbationSpec::theta_mix(amp, theta, v).onsite_values(1e-12).unwrap();
        let sq: f64 = d.iter().map(|x| x * x).sum();
        prop_assert!((sq - 4.0 * amp * amp).abs() < 1e-9);
    }
}
