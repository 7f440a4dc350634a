use std::f64::consts::{PI, TAU};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::{write_file, Assertion};
use crate::analysis::{
    cross_deviation, finite_size_scaling, gbz_survey, pt_transition_scan, reality_report_with_threshold,
    skin_effect_indicator, spectral_winding, theta_scan, RealityReport, Scope, SkinOptions, ThetaScanOptions,
};
use crate::config::{Format, Presence, RibbonSolver, RunConfig, ScanKind};
use crate::error::{Error, Result};
use crate::grid::KGrid;
use crate::hamiltonian::{Axis, BoundaryLabel, LatticeSpec, ThetaVariant};
use crate::linalg::C64;
use crate::plot::{group_by_label, svg_scatter, Series};
use crate::spectra::{
    bloch_spectrum, classify_modes, full_spectrum_with, nonbloch_ribbon_spectrum, read_csv, ribbon_spectrum_with,
    spectra_to_csv, CertifiedOptions, ComplexSpectrum, RibbonSpec, SpectrumOptions,
};
use crate::symmetry::{check_symmetry_with_tol, SymmetryOp, Verdict};

type Outcome = Result<(Vec<Value>, Vec<Assertion>)>;

fn wants(cfg: &RunConfig, f: Format) -> bool {
    cfg.output.formats.contains(&f)
}

fn out_dir(cfg: &RunConfig) -> &Path {
    Path::new(&cfg.output.dir)
}

fn compute_spectrum(cfg: &RunConfig, bc: BoundaryLabel) -> Result<ComplexSpectrum> {
    let params = cfg.model.params()?;
    let l = &cfg.lattice;
    let opts = SpectrumOptions {
        strip: l.strip,
        eigenvalues_only: false,
    };
    let ribbon = |axis| RibbonSpec::new(axis, l.ribbon_cells, l.k_samples);
    let ribbon_solve = |axis| match l.ribbon_solver {
        RibbonSolver::Plain => ribbon_spectrum_with(&params, &ribbon(axis), &opts),
        RibbonSolver::Certified => nonbloch_ribbon_spectrum(
            &params,
            &ribbon(axis),
            &CertifiedOptions {
                strip: l.strip,
                ..CertifiedOptions::default()
            },
        ),
    };
    match bc {
        BoundaryLabel::Pbc => bloch_spectrum(&params, &KGrid::square(l.grid)),
        BoundaryLabel::XObc => ribbon_solve(Axis::X),
        BoundaryLabel::YObc => ribbon_solve(Axis::Y),
        BoundaryLabel::XyObc => full_spectrum_with(&params, &LatticeSpec::open(l.nx, l.ny), &opts),
    }
}

pub(super) fn spectrum(cfg: &RunConfig) -> Outcome {
    let tol = cfg.tolerances.reality;
    let thr = cfg.lattice.edge_threshold;
    let mut spectra = Vec::new();
    let mut reports = Vec::new();
    let mut by_bc: Vec<(BoundaryLabel, RealityReport, f64)> = Vec::new();
    for &bc in &cfg.lattice.bcs {
        let s = compute_spectrum(cfg, bc)?;
        let reality = reality_report_with_threshold(&s, tol, Scope::boundary(bc), thr)?;
        let cross = cross_deviation(&s.eigenvalues);
        let mut r = json!({
            "kind": "spectrum",
            "bc": bc,
            "count": s.len(),
            "reality": reality,
            "all_real": reality.is_real(),
            "cross_deviation": cross,
        });
        if bc == BoundaryLabel::Pbc {
            r["cross"] = json!(!reality.is_real() && cross < 1e-8);
        }
        if let Ok(part) = classify_modes(&s, thr) {
            r["edge_states"] = json!(part.edge_count());
            r["bulk_states"] = json!(part.bulk_count());
            if part.bulk_count() > 0 {
                r["bulk_reality"] = json!(reality_report_with_threshold(&s, tol, Scope::BulkOnly, thr)?);
            }
        }
        by_bc.push((bc, reality, cross));
        reports.push(r);
        spectra.push(s);
    }

    let dir = out_dir(cfg);
    let tag = cfg.output.tag.as_str();
    if wants(cfg, Format::Csv) {
        write_file(dir, "spectrum.csv", &spectra_to_csv(spectra.iter().map(|s| (s, tag))))?;
    }
    if wants(cfg, Format::Json) {
        let doc = json!({ "config": cfg, "spectra": spectra });
        write_file(dir, "spectrum.json", &serde_json::to_string_pretty(&doc)?)?;
    }
    if wants(cfg, Format::Svg) {
        let series: Vec<Series> = spectra
            .iter()
            .map(|s| Series {
                label: s.meta.bc.as_str(),
                points: s.eigenvalues.clone(),
            })
            .collect();
        write_file(dir, "spectrum.svg", &svg_scatter(tag, &series))?;
    }

    let mut assertions = Vec::new();
    let a = &cfg.assertions;
    for (key, bound) in &a.max_abs_im {
        let label: BoundaryLabel = key.parse()?;
        let found = by_bc.iter().find(|b| b.0 == label);
        assertions.push(match found {
            Some((_, r, _)) => Assertion::new(
                format!("max_abs_im[{label}]"),
                r.max_abs_im <= *bound,
                format!("{:.3e} <= {bound:.3e}", r.max_abs_im),
            ),
            None => Assertion::new(format!("max_abs_im[{label}]"), false, "boundary condition not computed"),
        });
    }
    for label in &a.all_real {
        let found = by_bc.iter().find(|b| b.0 == *label);
        assertions.push(match found {
            Some((_, r, _)) => Assertion::new(
                format!("all_real[{label}]"),
                r.is_real(),
                format!("max |Im E| {:.3e}, tol {tol:.1e}", r.max_abs_im),
            ),
            None => Assertion::new(format!("all_real[{label}]"), false, "boundary condition not computed"),
        });
    }
    if let Some(expect) = a.pbc_cross {
        let found = by_bc.iter().find(|b| b.0 == BoundaryLabel::Pbc);
        assertions.push(match found {
            Some((_, r, cross)) => {
                let is_cross = !r.is_real() && *cross < 1e-8;
                Assertion::new(
                    "pbc_cross",
                    is_cross == expect,
                    format!("fraction real {:.4}, cross deviation {cross:.3e}", r.fraction_real),
                )
            }
            None => Assertion::new("pbc_cross", false, "PBC not computed"),
        });
    }
    Ok((reports, assertions))
}

pub(super) fn scan(cfg: &RunConfig) -> Outcome {
    let sc = cfg
        .scan
        .as_ref()
        .ok_or_else(|| Error::Config("scan command needs a [scan] table".into()))?;
    let params = cfg.model.params()?;
    let grid = KGrid::square(cfg.lattice.grid);
    let curve = match sc.kind {
        ScanKind::Alpha => pt_transition_scan(&params, &sc.samples()?, &grid)?,
        ScanKind::Theta => {
            let variant: ThetaVariant = sc.variant.as_deref().unwrap_or("zz0").parse()?;
            let opts = ThetaScanOptions {
                grid,
                obc_cells: sc.obc_cells.unwrap_or(16),
                tol: cfg.tolerances.reality,
            };
            theta_scan(&params, sc.amp.unwrap_or(0.8), &sc.samples()?, variant, &opts)?
        }
        ScanKind::Size => {
            let sizes: Vec<(usize, usize)> = sc
                .sizes
                .as_ref()
                .ok_or_else(|| Error::Config("size scan needs scan.sizes".into()))?
                .iter()
                .map(|&n| (n, n))
                .collect();
            finite_size_scaling(&params, &sizes, Scope::XyObc)?
        }
    };
    let dir = out_dir(cfg);
    if wants(cfg, Format::Csv) {
        write_file(dir, "scan.csv", &curve.to_csv())?;
    }
    if wants(cfg, Format::Json) {
        let doc = json!({ "config": cfg, "curve": curve });
        write_file(dir, "scan.json", &serde_json::to_string_pretty(&doc)?)?;
    }
    let mut assertions = Vec::new();
    let a = &cfg.assertions;
    if let Some([lo, hi]) = a.transition_in {
        assertions.push(match curve.detected_transition {
            Some(t) => Assertion::new("transition_in", t > lo && t < hi, format!("{t:.6} in ({lo}, {hi})")),
            None => Assertion::new("transition_in", false, "no transition detected"),
        });
    }
    if let Some(target) = a.gap_min_near {
        let values = curve.values();
        let nearest = values
            .iter()
            .copied()
            .min_by(|x, y| (x - target).abs().total_cmp(&(y - target).abs()));
        let pass = curve.detected_transition.is_some() && curve.detected_transition == nearest;
        assertions.push(Assertion::new(
            "gap_min_near",
            pass,
            format!("minimum at {:?}, nearest sample {:?}", curve.detected_transition, nearest),
        ));
    }
    if let Some(true) = a.monotone_decrease {
        let ims: Vec<f64> = curve.samples.iter().map(|s| s.reports[0].max_abs_im).collect();
        let pass = ims.windows(2).all(|w| w[1] < w[0]);
        let shown: Vec<String> = ims.iter().map(|v| format!("{v:.3e}")).collect();
        assertions.push(Assertion::new("monotone_decrease", pass, shown.join(", ")));
    }
    Ok((vec![json!({ "kind": "scan", "curve": curve })], assertions))
}

/// Uniform draw of `(ky, E_ref)` in a box around the spectrum.
fn draw_reference(rng: &mut ChaCha8Rng) -> (f64, C64) {
    (
        rng.random_range(0.0..TAU),
        C64::new(rng.random_range(-1.5..1.5), rng.random_range(-0.5..0.5)),
    )
}

pub(super) fn check(cfg: &RunConfig) -> Outcome {
    let params = cfg.model.params()?;
    let c = &cfg.check;
    let a = &cfg.assertions;
    let runs = |name: &str| c.run.iter().any(|r| r == name);
    let mut reports = Vec::new();
    let mut assertions = Vec::new();

    if runs("symmetry") {
        let grid = KGrid::square(c.symmetry_grid);
        let mut names = c.symmetries.clone();
        for n in a.preserved.iter().chain(&a.broken) {
            if !names.contains(n) {
                names.push(n.clone());
            }
        }
        let mut verdicts = Vec::new();
        for n in &names {
            let op = SymmetryOp::by_name(n)?;
            let r = check_symmetry_with_tol(&params, &op, &grid, cfg.tolerances.symmetry)?;
            reports.push(json!({ "kind": "symmetry", "name": n, "report": r }));
            verdicts.push((n.clone(), r));
        }
        let find = |n: &String| verdicts.iter().find(|v| &v.0 == n).map(|v| &v.1).unwrap();
        for n in &a.preserved {
            let r = find(n);
            assertions.push(Assertion::new(
                format!("preserved[{n}]"),
                r.verdict == Verdict::Preserved,
                format!("residual {:.3e}", r.residual),
            ));
        }
        for n in &a.broken {
            let r = find(n);
            assertions.push(Assertion::new(
                format!("broken[{n}]"),
                r.verdict == Verdict::Broken,
                format!("residual {:.3e}", r.residual),
            ));
        }
    }

    if runs("winding") {
        let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
        let mut x_results = Vec::new();
        let mut attempts = 0;
        while x_results.len() < c.winding_pairs {
            attempts += 1;
            if attempts > 100 * c.winding_pairs.max(1) {
                return Err(Error::numerical("x winding", "no valid reference energies found"));
            }
            let (ky, e) = draw_reference(&mut rng);
            match spectral_winding(&params, Axis::X, ky, e, c.winding_samples) {
                Ok(w) => x_results.push(w),
                Err(Error::ReferenceOnSpectrum { .. } | Error::PhaseAmbiguity { .. }) => continue,
                Err(e) => return Err(e),
            }
        }
        let x_max = x_results.iter().map(|w| w.winding.abs()).max().unwrap_or(0);
        reports.push(json!({ "kind": "winding", "direction": "x", "results": x_results }));

        let mut y_found = None;
        'search: for i in 0..5 {
            let kx = PI * i as f64 / 4.0;
            for re in 0..13 {
                for im in 0..7 {
                    let e = C64::new(-1.5 + 0.25 * re as f64, -0.3 + 0.1 * im as f64);
                    match spectral_winding(&params, Axis::Y, kx, e, c.winding_samples) {
                        Ok(w) if w.winding != 0 => {
                            y_found = Some(w);
                            break 'search;
                        }
                        Ok(_) | Err(Error::ReferenceOnSpectrum { .. } | Error::PhaseAmbiguity { .. }) => {}
                        Err(e) => return Err(e),
                    }
                }
            }
        }
        reports.push(json!({ "kind": "winding", "direction": "y", "nonzero_example": y_found }));
        if let Some(true) = a.x_winding_zero {
            assertions.push(Assertion::new(
                "x_winding_zero",
                x_max == 0,
                format!("{} pairs, max |w| = {x_max}", x_results.len()),
            ));
        }
        if let Some(true) = a.y_winding_nonzero {
            assertions.push(Assertion::new(
                "y_winding_nonzero",
                y_found.is_some(),
                match &y_found {
                    Some(w) => format!("w = {} at kx {:.4}, E {}", w.winding, w.transverse_momentum, w.reference_energy),
                    None => "no nonzero winding on the search grid".into(),
                },
            ));
        }
    }

    if runs("gbz") {
        let opts = CertifiedOptions::default();
        let mut worst: f64 = 1.0;
        for &kx in &c.gbz_kx {
            let s = gbz_survey(&params, kx, c.gbz_cells, &opts, cfg.tolerances.gbz)?;
            worst = worst.min(s.fraction);
            reports.push(json!({ "kind": "gbz", "survey": s }));
        }
        if let Some(min) = a.gbz_min_fraction {
            assertions.push(Assertion::new(
                "gbz_min_fraction",
                worst >= min,
                format!("lowest fraction {worst:.4} >= {min}"),
            ));
        }
    }

    if runs("skin") {
        let opts = SkinOptions {
            cells: c.skin_cells,
            k_samples: c.skin_k_samples,
            strip: cfg.lattice.strip,
            ..SkinOptions::default()
        };
        for (axis, expect) in [(Axis::X, a.skin_x), (Axis::Y, a.skin_y)] {
            let r = skin_effect_indicator(&params, axis, &opts)?;
            reports.push(json!({ "kind": "skin", "report": r }));
            if let Some(e) = expect {
                let want = e == Presence::Present;
                assertions.push(Assertion::new(
                    format!("skin_{axis}"),
                    r.present == want,
                    format!(
                        "displacement {:.3e}, mean weight {:.3} vs baseline {:.3}",
                        r.displacement, r.mean_boundary_weight, r.baseline
                    ),
                ));
            }
        }
    }
    Ok((reports, assertions))
}

pub(super) fn plot(cfg: &RunConfig, input: Option<&Path>, output: Option<&Path>) -> Outcome {
    let dir = out_dir(cfg);
    let input = input.map(Path::to_path_buf).unwrap_or_else(|| dir.join("spectrum.csv"));
    let text = std::fs::read_to_string(&input)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", input.display())))?;
    let rows = read_csv(&text)?;
    let groups = group_by_label(rows.iter().map(|r| (r.bc.as_str(), r.value)));
    let series: Vec<Series> = groups
        .iter()
        .map(|(l, p)| Series {
            label: l.as_str(),
            points: p.clone(),
        })
        .collect();
    let title = rows.first().map(|r| r.tag.clone()).unwrap_or_default();
    let svg = svg_scatter(&title, &series);
    let path = match output {
        Some(p) => {
            if let Some(parent) = p.parent().filter(|p| !p.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent)?;
            }
            std::fs::write(p, &svg)?;
            p.to_path_buf()
        }
        None => write_file(dir, "plot.svg", &svg)?,
    };
    let counts: Vec<Value> = groups.iter().map(|(l, p)| json!({ "bc": l, "points": p.len() })).collect();
    Ok((
        vec![json!({ "kind": "plot", "input": input, "output": path, "series": counts })],
        Vec::new(),
    ))
}
