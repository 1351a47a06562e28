use ctpower_core::analysis::{
    average_ncf_analytic, average_ncf_mc, average_ncf_pauli, average_ncf_pauli_product,
    classical_limit, min_control_power, pe4_ncf_analytic, per_qubit_ncf, reconstruct_mixture,
    sample_rng, simplex_grid, verdict, McEstimate, Method, SampleRunner, Sequential,
};
use ctpower_core::catalog::standard_catalog;
use ctpower_core::qstate::haar_random_state;
use ctpower_core::{Error, InputMode, McConfig, PauliMixture, Pe4Params, Result, Scheme, SchemeId};
use ctpower_core::YangVariant;

/// Gauss-Legendre-free midpoint quadrature of `f(cos θ)` over the sphere.
fn sphere_average(f: impl Fn(f64) -> f64) -> f64 {
    let steps = 200_000;
    let h = core::f64::consts::PI / steps as f64;
    let mut acc = 0.0;
    for i in 0..steps {
        let theta = (i as f64 + 0.5) * h;
        acc += f(theta.cos()) * theta.sin() * h;
    }
    acc / 2.0
}

#[test]
fn single_qubit_pauli_moment_by_quadrature() {
    // ⟨σ⟩² for a Bloch vector is cos²θ about the σ axis.
    let moment = sphere_average(|c| c * c);
    assert!((moment - 1.0 / 3.0).abs() < 1e-9);
    let mix = PauliMixture::new(1, vec![("X".parse().unwrap(), 1.0)]).unwrap();
    assert!((average_ncf_pauli(&mix) - moment).abs() < 1e-9);
    assert!((average_ncf_pauli_product(&mix) - moment).abs() < 1e-9);
}

#[test]
fn bound_identity() {
    for n in 1..=10 {
        assert_eq!(classical_limit(n) + min_control_power(n), 1.0, "n={n}");
    }
    let cl = [2.0 / 3.0, 2.0 / 5.0, 2.0 / 9.0, 2.0 / 17.0];
    let cp = [1.0 / 3.0, 3.0 / 5.0, 7.0 / 9.0, 15.0 / 17.0];
    for n in 1..=4 {
        assert!((classical_limit(n) - cl[n - 1]).abs() < 1e-9);
        assert!((min_control_power(n) - cp[n - 1]).abs() < 1e-9);
    }
}

#[test]
fn oracle_agrees_with_sampling_on_the_catalog() {
    for id in standard_catalog() {
        // The two-controller N = 3 channels are slow to sample sequentially;
        // they share their mixtures with the M = 1 cases.
        if id.teleported_qubits() == 3 && matches!(id, SchemeId::NGhz { m: 2, .. }) {
            continue;
        }
        let s = Scheme::build(id).unwrap();
        let cfg = McConfig::new(400, 17, InputMode::Arbitrary);
        for m in 0..s.controller_count() {
            let exact = average_ncf_pauli(&reconstruct_mixture(&s.spec, m).unwrap());
            let est = average_ncf_mc(&s.spec, m, &cfg).unwrap();
            assert!(
                est.agrees_with(exact),
                "{id:?} m={m}: mc {} ± {} vs {exact}",
                est.mean,
                est.stderr
            );
            assert!(exact >= 1.0 / (1u64 << s.n()) as f64 - 1e-9);
        }
    }
}

#[test]
fn closed_form_values() {
    let f = |id| {
        let s = Scheme::build(id).unwrap();
        average_ncf_analytic(&s.spec, 0, InputMode::Arbitrary).unwrap()
    };
    assert!((f(SchemeId::TwoGhz) - 0.4).abs() < 1e-9);
    for n in 1..=3 {
        assert!((f(SchemeId::NGhz { n, m: 1 }) - classical_limit(n)).abs() < 1e-9);
        let d = (1u64 << n) as f64;
        let yang = (d / 2.0 + 1.0) / (d + 1.0);
        for variant in [YangVariant::PhaseFlip, YangVariant::Singlet] {
            assert!((f(SchemeId::Yang { n, m: 1, variant }) - yang).abs() < 1e-9);
        }
        assert!((f(SchemeId::Man { n, m: 1 }) - yang).abs() < 1e-9);
    }
    assert!(5.0 / 9.0 > classical_limit(3));
}

#[test]
fn uncovered_frame_beats_the_w_bound() {
    for n in 2..=3 {
        let s = Scheme::partial_nghz(n, n - 1).unwrap();
        let exact = average_ncf_analytic(&s.spec, 0, InputMode::Arbitrary).unwrap();
        let est = average_ncf_mc(&s.spec, 0, &McConfig::new(4000, 3, InputMode::Arbitrary))
            .unwrap();
        let w = 1.0 / (1u64 << (n - 1)) as f64;
        assert!(est.agrees_with(exact));
        assert!(est.mean - 3.0 * est.stderr > w, "n={n}: {est:?}");
        assert!(w > classical_limit(n));
    }
}

#[test]
fn pe4_formula_matches_sampling() {
    let grid = simplex_grid(4).unwrap();
    // Ten spread-out points of the 20-point grid.
    for sq in grid.iter().step_by(2) {
        let p = Pe4Params::from_squared(sq[0], sq[1], sq[2], sq[3]).unwrap();
        let s = Scheme::pe4(p).unwrap();
        let est = average_ncf_mc(&s.spec, 0, &McConfig::new(1000, 8, InputMode::Arbitrary))
            .unwrap();
        let exact = pe4_ncf_analytic(&p);
        assert!(est.agrees_with(exact), "{sq:?}: {est:?} vs {exact}");
        let oracle = average_ncf_analytic(&s.spec, 0, InputMode::Arbitrary).unwrap();
        assert!((oracle - exact).abs() < 1e-9);
    }
}

#[test]
fn yang_product_inputs_lose_two_thirds_per_qubit() {
    for n in 2..=3 {
        let s = Scheme::yang(n, 1, YangVariant::PhaseFlip).unwrap();
        for q in 0..n {
            let est = per_qubit_ncf(&s.spec, 0, q, 1000, 5).unwrap();
            assert!(est.agrees_with(2.0 / 3.0), "n={n} q={q}: {est:?}");
            let mix = reconstruct_mixture(&s.spec, 0).unwrap().marginal(q).unwrap();
            assert!((average_ncf_pauli(&mix) - 2.0 / 3.0).abs() < 1e-9);
        }
        let report = verdict(&s, Method::Analytic, &McConfig::new(1000, 0, InputMode::Product))
            .unwrap();
        assert!(report.criteria.passed, "product-mode Yang N={n}");
        let arbitrary = verdict(&s, Method::Analytic, &McConfig::default()).unwrap();
        assert!(!arbitrary.criteria.passed);
    }
}

#[test]
fn pe4_verdicts() {
    let run = |a2: f64| {
        let rest = (1.0 - a2) / 3.0;
        let s = Scheme::pe4(Pe4Params::from_squared(a2, rest, rest, rest).unwrap()).unwrap();
        verdict(&s, Method::Analytic, &McConfig::default()).unwrap()
    };
    let ok = run(0.4);
    assert!((ok.controllers[0].figures.ncf - 0.6).abs() < 1e-9);
    assert!(ok.criteria.passed);
    let bad = run(0.8);
    assert!((bad.controllers[0].figures.ncf - (0.8 + 0.2 / 3.0)).abs() < 1e-9);
    assert!(!bad.criteria.passed);
}

#[test]
fn sweep_range_over_the_simplex() {
    let values: Vec<(f64, [f64; 4])> = simplex_grid(11)
        .unwrap()
        .into_iter()
        .map(|sq| {
            let p = Pe4Params::from_squared(sq[0], sq[1], sq[2], sq[3]).unwrap();
            (pe4_ncf_analytic(&p), sq)
        })
        .collect();
    let min = values.iter().map(|v| v.0).fold(f64::INFINITY, f64::min);
    let max = values.iter().map(|v| v.0).fold(f64::NEG_INFINITY, f64::max);
    assert!((min - 1.0 / 3.0).abs() < 1e-9);
    assert!((max - 1.0).abs() < 1e-9);
    // Restricted to a² ≥ b², c², d² the floor is the uniform point.
    let dominant_min = values
        .iter()
        .filter(|(_, sq)| sq[1..].iter().all(|&x| sq[0] >= x - 1e-12))
        .map(|v| v.0)
        .fold(f64::INFINITY, f64::min);
    assert!(dominant_min >= 0.5 - 1e-9);
}

/// Runs samples in reverse, then restores index order.
struct Reversed;

impl SampleRunner for Reversed {
    fn run(&self, count: usize, sample: &(dyn Fn(u64) -> Result<f64> + Sync)) -> Result<Vec<f64>> {
        let mut v: Vec<f64> = (0..count as u64).rev().map(sample).collect::<Result<_>>()?;
        v.reverse();
        Ok(v)
    }
}

#[test]
fn estimates_do_not_depend_on_schedule() {
    let s = Scheme::two_ghz().unwrap();
    let cfg = McConfig::new(300, 99, InputMode::Arbitrary);
    let a = ctpower_core::analysis::average_ncf_mc_with(&Sequential, &s.spec, 0, &cfg).unwrap();
    let b = ctpower_core::analysis::average_ncf_mc_with(&Reversed, &s.spec, 0, &cfg).unwrap();
    assert_eq!(a, b);
    let c = average_ncf_mc(&s.spec, 0, &McConfig::new(300, 100, InputMode::Arbitrary)).unwrap();
    assert_ne!(a, c);
}

#[test]
fn sample_streams_are_independent() {
    let x = haar_random_state(2, &mut sample_rng(1, 0));
    let y = haar_random_state(2, &mut sample_rng(1, 1));
    assert_ne!(x, y);
    assert_eq!(x, haar_random_state(2, &mut sample_rng(1, 0)));
}

#[test]
fn estimate_of_constant_samples() {
    let e = McEstimate::from_samples(&[0.5; 200]);
    assert_eq!(e.mean, 0.5);
    assert_eq!(e.stderr, 0.0);
    assert_eq!(e.samples, 200);
}

#[test]
fn sampling_rejects_tiny_runs() {
    let s = Scheme::ghz().unwrap();
    let err = average_ncf_mc(&s.spec, 0, &McConfig::new(99, 0, InputMode::Arbitrary));
    assert!(matches!(err, Err(Error::InvalidParameters(_))));
    assert!(per_qubit_ncf(&s.spec, 0, 1, 500, 0).is_err());
}

#[test]
fn sweep_rows_are_perfect_teleportation() {
    let rows = ctpower_core::analysis::pe4_sweep(5, &McConfig::new(100, 2, InputMode::Arbitrary))
        .unwrap();
    assert_eq!(rows.len(), 35);
    for r in &rows {
        assert!((r.cf - 1.0).abs() < 1e-9, "{:?}", r.squared);
        assert_eq!(r.pass, r.ncf_analytic <= 2.0 / 3.0 + 1e-9);
        assert!(r.ncf_mc.agrees_with(r.ncf_analytic), "{:?}: {:?}", r.squared, r.ncf_mc);
    }
}
