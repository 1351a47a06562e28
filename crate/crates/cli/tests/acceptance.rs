//! One line per acceptance criterion; exits nonzero if any fails.

use std::process::ExitCode;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ctpower::app::analyze_report;
use ctpower::args::{AnalyzeArgs, FormatArg, MethodArg, ModeArg, OutputArgs, SamplingArgs, SchemeArgs, SchemeName};
use ctpower::report::render_json;
use ctpower::Parallel;
use ctpower_core::analysis::{
    average_ncf_mc_with, average_ncf_pauli, classical_limit, min_control_power, pe4_ncf_analytic,
    per_qubit_ncf_with, reconstruct_mixture, simplex_grid, verdict, verdict_with, McEstimate,
};
use ctpower_core::catalog::standard_catalog;
use ctpower_core::measure::measure;
use ctpower_core::protocol::conditioned_fidelity;
use ctpower_core::qstate::haar_random_state;
use ctpower_core::{
    InputMode, McConfig, MeasurementBasis, Method, Pe4Params, Scheme, Sequential, YangVariant,
};

const SAMPLES: usize = 10_000;
const SEED: u64 = 20_240_601;

struct Tally {
    failed: usize,
}

impl Tally {
    fn line(&mut self, id: usize, pass: bool, what: String) {
        if !pass {
            self.failed += 1;
        }
        println!("{}  [{id:>2}] {what}", if pass { "PASS" } else { "FAIL" });
    }
}

fn cfg() -> McConfig {
    McConfig::new(SAMPLES, SEED, InputMode::Arbitrary)
}

fn mc(s: &Scheme, m: usize) -> McEstimate {
    average_ncf_mc_with(&Parallel, &s.spec, m, &cfg()).unwrap()
}

fn pe4(a2: f64, b2: f64, c2: f64, d2: f64) -> Scheme {
    Scheme::pe4(Pe4Params::from_squared(a2, b2, c2, d2).unwrap()).unwrap()
}

fn pe4_sets() -> Vec<Scheme> {
    vec![
        pe4(0.25, 0.25, 0.25, 0.25),
        pe4(0.4, 0.3, 0.2, 0.1),
        pe4(0.7, 0.1, 0.1, 0.1),
        pe4(0.1, 0.2, 0.3, 0.4),
        pe4(0.5, 0.5, 0.0, 0.0),
    ]
}

fn fmt(e: &McEstimate) -> String {
    format!("{:.5} ± {:.5}", e.mean, e.stderr)
}

fn perfect_teleportation(t: &mut Tally) {
    let mut schemes: Vec<Scheme> =
        standard_catalog().into_iter().map(|id| Scheme::build(id).unwrap()).collect();
    schemes.extend(pe4_sets());
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst: f64 = 0.0;
    for s in &schemes {
        for _ in 0..20 {
            let phi = haar_random_state(s.n(), &mut rng);
            let cf = conditioned_fidelity(&s.spec, &phi).unwrap();
            worst = worst.max((cf - 1.0).abs());
        }
    }
    t.line(
        1,
        worst <= 1e-9,
        format!(
            "cooperative fidelity is 1 on {} schemes x 20 Haar inputs (worst |CF-1| = {worst:.1e})",
            schemes.len()
        ),
    );
}

fn two_ghz(t: &mut Tally) {
    let s = Scheme::two_ghz().unwrap();
    let exact = 1.0 - average_ncf_pauli(&reconstruct_mixture(&s.spec, 0).unwrap());
    let est = mc(&s, 0);
    let cp = McEstimate {
        mean: 1.0 - est.mean,
        ..est
    };
    let pass = (exact - 0.6).abs() <= 1e-9 && cp.agrees_with(0.6);
    t.line(
        2,
        pass,
        format!("2-GHZ control power 3/5: analytic {exact:.12}, monte carlo {}", fmt(&cp)),
    );
}

fn nghz(t: &mut Tally) {
    let mut pass = true;
    let mut parts = vec![];
    for n in 1..=3 {
        let s = Scheme::nghz(n, 1).unwrap();
        let cp = 1.0 - average_ncf_pauli(&reconstruct_mixture(&s.spec, 0).unwrap());
        pass &= (cp - min_control_power(n)).abs() <= 1e-9;
        parts.push(format!("N={n} {cp:.9}"));
    }
    let s = Scheme::nghz(3, 1).unwrap();
    let start = Instant::now();
    let est = mc(&s, 0);
    let secs = start.elapsed().as_secs_f64();
    pass &= secs <= 60.0 && est.agrees_with(classical_limit(3));
    t.line(
        3,
        pass,
        format!(
            "N-GHZ control power {}; N=3 monte carlo ncf {} in {secs:.1} s",
            parts.join(", "),
            fmt(&est)
        ),
    );
}

fn yang(t: &mut Tally) {
    let mut pass = true;
    let mut parts = vec![];
    for n in 2..=3 {
        let d = (1u64 << n) as f64;
        let target = (d / 2.0 + 1.0) / (d + 1.0);
        for variant in [YangVariant::PhaseFlip, YangVariant::Singlet] {
            let est = mc(&Scheme::yang(n, 1, variant).unwrap(), 0);
            pass &= est.agrees_with(target);
            if n == 3 {
                pass &= est.mean - est.band() > classical_limit(3);
            }
            parts.push(format!("N={n} v{} {}", variant.index(), fmt(&est)));
        }
    }
    pass &= 5.0 / 9.0 > classical_limit(3);
    t.line(
        4,
        pass,
        format!("Yang average ncf (3/5, 5/9, above 2/9): {}", parts.join("; ")),
    );
}

fn man(t: &mut Tally) {
    let s = Scheme::man(3, 1).unwrap();
    let est = mc(&s, 0);
    let report = verdict(&s, Method::Analytic, &cfg()).unwrap();
    let uncontrolled = report.criteria.uncontrolled_qubits.len();
    let sufficient = report.criteria.power_sufficient[0];
    let pass = est.agrees_with(5.0 / 9.0) && uncontrolled == 2 && !sufficient;
    t.line(
        5,
        pass,
        format!(
            "Man(3,1) ncf {} vs 5/9, uncontrolled bob qubits {uncontrolled}, power sufficient {sufficient}",
            fmt(&est)
        ),
    );
}

fn yang_product(t: &mut Tally) {
    let mut pass = true;
    let mut parts = vec![];
    for n in 2..=3 {
        let s = Scheme::yang(n, 1, YangVariant::PhaseFlip).unwrap();
        for q in 0..n {
            let est = per_qubit_ncf_with(&Parallel, &s.spec, 0, q, SAMPLES, SEED).unwrap();
            pass &= est.agrees_with(2.0 / 3.0);
            parts.push(format!("N={n} q{q} {:.4}", est.mean));
        }
    }
    t.line(6, pass, format!("Yang product-input per-qubit ncf 2/3: {}", parts.join(", ")));
}

fn pe4_checks(t: &mut Tally) {
    let grid = simplex_grid(4).unwrap();
    let mut pass = true;
    let mut worst: f64 = 0.0;
    let points: Vec<[f64; 4]> = grid.iter().step_by(2).copied().collect();
    for sq in &points {
        let s = pe4(sq[0], sq[1], sq[2], sq[3]);
        let p = Pe4Params::from_squared(sq[0], sq[1], sq[2], sq[3]).unwrap();
        let est = mc(&s, 0);
        let exact = pe4_ncf_analytic(&p);
        pass &= est.agrees_with(exact);
        worst = worst.max((est.mean - exact).abs() / est.band());
    }
    let low = pe4(0.4, 0.2, 0.2, 0.2);
    let low_report = verdict(&low, Method::Analytic, &cfg()).unwrap();
    let low_ncf = low_report.controllers[0].figures.ncf;
    let high = pe4(0.8, 0.2 / 3.0, 0.2 / 3.0, 0.2 / 3.0);
    let high_report = verdict(&high, Method::Analytic, &cfg()).unwrap();
    let high_ncf = high_report.controllers[0].figures.ncf;
    pass &= (low_ncf - 0.6).abs() <= 1e-9 && low_ncf <= 2.0 / 3.0 && low_report.criteria.passed;
    pass &= (high_ncf - (0.8 + 0.2 / 3.0)).abs() <= 1e-9 && !high_report.criteria.passed;
    t.line(
        7,
        pass,
        format!(
            "PE4 formula vs monte carlo on {} simplex points (worst {worst:.2} of band); a2=0.4 ncf {low_ncf:.6} passes, a2=0.8 ncf {high_ncf:.6} fails",
            points.len()
        ),
    );
}

fn bounds(t: &mut Tally) {
    let cl = [2.0 / 3.0, 2.0 / 5.0, 2.0 / 9.0, 2.0 / 17.0];
    let cp = [1.0 / 3.0, 3.0 / 5.0, 7.0 / 9.0, 15.0 / 17.0];
    let mut pass = true;
    for n in 1..=4 {
        pass &= (classical_limit(n) - cl[n - 1]).abs() <= 1e-9;
        pass &= (min_control_power(n) - cp[n - 1]).abs() <= 1e-9;
        pass &= (classical_limit(n) + min_control_power(n) - 1.0).abs() <= 1e-15;
    }
    t.line(8, pass, "classical limits 2/3, 2/5, 2/9, 2/17 and minimum control powers 1/3, 3/5, 7/9, 15/17".into());
}

fn uncovered_frame(t: &mut Tally) {
    let mut pass = true;
    let mut parts = vec![];
    for n in 2..=3 {
        let s = Scheme::partial_nghz(n, n - 1).unwrap();
        let est = mc(&s, 0);
        let w = 1.0 / (1u64 << (n - 1)) as f64;
        pass &= est.mean - est.band() > w && w > classical_limit(n);
        parts.push(format!("N={n} {} > {w} > {:.4}", fmt(&est), classical_limit(n)));
    }
    t.line(9, pass, format!("controller missing one frame: {}", parts.join("; ")));
}

fn property_suites(t: &mut Tally) {
    // State invariants on seeded samples.
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 1);
    let mut states_ok = true;
    for n in 2..=5 {
        for _ in 0..25 {
            let s = haar_random_state(n, &mut rng);
            states_ok &= (s.norm_sqr() - 1.0).abs() <= 1e-12;
            for discard in [vec![0], vec![n - 1], (1..n).collect::<Vec<_>>()] {
                let rho = s.partial_trace(&discard).unwrap();
                states_ok &= (rho.trace().re - 1.0).abs() <= 1e-9;
                states_ok &= rho.hermiticity_error() <= 1e-9;
                states_ok &= rho.eigenvalues().iter().all(|&e| e >= -1e-9);
                states_ok &= rho.purity() >= 1.0 / rho.dim() as f64 - 1e-9;
            }
        }
    }
    let mut measure_ok = true;
    for basis in [
        MeasurementBasis::Computational,
        MeasurementBasis::XBasis,
        MeasurementBasis::Bell,
        MeasurementBasis::GhzBasis(3),
    ] {
        for _ in 0..25 {
            let s = haar_random_state(4, &mut rng);
            let targets: Vec<usize> = (0..basis.arity()).collect();
            let total: f64 = measure(&s, basis, &targets).unwrap().iter().map(|b| b.probability).sum();
            measure_ok &= (total - 1.0).abs() <= 1e-9;
        }
    }

    // Oracle agreement over every catalog mixture.
    let oracle_cfg = McConfig::new(1_000, SEED, InputMode::Arbitrary);
    let mut oracle_ok = true;
    let mut mixtures = 0;
    for id in standard_catalog() {
        let s = Scheme::build(id).unwrap();
        for m in 0..s.controller_count() {
            let exact = average_ncf_pauli(&reconstruct_mixture(&s.spec, m).unwrap());
            let est = average_ncf_mc_with(&Parallel, &s.spec, m, &oracle_cfg).unwrap();
            oracle_ok &= est.agrees_with(exact);
            mixtures += 1;
        }
    }

    // Determinism: byte-identical reports and schedule-independent sampling.
    let args = AnalyzeArgs {
        scheme: SchemeArgs {
            scheme: SchemeName::Nghz,
            n: Some(2),
            m: Some(2),
            variant: None,
            a2: None,
            b2: None,
            c2: None,
            d2: None,
        },
        method: MethodArg::Both,
        sampling: SamplingArgs {
            samples: 500,
            seed: SEED,
            mode: ModeArg::Arbitrary,
        },
        format: FormatArg::Json,
        output: OutputArgs {
            out: None,
            strict: false,
        },
    };
    let a = render_json(&analyze_report(&args).unwrap()).unwrap();
    let b = render_json(&analyze_report(&args).unwrap()).unwrap();
    let s = Scheme::yang(2, 2, YangVariant::Singlet).unwrap();
    let small = McConfig::new(500, SEED, InputMode::Product);
    let par = verdict_with(&Parallel, &s, Method::MonteCarlo, &small).unwrap();
    let seq = verdict_with(&Sequential, &s, Method::MonteCarlo, &small).unwrap();
    let deterministic = a == b && par == seq;

    t.line(
        10,
        states_ok && measure_ok && oracle_ok && deterministic,
        format!(
            "properties: state invariants {states_ok}, measurement completeness {measure_ok}, oracle agreement on {mixtures} mixtures {oracle_ok}, determinism {deterministic}"
        ),
    );
}

fn main() -> ExitCode {
    let start = Instant::now();
    let mut t = Tally { failed: 0 };
    perfect_teleportation(&mut t);
    two_ghz(&mut t);
    nghz(&mut t);
    yang(&mut t);
    man(&mut t);
    yang_product(&mut t);
    pe4_checks(&mut t);
    bounds(&mut t);
    uncovered_frame(&mut t);
    property_suites(&mut t);
    println!(
        "acceptance: {} of 10 criteria passed in {:.1} s",
        10 - t.failed,
        start.elapsed().as_secs_f64()
    );
    if t.failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
