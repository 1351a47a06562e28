//! Reference values recomputed end to end, one check per line.

use std::fmt::Write as _;

use anyhow::{Context, Result};
use ctpower_core::analysis::{
    average_ncf_analytic, average_ncf_mc_with, classical_limit, mean_conditioned_fidelity,
    min_control_power, pe4_ncf_analytic, per_qubit_ncf_with, uncontrolled_qubits, McEstimate,
    ANALYTIC_TOLERANCE,
};
use ctpower_core::protocol::CorrectionTable;
use ctpower_core::{InputMode, McConfig, PauliString, Pe4Params, Scheme, YangVariant};
use serde::{Deserialize, Serialize};

use crate::runner::Parallel;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub stderr: Option<f64>,
    pub pass: bool,
}

impl Check {
    fn exact(name: impl Into<String>, expected: f64, value: f64) -> Self {
        Check {
            name: name.into(),
            expected: format!("{expected:.9}"),
            value,
            stderr: None,
            pass: (value - expected).abs() <= ANALYTIC_TOLERANCE,
        }
    }

    fn sampled(name: impl Into<String>, expected: f64, est: McEstimate) -> Self {
        Check {
            name: name.into(),
            expected: format!("{expected:.9}"),
            value: est.mean,
            stderr: Some(est.stderr),
            pass: est.agrees_with(expected),
        }
    }

    fn above(name: impl Into<String>, bound: f64, est: McEstimate) -> Self {
        Check {
            name: name.into(),
            expected: format!("> {bound:.9}"),
            value: est.mean,
            stderr: Some(est.stderr),
            pass: est.mean - est.band() > bound,
        }
    }
}

/// Replaces the correction for the all-zero announcement with a wrong one.
pub fn corrupt(scheme: Scheme) -> Result<Scheme> {
    let table = scheme.spec.table()?.into_owned();
    let n = table.bob_qubits();
    let mut bad = CorrectionTable::new(n);
    let mut hit = false;
    for (k, v) in table.iter() {
        let entry = if k.iter().all(|&o| o == 0) {
            hit = true;
            let flip: PauliString = PauliString::from_masks(n, 1 << (n - 1), 0);
            v.mul_ignoring_phase(&flip)?
        } else {
            v.clone()
        };
        bad.insert(k.clone(), entry)?;
    }
    anyhow::ensure!(hit, "no all-zero announcement to corrupt");
    let spec = scheme.spec.with_table(bad)?;
    Ok(Scheme { spec, ..scheme })
}

pub fn run(samples: usize, seed: u64, corrupt_table: bool) -> Result<Vec<Check>> {
    let cfg = McConfig::new(samples, seed, InputMode::Arbitrary);
    let mut checks = Vec::new();
    let mc = |s: &Scheme, cfg: &McConfig| {
        average_ncf_mc_with(&Parallel, &s.spec, 0, cfg).context("sampling failed")
    };

    let mut two = Scheme::two_ghz()?;
    if corrupt_table {
        two = corrupt(two)?;
    }
    checks.push(Check::exact(
        "2ghz conditioned fidelity",
        1.0,
        mean_conditioned_fidelity(&two.spec, InputMode::Arbitrary, seed)?,
    ));
    let cp = 1.0 - average_ncf_analytic(&two.spec, 0, InputMode::Arbitrary)?;
    checks.push(Check::exact("2ghz control power (analytic)", 0.6, cp));
    let est = mc(&two, &cfg)?;
    let cp_est = McEstimate {
        mean: 1.0 - est.mean,
        ..est
    };
    checks.push(Check::sampled("2ghz control power (monte carlo)", 0.6, cp_est));

    for n in 1..=3 {
        let s = Scheme::nghz(n, 1)?;
        let cp = 1.0 - average_ncf_analytic(&s.spec, 0, InputMode::Arbitrary)?;
        checks.push(Check::exact(
            format!("nghz n={n} control power"),
            min_control_power(n),
            cp,
        ));
    }

    for n in 2..=3 {
        let d = (1u64 << n) as f64;
        let target = (d / 2.0 + 1.0) / (d + 1.0);
        for variant in [YangVariant::PhaseFlip, YangVariant::Singlet] {
            let s = Scheme::yang(n, 1, variant)?;
            checks.push(Check::sampled(
                format!("yang n={n} variant={} average ncf", variant.index()),
                target,
                mc(&s, &cfg)?,
            ));
        }
    }
    checks.push(Check::above(
        "yang n=3 closed-form ncf vs classical limit",
        classical_limit(3),
        McEstimate {
            mean: 5.0 / 9.0,
            stderr: 0.0,
            samples: 1,
        },
    ));

    let man = Scheme::man(3, 1)?;
    checks.push(Check::sampled("man n=3 m=1 average ncf", 5.0 / 9.0, mc(&man, &cfg)?));
    checks.push(Check::exact(
        "man n=3 m=1 uncontrolled qubits",
        2.0,
        uncontrolled_qubits(&man.spec, seed)?.len() as f64,
    ));

    for n in 2..=3 {
        let s = Scheme::yang(n, 1, YangVariant::PhaseFlip)?;
        for q in 0..n {
            let est = per_qubit_ncf_with(&Parallel, &s.spec, 0, q, samples, seed)?;
            checks.push(Check::sampled(
                format!("yang n={n} product-input ncf, bob qubit {q}"),
                2.0 / 3.0,
                est,
            ));
        }
    }

    for a2 in [0.4, 0.8] {
        let rest = (1.0 - a2) / 3.0;
        let p = Pe4Params::from_squared(a2, rest, rest, rest)?;
        let s = Scheme::pe4(p)?;
        checks.push(Check::sampled(
            format!("pe4 a2={a2} average ncf"),
            pe4_ncf_analytic(&p),
            mc(&s, &cfg)?,
        ));
    }

    let limits = [2.0 / 3.0, 2.0 / 5.0, 2.0 / 9.0, 2.0 / 17.0];
    for (i, &cl) in limits.iter().enumerate() {
        checks.push(Check::exact(
            format!("classical limit n={}", i + 1),
            cl,
            classical_limit(i + 1),
        ));
    }

    for n in 2..=3 {
        let s = Scheme::partial_nghz(n, n - 1)?;
        let w = 1.0 / (1u64 << (n - 1)) as f64;
        checks.push(Check::above(
            format!("nghz n={n} with one frame uncovered, average ncf"),
            w,
            mc(&s, &cfg)?,
        ));
    }
    Ok(checks)
}

pub fn render_table(checks: &[Check]) -> String {
    let mut out = String::new();
    for c in checks {
        let value = match c.stderr {
            Some(e) => format!("{:.6} ± {:.6}", c.value, e),
            None => format!("{:.9}", c.value),
        };
        let _ = writeln!(
            out,
            "{}  {:<52} expected {:<14} got {}",
            if c.pass { "PASS" } else { "FAIL" },
            c.name,
            c.expected,
            value
        );
    }
    let failed = checks.iter().filter(|c| !c.pass).count();
    let _ = writeln!(out, "{} checks, {} failed", checks.len(), failed);
    out
}
