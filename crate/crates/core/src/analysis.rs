//! Control power of a scheme and the verdicts built on it.
//!
//! Two independent routes produce an average non-conditioned fidelity:
//!
//! * Monte Carlo: Haar-random inputs pushed through
//!   [`bob_state_without`](crate::protocol::bob_state_without), which performs
//!   the actual partial trace over the silent controller.
//! * Closed form: the silent-controller state is rebuilt from the correction
//!   table as a Pauli mixture `Σ qₖ Pₖ|φ⟩⟨φ|Pₖ`, whose Haar average is
//!   `Σ qₖ (d + |tr Pₖ|²) / (d(d + 1))`.
//!
//! Every Monte Carlo sample draws its input from its own ChaCha stream
//! `(seed, index)`, so results do not depend on how samples are scheduled.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::catalog::{Scheme, SchemeId};
use crate::channels::Pe4Params;
use crate::error::{Error, Result};
use crate::protocol::{
    conditioned_fidelity, ncf, reference_correction, run_uncorrected, ProtocolSpec,
    ReferenceFrame,
};
use crate::qstate::{fidelity, haar_product_state, haar_random_state, PauliString, PureState};

/// Exact-check tolerance for analytic quantities.
pub const ANALYTIC_TOLERANCE: f64 = 1e-9;
/// Monte Carlo checks use this many standard errors.
pub const MC_SIGMAS: f64 = 3.0;
pub const MIN_SAMPLES: usize = 100;
pub const DEFAULT_SAMPLES: usize = 10_000;
/// Inputs used to estimate the conditioned fidelity in a report.
pub const CF_INPUTS: usize = 20;

const CF_STREAM_SALT: u64 = 0xcf_cf_cf_cf;
const CONTROL_PROBE_SALT: u64 = 0xc0_17_10_11;

/// Best classical fidelity for an `n`-qubit state, `2 / (1 + 2ⁿ)`.
pub fn classical_limit(n: usize) -> f64 {
    let d = (1u64 << n) as f64;
    2.0 / (1.0 + d)
}

/// Smallest control power that keeps the silent-controller fidelity at or
/// below the classical limit, `(2ⁿ − 1) / (2ⁿ + 1)`.
pub fn min_control_power(n: usize) -> f64 {
    let d = (1u64 << n) as f64;
    (d - 1.0) / (d + 1.0)
}

/// Qubits a single controller must hold to have any chance of sufficient
/// control over an `n`-qubit teleportation. Necessary, not sufficient.
pub fn controller_qubit_bound(n: usize) -> usize {
    n
}

/// `a² + (b² + c² + d²)/3`, with the silent-controller frame taken at the
/// `a` outcome.
pub fn pe4_ncf_analytic(p: &Pe4Params) -> f64 {
    let [a2, b2, c2, d2] = p.squared();
    a2 + (b2 + c2 + d2) / 3.0
}

/// Distribution of the teleported input.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InputMode {
    /// Haar measure on all `n`-qubit pure states.
    Arbitrary,
    /// Product of independent single-qubit Haar states.
    Product,
}

/// How an average NCF is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Analytic,
    MonteCarlo,
    Both,
}

impl Method {
    pub fn analytic(self) -> bool {
        matches!(self, Method::Analytic | Method::Both)
    }

    pub fn monte_carlo(self) -> bool {
        matches!(self, Method::MonteCarlo | Method::Both)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McConfig {
    pub samples: usize,
    pub seed: u64,
    pub mode: InputMode,
}

impl Default for McConfig {
    fn default() -> Self {
        Self {
            samples: DEFAULT_SAMPLES,
            seed: 0,
            mode: InputMode::Arbitrary,
        }
    }
}

impl McConfig {
    pub fn new(samples: usize, seed: u64, mode: InputMode) -> Self {
        Self {
            samples,
            seed,
            mode,
        }
    }

    fn check(&self) -> Result<()> {
        if self.samples < MIN_SAMPLES {
            return Err(Error::InvalidParameters(format!(
                "at least {MIN_SAMPLES} samples are required, got {}",
                self.samples
            )));
        }
        Ok(())
    }
}

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    /// Sample standard deviation over `√samples`.
    pub stderr: f64,
    pub samples: usize,
}

impl McEstimate {
    /// Two-pass mean and unbiased variance, summed in slice order.
    pub fn from_samples(values: &[f64]) -> Self {
        let n = values.len();
        if n == 0 {
            return Self {
                mean: f64::NAN,
                stderr: f64::NAN,
                samples: 0,
            };
        }
        let mean = values.iter().sum::<f64>() / n as f64;
        let stderr = if n > 1 {
            let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
            (var / n as f64).sqrt()
        } else {
            0.0
        };
        Self {
            mean,
            stderr,
            samples: n,
        }
    }

    /// `3·stderr`, floored at [`ANALYTIC_TOLERANCE`] so that zero-variance
    /// estimates still tolerate rounding.
    pub fn band(&self) -> f64 {
        (MC_SIGMAS * self.stderr).max(ANALYTIC_TOLERANCE)
    }

    /// `|mean − target| ≤ band()`.
    pub fn agrees_with(&self, target: f64) -> bool {
        (self.mean - target).abs() <= self.band()
    }
}

/// Evaluates indexed samples; implementations may run them in any order or
/// in parallel but must return them in index order.
pub trait SampleRunner {
    fn run(&self, count: usize, sample: &(dyn Fn(u64) -> Result<f64> + Sync)) -> Result<Vec<f64>>;
}

/// Evaluates samples one after another on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl SampleRunner for Sequential {
    fn run(&self, count: usize, sample: &(dyn Fn(u64) -> Result<f64> + Sync)) -> Result<Vec<f64>> {
        (0..count as u64).map(sample).collect()
    }
}

/// RNG for sample `index` of a run seeded with `seed`.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn sample_input(n: usize, mode: InputMode, rng: &mut ChaCha8Rng) -> PureState {
    match mode {
        InputMode::Arbitrary => haar_random_state(n, rng),
        InputMode::Product => haar_product_state(n, rng),
    }
}

/// NCF for the input drawn by sample `index`.
pub fn ncf_sample(
    spec: &ProtocolSpec,
    excluded: usize,
    mode: InputMode,
    seed: u64,
    index: u64,
) -> Result<f64> {
    let input = sample_input(spec.input_qubits(), mode, &mut sample_rng(seed, index));
    ncf(spec, &input, excluded)
}

pub fn average_ncf_mc(spec: &ProtocolSpec, excluded: usize, cfg: &McConfig) -> Result<McEstimate> {
    average_ncf_mc_with(&Sequential, spec, excluded, cfg)
}

pub fn average_ncf_mc_with(
    runner: &dyn SampleRunner,
    spec: &ProtocolSpec,
    excluded: usize,
    cfg: &McConfig,
) -> Result<McEstimate> {
    cfg.check()?;
    let spec = resolved(spec)?;
    let values = runner.run(cfg.samples, &|i| {
        ncf_sample(&spec, excluded, cfg.mode, cfg.seed, i)
    })?;
    Ok(McEstimate::from_samples(&values))
}

/// Per-qubit NCF `⟨φₙ|Tr_{B≠n} ρ_B|φₙ⟩` averaged over product inputs.
pub fn per_qubit_ncf(
    spec: &ProtocolSpec,
    excluded: usize,
    qubit: usize,
    samples: usize,
    seed: u64,
) -> Result<McEstimate> {
    per_qubit_ncf_with(&Sequential, spec, excluded, qubit, samples, seed)
}

pub fn per_qubit_ncf_with(
    runner: &dyn SampleRunner,
    spec: &ProtocolSpec,
    excluded: usize,
    qubit: usize,
    samples: usize,
    seed: u64,
) -> Result<McEstimate> {
    McConfig::new(samples, seed, InputMode::Product).check()?;
    let n = spec.input_qubits();
    if qubit >= n {
        return Err(Error::QubitOutOfRange {
            index: qubit,
            num_qubits: n,
        });
    }
    let spec = resolved(spec)?;
    let values = runner.run(samples, &|i| {
        let mut rng = sample_rng(seed, i);
        let factors: Vec<PureState> = (0..n).map(|_| haar_random_state(1, &mut rng)).collect();
        let input = crate::qstate::tensor_all(&factors);
        let rho = crate::protocol::bob_state_without(&spec, &input, excluded)?;
        let marginal = if n == 1 {
            rho
        } else {
            let others: Vec<usize> = (0..n).filter(|&q| q != qubit).collect();
            rho.partial_trace(&others)?
        };
        fidelity(&factors[qubit], &marginal)
    })?;
    Ok(McEstimate::from_samples(&values))
}

fn resolved(spec: &ProtocolSpec) -> Result<alloc::borrow::Cow<'_, ProtocolSpec>> {
    use alloc::borrow::Cow;
    match spec.corrections() {
        crate::protocol::Corrections::Table(_) => Ok(Cow::Borrowed(spec)),
        crate::protocol::Corrections::Derive => Ok(Cow::Owned(spec.clone().resolved()?)),
    }
}

/// A probability distribution over Pauli strings.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliMixture {
    num_qubits: usize,
    terms: Vec<(PauliString, f64)>,
}

impl PauliMixture {
    /// Merges repeated strings; weights must be nonnegative and sum to 1.
    pub fn new(num_qubits: usize, terms: Vec<(PauliString, f64)>) -> Result<Self> {
        let mut merged: BTreeMap<PauliString, f64> = BTreeMap::new();
        for (p, w) in terms {
            if p.num_qubits() != num_qubits {
                return Err(Error::ArityMismatch {
                    expected: num_qubits,
                    got: p.num_qubits(),
                });
            }
            if w.is_nan() || w < 0.0 {
                return Err(Error::InvalidParameters("negative mixture weight".into()));
            }
            *merged.entry(p).or_insert(0.0) += w;
        }
        let total: f64 = merged.values().sum();
        if (total - 1.0).abs() > ANALYTIC_TOLERANCE {
            return Err(Error::InvalidParameters(format!(
                "mixture weights sum to {total}"
            )));
        }
        Ok(Self {
            num_qubits,
            terms: merged.into_iter().collect(),
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.num_qubits
    }

    pub fn terms(&self) -> &[(PauliString, f64)] {
        &self.terms
    }

    pub fn weight_of(&self, p: &PauliString) -> f64 {
        self.terms
            .iter()
            .find(|(q, _)| q == p)
            .map_or(0.0, |(_, w)| *w)
    }

    /// The induced single-qubit mixture on `qubit` (for product inputs).
    pub fn marginal(&self, qubit: usize) -> Result<PauliMixture> {
        if qubit >= self.num_qubits {
            return Err(Error::QubitOutOfRange {
                index: qubit,
                num_qubits: self.num_qubits,
            });
        }
        PauliMixture::new(
            1,
            self.terms
                .iter()
                .map(|(p, w)| (p.restrict(qubit), *w))
                .collect(),
        )
    }
}

/// Haar average of `Σ qₖ |⟨φ|Pₖ|φ⟩|²`: `Σ qₖ (d + |tr Pₖ|²) / (d(d + 1))`.
pub fn average_ncf_pauli(mix: &PauliMixture) -> f64 {
    let d = mix.dim() as f64;
    mix.terms
        .iter()
        .map(|(p, w)| w * (d + p.trace_abs().powi(2)) / (d * (d + 1.0)))
        .sum()
}

/// Average of the same quantity over product inputs: each non-identity
/// letter contributes a factor `1/3`.
pub fn average_ncf_pauli_product(mix: &PauliMixture) -> f64 {
    mix.terms
        .iter()
        .map(|(p, w)| w * (1.0f64 / 3.0).powi(p.weight() as i32))
        .sum()
}

/// Rebuilds the silent-controller state as a Pauli mixture from the
/// correction table and the branch probabilities.
pub fn reconstruct_mixture(spec: &ProtocolSpec, excluded: usize) -> Result<PauliMixture> {
    reconstruct_mixture_frame(spec, excluded, &ReferenceFrame::Lowest)
}

pub fn reconstruct_mixture_frame(
    spec: &ProtocolSpec,
    excluded: usize,
    frame: &ReferenceFrame,
) -> Result<PauliMixture> {
    let table = spec.table()?;
    let span = spec.controller_outcome_span(excluded)?;
    let n = spec.input_qubits();
    // Branch probabilities of a Pauli-frame scheme do not depend on the input.
    let branches = run_uncorrected(spec, &PureState::basis(n, 0))?;
    let mut terms = Vec::with_capacity(branches.len());
    for b in branches {
        let actual = table.get(&b.outcomes).ok_or_else(|| Error::NoPauliFrame {
            outcomes: b.outcomes.clone(),
        })?;
        let partial: Vec<usize> = b
            .outcomes
            .iter()
            .enumerate()
            .filter(|(i, _)| !span.contains(i))
            .map(|(_, &o)| o)
            .collect();
        let (_, applied) = reference_correction(spec, &table, &partial, excluded, frame)?;
        terms.push((applied.mul_ignoring_phase(actual)?, b.probability));
    }
    PauliMixture::new(n, terms)
}

/// Closed-form average NCF without controller `excluded`.
pub fn average_ncf_analytic(spec: &ProtocolSpec, excluded: usize, mode: InputMode) -> Result<f64> {
    let mix = reconstruct_mixture(spec, excluded)?;
    Ok(match mode {
        InputMode::Arbitrary => average_ncf_pauli(&mix),
        InputMode::Product => average_ncf_pauli_product(&mix),
    })
}

/// `1 − f̄` by the chosen method; `Both` reports the analytic value.
pub fn control_power(
    spec: &ProtocolSpec,
    excluded: usize,
    method: Method,
    cfg: &McConfig,
) -> Result<f64> {
    let f = if method.analytic() {
        average_ncf_analytic(spec, excluded, cfg.mode)?
    } else {
        average_ncf_mc(spec, excluded, cfg)?.mean
    };
    Ok(1.0 - f)
}

/// For each Bob qubit, whether controller `controller`'s outcome changes
/// that qubit's conditional reduced state for the given input.
pub fn controlled_by(
    spec: &ProtocolSpec,
    controller: usize,
    input: &PureState,
) -> Result<Vec<bool>> {
    let span = spec.controller_outcome_span(controller)?;
    let n = spec.input_qubits();
    let mut groups: BTreeMap<Vec<usize>, Vec<PureState>> = BTreeMap::new();
    for b in run_uncorrected(spec, input)? {
        let key: Vec<usize> = b
            .outcomes
            .iter()
            .enumerate()
            .filter(|(i, _)| !span.contains(i))
            .map(|(_, &o)| o)
            .collect();
        groups.entry(key).or_default().push(b.bob_state);
    }
    let mut controlled = vec![false; n];
    for states in groups.values() {
        for (q, flag) in controlled.iter_mut().enumerate() {
            if *flag {
                continue;
            }
            let marginals: Vec<_> = states
                .iter()
                .map(|s| {
                    if n == 1 {
                        Ok(s.to_density())
                    } else {
                        let others: Vec<usize> = (0..n).filter(|&o| o != q).collect();
                        s.partial_trace(&others)
                    }
                })
                .collect::<Result<_>>()?;
            for m in &marginals[1..] {
                if m.max_distance(&marginals[0])? > 1e-7 {
                    *flag = true;
                    break;
                }
            }
        }
    }
    Ok(controlled)
}

/// Bob qubits (input order) that no controller influences, probed with a
/// seeded Haar-random input.
pub fn uncontrolled_qubits(spec: &ProtocolSpec, seed: u64) -> Result<Vec<usize>> {
    let n = spec.input_qubits();
    let input = haar_random_state(n, &mut sample_rng(seed ^ CONTROL_PROBE_SALT, 0));
    let mut any = vec![false; n];
    for m in 0..spec.controller_count() {
        for (a, c) in any.iter_mut().zip(controlled_by(spec, m, &input)?) {
            *a |= c;
        }
    }
    Ok((0..n).filter(|&q| !any[q]).collect())
}

/// Mean conditioned fidelity over [`CF_INPUTS`] seeded inputs.
pub fn mean_conditioned_fidelity(spec: &ProtocolSpec, mode: InputMode, seed: u64) -> Result<f64> {
    let n = spec.input_qubits();
    let mut total = 0.0;
    for i in 0..CF_INPUTS as u64 {
        let input = sample_input(n, mode, &mut sample_rng(seed ^ CF_STREAM_SALT, i));
        total += conditioned_fidelity(spec, &input)?;
    }
    Ok(total / CF_INPUTS as f64)
}

/// NCF/CP figures for one register (all of Bob's qubits, or one of them).
#[derive(Debug, Clone, PartialEq)]
pub struct NcfRecord {
    pub ncf_analytic: Option<f64>,
    pub ncf_mc: Option<McEstimate>,
    /// Analytic value when available, else the Monte Carlo mean.
    pub ncf: f64,
    pub control_power: f64,
    /// Slack used when comparing against a bound: `1e-9` for analytic
    /// figures, `3·stderr` for Monte Carlo figures.
    pub tolerance: f64,
}

impl NcfRecord {
    fn new(ncf_analytic: Option<f64>, ncf_mc: Option<McEstimate>) -> Self {
        let (ncf, tolerance) = match (ncf_analytic, ncf_mc) {
            (Some(a), _) => (a, ANALYTIC_TOLERANCE),
            (None, Some(m)) => (m.mean, m.band()),
            (None, None) => (f64::NAN, 0.0),
        };
        Self {
            ncf_analytic,
            ncf_mc,
            ncf,
            control_power: 1.0 - ncf,
            tolerance,
        }
    }

    pub fn stderr(&self) -> f64 {
        if self.ncf_analytic.is_some() {
            0.0
        } else {
            self.ncf_mc.map_or(0.0, |m| m.stderr)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QubitRecord {
    pub qubit: usize,
    pub figures: NcfRecord,
    pub sufficient: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ControllerRecord {
    pub index: usize,
    /// Channel qubits held by this controller.
    pub qubits: Vec<usize>,
    pub conditioned_fidelity: f64,
    pub figures: NcfRecord,
    /// Filled in product mode only.
    pub per_qubit: Vec<QubitRecord>,
    pub sufficient: bool,
    pub meets_qubit_bound: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Criteria {
    /// Bob qubits (input order) influenced by no controller.
    pub uncontrolled_qubits: Vec<usize>,
    pub all_qubits_controlled: bool,
    /// `None` unless the scheme declares interchangeable controllers.
    pub equal_power: Option<bool>,
    pub power_sufficient: Vec<bool>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisReport {
    pub scheme: SchemeId,
    pub n: usize,
    pub method: Method,
    pub mode: InputMode,
    pub classical_limit: f64,
    pub min_control_power: f64,
    pub qubit_bound: usize,
    pub controllers: Vec<ControllerRecord>,
    pub criteria: Criteria,
    pub samples: usize,
    pub seed: u64,
}

pub fn verdict(scheme: &Scheme, method: Method, cfg: &McConfig) -> Result<AnalysisReport> {
    verdict_with(&Sequential, scheme, method, cfg)
}

pub fn verdict_with(
    runner: &dyn SampleRunner,
    scheme: &Scheme,
    method: Method,
    cfg: &McConfig,
) -> Result<AnalysisReport> {
    if method.monte_carlo() {
        cfg.check()?;
    }
    let spec = &scheme.spec;
    let n = spec.input_qubits();
    let bound = min_control_power(n);
    let qubit_bound = controller_qubit_bound(n);
    let cf = mean_conditioned_fidelity(spec, cfg.mode, cfg.seed)?;

    let mut controllers = Vec::with_capacity(spec.controller_count());
    for m in 0..spec.controller_count() {
        let mix = if method.analytic() {
            Some(reconstruct_mixture(spec, m)?)
        } else {
            None
        };
        let analytic = mix.as_ref().map(|mix| match cfg.mode {
            InputMode::Arbitrary => average_ncf_pauli(mix),
            InputMode::Product => average_ncf_pauli_product(mix),
        });
        let mc = if method.monte_carlo() {
            Some(average_ncf_mc_with(runner, spec, m, cfg)?)
        } else {
            None
        };
        let figures = NcfRecord::new(analytic, mc);

        let mut per_qubit = Vec::new();
        if cfg.mode == InputMode::Product {
            let single_bound = min_control_power(1);
            for q in 0..n {
                let a = match &mix {
                    Some(mix) => Some(average_ncf_pauli(&mix.marginal(q)?)),
                    None => None,
                };
                let mc = if method.monte_carlo() {
                    Some(per_qubit_ncf_with(runner, spec, m, q, cfg.samples, cfg.seed)?)
                } else {
                    None
                };
                let figures = NcfRecord::new(a, mc);
                let sufficient = figures.control_power >= single_bound - figures.tolerance;
                per_qubit.push(QubitRecord {
                    qubit: q,
                    figures,
                    sufficient,
                });
            }
        }

        let sufficient = match cfg.mode {
            InputMode::Arbitrary => figures.control_power >= bound - figures.tolerance,
            InputMode::Product => per_qubit.iter().all(|q| q.sufficient),
        };
        let qubits = spec.parties().controllers[m].clone();
        controllers.push(ControllerRecord {
            index: m,
            meets_qubit_bound: qubits.len() >= qubit_bound,
            qubits,
            conditioned_fidelity: cf,
            figures,
            per_qubit,
            sufficient,
        });
    }

    let uncontrolled = uncontrolled_qubits(spec, cfg.seed)?;
    let equal_power = if scheme.symmetric_controllers && controllers.len() > 1 {
        let mut equal = true;
        for (i, a) in controllers.iter().enumerate() {
            for b in &controllers[i + 1..] {
                let tol = if a.figures.ncf_analytic.is_some() {
                    ANALYTIC_TOLERANCE
                } else {
                    (MC_SIGMAS * (a.figures.stderr().powi(2) + b.figures.stderr().powi(2)).sqrt())
                        .max(ANALYTIC_TOLERANCE)
                };
                if (a.figures.control_power - b.figures.control_power).abs() > tol {
                    equal = false;
                }
            }
        }
        Some(equal)
    } else {
        None
    };
    let power_sufficient: Vec<bool> = controllers.iter().map(|c| c.sufficient).collect();
    let all_qubits_controlled = uncontrolled.is_empty();
    let passed = all_qubits_controlled
        && equal_power != Some(false)
        && power_sufficient.iter().all(|&s| s);

    Ok(AnalysisReport {
        scheme: scheme.id,
        n,
        method,
        mode: cfg.mode,
        classical_limit: classical_limit(n),
        min_control_power: bound,
        qubit_bound,
        controllers,
        criteria: Criteria {
            uncontrolled_qubits: uncontrolled,
            all_qubits_controlled,
            equal_power,
            power_sufficient,
            passed,
        },
        samples: cfg.samples,
        seed: cfg.seed,
    })
}

/// Squared amplitudes `(a², b², c², d²)` on the simplex grid with
/// `resolution` points per axis (step `1/(resolution − 1)`), in
/// lexicographic order of `(a², b², c²)`.
pub fn simplex_grid(resolution: usize) -> Result<Vec<[f64; 4]>> {
    if resolution < 2 {
        return Err(Error::InvalidParameters(format!(
            "grid resolution must be at least 2, got {resolution}"
        )));
    }
    let steps = resolution - 1;
    let step = 1.0 / steps as f64;
    let mut rows = Vec::new();
    for i in 0..=steps {
        for j in 0..=steps - i {
            for k in 0..=steps - i - j {
                let l = steps - i - j - k;
                rows.push([i, j, k, l].map(|v| v as f64 * step));
            }
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub squared: [f64; 4],
    pub cf: f64,
    pub ncf_analytic: f64,
    pub ncf_mc: McEstimate,
    /// `ncf_analytic ≤ 2/3` (within `1e-9`).
    pub pass: bool,
}

pub fn pe4_sweep(resolution: usize, cfg: &McConfig) -> Result<Vec<SweepRow>> {
    pe4_sweep_with(&Sequential, resolution, cfg)
}

pub fn pe4_sweep_with(
    runner: &dyn SampleRunner,
    resolution: usize,
    cfg: &McConfig,
) -> Result<Vec<SweepRow>> {
    cfg.check()?;
    let limit = classical_limit(1);
    simplex_grid(resolution)?
        .into_iter()
        .map(|sq| {
            let p = Pe4Params::from_squared(sq[0], sq[1], sq[2], sq[3])?;
            let scheme = Scheme::pe4(p)?;
            let cf = mean_conditioned_fidelity(&scheme.spec, cfg.mode, cfg.seed)?;
            let ncf_analytic = pe4_ncf_analytic(&p);
            let ncf_mc = average_ncf_mc_with(runner, &scheme.spec, 0, cfg)?;
            Ok(SweepRow {
                squared: sq,
                cf,
                ncf_analytic,
                ncf_mc,
                pass: ncf_analytic <= limit + ANALYTIC_TOLERANCE,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::YangVariant;
    use core::str::FromStr;

    fn ps(s: &str) -> PauliString {
        PauliString::from_str(s).unwrap()
    }

    #[test]
    fn bounds() {
        for (n, cl, cp) in [
            (1, 2.0 / 3.0, 1.0 / 3.0),
            (2, 2.0 / 5.0, 3.0 / 5.0),
            (3, 2.0 / 9.0, 7.0 / 9.0),
        ] {
            assert!((classical_limit(n) - cl).abs() < 1e-12);
            assert!((min_control_power(n) - cp).abs() < 1e-12);
        }
        assert_eq!(controller_qubit_bound(3), 3);
    }

    #[test]
    fn pauli_oracle_examples() {
        let id = PauliMixture::new(1, vec![(ps("I"), 1.0)]).unwrap();
        assert!((average_ncf_pauli(&id) - 1.0).abs() < 1e-12);
        let deph = PauliMixture::new(1, vec![(ps("I"), 0.5), (ps("Z"), 0.5)]).unwrap();
        assert!((average_ncf_pauli(&deph) - 2.0 / 3.0).abs() < 1e-12);
        let two = PauliMixture::new(
            2,
            vec![
                (ps("II"), 0.25),
                (ps("ZI"), 0.25),
                (ps("IZ"), 0.25),
                (ps("ZZ"), 0.25),
            ],
        )
        .unwrap();
        assert!((average_ncf_pauli(&two) - 0.4).abs() < 1e-12);
    }

    #[test]
    fn mixture_rejects_bad_weights() {
        assert!(PauliMixture::new(1, vec![(ps("I"), 0.5)]).is_err());
        assert!(PauliMixture::new(1, vec![(ps("II"), 1.0)]).is_err());
        assert!(PauliMixture::new(1, vec![(ps("I"), 1.5), (ps("X"), -0.5)]).is_err());
    }

    #[test]
    fn pe4_formula_examples() {
        let p = |a2, b2, c2, d2| Pe4Params::from_squared(a2, b2, c2, d2).unwrap();
        assert!((pe4_ncf_analytic(&p(1.0, 0.0, 0.0, 0.0)) - 1.0).abs() < 1e-12);
        assert!((pe4_ncf_analytic(&p(0.25, 0.25, 0.25, 0.25)) - 0.5).abs() < 1e-12);
        assert!((pe4_ncf_analytic(&p(0.4, 0.2, 0.2, 0.2)) - 0.6).abs() < 1e-12);
    }

    #[test]
    fn estimate_from_samples() {
        let e = McEstimate::from_samples(&[1.0, 2.0, 3.0, 4.0]);
        assert!((e.mean - 2.5).abs() < 1e-15);
        // sample variance 5/3, stderr sqrt(5/12)
        assert!((e.stderr - (5.0f64 / 12.0).sqrt()).abs() < 1e-15);
        assert!(e.agrees_with(2.5 + 3.0 * e.stderr));
        assert!(!e.agrees_with(2.5 + 3.1 * e.stderr));
        let flat = McEstimate::from_samples(&[0.6; 100]);
        assert!(flat.agrees_with(0.6 + 1e-12));
        assert!(!flat.agrees_with(0.6 + 1e-6));
    }

    #[test]
    fn too_few_samples() {
        let scheme = Scheme::ghz().unwrap();
        let cfg = McConfig::new(10, 0, InputMode::Arbitrary);
        assert!(matches!(
            average_ncf_mc(&scheme.spec, 0, &cfg),
            Err(Error::InvalidParameters(_))
        ));
    }

    #[test]
    fn simplex_grid_counts() {
        // Compositions of steps into four parts: C(steps + 3, 3).
        assert_eq!(simplex_grid(2).unwrap().len(), 4);
        assert_eq!(simplex_grid(5).unwrap().len(), 35);
        assert_eq!(simplex_grid(11).unwrap().len(), 286);
        for row in simplex_grid(5).unwrap() {
            assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
        assert!(simplex_grid(1).is_err());
    }

    #[test]
    fn reconstructed_mixtures() {
        let ghz = Scheme::ghz().unwrap();
        let mix = reconstruct_mixture(&ghz.spec, 0).unwrap();
        assert!((mix.weight_of(&ps("I")) - 0.5).abs() < 1e-12);
        assert!((mix.weight_of(&ps("Z")) - 0.5).abs() < 1e-12);

        let two = Scheme::two_ghz().unwrap();
        let mix = reconstruct_mixture(&two.spec, 0).unwrap();
        assert_eq!(mix.terms().len(), 4);
        assert!((mix.weight_of(&ps("II")) - 0.25).abs() < 1e-12);
        assert!((average_ncf_pauli(&mix) - 0.4).abs() < 1e-12);

        let yang = Scheme::yang(3, 1, YangVariant::PhaseFlip).unwrap();
        let mix = reconstruct_mixture(&yang.spec, 0).unwrap();
        assert!((mix.weight_of(&ps("ZZZ")) - 0.5).abs() < 1e-12);
        assert!((average_ncf_pauli(&mix) - 5.0 / 9.0).abs() < 1e-12);
    }

    #[test]
    fn control_power_closed_forms() {
        let cfg = McConfig::default();
        let cp = |s: &Scheme| control_power(&s.spec, 0, Method::Analytic, &cfg).unwrap();
        assert!((cp(&Scheme::two_ghz().unwrap()) - 0.6).abs() < 1e-9);
        assert!((cp(&Scheme::nghz(3, 1).unwrap()) - 7.0 / 9.0).abs() < 1e-9);
        assert!((cp(&Scheme::ghz().unwrap()) - 1.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn man_uncontrolled_and_verdict() {
        let man = Scheme::man(3, 1).unwrap();
        assert_eq!(uncontrolled_qubits(&man.spec, 1).unwrap(), vec![1, 2]);
        let report = verdict(&man, Method::Analytic, &McConfig::default()).unwrap();
        assert!(!report.criteria.passed);
        assert!(!report.criteria.power_sufficient[0]);
        assert!((report.controllers[0].figures.control_power - 4.0 / 9.0).abs() < 1e-9);
        assert!(!report.controllers[0].meets_qubit_bound);
    }

    #[test]
    fn nghz_verdict_passes() {
        let s = Scheme::nghz(3, 1).unwrap();
        let report = verdict(&s, Method::Analytic, &McConfig::default()).unwrap();
        assert!(report.criteria.passed);
        assert!(report.controllers[0].meets_qubit_bound);
        assert!((report.controllers[0].conditioned_fidelity - 1.0).abs() < 1e-9);
    }

    #[test]
    fn symmetric_controllers_have_equal_power() {
        let s = Scheme::nghz(2, 2).unwrap();
        let report = verdict(&s, Method::Analytic, &McConfig::default()).unwrap();
        assert_eq!(report.criteria.equal_power, Some(true));
        let single = Scheme::nghz(2, 1).unwrap();
        let report = verdict(&single, Method::Analytic, &McConfig::default()).unwrap();
        assert_eq!(report.criteria.equal_power, None);
    }
}
