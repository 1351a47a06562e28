//! Exact execution of a controlled-teleportation protocol.
//!
//! The joint register is `input ⊗ channel`: input qubits come first, channel
//! qubit `q` sits at position `N + q`. Measurements run in plan order (sender
//! steps, then each controller's steps) and every nonzero-probability outcome
//! is followed, so results are exact branch lists rather than samples.

use alloc::borrow::Cow;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::channels::PartyMap;
use crate::error::{Error, Result};
use crate::measure::{project_all, MeasurementBasis, ZERO_PROBABILITY};
use crate::qstate::{
    accumulate_reduced, apply_pauli_in_place, bit_of, fidelity, haar_random_state, scatter_table,
    DensityMatrix, PauliString, PureState, TOLERANCE,
};

/// Number of Haar-random inputs a derived correction table is checked on.
pub const DERIVE_VERIFY_INPUTS: usize = 20;
const DERIVE_VERIFY_SEED: u64 = 0x005e_edc7;

/// A qubit of the joint register.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Wire {
    /// Qubit `i` of the state being teleported.
    Input(usize),
    /// Qubit `q` of the shared channel.
    Channel(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasurementStep {
    pub basis: MeasurementBasis,
    pub targets: Vec<Wire>,
}

impl MeasurementStep {
    pub fn new(basis: MeasurementBasis, targets: Vec<Wire>) -> Self {
        Self { basis, targets }
    }
}

/// Pauli corrections on Bob's `N` qubits, keyed by the full outcome tuple
/// (all outcomes in plan order).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorrectionTable {
    bob_qubits: usize,
    entries: BTreeMap<Vec<usize>, PauliString>,
}

impl CorrectionTable {
    pub fn new(bob_qubits: usize) -> Self {
        Self {
            bob_qubits,
            entries: BTreeMap::new(),
        }
    }

    pub fn bob_qubits(&self) -> usize {
        self.bob_qubits
    }

    pub fn get(&self, outcomes: &[usize]) -> Option<&PauliString> {
        self.entries.get(outcomes)
    }

    pub fn insert(&mut self, outcomes: Vec<usize>, correction: PauliString) -> Result<()> {
        if correction.num_qubits() != self.bob_qubits {
            return Err(Error::ArityMismatch {
                expected: self.bob_qubits,
                got: correction.num_qubits(),
            });
        }
        self.entries.insert(outcomes, correction);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<usize>, &PauliString)> {
        self.entries.iter()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Corrections {
    /// Derive the table from the channel on first use.
    Derive,
    Table(CorrectionTable),
}

/// Which correction Bob applies when one controller stays silent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReferenceFrame {
    /// The silent controller's outcomes are taken as all-zero labels; if that
    /// tuple has no table entry (zero probability), the lexicographically
    /// smallest outcome combination that has one is used.
    Lowest,
    /// A fixed outcome combination for the silent controller's steps.
    Fixed(Vec<usize>),
}

/// One full-cooperation branch.
#[derive(Debug, Clone, PartialEq)]
pub struct RunBranch {
    pub outcomes: Vec<usize>,
    pub probability: f64,
    /// Bob's `N` qubits, in input order.
    pub bob_state: PureState,
}

/// A channel with its ownership, measurement plan and correction policy.
#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolSpec {
    channel: PureState,
    parties: PartyMap,
    input_qubits: usize,
    sender_plan: Vec<MeasurementStep>,
    controller_plans: Vec<Vec<MeasurementStep>>,
    corrections: Corrections,
}

/// A leaf of the branch enumeration; `amplitudes` are unnormalized and laid
/// out as Bob's qubits (input order) followed by any unmeasured controller
/// qubits.
struct Leaf {
    outcomes: Vec<usize>,
    probability: f64,
    amplitudes: Vec<Complex64>,
    num_qubits: usize,
}

impl ProtocolSpec {
    pub fn new(
        channel: PureState,
        parties: PartyMap,
        input_qubits: usize,
        sender_plan: Vec<MeasurementStep>,
        controller_plans: Vec<Vec<MeasurementStep>>,
        corrections: Corrections,
    ) -> Result<Self> {
        let spec = Self {
            channel,
            parties,
            input_qubits,
            sender_plan,
            controller_plans,
            corrections,
        };
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<()> {
        let n_channel = self.channel.num_qubits();
        self.parties.validate(n_channel)?;
        if self.input_qubits == 0 {
            return Err(Error::InvalidProtocol("no input qubits".into()));
        }
        if self.parties.bob.len() != self.input_qubits {
            return Err(Error::InvalidProtocol(format!(
                "Bob holds {} qubits but {} are teleported",
                self.parties.bob.len(),
                self.input_qubits
            )));
        }
        if self.controller_plans.len() != self.parties.controllers.len() {
            return Err(Error::InvalidProtocol(format!(
                "{} controller plans for {} controllers",
                self.controller_plans.len(),
                self.parties.controllers.len()
            )));
        }
        let mut measured: Vec<Wire> = Vec::new();
        let mut record = |step: &MeasurementStep, allowed: &dyn Fn(Wire) -> bool| -> Result<()> {
            if step.targets.len() != step.basis.arity() {
                return Err(Error::ArityMismatch {
                    expected: step.basis.arity(),
                    got: step.targets.len(),
                });
            }
            for &w in &step.targets {
                if !allowed(w) {
                    return Err(Error::InvalidProtocol(format!(
                        "{w:?} cannot be measured by this party"
                    )));
                }
                if measured.contains(&w) {
                    return Err(Error::InvalidProtocol(format!("{w:?} is measured twice")));
                }
                measured.push(w);
            }
            Ok(())
        };
        let n = self.input_qubits;
        let alice = &self.parties.alice;
        for step in &self.sender_plan {
            record(step, &|w| match w {
                Wire::Input(i) => i < n,
                Wire::Channel(q) => alice.contains(&q),
            })?;
        }
        for (plan, owned) in self.controller_plans.iter().zip(&self.parties.controllers) {
            for step in plan {
                record(step, &|w| matches!(w, Wire::Channel(q) if owned.contains(&q)))?;
            }
        }
        let expected = n + n_channel - self.parties.bob.len();
        if measured.len() != expected {
            return Err(Error::InvalidProtocol(format!(
                "plan measures {} qubits; all {} non-Bob qubits must be measured",
                measured.len(),
                expected
            )));
        }
        Ok(())
    }

    pub fn channel(&self) -> &PureState {
        &self.channel
    }

    pub fn parties(&self) -> &PartyMap {
        &self.parties
    }

    pub fn input_qubits(&self) -> usize {
        self.input_qubits
    }

    pub fn controller_count(&self) -> usize {
        self.controller_plans.len()
    }

    pub fn sender_plan(&self) -> &[MeasurementStep] {
        &self.sender_plan
    }

    pub fn controller_plans(&self) -> &[Vec<MeasurementStep>] {
        &self.controller_plans
    }

    pub fn corrections(&self) -> &Corrections {
        &self.corrections
    }

    /// Replaces the correction policy with an explicit table.
    pub fn with_table(mut self, table: CorrectionTable) -> Result<Self> {
        if table.bob_qubits() != self.input_qubits {
            return Err(Error::ArityMismatch {
                expected: self.input_qubits,
                got: table.bob_qubits(),
            });
        }
        self.corrections = Corrections::Table(table);
        Ok(self)
    }

    /// Derives the correction table now if it is still pending.
    pub fn resolved(self) -> Result<Self> {
        match self.corrections {
            Corrections::Table(_) => Ok(self),
            Corrections::Derive => {
                let table = derive_corrections(&self)?;
                self.with_table(table)
            }
        }
    }

    /// The correction table, deriving it on the fly when pending.
    pub fn table(&self) -> Result<Cow<'_, CorrectionTable>> {
        match &self.corrections {
            Corrections::Table(t) => Ok(Cow::Borrowed(t)),
            Corrections::Derive => derive_corrections(self).map(Cow::Owned),
        }
    }

    /// Positions of controller `m`'s outcomes inside a full outcome tuple.
    pub fn controller_outcome_span(&self, m: usize) -> Result<Range<usize>> {
        self.check_controller(m)?;
        let start = self.sender_plan.len()
            + self.controller_plans[..m].iter().map(Vec::len).sum::<usize>();
        Ok(start..start + self.controller_plans[m].len())
    }

    fn check_controller(&self, m: usize) -> Result<()> {
        if m >= self.controller_plans.len() {
            return Err(Error::ControllerOutOfRange {
                index: m,
                count: self.controller_plans.len(),
            });
        }
        Ok(())
    }

    fn check_input(&self, input: &PureState) -> Result<()> {
        if input.num_qubits() != self.input_qubits {
            return Err(Error::DimensionMismatch {
                left: self.input_qubits,
                right: input.num_qubits(),
            });
        }
        Ok(())
    }

    /// Enumerates every nonzero-probability branch, skipping the steps of
    /// controller `skip` if given.
    fn leaves(&self, input: &PureState, skip: Option<usize>) -> Result<Vec<Leaf>> {
        self.check_input(input)?;
        if let Some(m) = skip {
            self.check_controller(m)?;
        }
        let n = self.input_qubits;
        let steps: Vec<&MeasurementStep> = self
            .sender_plan
            .iter()
            .chain(
                self.controller_plans
                    .iter()
                    .enumerate()
                    .filter(|(m, _)| Some(*m) != skip)
                    .flat_map(|(_, plan)| plan),
            )
            .collect();
        let wires: Vec<Wire> = (0..n)
            .map(Wire::Input)
            .chain((0..self.channel.num_qubits()).map(Wire::Channel))
            .collect();
        let joint = input.tensor(&self.channel);

        let mut tail: Vec<Wire> = self.parties.bob.iter().map(|&q| Wire::Channel(q)).collect();
        if let Some(m) = skip {
            tail.extend(self.parties.controllers[m].iter().map(|&q| Wire::Channel(q)));
        }

        let mut out = Vec::new();
        let mut outcomes = Vec::with_capacity(steps.len());
        descend(
            &steps,
            joint.into_amplitudes(),
            wires,
            &mut outcomes,
            &tail,
            &mut out,
        )?;
        Ok(out)
    }

    fn entry<'t>(&self, table: &'t CorrectionTable, outcomes: &[usize]) -> Result<&'t PauliString> {
        table.get(outcomes).ok_or_else(|| Error::NoPauliFrame {
            outcomes: outcomes.to_vec(),
        })
    }
}

fn descend(
    steps: &[&MeasurementStep],
    amplitudes: Vec<Complex64>,
    wires: Vec<Wire>,
    outcomes: &mut Vec<usize>,
    tail: &[Wire],
    out: &mut Vec<Leaf>,
) -> Result<()> {
    let Some((step, rest)) = steps.split_first() else {
        let order: Vec<usize> = tail
            .iter()
            .map(|w| wires.iter().position(|x| x == w).expect("tail wire survives"))
            .collect();
        let table = scatter_table(wires.len(), &order);
        let amplitudes: Vec<Complex64> = table.iter().map(|&i| amplitudes[i]).collect();
        let probability = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        out.push(Leaf {
            outcomes: outcomes.clone(),
            probability,
            amplitudes,
            num_qubits: wires.len(),
        });
        return Ok(());
    };
    let positions: Vec<usize> = step
        .targets
        .iter()
        .map(|w| wires.iter().position(|x| x == w).expect("validated plan"))
        .collect();
    let projections = project_all(&amplitudes, wires.len(), step.basis, &positions)?;
    drop(amplitudes);
    let remaining: Vec<Wire> = wires
        .iter()
        .enumerate()
        .filter(|(i, _)| !positions.contains(i))
        .map(|(_, &w)| w)
        .collect();
    for (k, v) in projections.into_iter().enumerate() {
        let p: f64 = v.iter().map(|a| a.norm_sqr()).sum();
        if p <= ZERO_PROBABILITY {
            continue;
        }
        outcomes.push(k);
        descend(rest, v, remaining.clone(), outcomes, tail, out)?;
        outcomes.pop();
    }
    Ok(())
}

fn normalized_bob(leaf: &Leaf) -> PureState {
    let scale = 1.0 / leaf.probability.sqrt();
    PureState::from_parts_unchecked(
        leaf.num_qubits,
        leaf.amplitudes.iter().map(|a| a * scale).collect(),
    )
}

/// Full-cooperation branches *before* Bob's correction.
pub fn run_uncorrected(spec: &ProtocolSpec, input: &PureState) -> Result<Vec<RunBranch>> {
    Ok(spec
        .leaves(input, None)?
        .into_iter()
        .map(|leaf| RunBranch {
            bob_state: normalized_bob(&leaf),
            probability: leaf.probability,
            outcomes: leaf.outcomes,
        })
        .collect())
}

/// Derives Bob's Pauli frame for every outcome tuple.
///
/// Teleporting `|0…0⟩` fixes the X part of each branch's correction; probes
/// `(|0…0⟩ + |eⱼ⟩)/√2` fix the Z part qubit by qubit. The table is then
/// checked on every computational basis state and on
/// [`DERIVE_VERIFY_INPUTS`] Haar-random inputs.
pub fn derive_corrections(spec: &ProtocolSpec) -> Result<CorrectionTable> {
    let n = spec.input_qubits;
    let s = core::f64::consts::FRAC_1_SQRT_2;
    let run = |input: &PureState| -> Result<BTreeMap<Vec<usize>, PureState>> {
        Ok(run_uncorrected(spec, input)?
            .into_iter()
            .map(|b| (b.outcomes, b.bob_state))
            .collect())
    };

    let zero_run = run(&PureState::basis(n, 0))?;
    let probes: Vec<(usize, BTreeMap<Vec<usize>, PureState>)> = (0..n)
        .map(|j| {
            let e = bit_of(n, j);
            let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
            amps[0] = Complex64::new(s, 0.0);
            amps[e] = Complex64::new(s, 0.0);
            run(&PureState::from_parts_unchecked(n, amps)).map(|r| (e, r))
        })
        .collect::<Result<_>>()?;

    let mut table = CorrectionTable::new(n);
    for (outcomes, bob) in &zero_run {
        let fail = || Error::NoPauliFrame {
            outcomes: outcomes.clone(),
        };
        let x_mask = bob
            .amplitudes()
            .iter()
            .position(|a| a.norm_sqr() > 1.0 - TOLERANCE)
            .ok_or_else(fail)?;
        let mut z_mask = 0;
        for (e, probe_run) in &probes {
            let probe = probe_run.get(outcomes).ok_or_else(fail)?;
            let base = probe.amplitudes()[x_mask];
            if base.norm() < 1e-6 {
                return Err(fail());
            }
            let ratio = probe.amplitudes()[x_mask ^ e] / base;
            if (ratio + 1.0).norm() < 1e-6 {
                z_mask |= e;
            } else if (ratio - 1.0).norm() >= 1e-6 {
                return Err(fail());
            }
        }
        table.insert(outcomes.clone(), PauliString::from_masks(n, x_mask, z_mask))?;
    }

    verify_table(spec, &table)?;
    Ok(table)
}

/// Checks that `table` corrects every branch on all computational basis
/// states and on [`DERIVE_VERIFY_INPUTS`] Haar-random inputs. Entries for
/// outcomes that never occur are allowed.
pub fn verify_table(spec: &ProtocolSpec, table: &CorrectionTable) -> Result<()> {
    let n = spec.input_qubits;
    if table.bob_qubits() != n {
        return Err(Error::ArityMismatch {
            expected: n,
            got: table.bob_qubits(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(DERIVE_VERIFY_SEED);
    let checks = (0..1usize << n)
        .map(|x| PureState::basis(n, x))
        .chain((0..DERIVE_VERIFY_INPUTS).map(|_| haar_random_state(n, &mut rng)));
    let bob_targets: Vec<usize> = (0..n).collect();
    for input in checks {
        for b in run_uncorrected(spec, &input)? {
            let fix = spec.entry(table, &b.outcomes)?;
            let corrected = b.bob_state.apply_pauli(fix, &bob_targets)?;
            if corrected.overlap(&input)? < 1.0 - TOLERANCE {
                return Err(Error::NoPauliFrame { outcomes: b.outcomes });
            }
        }
    }
    Ok(())
}

/// Runs the protocol with everyone cooperating and Bob correcting.
pub fn run_full(spec: &ProtocolSpec, input: &PureState) -> Result<Vec<RunBranch>> {
    let table = spec.table()?;
    let targets: Vec<usize> = (0..spec.input_qubits).collect();
    spec.leaves(input, None)?
        .into_iter()
        .map(|leaf| {
            let fix = spec.entry(&table, &leaf.outcomes)?;
            let bob_state = normalized_bob(&leaf).apply_pauli(fix, &targets)?;
            Ok(RunBranch {
                outcomes: leaf.outcomes,
                probability: leaf.probability,
                bob_state,
            })
        })
        .collect()
}

/// Probability-weighted mean of `|⟨input|bob⟩|²` over all branches.
pub fn conditioned_fidelity(spec: &ProtocolSpec, input: &PureState) -> Result<f64> {
    run_full(spec, input)?
        .iter()
        .map(|b| Ok(b.probability * b.bob_state.overlap(input)?.powi(2)))
        .sum()
}

/// Splices the silent controller's outcomes into a partial tuple.
fn splice(partial: &[usize], span: &Range<usize>, fill: &[usize]) -> Vec<usize> {
    let mut full = Vec::with_capacity(partial.len() + fill.len());
    full.extend_from_slice(&partial[..span.start]);
    full.extend_from_slice(fill);
    full.extend_from_slice(&partial[span.start..]);
    full
}

/// The correction Bob applies for a branch whose controller-`m` outcomes are
/// unknown, together with the full tuple it was taken from.
pub(crate) fn reference_correction<'t>(
    spec: &ProtocolSpec,
    table: &'t CorrectionTable,
    partial: &[usize],
    excluded: usize,
    frame: &ReferenceFrame,
) -> Result<(Vec<usize>, &'t PauliString)> {
    let span = spec.controller_outcome_span(excluded)?;
    let plan = &spec.controller_plans[excluded];
    match frame {
        ReferenceFrame::Fixed(fill) => {
            if fill.len() != plan.len() {
                return Err(Error::ArityMismatch {
                    expected: plan.len(),
                    got: fill.len(),
                });
            }
            let key = splice(partial, &span, fill);
            let fix = spec.entry(table, &key)?;
            Ok((key, fix))
        }
        ReferenceFrame::Lowest => {
            let radices: Vec<usize> = plan.iter().map(|s| s.basis.outcome_count()).collect();
            let mut fill = vec![0; plan.len()];
            loop {
                let key = splice(partial, &span, &fill);
                if let Some(fix) = table.get(&key) {
                    return Ok((key, fix));
                }
                // Odometer increment, last step fastest.
                let mut pos = fill.len();
                loop {
                    if pos == 0 {
                        return Err(Error::NoPauliFrame {
                            outcomes: splice(partial, &span, &vec![0; plan.len()]),
                        });
                    }
                    pos -= 1;
                    fill[pos] += 1;
                    if fill[pos] < radices[pos] {
                        break;
                    }
                    fill[pos] = 0;
                }
            }
        }
    }
}

/// Bob's state when controller `excluded` never announces: everyone else
/// measures, Bob corrects using [`ReferenceFrame::Lowest`] for the missing
/// outcomes, and the silent controller's qubits are traced out.
pub fn bob_state_without(
    spec: &ProtocolSpec,
    input: &PureState,
    excluded: usize,
) -> Result<DensityMatrix> {
    bob_state_without_frame(spec, input, excluded, &ReferenceFrame::Lowest)
}

pub fn bob_state_without_frame(
    spec: &ProtocolSpec,
    input: &PureState,
    excluded: usize,
    frame: &ReferenceFrame,
) -> Result<DensityMatrix> {
    let table = spec.table()?;
    let n = spec.input_qubits;
    let leaves = spec.leaves(input, Some(excluded))?;
    let Some(first) = leaves.first() else {
        return Err(Error::InvalidProtocol("no branch has nonzero probability".into()));
    };
    let total = first.num_qubits;
    let bob: Vec<usize> = (0..n).collect();
    let silent: Vec<usize> = (n..total).collect();
    let keep_table = scatter_table(total, &bob);
    let discard_table = scatter_table(total, &silent);
    let dim = 1usize << n;
    let mut acc = vec![Complex64::new(0.0, 0.0); dim * dim];
    for mut leaf in leaves {
        let (_, fix) = reference_correction(spec, &table, &leaf.outcomes, excluded, frame)?;
        apply_pauli_in_place(&mut leaf.amplitudes, total, fix, &bob)?;
        accumulate_reduced(&mut acc, &leaf.amplitudes, &keep_table, &discard_table);
    }
    Ok(DensityMatrix::from_parts_unchecked(n, acc))
}

/// Non-conditioned fidelity `⟨input|ρ_B|input⟩` without controller `excluded`.
pub fn ncf(spec: &ProtocolSpec, input: &PureState, excluded: usize) -> Result<f64> {
    fidelity(input, &bob_state_without(spec, input, excluded)?)
}
