//! Entangled channel constructors with their qubit ownership.
//!
//! Every channel is laid out factor by factor in construction order; the
//! returned [`PartyMap`] records which channel qubit belongs to whom. Bob's
//! list is ordered so that Bob's `j`-th qubit receives input qubit `j`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::qstate::{bit_of, tensor_all, PureState, TOLERANCE};

/// Qubit ownership of a channel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartyMap {
    pub alice: Vec<usize>,
    pub bob: Vec<usize>,
    /// One list per controller; a controller may hold several qubits.
    pub controllers: Vec<Vec<usize>>,
}

impl PartyMap {
    pub fn total_qubits(&self) -> usize {
        self.alice.len() + self.bob.len() + self.controllers.iter().map(Vec::len).sum::<usize>()
    }

    /// Checks that the lists are disjoint and cover `0..num_qubits`.
    pub fn validate(&self, num_qubits: usize) -> Result<()> {
        let mut seen = vec![false; num_qubits];
        let all = self
            .alice
            .iter()
            .chain(&self.bob)
            .chain(self.controllers.iter().flatten());
        for &q in all {
            if q >= num_qubits {
                return Err(Error::QubitOutOfRange {
                    index: q,
                    num_qubits,
                });
            }
            if seen[q] {
                return Err(Error::DuplicateQubit(q));
            }
            seen[q] = true;
        }
        if let Some(q) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidProtocol(format!(
                "channel qubit {q} is not assigned to any party"
            )));
        }
        Ok(())
    }
}

/// Real amplitudes of the four-Bell-state channel held by one
/// two-qubit controller.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pe4Params {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Pe4Params {
    /// Nonnegative amplitudes with `a² + b² + c² + d² = 1`. No ordering
    /// between them is imposed.
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let p = Self { a, b, c, d };
        let values = [a, b, c, d];
        if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::InvalidParameters(
                "channel amplitudes must be finite and nonnegative".into(),
            ));
        }
        let norm: f64 = values.iter().map(|v| v * v).sum();
        if (norm - 1.0).abs() > TOLERANCE {
            return Err(Error::InvalidParameters(format!(
                "a² + b² + c² + d² must be 1, got {norm}"
            )));
        }
        Ok(p)
    }

    /// From squared amplitudes (outcome probabilities).
    pub fn from_squared(a2: f64, b2: f64, c2: f64, d2: f64) -> Result<Self> {
        if [a2, b2, c2, d2].iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::InvalidParameters(
                "squared amplitudes must be finite and nonnegative".into(),
            ));
        }
        Self::new(a2.sqrt(), b2.sqrt(), c2.sqrt(), d2.sqrt())
    }

    pub fn squared(&self) -> [f64; 4] {
        [self.a * self.a, self.b * self.b, self.c * self.c, self.d * self.d]
    }
}

const S: f64 = core::f64::consts::FRAC_1_SQRT_2;

fn real_state(amplitudes: &[f64]) -> PureState {
    PureState::from_real(amplitudes).expect("channel amplitudes are nonzero")
}

/// `Φ+ = (|00⟩ + |11⟩)/√2`.
pub fn epr() -> PureState {
    real_state(&[S, 0.0, 0.0, S])
}

/// `(|0…0⟩ + |1…1⟩)/√2` on `k ≥ 2` qubits.
pub fn ghz(k: usize) -> Result<PureState> {
    if k < 2 {
        return Err(Error::InvalidParameters(format!(
            "GHZ state needs at least 2 qubits, got {k}"
        )));
    }
    Ok(ghz_signed(k, 1.0))
}

fn ghz_signed(k: usize, sign: f64) -> PureState {
    let mut v = vec![0.0; 1 << k];
    v[0] = S;
    v[(1 << k) - 1] = sign * S;
    PureState::from_parts_unchecked(k, v.into_iter().map(|x| Complex64::new(x, 0.0)).collect())
}

fn require(cond: bool, what: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidParameters(what.into()))
    }
}

/// `N` copies of `GHZ(M + 2)`. Copy `n` occupies qubits
/// `(M+2)n .. (M+2)(n+1)` in the order Alice, Bob, controller 1..M, so each
/// controller ends up with `N` qubits.
pub fn nghz_channel(n: usize, m: usize) -> Result<(PureState, PartyMap)> {
    require(n >= 1, "N must be at least 1")?;
    require(m >= 1, "M must be at least 1")?;
    let width = m + 2;
    let copy = ghz(width)?;
    let state = tensor_all(core::iter::repeat_n(&copy, n));
    let parties = PartyMap {
        alice: (0..n).map(|c| c * width).collect(),
        bob: (0..n).map(|c| c * width + 1).collect(),
        controllers: (0..m)
            .map(|j| (0..n).map(|c| c * width + 2 + j).collect())
            .collect(),
    };
    Ok((state, parties))
}

/// Two GHZ triples whose controller halves carry a fixed local two-qubit
/// rotation, so that a Bell measurement by the controller selects a Pauli
/// frame on Bob's pair. Layout `(A1, B1, C1, A2, B2, C2)`:
///
/// `½ Σᵢⱼ |i⟩_A1 |i⟩_B1 |j⟩_A2 |j⟩_B2 ⊗ (|i, i⟩ + (−1)ʲ |i, 1−i⟩)_C1C2 / √2`
///
/// which is `(1_AB ⊗ CNOT_{C1→C2}(1 ⊗ H)) (GHZ₃ ⊗ GHZ₃)`.
pub fn two_ghz_channel() -> (PureState, PartyMap) {
    let n = 6;
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << n];
    let amp = 0.5 * S;
    for i in 0..2usize {
        for j in 0..2usize {
            let terms = [(i, i, 1.0), (i, 1 - i, if j == 0 { 1.0 } else { -1.0 })];
            for (c1, c2, sign) in terms {
                let bits = [i, i, c1, j, j, c2];
                let index = bits
                    .iter()
                    .enumerate()
                    .filter(|(_, &b)| b == 1)
                    .fold(0, |acc, (q, _)| acc | bit_of(n, q));
                amplitudes[index] += Complex64::new(sign * amp, 0.0);
            }
        }
    }
    let parties = PartyMap {
        alice: vec![0, 3],
        bob: vec![1, 4],
        controllers: vec![vec![2, 5]],
    };
    (PureState::from_parts_unchecked(n, amplitudes), parties)
}

/// Which second EPR-type pair the Yang construction entangles with `GHZ−`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum YangVariant {
    /// `(|00⟩ − |11⟩)/√2`
    PhaseFlip,
    /// `(|01⟩ − |10⟩)/√2`
    Singlet,
}

impl YangVariant {
    pub fn from_index(v: u8) -> Result<Self> {
        match v {
            1 => Ok(YangVariant::PhaseFlip),
            2 => Ok(YangVariant::Singlet),
            _ => Err(Error::InvalidParameters(format!(
                "Yang variant must be 1 or 2, got {v}"
            ))),
        }
    }

    pub fn index(self) -> u8 {
        match self {
            YangVariant::PhaseFlip => 1,
            YangVariant::Singlet => 2,
        }
    }
}

/// `(⊗ₙ EPR_{AₙBₙ} ⊗ GHZ+ + ⊗ₙ ẼPR_{AₙBₙ} ⊗ GHZ−)/√2`, where
/// `GHZ± = (|0⟩^{⊗M}|0⟩_A′ ± |1⟩^{⊗M}|1⟩_A′)/√2`.
///
/// Layout: pairs `(Aₙ, Bₙ)` at `(2n, 2n+1)`, controllers at `2N..2N+M`,
/// Alice's extra qubit `A′` last.
pub fn yang_channel(n: usize, m: usize, variant: YangVariant) -> Result<(PureState, PartyMap)> {
    require(n >= 1, "N must be at least 1")?;
    require(m >= 1, "M must be at least 1")?;
    let tilde = match variant {
        YangVariant::PhaseFlip => real_state(&[S, 0.0, 0.0, -S]),
        YangVariant::Singlet => real_state(&[0.0, S, -S, 0.0]),
    };
    let even = tensor_all(core::iter::repeat_n(&epr(), n)).tensor(&ghz_signed(m + 1, 1.0));
    let odd = tensor_all(core::iter::repeat_n(&tilde, n)).tensor(&ghz_signed(m + 1, -1.0));
    let amplitudes = even
        .amplitudes()
        .iter()
        .zip(odd.amplitudes())
        .map(|(x, y)| (x + y) * S)
        .collect();
    let state = PureState::new(amplitudes)?;
    let mut alice: Vec<usize> = (0..n).map(|k| 2 * k).collect();
    alice.push(2 * n + m);
    let parties = PartyMap {
        alice,
        bob: (0..n).map(|k| 2 * k + 1).collect(),
        controllers: (0..m).map(|j| vec![2 * n + j]).collect(),
    };
    Ok((state, parties))
}

/// `M` GHZ triples `(A, B, C_j)` followed by `N − M` EPR pairs `(A, B)`;
/// controller `j` holds the single `C` qubit of triple `j`.
pub fn man_channel(n: usize, m: usize) -> Result<(PureState, PartyMap)> {
    require(m >= 1 && m <= n, "M must satisfy 1 ≤ M ≤ N")?;
    let (state, alice, bob, controllers) = ghz_epr_blocks(n, m)?;
    let parties = PartyMap {
        alice,
        bob,
        controllers: controllers.into_iter().map(|q| vec![q]).collect(),
    };
    Ok((state, parties))
}

/// `covered` GHZ triples whose controller qubits all belong to a single
/// controller, followed by `N − covered` uncontrolled EPR pairs.
pub fn partial_nghz_channel(n: usize, covered: usize) -> Result<(PureState, PartyMap)> {
    require(covered >= 1 && covered <= n, "covered must satisfy 1 ≤ covered ≤ N")?;
    let (state, alice, bob, controller) = ghz_epr_blocks(n, covered)?;
    let parties = PartyMap {
        alice,
        bob,
        controllers: vec![controller],
    };
    Ok((state, parties))
}

/// State, Alice's qubits, Bob's qubits, controller qubits.
type Blocks = (PureState, Vec<usize>, Vec<usize>, Vec<usize>);

fn ghz_epr_blocks(n: usize, ghz_count: usize) -> Result<Blocks> {
    let triple = ghz(3)?;
    let pair = epr();
    let factors: Vec<&PureState> = (0..n)
        .map(|k| if k < ghz_count { &triple } else { &pair })
        .collect();
    let state = tensor_all(factors);
    let offset = |k: usize| {
        if k < ghz_count {
            3 * k
        } else {
            3 * ghz_count + 2 * (k - ghz_count)
        }
    };
    let alice = (0..n).map(offset).collect();
    let bob = (0..n).map(|k| offset(k) + 1).collect();
    let controller = (0..ghz_count).map(|k| offset(k) + 2).collect();
    Ok((state, alice, bob, controller))
}

/// `a|Φ+⟩|00⟩ + b|Φ−⟩|01⟩ + c|Ψ+⟩|10⟩ + d|Ψ−⟩|11⟩` on `(A, B, C1, C2)`.
pub fn pe4_channel(p: Pe4Params) -> Result<(PureState, PartyMap)> {
    let p = Pe4Params::new(p.a, p.b, p.c, p.d)?;
    let mut v = [0.0; 16];
    // index = (ab << 2) | c1c2
    let bell = [
        [(0b00, S), (0b11, S)],
        [(0b00, S), (0b11, -S)],
        [(0b01, S), (0b10, S)],
        [(0b01, S), (0b10, -S)],
    ];
    for (ctrl, (weight, terms)) in [p.a, p.b, p.c, p.d].iter().zip(bell).enumerate() {
        for (ab, amp) in terms {
            v[(ab << 2) | ctrl] += weight * amp;
        }
    }
    let state = PureState::new(v.iter().map(|&x| Complex64::new(x, 0.0)).collect())?;
    let parties = PartyMap {
        alice: vec![0],
        bob: vec![1],
        controllers: vec![vec![2, 3]],
    };
    Ok((state, parties))
}
