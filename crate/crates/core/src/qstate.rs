//! Dense state-vector and density-matrix primitives.
//!
//! Qubit ordering is big-endian: in an `n`-qubit register, qubit 0 is the most
//! significant bit of the amplitude index. Tensoring `a ⊗ b` therefore places
//! `a`'s qubits first, and index arithmetic is plain concatenation.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Tolerance for exact analytic checks (normalization, Hermiticity, trace).
pub const TOLERANCE: f64 = 1e-9;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

#[inline]
pub(crate) fn bit_of(num_qubits: usize, qubit: usize) -> usize {
    1 << (num_qubits - 1 - qubit)
}

pub(crate) fn check_targets(targets: &[usize], num_qubits: usize) -> Result<()> {
    for (pos, &q) in targets.iter().enumerate() {
        if q >= num_qubits {
            return Err(Error::QubitOutOfRange {
                index: q,
                num_qubits,
            });
        }
        if targets[..pos].contains(&q) {
            return Err(Error::DuplicateQubit(q));
        }
    }
    Ok(())
}

/// For each value `v` of the sub-register formed by `qubits` (in list order,
/// big-endian), the bits `v` contributes to a full `num_qubits` index.
pub(crate) fn scatter_table(num_qubits: usize, qubits: &[usize]) -> Vec<usize> {
    let k = qubits.len();
    (0..1usize << k)
        .map(|v| {
            qubits.iter().enumerate().fold(0, |acc, (j, &q)| {
                if v & (1 << (k - 1 - j)) != 0 {
                    acc | bit_of(num_qubits, q)
                } else {
                    acc
                }
            })
        })
        .collect()
}

pub(crate) fn complement(num_qubits: usize, qubits: &[usize]) -> Vec<usize> {
    (0..num_qubits).filter(|q| !qubits.contains(q)).collect()
}

fn log2_exact(len: usize) -> Result<usize> {
    if len == 0 || !len.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(len));
    }
    Ok(len.trailing_zeros() as usize)
}

/// A single-qubit Pauli operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    /// `(x, z)` bits of the symplectic representation; `Y` carries both.
    pub fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub fn matrix(self) -> [[Complex64; 2]; 2] {
        match self {
            Pauli::I => [[ONE, ZERO], [ZERO, ONE]],
            Pauli::X => [[ZERO, ONE], [ONE, ZERO]],
            Pauli::Y => [[ZERO, -I], [I, ZERO]],
            Pauli::Z => [[ONE, ZERO], [ZERO, -ONE]],
        }
    }

    fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// A tensor product of single-qubit Paulis, one letter per qubit.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliString {
    letters: Vec<Pauli>,
}

impl PauliString {
    pub fn new(letters: Vec<Pauli>) -> Self {
        Self { letters }
    }

    pub fn identity(num_qubits: usize) -> Self {
        Self {
            letters: vec![Pauli::I; num_qubits],
        }
    }

    /// Builds a string from big-endian bit masks: qubit `j` takes bit `n-1-j`.
    pub fn from_masks(num_qubits: usize, x_mask: usize, z_mask: usize) -> Self {
        let letters = (0..num_qubits)
            .map(|q| {
                let b = bit_of(num_qubits, q);
                Pauli::from_bits(x_mask & b != 0, z_mask & b != 0)
            })
            .collect();
        Self { letters }
    }

    pub fn num_qubits(&self) -> usize {
        self.letters.len()
    }

    pub fn letters(&self) -> &[Pauli] {
        &self.letters
    }

    pub fn x_mask(&self) -> usize {
        let n = self.num_qubits();
        self.letters
            .iter()
            .enumerate()
            .filter(|(_, p)| p.bits().0)
            .fold(0, |acc, (q, _)| acc | bit_of(n, q))
    }

    pub fn z_mask(&self) -> usize {
        let n = self.num_qubits();
        self.letters
            .iter()
            .enumerate()
            .filter(|(_, p)| p.bits().1)
            .fold(0, |acc, (q, _)| acc | bit_of(n, q))
    }

    pub fn is_identity(&self) -> bool {
        self.letters.iter().all(|&p| p == Pauli::I)
    }

    /// Number of non-identity letters.
    pub fn weight(&self) -> usize {
        self.letters.iter().filter(|&&p| p != Pauli::I).count()
    }

    /// `|tr P|`: `2^n` for the identity, zero otherwise.
    pub fn trace_abs(&self) -> f64 {
        if self.is_identity() {
            (1u64 << self.num_qubits()) as f64
        } else {
            0.0
        }
    }

    /// Product `self · other` with the global phase dropped.
    pub fn mul_ignoring_phase(&self, other: &PauliString) -> Result<PauliString> {
        if self.num_qubits() != other.num_qubits() {
            return Err(Error::DimensionMismatch {
                left: self.num_qubits(),
                right: other.num_qubits(),
            });
        }
        let letters = self
            .letters
            .iter()
            .zip(&other.letters)
            .map(|(a, b)| {
                let (ax, az) = a.bits();
                let (bx, bz) = b.bits();
                Pauli::from_bits(ax ^ bx, az ^ bz)
            })
            .collect();
        Ok(PauliString { letters })
    }

    /// The single-qubit letter acting on `qubit`, as a one-qubit string.
    pub fn restrict(&self, qubit: usize) -> PauliString {
        PauliString {
            letters: vec![self.letters[qubit]],
        }
    }

    /// Dense `2^n × 2^n` matrix, row-major.
    pub fn matrix(&self) -> Vec<Complex64> {
        let mut out = vec![ONE];
        let mut dim = 1;
        for p in &self.letters {
            let m = p.matrix();
            let next_dim = dim * 2;
            let mut next = vec![ZERO; next_dim * next_dim];
            for r in 0..dim {
                for c in 0..dim {
                    let v = out[r * dim + c];
                    for (i, row) in m.iter().enumerate() {
                        for (j, e) in row.iter().enumerate() {
                            next[(2 * r + i) * next_dim + 2 * c + j] = v * e;
                        }
                    }
                }
            }
            out = next;
            dim = next_dim;
        }
        out
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.letters {
            write!(f, "{}", p.symbol())?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let letters = s
            .chars()
            .map(|c| match c {
                'I' => Ok(Pauli::I),
                'X' => Ok(Pauli::X),
                'Y' => Ok(Pauli::Y),
                'Z' => Ok(Pauli::Z),
                other => Err(Error::InvalidParameters(format!(
                    "unknown Pauli letter {other:?}"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { letters })
    }
}

/// A normalized pure state on `num_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    num_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl PureState {
    /// Wraps an amplitude vector, rejecting non-power-of-two lengths and
    /// vectors whose squared norm is not 1 within [`TOLERANCE`].
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        let num_qubits = log2_exact(amplitudes.len())?;
        let norm_sqr: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > TOLERANCE {
            return Err(Error::NotNormalized(norm_sqr));
        }
        Ok(Self {
            num_qubits,
            amplitudes,
        })
    }

    /// Normalizes `amplitudes`; fails on a (numerically) zero vector.
    pub fn normalized(mut amplitudes: Vec<Complex64>) -> Result<Self> {
        let num_qubits = log2_exact(amplitudes.len())?;
        let norm_sqr: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if norm_sqr < 1e-24 {
            return Err(Error::NotNormalized(norm_sqr));
        }
        let scale = 1.0 / norm_sqr.sqrt();
        amplitudes.iter_mut().for_each(|a| *a *= scale);
        Ok(Self {
            num_qubits,
            amplitudes,
        })
    }

    pub(crate) fn from_parts_unchecked(num_qubits: usize, amplitudes: Vec<Complex64>) -> Self {
        debug_assert_eq!(amplitudes.len(), 1 << num_qubits);
        Self {
            num_qubits,
            amplitudes,
        }
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(num_qubits: usize, index: usize) -> Self {
        assert!(index < 1 << num_qubits, "basis index out of range");
        let mut amplitudes = vec![ZERO; 1 << num_qubits];
        amplitudes[index] = ONE;
        Self {
            num_qubits,
            amplitudes,
        }
    }

    /// Real-amplitude constructor, normalized on the way in.
    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::normalized(amplitudes.iter().map(|&a| Complex64::new(a, 0.0)).collect())
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &PureState) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.num_qubits,
                right: other.num_qubits,
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `|⟨self|other⟩|`, the phase-insensitive overlap.
    pub fn overlap(&self, other: &PureState) -> Result<f64> {
        Ok(self.inner(other)?.norm())
    }

    /// `self ⊗ other`; `self`'s qubits take the leading indices.
    pub fn tensor(&self, other: &PureState) -> PureState {
        let mut amplitudes = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amplitudes {
            amplitudes.extend(other.amplitudes.iter().map(|b| a * b));
        }
        PureState {
            num_qubits: self.num_qubits + other.num_qubits,
            amplitudes,
        }
    }

    /// Applies `pauli` with letter `j` acting on qubit `targets[j]`.
    pub fn apply_pauli(&self, pauli: &PauliString, targets: &[usize]) -> Result<PureState> {
        let mut amplitudes = self.amplitudes.clone();
        apply_pauli_in_place(&mut amplitudes, self.num_qubits, pauli, targets)?;
        Ok(PureState {
            num_qubits: self.num_qubits,
            amplitudes,
        })
    }

    /// Reorders qubits: new qubit `j` is old qubit `order[j]`.
    pub fn permute(&self, order: &[usize]) -> Result<PureState> {
        if order.len() != self.num_qubits {
            return Err(Error::ArityMismatch {
                expected: self.num_qubits,
                got: order.len(),
            });
        }
        check_targets(order, self.num_qubits)?;
        let table = scatter_table(self.num_qubits, order);
        let amplitudes = table.iter().map(|&old| self.amplitudes[old]).collect();
        Ok(PureState {
            num_qubits: self.num_qubits,
            amplitudes,
        })
    }

    pub fn to_density(&self) -> DensityMatrix {
        let dim = self.dim();
        let mut data = vec![ZERO; dim * dim];
        for (r, a) in self.amplitudes.iter().enumerate() {
            for (c, b) in self.amplitudes.iter().enumerate() {
                data[r * dim + c] = a * b.conj();
            }
        }
        DensityMatrix {
            num_qubits: self.num_qubits,
            data,
        }
    }

    /// Traces out `discard`, keeping the remaining qubits in their original
    /// relative order.
    pub fn partial_trace(&self, discard: &[usize]) -> Result<DensityMatrix> {
        check_discard(discard, self.num_qubits)?;
        let keep = complement(self.num_qubits, discard);
        let keep_table = scatter_table(self.num_qubits, &keep);
        let discard_table = scatter_table(self.num_qubits, discard);
        let mut data = vec![ZERO; keep_table.len() * keep_table.len()];
        accumulate_reduced(
            &mut data,
            &self.amplitudes,
            &keep_table,
            &discard_table,
        );
        Ok(DensityMatrix {
            num_qubits: keep.len(),
            data,
        })
    }
}

/// Adds `Tr_D |v⟩⟨v|` into the row-major `acc` (dimension `keep_table.len()`).
/// `v` need not be normalized.
pub(crate) fn accumulate_reduced(
    acc: &mut [Complex64],
    v: &[Complex64],
    keep_table: &[usize],
    discard_table: &[usize],
) {
    let dk = keep_table.len();
    for &d in discard_table {
        for (r, &kr) in keep_table.iter().enumerate() {
            let a = v[kr | d];
            if a == ZERO {
                continue;
            }
            for (c, &kc) in keep_table.iter().enumerate() {
                acc[r * dk + c] += a * v[kc | d].conj();
            }
        }
    }
}

pub(crate) fn apply_pauli_in_place(
    amplitudes: &mut [Complex64],
    num_qubits: usize,
    pauli: &PauliString,
    targets: &[usize],
) -> Result<()> {
    if targets.len() != pauli.num_qubits() {
        return Err(Error::ArityMismatch {
            expected: pauli.num_qubits(),
            got: targets.len(),
        });
    }
    check_targets(targets, num_qubits)?;
    for (&letter, &q) in pauli.letters().iter().zip(targets) {
        let b = bit_of(num_qubits, q);
        match letter {
            Pauli::I => {}
            Pauli::X => {
                for i in (0..amplitudes.len()).filter(|i| i & b == 0) {
                    amplitudes.swap(i, i | b);
                }
            }
            Pauli::Z => {
                for (i, a) in amplitudes.iter_mut().enumerate() {
                    if i & b != 0 {
                        *a = -*a;
                    }
                }
            }
            Pauli::Y => {
                for i in (0..amplitudes.len()).filter(|i| i & b == 0) {
                    let zero = amplitudes[i];
                    let one = amplitudes[i | b];
                    amplitudes[i] = -I * one;
                    amplitudes[i | b] = I * zero;
                }
            }
        }
    }
    Ok(())
}

fn check_discard(discard: &[usize], num_qubits: usize) -> Result<()> {
    if discard.is_empty() || discard.len() >= num_qubits {
        return Err(Error::InvalidDiscardSet);
    }
    check_targets(discard, num_qubits)
}

/// A density operator on `num_qubits` qubits, stored dense and row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    num_qubits: usize,
    data: Vec<Complex64>,
}

impl DensityMatrix {
    /// Checks that `data` is a valid density matrix before wrapping it.
    pub fn new(data: Vec<Complex64>) -> Result<Self> {
        let dim = (data.len() as f64).sqrt().round() as usize;
        if dim * dim != data.len() {
            return Err(Error::InvalidDensityMatrix("matrix is not square"));
        }
        let num_qubits = log2_exact(dim)?;
        let rho = Self { num_qubits, data };
        rho.validate()?;
        Ok(rho)
    }

    pub(crate) fn from_parts_unchecked(num_qubits: usize, data: Vec<Complex64>) -> Self {
        debug_assert_eq!(data.len(), 1 << (2 * num_qubits));
        Self { num_qubits, data }
    }

    pub fn maximally_mixed(num_qubits: usize) -> Self {
        let dim = 1 << num_qubits;
        let mut data = vec![ZERO; dim * dim];
        for i in 0..dim {
            data[i * dim + i] = Complex64::new(1.0 / dim as f64, 0.0);
        }
        Self { num_qubits, data }
    }

    /// Convex combination `Σ wᵢ ρᵢ`. Weights must be nonnegative and sum to 1.
    pub fn mixture(terms: &[(f64, &DensityMatrix)]) -> Result<Self> {
        let first = terms
            .first()
            .ok_or(Error::InvalidDensityMatrix("empty mixture"))?
            .1;
        let total: f64 = terms.iter().map(|(w, _)| w).sum();
        if terms.iter().any(|(w, _)| *w < 0.0) || (total - 1.0).abs() > TOLERANCE {
            return Err(Error::InvalidDensityMatrix(
                "mixture weights must be a probability vector",
            ));
        }
        let mut data = vec![ZERO; first.data.len()];
        for (w, rho) in terms {
            if rho.num_qubits != first.num_qubits {
                return Err(Error::DimensionMismatch {
                    left: first.num_qubits,
                    right: rho.num_qubits,
                });
            }
            for (acc, x) in data.iter_mut().zip(&rho.data) {
                *acc += x * *w;
            }
        }
        Ok(Self {
            num_qubits: first.num_qubits,
            data,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.num_qubits
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim() + col]
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim()).map(|i| self.entry(i, i)).sum()
    }

    /// `tr ρ²`, computed as `Σ |ρᵢⱼ|²` (valid for Hermitian ρ).
    pub fn purity(&self) -> f64 {
        self.data.iter().map(|x| x.norm_sqr()).sum()
    }

    /// Largest elementwise deviation `|ρᵢⱼ - conj(ρⱼᵢ)|`.
    pub fn hermiticity_error(&self) -> f64 {
        let dim = self.dim();
        let mut worst = 0.0f64;
        for r in 0..dim {
            for c in r..dim {
                worst = worst.max((self.entry(r, c) - self.entry(c, r).conj()).norm());
            }
        }
        worst
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let dim = self.dim();
        let m = DMatrix::from_row_slice(dim, dim, &self.data);
        let hermitian = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
        let mut values: Vec<f64> = hermitian.symmetric_eigenvalues().iter().copied().collect();
        values.sort_by(|a, b| a.total_cmp(b));
        values
    }

    /// Checks every density-matrix invariant at [`TOLERANCE`].
    pub fn validate(&self) -> Result<()> {
        if self.hermiticity_error() > TOLERANCE {
            return Err(Error::InvalidDensityMatrix("not Hermitian"));
        }
        let tr = self.trace();
        if (tr.re - 1.0).abs() > TOLERANCE || tr.im.abs() > TOLERANCE {
            return Err(Error::InvalidDensityMatrix("trace is not 1"));
        }
        if self.eigenvalues().first().is_some_and(|&e| e < -TOLERANCE) {
            return Err(Error::InvalidDensityMatrix("not positive semidefinite"));
        }
        Ok(())
    }

    /// Traces out `discard`, keeping the remaining qubits in order.
    pub fn partial_trace(&self, discard: &[usize]) -> Result<DensityMatrix> {
        check_discard(discard, self.num_qubits)?;
        let keep = complement(self.num_qubits, discard);
        let keep_table = scatter_table(self.num_qubits, &keep);
        let discard_table = scatter_table(self.num_qubits, discard);
        let dim = self.dim();
        let dk = keep_table.len();
        let mut data = vec![ZERO; dk * dk];
        for (r, &kr) in keep_table.iter().enumerate() {
            for (c, &kc) in keep_table.iter().enumerate() {
                data[r * dk + c] = discard_table
                    .iter()
                    .map(|&d| self.data[(kr | d) * dim + (kc | d)])
                    .sum();
            }
        }
        Ok(DensityMatrix {
            num_qubits: keep.len(),
            data,
        })
    }

    /// Largest elementwise distance to `other`.
    pub fn max_distance(&self, other: &DensityMatrix) -> Result<f64> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::DimensionMismatch {
                left: self.num_qubits,
                right: other.num_qubits,
            });
        }
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }
}

/// Free-function form of [`PureState::tensor`].
pub fn tensor(a: &PureState, b: &PureState) -> PureState {
    a.tensor(b)
}

/// Tensor product of a non-empty list of factors, left to right.
pub fn tensor_all<'a>(factors: impl IntoIterator<Item = &'a PureState>) -> PureState {
    let mut it = factors.into_iter();
    let first = it.next().expect("tensor_all needs at least one factor").clone();
    it.fold(first, |acc, f| acc.tensor(f))
}

/// `⟨φ|ρ|φ⟩`.
pub fn fidelity(phi: &PureState, rho: &DensityMatrix) -> Result<f64> {
    if phi.num_qubits() != rho.num_qubits() {
        return Err(Error::DimensionMismatch {
            left: phi.num_qubits(),
            right: rho.num_qubits(),
        });
    }
    let dim = phi.dim();
    let amps = phi.amplitudes();
    let mut acc = ZERO;
    for (r, a) in amps.iter().enumerate() {
        let row = &rho.data()[r * dim..(r + 1) * dim];
        let inner: Complex64 = row.iter().zip(amps).map(|(x, b)| x * b).sum();
        acc += a.conj() * inner;
    }
    Ok(acc.re)
}

/// Haar-random pure state: a normalized vector of i.i.d. standard complex
/// Gaussians. Panics if `num_qubits == 0`.
pub fn haar_random_state<R: Rng + ?Sized>(num_qubits: usize, rng: &mut R) -> PureState {
    assert!(num_qubits >= 1, "haar_random_state needs at least one qubit");
    loop {
        let amplitudes: Vec<Complex64> = (0..1usize << num_qubits)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        if let Ok(state) = PureState::normalized(amplitudes) {
            return state;
        }
    }
}

/// Product of `num_qubits` independent single-qubit Haar states.
pub fn haar_product_state<R: Rng + ?Sized>(num_qubits: usize, rng: &mut R) -> PureState {
    assert!(num_qubits >= 1, "haar_product_state needs at least one qubit");
    let mut state = haar_random_state(1, rng);
    for _ in 1..num_qubits {
        state = state.tensor(&haar_random_state(1, rng));
    }
    state
}

impl fmt::Display for PureState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, a) in self.amplitudes.iter().enumerate() {
            if a.norm() < 1e-12 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let label: String = (0..self.num_qubits)
                .map(|q| {
                    if i & bit_of(self.num_qubits, q) != 0 {
                        '1'
                    } else {
                        '0'
                    }
                })
                .collect();
            write!(f, "({:.6}{:+.6}i)|{}⟩", a.re, a.im, label)?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}
