//! Complete projective measurements returning every outcome branch.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::qstate::{check_targets, complement, scatter_table, PureState};

/// Branches below this probability are treated as impossible.
pub const ZERO_PROBABILITY: f64 = 1e-12;

/// Measurement bases used by the schemes.
///
/// Outcome labels follow the order of [`MeasurementBasis::basis_vectors`]:
/// `Computational` is `{|0⟩, |1⟩}`, `XBasis` is `{|+⟩, |−⟩}`, `Bell` is
/// `[Φ+, Φ−, Ψ+, Ψ−]`, and `GhzBasis(k)` lists `(|x⟩ ± |x̄⟩)/√2` for every
/// `x` with a leading zero bit, sorted by `(x, sign)` with `+` first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MeasurementBasis {
    Computational,
    XBasis,
    Bell,
    GhzBasis(usize),
}

impl MeasurementBasis {
    pub fn arity(self) -> usize {
        match self {
            MeasurementBasis::Computational | MeasurementBasis::XBasis => 1,
            MeasurementBasis::Bell => 2,
            MeasurementBasis::GhzBasis(k) => k,
        }
    }

    pub fn outcome_count(self) -> usize {
        1 << self.arity()
    }

    pub fn basis_vectors(self) -> Result<Vec<PureState>> {
        let s = core::f64::consts::FRAC_1_SQRT_2;
        let real = |v: &[f64]| {
            PureState::from_parts_unchecked(
                v.len().trailing_zeros() as usize,
                v.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
            )
        };
        Ok(match self {
            MeasurementBasis::Computational => vec![real(&[1.0, 0.0]), real(&[0.0, 1.0])],
            MeasurementBasis::XBasis => vec![real(&[s, s]), real(&[s, -s])],
            MeasurementBasis::Bell => vec![
                real(&[s, 0.0, 0.0, s]),
                real(&[s, 0.0, 0.0, -s]),
                real(&[0.0, s, s, 0.0]),
                real(&[0.0, s, -s, 0.0]),
            ],
            MeasurementBasis::GhzBasis(k) => {
                if k == 0 {
                    return Err(Error::InvalidParameters(
                        "GHZ basis needs at least one qubit".into(),
                    ));
                }
                let dim = 1usize << k;
                let all = dim - 1;
                let mut out = Vec::with_capacity(dim);
                for x in 0..dim / 2 {
                    for sign in [1.0, -1.0] {
                        let mut v = vec![0.0; dim];
                        v[x] = s;
                        v[x ^ all] = sign * s;
                        out.push(real(&v));
                    }
                }
                out
            }
        })
    }
}

/// One measurement outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct Branch {
    pub outcome: usize,
    pub probability: f64,
    /// Normalized state of the unmeasured qubits (original relative order);
    /// `None` when the outcome has zero probability.
    pub post_state: Option<PureState>,
}

/// Unnormalized projections `(⟨eₖ|_targets ⊗ 1)|ψ⟩` for every basis vector,
/// each over the unmeasured qubits in ascending order.
pub(crate) fn project_all(
    amplitudes: &[Complex64],
    num_qubits: usize,
    basis: MeasurementBasis,
    targets: &[usize],
) -> Result<Vec<Vec<Complex64>>> {
    if targets.len() != basis.arity() {
        return Err(Error::ArityMismatch {
            expected: basis.arity(),
            got: targets.len(),
        });
    }
    check_targets(targets, num_qubits)?;
    let rest = complement(num_qubits, targets);
    let rest_table = scatter_table(num_qubits, &rest);
    let target_table = scatter_table(num_qubits, targets);
    let vectors = basis.basis_vectors()?;
    Ok(vectors
        .iter()
        .map(|e| {
            let coeffs: Vec<(usize, Complex64)> = e
                .amplitudes()
                .iter()
                .zip(&target_table)
                .filter(|(c, _)| c.norm_sqr() > 0.0)
                .map(|(c, &off)| (off, c.conj()))
                .collect();
            rest_table
                .iter()
                .map(|&r| coeffs.iter().map(|&(off, c)| c * amplitudes[r | off]).sum())
                .collect()
        })
        .collect())
}

/// Measures `targets` in `basis`, returning one branch per basis element
/// in label order, zero-probability branches included.
pub fn measure(
    state: &PureState,
    basis: MeasurementBasis,
    targets: &[usize],
) -> Result<Vec<Branch>> {
    let remaining = state.num_qubits() - targets.len().min(state.num_qubits());
    let projections = project_all(state.amplitudes(), state.num_qubits(), basis, targets)?;
    Ok(projections
        .into_iter()
        .enumerate()
        .map(|(outcome, v)| {
            let probability: f64 = v.iter().map(|a| a.norm_sqr()).sum();
            let post_state = if probability > ZERO_PROBABILITY {
                let scale = 1.0 / probability.sqrt();
                Some(PureState::from_parts_unchecked(
                    remaining,
                    v.into_iter().map(|a| a * scale).collect(),
                ))
            } else {
                None
            };
            Branch {
                outcome,
                probability,
                post_state,
            }
        })
        .collect())
}

/// Shorthand for [`MeasurementBasis::basis_vectors`].
pub fn basis_vectors(basis: MeasurementBasis) -> Result<Vec<PureState>> {
    basis.basis_vectors()
}
