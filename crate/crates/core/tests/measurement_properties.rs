use ctpower_core::measure::measure;
use ctpower_core::qstate::haar_random_state;
use ctpower_core::{DensityMatrix, MeasurementBasis, PureState};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn basis() -> impl Strategy<Value = MeasurementBasis> {
    prop_oneof![
        Just(MeasurementBasis::Computational),
        Just(MeasurementBasis::XBasis),
        Just(MeasurementBasis::Bell),
        (1usize..=3).prop_map(MeasurementBasis::GhzBasis),
    ]
}

/// A basis with a matching state and distinct target qubits.
fn setup() -> impl Strategy<Value = (MeasurementBasis, PureState, Vec<usize>)> {
    (basis(), 0usize..=2, any::<u64>()).prop_flat_map(|(b, extra, seed)| {
        let n = b.arity() + extra;
        let s = haar_random_state(n, &mut ChaCha8Rng::seed_from_u64(seed));
        (
            Just(b),
            Just(s),
            Just((0..n).collect::<Vec<usize>>()).prop_shuffle(),
        )
            .prop_map(move |(b, s, order)| (b, s, order[..b.arity()].to_vec()))
    })
}

proptest! {
    #[test]
    fn probabilities_sum_to_one((b, s, targets) in setup()) {
        let branches = measure(&s, b, &targets).unwrap();
        prop_assert_eq!(branches.len(), b.outcome_count());
        let total: f64 = branches.iter().map(|br| br.probability).sum();
        prop_assert!((total - 1.0).abs() < 1e-9);
    }

    #[test]
    fn post_states_are_normalized((b, s, targets) in setup()) {
        for br in measure(&s, b, &targets).unwrap() {
            if let Some(post) = br.post_state {
                prop_assert_eq!(post.num_qubits(), s.num_qubits() - targets.len());
                prop_assert!((post.norm_sqr() - 1.0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn untouched_qubits_see_no_signal((b, s, targets) in setup()) {
        prop_assume!(targets.len() < s.num_qubits());
        let before = s.partial_trace(&targets).unwrap();
        let branches = measure(&s, b, &targets).unwrap();
        let posts: Vec<(f64, DensityMatrix)> = branches
            .iter()
            .filter_map(|br| br.post_state.as_ref().map(|p| (br.probability, p.to_density())))
            .collect();
        let terms: Vec<(f64, &DensityMatrix)> = posts.iter().map(|(p, r)| (*p, r)).collect();
        let total: f64 = terms.iter().map(|(p, _)| p).sum();
        let normalized: Vec<(f64, &DensityMatrix)> = terms.iter().map(|(p, r)| (p / total, *r)).collect();
        let after = DensityMatrix::mixture(&normalized).unwrap();
        prop_assert!(after.max_distance(&before).unwrap() < 1e-9);
    }
}

#[test]
fn each_basis_vector_yields_its_own_label() {
    for b in [
        MeasurementBasis::Computational,
        MeasurementBasis::XBasis,
        MeasurementBasis::Bell,
        MeasurementBasis::GhzBasis(1),
        MeasurementBasis::GhzBasis(2),
        MeasurementBasis::GhzBasis(3),
        MeasurementBasis::GhzBasis(4),
    ] {
        let targets: Vec<usize> = (0..b.arity()).collect();
        for (k, v) in b.basis_vectors().unwrap().iter().enumerate() {
            let branches = measure(v, b, &targets).unwrap();
            assert!((branches[k].probability - 1.0).abs() < 1e-9, "{b:?} label {k}");
            for (j, br) in branches.iter().enumerate() {
                if j != k {
                    assert!(br.probability < 1e-9);
                }
            }
        }
    }
}

#[test]
fn measuring_a_middle_qubit_keeps_relative_order() {
    // |0⟩|+⟩|1⟩: measuring qubit 1 leaves |0⟩|1⟩ = index 1 on the remaining pair.
    let s = PureState::from_real(&[0.0, 1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
    for br in measure(&s, MeasurementBasis::XBasis, &[1]).unwrap() {
        if let Some(post) = br.post_state {
            assert!((post.amplitudes()[1].norm_sqr() - 1.0).abs() < 1e-12);
        }
    }
}
