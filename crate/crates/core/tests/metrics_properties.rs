mod common;

use proptest::prelude::*;

use subspace_lrr::metrics::{accuracy, hungarian, CostMatrix};

fn square(max_k: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    (1..=max_k).prop_flat_map(|k| prop::collection::vec(prop::collection::vec(-50.0f64..50.0, k), k))
}

fn labeling(k: usize, max_n: usize) -> impl Strategy<Value = (Vec<usize>, Vec<usize>)> {
    (1..=max_n).prop_flat_map(move |n| {
        (
            prop::collection::vec(0..k, n),
            prop::collection::vec(0..k, n),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn hungarian_matches_exhaustive_search(rows in square(6)) {
        let cost = CostMatrix::new(rows.clone()).unwrap();
        let a = hungarian(&cost);
        let mut seen = a.clone();
        seen.sort_unstable();
        prop_assert_eq!(seen, (0..rows.len()).collect::<Vec<_>>());
        prop_assert!((cost.total(&a) - common::exhaustive_assignment(&rows)).abs() <= 1e-9);
    }

    #[test]
    fn hungarian_handles_integer_ties(rows in (1usize..=5).prop_flat_map(|k| prop::collection::vec(prop::collection::vec(0u8..3, k), k))) {
        let rows: Vec<Vec<f64>> = rows.into_iter().map(|r| r.into_iter().map(f64::from).collect()).collect();
        let cost = CostMatrix::new(rows.clone()).unwrap();
        prop_assert_eq!(cost.total(&hungarian(&cost)), common::exhaustive_assignment(&rows));
    }

    #[test]
    fn accuracy_matches_exhaustive_relabeling((pred, truth) in labeling(5, 40)) {
        let got = accuracy(&pred, &truth).unwrap();
        prop_assert!((got - common::exhaustive_accuracy(&pred, &truth)).abs() <= 1e-12);
        prop_assert!((0.0..=1.0).contains(&got));
    }

    #[test]
    fn accuracy_is_permutation_invariant((pred, truth) in labeling(6, 50), perm in Just((0..6usize).collect::<Vec<_>>()).prop_shuffle()) {
        let relabeled: Vec<usize> = pred.iter().map(|&p| perm[p]).collect();
        prop_assert_eq!(accuracy(&pred, &truth).unwrap(), accuracy(&relabeled, &truth).unwrap());
        prop_assert_eq!(accuracy(&truth, &truth).unwrap(), 1.0);
    }
}
