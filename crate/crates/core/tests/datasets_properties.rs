use faer::Mat;
use proptest::prelude::*;

use subspace_lrr::datasets::{
    load_dataset, parse_dataset, save_dataset, to_text, three_circles, two_moons, LabeledDataset,
};
use subspace_lrr::hypergraph::ObservationMatrix;
use subspace_lrr::Error;

fn finite() -> impl Strategy<Value = f64> {
    prop_oneof![
        -1e3f64..1e3,
        any::<f64>().prop_filter("finite", |v| v.is_finite()),
        Just(f64::MIN_POSITIVE),
        Just(-0.0),
        Just(f64::MAX),
    ]
}

fn dataset() -> impl Strategy<Value = LabeledDataset> {
    (1usize..5, 0usize..12, any::<bool>()).prop_flat_map(|(m, n, labeled)| {
        (
            prop::collection::vec(finite(), m * n),
            prop::collection::vec(0usize..7, n),
        )
            .prop_map(move |(vals, labels)| {
                let y = ObservationMatrix::new(Mat::from_fn(m, n, |i, j| vals[j * m + i])).unwrap();
                LabeledDataset::new(y, labeled.then_some(labels), "p").unwrap()
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn text_round_trip_is_bit_exact(d in dataset()) {
        let text = to_text(&d).unwrap();
        prop_assert!(!text.contains('\r'));
        let back = parse_dataset(&text, "p").unwrap();
        let (a, b) = (d.observations.data(), back.observations.data());
        prop_assert_eq!((a.nrows(), a.ncols()), (b.nrows(), b.ncols()));
        for j in 0..a.ncols() {
            for i in 0..a.nrows() {
                prop_assert_eq!(a[(i, j)].to_bits(), b[(i, j)].to_bits());
            }
        }
        prop_assert_eq!(back.labels, d.labels);
    }

    #[test]
    fn parser_never_panics(text in "\\PC{0,200}") {
        let _ = parse_dataset(&text, "fuzz");
    }

    #[test]
    fn ragged_row_reports_its_line(rows in 1usize..10, bad in 0usize..10) {
        let bad = bad % rows;
        let mut text = String::from("dim_0,dim_1\n");
        for r in 0..rows {
            if r == bad {
                text.push_str("1.0\n");
            } else {
                text.push_str("1.0,2.0\n");
            }
        }
        match parse_dataset(&text, "r") {
            Err(Error::Parse { line, .. }) => prop_assert_eq!(line, bad + 2),
            other => prop_assert!(false, "unexpected {:?}", other),
        }
    }

    #[test]
    fn generators_are_seed_deterministic(seed in any::<u64>(), n in 3usize..30, noise in 0.04f64..0.10) {
        prop_assert_eq!(two_moons(n, noise, seed).unwrap(), two_moons(n, noise, seed).unwrap());
        let c = three_circles(n, [1.0, 2.0, 3.0], noise, seed).unwrap();
        prop_assert_eq!(c.observations.n(), 3 * n);
        prop_assert_eq!(&c, &three_circles(n, [1.0, 2.0, 3.0], noise, seed).unwrap());
    }
}

#[test]
fn files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("moons.csv");
    let d = two_moons(40, 0.06, 5).unwrap();
    save_dataset(&d, &path).unwrap();
    let back = load_dataset(&path).unwrap();
    assert_eq!(back.observations, d.observations);
    assert_eq!(back.labels, d.labels);
    assert_eq!(back.name, "moons");
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().next(), Some("dim_0,dim_1,label"));
    assert_eq!(text.lines().count(), 81);
}

#[test]
fn missing_file_is_io_error() {
    assert!(matches!(load_dataset("/nonexistent/x.csv"), Err(Error::Io { .. })));
}
