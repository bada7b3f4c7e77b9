use std::time::Instant;

use stability_lab_core::halfspace::ThresholdCatalog;

// Number of threshold functions of n variables: 4, 14, 104, 1882, 94572.
#[test]
fn threshold_function_counts() {
    for (n, count) in [(1, 4), (2, 14), (3, 104), (4, 1882), (5, 94572)] {
        let start = Instant::now();
        let c = ThresholdCatalog::build(n).unwrap();
        eprintln!("n={n}: {} sets in {:?}", c.len(), start.elapsed());
        assert_eq!(c.len(), count, "n = {n}");
    }
}
