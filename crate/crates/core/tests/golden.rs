//! Golden-file checks: seeded plans are frozen in the repository so any
//! change to the generator or derivation chain shows up as a diff.

use modeval::resampling::five_by_two_plan;
use modeval::SeedSpec;

#[test]
fn five_by_two_plan_under_seed_7_matches_committed_fixture() {
    let labels = [0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 1, 1];
    let plans = five_by_two_plan(12, &labels, SeedSpec::new(7, 0)).unwrap();
    let mut serialized = serde_json::to_string_pretty(&plans).unwrap();
    serialized.push('\n');

    let path = concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/tests/golden/five_by_two_seed7.json"
    );
    if std::env::var("UPDATE_GOLDEN").is_ok() {
        std::fs::write(path, &serialized).unwrap();
        panic!("golden file regenerated; rerun without UPDATE_GOLDEN");
    }
    let committed = std::fs::read_to_string(path).expect("committed golden fixture");
    assert_eq!(serialized, committed);

    // The plan is also structurally sound.
    for (first, second) in &plans {
        first.validate(12).unwrap();
        assert_eq!(first.train_indices, second.test_indices);
        assert_eq!(first.test_indices, second.train_indices);
    }
}
