use std::io::Write;

use polytile_core::checks::{run_all, Fixture};
use polytile_core::wang::WangSet;

#[test]
fn acceptance() {
    let fx = Fixture::new(WangSet::sample()).expect("sample set compiles");
    let outcomes = run_all(&fx);
    // Written past the test harness capture so the lines show on every run.
    let mut out = std::io::stdout().lock();
    for o in &outcomes {
        writeln!(out, "{o}").unwrap();
    }
    drop(out);
    let failed: Vec<u8> = outcomes
        .iter()
        .filter(|o| !o.passed)
        .map(|o| o.id)
        .collect();
    assert_eq!(outcomes.len(), 11);
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
