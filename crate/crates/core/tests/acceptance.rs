//! The full acceptance suite. Run with `--nocapture` to see one line per criterion.

use cliffordlab::acceptance::{run_all, AcceptanceConfig, CRITERIA};
use cliffordlab::enumerate::EnumConfig;

#[test]
fn all_criteria_pass() {
    let cfg = AcceptanceConfig { seed: 1, enumeration: EnumConfig::with_jobs(2) };
    let results = run_all(&cfg);
    assert_eq!(results.len(), CRITERIA.len());
    for r in &results {
        println!("{r}");
    }
    let failed: Vec<_> = results.iter().filter(|r| !r.passed).map(|r| r.name).collect();
    println!("{}/{} criteria passed", results.len() - failed.len(), results.len());
    assert!(failed.is_empty(), "failed: {failed:?}");
}
