//! Runs every acceptance criterion, as `cliffordlab selftest` does.

use cliffordlab::acceptance::{run_all, AcceptanceConfig};

fn main() {
    let results = run_all(&AcceptanceConfig::default());
    for r in &results {
        println!("{r}");
    }
    let passed = results.iter().filter(|r| r.passed).count();
    println!("{passed}/{} passed", results.len());
}
