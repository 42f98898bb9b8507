//! Acceptance suite: every end-to-end check at full scale, one line each.
//!
//! Runs without the libtest harness so the pass/fail lines are always shown.

use classfield::density::DensityConfig;
use classfield::verify::{run_all, Profile, DEFAULT_SEED};

fn main() {
    let results = run_all(Profile::Full, DEFAULT_SEED, &DensityConfig::default());
    let mut failed = 0;
    for (i, r) in results.iter().enumerate() {
        let status = if r.passed { "PASS" } else { "FAIL" };
        let limit = r.time_limit_ms.map(|l| format!(" (limit {l} ms)")).unwrap_or_default();
        println!("criterion {:>2} {status} {}: {} [{} ms{limit}]", i + 1, r.name, r.detail, r.elapsed_ms);
        failed += !r.passed as usize;
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
