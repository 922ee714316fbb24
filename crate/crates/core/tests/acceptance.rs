//! Runs every acceptance criterion and prints one PASS/FAIL line each.

use std::process::ExitCode;
use std::time::Instant;

fn main() -> ExitCode {
    let seed = std::env::var("PROPP_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(0);
    let mut failed = 0;
    for &(id, _) in propp::suite::CRITERIA.iter() {
        let start = Instant::now();
        let r = propp::suite::run_one(id, seed).expect("known criterion");
        let verdict = if r.passed { "PASS" } else { "FAIL" };
        println!("{verdict} {:>2} {:<22} {:>7.2}s  {}", r.id, r.name, start.elapsed().as_secs_f64(), r.detail);
        failed += usize::from(!r.passed);
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
