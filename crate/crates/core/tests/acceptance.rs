//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! fails.

use std::process::ExitCode;

fn main() -> ExitCode {
    println!("acceptance criteria");
    let report = conclusive_core::verify::run_with(|c| println!("{c}"));
    let n = report.criteria.iter().filter(|c| c.passed).count();
    println!("{n}/{} criteria passed", report.criteria.len());
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
