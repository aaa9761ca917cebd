//! Runs the full reproduction battery and prints one line per criterion.

use std::process::ExitCode;

use airytrace::verify::{run, Tier};

fn main() -> ExitCode {
    let ledger = run(Tier::Full);
    for c in &ledger.checks {
        println!("{}  ({} ms)", c.line(), c.elapsed_ms);
        if !c.passed {
            println!("       expected: {}", c.expected);
            println!("       computed: {}", c.computed);
        }
    }
    let passed = ledger.checks.iter().filter(|c| c.passed).count();
    println!("acceptance: {passed}/{} criteria passed", ledger.checks.len());
    assert_eq!(ledger.checks.len(), 15, "every criterion must be present");
    if ledger.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
