//! Acceptance criteria 1–11, one line each. Runs without the libtest harness
//! so the table is printed on every `cargo test`.

use std::process::ExitCode;

use pwa_cli::certify::{self, Check};

fn main() -> ExitCode {
    let scratch = tempfile::tempdir().expect("scratch dir");
    let checks: Vec<Check> = vec![
        certify::algebraic_identities(),
        certify::symmetry_suite(),
        certify::boundary_and_continuity(),
        certify::theta_three(),
        certify::certified_circles(),
        certify::cancellation_structure(),
        certify::foliation(),
        certify::return_map(),
        certify::rotation_bound(),
        certify::figure_reproduction(scratch.path()),
        certify::spectral_oracles(),
    ];
    println!("\nacceptance criteria");
    let mut failed = 0;
    for c in &checks {
        let ok = c.passed && c.within_budget();
        failed += usize::from(!ok);
        let note = if c.passed && !c.within_budget() {
            "  (over runtime budget)"
        } else {
            ""
        };
        println!(
            "criterion {:>2}: {}{note}",
            c.id,
            if ok { "PASS" } else { "FAIL" }
        );
        println!("    {}", c.line());
    }
    println!("{} passed, {failed} failed\n", checks.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
