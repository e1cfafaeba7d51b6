//! Runs the verification suites at reduced size. Pass `full` for the
//! full sample counts.

use lints_lab::theory::{run_suite_scaled, Suite};

fn main() -> lints_lab::Result<()> {
    let scale = if std::env::args().any(|a| a == "full") {
        1.0
    } else {
        0.05
    };
    let reports = run_suite_scaled(Suite::All, 1, scale)?;
    for r in &reports {
        println!("{}", r.line());
    }
    let failed = reports.iter().filter(|r| !r.pass).count();
    println!("{} checks, {failed} failed", reports.len());
    Ok(())
}
