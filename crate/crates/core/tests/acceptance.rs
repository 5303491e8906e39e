use bm_core::verify::{run_all, VerifyConfig};
use std::process::ExitCode;
use std::time::Instant;

fn main() -> ExitCode {
    let cfg = VerifyConfig::default();
    let start = Instant::now();
    let report = match run_all(&cfg) {
        Ok(r) => r,
        Err(e) => {
            println!("acceptance suite aborted: {e}");
            return ExitCode::FAILURE;
        }
    };
    for c in &report.checks {
        println!("{}", c.line());
        if !c.passed {
            for note in &c.notes {
                println!("       {note}");
            }
        }
    }
    let passed = report.checks.iter().filter(|c| c.passed).count();
    println!(
        "acceptance: {passed}/{} criteria passed in {:.2?} (seed {})",
        report.checks.len(),
        start.elapsed(),
        cfg.seed
    );
    if report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
