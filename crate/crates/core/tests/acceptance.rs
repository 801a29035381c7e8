//! Acceptance suite: one PASS/FAIL line per criterion, failing checks listed below it.
//!
//! Runs without the libtest harness so the lines are always printed.

use std::process::ExitCode;
use std::time::Instant;

use clonelab::verify::{run_criterion, CRITERIA};

fn main() -> ExitCode {
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for c in CRITERIA {
        if !filter.is_empty() && !filter.iter().any(|f| f == c.key || *f == c.id.to_string()) {
            continue;
        }
        let start = Instant::now();
        let checks = run_criterion(c);
        let bad: Vec<_> = checks.iter().filter(|ch| !ch.pass).collect();
        let verdict = if bad.is_empty() { "PASS" } else { "FAIL" };
        println!(
            "{verdict} criterion {:>2} {:<14} {}/{} checks ({:.1}s) {}",
            c.id,
            c.key,
            checks.len() - bad.len(),
            checks.len(),
            start.elapsed().as_secs_f64(),
            c.title
        );
        for ch in &bad {
            match &ch.note {
                Some(note) => println!("    {}: {note}", ch.name),
                None => println!("    {}: expected {} got {} tol {}", ch.name, ch.expected, ch.got, ch.tol),
            }
        }
        if !bad.is_empty() {
            failed += 1;
        }
    }
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
