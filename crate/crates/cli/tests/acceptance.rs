//! Runs every registered config once and prints one verdict line per criterion.
//!
//! A criterion fails on an error, on a failing blocking row or when it
//! overruns its wall-clock budget. Non-blocking entries and rows are printed
//! but never change the exit status.

use nullscri::registry::REGISTRY;
use nullscri::{resolve, run_source};
use std::process::ExitCode;
use std::time::Instant;

fn main() -> ExitCode {
    let mut blocking_failures = 0;
    for e in &REGISTRY {
        let start = Instant::now();
        let res = resolve(e.file).and_then(|src| run_source(&src, None, 1.0));
        let secs = start.elapsed().as_secs_f64();
        let label = if e.blocking { "" } else { " HYPOTHESIS" };
        let timing = format!("{secs:.1} s (budget {} s)", e.budget);
        let (pass, detail) = match &res {
            Ok(o) => {
                let r = &o.report;
                let soft: Vec<&str> = r.rows.iter().filter(|x| !x.pass && !x.blocking).map(|x| x.case.as_str()).collect();
                let mut d = format!("{} rows, {} blocking failures", r.rows.len(), r.blocking_failures());
                if !soft.is_empty() {
                    d.push_str(&format!("; non-blocking FAIL: {}", soft.join(" | ")));
                }
                for x in r.rows.iter().filter(|x| !x.pass && x.blocking) {
                    d.push_str(&format!("\n      {}: target {} value {}", x.case, x.target, x.value));
                }
                (r.pass() && secs <= e.budget, d)
            }
            Err(err) => (false, format!("error: {err}")),
        };
        let over = if secs > e.budget { " over budget," } else { "" };
        println!("criterion {:>2}{label} {} {:<28}{over} {detail}, {timing}", e.criterion, if pass { "PASS" } else { "FAIL" }, e.file);
        if !pass && e.blocking {
            blocking_failures += 1;
        }
    }
    println!("{blocking_failures} blocking criteria failed");
    if blocking_failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
