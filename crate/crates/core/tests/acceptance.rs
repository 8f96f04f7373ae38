//! Acceptance suite: one PASS/FAIL line per criterion; exits nonzero on failure.

use loewner_lab::output::CheckResult;
use loewner_lab::suite::{criteria, SuiteConfig};
use rayon::prelude::*;
use std::time::Instant;

fn main() {
    let cfg = SuiteConfig::default();
    let start = Instant::now();
    let results: Vec<_> = criteria()
        .into_par_iter()
        .map(|c| {
            let t = Instant::now();
            let checks = c.run(&cfg);
            (c, checks, t.elapsed())
        })
        .collect();
    let mut failed = 0;
    for (c, checks, elapsed) in &results {
        let pass = checks.iter().all(CheckResult::pass);
        if !pass {
            failed += 1;
        }
        let worst = checks
            .iter()
            .map(|k| {
                if k.tolerance > 0.0 {
                    k.residual / k.tolerance
                } else if k.residual == 0.0 {
                    0.0
                } else {
                    f64::INFINITY
                }
            })
            .fold(0.0, f64::max);
        println!(
            "{} criterion {:>2} {:<22} worst residual/tolerance = {:.3e} ({:.2?}) — {}",
            if pass { "PASS" } else { "FAIL" },
            c.id,
            c.name,
            worst,
            elapsed,
            c.summary
        );
        for k in checks {
            let detail = k.note.as_deref().unwrap_or("");
            println!(
                "       {} {:<28} residual {:.3e} tol {:.1e} {} {}",
                if k.pass() { "ok " } else { "BAD" },
                k.check,
                k.residual,
                k.tolerance,
                k.params,
                detail
            );
        }
    }
    println!(
        "acceptance: {}/{} criteria passed in {:.2?}",
        results.len() - failed,
        results.len(),
        start.elapsed()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
