//! Runs the randomized inequality suite and prints a per-key summary.
//!
//! `cargo run --release --example inequality_suite -- [trials] [seed]`

use std::collections::BTreeMap;

use maxspec::inequalities::{run_suite, SuiteConfig};
use maxspec::report::Verdict;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let trials = args.next().map(|s| s.parse()).transpose()?.unwrap_or(500);
    let seed = args.next().map(|s| s.parse()).transpose()?.unwrap_or(0);
    let config = SuiteConfig {
        trials,
        seed,
        ..SuiteConfig::default()
    };

    // key -> (holds, near tight, not applicable, violated)
    let mut tally: BTreeMap<String, [usize; 4]> = BTreeMap::new();
    let summary = run_suite(&config, |r| {
        let slot = match r.verdict {
            Verdict::Holds => 0,
            Verdict::NearTight => 1,
            Verdict::NotApplicable(_) => 2,
            Verdict::Violated => 3,
        };
        tally.entry(r.key.clone()).or_default()[slot] += 1;
    })?;

    println!(
        "{:<22} {:>6} {:>6} {:>6} {:>6}",
        "key", "holds", "tight", "n/a", "viol"
    );
    for (key, [h, t, na, v]) in &tally {
        println!("{key:<22} {h:>6} {t:>6} {na:>6} {v:>6}");
    }
    println!(
        "{} trials, {} checks, {} violations",
        summary.trials,
        summary.checks,
        summary.violations.len()
    );
    for v in &summary.violations {
        println!("violation {}: lhs {} rhs {}", v.key, v.lhs, v.rhs);
    }
    Ok(())
}
