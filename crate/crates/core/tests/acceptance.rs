//! Acceptance suite: runs the default verification plan and reports one
//! PASS/FAIL line per acceptance criterion.
//!
//! Runs as a plain binary (no libtest harness) so the report lines are
//! always visible. Set `WATERMELON_SEED` to try another base seed.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use watermelon::rng::DEFAULT_SEED;
use watermelon::suite::{run_suite, CheckRecord, CheckSpec, SuitePlan, TestReport};

struct Criterion {
    id: &'static str,
    title: &'static str,
    prefixes: &'static [&'static str],
}

const CRITERIA: [Criterion; 8] = [
    Criterion {
        id: "1",
        title: "exact counts equal brute-force enumeration",
        prefixes: &["exact_count_sweep/", "transition_normalization/"],
    },
    Criterion { id: "2", title: "sampler uniformity (chi-square, 1%)", prefixes: &["sampler_uniformity/"] },
    Criterion {
        id: "3",
        title: "discrete marginals vs limit density (KS, n = 2048)",
        prefixes: &["marginal_ks/discrete/"],
    },
    Criterion {
        id: "4",
        title: "squared-norm Gamma law, discrete and SDE",
        prefixes: &["gamma_oracle/", "norm_law/", "norm_mean/"],
    },
    Criterion { id: "5", title: "moment table and Monte Carlo moments", prefixes: &["moment_table/", "moment_mc/"] },
    Criterion { id: "6", title: "symmetric-polynomial expectations", prefixes: &["symmetric_mc/"] },
    Criterion { id: "7", title: "SDE invariants and step halving", prefixes: &["sde_invariants/", "step_halving/"] },
    Criterion { id: "8", title: "factorial-ratio asymptotics", prefixes: &["stirling_ratio/"] },
];

fn matches(record: &CheckRecord, prefixes: &[&str]) -> bool {
    prefixes.iter().any(|p| record.name.starts_with(p))
}

fn verdict_line(ok: bool, id: &str, title: &str, detail: &str) -> bool {
    println!("{} criterion {id}: {title}: {detail}", if ok { "PASS" } else { "FAIL" });
    ok
}

fn print_failures<'a>(records: impl Iterator<Item = &'a CheckRecord>) {
    for r in records.filter(|r| !r.pass) {
        println!("       {}: statistic {} > threshold {}", r.name, r.statistic, r.threshold);
    }
}

fn timed(plan: &SuitePlan, seed: u64, workers: usize) -> (TestReport, Duration) {
    let start = Instant::now();
    let report = run_suite(plan, seed, workers).expect("suite infrastructure error");
    (report, start.elapsed())
}

fn standalone_runtime(check: &str, seed: u64, reference: &TestReport, limit: Duration) -> (bool, String) {
    let plan = SuitePlan { checks: vec![CheckSpec::new(check, serde_json::json!({}), None)] };
    let (report, elapsed) = timed(&plan, seed, 0);
    let same: Vec<&CheckRecord> = reference.records(check).collect();
    let consistent = report.checks.iter().collect::<Vec<_>>() == same;
    (consistent && elapsed < limit, format!("{:.1} s standalone (limit {} s)", elapsed.as_secs_f64(), limit.as_secs()))
}

fn main() -> ExitCode {
    let seed = std::env::var("WATERMELON_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(DEFAULT_SEED);
    let plan = SuitePlan::default_plan();
    println!("acceptance suite, base seed {seed}");

    let (report, elapsed) = timed(&plan, seed, 0);
    let mut all_ok = true;

    for c in &CRITERIA {
        let records: Vec<&CheckRecord> = report.checks.iter().filter(|r| matches(r, c.prefixes)).collect();
        let failed = records.iter().filter(|r| !r.pass).count();
        let mut ok = !records.is_empty() && failed == 0;
        let mut detail = format!("{} records, {failed} failed", records.len());
        let limit = Duration::from_secs(60);
        let runtime_check = match c.id {
            "1" => Some("exact_count_sweep"),
            "2" => Some("sampler_uniformity"),
            _ => None,
        };
        if let Some(check) = runtime_check {
            let (fast, text) = standalone_runtime(check, seed, &report, limit);
            ok &= fast;
            detail = format!("{detail}, {text}");
        }
        all_ok &= verdict_line(ok, c.id, c.title, &detail);
        print_failures(records.into_iter());
    }

    let json = report.to_json();
    let (again, _) = timed(&plan, seed, 0);
    let (one, _) = timed(&plan, seed, 1);
    let (eight, _) = timed(&plan, seed, 8);
    let identical = [again, one, eight].iter().all(|r| r.to_json() == json);
    let fast = elapsed < Duration::from_secs(600);
    all_ok &= verdict_line(
        identical && fast,
        "9",
        "deterministic report, runtime",
        &format!(
            "repeat / 1 worker / 8 workers {}, default run {:.1} s (limit 600 s)",
            if identical { "byte-identical" } else { "DIFFER" },
            elapsed.as_secs_f64()
        ),
    );

    let extra: Vec<&CheckRecord> =
        report.checks.iter().filter(|r| !CRITERIA.iter().any(|c| matches(r, c.prefixes))).collect();
    let extra_failed = extra.iter().filter(|r| !r.pass).count();
    all_ok &= verdict_line(
        extra_failed == 0,
        "-",
        "supplementary checks (spectral and SDE marginals, time symmetry, KS self-test)",
        &format!("{} records, {extra_failed} failed", extra.len()),
    );
    print_failures(extra.into_iter());

    println!("overall verdict: {}", if report.verdict && all_ok { "PASS" } else { "FAIL" });
    if report.verdict && all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
