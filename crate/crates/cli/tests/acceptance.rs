//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits nonzero if any fails.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use cauchon::harness::{
    local_identity_sweep, nonnegativity_sweep, round_trip_sweep, verify_bijection, verify_bruhat_interval,
    verify_counts, verify_equivalence, EquivalenceConfig,
};
use cauchon::pipedream::{diagram_to_permutation, permutation_to_diagram};
use cauchon::{CauchonDiagram, GridShape, Permutation};

const SEED: u64 = 20_240_601;

fn shapes_with_sum_at_most(total: usize) -> Vec<GridShape> {
    (1..total)
        .flat_map(|m| (1..=total - m).map(move |p| GridShape::new(m, p).unwrap()))
        .collect()
}

fn shape(m: usize, p: usize) -> GridShape {
    GridShape::new(m, p).unwrap()
}

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn within(elapsed: Duration, limit_secs: u64) -> bool {
    elapsed <= Duration::from_secs(limit_secs)
}

fn counting() -> Outcome {
    let start = Instant::now();
    let mut bad = Vec::new();
    let mut anchors = Vec::new();
    for s in shapes_with_sum_at_most(7) {
        let r = verify_counts(s).expect("counts");
        if !r.equal {
            bad.push(format!("{s}: {} vs {}", r.diagrams, r.restricted));
        }
        if [(1, 1), (2, 2), (3, 3)].contains(&(s.m(), s.p())) {
            anchors.push(r.diagrams);
        }
    }
    let elapsed = start.elapsed();
    let passed = bad.is_empty() && anchors == [2, 14, 230] && within(elapsed, 10);
    outcome(passed, format!("anchors {anchors:?}, mismatches {bad:?}, {elapsed:.2?}"))
}

fn bruhat() -> Outcome {
    let start = Instant::now();
    let bad: Vec<String> = shapes_with_sum_at_most(6)
        .into_iter()
        .filter_map(|s| {
            let r = verify_bruhat_interval(s).expect("bruhat");
            (!r.equal).then(|| format!("{s}: {} vs {}", r.translated, r.interval))
        })
        .collect();
    let elapsed = start.elapsed();
    outcome(bad.is_empty() && within(elapsed, 30), format!("mismatches {bad:?}, {elapsed:.2?}"))
}

fn bijection() -> Outcome {
    let start = Instant::now();
    let bad: Vec<String> = shapes_with_sum_at_most(7)
        .into_iter()
        .filter_map(|s| {
            let r = verify_bijection(s).expect("bijection");
            (!r.ok()).then(|| format!("{s}: {r:?}"))
        })
        .collect();
    let one = shape(1, 1);
    let anchors = diagram_to_permutation(&CauchonDiagram::empty(one)).is_identity()
        && diagram_to_permutation(&CauchonDiagram::full(one)).images() == [2, 1]
        && permutation_to_diagram(&Permutation::identity(2), one).unwrap() == CauchonDiagram::empty(one);
    let elapsed = start.elapsed();
    outcome(
        bad.is_empty() && anchors && within(elapsed, 10),
        format!("anchors {anchors}, failures {bad:?}, {elapsed:.2?}"),
    )
}

fn equivalence() -> Outcome {
    let config = EquivalenceConfig {
        seed: SEED,
        ..EquivalenceConfig::default()
    };
    let mut details = Vec::new();
    let mut passed = true;
    for (m, p) in [(1, 1), (2, 2), (2, 3), (3, 2), (3, 3)] {
        let start = Instant::now();
        let r = verify_equivalence(shape(m, p), &config).expect("equivalence");
        let elapsed = start.elapsed();
        passed &= r.ok() && within(elapsed, 300);
        details.push(format!("{m}x{p}: {}/{} in {elapsed:.2?}", r.summary.all_equal, r.summary.diagrams));
    }
    outcome(passed, details.join(", "))
}

fn local_identity() -> Outcome {
    let mut details = Vec::new();
    let mut passed = true;
    for s in [shape(2, 2), shape(3, 3)] {
        let r = local_identity_sweep(s, 3, SEED, None).expect("identity sweep");
        passed &= r.ok() && r.checked > 0;
        details.push(format!("{s}: {} checked, {} failed", r.checked, r.failures.len()));
    }
    outcome(passed, details.join(", "))
}

fn round_trip() -> Outcome {
    let start = Instant::now();
    let mut failures = 0;
    let mut pairs = 0;
    for m in 1..=4 {
        for p in 1..=4 {
            let r = round_trip_sweep(shape(m, p), 50, SEED).expect("round trip");
            failures += r.failures.len();
            pairs += r.pairs;
        }
    }
    let elapsed = start.elapsed();
    outcome(
        failures == 0 && within(elapsed, 60),
        format!("{pairs} pairs, {failures} failed, {elapsed:.2?}"),
    )
}

fn nonnegativity() -> Outcome {
    let mut diagrams = 0;
    let mut minors = 0;
    let mut violations = Vec::new();
    let exhaustive = (1..=9).flat_map(|m| (1..=9 / m).map(move |p| shape(m, p)));
    for s in exhaustive {
        let r = nonnegativity_sweep(s, SEED, None).expect("nonnegativity");
        diagrams += r.diagrams;
        minors += r.minors_checked;
        violations.extend(r.violations);
    }
    let sampled = nonnegativity_sweep(shape(4, 4), SEED, Some(200)).expect("nonnegativity");
    violations.extend(sampled.violations);
    outcome(
        violations.is_empty() && sampled.diagrams == 200,
        format!(
            "{diagrams} exhaustive + {} sampled diagrams, {} minors, violations {violations:?}",
            sampled.diagrams,
            minors + sampled.minors_checked
        ),
    )
}

fn run_cli(args: &[&str], cache: Option<&Path>) -> (i32, Vec<u8>) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_cauchon"));
    cmd.args(args).env_remove("CAUCHON_CACHE_DIR");
    if let Some(dir) = cache {
        cmd.arg("--cache-dir").arg(dir);
    }
    let out = cmd.output().expect("binary runs");
    (out.status.code().unwrap_or(-1), out.stdout)
}

fn determinism() -> Outcome {
    let cache = tempfile::tempdir().expect("temp dir");
    let mut failures = Vec::new();
    let runs: [&[&str]; 4] = [
        &["verify", "--m", "2", "--p", "3", "--level", "full", "--seed", "7"],
        &["vanish", "--diagram", r#"{"m":3,"p":3,"black":[[1,1],[1,2]]}"#, "--seed", "7"],
        &["witness", "--diagram", r#"{"m":2,"p":2,"black":[[1,1]]}"#, "--seed", "7"],
        &["identity-check", "--m", "2", "--p", "2", "--seed", "7"],
    ];
    for args in runs {
        let first = run_cli(args, None);
        let second = run_cli(args, None);
        let fresh_cached = run_cli(args, Some(cache.path()));
        let from_cache = run_cli(args, Some(cache.path()));
        if first.0 != 0 || first != second || first != fresh_cached || first != from_cache {
            failures.push(args[0]);
        }
    }
    let a = verify_equivalence(shape(3, 2), &EquivalenceConfig::default()).unwrap().to_json_lines();
    let b = verify_equivalence(shape(3, 2), &EquivalenceConfig::default()).unwrap().to_json_lines();
    if a != b {
        failures.push("library report");
    }
    let cached_files = std::fs::read_dir(cache.path()).map(|d| d.count()).unwrap_or(0);
    outcome(
        failures.is_empty() && cached_files == runs.len(),
        format!("differing: {failures:?}, {cached_files} cache files"),
    )
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("1 counting equality", counting),
        ("2 Bruhat interval", bruhat),
        ("3 pipe-dream bijection", bijection),
        ("4 three-way family equivalence", equivalence),
        ("5 local identities", local_identity),
        ("6 restoration round trip", round_trip),
        ("7 witness nonnegativity", nonnegativity),
        ("8 deterministic reports", determinism),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let o = check();
        let tag = if o.passed { "PASS" } else { "FAIL" };
        println!("{tag} criterion {name}: {}", o.detail);
        failed += usize::from(!o.passed);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
