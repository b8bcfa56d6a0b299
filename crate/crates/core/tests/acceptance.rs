//! Acceptance criteria, one PASS/FAIL line each. Runs as a plain binary
//! (`harness = false`) and exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use qudit_distill::protocol::{distill_bds, fimax_select, fimax_step, DistillOptions};
use qudit_distill::stabilizer::{cosets_in, enumerate_stabilizers, syndrome_partition};
use qudit_distill::states::{offline, BdsState};
use qudit_distill::sweep::{grid, parameter_sweep, Family};
use qudit_distill::verify::{run_suite, Suite, SuiteReport, VerifyConfig};
use qudit_distill::{ErrorElement, Prime};

struct Outcome {
    passed: bool,
    detail: String,
}

fn ok(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn primes() -> [Prime; 2] {
    [Prime::new(2).unwrap(), Prime::new(3).unwrap()]
}

fn qutrit_example_input() -> BdsState {
    let mut probs = vec![0.055; 9];
    probs[5] = 0.56; // Ω_{2,1}
    BdsState::new(Prime::new(3).unwrap(), probs).unwrap()
}

fn close(x: f64, y: f64, tol: f64) -> bool {
    (x - y).abs() <= tol
}

fn qutrit_example() -> Outcome {
    let d = Prime::new(3).unwrap();
    let bds = qutrit_example_input();
    let choice = fimax_select(&bds).unwrap();
    let (out, rec) = fimax_step(&bds).unwrap();
    let mut rest: Vec<f64> = out.probs()[1..].to_vec();
    rest.sort_by(|a, b| b.total_cmp(a));
    let expect_rest = [0.13, 0.13, 0.02, 0.02, 0.02, 0.02, 0.02, 0.02];
    let checks = [
        choice.syndrome.value() == 1,
        choice.action == ErrorElement::single(d, 0, 1),
        close(choice.success_probability, 0.5, 0.01),
        close(choice.predicted_fidelity, 0.63, 0.01),
        close(out.fidelity(), 0.63, 0.01),
        rest.iter().zip(expect_rest).all(|(x, y)| close(*x, y, 0.01)),
        close(rec.fidelity_after, choice.predicted_fidelity, 1e-12),
    ];
    ok(
        checks.iter().all(|&c| c),
        format!(
            "s={} action={} P(E(s))={:.4} ratio={:.4} output={:?}",
            choice.syndrome,
            choice.action,
            choice.success_probability,
            choice.predicted_fidelity,
            out.probs().iter().map(|p| (p * 1e4).round() / 1e4).collect::<Vec<_>>()
        ),
    )
}

fn structure_counts() -> Outcome {
    let mut passed = true;
    let mut detail = Vec::new();
    for d in primes() {
        let n = d.as_usize();
        let stabs = enumerate_stabilizers(d);
        passed &= stabs.len() == (n * n + 1) * (n + 1);
        for stab in &stabs {
            for s in d.elements() {
                passed &= syndrome_partition(stab, s).len() == n * n * n;
                passed &= cosets_in(stab, s).len() == n * n;
            }
        }
        detail.push(format!("d={d}: {} stabilizers", stabs.len()));
    }
    ok(passed, detail.join(", "))
}

fn suite(suite: Suite, cfg: &VerifyConfig) -> Outcome {
    let reports: Vec<SuiteReport> = primes().iter().map(|&d| run_suite(suite, d, cfg).unwrap()).collect();
    let passed = reports.iter().all(SuiteReport::passed);
    let detail = reports
        .iter()
        .flat_map(|r| {
            r.checks.iter().map(move |c| {
                format!(
                    "{}d={} {} {:.1e}",
                    if c.passed() { "" } else { "FAILED " },
                    r.d,
                    c.name,
                    c.max_residual
                )
            })
        })
        .collect::<Vec<_>>()
        .join("; ");
    ok(passed, detail)
}

/// `efficiency > 0` exactly above `threshold`, allowing one grid step of
/// input fidelity on either side.
fn threshold_holds(rows: &[(f64, f64)], threshold: f64, fidelity_step: f64) -> (bool, Option<f64>) {
    let mut passed = true;
    let mut lowest_distillable = None;
    for &(f, eff) in rows {
        if eff > 0.0 && lowest_distillable.is_none() {
            lowest_distillable = Some(f);
        }
        if f > threshold + fidelity_step && eff <= 0.0 {
            passed = false;
        }
        if f < threshold - fidelity_step && eff > 0.0 {
            passed = false;
        }
    }
    (passed, lowest_distillable)
}

fn thresholds() -> Outcome {
    let d3 = Prime::new(3).unwrap();
    let opts = DistillOptions::default();
    let step = 0.005;
    let ps = grid(0.0, 1.0, step).unwrap();

    let iso = parameter_sweep(Family::Isotropic, d3, &ps, &opts).unwrap();
    let iso_rows: Vec<(f64, f64)> = iso.iter().map(|r| (r.input_fidelity, r.efficiency)).collect();
    let (iso_ok, iso_low) = threshold_holds(&iso_rows, 1.0 / 3.0, step * 8.0 / 9.0);

    let off = parameter_sweep(Family::Offline, d3, &ps, &opts).unwrap();
    let off_rows: Vec<(f64, f64)> = off.iter().map(|r| (r.input_fidelity, r.efficiency)).collect();
    let (off_ok, off_low) = threshold_holds(&off_rows, 0.25, step * 2.0 / 9.0);

    let first = distill_bds(&offline(0.7).unwrap(), &DistillOptions { max_iterations: 1, ..opts }).unwrap();
    let first_f = first.records[0].fidelity_after;

    ok(
        iso_ok && off_ok && first_f > 1.0 / 3.0,
        format!(
            "isotropic lowest distillable F={:.5}, offline lowest distillable F={:.5}, offline(0.7) after one step F={:.5}",
            iso_low.unwrap_or(f64::NAN),
            off_low.unwrap_or(f64::NAN),
            first_f
        ),
    )
}

fn main() -> ExitCode {
    let cfg = VerifyConfig { seed: 20240601, ..Default::default() };
    let criteria: Vec<(&str, Duration, Box<dyn Fn() -> Outcome>)> = vec![
        ("1 qutrit worked example end-to-end", Duration::from_secs(1), Box::new(qutrit_example)),
        ("2 structure counts", Duration::from_secs(1), Box::new(structure_counts)),
        ("3 oracle equivalence", Duration::from_secs(300), Box::new({
            let cfg = cfg.clone();
            move || suite(Suite::Oracle, &cfg)
        })),
        ("4 maximality", Duration::from_secs(600), Box::new({
            let cfg = cfg.clone();
            move || suite(Suite::Maximality, &cfg)
        })),
        ("5 distillability thresholds", Duration::from_secs(60), Box::new(thresholds)),
        ("6 algebra", Duration::from_secs(30), Box::new({
            let cfg = cfg.clone();
            move || suite(Suite::Algebra, &cfg)
        })),
        ("7 coset fidelity normalizations", Duration::from_secs(600), Box::new({
            let cfg = cfg.clone();
            move || suite(Suite::Encodings, &cfg)
        })),
    ];
    let mut failures = 0;
    for (name, budget, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= budget;
        let passed = outcome.passed && in_time;
        if !passed {
            failures += 1;
        }
        println!(
            "{} criterion {name} ({:.2}s, budget {}s){}: {}",
            if passed { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            budget.as_secs(),
            if in_time { "" } else { " [over time budget]" },
            outcome.detail
        );
    }
    if failures == 0 {
        println!("all acceptance criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("{failures} acceptance criteria failed");
        ExitCode::FAILURE
    }
}
