use std::process::Command;
use std::time::{Duration, Instant};

use whitney_dq::config::RunConfig;
use whitney_dq::fedosov::{build_a, ConnectionInput};
use whitney_dq::policy::TruncationPolicy;
use whitney_dq::verify::{
    betti_checks, chain_checks, default_curved, e1_checks, fedosov_checks, flat_oracle_check, form_identity_checks,
    quotient_star_checks, run_suite, stability_check, star_axiom_checks, star_involution_check, subset_for, Check,
};
use whitney_dq::weyl::PoissonTensor;
use whitney_dq::whitney::SubsetModel;

const SEED: u64 = 20240601;

struct Outcome {
    id: usize,
    title: &'static str,
    passed: bool,
    elapsed: Duration,
    budget: Duration,
    detail: String,
}

fn summarize(checks: &[Check]) -> (bool, String) {
    let failed: Vec<String> = checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| format!("{} ({}/{}: {})", c.name, c.failures, c.trials, c.first_failure.clone().unwrap_or_default()))
        .collect();
    let trials: usize = checks.iter().map(|c| c.trials).sum();
    if failed.is_empty() {
        (true, format!("{} checks, {} trials", checks.len(), trials))
    } else {
        (false, failed.join("; "))
    }
}

fn criterion(id: usize, title: &'static str, budget_s: u64, body: impl FnOnce() -> (bool, String)) -> Outcome {
    let t = Instant::now();
    let (ok, detail) = body();
    let elapsed = t.elapsed();
    let budget = Duration::from_secs(budget_s);
    Outcome { id, title, passed: ok && elapsed <= budget, elapsed, budget, detail }
}

fn checks_of(r: whitney_dq::Result<Vec<Check>>) -> Vec<Check> {
    r.unwrap_or_else(|e| {
        let mut c = Check::new("error");
        c.record(false, || e.to_string());
        vec![c]
    })
}

fn c1() -> (bool, String) {
    let mut all = Vec::new();
    for (name, n) in [("flat", 1), ("flat", 2), ("curved-linear-n1", 1), ("curved-linear-n2", 2)] {
        let conn = ConnectionInput::builtin(name, n).unwrap();
        all.extend(checks_of(star_axiom_checks(&conn, 100, SEED)));
    }
    summarize(&all)
}

fn c2() -> (bool, String) {
    let mut all = Vec::new();
    for (name, n) in [("flat", 2), ("curved-linear-n1", 1), ("curved-linear-n2", 2)] {
        let conn = ConnectionInput::builtin(name, n).unwrap();
        all.extend(checks_of(fedosov_checks(&conn, 50, 20, SEED)));
    }
    summarize(&all)
}

fn c3() -> (bool, String) {
    let all: Vec<Check> = [1, 2].iter().flat_map(|&n| checks_of(flat_oracle_check(n, 200, SEED).map(|c| vec![c]))).collect();
    summarize(&all)
}

fn jet_for(n: usize) -> u32 {
    if n == 1 {
        3
    } else {
        2
    }
}

fn c4() -> (bool, String) {
    let mut all = Vec::new();
    for name in ["axis", "cross", "two-points", "plane-in-r4"] {
        let (x, n) = subset_for(name).unwrap();
        let fd = build_a(&default_curved(n).unwrap(), &TruncationPolicy::new(n, jet_for(n), 8, 3)).unwrap();
        all.extend(checks_of(stability_check(&x, name, &fd, jet_for(n), 100, SEED)));
    }
    summarize(&all)
}

fn c5() -> (bool, String) {
    let mut all = Vec::new();
    for name in ["point", "axis", "cross", "two-points", "plane-in-r4"] {
        let (x, n) = subset_for(name).unwrap();
        let fd = build_a(&default_curved(n).unwrap(), &TruncationPolicy::new(n, jet_for(n), 8, 3)).unwrap();
        all.extend(checks_of(quotient_star_checks(&x, name, &fd, jet_for(n), 100, SEED)));
    }
    summarize(&all)
}

fn c6() -> (bool, String) {
    let mut all = Vec::new();
    for (name, n, jet) in [("cross", 1, 4), ("plane-in-r4", 2, 4)] {
        let x = SubsetModel::catalogue(name, n).unwrap();
        let pt = PoissonTensor::darboux(n);
        all.extend(checks_of(star_involution_check(&x, &pt, jet).map(|c| vec![c])));
        all.extend(checks_of(form_identity_checks(&x, &pt, if n == 1 { 4 } else { 2 }, 100, SEED)));
    }
    summarize(&all)
}

fn c7() -> (bool, String) {
    let mut all = Vec::new();
    let mut tables = Vec::new();
    for (name, jet) in [("point", 4), ("axis", 3), ("cross", 3), ("two-points", 3), ("plane-in-r4", 2), ("full", 2)] {
        match betti_checks(name, jet) {
            Ok((c, t)) => {
                tables.push(format!("{} {:?}", name, t.de_rham));
                all.extend(c);
            }
            Err(e) => all.extend(checks_of(Err(e))),
        }
    }
    let (ok, detail) = summarize(&all);
    (ok, format!("{}; {}", tables.join(", "), detail))
}

fn c8() -> (bool, String) {
    summarize(&checks_of(chain_checks(100, SEED)))
}

fn c9() -> (bool, String) {
    match e1_checks(&["point", "axis"], 20, SEED) {
        Ok((checks, summaries)) => {
            let (ok, detail) = summarize(&checks);
            let kappas: Vec<String> = summaries
                .iter()
                .map(|s| format!("{} q={} kappa={}", s.subset, s.q, s.kappa.clone().unwrap_or_else(|| "none".into())))
                .collect();
            let defined = summaries.iter().all(|s| s.kappa.is_some());
            let same = summaries.iter().all(|s| s.kappa == summaries[0].kappa);
            (ok && defined && same, format!("{}; {}", kappas.join(", "), detail))
        }
        Err(e) => (false, e.to_string()),
    }
}

fn c10() -> (bool, String) {
    let config = RunConfig { seed: SEED, trials: 10, ..Default::default() };
    let a = run_suite(&config, "all").map(|r| r.to_json());
    let b = run_suite(&config, "all").map(|r| r.to_json());
    let lib_ok = matches!((&a, &b), (Ok(x), Ok(y)) if x == y);
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_whitney-dq"))
            .args(["verify", "all", "--seed", "11", "--trials", "5"])
            .output()
            .expect("binary runs")
    };
    let (x, y) = (run(), run());
    let bin_ok = x.status.success() && x.stdout == y.stdout && !x.stdout.is_empty();
    (lib_ok && bin_ok, format!("library reports identical: {}, binary output identical: {}", lib_ok, bin_ok))
}

fn main() {
    let outcomes = vec![
        criterion(1, "star-product axioms", 60, c1),
        criterion(2, "Fedosov flatness and quantization isomorphism", 60, c2),
        criterion(3, "flat connection gives the Moyal product", 30, c3),
        criterion(4, "ideal stability and exact sequence", 120, c4),
        criterion(5, "quotient star product", 120, c5),
        criterion(6, "Hodge star and Brylinski identities", 60, c6),
        criterion(7, "Betti numbers and Poisson duality", 120, c7),
        criterion(8, "chain-level identities", 60, c8),
        criterion(9, "first-order probe of the h-filtration", 60, c9),
        criterion(10, "deterministic reports", 120, c10),
    ];
    for o in &outcomes {
        println!(
            "criterion {:>2} {}: {} [{:.2} s of {} s] {}",
            o.id,
            if o.passed { "PASS" } else { "FAIL" },
            o.title,
            o.elapsed.as_secs_f64(),
            o.budget.as_secs(),
            o.detail
        );
    }
    let failed: Vec<usize> = outcomes.iter().filter(|o| !o.passed).map(|o| o.id).collect();
    if !failed.is_empty() {
        eprintln!("failed criteria: {:?}", failed);
        std::process::exit(1);
    }
}
