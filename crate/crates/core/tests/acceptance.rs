//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.
//!
//! Run with `cargo test -p hadamard --test acceptance`.

use std::process::{Command, ExitCode};
use std::time::Instant;

use hadamard::rng::{random_interval, SplitMix64};
use hadamard::{
    check_proposition, integrate_2d, integrate_2d_moving, kernel_breakpoints, kernel_p_moment, lookup_function,
    mean_arithmetic, mean_identric, mean_logarithmic, mean_p_logarithmic, BoundReport, Certifier, FunctionDescriptor,
    Interval, Lemma, MeanPair, Proposition, QuadratureOptions, Variant,
};

const SEED: u64 = 20_240_611;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn kernel_value(t: f64) -> f64 {
    hadamard::kernel_m(t).expect("t in [0, 1]")
}

fn f(spec: &str) -> FunctionDescriptor {
    spec.parse().expect("catalog spec")
}

/// Catalog entries used for randomized bound cases.
fn bound_catalog() -> Vec<FunctionDescriptor> {
    [
        "pow:-3",
        "pow:-2",
        "pow:-1",
        "pow:1",
        "pow:2",
        "pow:3",
        "pow:4",
        "pow:5",
        "exp",
        "ln",
        "recip",
        "neg_ln",
        "abs_pow:2",
        "abs_pow:2.5",
        "abs_pow:3",
        "abs_pow:4.5",
    ]
    .into_iter()
    .map(f)
    .collect()
}

/// Entries convex on their whole domain.
fn convex_catalog() -> Vec<FunctionDescriptor> {
    [
        "pow:-3",
        "pow:-2",
        "pow:-1",
        "pow:1",
        "pow:2",
        "pow:4",
        "exp",
        "recip",
        "neg_ln",
        "abs_pow:2",
        "abs_pow:2.5",
        "abs_pow:3",
        "abs_pow:4.5",
    ]
    .into_iter()
    .map(f)
    .collect()
}

/// One representative per catalog family.
fn family_representatives() -> Vec<FunctionDescriptor> {
    ["pow:3", "exp", "ln", "recip", "neg_ln", "abs_pow:2.5"].into_iter().map(f).collect()
}

fn seeded_cases(n: usize, catalog: &[FunctionDescriptor], seed: u64) -> Vec<(FunctionDescriptor, Interval)> {
    let mut rng = SplitMix64::new(seed);
    (0..n)
        .map(|_| {
            let fd = catalog[rng.index(catalog.len())].clone();
            let iv = random_interval(&mut rng, fd.domain(), fd.domain().default_range()).expect("interval");
            (fd, iv)
        })
        .collect()
}

fn criterion_1() -> Outcome {
    let r =
        integrate_2d(|t, s| (kernel_value(t) - kernel_value(s)).powi(2), 1e-10, &[0.5], &[0.5]).expect("quadrature");
    let err = (r.value - 1.0 / 6.0).abs();
    outcome(r.converged && err <= 1e-10, format!("|numeric − 1/6| = {err:.3e}"))
}

fn quarter(t_hi: bool, s_hi: bool) -> impl Fn(f64, f64) -> bool {
    move |t, s| (t > 0.5) == t_hi && (s > 0.5) == s_hi
}

fn criterion_2() -> Outcome {
    let mut worst_total = 0.0_f64;
    let mut worst_piece = 0.0_f64;
    let mut converged = true;
    let opts = QuadratureOptions::with_tol(1e-10);
    for p in [1.0, 1.5, 2.0, 3.0, 5.0, 10.0] {
        let k = kernel_p_moment(p).expect("moment");
        let total = integrate_2d_moving(
            |t, s| (kernel_value(t) - kernel_value(s)).abs().powf(p),
            kernel_breakpoints,
            &[0.5],
            &opts,
        )
        .expect("quadrature");
        converged &= total.converged;
        worst_total = worst_total.max((total.value - k.closed_form).abs() / k.closed_form);
        // J1: t,s ≤ ½; J2: t ≤ ½ < s; J3: s ≤ ½ < t; J4: t,s > ½
        let quarters = [quarter(false, false), quarter(false, true), quarter(true, false), quarter(true, true)];
        for (inside, expected) in quarters.iter().zip(k.pieces) {
            let r = integrate_2d_moving(
                |t, s| if inside(t, s) { (kernel_value(t) - kernel_value(s)).abs().powf(p) } else { 0.0 },
                kernel_breakpoints,
                &[0.5],
                &opts,
            )
            .expect("quadrature");
            converged &= r.converged;
            worst_piece = worst_piece.max((r.value - expected).abs());
        }
    }
    outcome(
        converged && worst_total <= 1e-8 && worst_piece <= 1e-8,
        format!("max rel. moment error {worst_total:.3e}, max piece error {worst_piece:.3e}"),
    )
}

fn identity_criterion(lemma: Lemma) -> Outcome {
    let certifier = Certifier::default();
    let mut worst = 0.0_f64;
    let mut count = 0;
    for (i, fd) in family_representatives().iter().enumerate() {
        let mut rng = SplitMix64::new(SEED + i as u64);
        for _ in 0..10 {
            let iv = random_interval(&mut rng, fd.domain(), fd.domain().default_range()).expect("interval");
            match certifier.verify_identity(lemma, fd, &iv) {
                Ok(r) => worst = worst.max(r),
                Err(e) => return outcome(false, format!("{fd} on {iv}: {e}")),
            }
            count += 1;
        }
    }
    outcome(worst <= 1e-8, format!("{count} cases, max residual {worst:.3e}"))
}

struct BoundSweep {
    t2: Vec<BoundReport>,
    t3: Vec<(f64, Vec<BoundReport>)>,
    ko: Vec<BoundReport>,
    errors: Vec<String>,
}

fn bound_sweep() -> BoundSweep {
    let certifier = Certifier::default();
    let cases = seeded_cases(1000, &bound_catalog(), SEED);
    let mut sweep = BoundSweep { t2: Vec::new(), t3: Vec::new(), ko: Vec::new(), errors: Vec::new() };
    let record = |r: hadamard::Result<BoundReport>, into: &mut Vec<BoundReport>, errors: &mut Vec<String>| match r {
        Ok(r) => into.push(r),
        Err(e) => errors.push(e.to_string()),
    };
    for (fd, iv) in &cases {
        record(certifier.theorem2(fd, iv), &mut sweep.t2, &mut sweep.errors);
        record(certifier.kirmaci_ozdemir(fd, iv, 2.0), &mut sweep.ko, &mut sweep.errors);
    }
    for q in [1.1, 1.5, 2.0, 3.0, 10.0] {
        let mut reports = Vec::new();
        for (fd, iv) in &cases {
            record(certifier.theorem3(fd, iv, q), &mut reports, &mut sweep.errors);
        }
        sweep.t3.push((q, reports));
    }
    sweep
}

fn holds_summary(reports: &[BoundReport]) -> (usize, usize, f64) {
    let gated: Vec<_> = reports.iter().filter(|r| r.applicable()).collect();
    let failures = gated.iter().filter(|r| !r.holds).count();
    let max_ratio = gated.iter().map(|r| r.ratio).filter(|r| r.is_finite()).fold(0.0, f64::max);
    (gated.len(), failures, max_ratio)
}

fn criterion_5(s: &BoundSweep) -> Outcome {
    let (n, fails, ratio) = holds_summary(&s.t2);
    outcome(
        s.errors.is_empty() && s.t2.len() == 1000 && fails == 0,
        format!("{n} hypothesis-gated cases, {fails} failures, max ratio {ratio:.4}"),
    )
}

fn criterion_6(s: &BoundSweep) -> Outcome {
    let mut ok = s.errors.is_empty();
    let mut parts = Vec::new();
    for (q, reports) in &s.t3 {
        let (n, fails, ratio) = holds_summary(reports);
        ok &= reports.len() == 1000 && fails == 0;
        parts.push(format!("q={q}: {n} gated/{fails} fail/max ratio {ratio:.4}"));
    }
    outcome(ok, parts.join("; "))
}

fn criterion_7(s: &BoundSweep) -> Outcome {
    let t3 = &s.t3.iter().find(|(q, _)| *q == 2.0).expect("q = 2 sweep").1;
    let worst =
        s.t2.iter()
            .zip(t3)
            .map(|(a, b)| if a.bound == 0.0 { (b.bound - a.bound).abs() } else { (b.bound - a.bound).abs() / a.bound })
            .fold(0.0, f64::max);
    outcome(t3.len() == s.t2.len() && worst <= 1e-14, format!("max relative difference {worst:.3e}"))
}

fn criterion_8(s: &BoundSweep) -> Outcome {
    let (n, fails, ratio) = holds_summary(&s.ko);
    outcome(
        s.errors.is_empty() && s.ko.len() == 1000 && fails == 0,
        format!("{n} hypothesis-gated cases, {fails} failures, max ratio {ratio:.4}"),
    )
}

fn criterion_9() -> Outcome {
    let certifier = Certifier::default();
    let cases = seeded_cases(500, &convex_catalog(), SEED + 9);
    let mut unordered = Vec::new();
    for (fd, iv) in &cases {
        match certifier.hh_sandwich(fd, iv) {
            Ok(s) if s.ordered => {}
            Ok(_) => unordered.push(format!("{fd} on {iv}")),
            Err(e) => unordered.push(format!("{fd} on {iv}: {e}")),
        }
    }
    outcome(
        unordered.is_empty(),
        format!("{} intervals, {} unordered {:?}", cases.len(), unordered.len(), unordered.first()),
    )
}

fn seeded_pairs(n: usize, seed: u64) -> Vec<MeanPair> {
    let mut rng = SplitMix64::new(seed);
    let mut pairs = Vec::with_capacity(n);
    while pairs.len() < n {
        // (0, 10]
        let x = 10.0 * (1.0 - rng.next_f64());
        let y = 10.0 * (1.0 - rng.next_f64());
        if x != y {
            pairs.push(MeanPair::new(x.min(y), x.max(y)).expect("positive"));
        }
    }
    pairs
}

fn criterion_10() -> Outcome {
    let certifier = Certifier::default();
    let recip = lookup_function("recip", &[]).expect("recip");
    let ns = [-3, -2, -1, 1, 2, 3, 4, 5];
    let qs = [1.5, 2.0, 3.0];
    let mut checks = 0usize;
    let mut failures: Vec<String> = Vec::new();
    let mut fail = |label: String| failures.push(label);
    let mut worst_gap = 0.0_f64;
    let mut worst_bound = 0.0_f64;

    for mp in seeded_pairs(1000, SEED + 10) {
        let pair = format!("({:.6}, {:.6})", mp.a(), mp.b());
        for &v in &[Variant::AsPrinted, Variant::AsDerived] {
            for &n in &ns {
                let r = check_proposition(Proposition::P1, &mp, Some(n), None, v).expect("P1");
                checks += 1;
                if !r.holds {
                    fail(format!("P1 {v} n={n} {pair}"));
                }
                for &q in &qs {
                    if v == Variant::AsPrinted {
                        let r = check_proposition(Proposition::P2, &mp, Some(n), Some(q), v).expect("P2");
                        checks += 1;
                        if !r.holds {
                            fail(format!("P2 n={n} q={q} {pair}"));
                        }
                    }
                }
            }
            for &q in &qs {
                let r = check_proposition(Proposition::P3, &mp, None, Some(q), v).expect("P3");
                checks += 1;
                if !r.holds {
                    fail(format!("P3 {v} q={q} {pair}"));
                }
            }
        }
        let iv = Interval::new(mp.a(), mp.b()).expect("interval");
        let gap = certifier.midpoint_gap(&recip, &iv).expect("gap");
        for &q in &qs {
            let r = check_proposition(Proposition::P4, &mp, None, Some(q), Variant::AsDerived).expect("P4");
            checks += 1;
            if !r.holds {
                fail(format!("P4 q={q} {pair}"));
            }
            let bound = certifier.theorem3(&recip, &iv, q).expect("bound").bound;
            worst_gap = worst_gap.max((r.lhs - gap).abs());
            worst_bound = worst_bound.max((r.rhs - bound).abs() / bound.max(1.0));
        }
    }

    let agree = worst_gap <= 1e-8 && worst_bound <= 1e-12;
    let mut by_kind: Vec<(String, usize)> = Vec::new();
    for f in &failures {
        let kind: String = f.split_whitespace().take(2).collect::<Vec<_>>().join(" ");
        match by_kind.iter_mut().find(|(k, _)| *k == kind) {
            Some((_, c)) => *c += 1,
            None => by_kind.push((kind, 1)),
        }
    }
    outcome(
        failures.is_empty() && agree,
        format!(
            "{checks} checks, {} failures {by_kind:?} (first: {:?}); P4 vs bounds: |lhs − gap| ≤ {worst_gap:.3e}, rhs rel. diff ≤ {worst_bound:.3e}",
            failures.len(),
            failures.first()
        ),
    )
}

fn criterion_11() -> Outcome {
    let pairs = seeded_pairs(1000, SEED + 11);
    let mut chain_violations = 0;
    let mut worst_l1 = 0.0_f64;
    let mut worst_homog = 0.0_f64;
    let rel = |x: f64, y: f64| (x - y).abs() / y.abs();
    for mp in &pairs {
        let (a, l, i) = (mean_arithmetic(mp), mean_logarithmic(mp), mean_identric(mp));
        if !(l <= i + 1e-12 && i <= a + 1e-12) {
            chain_violations += 1;
        }
        worst_l1 = worst_l1.max(rel(mean_p_logarithmic(mp, 1.0).expect("L1"), a));
        for lambda in [0.5, 2.0, 10.0] {
            let scaled = MeanPair::new(lambda * mp.a(), lambda * mp.b()).expect("scaled");
            let means: [(f64, f64); 5] = [
                (mean_arithmetic(&scaled), a),
                (mean_logarithmic(&scaled), l),
                (mean_identric(&scaled), i),
                (mean_p_logarithmic(&scaled, 2.0).expect("L2"), mean_p_logarithmic(mp, 2.0).expect("L2")),
                (mean_p_logarithmic(&scaled, -2.0).expect("L-2"), mean_p_logarithmic(mp, -2.0).expect("L-2")),
            ];
            for (s, base) in means {
                worst_homog = worst_homog.max(rel(s, lambda * base));
            }
        }
    }
    outcome(
        chain_violations == 0 && worst_l1 <= 1e-14 && worst_homog <= 1e-12,
        format!("chain violations {chain_violations}, L1 vs A rel. {worst_l1:.3e}, homogeneity rel. {worst_homog:.3e}"),
    )
}

fn run_cli(args: &[&str]) -> (Option<i32>, Vec<u8>) {
    let output = Command::new(env!("CARGO_BIN_EXE_hadamard")).args(args).output().expect("run binary");
    (output.status.code(), output.stdout)
}

fn criterion_12() -> Outcome {
    let sweep = ["sweep", "--fn", "exp", "--cases", "100", "--seed", "42", "--q", "2", "--format", "csv"];
    let (c1, out1) = run_cli(&sweep);
    let (c2, out2) = run_cli(&sweep);
    let identical = out1 == out2 && !out1.is_empty();
    let rows = String::from_utf8_lossy(&out1).lines().filter(|l| !l.starts_with('#')).count().saturating_sub(1);

    let (v1, _) = run_cli(&["verify", "--fn", "pow:2", "--interval", "0", "1", "--q", "2", "--format", "json"]);
    let (v2, _) = run_cli(&["verify", "--fn", "pow:2", "--interval", "1", "1", "--q", "2"]);
    let (v3, _) = run_cli(&["verify", "--fn", "pow:0", "--interval", "0", "1", "--q", "2"]);
    let statuses = (v1, v2, v3) == (Some(0), Some(0), Some(2));
    outcome(
        identical && c1 == Some(0) && c2 == Some(0) && rows == 300 && statuses,
        format!("sweep identical={identical} rows={rows} exit={c1:?}; verify exits {v1:?}/{v2:?}/{v3:?} (want 0/0/2)"),
    )
}

fn main() -> ExitCode {
    let start = Instant::now();
    let mut results: Vec<(u32, &str, Outcome)> = vec![
        (1, "kernel square moment equals 1/6", criterion_1()),
        (2, "kernel p-moments and J pieces match quadrature", criterion_2()),
        (3, "second identity residuals", identity_criterion(Lemma::L2)),
        (4, "first identity residuals", identity_criterion(Lemma::L1)),
    ];
    let sweep = bound_sweep();
    results.push((5, "Cauchy–Schwarz bound (T2) holds", criterion_5(&sweep)));
    results.push((6, "Hölder bound (T3) holds for all q", criterion_6(&sweep)));
    results.push((7, "T3 at q = 2 equals T2", criterion_7(&sweep)));
    results.push((8, "Kırmacı–Özdemir bound holds", criterion_8(&sweep)));
    results.push((9, "Hermite–Hadamard sandwich ordered", criterion_9()));
    results.push((10, "mean inequalities P1–P4 hold, P4 agrees with bounds", criterion_10()));
    results.push((11, "means chain, L1 = A, homogeneity", criterion_11()));
    results.push((12, "CLI determinism and exit statuses", criterion_12()));

    let mut failed = 0;
    for (id, name, o) in &results {
        let tag = if o.passed { "PASS" } else { "FAIL" };
        if !o.passed {
            failed += 1;
        }
        println!("[{tag}] criterion {id:>2}: {name} -- {}", o.detail);
    }
    println!("{} of {} criteria passed in {:.1?}", results.len() - failed, results.len(), start.elapsed());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
