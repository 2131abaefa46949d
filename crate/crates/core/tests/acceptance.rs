//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::time::{Duration, Instant};

use chromlab_core::asymptotics::{expected_ksets_floor, f_gap, find_n_in_band, ledger, log2_expected_ksets, profile, y_bound};
use chromlab_core::coupling::{build_conditioned_pair, verify_chi_gap_with, verify_pair};
use chromlab_core::graphcore::{
    chromatic_number_with, count_independent_ksets, independence_number, sample_gnp_half, Graph, SolveBudget,
};
use chromlab_core::lab::{self, k_for_mu, xk_distribution_experiment, Command, RunOptions};
use chromlab_core::poisson::{shifted_mass_check, IntervalSet};
use chromlab_core::coupling::Statistic;
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn adjacency_masks(g: &Graph) -> Vec<u32> {
    (0..g.n()).map(|u| (0..g.n()).filter(|&v| g.has_edge(u, v)).fold(0u32, |m, v| m | 1 << v)).collect()
}

fn independent(adj: &[u32], s: u32) -> bool {
    (0..adj.len()).all(|v| s >> v & 1 == 0 || adj[v] & s == 0)
}

/// Number of independent sets of each size, by enumerating all subsets.
fn brute_counts(g: &Graph) -> Vec<u64> {
    let adj = adjacency_masks(g);
    let mut out = vec![0u64; g.n() + 1];
    for s in 0u32..(1 << g.n()) {
        if independent(&adj, s) {
            out[s.count_ones() as usize] += 1;
        }
    }
    out
}

/// Chromatic number by dynamic programming over vertex subsets.
fn brute_chi(g: &Graph) -> usize {
    let n = g.n();
    let adj = adjacency_masks(g);
    let full = (1u32 << n) - 1;
    let ind: Vec<bool> = (0..=full).map(|s| independent(&adj, s)).collect();
    let mut chi = vec![usize::MAX; 1 << n];
    chi[0] = 0;
    for s in 1..=full {
        let low = s & s.wrapping_neg();
        let rest = s ^ low;
        let mut t = rest;
        loop {
            let class = t | low;
            if ind[class as usize] && chi[(s ^ class) as usize] != usize::MAX {
                chi[s as usize] = chi[s as usize].min(1 + chi[(s ^ class) as usize]);
            }
            if t == 0 {
                break;
            }
            t = (t - 1) & rest;
        }
    }
    chi[full as usize]
}

/// Graph with edge density `p`, or G(n, 1/2) from the library sampler when `p` is `None`.
fn random_graph(n: usize, p: Option<f64>, seed: u64) -> Graph {
    match p {
        None => sample_gnp_half(n, seed, 0).unwrap(),
        Some(p) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut g = Graph::empty(n).unwrap();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(p) {
                        g.add_edge(u, v);
                    }
                }
            }
            g
        }
    }
}

const DENSITIES: [Option<f64>; 5] = [None, Some(0.2), Some(0.35), Some(0.65), Some(0.8)];

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut mismatches = 0;
    let mut checks = 0;
    for i in 0..200u64 {
        let n = 1 + (i % 14) as usize;
        let g = random_graph(n, DENSITIES[(i / 14 % 5) as usize], 1000 + i);
        let want = brute_counts(&g);
        for k in 1..=n {
            checks += 1;
            if count_independent_ksets(&g, k, false, 0).unwrap().count != want[k] {
                mismatches += 1;
            }
        }
    }
    let t = start.elapsed();
    outcome(
        mismatches == 0 && t < Duration::from_secs(120),
        format!("200 graphs, n <= 14, {checks} (graph, k) pairs, {mismatches} mismatches, {:.1} s", t.as_secs_f64()),
    )
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut mismatches = Vec::new();
    let solve = |g: &Graph| chromatic_number_with(g, SolveBudget::unlimited());
    for i in 0..200u64 {
        let n = 1 + (i % 9) as usize;
        let g = random_graph(n, DENSITIES[(i / 9 % 5) as usize], 5000 + i);
        let res = solve(&g);
        if !res.is_exact() || res.upper != brute_chi(&g) {
            mismatches.push(format!("random #{i}"));
        }
    }
    for n in 1..=9 {
        let g = Graph::complete(n).unwrap();
        if solve(&g).value() != Some(n) || brute_chi(&g) != n {
            mismatches.push(format!("K_{n}"));
        }
    }
    let c5 = Graph::cycle(5).unwrap();
    if solve(&c5).value() != Some(3) || brute_chi(&c5) != 3 {
        mismatches.push("C5".into());
    }
    let p = Graph::petersen();
    let counts = brute_counts(&p);
    let alpha_brute = counts.iter().rposition(|&c| c > 0).unwrap();
    let ok = solve(&p).value() == Some(3)
        && brute_chi(&p) == 3
        && independence_number(&p) == 4
        && alpha_brute == 4
        && count_independent_ksets(&p, 4, false, 0).unwrap().count == 5
        && counts[4] == 5;
    if !ok {
        mismatches.push("Petersen".into());
    }
    let t = start.elapsed();
    outcome(
        mismatches.is_empty() && t < Duration::from_secs(300),
        format!(
            "200 random graphs n <= 9, K_1..K_9, C5, Petersen (chi 3, alpha 4, X_4 5); mismatches {:?}; {:.1} s",
            mismatches,
            t.as_secs_f64()
        ),
    )
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let mut built = 0;
    let mut verified = 0;
    let mut gap_ok = 0;
    let mut witness_ok = 0;
    let mut max_attempts = 0;
    for seed in 0..50u64 {
        let Ok(pair) = build_conditioned_pair(40, 8, 2, 1, seed, 100_000) else { continue };
        built += 1;
        max_attempts = max_attempts.max(pair.attempts);
        if verify_pair(&pair).unwrap().ok() {
            verified += 1;
        }
        let gap = verify_chi_gap_with(&pair, SolveBudget::unlimited());
        if gap.gap_ok() == Some(true) {
            gap_ok += 1;
        }
        if gap.witness_ok {
            witness_ok += 1;
        }
    }
    let t = start.elapsed();
    outcome(
        built == 50 && verified == 50 && gap_ok == 50 && witness_ok == 50 && t < Duration::from_secs(1800),
        format!(
            "(n, a, A, r) = (40, 8, 2, 1): built {built}/50 (max attempts {max_attempts}), exhaustive counts ok {verified}/50, \
             gap_ok {gap_ok}/50, witness proper {witness_ok}/50; {:.1} s",
            t.as_secs_f64()
        ),
    )
}

fn mu(n: u64, k: u64) -> f64 {
    log2_expected_ksets(n, k).unwrap().to_f64().exp2()
}

fn criterion_4() -> Outcome {
    const N: usize = 200;
    const SAMPLES: usize = 10_000;
    const SEED: u64 = 2024;
    let run = |n: usize, k: usize| {
        let rep = xk_distribution_experiment(n, k, SAMPLES, SEED).unwrap();
        let blocks: Vec<String> = rep
            .blocks
            .iter()
            .map(|b| format!("streams {}..{}: {:.4}", b.first_stream, b.first_stream + b.samples, b.tv.value))
            .collect();
        (rep.mu, rep.tv, blocks)
    };
    match k_for_mu(N, 1.0, 3.0) {
        Some(k) => {
            let (m, tv, blocks) = run(N, k);
            outcome(
                tv.upper() <= 0.1,
                format!("n = {N}, k = {k}, mu = {m:.4}, {SAMPLES} samples, seed {SEED}: TV = {:.4} +- {:.1e}; blocks [{}]", tv.value, tv.error, blocks.join(", ")),
            )
        }
        None => {
            let near = (2..=N).rev().find_map(|n| k_for_mu(n, 1.0, 3.0).map(|k| (n, k))).unwrap();
            let (m, tv, blocks) = run(near.0, near.1);
            outcome(
                false,
                format!(
                    "no k puts mu(200, k) in [1, 3]: mu(200, 11) = {:.3}, mu(200, 12) = {:.4}. \
                     Nearest admissible size n = {}, k = {}, mu = {m:.4}, {SAMPLES} samples, seed {SEED}: \
                     TV = {:.4} +- {:.1e}; blocks [{}]",
                    mu(200, 11),
                    mu(200, 12),
                    near.0,
                    near.1,
                    tv.value,
                    tv.error,
                    blocks.join(", ")
                ),
            )
        }
    }
}

fn criterion_5() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for lambda in [1e3f64, 1e4, 1e5] {
        let lo = (lambda + 6.0 * lambda.sqrt()).floor() as u64 + 1;
        match shifted_mass_check(lambda, &IntervalSet::at_least(lo), 0.1) {
            Ok(c) => {
                let ok = c.mass_b + c.mass_error < c.delta
                    && c.mass_b_shifted + c.mass_error < c.epsilon
                    && c.ratio_bound_ok
                    && c.b1_bound_ok
                    && c.b2_bound_ok
                    && c.conclusion_ok
                    && c.min_slack >= 1e-10;
                pass &= ok;
                parts.push(format!(
                    "lambda {lambda:e}: Poi(B) = {:.3e} < delta = 2^-{}, shifted {:.3e} < 0.1, max log ratio {:.3} <= t = {:.3}, min slack {:.3e}",
                    c.mass_b, c.delta_exp, c.mass_b_shifted, c.max_log_ratio.unwrap_or(f64::NEG_INFINITY), c.t, c.min_slack
                ));
            }
            Err(e) => {
                pass = false;
                parts.push(format!("lambda {lambda:e}: {e}"));
            }
        }
    }
    outcome(pass, parts.join("; "))
}

fn criterion_6() -> Outcome {
    let mut rows = Vec::new();
    for j in 0..20 {
        let start = 10f64.powf(6.0 + 6.0 * j as f64 / 19.0).round() as u64;
        let n = find_n_in_band(0.1, 0.4, start).unwrap();
        let g = f_gap(n.clone()).unwrap();
        rows.push((n, g.x.to_f64(), g.relative_error.to_f64()));
    }
    let over = rows.iter().filter(|r| r.2 > 0.2).count();
    let mut decreasing = true;
    let mut bands = Vec::new();
    for (lo, hi) in [(0.1, 0.25), (0.25, 0.4)] {
        let members: Vec<&(BigUint, f64, f64)> = rows.iter().filter(|r| r.1 > lo && r.1 <= hi).collect();
        match (members.first(), members.last()) {
            (Some(first), Some(last)) if members.len() >= 2 => {
                let ok = last.2 < first.2;
                decreasing &= ok;
                bands.push(format!("x in ({lo}, {hi}]: {:.4} at n = {} -> {:.4} at n = {}", first.2, first.0, last.2, last.0));
            }
            _ => {
                decreasing = false;
                bands.push(format!("x in ({lo}, {hi}]: fewer than two points"));
            }
        }
    }
    let errs: Vec<String> = rows.iter().map(|r| format!("{:.3}", r.2)).collect();
    outcome(
        over == 0 && decreasing,
        format!(
            "20 points 1e6..1e12 in x-band (0.1, 0.4); {over}/20 errors exceed 0.2; errors [{}]; {}",
            errs.join(", "),
            bands.join("; ")
        ),
    )
}

fn criterion_7() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    let mut bounds = Vec::new();
    for e in [6u32, 8, 10] {
        let n = find_n_in_band(0.3, 0.4, 10u64.pow(e)).unwrap();
        let big_a = expected_ksets_floor(n.clone(), profile(n.clone()).unwrap().a).unwrap();
        let rep = y_bound(n.clone(), big_a.clone()).unwrap();
        let x = profile(n.clone()).unwrap().x_f64();
        let ok = rep.argmax == 1 && rep.q.to_f64() < 1.0 && rep.bound.to_f64() < 1.0 && x < 0.45;
        pass &= ok;
        bounds.push(rep.bound.to_f64());
        parts.push(format!(
            "n = {n} (x = {x:.3}, A = {big_a}): argmax {} a*sigma_1 = {:.4} bound = {}",
            rep.argmax,
            rep.q.to_f64(),
            if rep.divergent { "divergent".to_string() } else { format!("{:.4}", rep.bound.to_f64()) }
        ));
    }
    let decreasing = bounds.windows(2).all(|w| w[1] < w[0]);
    pass &= decreasing;
    outcome(pass, format!("x-band (0.3, 0.4): {}; strictly decreasing: {decreasing}", parts.join("; ")))
}

fn criterion_8() -> Outcome {
    let rep = ledger(0.2, 1_000_000u64, 1_000_000).unwrap();
    let x_max = rep.steps.iter().map(|s| s.x.to_f64()).fold(f64::MIN, f64::max);
    let crossover = rep.crossover_n.as_ref().map(|c| format!("10^{:.2}", c.log10_n));
    let pass = rep.complete()
        && rep.telescoping_ok == Some(true)
        && rep.a_violations == 0
        && rep.x_violations == 0
        && crossover.is_some();
    outcome(
        pass,
        format!(
            "n1 = {}, M = {}, steps {}, telescoping {:?}, a changes {}, steps with x outside (eps, 1/2 - eps) = ({:.4}, {:.4}): {} (max x {:.4}), \
             sum r/(3a) = {:.3}, crossover {}",
            rep.n1,
            rep.m,
            rep.steps.len(),
            rep.telescoping_ok,
            rep.a_violations,
            rep.epsilon.to_f64(),
            0.5 - rep.epsilon.to_f64(),
            rep.x_violations,
            x_max,
            rep.sum_r_over_3a.lo.to_f64(),
            crossover.unwrap_or_else(|| "none".into())
        ),
    )
}

/// SHA-256 of the JSON report of each analytic command, as produced by the
/// big-float kernels. These must match on every platform.
const ANALYTIC_GOLDEN: [(&str, &str); 5] = [
    ("profile 10^12", "71f8c5a9e94350f607e54c159dd2ab2f2b9e853317701dec43ff7e6ea911e6f5"),
    ("fgap 10^6", "c7b12d9c53bbd40e97203887052ba1ca99b432b45391a019866120db7bde1d83"),
    ("ybound 10^8 1000", "1e033d5cfdf62d4e4badcd8c6d3d614bd4f6d4b3012146453807c7be4ad01a50"),
    ("find-band 0.46 0.47 10^6", "5a97e4aae20ba7a95f59d45243dda147802ed46caac3ee52794709e7ecd0ab5b"),
    ("ledger 0.2 10^6", "ff157f0bc35d407b02253bf7c175adf87ffbfaadca2671ae88d0bf6ad4ebb65a"),
];

fn analytic_command(spec: &str) -> Command {
    let w: Vec<&str> = spec.split(' ').collect();
    let big = |s: &str| chromlab_core::util::parse_biguint(s).unwrap().to_string();
    match w[0] {
        "profile" => Command::Profile { n: big(w[1]) },
        "fgap" => Command::Fgap { n: big(w[1]) },
        "ybound" => Command::Ybound { n: big(w[1]), big_a: big(w[2]) },
        "find-band" => Command::FindBand { c1: w[1].parse().unwrap(), c2: w[2].parse().unwrap(), start: big(w[3]), cap: 100_000_000 },
        "ledger" => Command::Ledger { c: w[1].parse().unwrap(), n1_hint: big(w[2]), enumerate_cap: 1_000_000 },
        _ => unreachable!(),
    }
}

fn criterion_9() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let opts = RunOptions { out: dir.path().join("run"), budget_ms: 10_000 };
    let mut cmds: Vec<Command> = ANALYTIC_GOLDEN.iter().map(|(s, _)| analytic_command(s)).collect();
    cmds.extend([
        Command::PoissonShift { lambda: 1e4, epsilon: 0.1, set: "10601..".into() },
        Command::Sample { n: 60, seed: 3, dimacs: true },
        Command::XkDist { n: 40, k: 8, samples: 500, seed: 9 },
        Command::Couple { n: 40, a: 8, big_a: 2, r: 1, seed: 7, max_attempts: 100_000 },
        Command::Claim2 { n: 16, a: 5, big_a: 1, samples: 200, statistic: Statistic::Chi, seed: 4, slack: 0.1 },
        Command::ChiInterval { n: 30, samples: 100, seed: 6 },
    ]);
    let mut replayed = 0;
    let mut diffs = Vec::new();
    let mut golden_bad = Vec::new();
    for (i, cmd) in cmds.iter().enumerate() {
        let out = lab::run(cmd, &opts).unwrap();
        let rep = lab::replay(&out.manifest_path, &dir.path().join(format!("replay-{i}"))).unwrap();
        if rep.identical {
            replayed += 1;
        } else {
            diffs.push(cmd.name());
        }
        if let Some((spec, want)) = ANALYTIC_GOLDEN.get(i) {
            let json = out.manifest.artifacts.iter().find(|a| a.file.ends_with(".json")).unwrap();
            if json.sha256 != *want {
                golden_bad.push(format!("{spec}: {}", json.sha256));
            }
        }
    }
    outcome(
        diffs.is_empty() && golden_bad.is_empty(),
        format!(
            "{replayed}/{} manifests replayed byte-identically (differing: {diffs:?}); analytic outputs matching frozen hashes: {}/{} {golden_bad:?}",
            cmds.len(),
            ANALYTIC_GOLDEN.len() - golden_bad.len(),
            ANALYTIC_GOLDEN.len()
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("independent-set counts vs exhaustive enumeration", criterion_1),
        ("chromatic number vs brute force", criterion_2),
        ("coupling soundness at (40, 8, 2, 1)", criterion_3),
        ("Poisson law of X_k at n = 200", criterion_4),
        ("shifted Poisson mass", criterion_5),
        ("f-gap coefficient", criterion_6),
        ("sigma profile and Y bound", criterion_7),
        ("ledger at c = 0.2", criterion_8),
        ("reproducibility", criterion_9),
    ];
    let only: Option<usize> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|s| s.parse().ok());
    let mut failed = Vec::new();
    for (i, (title, run)) in criteria.iter().enumerate() {
        let id = i + 1;
        if only.is_some_and(|o| o != id) {
            continue;
        }
        let t = Instant::now();
        let o = run();
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        println!("{verdict} criterion {id} ({title}) [{:.1} s]: {}", t.elapsed().as_secs_f64(), o.detail);
        if !o.pass {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all criteria pass");
    } else {
        println!("acceptance: failing criteria {failed:?}");
        std::process::exit(1);
    }
}
