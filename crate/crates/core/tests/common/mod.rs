//! Independent reference implementations used as test oracles.
//!
//! Everything here is a direct transcription of a definition, written without
//! looking at (or calling) the library's metric or ranking code.

#![allow(dead_code)]

use std::path::PathBuf;

use polyrep_core::Opinion;
use rand::Rng;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

pub fn test_data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join("data")
        .join(name)
}

/// A ranked list for the brute-force metrics: each entry is the grade of the
/// document at that rank, `None` when unjudged. `judged` lists all judged
/// grades for the query (retrieved or not).
pub struct Instance {
    pub ranked: Vec<Option<u8>>,
    pub judged: Vec<u8>,
}

fn rel(g: Option<u8>) -> bool {
    matches!(g, Some(x) if x > 0)
}

pub fn brute_ap(inst: &Instance) -> f64 {
    let total_rel = inst.judged.iter().filter(|&&g| g > 0).count();
    if total_rel == 0 {
        return 0.0;
    }
    let mut sum = 0.0;
    for k in 1..=inst.ranked.len() {
        if rel(inst.ranked[k - 1]) {
            let rel_in_top_k = inst.ranked[..k].iter().filter(|g| rel(**g)).count();
            sum += rel_in_top_k as f64 / k as f64;
        }
    }
    sum / total_rel as f64
}

fn dcg(gains: &[u8], k: usize) -> f64 {
    let mut total = 0.0;
    for (i, g) in gains.iter().enumerate() {
        if i >= k {
            break;
        }
        let rank = (i + 1) as f64;
        total += *g as f64 / (rank + 1.0).log2();
    }
    total
}

fn permutations(items: &[u8]) -> Vec<Vec<u8>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, head);
            out.push(p);
        }
    }
    out
}

/// Ideal DCG found by trying every ordering of the judged documents.
pub fn brute_ideal_dcg(judged: &[u8], k: usize) -> f64 {
    permutations(judged).iter().map(|p| dcg(p, k)).fold(0.0, f64::max)
}

pub fn brute_ndcg(inst: &Instance, k: usize) -> f64 {
    brute_ndcg_given_ideal(inst, brute_ideal_dcg(&inst.judged, k), k)
}

pub fn brute_ndcg_given_ideal(inst: &Instance, ideal: f64, k: usize) -> f64 {
    if ideal == 0.0 {
        return 0.0;
    }
    let gains: Vec<u8> = inst.ranked.iter().map(|g| g.unwrap_or(0)).collect();
    dcg(&gains, k) / ideal
}

pub fn brute_precision(inst: &Instance, k: usize) -> f64 {
    let mut hits = 0;
    for i in 0..k {
        if i < inst.ranked.len() && rel(inst.ranked[i]) {
            hits += 1;
        }
    }
    hits as f64 / k as f64
}

pub fn brute_rr(inst: &Instance) -> f64 {
    for (i, g) in inst.ranked.iter().enumerate() {
        if rel(*g) {
            return 1.0 / (i + 1) as f64;
        }
    }
    0.0
}

pub fn brute_bpref(inst: &Instance) -> f64 {
    let r = inst.judged.iter().filter(|&&g| g > 0).count();
    let n = inst.judged.iter().filter(|&&g| g == 0).count();
    if r == 0 {
        return 0.0;
    }
    let denom = r.min(n);
    let mut sum = 0.0;
    for (i, g) in inst.ranked.iter().enumerate() {
        if !rel(*g) {
            continue;
        }
        if denom == 0 {
            sum += 1.0;
            continue;
        }
        let above = inst.ranked[..i].iter().filter(|x| **x == Some(0)).count();
        let above = if above > denom { denom } else { above };
        sum += 1.0 - above as f64 / denom as f64;
    }
    sum / r as f64
}

/// Average ranks by counting: rank_i = 1 + #{x_j < x_i} + (#{x_j = x_i} - 1) / 2.
pub fn brute_average_ranks(xs: &[f64]) -> Vec<f64> {
    xs.iter()
        .map(|&x| {
            let below = xs.iter().filter(|&&y| y < x).count() as f64;
            let equal = xs.iter().filter(|&&y| y == x).count() as f64;
            1.0 + below + (equal - 1.0) / 2.0
        })
        .collect()
}

/// Spearman from the brute-force ranks; `None` when either side is constant.
pub fn brute_spearman(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let rx = brute_average_ranks(xs);
    let ry = brute_average_ranks(ys);
    let n = xs.len() as f64;
    let mean = |v: &[f64]| v.iter().sum::<f64>() / n;
    let (mx, my) = (mean(&rx), mean(&ry));
    let cov: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = rx.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = ry.iter().map(|b| (b - my).powi(2)).sum();
    if vx == 0.0 || vy == 0.0 {
        return None;
    }
    Some(cov / (vx.sqrt() * vy.sqrt()))
}

/// Random valid opinion with uncertainty at least `min_u`.
pub fn random_opinion<R: Rng>(rng: &mut R, base_rate: f64, min_u: f64) -> Opinion {
    let u = rng.random_range(min_u..=1.0);
    let b = rng.random_range(0.0..=1.0 - u);
    let d = (1.0 - u - b).max(0.0);
    Opinion::new(b, d, u, base_rate).expect("valid by construction")
}

/// Every ordered selection (without repetition) of `0..n`, including the
/// empty one.
pub fn all_rankings(n: usize) -> Vec<Vec<usize>> {
    fn extend(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        out.push(prefix.clone());
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                extend(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Every assignment of grades 0..=3 to `n` documents.
pub fn all_gradings(n: usize) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|g| {
                (0..=3u8).map(move |x| {
                    let mut h = g.clone();
                    h.push(x);
                    h
                })
            })
            .collect();
    }
    out
}

/// Checks every ranking of `n` judged documents plus one unjudged document,
/// for every grading and every `n <= max_judged`, against the brute-force
/// metrics. Returns the number of instances checked and the failures found.
pub fn exhaustive_metric_check(max_judged: usize, exec: polyrep_core::Execution) -> (usize, Vec<String>) {
    use polyrep_core::eval::JudgedRanking;

    const TOL: f64 = 1e-9;
    let mut checked = 0;
    let mut failures = Vec::new();
    for n in 0..=max_judged {
        let rankings = all_rankings(n + 1);
        let gradings = all_gradings(n);
        let results = exec.map(&gradings, |grading| {
            let ideal3 = brute_ideal_dcg(grading, 3);
            let ideal10 = brute_ideal_dcg(grading, 10);
            let ideal_full = brute_ideal_dcg(grading, 1000);
            let mut bad = Vec::new();
            for ranking in &rankings {
                // document n is the unjudged one
                let ranked: Vec<Option<u8>> = ranking.iter().map(|&d| grading.get(d).copied()).collect();
                let inst = Instance {
                    ranked: ranked.clone(),
                    judged: grading.clone(),
                };
                let jr = JudgedRanking::from_parts(ranked, grading.iter().copied());
                let pairs = [
                    ("ap", jr.average_precision(), brute_ap(&inst)),
                    ("ndcg@3", jr.ndcg_at(3), brute_ndcg_given_ideal(&inst, ideal3, 3)),
                    (
                        "ndcg@10",
                        jr.ndcg_at(10),
                        brute_ndcg_given_ideal(&inst, ideal10, 10),
                    ),
                    (
                        "ndcg",
                        jr.ndcg_at(1000),
                        brute_ndcg_given_ideal(&inst, ideal_full, 1000),
                    ),
                    ("p@10", jr.precision_at(10), brute_precision(&inst, 10)),
                    ("p@2", jr.precision_at(2), brute_precision(&inst, 2)),
                    ("rr", jr.reciprocal_rank(), brute_rr(&inst)),
                    ("bpref", jr.bpref(), brute_bpref(&inst)),
                ];
                for (name, got, want) in pairs {
                    if (got - want).abs() > TOL || got.is_nan() {
                        bad.push(format!(
                            "{name} grades={grading:?} ranking={ranking:?}: got {got}, want {want}"
                        ));
                    }
                }
            }
            (rankings.len(), bad)
        });
        for (count, bad) in results {
            checked += count;
            failures.extend(bad);
        }
    }
    (checked, failures)
}
