//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! ```bash
//! cargo test --test acceptance
//! ```

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::rc::Rc;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rle_lcs::anchors::{validate_anchor_set, AnchorScheme, AnchorSet};
use rle_lcs::bench::{d_sweep, log_log_slope, n_sweep, run_grid};
use rle_lcs::config::SolverConfig;
use rle_lcs::ds::{DynArray, RangeSum2D};
use rle_lcs::lcs::{
    solve_lcs_rle_p, solve_lrs, verify_candidate, verify_repeat, ReferenceSample, VertexData,
    WalkContext,
};
use rle_lcs::query::{CostModel, OracleHandle, QueryLedger};
use rle_lcs::reductions::{el_call_bound, parity, parity_via_dl, parity_via_el};
use rle_lcs::reference::{brute_lcs, brute_lrs, plant_instance, random_rle, GENERATOR_ALPHABET};
use rle_lcs::rle::{decode, encode, RleString};
use rle_lcs::text::Text;
use rle_lcs::walk::WalkMode;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

/// Random pairs and planted pairs shared by the exactness and anchor checks.
fn suite_one() -> Vec<(RleString, RleString)> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce_0001);
    let mut out = Vec::with_capacity(700);
    for _ in 0..500 {
        let sigma = rng.gen_range(1..=4);
        let alphabet = &GENERATOR_ALPHABET[..sigma];
        let max_runs = if sigma == 1 { 1 } else { 64 };
        let (na, nb) = (rng.gen_range(1..=max_runs), rng.gen_range(1..=max_runs));
        let a = random_rle(&mut rng, na, alphabet, 9);
        let b = random_rle(&mut rng, nb, alphabet, 9);
        out.push((a, b));
    }
    for seed in 0..200u64 {
        let n = rng.gen_range(8..=64);
        let d_runs = rng.gen_range(1..=n / 2);
        let d_tilde = rng.gen_range(1..=d_runs as u64 * 5);
        let p = plant_instance(n, d_runs, d_tilde, seed).expect("feasible plant");
        out.push((p.a, p.b));
    }
    out
}

fn solve_pair(
    a: &RleString,
    b: &RleString,
    cfg: &SolverConfig,
) -> rle_lcs::error::Result<Option<rle_lcs::lcs::LcsAnswer>> {
    let ledger = QueryLedger::new();
    solve_lcs_rle_p(
        &OracleHandle::new(a.clone(), ledger.clone()),
        &OracleHandle::new(b.clone(), ledger),
        cfg,
    )
}

fn exactness(suite: &[(RleString, RleString)]) -> Verdict {
    let cfg = SolverConfig::default();
    let mut wrong = Vec::new();
    for (i, (a, b)) in suite.iter().enumerate() {
        let truth = brute_lcs(a, b).expect("small instance").length;
        let ok = match solve_pair(a, b, &cfg) {
            Ok(Some(ans)) => ans.d_tilde == truth && verify_candidate(&ans, a, b),
            Ok(None) => truth == 0,
            Err(_) => false,
        };
        if !ok {
            wrong.push(i);
        }
    }
    verdict(
        wrong.is_empty(),
        format!(
            "{} instances, {} mismatches {:?}",
            suite.len(),
            wrong.len(),
            &wrong[..wrong.len().min(5)]
        ),
    )
}

fn worked_example() -> Verdict {
    let (a, b) = (encode(b"abcdbbbbccccc"), encode(b"abcd@bbbbcc"));
    match solve_pair(&a, &b, &SolverConfig::default()) {
        Ok(Some(ans)) => {
            let start = ans.decoded_start_a as usize;
            let text = decode(&a)[start..start + ans.d_tilde as usize].to_vec();
            verdict(
                ans.d_tilde == 6 && text == b"bbbbcc" && verify_candidate(&ans, &a, &b),
                format!(
                    "d_tilde={} substring={}",
                    ans.d_tilde,
                    String::from_utf8_lossy(&text)
                ),
            )
        }
        other => verdict(false, format!("{other:?}")),
    }
}

fn reductions() -> Verdict {
    let (mut cases, mut bad) = (0usize, 0usize);
    for len in 1..=12usize {
        for mask in 0u32..(1 << len) {
            let bits: Vec<bool> = (0..len).map(|i| mask >> i & 1 == 1).collect();
            let want = parity(&bits);
            let dl = parity_via_dl(&bits, |x, y| Ok(brute_lcs(x, y)?.length));
            let el = parity_via_el(&bits, |x, y| Ok(brute_lcs(x, y)?.encoded_len));
            let ok = matches!(dl, Ok(p) if p == want)
                && matches!(el, Ok(o) if o.parity == want && o.calls <= el_call_bound(len));
            cases += 1;
            bad += !ok as usize;
        }
    }
    verdict(
        cases == 8190 && bad == 0,
        format!("{cases} bit strings, {bad} failures"),
    )
}

fn dyn_array_trace(seed: u64, ops: usize) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut arr = DynArray::uncharged();
    let mut oracle: Vec<(u64, u64)> = Vec::new();
    let mut next_key = 0u64;
    for _ in 0..ops {
        match rng.gen_range(0..10) {
            0..=3 => {
                let i = rng.gen_range(1..=oracle.len() + 1);
                next_key += rng.gen_range(1..4);
                let value = rng.gen_range(0..1000);
                arr.insert(i, next_key, value).unwrap();
                oracle.insert(i - 1, (next_key, value));
            }
            4..=5 if !oracle.is_empty() => {
                let i = rng.gen_range(1..=oracle.len());
                if arr.delete(i).unwrap() != oracle.remove(i - 1) {
                    return false;
                }
            }
            6 if !oracle.is_empty() => {
                let i = rng.gen_range(1..=oracle.len());
                if arr.index(i).unwrap() != oracle[i - 1]
                    || arr.locate(oracle[i - 1].0).unwrap() != i
                {
                    return false;
                }
            }
            7..=9 if !oracle.is_empty() => {
                let a = rng.gen_range(1..=oracle.len());
                let b = rng.gen_range(a..=oracle.len());
                let want = oracle[a - 1..b].iter().map(|e| e.1).min().unwrap();
                if arr.range_min(a, b).unwrap() != want {
                    return false;
                }
            }
            _ => {}
        }
        if arr.len() != oracle.len() {
            return false;
        }
    }
    arr.to_vec() == oracle
}

fn range_sum_trace(seed: u64, ops: usize) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u = 40;
    let mut grid = RangeSum2D::uncharged(u);
    let mut oracle: Vec<(usize, usize)> = Vec::new();
    for _ in 0..ops {
        match rng.gen_range(0..3) {
            0 => {
                let p = (rng.gen_range(1..=u), rng.gen_range(1..=u));
                grid.insert(p.0, p.1).unwrap();
                oracle.push(p);
            }
            1 if !oracle.is_empty() => {
                let p = oracle.swap_remove(rng.gen_range(0..oracle.len()));
                grid.delete(p.0, p.1).unwrap();
            }
            _ => {
                let (x1, x2) = (rng.gen_range(0..=u + 1), rng.gen_range(0..=u + 1));
                let (y1, y2) = (rng.gen_range(0..=u + 1), rng.gen_range(0..=u + 1));
                let want = oracle
                    .iter()
                    .filter(|&&(x, y)| x1 <= x && x <= x2 && y1 <= y && y <= y2)
                    .count() as u64;
                if grid.count(x1, x2, y1, y2) != want {
                    return false;
                }
            }
        }
    }
    grid.len() == oracle.len() as u64
}

/// Builds `target` through a shuffled history with transient extra keys.
fn shuffled_history(target: &[(u64, u64)], rng: &mut ChaCha8Rng) -> DynArray {
    let mut arr = DynArray::uncharged();
    let mut shadow: Vec<(u64, u64)> = Vec::new();
    let mut order: Vec<usize> = (0..target.len()).collect();
    order.shuffle(rng);
    let mut extra = 1_000_000u64;
    for t in order {
        if rng.gen_bool(0.5) {
            extra += 1;
            let i = rng.gen_range(1..=shadow.len() + 1);
            arr.insert(i, extra, rng.gen()).unwrap();
            shadow.insert(i - 1, (extra, 0));
        }
        // Position among present target elements that precede `t`.
        let rank_of = |key: u64| target.iter().position(|e| e.0 == key);
        let i = shadow
            .iter()
            .position(|e| rank_of(e.0).is_some_and(|r| r > t))
            .unwrap_or(shadow.len());
        arr.insert(i + 1, target[t].0, target[t].1).unwrap();
        shadow.insert(i, target[t]);
    }
    while let Some(i) = shadow.iter().position(|e| e.0 > 999_999) {
        arr.delete(i + 1).unwrap();
        shadow.remove(i);
    }
    assert_eq!(arr.to_vec(), target);
    arr
}

fn data_structures() -> Verdict {
    let dyn_ok = (0..10)
        .filter(|&s| dyn_array_trace(100 + s, 10_000))
        .count();
    let sum_ok = (0..10)
        .filter(|&s| range_sum_trace(200 + s, 10_000))
        .count();
    let mut rng = ChaCha8Rng::seed_from_u64(300);
    let mut canonical = 0;
    for _ in 0..100 {
        let size = rng.gen_range(0..60);
        let target: Vec<(u64, u64)> = (0..size)
            .map(|i| (i as u64 * 7 + 1, rng.gen_range(0..50)))
            .collect();
        let first = shuffled_history(&target, &mut rng).serialize();
        let second = shuffled_history(&target, &mut rng).serialize();
        canonical += (first == second) as usize;
    }
    verdict(
        dyn_ok == 10 && sum_ok == 10 && canonical == 100,
        format!(
            "DynArray {dyn_ok}/10 seeds, RangeSum2D {sum_ok}/10 seeds, canonical {canonical}/100"
        ),
    )
}

fn lcp(a: &[u8], b: &[u8]) -> u64 {
    a.iter().zip(b).take_while(|(x, y)| x == y).count() as u64
}

fn vertex_coherence() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce_0005);
    let a = random_rle(&mut rng, 70, b"ab", 3);
    let b = random_rle(&mut rng, 70, b"ab", 3);
    let ledger = QueryLedger::new();
    let text = Text::pair(
        OracleHandle::new(a, ledger.clone()),
        OracleHandle::new(b, ledger),
    )
    .unwrap();
    let s = text.materialize();
    let d = 4;
    let anchors = AnchorSet::build_exhaustive(&s, d).unwrap();
    let m = anchors.len();

    // Windows rebuilt from the plain decoded runs.
    let runs = s.runs();
    let window = |k: usize, forward: bool| -> Vec<u8> {
        let x = anchors.get(k).unwrap();
        let (lo, hi) = if forward {
            (x, (x + 2 * d).min(runs.len()))
        } else {
            (x.saturating_sub(2 * d).max(1), x)
        };
        let mut bytes = decode(&RleString::from_runs(runs[lo - 1..hi].to_vec()).unwrap());
        if !forward {
            bytes.reverse();
        }
        bytes
    };
    let oracle: BTreeMap<usize, (Vec<u8>, Vec<u8>)> = (1..=m)
        .map(|k| (k, (window(k, true), window(k, false))))
        .collect();

    let ctx = Rc::new(WalkContext::new(
        text,
        anchors.clone(),
        CostModel::default(),
    ));
    let mut sample_keys: Vec<usize> = (1..=m).collect();
    sample_keys.shuffle(&mut rng);
    sample_keys.truncate(m / 3);
    let sample = Rc::new(ReferenceSample::new(&ctx, &sample_keys).unwrap());
    let mut v = VertexData::new(Rc::clone(&ctx), sample);

    let coherent = |v: &VertexData| -> bool {
        [
            (v.p_order(), v.p_ldcp(), true),
            (v.q_order(), v.q_ldcp(), false),
        ]
        .into_iter()
        .all(|(order, h, forward)| {
            let w = |k: usize| {
                if forward {
                    &oracle[&k].0
                } else {
                    &oracle[&k].1
                }
            };
            h.len() + 1 == order.len().max(1)
                && order.windows(2).zip(&h).all(|(pair, &hv)| {
                    w(pair[0]) <= w(pair[1]) && lcp(w(pair[0]), w(pair[1])) == hv
                })
        })
    };

    let mut stored: Vec<usize> = Vec::new();
    let (mut ops, mut incoherent) = (0, 0);
    while ops < 1000 {
        let insert = stored.is_empty() || (stored.len() < m && rng.gen_bool(0.55));
        if insert {
            let k = rng.gen_range(1..=m);
            if stored.contains(&k) {
                continue;
            }
            v.insert(k).unwrap();
            stored.push(k);
        } else {
            let k = stored.swap_remove(rng.gen_range(0..stored.len()));
            v.delete(k).unwrap();
        }
        ops += 1;
        incoherent += !coherent(&v) as usize;
    }

    let mut bad_intervals = 0;
    for _ in 0..1000 {
        let forward = rng.gen_bool(0.5);
        let order = if forward { v.p_order() } else { v.q_order() };
        let x = rng.gen_range(1..order.len());
        let y = rng.gen_range(x + 1..=order.len());
        let w = |k: usize| {
            if forward {
                &oracle[&k].0
            } else {
                &oracle[&k].1
            }
        };
        let got = v.ldcp_range_min(x, y, !forward).unwrap();
        bad_intervals += (got != lcp(w(order[x - 1]), w(order[y - 1]))) as usize;
    }
    verdict(
        incoherent == 0 && bad_intervals == 0,
        format!("{ops} ops ({} stored at end), {incoherent} incoherent states, {bad_intervals}/1000 interval mismatches", v.len()),
    )
}

fn ledger_scaling() -> Verdict {
    let by_n = match run_grid(&n_sweep(8, 14, 16), 5, 1, WalkMode::CostOnly) {
        Ok(rows) => rows,
        Err(e) => return verdict(false, e.to_string()),
    };
    let by_d = match run_grid(&d_sweep(4, 8, 1 << 12), 5, 1, WalkMode::CostOnly) {
        Ok(rows) => rows,
        Err(e) => return verdict(false, e.to_string()),
    };
    let sn = log_log_slope(
        &by_n
            .iter()
            .map(|r| (r.n as f64, r.charged_cost))
            .collect::<Vec<_>>(),
    )
    .unwrap();
    let sd = log_log_slope(
        &by_d
            .iter()
            .map(|r| (r.d as f64, r.charged_cost))
            .collect::<Vec<_>>(),
    )
    .unwrap();
    verdict(
        (0.55..=0.80).contains(&sn) && (-0.35..=0.0).contains(&sd),
        format!("slope vs n {sn:.3} in [0.55, 0.80], slope vs d {sd:.3} in [-0.35, 0.00]"),
    )
}

fn longest_repeat() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce_0007);
    let cfg = SolverConfig::default();
    let mut wrong = Vec::new();
    let mut largest = 0;
    for i in 0..200 {
        let sigma = rng.gen_range(2..=4);
        let max_len = rng.gen_range(1..=9);
        let runs = rng.gen_range(1..=2000 / max_len as usize);
        let s = random_rle(&mut rng, runs, &GENERATOR_ALPHABET[..sigma], max_len);
        largest = largest.max(s.decoded_len());
        let truth = brute_lrs(&s).unwrap().length;
        let ok = match solve_lrs(&OracleHandle::new(s.clone(), QueryLedger::new()), &cfg) {
            Ok(Some(ans)) => ans.d_tilde == truth && verify_repeat(&ans, &s),
            Ok(None) => truth == 0,
            Err(_) => false,
        };
        if !ok {
            wrong.push(i);
        }
    }
    verdict(
        wrong.is_empty(),
        format!(
            "200 strings up to {largest} characters, {} mismatches {:?}",
            wrong.len(),
            &wrong[..wrong.len().min(5)]
        ),
    )
}

fn anchor_validation(suite: &[(RleString, RleString)]) -> Verdict {
    let pair_text = |a: &RleString, b: &RleString| {
        let ledger = QueryLedger::new();
        let t = Text::pair(
            OracleHandle::new(a.clone(), ledger.clone()),
            OracleHandle::new(b.clone(), ledger),
        )
        .unwrap();
        (t.materialize(), t.sep_index().unwrap())
    };

    let mut exhaustive_bad = 0;
    for (a, b) in suite {
        let (s, sep) = pair_text(a, b);
        for d in [3, 4, 8, 16] {
            let x = AnchorSet::build_exhaustive(&s, d).unwrap();
            exhaustive_bad += !validate_anchor_set(&x, &s, sep, d).valid as usize;
        }
    }

    let mut minimizer_valid = 0;
    let mut witnesses = Vec::new();
    for seed in 0..100u64 {
        let p = plant_instance(96, 24, 60, 1000 + seed).unwrap();
        let (s, sep) = pair_text(&p.a, &p.b);
        let d = 16;
        let x = AnchorSet::build(&s, d, AnchorScheme::Minimizer, seed, 8).unwrap();
        let report = validate_anchor_set(&x, &s, sep, d);
        if report.valid {
            minimizer_valid += 1;
        } else {
            witnesses.push((seed, report.witness));
        }
    }
    for (seed, w) in &witnesses {
        println!("    minimizer witness: planted seed {seed}, {w:?}");
    }

    let minimizer = SolverConfig {
        scheme: AnchorScheme::Minimizer,
        ..SolverConfig::default()
    };
    let crippled = SolverConfig {
        exhaustive_fallback: false,
        anchor_stride: 3,
        ..SolverConfig::default()
    };
    let (mut unsound, mut crippled_unsound) = (0, 0);
    for (a, b) in suite {
        let truth = brute_lcs(a, b).unwrap().length;
        for (cfg, counter) in [
            (&minimizer, &mut unsound),
            (&crippled, &mut crippled_unsound),
        ] {
            match solve_pair(a, b, cfg) {
                Ok(Some(ans)) if ans.d_tilde > truth || !verify_candidate(&ans, a, b) => {
                    *counter += 1
                }
                Ok(_) => {}
                Err(_) => *counter += 1,
            }
        }
    }
    verdict(
        exhaustive_bad == 0 && minimizer_valid >= 95 && unsound == 0 && crippled_unsound == 0,
        format!(
            "exhaustive invalid {exhaustive_bad}, minimizer valid {minimizer_valid}/100, \
             unsound answers {unsound} (minimizer) {crippled_unsound} (thinned, no fallback)"
        ),
    )
}

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Verdict + 'a>);

fn main() -> ExitCode {
    let suite = suite_one();
    let criteria: Vec<Criterion> = vec![
        ("exactness vs brute force", Box::new(|| exactness(&suite))),
        ("worked example", Box::new(worked_example)),
        ("parity reductions", Box::new(reductions)),
        ("data structures vs naive", Box::new(data_structures)),
        ("vertex coherence", Box::new(vertex_coherence)),
        ("ledger scaling", Box::new(ledger_scaling)),
        ("longest repeat", Box::new(longest_repeat)),
        ("anchor validation", Box::new(|| anchor_validation(&suite))),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let v = run();
        failed += !v.pass as usize;
        println!(
            "criterion {} {:<26} {}  {} ({:.1}s)",
            i + 1,
            name,
            if v.pass { "PASS" } else { "FAIL" },
            v.detail,
            start.elapsed().as_secs_f64()
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
