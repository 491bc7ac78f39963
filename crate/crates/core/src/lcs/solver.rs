//! Outer binary search over the decoded target, the halving loop over the
//! encoded scale `d`, the walk over anchor subsets at each scale, and the
//! direct treatment of common substrings spanning at most two runs.

use std::collections::BTreeMap;
use std::rc::Rc;

use rand::seq::index::sample;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::anchors::AnchorSet;
use crate::config::SolverConfig;
use crate::ds::mix64;
use crate::error::{Error, Result};
use crate::lcs::check::vertex_check;
use crate::lcs::vertex::{ReferenceSample, VertexData, WalkContext};
use crate::lcs::{Candidate, CandidateSource, LcsAnswer};
use crate::query::OracleHandle;
use crate::rle::{prefix_table, slice, RleString};
use crate::text::Text;
use crate::walk::{mnrs_walk, StepCharges, WalkHooks, WalkMode, WalkParams};

/// One walk search at a fixed anchor set, reusable across decoded targets.
///
/// In full-set mode the vertex holding every anchor does not depend on the
/// target, so it is built once and its setup charge is booked again on
/// every later run.
#[derive(Debug)]
pub struct InnerSearch {
    ctx: Rc<WalkContext>,
    mode: WalkMode,
    r: usize,
    delta: f64,
    step_budget: Option<u64>,
    seed: u64,
    boost: Option<u64>,
    cached: Option<(VertexData, f64)>,
}

impl InnerSearch {
    pub fn new(text: Text, anchors: AnchorSet, cfg: &SolverConfig) -> Self {
        let m = anchors.len().max(1);
        let r = match cfg.mode {
            WalkMode::FullSet => m,
            _ => ((cfg.r_constant * (m as f64).powf(2.0 / 3.0)).ceil() as usize).clamp(1, m),
        };
        let seed = cfg.seed ^ mix64(anchors.d() as u64);
        let boost = cfg.cost.boost_whp.then(|| (text.len() as u64).max(2));
        InnerSearch {
            ctx: Rc::new(WalkContext::new(text, anchors, cfg.cost)),
            mode: cfg.mode,
            r,
            delta: (r * r) as f64 / (m * m) as f64,
            step_budget: cfg.walk_step_budget,
            seed,
            boost,
            cached: None,
        }
    }

    pub fn context(&self) -> &Rc<WalkContext> {
        &self.ctx
    }

    pub fn m(&self) -> usize {
        self.ctx.m()
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// Walks for a vertex holding two anchors that certify a common
    /// substring of decoded length at least `d_tilde`.
    pub fn run(&mut self, d_tilde: u64) -> Result<Option<Candidate>> {
        if self.ctx.anchors().is_empty() {
            return Ok(None);
        }
        let params = WalkParams {
            m: self.m(),
            r: self.r,
            delta: self.delta,
            mode: self.mode,
            step_budget: self.step_budget,
            seed: self.seed ^ mix64(d_tilde),
        };
        let ledger = self.ctx.ledger().clone();
        let boost = self.boost;
        let cost = *self.ctx.cost();
        let mut hooks = Hooks {
            search: self,
            d_tilde,
            vertex: None,
        };
        let (found, charge) = ledger.capture(|| mnrs_walk(&ledger, params, &mut hooks));
        ledger.charge(match boost {
            Some(n) => cost.with_whp(charge, n),
            None => charge,
        });
        found
    }

    fn build(&self, subset: &[usize]) -> Result<VertexData> {
        let m = self.m();
        let sample_keys: Vec<usize> = if self.mode == WalkMode::FullSet {
            (1..=m).collect()
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ 0x5eed);
            let mut keys: Vec<usize> = sample(&mut rng, m, self.r)
                .into_iter()
                .map(|i| i + 1)
                .collect();
            keys.sort_unstable();
            keys
        };
        let reference = Rc::new(ReferenceSample::new(&self.ctx, &sample_keys)?);
        let mut v = VertexData::new(Rc::clone(&self.ctx), reference);
        for &k in subset {
            v.insert(k)?;
        }
        Ok(v)
    }
}

struct Hooks<'a> {
    search: &'a mut InnerSearch,
    d_tilde: u64,
    vertex: Option<VertexData>,
}

impl Hooks<'_> {
    fn vertex(&self) -> &VertexData {
        self.vertex
            .as_ref()
            .or(self.search.cached.as_ref().map(|(v, _)| v))
            .expect("setup precedes check")
    }
}

impl WalkHooks for Hooks<'_> {
    type Report = Candidate;

    fn setup(&mut self, subset: &[usize]) -> Result<()> {
        let ledger = self.search.ctx.ledger().clone();
        if self.search.mode != WalkMode::FullSet {
            self.vertex = Some(self.search.build(subset)?);
            return Ok(());
        }
        if let Some((_, charge)) = &self.search.cached {
            ledger.charge(*charge);
            return Ok(());
        }
        let (v, charge) = ledger.capture(|| self.search.build(subset));
        ledger.charge(charge);
        self.search.cached = Some((v?, charge));
        Ok(())
    }

    fn update(&mut self, remove: usize, insert: usize) -> Result<()> {
        let v = self.vertex.as_mut().expect("random walk owns its vertex");
        v.delete(remove)?;
        v.insert(insert)
    }

    fn check(&mut self) -> Result<Option<Candidate>> {
        vertex_check(self.vertex(), self.d_tilde)
    }

    fn nominal(&self, r: usize) -> StepCharges {
        let ctx = &self.search.ctx;
        let sqrt_d = (ctx.d() as f64).sqrt();
        StepCharges {
            setup: r as f64 * sqrt_d,
            update: sqrt_d,
            check: ctx.cost().grover_charge((2 * ctx.d() * r) as u64, 1.0),
        }
    }
}

/// One walk search over `anchors` for decoded target `d_tilde`.
pub fn inner_search(
    text: &Text,
    anchors: &AnchorSet,
    d_tilde: u64,
    cfg: &SolverConfig,
) -> Result<Option<Candidate>> {
    InnerSearch::new(text.clone(), anchors.clone(), cfg).run(d_tilde)
}

/// Runs `(char, length)` of one side, their decoded start positions in
/// `S`, and the offset of that side.
type RunTable = (Vec<(u8, u64)>, Vec<u64>, u64);

/// Best common substring within one run, or across one run boundary, on
/// each side. For repeats both sides are `A`, and the two occurrences must
/// start at different positions.
fn short_candidate(text: &Text) -> Result<Option<Candidate>> {
    let a = text.a();
    let mut sides: Vec<RunTable> = Vec::new();
    let read = |h: &OracleHandle, offset: u64| -> Result<RunTable> {
        let mut runs = Vec::with_capacity(h.len());
        let mut starts = Vec::with_capacity(h.len());
        for i in 1..=h.len() {
            let run = h.query_run(i)?;
            starts.push(offset + h.query_prefix(i - 1)? + 1);
            runs.push((run.ch, run.len));
        }
        Ok((runs, starts, offset))
    };
    sides.push(read(a, 0)?);
    if let Some(b) = text.b() {
        sides.push(read(b, text.b_offset())?);
    }
    let mut best: Option<Candidate> = None;
    let mut offer = |value: u64, source, aligned| {
        if value > 0 && best.is_none_or(|c: Candidate| value > c.d_tilde) {
            best = Some(Candidate {
                source,
                d_tilde: value,
                aligned,
            });
        }
    };

    // Longest run per character on each side; for repeats the two longest.
    let mut longest: Vec<BTreeMap<u8, Vec<(u64, u64)>>> = Vec::new();
    for (runs, starts, _) in &sides {
        let mut by_char: BTreeMap<u8, Vec<(u64, u64)>> = BTreeMap::new();
        for (&(ch, len), &start) in runs.iter().zip(starts) {
            let top = by_char.entry(ch).or_default();
            top.push((len, start));
            top.sort_by(|x, y| y.0.cmp(&x.0).then(x.1.cmp(&y.1)));
            top.truncate(2);
        }
        longest.push(by_char);
    }
    if longest.len() == 2 {
        for (ch, top_a) in &longest[0] {
            if let Some(top_b) = longest[1].get(ch) {
                let (la, sa) = top_a[0];
                let (lb, sb) = top_b[0];
                offer(la.min(lb), CandidateSource::SingleRun, (sa, sb));
            }
        }
    } else {
        for top in longest[0].values() {
            let (l1, s1) = top[0];
            offer(l1 - 1, CandidateSource::SingleRun, (s1, s1 + 1));
            if let Some(&(l2, s2)) = top.get(1) {
                offer(l2, CandidateSource::SingleRun, (s1, s2));
            }
        }
    }

    // Run boundaries grouped by their character pair.
    type Boundaries = BTreeMap<(u8, u8), Vec<(u64, u64, u64)>>;
    let boundaries = |(runs, starts, _): &RunTable| {
        let mut groups = Boundaries::new();
        for i in 1..runs.len() {
            groups.entry((runs[i - 1].0, runs[i].0)).or_default().push((
                runs[i - 1].1,
                runs[i].1,
                starts[i],
            ));
        }
        groups
    };
    let groups_a = boundaries(&sides[0]);
    let groups_b = sides.get(1).map(boundaries);
    for (pair, left) in &groups_a {
        let right = match &groups_b {
            Some(g) => match g.get(pair) {
                Some(r) => r,
                None => continue,
            },
            None => left,
        };
        for (x, &(a1, a2, pa)) in left.iter().enumerate() {
            for (y, &(b1, b2, pb)) in right.iter().enumerate() {
                if groups_b.is_none() && x == y {
                    continue;
                }
                offer(a1.min(b1) + a2.min(b2), CandidateSource::RunPair, (pa, pb));
            }
        }
    }
    Ok(best)
}

/// Scales `d = 2^⌊log₂ n⌋, …, 4, 2` with the anchor set used at each.
fn levels(text: &Text, cfg: &SolverConfig) -> Result<Vec<InnerSearch>> {
    let n = match text.b() {
        Some(b) => text.n_a().max(b.len()),
        None => text.n_a(),
    };
    if n < 2 {
        return Ok(Vec::new());
    }
    let s = text.materialize();
    let mut out = Vec::new();
    let mut d = 1usize << n.ilog2();
    while d >= 2 {
        let anchors = if d >= cfg.d_min {
            Some(AnchorSet::build(&s, d, cfg.scheme, cfg.seed, cfg.d_min)?)
        } else if cfg.exhaustive_fallback {
            Some(AnchorSet::build_exhaustive(&s, d)?)
        } else {
            None
        };
        if let Some(anchors) = anchors {
            out.push(InnerSearch::new(
                text.clone(),
                anchors.thinned(cfg.anchor_stride),
                cfg,
            ));
        }
        d /= 2;
    }
    Ok(out)
}

/// Binary search for the largest decoded target with a hit. Returns the
/// candidate of the last hit.
fn search(text: &Text, cfg: &SolverConfig, upper: u64) -> Result<Option<Candidate>> {
    let ledger = text.ledger().clone();
    let short = short_candidate(text)?;
    let n_a = text.n_a() as u64;
    let boundary_space = match text.b() {
        Some(b) => n_a * b.len() as u64,
        None => n_a * n_a,
    };
    let mut levels = levels(text, cfg)?;
    let mut hit = |d_tilde: u64| -> Result<Option<Candidate>> {
        // The one- and two-run cases are searched directly.
        ledger.charge(cfg.cost.grover_charge(boundary_space.max(1), 1.0));
        if let Some(c) = short.filter(|c| c.d_tilde >= d_tilde) {
            return Ok(Some(c));
        }
        for level in levels.iter_mut() {
            if let Some(c) = level.run(d_tilde)? {
                return Ok(Some(c));
            }
        }
        Ok(None)
    };
    let (mut lo, mut hi) = (0u64, upper);
    let mut best = None;
    while lo < hi {
        let mid = lo + (hi - lo).div_ceil(2);
        match hit(mid)? {
            Some(c) => {
                lo = mid;
                best = Some(c);
            }
            None => hi = mid - 1,
        }
    }
    Ok(best)
}

fn solve(text: Text, cfg: &SolverConfig, upper: u64) -> Result<Option<LcsAnswer>> {
    cfg.validate()?;
    let best = search(&text, cfg, upper)?;
    if cfg.mode == WalkMode::CostOnly {
        return Ok(None);
    }
    let Some(candidate) = best else {
        return Ok(None);
    };
    let answer = finalize_answer(&candidate, &text)?;
    let verified = match text.b() {
        Some(b) => verify_candidate(&answer, text.a().string(), b.string()),
        None => verify_repeat(&answer, text.a().string()),
    };
    if !verified {
        return Err(Error::Internal(format!(
            "answer {answer:?} failed verification"
        )));
    }
    Ok(Some(answer))
}

/// Longest common substring of `a` and `b` by decoded length. `None` when
/// they share no character, and always in cost-only mode.
pub fn solve_lcs_rle_p(
    a: &OracleHandle,
    b: &OracleHandle,
    cfg: &SolverConfig,
) -> Result<Option<LcsAnswer>> {
    if a.is_empty() || b.is_empty() {
        return Ok(None);
    }
    let upper = a.decoded_len().min(b.decoded_len());
    solve(Text::pair(a.clone(), b.clone())?, cfg, upper)
}

/// Longest substring of `a` occurring at two different positions
/// (occurrences may overlap). Both answer positions refer to `a`.
pub fn solve_lrs(a: &OracleHandle, cfg: &SolverConfig) -> Result<Option<LcsAnswer>> {
    if a.decoded_len() < 2 {
        return Ok(None);
    }
    let upper = a.decoded_len() - 1;
    solve(Text::single(a.clone()), cfg, upper)
}

/// Extends a candidate to the maximal common substring around its aligned
/// positions and expresses it in the run coordinates of `A` and `B`.
pub fn finalize_answer(c: &Candidate, text: &Text) -> Result<LcsAnswer> {
    let (p, q) = c.aligned;
    let fwd = text.forward_common(p, q)?;
    let bwd = if p > 1 && q > 1 {
        text.backward_common(p - 1, q - 1)?
    } else {
        0
    };
    let len = bwd + fwd;
    if len < c.d_tilde {
        return Err(Error::Internal(format!(
            "candidate {c:?} reaches only {len} characters"
        )));
    }
    let (sa, sb) = (p - bwd, q - bwd);
    let runs_of = |start: u64| -> Result<(usize, usize)> {
        let first = text.inverse_prefix(start)?;
        let last = text.inverse_prefix(start + len - 1)?;
        Ok((first, last - first + 1))
    };
    let (i_a, ell) = runs_of(sa)?;
    let (i_b, ell_b) = runs_of(sb)?;
    if ell != ell_b {
        return Err(Error::Internal(format!(
            "occurrences of {c:?} span different run counts"
        )));
    }
    let (i_b, local_b) = match text.sep_index() {
        Some(sep) => {
            if i_a >= sep || i_b <= sep {
                return Err(Error::Internal(format!(
                    "candidate {c:?} not split by the separator"
                )));
            }
            (i_b - sep, sb - text.b_offset())
        }
        None => (i_b, sb),
    };
    Ok(LcsAnswer {
        i_a,
        i_b,
        ell,
        d_tilde: len,
        decoded_start_a: sa - 1,
        decoded_start_b: local_b - 1,
    })
}

fn verify_side(s: &RleString, run: usize, start: u64, len: u64) -> Option<RleString> {
    let table = prefix_table(s);
    let inside = run >= 1
        && run <= s.len()
        && table.values()[run - 1] <= start
        && start < table.values()[run];
    if !inside {
        return None;
    }
    slice(s, start, len).ok()
}

/// Whether `ans` describes equal decoded substrings of `a` and `b` that
/// start inside runs `i_A`, `i_B` and span `ell` runs.
pub fn verify_candidate(ans: &LcsAnswer, a: &RleString, b: &RleString) -> bool {
    if ans.d_tilde == 0 {
        return false;
    }
    let sa = verify_side(a, ans.i_a, ans.decoded_start_a, ans.d_tilde);
    let sb = verify_side(b, ans.i_b, ans.decoded_start_b, ans.d_tilde);
    match (sa, sb) {
        (Some(x), Some(y)) => x == y && x.len() == ans.ell,
        _ => false,
    }
}

/// [`verify_candidate`] for a repeat inside `a`, which must occur at two
/// different starts.
pub fn verify_repeat(ans: &LcsAnswer, a: &RleString) -> bool {
    ans.decoded_start_a != ans.decoded_start_b && verify_candidate(ans, a, a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::query::QueryLedger;
    use crate::rle::{decode, encode};

    fn handles(a: &RleString, b: &RleString) -> (OracleHandle, OracleHandle, QueryLedger) {
        let ledger = QueryLedger::new();
        (
            OracleHandle::new(a.clone(), ledger.clone()),
            OracleHandle::new(b.clone(), ledger.clone()),
            ledger,
        )
    }

    fn lcs(a: &[u8], b: &[u8]) -> Option<LcsAnswer> {
        let (ha, hb, _) = handles(&encode(a), &encode(b));
        solve_lcs_rle_p(&ha, &hb, &SolverConfig::default()).unwrap()
    }

    #[test]
    fn worked_example() {
        let ans = lcs(b"abcdbbbbccccc", b"abcd@bbbbcc").unwrap();
        assert_eq!(ans.d_tilde, 6);
        assert_eq!(ans.ell, 2);
        let a = decode(&encode(b"abcdbbbbccccc"));
        let s = ans.decoded_start_a as usize;
        assert_eq!(&a[s..s + 6], b"bbbbcc");
    }

    #[test]
    fn trivial_cases() {
        let ans = lcs(b"aaaaa", b"aaaaa").unwrap();
        assert_eq!((ans.d_tilde, ans.ell, ans.i_a, ans.i_b), (5, 1, 1, 1));
        assert_eq!(lcs(b"aaab", b"cc"), None);
        assert_eq!(lcs(b"", b"abc"), None);
    }

    #[test]
    fn finalize_example() {
        let a = RleString::from_pairs(&[(b'a', 2), (b'b', 3), (b'c', 1)]);
        let b = RleString::from_pairs(&[(b'd', 1), (b'b', 3), (b'c', 2)]);
        let (ha, hb, _) = handles(&a, &b);
        let text = Text::pair(ha, hb).unwrap();
        // runs 2 and 6 of S start at decoded positions 3 and 9
        let c = Candidate {
            source: CandidateSource::Walk {
                k_red: 2,
                k_blue: 6,
                d_prime: 0,
                l: 3,
            },
            d_tilde: 4,
            aligned: (3, 9),
        };
        let ans = finalize_answer(&c, &text).unwrap();
        assert_eq!((ans.i_a, ans.i_b, ans.ell, ans.d_tilde), (2, 2, 2, 4));
        assert!(verify_candidate(&ans, &a, &b));
        assert!(!verify_candidate(&LcsAnswer { ell: 3, ..ans }, &a, &b));
        assert!(!verify_candidate(
            &LcsAnswer {
                decoded_start_a: 3,
                ..ans
            },
            &a,
            &b
        ));
    }

    #[test]
    fn repeats() {
        let lrs = |s: &[u8]| {
            let h = OracleHandle::new(encode(s), QueryLedger::new());
            solve_lrs(&h, &SolverConfig::default())
                .unwrap()
                .map(|a| a.d_tilde)
        };
        assert_eq!(lrs(b"abcabc"), Some(3));
        assert_eq!(lrs(b"aaaa"), Some(3));
        assert_eq!(lrs(b"ab"), None);
    }

    #[test]
    fn costonly_returns_none_and_charges() {
        let (ha, hb, ledger) = handles(&encode(b"abcdbbbbccccc"), &encode(b"abcd@bbbbcc"));
        let cfg = SolverConfig {
            mode: WalkMode::CostOnly,
            ..SolverConfig::default()
        };
        assert_eq!(solve_lcs_rle_p(&ha, &hb, &cfg).unwrap(), None);
        assert!(ledger.charged_cost() > 0.0);
    }
}
