//! Collision check of a walk vertex.
//!
//! For a stored anchor `k` at run `x` and a shift `d'`, let `L` be the
//! decoded length of runs `x-d' ..= x`. Another anchor `j` collides with `k`
//! when the backward windows agree on at least `L` characters and the forward
//! windows agree on at least `d̃ - L + R(x)` characters, `R(x)` being the
//! length of run `x`, which both windows start with. Agreement over `L`
//! characters with `d' ≥ 1` forces run `x` and the run of `j` to have equal
//! length, so the two starts line up and the decoded text around them
//! agrees on at least `d̃` characters.
//!
//! The anchors agreeing with `k` on each side form an interval of the
//! corresponding window order, found by range-minimum queries over the
//! stored adjacent ldcp values. Whether some anchor of the wanted color lies
//! in both intervals is decided by counting rank pairs in a box, plus an
//! explicit look at the anchors whose rank equals a boundary rank.

use std::collections::HashMap;

use crate::ds::DynArray;
use crate::error::Result;
use crate::lcs::vertex::{Side, VertexData};
use crate::lcs::{Candidate, CandidateSource, Pairing};
use crate::text::Color;

/// Stored anchors in each window order, with ranks, read once per check.
struct Snapshot {
    keys: [Vec<usize>; 2],
    rho: [Vec<usize>; 2],
    pos: [HashMap<usize, usize>; 2],
}

impl Snapshot {
    fn new(v: &VertexData) -> Self {
        let read = |side| {
            let entries = v.side(side).order.to_vec();
            let keys: Vec<usize> = entries.iter().map(|&(k, _)| k as usize).collect();
            let rho = entries.iter().map(|&(_, r)| r as usize).collect();
            let pos = keys.iter().enumerate().map(|(i, &k)| (k, i + 1)).collect();
            (keys, rho, pos)
        };
        let (kp, rp, pp) = read(Side::P);
        let (kq, rq, pq) = read(Side::Q);
        Snapshot {
            keys: [kp, kq],
            rho: [rp, rq],
            pos: [pp, pq],
        }
    }
}

fn idx(side: Side) -> usize {
    match side {
        Side::P => 0,
        Side::Q => 1,
    }
}

/// Smallest `l` in `floor..=good` with `ok(l)`, where `ok(good)` holds and
/// `ok` is monotone. Gallops down from `good`, then bisects.
fn extend_down(
    good: usize,
    floor: usize,
    mut ok: impl FnMut(usize) -> Result<bool>,
) -> Result<usize> {
    let (mut good, mut step) = (good, 1);
    let mut bad = loop {
        if good == floor {
            return Ok(floor);
        }
        let cand = good.saturating_sub(step).max(floor);
        if ok(cand)? {
            good = cand;
            step *= 2;
        } else {
            break cand;
        }
    };
    while bad + 1 < good {
        let mid = (bad + good) / 2;
        if ok(mid)? {
            good = mid;
        } else {
            bad = mid;
        }
    }
    Ok(good)
}

/// Smallest `l` in `bad+1..=ceil` with `ok(l)`, where `ok(bad)` fails,
/// `ok(ceil)` holds and `ok` is monotone. Gallops up from `bad`.
fn shrink_up(bad: usize, ceil: usize, mut ok: impl FnMut(usize) -> Result<bool>) -> Result<usize> {
    let (mut bad, mut step) = (bad, 1);
    let mut good = loop {
        let cand = (bad + step).min(ceil);
        if cand == ceil || ok(cand)? {
            break cand;
        }
        bad = cand;
        step *= 2;
    };
    while bad + 1 < good {
        let mid = (bad + good) / 2;
        if ok(mid)? {
            good = mid;
        } else {
            bad = mid;
        }
    }
    Ok(good)
}

#[cfg(test)]
fn leftmost(pos: usize, ok: impl FnMut(usize) -> Result<bool>) -> Result<usize> {
    extend_down(pos, 1, ok)
}

#[cfg(test)]
fn rightmost(pos: usize, size: usize, mut ok: impl FnMut(usize) -> Result<bool>) -> Result<usize> {
    let mirrored = extend_down(size + 1 - pos, 1, |l| ok(size + 1 - l))?;
    Ok(size + 1 - mirrored)
}

/// Order positions around one stored anchor whose adjacent ldcp values all
/// reach a threshold. Raising the threshold shrinks the interval and
/// lowering it grows it; each update starts from the previous boundaries.
struct Interval<'a> {
    ldcp: &'a DynArray,
    size: usize,
    pos: usize,
    bounds: (usize, usize),
    threshold: u64,
    /// Smallest adjacent ldcp inside `bounds`, and largest one just outside.
    /// Thresholds in `(outer, inner_min]` leave the interval unchanged.
    inner_min: u64,
    outer: u64,
    fresh: bool,
}

impl<'a> Interval<'a> {
    fn new(ldcp: &'a DynArray, size: usize, pos: usize) -> Self {
        Interval {
            ldcp,
            size,
            pos,
            bounds: (pos, pos),
            threshold: u64::MAX,
            inner_min: u64::MAX,
            outer: 0,
            fresh: true,
        }
    }

    /// Whether every adjacent ldcp between positions `a ≤ b` reaches `t`.
    fn spans(&self, a: usize, b: usize, t: u64) -> Result<bool> {
        Ok(a == b || self.ldcp.range_min(a, b - 1)? >= t)
    }

    fn update(&mut self, threshold: u64) -> Result<(usize, usize)> {
        if !self.fresh && self.outer < threshold && threshold <= self.inner_min {
            self.threshold = threshold;
            return Ok(self.bounds);
        }
        let (pos, size) = (self.pos, self.size);
        let (l, r) = self.bounds;
        let t = threshold;
        self.bounds = if t == 0 {
            (1, size)
        } else if t <= self.threshold {
            let l = if l > 1 && self.spans(l - 1, pos, t)? {
                extend_down(l - 1, 1, |x| self.spans(x, pos, t))?
            } else {
                l
            };
            let r = if r < size && self.spans(pos, r + 1, t)? {
                size + 1 - extend_down(size - r, 1, |x| self.spans(pos, size + 1 - x, t))?
            } else {
                r
            };
            (l, r)
        } else {
            let l = if self.spans(l, pos, t)? {
                l
            } else {
                shrink_up(l, pos, |x| self.spans(x, pos, t))?
            };
            let r = if self.spans(pos, r, t)? {
                r
            } else {
                size + 1
                    - shrink_up(size + 1 - r, size + 1 - pos, |x| {
                        self.spans(pos, size + 1 - x, t)
                    })?
            };
            (l, r)
        };
        self.threshold = t;
        self.fresh = false;
        let (l, r) = self.bounds;
        self.inner_min = if l < r {
            self.ldcp.range_min(l, r - 1)?
        } else {
            u64::MAX
        };
        let left = if l > 1 { self.ldcp.index(l - 1)?.1 } else { 0 };
        let right = if r < size { self.ldcp.index(r)?.1 } else { 0 };
        self.outer = left.max(right);
        Ok(self.bounds)
    }
}

struct Probe<'a> {
    k: usize,
    x: usize,
    color: Color,
    run_start: u64,
    run_end: u64,
    active: bool,
    q_iv: Interval<'a>,
    p_iv: Interval<'a>,
    /// Intervals of the last partner test that came back empty.
    tested: Option<((usize, usize), (usize, usize))>,
}

/// Searches the vertex for a colliding pair at decoded target `d_tilde`.
///
/// Runs classically; its internal charges are discarded and replaced by one
/// Grover search over the `2d · |vertex|` pairs `(d', k)` with unit verifier.
pub fn vertex_check(v: &VertexData, d_tilde: u64) -> Result<Option<Candidate>> {
    let ctx = v.context();
    let ledger = ctx.ledger();
    let (found, _) = ledger.capture(|| search(v, d_tilde));
    let space = (2 * ctx.d() * v.len()).max(1) as u64;
    ledger.charge(ctx.cost().grover_charge(space, 1.0));
    found
}

fn search(v: &VertexData, d_tilde: u64) -> Result<Option<Candidate>> {
    if v.is_empty() || d_tilde == 0 {
        return Ok(None);
    }
    let ctx = v.context();
    let text = ctx.text();
    let snap = Snapshot::new(v);
    let size = v.len();
    let mut colors = HashMap::with_capacity(size);
    let mut probes = Vec::with_capacity(size);
    for k in v.keys() {
        let x = ctx.anchors().get(k)?;
        let color = text.color(x);
        colors.insert(k, color);
        if color == Color::White {
            continue;
        }
        probes.push(Probe {
            k,
            x,
            color,
            run_start: text.prefix(x - 1)?,
            run_end: text.prefix(x)?,
            active: true,
            q_iv: Interval::new(&v.side(Side::Q).ldcp, size, snap.pos[1][&k]),
            p_iv: Interval::new(&v.side(Side::P).ldcp, size, snap.pos[0][&k]),
            tested: None,
        });
    }
    for d_prime in 0..=2 * ctx.d() {
        for probe in probes.iter_mut().filter(|p| p.active) {
            let Some(lower) = probe.x.checked_sub(d_prime + 1) else {
                // Further shifts clamp to the same window.
                probe.active = false;
                continue;
            };
            let l = probe.run_end - text.prefix(lower)?;
            let q_iv = probe.q_iv.update(l)?;
            if q_iv == (probe.q_iv.pos, probe.q_iv.pos) {
                probe.active = false;
                continue;
            }
            let run_len = probe.run_end - probe.run_start;
            let p_threshold = (d_tilde + run_len).saturating_sub(l);
            let p_iv = probe.p_iv.update(p_threshold)?;
            // Larger shifts only shrink the Q interval; with the P interval
            // already maximal, an empty test stays empty.
            let p_full = p_iv == (1, size);
            if p_iv.0 == p_iv.1 {
                continue;
            }
            if probe.tested == Some((p_iv, q_iv)) {
                probe.active = !p_full;
                continue;
            }
            let flag = match ctx.pairing() {
                Pairing::Single => probe.color,
                Pairing::Bichromatic => probe.color.opposite().expect("white skipped"),
            };
            let Some(j) = partner(v, &snap, &colors, probe, flag, p_iv, q_iv) else {
                probe.tested = Some((p_iv, q_iv));
                probe.active = !p_full;
                continue;
            };
            let (k_red, k_blue) = match probe.color {
                Color::Blue => (j, probe.k),
                _ => (probe.k, j),
            };
            let start = |k: usize| -> Result<u64> {
                let x = ctx.anchors().get(k)?;
                Ok(text.prefix(x - 1)? + 1)
            };
            return Ok(Some(Candidate {
                source: CandidateSource::Walk {
                    k_red,
                    k_blue,
                    d_prime,
                    l,
                },
                d_tilde,
                aligned: (start(k_red)?, start(k_blue)?),
            }));
        }
    }
    Ok(None)
}

/// An anchor of color `flag`, other than `probe.k`, lying in both intervals.
fn partner(
    v: &VertexData,
    snap: &Snapshot,
    colors: &HashMap<usize, Color>,
    probe: &Probe,
    flag: Color,
    p_iv: (usize, usize),
    q_iv: (usize, usize),
) -> Option<usize> {
    let within = |iv: (usize, usize), pos: usize| iv.0 <= pos && pos <= iv.1;
    let eligible = |j: usize| j != probe.k && colors[&j] == flag;
    let in_both = |j: usize| within(p_iv, snap.pos[0][&j]) && within(q_iv, snap.pos[1][&j]);

    let ranks = v.ranks_for(flag)?;
    let rho = |side: Side, pos: usize| snap.rho[idx(side)][pos - 1];
    let (a, b) = (rho(Side::P, p_iv.0), rho(Side::P, p_iv.1));
    let (c, e) = (rho(Side::Q, q_iv.0), rho(Side::Q, q_iv.1));
    // Ranks strictly inside both boundary ranks; coordinates are rank + 1.
    let mut inside = if a + 1 < b && c + 1 < e {
        ranks.count(a + 2, b, c + 2, e)
    } else {
        0
    };
    let own = (
        snap.rho[0][snap.pos[0][&probe.k] - 1],
        snap.rho[1][snap.pos[1][&probe.k] - 1],
    );
    if colors[&probe.k] == flag && a < own.0 && own.0 < b && c < own.1 && own.1 < e {
        inside -= 1;
    }
    if inside > 0 {
        return (p_iv.0..=p_iv.1)
            .map(|pos| snap.keys[0][pos - 1])
            .find(|&j| eligible(j) && in_both(j));
    }
    for (side, iv, lo, hi) in [(Side::P, p_iv, a, b), (Side::Q, q_iv, c, e)] {
        let s = idx(side);
        let from_left = (iv.0..=iv.1).take_while(|&pos| snap.rho[s][pos - 1] == lo);
        let from_right = (iv.0..=iv.1)
            .rev()
            .take_while(|&pos| snap.rho[s][pos - 1] == hi);
        if let Some(j) = from_left
            .chain(from_right)
            .map(|pos| snap.keys[s][pos - 1])
            .find(|&j| eligible(j) && in_both(j))
        {
            return Some(j);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gallop_finds_boundaries() {
        let good_from = 4;
        for pos in good_from..=20 {
            assert_eq!(leftmost(pos, |l| Ok(l >= good_from)).unwrap(), good_from);
        }
        assert_eq!(leftmost(7, |_| Ok(true)).unwrap(), 1);
        assert_eq!(rightmost(3, 10, |r| Ok(r <= 8)).unwrap(), 8);
        assert_eq!(rightmost(3, 10, |_| Ok(true)).unwrap(), 10);
        assert_eq!(rightmost(10, 10, |_| Ok(true)).unwrap(), 10);
    }

    fn naive_interval(h: &[u64], pos: usize, t: u64) -> (usize, usize) {
        // h[i - 1] sits between order positions i and i + 1.
        let mut l = pos;
        while l > 1 && h[l - 2] >= t {
            l -= 1;
        }
        let mut r = pos;
        while r <= h.len() && h[r - 1] >= t {
            r += 1;
        }
        (l, r)
    }

    #[test]
    fn interval_updates_match_naive() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for _ in 0..300 {
            let size = rng.gen_range(1..40);
            let h: Vec<u64> = (1..size).map(|_| rng.gen_range(0..8)).collect();
            let mut ldcp = DynArray::uncharged();
            for (i, &v) in h.iter().enumerate() {
                ldcp.insert(i + 1, i as u64, v).unwrap();
            }
            let pos = rng.gen_range(1..=size);
            let mut iv = Interval::new(&ldcp, size, pos);
            let mut t: u64 = rng.gen_range(0..10);
            for _ in 0..20 {
                assert_eq!(
                    iv.update(t).unwrap(),
                    naive_interval(&h, pos, t),
                    "h={h:?} pos={pos} t={t}"
                );
                t = if rng.gen_bool(0.5) {
                    t + rng.gen_range(0..3)
                } else {
                    t.saturating_sub(rng.gen_range(0..3))
                };
            }
        }
    }
}
