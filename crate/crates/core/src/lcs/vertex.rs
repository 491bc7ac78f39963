//! State attached to one walk vertex: the stored anchors ordered by key, by
//! forward window `P(k)` and by backward window `Q(k)`, the ldcp of each
//! adjacent pair in those orders, and rank pairs of the stored anchors
//! against a fixed reference sample.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::collections::HashMap;
use std::rc::Rc;

use crate::anchors::AnchorSet;
use crate::ds::{DynArray, RangeSum2D};
use crate::error::{Error, Result};
use crate::lcs::Pairing;
use crate::query::{CostModel, QueryLedger};
use crate::rle::{compare_runs, RleString};
use crate::text::{Color, Text};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Side {
    P,
    Q,
}

/// Both windows of one anchor.
#[derive(Debug)]
pub(crate) struct Windows {
    pub p: RleString,
    pub q: RleString,
}

impl Windows {
    fn get(&self, side: Side) -> &RleString {
        match side {
            Side::P => &self.p,
            Side::Q => &self.q,
        }
    }
}

/// Read-only inputs shared by every vertex of one walk: the text, the
/// anchor set of the current level, and a cache of materialised windows.
#[derive(Debug)]
pub struct WalkContext {
    text: Text,
    anchors: AnchorSet,
    cost: CostModel,
    pairing: Pairing,
    windows: RefCell<HashMap<usize, Rc<Windows>>>,
}

impl WalkContext {
    pub fn new(text: Text, anchors: AnchorSet, cost: CostModel) -> Self {
        let pairing = if text.is_pair() {
            Pairing::Bichromatic
        } else {
            Pairing::Single
        };
        WalkContext {
            text,
            anchors,
            cost,
            pairing,
            windows: RefCell::new(HashMap::new()),
        }
    }

    pub fn text(&self) -> &Text {
        &self.text
    }

    pub fn anchors(&self) -> &AnchorSet {
        &self.anchors
    }

    pub fn d(&self) -> usize {
        self.anchors.d()
    }

    pub fn m(&self) -> usize {
        self.anchors.len()
    }

    pub fn cost(&self) -> &CostModel {
        &self.cost
    }

    pub fn pairing(&self) -> Pairing {
        self.pairing
    }

    pub fn ledger(&self) -> &QueryLedger {
        self.text.ledger()
    }

    /// Windows of anchor `k`, read through the oracles on first use.
    pub(crate) fn windows(&self, k: usize) -> Result<Rc<Windows>> {
        if let Some(w) = self.windows.borrow().get(&k) {
            return Ok(Rc::clone(w));
        }
        let x = self.anchors.get(k)?;
        let d = self.d();
        let w = Rc::new(Windows {
            p: self.text.prefix_window(x, d)?,
            q: self.text.suffix_window(x, d)?,
        });
        self.windows.borrow_mut().insert(k, Rc::clone(&w));
        Ok(w)
    }

    /// Decoded order and ldcp of two windows; charged as one minimum
    /// finding over the `2d + 1` runs of a window.
    fn compare_windows(&self, a: &RleString, b: &RleString) -> (Ordering, u64) {
        self.ledger()
            .charge(self.cost.minfind_charge(2 * self.d() as u64 + 1, 1.0));
        compare_runs(a.runs().iter().copied(), b.runs().iter().copied())
    }

    /// Order of anchors `a`, `b` by window on `side`, ties broken by index,
    /// together with the ldcp of the two windows.
    pub(crate) fn compare(&self, a: usize, b: usize, side: Side) -> Result<(Ordering, u64)> {
        let (wa, wb) = (self.windows(a)?, self.windows(b)?);
        let (ord, l) = self.compare_windows(wa.get(side), wb.get(side));
        Ok((ord.then(a.cmp(&b)), l))
    }
}

/// The reference sample `V`, sorted by each window, fixed before the walk.
#[derive(Debug, Clone)]
pub struct ReferenceSample {
    p_sorted: Vec<usize>,
    q_sorted: Vec<usize>,
}

impl ReferenceSample {
    pub fn new(ctx: &WalkContext, keys: &[usize]) -> Result<Self> {
        let windows: Vec<_> = keys
            .iter()
            .map(|&k| Ok((k, ctx.windows(k)?)))
            .collect::<Result<_>>()?;
        let sorted = |side: Side| {
            let mut ws = windows.clone();
            ws.sort_by(|(ka, a), (kb, b)| {
                ctx.compare_windows(a.get(side), b.get(side))
                    .0
                    .then(ka.cmp(kb))
            });
            ws.into_iter().map(|(k, _)| k).collect()
        };
        Ok(ReferenceSample {
            p_sorted: sorted(Side::P),
            q_sorted: sorted(Side::Q),
        })
    }

    pub fn len(&self) -> usize {
        self.p_sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p_sorted.is_empty()
    }

    /// Number of sample windows `⪯` the window of `k` on `side`.
    pub(crate) fn rank(&self, ctx: &WalkContext, k: usize, side: Side) -> Result<usize> {
        let sorted = match side {
            Side::P => &self.p_sorted,
            Side::Q => &self.q_sorted,
        };
        let wk = ctx.windows(k)?;
        let (mut lo, mut hi) = (0, sorted.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            let wv = ctx.windows(sorted[mid])?;
            if ctx.compare_windows(wv.get(side), wk.get(side)).0 != Ordering::Greater {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        Ok(lo)
    }
}

/// Stored anchors in window order plus the ldcp of adjacent entries.
#[derive(Debug, Clone)]
pub(crate) struct Ordered {
    /// `(k, ρ(k))` sorted by window of `k`.
    pub order: DynArray,
    /// `(k_i, ldcp(k_i, k_{i+1}))`, keyed by the left element.
    pub ldcp: DynArray,
}

#[derive(Debug, Clone)]
pub struct VertexData {
    ctx: Rc<WalkContext>,
    sample: Rc<ReferenceSample>,
    by_key: DynArray,
    p: Ordered,
    q: Ordered,
    /// Rank pairs `(ρ^P + 1, ρ^Q + 1)`: red then blue, or one structure for
    /// all anchors when repeats are sought.
    ranks: Vec<RangeSum2D>,
}

impl VertexData {
    pub fn new(ctx: Rc<WalkContext>, sample: Rc<ReferenceSample>) -> Self {
        let ledger = ctx.ledger().clone();
        let dyn_array = || DynArray::new(ledger.clone());
        let structures = match ctx.pairing() {
            Pairing::Bichromatic => 2,
            Pairing::Single => 1,
        };
        let universe = sample.len() + 1;
        VertexData {
            by_key: dyn_array(),
            p: Ordered {
                order: dyn_array(),
                ldcp: dyn_array(),
            },
            q: Ordered {
                order: dyn_array(),
                ldcp: dyn_array(),
            },
            ranks: (0..structures)
                .map(|_| RangeSum2D::new(universe, ledger.clone()))
                .collect(),
            ctx,
            sample,
        }
    }

    pub fn context(&self) -> &Rc<WalkContext> {
        &self.ctx
    }

    pub fn len(&self) -> usize {
        self.by_key.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_key.is_empty()
    }

    pub fn contains(&self, k: usize) -> bool {
        self.by_key.contains_key(k as u64)
    }

    /// Stored anchor indices in increasing order.
    pub fn keys(&self) -> Vec<usize> {
        self.by_key
            .to_vec()
            .into_iter()
            .map(|(k, _)| k as usize)
            .collect()
    }

    pub fn p_order(&self) -> Vec<usize> {
        self.p
            .order
            .to_vec()
            .into_iter()
            .map(|(k, _)| k as usize)
            .collect()
    }

    pub fn q_order(&self) -> Vec<usize> {
        self.q
            .order
            .to_vec()
            .into_iter()
            .map(|(k, _)| k as usize)
            .collect()
    }

    pub fn p_ldcp(&self) -> Vec<u64> {
        self.p.ldcp.to_vec().into_iter().map(|(_, h)| h).collect()
    }

    pub fn q_ldcp(&self) -> Vec<u64> {
        self.q.ldcp.to_vec().into_iter().map(|(_, h)| h).collect()
    }

    /// Minimum of the stored ldcp values between positions `a < b` of the
    /// `P` order (or `Q` order when `backward`).
    pub fn ldcp_range_min(&self, a: usize, b: usize, backward: bool) -> Result<u64> {
        let side = if backward { &self.q } else { &self.p };
        side.ldcp.range_min(a, b - 1)
    }

    /// Decoded forward and backward windows of anchor `k`.
    pub fn windows_of(&self, k: usize) -> Result<(RleString, RleString)> {
        let w = self.ctx.windows(k)?;
        Ok((w.p.clone(), w.q.clone()))
    }

    /// Canonical text form of every stored structure.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for a in [
            &self.by_key,
            &self.p.order,
            &self.p.ldcp,
            &self.q.order,
            &self.q.ldcp,
        ] {
            out.push_str(&a.serialize());
            out.push('\n');
        }
        for r in &self.ranks {
            let pts: Vec<String> = r
                .points()
                .map(|((x, y), c)| format!("{x},{y}x{c}"))
                .collect();
            out.push_str(&pts.join(" "));
            out.push('\n');
        }
        out
    }

    pub(crate) fn side(&self, side: Side) -> &Ordered {
        match side {
            Side::P => &self.p,
            Side::Q => &self.q,
        }
    }

    /// Rank structure holding anchors of `color`.
    pub(crate) fn ranks_for(&self, color: Color) -> Option<&RangeSum2D> {
        self.rank_slot(color).map(|i| &self.ranks[i])
    }

    fn rank_slot(&self, color: Color) -> Option<usize> {
        match (self.ctx.pairing(), color) {
            (_, Color::White) => None,
            (Pairing::Single, _) => Some(0),
            (Pairing::Bichromatic, Color::Red) => Some(0),
            (Pairing::Bichromatic, Color::Blue) => Some(1),
        }
    }

    /// 1-based position that `k` takes among the stored entries of `order`.
    fn insertion_point(&self, order: &DynArray, k: usize, side: Side) -> Result<usize> {
        let (mut lo, mut hi) = (1, order.len() + 1);
        while lo < hi {
            let mid = (lo + hi) / 2;
            let (km, _) = order.index(mid)?;
            if self.ctx.compare(km as usize, k, side)?.0 == Ordering::Less {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        Ok(lo)
    }

    fn insert_ordered(&mut self, k: usize, side: Side) -> Result<usize> {
        let ctx = Rc::clone(&self.ctx);
        let rho = self.sample.rank(&ctx, k, side)?;
        let t = self.insertion_point(&self.side(side).order, k, side)?;
        let ordered = match side {
            Side::P => &mut self.p,
            Side::Q => &mut self.q,
        };
        let size = ordered.order.len();
        let pred = if t > 1 {
            Some(ordered.order.index(t - 1)?.0)
        } else {
            None
        };
        let succ = if t <= size {
            Some(ordered.order.index(t)?.0)
        } else {
            None
        };
        let ku = k as u64;
        match (pred, succ) {
            (Some(kp), Some(ks)) => {
                let h_p = ctx.compare(kp as usize, k, side)?.1;
                let h_s = ctx.compare(k, ks as usize, side)?.1;
                ordered.ldcp.delete(t - 1)?;
                ordered.ldcp.insert(t - 1, kp, h_p)?;
                ordered.ldcp.insert(t, ku, h_s)?;
            }
            (Some(kp), None) => {
                let h_p = ctx.compare(kp as usize, k, side)?.1;
                ordered.ldcp.insert(t - 1, kp, h_p)?;
            }
            (None, Some(ks)) => {
                let h_s = ctx.compare(k, ks as usize, side)?.1;
                ordered.ldcp.insert(1, ku, h_s)?;
            }
            (None, None) => {}
        }
        ordered.order.insert(t, ku, rho as u64)?;
        Ok(rho)
    }

    fn delete_ordered(&mut self, k: usize, side: Side) -> Result<usize> {
        let ordered = match side {
            Side::P => &mut self.p,
            Side::Q => &mut self.q,
        };
        let t = ordered.order.locate(k as u64)?;
        let size = ordered.order.len();
        match (t > 1, t < size) {
            (true, true) => {
                let (kp, h_p) = ordered.ldcp.delete(t - 1)?;
                let (_, h_s) = ordered.ldcp.delete(t - 1)?;
                ordered.ldcp.insert(t - 1, kp, h_p.min(h_s))?;
            }
            (true, false) => {
                ordered.ldcp.delete(t - 1)?;
            }
            (false, true) => {
                ordered.ldcp.delete(1)?;
            }
            (false, false) => {}
        }
        let (_, rho) = ordered.order.delete(t)?;
        Ok(rho as usize)
    }

    pub fn insert(&mut self, k: usize) -> Result<()> {
        if self.contains(k) {
            return Err(Error::Parameter(format!("anchor {k} already stored")));
        }
        let ctx = Rc::clone(&self.ctx);
        let x = ctx.anchors().anchor_at(k, ctx.ledger(), ctx.cost())?;
        let (mut lo, mut hi) = (1, self.by_key.len() + 1);
        while lo < hi {
            let mid = (lo + hi) / 2;
            if (self.by_key.index(mid)?.0 as usize) < k {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        self.by_key.insert(lo, k as u64, x as u64)?;
        let rho_p = self.insert_ordered(k, Side::P)?;
        let rho_q = self.insert_ordered(k, Side::Q)?;
        if let Some(slot) = self.rank_slot(ctx.text().color(x)) {
            self.ranks[slot].insert(rho_p + 1, rho_q + 1)?;
        }
        Ok(())
    }

    pub fn delete(&mut self, k: usize) -> Result<()> {
        if !self.contains(k) {
            return Err(Error::NotFound(format!("anchor {k} not stored")));
        }
        let ctx = Rc::clone(&self.ctx);
        let x = ctx.anchors().anchor_at(k, ctx.ledger(), ctx.cost())?;
        let pos = self.by_key.locate(k as u64)?;
        self.by_key.delete(pos)?;
        let rho_p = self.delete_ordered(k, Side::P)?;
        let rho_q = self.delete_ordered(k, Side::Q)?;
        if let Some(slot) = self.rank_slot(ctx.text().color(x)) {
            self.ranks[slot].delete(rho_p + 1, rho_q + 1)?;
        }
        Ok(())
    }
}
