//! Position-indexed array of `(key, value)` pairs with distinct keys.
//!
//! Backed by a treap whose priorities are a fixed hash of the key, so the tree
//! shape depends only on the current sequence of pairs and never on the order
//! of the insertions and deletions that produced it. Subtrees carry their
//! size and minimum value for indexing and range-minimum queries.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::query::QueryLedger;

type NodeId = usize;

#[derive(Debug, Clone)]
struct Node {
    key: u64,
    value: u64,
    prio: u64,
    size: usize,
    min: u64,
    left: Option<NodeId>,
    right: Option<NodeId>,
    parent: Option<NodeId>,
}

pub(crate) fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, Default)]
pub struct DynArray {
    nodes: Vec<Node>,
    free: Vec<NodeId>,
    root: Option<NodeId>,
    by_key: HashMap<u64, NodeId>,
    ledger: Option<QueryLedger>,
}

impl DynArray {
    /// An array whose operations charge `log₂(size + 2)` each to `ledger`.
    pub fn new(ledger: QueryLedger) -> Self {
        DynArray {
            ledger: Some(ledger),
            ..Default::default()
        }
    }

    /// An array that charges nothing.
    pub fn uncharged() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.size(self.root)
    }

    pub fn is_empty(&self) -> bool {
        self.root.is_none()
    }

    pub fn contains_key(&self, key: u64) -> bool {
        self.by_key.contains_key(&key)
    }

    fn charge(&self) {
        if let Some(ledger) = &self.ledger {
            ledger.charge(((self.len() + 2) as f64).log2());
        }
    }

    fn size(&self, t: Option<NodeId>) -> usize {
        t.map_or(0, |i| self.nodes[i].size)
    }

    fn min_of(&self, t: Option<NodeId>) -> u64 {
        t.map_or(u64::MAX, |i| self.nodes[i].min)
    }

    fn pull(&mut self, t: NodeId) {
        let (l, r) = (self.nodes[t].left, self.nodes[t].right);
        let size = 1 + self.size(l) + self.size(r);
        let min = self.nodes[t].value.min(self.min_of(l)).min(self.min_of(r));
        let node = &mut self.nodes[t];
        node.size = size;
        node.min = min;
        for c in [l, r].into_iter().flatten() {
            self.nodes[c].parent = Some(t);
        }
    }

    fn outranks(&self, a: NodeId, b: NodeId) -> bool {
        let (x, y) = (&self.nodes[a], &self.nodes[b]);
        (x.prio, x.key) > (y.prio, y.key)
    }

    /// Splits `t` into its first `k` elements and the rest.
    fn split(&mut self, t: Option<NodeId>, k: usize) -> (Option<NodeId>, Option<NodeId>) {
        let Some(n) = t else { return (None, None) };
        let left_size = self.size(self.nodes[n].left);
        if k <= left_size {
            let (a, b) = self.split(self.nodes[n].left, k);
            self.nodes[n].left = b;
            self.pull(n);
            if let Some(a) = a {
                self.nodes[a].parent = None;
            }
            (a, Some(n))
        } else {
            let (a, b) = self.split(self.nodes[n].right, k - left_size - 1);
            self.nodes[n].right = a;
            self.pull(n);
            if let Some(b) = b {
                self.nodes[b].parent = None;
            }
            (Some(n), b)
        }
    }

    fn merge(&mut self, a: Option<NodeId>, b: Option<NodeId>) -> Option<NodeId> {
        match (a, b) {
            (None, t) | (t, None) => t,
            (Some(x), Some(y)) => {
                if self.outranks(x, y) {
                    let r = self.merge(self.nodes[x].right, Some(y));
                    self.nodes[x].right = r;
                    self.pull(x);
                    Some(x)
                } else {
                    let l = self.merge(Some(x), self.nodes[y].left);
                    self.nodes[y].left = l;
                    self.pull(y);
                    Some(y)
                }
            }
        }
    }

    fn set_root(&mut self, root: Option<NodeId>) {
        self.root = root;
        if let Some(r) = root {
            self.nodes[r].parent = None;
        }
    }

    fn check_index(&self, i: usize, hi: usize) -> Result<()> {
        if i == 0 || i > hi {
            Err(Error::range(i as u64, 1, hi as u64))
        } else {
            Ok(())
        }
    }

    fn node_at(&self, mut i: usize) -> NodeId {
        let mut t = self.root.expect("index within bounds");
        loop {
            let left = self.size(self.nodes[t].left);
            if i <= left {
                t = self.nodes[t].left.unwrap();
            } else if i == left + 1 {
                return t;
            } else {
                i -= left + 1;
                t = self.nodes[t].right.unwrap();
            }
        }
    }

    /// The `i`-th pair, 1-based.
    pub fn index(&self, i: usize) -> Result<(u64, u64)> {
        self.check_index(i, self.len())?;
        self.charge();
        let n = &self.nodes[self.node_at(i)];
        Ok((n.key, n.value))
    }

    /// Inserts so that the new pair ends up at position `i` (1-based).
    pub fn insert(&mut self, i: usize, key: u64, value: u64) -> Result<()> {
        self.check_index(i, self.len() + 1)?;
        if self.by_key.contains_key(&key) {
            return Err(Error::DuplicateKey(key));
        }
        self.charge();
        let node = Node {
            key,
            value,
            prio: mix64(key ^ 0x5bd1_e995),
            size: 1,
            min: value,
            left: None,
            right: None,
            parent: None,
        };
        let id = match self.free.pop() {
            Some(id) => {
                self.nodes[id] = node;
                id
            }
            None => {
                self.nodes.push(node);
                self.nodes.len() - 1
            }
        };
        self.by_key.insert(key, id);
        let (a, b) = self.split(self.root, i - 1);
        let ab = self.merge(a, Some(id));
        let root = self.merge(ab, b);
        self.set_root(root);
        Ok(())
    }

    /// Removes and returns the `i`-th pair.
    pub fn delete(&mut self, i: usize) -> Result<(u64, u64)> {
        self.check_index(i, self.len())?;
        self.charge();
        let (a, rest) = self.split(self.root, i - 1);
        let (mid, b) = self.split(rest, 1);
        let mid = mid.expect("one element");
        let root = self.merge(a, b);
        self.set_root(root);
        let (key, value) = (self.nodes[mid].key, self.nodes[mid].value);
        self.by_key.remove(&key);
        self.free.push(mid);
        Ok((key, value))
    }

    /// Position of `key`, 1-based.
    pub fn locate(&self, key: u64) -> Result<usize> {
        let &id = self
            .by_key
            .get(&key)
            .ok_or_else(|| Error::NotFound(format!("key {key}")))?;
        self.charge();
        let mut pos = self.size(self.nodes[id].left) + 1;
        let mut t = id;
        while let Some(p) = self.nodes[t].parent {
            if self.nodes[p].right == Some(t) {
                pos += self.size(self.nodes[p].left) + 1;
            }
            t = p;
        }
        Ok(pos)
    }

    /// Minimum value over positions `a..=b`.
    pub fn range_min(&self, a: usize, b: usize) -> Result<u64> {
        if a == 0 || a > b || b > self.len() {
            return Err(Error::Parameter(format!(
                "range {a}..={b} invalid for length {}",
                self.len()
            )));
        }
        self.charge();
        Ok(self.range_min_in(self.root, a, b))
    }

    /// Minimum over positions `a..=b` of the subtree `t` (positions local to it).
    fn range_min_in(&self, t: Option<NodeId>, a: usize, b: usize) -> u64 {
        let Some(n) = t else { return u64::MAX };
        let node = &self.nodes[n];
        if a <= 1 && b >= node.size {
            return node.min;
        }
        let left = self.size(node.left);
        let mut best = u64::MAX;
        if a <= left {
            best = best.min(self.range_min_in(node.left, a, b.min(left)));
        }
        if a <= left + 1 && left < b {
            best = best.min(node.value);
        }
        if b > left + 1 {
            let (ra, rb) = (a.saturating_sub(left + 1).max(1), b - left - 1);
            best = best.min(self.range_min_in(node.right, ra, rb));
        }
        best
    }

    /// All pairs in order (uncharged).
    pub fn to_vec(&self) -> Vec<(u64, u64)> {
        let mut out = Vec::with_capacity(self.len());
        let mut stack = Vec::new();
        let mut t = self.root;
        while t.is_some() || !stack.is_empty() {
            while let Some(n) = t {
                stack.push(n);
                t = self.nodes[n].left;
            }
            let n = stack.pop().unwrap();
            out.push((self.nodes[n].key, self.nodes[n].value));
            t = self.nodes[n].right;
        }
        out
    }

    /// Deterministic pre-order dump of the tree, e.g. `(3:1 (1:4 . .) .)`.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        self.serialize_into(self.root, &mut out);
        out
    }

    fn serialize_into(&self, t: Option<NodeId>, out: &mut String) {
        match t {
            None => out.push('.'),
            Some(n) => {
                let node = &self.nodes[n];
                let _ = write!(out, "({}:{} ", node.key, node.value);
                self.serialize_into(node.left, out);
                out.push(' ');
                self.serialize_into(node.right, out);
                out.push(')');
            }
        }
    }
}

impl PartialEq for DynArray {
    fn eq(&self, other: &Self) -> bool {
        self.serialize() == other.serialize()
    }
}
