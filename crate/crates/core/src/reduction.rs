//! Leaf reductions and the eternal domination number of a tree.
//!
//! Two reductions are applied, always at a deepest leaf `c` (smallest id on
//! ties) with parent `p`:
//!
//! * **leaf pair**: `p` has `c` as its only child, so `p` has degree two and
//!   is adjacent to exactly one leaf. Both `p` and `c` are deleted.
//! * **leaf bunch**: `p` has at least two children, all of them leaves by
//!   depth maximality, and `p` has a parent. All children of `p` are deleted.
//!
//! Each application lowers the eternal domination number by exactly one and
//! the process ends at `K1` or `K2`, so `EDN(T) = steps + 1`. The steps also
//! record the edges of the auxiliary graph whose components form a nice
//! neo-colonization (see [`crate::neocol`]).

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::tree::{RootedTree, Tree, Vertex};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepKind {
    LeafPair,
    LeafBunch,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionStep {
    pub kind: StepKind,
    /// The vertex `x`: deleted together with its leaf for a leaf pair, kept
    /// (and made a leaf) for a leaf bunch.
    pub anchor: Vertex,
    /// Deleted vertices: `[x, y]` for a leaf pair, the children of `x` in
    /// ascending order for a leaf bunch.
    pub removed: Vec<Vertex>,
    /// Auxiliary-graph edges contributed by this step.
    pub h_edges: Vec<(Vertex, Vertex)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Terminal {
    K1(Vertex),
    /// `(root, child of root)`.
    K2(Vertex, Vertex),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionTrace {
    pub steps: Vec<ReductionStep>,
    pub terminal: Terminal,
}

impl ReductionTrace {
    pub fn rho(&self) -> usize {
        self.steps.len()
    }

    pub fn edn(&self) -> usize {
        self.steps.len() + 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReductionError {
    /// The deepest leaf's parent has a child that still has children.
    DeepestParentHasInnerChild { parent: Vertex, child: Vertex },
    /// A reduction would have to delete or anchor at the root.
    AnchorWithoutParent(Vertex),
}

impl fmt::Display for ReductionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReductionError::DeepestParentHasInnerChild { parent, child } => write!(
                f,
                "deepest leaf's parent {parent} has non-leaf child {child}"
            ),
            ReductionError::AnchorWithoutParent(v) => {
                write!(f, "reduction anchor {v} has no parent")
            }
        }
    }
}

impl core::error::Error for ReductionError {}

/// Working copy of a rooted tree that shrinks one reduction at a time.
///
/// Vertices are bucketed by depth in ascending id order. All live vertices
/// at the maximum live depth are leaves, so the first live entry of the
/// deepest non-empty bucket is the deepest leaf with the smallest id. Bucket
/// cursors only move forward, which keeps the whole run linear.
pub struct Reducer<'a> {
    rt: &'a RootedTree,
    alive: Vec<bool>,
    live_children: Vec<usize>,
    remaining: usize,
    buckets: Vec<Vec<Vertex>>,
    cursor: Vec<usize>,
    max_depth: usize,
}

impl<'a> Reducer<'a> {
    pub fn new(rt: &'a RootedTree) -> Self {
        let n = rt.n();
        let max_depth = rt.depths().iter().copied().max().unwrap_or(0);
        let mut buckets = vec![Vec::new(); max_depth + 1];
        for v in 0..n {
            buckets[rt.depth(v)].push(v);
        }
        Reducer {
            rt,
            alive: vec![true; n],
            live_children: (0..n).map(|v| rt.children(v).len()).collect(),
            remaining: n,
            cursor: vec![0; max_depth + 1],
            buckets,
            max_depth,
        }
    }

    pub fn remaining(&self) -> usize {
        self.remaining
    }

    pub fn is_alive(&self, v: Vertex) -> bool {
        self.alive[v]
    }

    fn deepest_leaf(&mut self) -> Vertex {
        loop {
            let d = self.max_depth;
            let bucket = &self.buckets[d];
            while self.cursor[d] < bucket.len() && !self.alive[bucket[self.cursor[d]]] {
                self.cursor[d] += 1;
            }
            if self.cursor[d] < bucket.len() {
                return bucket[self.cursor[d]];
            }
            self.max_depth -= 1;
        }
    }

    fn kill(&mut self, v: Vertex) {
        self.alive[v] = false;
        self.remaining -= 1;
    }

    /// Applies one reduction, or returns `None` once at most two vertices remain.
    pub fn step(&mut self) -> Result<Option<ReductionStep>, ReductionError> {
        if self.remaining <= 2 {
            return Ok(None);
        }
        let c = self.deepest_leaf();
        let p = self
            .rt
            .parent(c)
            .ok_or(ReductionError::AnchorWithoutParent(c))?;
        let grand = self
            .rt
            .parent(p)
            .ok_or(ReductionError::AnchorWithoutParent(p))?;

        if self.live_children[p] == 1 {
            self.kill(p);
            self.kill(c);
            self.live_children[grand] -= 1;
            return Ok(Some(ReductionStep {
                kind: StepKind::LeafPair,
                anchor: p,
                removed: vec![p, c],
                h_edges: vec![(p, c)],
            }));
        }

        let mut removed = Vec::with_capacity(self.live_children[p]);
        for &w in self.rt.children(p) {
            if !self.alive[w] {
                continue;
            }
            if self.live_children[w] != 0 {
                return Err(ReductionError::DeepestParentHasInnerChild { parent: p, child: w });
            }
            removed.push(w);
        }
        for &w in &removed {
            self.kill(w);
        }
        self.live_children[p] = 0;
        let h_edges = removed.iter().map(|&w| (w, p)).collect();
        Ok(Some(ReductionStep {
            kind: StepKind::LeafBunch,
            anchor: p,
            removed,
            h_edges,
        }))
    }

    /// The irreducible remainder. Only meaningful once [`step`](Self::step)
    /// has returned `None`.
    pub fn terminal(&self) -> Terminal {
        let r = self.rt.root();
        match self.rt.children(r).iter().find(|&&c| self.alive[c]) {
            Some(&c) if self.remaining == 2 => Terminal::K2(r, c),
            _ => Terminal::K1(r),
        }
    }
}

/// Reduces `rt` exhaustively.
pub fn reduce(rt: &RootedTree) -> ReductionTrace {
    let mut reducer = Reducer::new(rt);
    let mut steps = Vec::new();
    while let Some(step) = reducer
        .step()
        .unwrap_or_else(|e| panic!("reduction invariant violated: {e}"))
    {
        steps.push(step);
    }
    ReductionTrace {
        steps,
        terminal: reducer.terminal(),
    }
}

/// Eternal domination number of `t`, rooted at its smallest-index leaf,
/// together with the reduction record.
pub fn compute_edn(t: &Tree) -> (usize, ReductionTrace) {
    let rt = RootedTree::root_at(t.clone(), None).expect("default root is valid");
    let trace = reduce(&rt);
    (trace.edn(), trace)
}
