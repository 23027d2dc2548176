//! Non-isomorphic free trees.
//!
//! Trees on `n` vertices are grown from those on `n - 1` by attaching a leaf
//! everywhere, and duplicates are rejected by a canonical encoding: the
//! parenthesis string of the tree rooted at its center, taking the smaller
//! string when there are two centers.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use crate::tree::{Tree, Vertex};

/// Isomorphism-invariant encoding of a free tree.
pub fn canonical_form(t: &Tree) -> Vec<u8> {
    centers(t)
        .into_iter()
        .map(|c| rooted_encoding(t, c))
        .min()
        .expect("a tree has a center")
}

/// The one or two centers, found by peeling leaves.
pub fn centers(t: &Tree) -> Vec<Vertex> {
    let n = t.n();
    if n <= 2 {
        return (0..n).collect();
    }
    let mut degree: Vec<usize> = (0..n).map(|v| t.degree(v)).collect();
    let mut layer: Vec<Vertex> = (0..n).filter(|&v| degree[v] == 1).collect();
    let mut left = n;
    while left > 2 {
        left -= layer.len();
        let mut next = Vec::new();
        for &v in &layer {
            for &w in t.neighbors(v) {
                degree[w] -= 1;
                if degree[w] == 1 {
                    next.push(w);
                }
            }
        }
        layer = next;
    }
    layer.sort_unstable();
    layer
}

/// AHU string of `t` rooted at `root`: `(` children sorted `)`.
pub fn rooted_encoding(t: &Tree, root: Vertex) -> Vec<u8> {
    let n = t.n();
    let mut parent = vec![usize::MAX; n];
    let mut order = vec![root];
    parent[root] = root;
    let mut i = 0;
    while i < order.len() {
        let u = order[i];
        i += 1;
        for &w in t.neighbors(u) {
            if parent[w] == usize::MAX {
                parent[w] = u;
                order.push(w);
            }
        }
    }
    let mut code: Vec<Vec<u8>> = vec![Vec::new(); n];
    let mut kids: Vec<Vec<Vec<u8>>> = vec![Vec::new(); n];
    for &v in order.iter().rev() {
        let mut parts = core::mem::take(&mut kids[v]);
        parts.sort_unstable();
        let mut s = vec![b'('];
        for p in parts {
            s.extend(p);
        }
        s.push(b')');
        if v == root {
            code[v] = s;
        } else {
            kids[parent[v]].push(s);
        }
    }
    core::mem::take(&mut code[root])
}

/// All pairwise non-isomorphic trees on exactly `n` vertices.
pub fn nonisomorphic_trees(n: usize) -> Vec<Tree> {
    match n {
        0 => Vec::new(),
        1 => vec![Tree::single()],
        _ => {
            let mut seen = BTreeSet::new();
            let mut out = Vec::new();
            for smaller in nonisomorphic_trees(n - 1) {
                for v in 0..n - 1 {
                    let mut edges = smaller.edges().to_vec();
                    edges.push((v, n - 1));
                    let t = Tree::new(n, edges).expect("leaf attachment keeps a tree");
                    if seen.insert(canonical_form(&t)) {
                        out.push(t);
                    }
                }
            }
            out
        }
    }
}
