//! Trees, rooted views and structural queries.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::dsu::Dsu;

pub type Vertex = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TreeError {
    Empty,
    /// `edge` is the zero-based position of the offending edge in the input.
    VertexOutOfRange { edge: usize, vertex: Vertex },
    SelfLoop { edge: usize },
    DuplicateEdge { edge: usize },
    Cycle { edge: usize },
    WrongEdgeCount { expected: usize, found: usize },
    NotALeaf(Vertex),
    NoSuchVertex(Vertex),
}

impl fmt::Display for TreeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TreeError::Empty => write!(f, "a tree needs at least one vertex"),
            TreeError::VertexOutOfRange { edge, vertex } => {
                write!(f, "edge {edge}: vertex {vertex} out of range")
            }
            TreeError::SelfLoop { edge } => write!(f, "edge {edge}: self-loop"),
            TreeError::DuplicateEdge { edge } => write!(f, "edge {edge}: duplicate edge"),
            TreeError::Cycle { edge } => write!(f, "edge {edge}: closes a cycle"),
            TreeError::WrongEdgeCount { expected, found } => {
                write!(f, "expected {expected} edges, found {found}")
            }
            TreeError::NotALeaf(v) => write!(f, "vertex {v} is not a leaf"),
            TreeError::NoSuchVertex(v) => write!(f, "vertex {v} does not exist"),
        }
    }
}

impl core::error::Error for TreeError {}

/// An unrooted tree on vertices `0..n`.
///
/// Edges are stored normalized as `(min, max)` and sorted, adjacency lists
/// are sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tree {
    n: usize,
    edges: Vec<(Vertex, Vertex)>,
    adj: Vec<Vec<Vertex>>,
}

impl Tree {
    /// Builds a tree, rejecting anything that is not a spanning tree on `0..n`.
    pub fn new<I>(n: usize, edges: I) -> Result<Tree, TreeError>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        if n == 0 {
            return Err(TreeError::Empty);
        }
        let mut dsu = Dsu::new(n);
        let mut list = Vec::with_capacity(n - 1);
        let mut adj = vec![Vec::new(); n];
        for (i, (u, v)) in edges.into_iter().enumerate() {
            for w in [u, v] {
                if w >= n {
                    return Err(TreeError::VertexOutOfRange { edge: i, vertex: w });
                }
            }
            if u == v {
                return Err(TreeError::SelfLoop { edge: i });
            }
            if !dsu.union(u, v) {
                // Already connected: either this exact edge was seen or it closes a cycle.
                let dup = adj[u].contains(&v);
                return Err(if dup {
                    TreeError::DuplicateEdge { edge: i }
                } else {
                    TreeError::Cycle { edge: i }
                });
            }
            adj[u].push(v);
            adj[v].push(u);
            list.push((u.min(v), u.max(v)));
        }
        if list.len() != n - 1 {
            return Err(TreeError::WrongEdgeCount {
                expected: n - 1,
                found: list.len(),
            });
        }
        list.sort_unstable();
        for a in &mut adj {
            a.sort_unstable();
        }
        Ok(Tree { n, edges: list, adj })
    }

    /// The tree in which vertex `i` (for `i ≥ 1`) hangs below `parents[i - 1] < i`.
    pub fn from_parents(parents: &[Vertex]) -> Result<Tree, TreeError> {
        let n = parents.len() + 1;
        Tree::new(n, parents.iter().enumerate().map(|(i, &p)| (p, i + 1)))
    }

    pub fn single() -> Tree {
        Tree::new(1, []).expect("K1")
    }

    /// Path `0 – 1 – … – n-1`.
    pub fn path(n: usize) -> Tree {
        Tree::new(n, (1..n).map(|i| (i - 1, i))).expect("path")
    }

    /// Star `K_{1,m}` with center 0.
    pub fn star(m: usize) -> Tree {
        Tree::new(m + 1, (1..=m).map(|i| (0, i))).expect("star")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Edges as `(min, max)` pairs in ascending order.
    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn is_leaf(&self, v: Vertex) -> bool {
        self.adj[v].len() == 1
    }

    pub fn adjacent(&self, u: Vertex, v: Vertex) -> bool {
        u < self.n && self.adj[u].binary_search(&v).is_ok()
    }

    /// Edge distance from `src` to every vertex.
    pub fn distances_from(&self, src: Vertex) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n];
        let mut queue = VecDeque::new();
        dist[src] = 0;
        queue.push_back(src);
        while let Some(u) = queue.pop_front() {
            for &w in &self.adj[u] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Number of edges on a longest path, by double sweep.
    pub fn diameter(&self) -> usize {
        let first = self.distances_from(0);
        let far = argmax(&first);
        let second = self.distances_from(far);
        second[argmax(&second)]
    }

    pub fn smallest_leaf(&self) -> Vertex {
        (0..self.n).find(|&v| self.is_leaf(v)).unwrap_or(0)
    }
}

fn argmax(values: &[usize]) -> usize {
    let mut best = 0;
    for (i, &d) in values.iter().enumerate() {
        if d > values[best] {
            best = i;
        }
    }
    best
}

/// A tree rooted at one of its leaves.
///
/// Besides parent/children/depth this keeps a BFS order (parents before
/// children) for bottom-up passes and preorder intervals for O(1) subtree
/// membership.
#[derive(Debug, Clone)]
pub struct RootedTree {
    tree: Tree,
    root: Vertex,
    parent: Vec<Option<Vertex>>,
    children: Vec<Vec<Vertex>>,
    depth: Vec<usize>,
    order: Vec<Vertex>,
    enter: Vec<usize>,
    size: Vec<usize>,
}

impl RootedTree {
    /// Roots `tree` at `preferred`, or at its smallest-index leaf.
    ///
    /// A single vertex is rooted at 0 even though it is not a leaf.
    pub fn root_at(tree: Tree, preferred: Option<Vertex>) -> Result<RootedTree, TreeError> {
        let n = tree.n();
        let root = match preferred {
            Some(r) if r >= n => return Err(TreeError::NoSuchVertex(r)),
            Some(r) if n >= 2 && !tree.is_leaf(r) => return Err(TreeError::NotALeaf(r)),
            Some(r) => r,
            None => tree.smallest_leaf(),
        };

        let mut parent = vec![None; n];
        let mut depth = vec![0; n];
        let mut order = Vec::with_capacity(n);
        let mut seen = vec![false; n];
        seen[root] = true;
        order.push(root);
        let mut head = 0;
        while head < order.len() {
            let u = order[head];
            head += 1;
            for &w in tree.neighbors(u) {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some(u);
                    depth[w] = depth[u] + 1;
                    order.push(w);
                }
            }
        }
        let children: Vec<Vec<Vertex>> = (0..n)
            .map(|v| {
                tree.neighbors(v)
                    .iter()
                    .copied()
                    .filter(|&w| parent[v] != Some(w))
                    .collect()
            })
            .collect();

        let mut size = vec![1; n];
        for &v in order.iter().rev() {
            if let Some(p) = parent[v] {
                size[p] += size[v];
            }
        }
        // Preorder entry times with children visited in ascending order.
        let mut enter = vec![0; n];
        let mut stack = vec![root];
        let mut clock = 0;
        while let Some(v) = stack.pop() {
            enter[v] = clock;
            clock += 1;
            stack.extend(children[v].iter().rev());
        }

        Ok(RootedTree {
            tree,
            root,
            parent,
            children,
            depth,
            order,
            enter,
            size,
        })
    }

    pub fn tree(&self) -> &Tree {
        &self.tree
    }

    pub fn n(&self) -> usize {
        self.tree.n()
    }

    pub fn root(&self) -> Vertex {
        self.root
    }

    pub fn parent(&self, v: Vertex) -> Option<Vertex> {
        self.parent[v]
    }

    /// Children in ascending order.
    pub fn children(&self, v: Vertex) -> &[Vertex] {
        &self.children[v]
    }

    pub fn depth(&self, v: Vertex) -> usize {
        self.depth[v]
    }

    pub fn depths(&self) -> &[usize] {
        &self.depth
    }

    /// BFS order from the root; every parent precedes its children.
    pub fn bfs_order(&self) -> &[Vertex] {
        &self.order
    }

    pub fn subtree_size(&self, v: Vertex) -> usize {
        self.size[v]
    }

    /// Whether `x` lies in the subtree `T(v)`.
    pub fn in_subtree(&self, x: Vertex, v: Vertex) -> bool {
        self.enter[v] <= self.enter[x] && self.enter[x] < self.enter[v] + self.size[v]
    }

    /// The unique path from `u` to `v`, both endpoints included.
    pub fn path(&self, u: Vertex, v: Vertex) -> Vec<Vertex> {
        let (mut a, mut b) = (u, v);
        let mut front = Vec::new();
        let mut back = Vec::new();
        while a != b {
            if self.depth[a] >= self.depth[b] {
                front.push(a);
                a = self.parent[a].expect("non-root");
            } else {
                back.push(b);
                b = self.parent[b].expect("non-root");
            }
        }
        front.push(a);
        front.extend(back.into_iter().rev());
        front
    }
}
