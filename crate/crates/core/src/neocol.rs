//! Nice neo-colonizations of rooted trees.
//!
//! A neo-colonization partitions the vertices into connected parts. A part
//! that induces a clique (`K1` or `K2` in a tree) weighs 1, any other part
//! weighs one more than its minimum connected dominating set, which in a
//! tree is the set of non-leaf vertices. The partition is *nice* when every
//! part induces a shrubbery (no vertex of degree exactly two) and the part's
//! vertex closest to the root, its *top*, is a leaf of the part.
//!
//! [`build_nice_neocol`] takes the parts to be the connected components of
//! the auxiliary graph recorded by the reductions, plus the terminal `K2`
//! edge. Its total weight equals the eternal domination number.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::dsu::Dsu;
use crate::reduction::{reduce, ReductionTrace, Terminal};
use crate::tree::{RootedTree, Vertex};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NeoColonization {
    part_of: Vec<usize>,
    parts: Vec<Vec<Vertex>>,
    top: Vec<Vertex>,
    weight: Vec<usize>,
    root_part: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NeoColError {
    /// A vertex is missing from the partition or appears twice.
    NotAPartition(Vertex),
    NotNice(Vec<Violation>),
}

impl fmt::Display for NeoColError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NeoColError::NotAPartition(v) => {
                write!(f, "vertex {v} is not covered exactly once")
            }
            NeoColError::NotNice(vs) => {
                write!(f, "not a nice neo-colonization:")?;
                for v in vs {
                    write!(f, " {v};")?;
                }
                Ok(())
            }
        }
    }
}

impl core::error::Error for NeoColError {}

impl NeoColonization {
    /// Builds a neo-colonization from explicit parts.
    ///
    /// Parts are renumbered by their smallest vertex. Tops and weights are
    /// computed from the rooted tree; niceness is not checked here, see
    /// [`validate_nice`].
    pub fn from_parts(rt: &RootedTree, parts: Vec<Vec<Vertex>>) -> Result<Self, NeoColError> {
        let n = rt.n();
        let mut part_of = vec![usize::MAX; n];
        for (i, part) in parts.iter().enumerate() {
            for &v in part {
                if v >= n || part_of[v] != usize::MAX {
                    return Err(NeoColError::NotAPartition(v));
                }
                part_of[v] = i;
            }
        }
        if let Some(v) = part_of.iter().position(|&p| p == usize::MAX) {
            return Err(NeoColError::NotAPartition(v));
        }
        Ok(Self::from_labels(rt, &part_of))
    }

    /// `labels[v]` is any identifier shared exactly by the vertices of one part.
    fn from_labels(rt: &RootedTree, labels: &[usize]) -> Self {
        let n = rt.n();
        let mut relabel = vec![usize::MAX; n.max(labels.iter().copied().max().map_or(0, |m| m + 1))];
        let mut parts: Vec<Vec<Vertex>> = Vec::new();
        let mut part_of = vec![0; n];
        for v in 0..n {
            let l = labels[v];
            if relabel[l] == usize::MAX {
                relabel[l] = parts.len();
                parts.push(Vec::new());
            }
            part_of[v] = relabel[l];
            parts[relabel[l]].push(v);
        }

        let top: Vec<Vertex> = parts
            .iter()
            .map(|p| {
                *p.iter()
                    .min_by_key(|&&v| (rt.depth(v), v))
                    .expect("parts are non-empty")
            })
            .collect();

        let tree = rt.tree();
        let weight = parts
            .iter()
            .map(|p| {
                if p.len() <= 2 {
                    1
                } else {
                    let inner = p
                        .iter()
                        .filter(|&&v| {
                            tree.neighbors(v)
                                .iter()
                                .filter(|&&w| part_of[w] == part_of[v])
                                .count()
                                >= 2
                        })
                        .count();
                    inner + 1
                }
            })
            .collect();

        NeoColonization {
            root_part: part_of[rt.root()],
            part_of,
            parts,
            top,
            weight,
        }
    }

    pub fn part_count(&self) -> usize {
        self.parts.len()
    }

    pub fn part_of(&self, v: Vertex) -> usize {
        self.part_of[v]
    }

    /// Vertices of part `p`, ascending.
    pub fn part(&self, p: usize) -> &[Vertex] {
        &self.parts[p]
    }

    pub fn parts(&self) -> &[Vec<Vertex>] {
        &self.parts
    }

    /// Minimum-depth vertex of part `p`.
    pub fn top(&self, p: usize) -> Vertex {
        self.top[p]
    }

    pub fn weight(&self, p: usize) -> usize {
        self.weight[p]
    }

    pub fn total_weight(&self) -> usize {
        self.weight.iter().sum()
    }

    pub fn root_part(&self) -> usize {
        self.root_part
    }

    /// Children of `v` that belong to the same part as `v`.
    pub fn part_children<'a>(
        &'a self,
        rt: &'a RootedTree,
        v: Vertex,
    ) -> impl Iterator<Item = Vertex> + 'a {
        let p = self.part_of[v];
        rt.children(v).iter().copied().filter(move |&c| self.part_of[c] == p)
    }

    /// Number of reduction steps whose auxiliary edges landed in each part.
    pub fn steps_per_part(&self, trace: &ReductionTrace) -> Vec<usize> {
        let mut counts = vec![0; self.parts.len()];
        for step in &trace.steps {
            counts[self.part_of[step.anchor]] += 1;
        }
        counts
    }
}

/// Builds the nice neo-colonization induced by a reduction record of `rt`.
pub fn build_nice_neocol(
    rt: &RootedTree,
    trace: &ReductionTrace,
) -> Result<NeoColonization, NeoColError> {
    let n = rt.n();
    let mut dsu = Dsu::new(n);
    for step in &trace.steps {
        for &(a, b) in &step.h_edges {
            dsu.union(a, b);
        }
    }
    if let Terminal::K2(a, b) = trace.terminal {
        dsu.union(a, b);
    }
    let labels: Vec<usize> = (0..n).map(|v| dsu.find(v)).collect();
    let nc = NeoColonization::from_labels(rt, &labels);

    let report = check_structure(&nc, rt);
    if report.is_empty() {
        Ok(nc)
    } else {
        Err(NeoColError::NotNice(report))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VertexClass {
    /// A part vertex with no children inside its part.
    Leaf,
    /// The top of a part.
    Joining,
    /// A part vertex with at least two children inside its part.
    Inner,
}

impl VertexClass {
    pub fn letter(self) -> char {
        match self {
            VertexClass::Leaf => 'L',
            VertexClass::Joining => 'J',
            VertexClass::Inner => 'I',
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexClasses {
    class: Vec<VertexClass>,
}

impl VertexClasses {
    pub fn of(&self, v: Vertex) -> VertexClass {
        self.class[v]
    }

    pub fn as_slice(&self) -> &[VertexClass] {
        &self.class
    }

    pub fn count(&self, c: VertexClass) -> usize {
        self.class.iter().filter(|&&k| k == c).count()
    }
}

/// Labels every vertex L, J or I by its children inside its own part.
///
/// Tops are always J, including a singleton root part.
pub fn classify_vertices(nc: &NeoColonization, rt: &RootedTree) -> VertexClasses {
    let class = (0..rt.n())
        .map(|v| {
            if nc.top(nc.part_of(v)) == v {
                VertexClass::Joining
            } else if nc.part_children(rt, v).next().is_none() {
                VertexClass::Leaf
            } else {
                VertexClass::Inner
            }
        })
        .collect();
    VertexClasses { class }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Disconnected { part: usize },
    NotShrubbery { part: usize, vertex: Vertex },
    TopNotPartLeaf { part: usize, top: Vertex },
    WrongWeight { part: usize, stored: usize, expected: usize },
    TotalWeight { total: usize, edn: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::Disconnected { part } => write!(f, "part {part} is not connected"),
            Violation::NotShrubbery { part, vertex } => write!(
                f,
                "part {part} is not a shrubbery: vertex {vertex} has part-degree 2"
            ),
            Violation::TopNotPartLeaf { part, top } => {
                write!(f, "top {top} of part {part} is not a leaf of the part")
            }
            Violation::WrongWeight { part, stored, expected } => {
                write!(f, "part {part} weight {stored}, expected {expected}")
            }
            Violation::TotalWeight { total, edn } => {
                write!(f, "total weight {total} differs from EDN {edn}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NiceReport {
    pub violations: Vec<Violation>,
}

impl NiceReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn describe(&self) -> String {
        use core::fmt::Write;
        let mut s = String::new();
        for v in &self.violations {
            let _ = writeln!(s, "{v}");
        }
        s
    }
}

/// Connectivity, shrubbery, top and weight checks, without the total.
fn check_structure(nc: &NeoColonization, rt: &RootedTree) -> Vec<Violation> {
    let tree = rt.tree();
    let mut out = Vec::new();
    for (p, part) in nc.parts().iter().enumerate() {
        // A vertex set of a rooted tree is connected iff exactly one of its
        // vertices has its parent outside the set.
        let entries = part
            .iter()
            .filter(|&&v| rt.parent(v).is_none_or(|u| nc.part_of(u) != p))
            .count();
        if entries != 1 {
            out.push(Violation::Disconnected { part: p });
            continue;
        }
        let part_degree =
            |v: Vertex| tree.neighbors(v).iter().filter(|&&w| nc.part_of(w) == p).count();
        for &v in part {
            if part_degree(v) == 2 {
                out.push(Violation::NotShrubbery { part: p, vertex: v });
            }
        }
        let top = nc.top(p);
        if part_degree(top) > 1 {
            out.push(Violation::TopNotPartLeaf { part: p, top });
        }
        let expected = if part.len() <= 2 {
            1
        } else {
            part.iter().filter(|&&v| part_degree(v) >= 2).count() + 1
        };
        if nc.weight(p) != expected {
            out.push(Violation::WrongWeight {
                part: p,
                stored: nc.weight(p),
                expected,
            });
        }
    }
    out
}

/// Checks every nice neo-colonization invariant, including that the total
/// weight equals the eternal domination number computed by reduction.
pub fn validate_nice(nc: &NeoColonization, rt: &RootedTree) -> NiceReport {
    let mut violations = check_structure(nc, rt);
    let edn = reduce(rt).edn();
    let total = nc.total_weight();
    if total != edn {
        violations.push(Violation::TotalWeight { total, edn });
    }
    NiceReport { violations }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::double_star;
    use crate::tree::Tree;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn build(t: Tree, root: Option<Vertex>) -> (RootedTree, ReductionTrace, NeoColonization) {
        let rt = RootedTree::root_at(t, root).unwrap();
        let trace = reduce(&rt);
        let nc = build_nice_neocol(&rt, &trace).unwrap();
        (rt, trace, nc)
    }

    #[test]
    fn p2_is_one_clique_part() {
        let (_, _, nc) = build(Tree::path(2), None);
        assert_eq!(nc.parts(), &[vec![0, 1]]);
        assert_eq!(nc.weight(0), 1);
        assert_eq!(nc.top(0), 0);
    }

    #[test]
    fn double_star_is_a_single_part() {
        let (rt, trace, nc) = build(double_star(), Some(2));
        assert_eq!(nc.parts(), &[vec![0, 1, 2, 3, 4, 5]]);
        assert_eq!(nc.top(0), 2);
        assert_eq!(nc.weight(0), 3);
        let mut h: Vec<(usize, usize)> = trace
            .steps
            .iter()
            .flat_map(|s| s.h_edges.iter().copied())
            .collect();
        h.push((2, 0));
        assert_eq!(h, vec![(4, 1), (5, 1), (1, 0), (3, 0), (2, 0)]);
        assert!(validate_nice(&nc, &rt).passed());
    }

    #[test]
    fn p4_splits_into_two_edges() {
        let (rt, _, nc) = build(Tree::path(4), None);
        assert_eq!(nc.parts(), &[vec![0, 1], vec![2, 3]]);
        assert_eq!(nc.total_weight(), 2);
        assert!(validate_nice(&nc, &rt).passed());
    }

    #[test]
    fn classes_on_double_star() {
        let (rt, _, nc) = build(double_star(), Some(2));
        let cls = classify_vertices(&nc, &rt);
        use VertexClass::*;
        assert_eq!(cls.as_slice(), &[Inner, Inner, Joining, Leaf, Leaf, Leaf]);
    }

    #[test]
    fn classes_on_p2() {
        let (rt, _, nc) = build(Tree::path(2), None);
        let cls = classify_vertices(&nc, &rt);
        assert_eq!(cls.as_slice(), &[VertexClass::Joining, VertexClass::Leaf]);
    }

    #[test]
    fn singleton_root_part_is_joining() {
        let (rt, _, nc) = build(Tree::path(3), None);
        assert_eq!(nc.parts(), &[vec![0], vec![1, 2]]);
        let cls = classify_vertices(&nc, &rt);
        assert_eq!(cls.of(0), VertexClass::Joining);
        assert_eq!(cls.of(1), VertexClass::Joining);
        assert_eq!(cls.of(2), VertexClass::Leaf);
    }

    #[test]
    fn path_split_with_degree_two_vertex_is_not_nice() {
        let rt = RootedTree::root_at(Tree::path(4), None).unwrap();
        let nc = NeoColonization::from_parts(&rt, vec![vec![0], vec![1, 2, 3]]).unwrap();
        let report = validate_nice(&nc, &rt);
        assert!(report
            .violations
            .contains(&Violation::NotShrubbery { part: 1, vertex: 2 }));
    }

    #[test]
    fn two_stars_overweigh_double_star() {
        let rt = RootedTree::root_at(double_star(), Some(2)).unwrap();
        let nc = NeoColonization::from_parts(&rt, vec![vec![2, 0, 3], vec![1, 4, 5]]).unwrap();
        assert_eq!(nc.weight(0), 2);
        assert_eq!(nc.weight(1), 2);
        let report = validate_nice(&nc, &rt);
        assert!(report
            .violations
            .contains(&Violation::TotalWeight { total: 4, edn: 3 }));
    }

    #[test]
    fn from_parts_rejects_overlap() {
        let rt = RootedTree::root_at(Tree::path(3), None).unwrap();
        assert_eq!(
            NeoColonization::from_parts(&rt, vec![vec![0, 1], vec![1, 2]]),
            Err(NeoColError::NotAPartition(1))
        );
        assert_eq!(
            NeoColonization::from_parts(&rt, vec![vec![0, 1]]),
            Err(NeoColError::NotAPartition(2))
        );
    }

    #[test]
    fn random_trees_satisfy_all_invariants() {
        use crate::reduction::StepKind;
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let n = rng.gen_range(4..=60);
            let parents: Vec<usize> = (1..n).map(|i| rng.gen_range(0..i)).collect();
            let (rt, trace, nc) = build(Tree::from_parents(&parents).unwrap(), None);
            assert!(validate_nice(&nc, &rt).passed());
            assert_eq!(nc.total_weight(), trace.edn());

            let cls = classify_vertices(&nc, &rt);
            let rho = nc.steps_per_part(&trace);
            for (p, &steps) in rho.iter().enumerate() {
                let inner = nc
                    .part(p)
                    .iter()
                    .filter(|&&v| cls.of(v) == VertexClass::Inner)
                    .count();
                let joining = nc
                    .part(p)
                    .iter()
                    .filter(|&&v| cls.of(v) == VertexClass::Joining)
                    .count();
                assert_eq!(joining, 1);
                assert_eq!(inner + 1, nc.weight(p));
                if p == nc.root_part() {
                    assert_eq!(nc.weight(p), steps + 1);
                } else {
                    assert_eq!(nc.weight(p), steps);
                    let pairs = trace
                        .steps
                        .iter()
                        .filter(|s| s.kind == StepKind::LeafPair && nc.part_of(s.anchor) == p)
                        .count();
                    assert_eq!(pairs, 1);
                    // The part's leaf pair is its last step and is anchored at the top.
                    let last = trace
                        .steps
                        .iter()
                        .rev()
                        .find(|s| nc.part_of(s.anchor) == p)
                        .unwrap();
                    assert_eq!(last.kind, StepKind::LeafPair);
                    assert_eq!(last.anchor, nc.top(p));
                }
                for &v in nc.part(p) {
                    if cls.of(v) == VertexClass::Inner {
                        assert!(nc.part_children(&rt, v).count() >= 2);
                    }
                }
            }
        }
    }
}
