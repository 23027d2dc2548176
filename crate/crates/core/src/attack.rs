//! The deficit-guided attacker.
//!
//! `CN(v, a)` is the number of guards the canonical defender keeps on `v`
//! right after an attack on `a`:
//!
//! ```text
//! CN(v, a) = 1  if v = a
//!            1  if v is inner
//!            1  if v is joining and a is not a leaf of v's part
//!            0  otherwise
//! ```
//!
//! The subtree deficit `DFT(v, a, C)` is the number of guards of `C` in the
//! subtree `T(v)` minus the sum of `CN(·, a)` over it. With fewer than
//! `EDN(T)` guards the root is always deficient. The attacker looks at the
//! deepest deficient vertex `v` (which is then unguarded, with balanced child
//! subtrees) and attacks a leaf of `v`'s part inside a child subtree that does
//! not hold the part's extra guard. No guard can enter that subtree through
//! the empty `v`, so after any answer the deepest deficient vertex is
//! strictly deeper. Once it is a leaf, the previous attack was not defended.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::analysis::Analysis;
use crate::defense::GuardConfig;
use crate::neocol::VertexClass;
use crate::tree::Vertex;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Attack,
    /// The previous attack already won: its target is unoccupied.
    AlreadyWon,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AttackError {
    /// No subtree is deficient, i.e. the configuration is not smaller than
    /// the canonical one. The guarantee needs at most `EDN(T) - 1` guards.
    NoDeficientVertex,
    NoSuchVertex(Vertex),
    /// A structural property of the deepest deficient vertex failed.
    Invariant(&'static str),
}

impl fmt::Display for AttackError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AttackError::NoDeficientVertex => {
                write!(f, "no deficient vertex: configuration has at least EDN guards")
            }
            AttackError::NoSuchVertex(v) => write!(f, "vertex {v} does not exist"),
            AttackError::Invariant(what) => write!(f, "attacker invariant violated: {what}"),
        }
    }
}

impl core::error::Error for AttackError {}

/// `CN(v, a)`.
pub fn canonical_number(an: &Analysis, v: Vertex, a: Vertex) -> i64 {
    let nc = &an.neocol;
    let hit = v == a
        || match an.classes.of(v) {
            VertexClass::Inner => true,
            VertexClass::Joining => {
                !(nc.part_of(a) == nc.part_of(v) && an.classes.of(a) == VertexClass::Leaf)
            }
            VertexClass::Leaf => false,
        };
    hit as i64
}

/// `CN_T(v, a)` for every `v`, in one bottom-up pass.
pub fn subtree_canonical_numbers(an: &Analysis, a: Vertex) -> Vec<i64> {
    let rt = &an.rooted;
    let mut cn: Vec<i64> = (0..an.n()).map(|v| canonical_number(an, v, a)).collect();
    for &v in rt.bfs_order().iter().rev() {
        if let Some(p) = rt.parent(v) {
            cn[p] += cn[v];
        }
    }
    cn
}

/// `g_T(v, C)` for every `v`.
pub fn subtree_guard_counts(an: &Analysis, c: &GuardConfig) -> Vec<i64> {
    let rt = &an.rooted;
    let mut g: Vec<i64> = c.occupancy(an.n()).into_iter().map(i64::from).collect();
    for &v in rt.bfs_order().iter().rev() {
        if let Some(p) = rt.parent(v) {
            g[p] += g[v];
        }
    }
    g
}

/// `DFT(v, a, C)` for every `v`.
pub fn subtree_deficits(an: &Analysis, c: &GuardConfig, a: Vertex) -> Vec<i64> {
    let cn = subtree_canonical_numbers(an, a);
    let g = subtree_guard_counts(an, c);
    g.iter().zip(&cn).map(|(g, cn)| g - cn).collect()
}

/// `DFT(v, a, C)` for a single vertex.
pub fn subtree_deficit(an: &Analysis, c: &GuardConfig, v: Vertex, a: Vertex) -> i64 {
    subtree_deficits(an, c, a)[v]
}

/// Deficient vertex of maximum depth, smallest id on ties.
pub fn deepest_deficient(an: &Analysis, deficits: &[i64]) -> Option<Vertex> {
    let rt = &an.rooted;
    (0..an.n())
        .filter(|&v| deficits[v] < 0)
        .min_by_key(|&v| (core::cmp::Reverse(rt.depth(v)), v))
}

/// Everything that went into one attacker decision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttackDiagnostic {
    /// The reference attack `a`.
    pub reference: Vertex,
    pub deficits: Vec<i64>,
    /// Deepest deficient vertex.
    pub deepest: Vertex,
    /// Canonical location of the extra guard of `deepest`'s part.
    pub extra: Option<Vertex>,
    /// Part-child of `deepest` whose subtree is attacked.
    pub child: Option<Vertex>,
    pub target: Vertex,
    pub verdict: Verdict,
}

/// Attacker bookkeeping for one game: the most recent attack.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AttackerState {
    reference: Option<Vertex>,
}

impl AttackerState {
    pub fn new() -> Self {
        AttackerState::default()
    }

    pub fn reference_attack(&self) -> Option<Vertex> {
        self.reference
    }

    /// Chooses the next attack against the current configuration `c`.
    pub fn next_attack(
        &mut self,
        an: &Analysis,
        c: &GuardConfig,
    ) -> Result<(Vertex, Verdict), AttackError> {
        match self.explain(an, c)? {
            Some(d) => Ok((d.target, d.verdict)),
            None => Ok((an.rooted.root(), Verdict::Attack)),
        }
    }

    /// Like [`next_attack`](Self::next_attack) but returns the full
    /// diagnostic. `None` means `c` is empty and the root is attacked.
    pub fn explain(
        &mut self,
        an: &Analysis,
        c: &GuardConfig,
    ) -> Result<Option<AttackDiagnostic>, AttackError> {
        let n = an.n();
        if let Some(v) = c.max_vertex().filter(|&v| v >= n) {
            return Err(AttackError::NoSuchVertex(v));
        }
        let a = match (self.reference, c.first()) {
            (Some(a), _) => a,
            (None, Some(first)) => first,
            (None, None) => {
                self.reference = Some(an.rooted.root());
                return Ok(None);
            }
        };

        let deficits = subtree_deficits(an, c, a);
        let v = deepest_deficient(an, &deficits).ok_or(AttackError::NoDeficientVertex)?;
        let rt = &an.rooted;
        let nc = &an.neocol;

        if c.contains(v) || canonical_number(an, v, a) != 1 {
            return Err(AttackError::Invariant("deepest deficient vertex must have DF = -1"));
        }
        if rt.children(v).iter().any(|&d| deficits[d] != 0) {
            return Err(AttackError::Invariant("children of the deepest deficient vertex must be balanced"));
        }

        let mut diag = AttackDiagnostic {
            reference: a,
            deepest: v,
            deficits,
            extra: None,
            child: None,
            target: v,
            verdict: Verdict::AlreadyWon,
        };
        if an.classes.of(v) == VertexClass::Leaf {
            // CN(v, a) = 1 for a part leaf only when v = a.
            return Ok(Some(diag));
        }
        diag.verdict = Verdict::Attack;

        let part = nc.part_of(v);
        let x = if nc.part_of(a) == part && an.classes.of(a) == VertexClass::Leaf {
            a
        } else {
            nc.top(part)
        };
        diag.extra = Some(x);

        // A singleton root part has no part-children; its top is attacked
        // directly, which drains one guard out of the single child subtree.
        if nc.part_children(rt, v).next().is_none() {
            self.reference = Some(v);
            return Ok(Some(diag));
        }

        let d = nc
            .part_children(rt, v)
            .find(|&d| !rt.in_subtree(x, d))
            .ok_or(AttackError::Invariant("every part-child subtree holds the extra guard"))?;
        let b = part_leaves_below(an, d)
            .into_iter()
            .min()
            .ok_or(AttackError::Invariant("chosen subtree has no leaf of the part"))?;
        diag.child = Some(d);
        diag.target = b;
        self.reference = Some(b);
        Ok(Some(diag))
    }
}

/// Leaves of `d`'s part inside `T(d)`.
fn part_leaves_below(an: &Analysis, d: Vertex) -> Vec<Vertex> {
    let mut out = Vec::new();
    let mut stack = vec![d];
    while let Some(u) = stack.pop() {
        if an.classes.of(u) == VertexClass::Leaf {
            out.push(u);
        }
        stack.extend(an.neocol.part_children(&an.rooted, u));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::double_star;
    use crate::tree::Tree;

    fn ds() -> Analysis {
        Analysis::with_root(double_star(), Some(2)).unwrap()
    }

    fn set(vs: &[Vertex]) -> GuardConfig {
        vs.iter().copied().collect()
    }

    #[test]
    fn canonical_numbers_on_double_star() {
        let an = ds();
        assert_eq!(canonical_number(&an, 0, 3), 1);
        assert_eq!(canonical_number(&an, 2, 3), 0);
        assert_eq!(canonical_number(&an, 3, 3), 1);
        assert_eq!(canonical_number(&an, 4, 3), 0);
        assert_eq!(canonical_number(&an, 2, 0), 1);
    }

    #[test]
    fn deficits_on_double_star() {
        let an = ds();
        let c = set(&[0, 1]);
        assert_eq!(subtree_deficit(&an, &c, 2, 0), -1);
        assert_eq!(subtree_deficit(&an, &c, 0, 0), 0);
    }

    #[test]
    fn canonical_config_is_balanced() {
        let an = ds();
        let c = set(&[0, 1, 2]);
        for a in [0, 1, 2] {
            assert!(subtree_deficits(&an, &c, a).iter().all(|&d| d == 0));
        }
    }

    #[test]
    fn first_attack_on_double_star() {
        let an = ds();
        let mut st = AttackerState::new();
        let d = st.explain(&an, &set(&[0, 1])).unwrap().unwrap();
        assert_eq!(d.reference, 0);
        assert_eq!(d.deepest, 2);
        assert_eq!(d.extra, Some(2));
        assert_eq!(d.child, Some(0));
        assert_eq!((d.target, d.verdict), (3, Verdict::Attack));
        assert_eq!(st.reference_attack(), Some(3));
    }

    #[test]
    fn second_attack_on_double_star() {
        let an = ds();
        let mut st = AttackerState::new();
        st.next_attack(&an, &set(&[0, 1])).unwrap();
        let c = set(&[0, 3]);
        let d = st.explain(&an, &c).unwrap().unwrap();
        // 1 is empty, so T(1) is short by one as well and is the deepest.
        assert_eq!(&d.deficits[..], &[-1, -1, -1, 0, 0, 0]);
        assert_eq!(d.deepest, 1);
        assert_eq!(d.extra, Some(3));
        assert_eq!(d.child, Some(4));
        assert_eq!(d.target, 4);
    }

    #[test]
    fn undefended_attack_is_detected() {
        let an = ds();
        let mut st = AttackerState::new();
        st.next_attack(&an, &set(&[0, 1])).unwrap();
        // The defender "answered" without covering 3.
        assert_eq!(
            st.next_attack(&an, &set(&[0, 1])).unwrap(),
            (3, Verdict::AlreadyWon)
        );
    }

    #[test]
    fn empty_configuration_attacks_root() {
        let an = ds();
        let mut st = AttackerState::new();
        assert_eq!(
            st.next_attack(&an, &GuardConfig::new()).unwrap(),
            (2, Verdict::Attack)
        );
    }

    #[test]
    fn full_configuration_is_a_contract_violation() {
        let an = ds();
        let mut st = AttackerState::new();
        assert_eq!(
            st.next_attack(&an, &set(&[0, 1, 2])),
            Err(AttackError::NoDeficientVertex)
        );
    }

    #[test]
    fn singleton_root_part_attacks_the_root() {
        // P3 rooted at 0: parts {0} and {1,2}.
        let an = Analysis::new(Tree::path(3));
        let mut st = AttackerState::new();
        assert_eq!(st.next_attack(&an, &set(&[1])).unwrap(), (0, Verdict::Attack));
        // Only answer: guard 1 steps to 0. The leaf 2 is now out of reach.
        assert_eq!(st.next_attack(&an, &set(&[0])).unwrap(), (2, Verdict::Attack));
    }
}
