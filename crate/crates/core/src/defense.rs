//! Guard configurations, defender moves and the canonical defender.
//!
//! The canonical defender keeps every inner vertex of every part occupied
//! and one *extra* guard per part, parked on the part's top. When a leaf of
//! a part is attacked the guards on the path from the extra guard to that
//! leaf all shift one edge toward it. A part whose extra guard is away from
//! its top shifts it back as soon as the part is attacked at a non-leaf or
//! another part is attacked. Every shift is a single simultaneous move
//! because all vertices strictly inside the path are inner, hence occupied.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::analysis::Analysis;
use crate::neocol::VertexClass;
use crate::tree::Vertex;

/// The set of occupied vertices.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GuardConfig(BTreeSet<Vertex>);

impl GuardConfig {
    pub fn new() -> Self {
        GuardConfig(BTreeSet::new())
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.contains(&v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn insert(&mut self, v: Vertex) -> bool {
        self.0.insert(v)
    }

    pub fn remove(&mut self, v: Vertex) -> bool {
        self.0.remove(&v)
    }

    /// Occupied vertices in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.0.iter().copied()
    }

    pub fn first(&self) -> Option<Vertex> {
        self.0.first().copied()
    }

    pub fn max_vertex(&self) -> Option<Vertex> {
        self.0.last().copied()
    }

    pub fn occupancy(&self, n: usize) -> Vec<bool> {
        let mut occ = vec![false; n];
        for v in self.iter().filter(|&v| v < n) {
            occ[v] = true;
        }
        occ
    }

    /// Bitmask over vertices `0..32`; `None` if a vertex does not fit.
    pub fn mask(&self) -> Option<u32> {
        self.iter()
            .try_fold(0u32, |m, v| (v < 32).then(|| m | (1 << v)))
    }

    pub fn from_mask(mask: u32) -> Self {
        (0..32).filter(|&v| mask & (1 << v) != 0).collect()
    }
}

impl FromIterator<Vertex> for GuardConfig {
    fn from_iter<I: IntoIterator<Item = Vertex>>(iter: I) -> Self {
        GuardConfig(iter.into_iter().collect())
    }
}

impl fmt::Display for GuardConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// Guard movements of one defender turn. Guards not listed stay put.
///
/// Pairs are kept sorted by `(from, to)`; duplicates are preserved so that
/// validation can reject them.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct DefenseMove {
    moves: Vec<(Vertex, Vertex)>,
}

impl DefenseMove {
    pub fn new<I: IntoIterator<Item = (Vertex, Vertex)>>(moves: I) -> Self {
        let mut moves: Vec<_> = moves.into_iter().collect();
        moves.sort_unstable();
        DefenseMove { moves }
    }

    /// No guard moves.
    pub fn stand() -> Self {
        DefenseMove::default()
    }

    pub fn pairs(&self) -> &[(Vertex, Vertex)] {
        &self.moves
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    fn extend(&mut self, other: impl IntoIterator<Item = (Vertex, Vertex)>) {
        self.moves.extend(other);
        self.moves.sort_unstable();
    }
}

/// `from>to` pairs joined by commas, e.g. `0>3,2>0`.
impl fmt::Display for DefenseMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (a, b)) in self.moves.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}>{b}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DefenseError {
    NoSuchVertex(Vertex),
    /// The shift path crosses a vertex that is not an inner vertex of the part.
    BrokenPath { from: Vertex, to: Vertex, at: Vertex },
}

impl fmt::Display for DefenseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DefenseError::NoSuchVertex(v) => write!(f, "vertex {v} does not exist"),
            DefenseError::BrokenPath { from, to, at } => write!(
                f,
                "cannot shift guards from {from} to {to}: {at} is not a guarded inner vertex"
            ),
        }
    }
}

impl core::error::Error for DefenseError {}

/// Per-part extra-guard positions of the canonical defender.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DefenseState {
    extra: Vec<Vertex>,
    last_attacked_part: Option<usize>,
}

/// Guards on every inner vertex and every part top; `EDN(T)` guards in all.
pub fn initial_canonical_config(an: &Analysis) -> (GuardConfig, DefenseState) {
    let nc = &an.neocol;
    let state = DefenseState {
        extra: (0..nc.part_count()).map(|p| nc.top(p)).collect(),
        last_attacked_part: None,
    };
    (state.config(an), state)
}

impl DefenseState {
    pub fn extra(&self, part: usize) -> Vertex {
        self.extra[part]
    }

    pub fn last_attacked_part(&self) -> Option<usize> {
        self.last_attacked_part
    }

    /// Inner vertices plus the extra guard of every part.
    pub fn config(&self, an: &Analysis) -> GuardConfig {
        (0..an.n())
            .filter(|&v| an.classes.of(v) == VertexClass::Inner)
            .chain(self.extra.iter().copied())
            .collect()
    }

    /// Moves every guard on the path `from → to` one edge toward `to`.
    fn shift(&self, an: &Analysis, from: Vertex, to: Vertex) -> Result<Vec<(Vertex, Vertex)>, DefenseError> {
        let path = an.rooted.path(from, to);
        let part = an.neocol.part_of(to);
        for &w in &path[1..path.len() - 1] {
            if an.neocol.part_of(w) != part || an.classes.of(w) != VertexClass::Inner {
                return Err(DefenseError::BrokenPath { from, to, at: w });
            }
        }
        Ok(path.windows(2).map(|e| (e[0], e[1])).collect())
    }

    /// The canonical answer to an attack on `attacked`; updates the state.
    pub fn respond(&mut self, an: &Analysis, attacked: Vertex) -> Result<DefenseMove, DefenseError> {
        if attacked >= an.n() {
            return Err(DefenseError::NoSuchVertex(attacked));
        }
        let nc = &an.neocol;
        let part = nc.part_of(attacked);
        let target = if an.classes.of(attacked) == VertexClass::Leaf {
            attacked
        } else {
            nc.top(part)
        };

        let mut mv = DefenseMove::stand();
        if self.extra[part] != target {
            mv.extend(self.shift(an, self.extra[part], target)?);
        }
        let mut extra = self.extra.clone();
        extra[part] = target;
        if let Some(q) = self.last_attacked_part.filter(|&q| q != part) {
            if extra[q] != nc.top(q) {
                mv.extend(self.shift(an, extra[q], nc.top(q))?);
                extra[q] = nc.top(q);
            }
        }
        self.extra = extra;
        self.last_attacked_part = Some(part);
        Ok(mv)
    }
}
