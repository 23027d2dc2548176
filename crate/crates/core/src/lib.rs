//! Eternal domination on trees.
//!
//! The m-eternal domination game: a defender places guards on the vertices of
//! a tree, one per vertex at most. Each turn the attacker names a vertex and
//! the defender moves any subset of guards one edge each (simultaneously) so
//! that the named vertex ends up occupied. The defender loses the first time
//! that is impossible.
//!
//! This crate computes the eternal domination number of a tree through leaf
//! reductions, builds a nice neo-colonization from the reduction record,
//! implements the canonical defender that follows it, and implements the
//! deficit-guided attacker that beats any configuration with fewer guards in
//! at most `diam(T)` attacks. A brute-force fixed-point [`oracle`] provides
//! independent ground truth on small trees.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

mod dsu;

pub mod analysis;
pub mod attack;
pub mod defense;
pub mod engine;
pub mod enumerate;
pub mod neocol;
pub mod oracle;
pub mod reduction;
pub mod tree;

pub use analysis::Analysis;
pub use attack::{AttackError, AttackerState, Verdict};
pub use defense::{DefenseMove, DefenseState, GuardConfig};
pub use engine::{play_game, validate_defense, Defense, GameTrace, Outcome};
pub use neocol::{NeoColonization, VertexClass, VertexClasses};
pub use reduction::{compute_edn, ReductionStep, ReductionTrace, StepKind, Terminal};
pub use tree::{RootedTree, Tree, TreeError, Vertex};
