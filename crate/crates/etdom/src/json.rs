//! JSON shapes shared by the CLI and the service.
//!
//! Field order is declaration order, so serialized output is stable enough
//! for golden files.

use etdom_core::attack::{AttackDiagnostic, Verdict};
use etdom_core::engine::Turn;
use etdom_core::tree::Vertex;
use etdom_core::{Analysis, Defense, DefenseMove, GameTrace, GuardConfig, Outcome};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::format::{parse_edge_list, serialize_tree, ParseError};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartJson {
    pub vertices: Vec<Vertex>,
    pub top: Vertex,
    pub weight: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NeocolJson {
    pub n: usize,
    pub root: Vertex,
    pub edn: usize,
    pub parts: Vec<PartJson>,
    /// One of `"L"`, `"J"`, `"I"` per vertex.
    pub classes: Vec<String>,
}

impl NeocolJson {
    pub fn new(an: &Analysis) -> Self {
        let nc = &an.neocol;
        NeocolJson {
            n: an.n(),
            root: an.rooted.root(),
            edn: an.edn(),
            parts: (0..nc.part_count())
                .map(|p| PartJson {
                    vertices: nc.part(p).to_vec(),
                    top: nc.top(p),
                    weight: nc.weight(p),
                })
                .collect(),
            classes: an
                .classes
                .as_slice()
                .iter()
                .map(|c| c.letter().to_string())
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DefenseJson {
    Moves(Vec<(Vertex, Vertex)>),
    /// Always the string `"forfeit"`.
    Forfeit(ForfeitTag),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ForfeitTag {
    Forfeit,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TurnJson {
    pub attack: Vertex,
    pub defense: DefenseJson,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutcomeJson {
    AttackerWins(usize),
    DefenderSurvived(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameTraceJson {
    /// The tree in wire format.
    pub tree: String,
    pub c0: Vec<Vertex>,
    pub turns: Vec<TurnJson>,
    pub outcome: OutcomeJson,
}

#[derive(Debug, Error)]
pub enum TraceJsonError {
    #[error("tree: {0}")]
    Tree(#[from] ParseError),
    #[error("duplicate vertex {0} in c0")]
    DuplicateGuard(Vertex),
}

impl From<&Defense> for DefenseJson {
    fn from(d: &Defense) -> Self {
        match d {
            Defense::Moves(mv) => DefenseJson::Moves(mv.pairs().to_vec()),
            Defense::Forfeit => DefenseJson::Forfeit(ForfeitTag::Forfeit),
        }
    }
}

impl From<&DefenseJson> for Defense {
    fn from(d: &DefenseJson) -> Self {
        match d {
            DefenseJson::Moves(pairs) => Defense::Moves(DefenseMove::new(pairs.iter().copied())),
            DefenseJson::Forfeit(_) => Defense::Forfeit,
        }
    }
}

impl From<Outcome> for OutcomeJson {
    fn from(o: Outcome) -> Self {
        match o {
            Outcome::AttackerWins(t) => OutcomeJson::AttackerWins(t),
            Outcome::DefenderSurvived(t) => OutcomeJson::DefenderSurvived(t),
        }
    }
}

impl From<OutcomeJson> for Outcome {
    fn from(o: OutcomeJson) -> Self {
        match o {
            OutcomeJson::AttackerWins(t) => Outcome::AttackerWins(t),
            OutcomeJson::DefenderSurvived(t) => Outcome::DefenderSurvived(t),
        }
    }
}

impl From<&GameTrace> for GameTraceJson {
    fn from(g: &GameTrace) -> Self {
        GameTraceJson {
            tree: serialize_tree(&g.tree),
            c0: g.initial.iter().collect(),
            turns: g
                .turns
                .iter()
                .map(|t| TurnJson {
                    attack: t.attack,
                    defense: (&t.defense).into(),
                })
                .collect(),
            outcome: g.outcome.into(),
        }
    }
}

impl GameTraceJson {
    /// Back to a [`GameTrace`]; call [`GameTrace::replay`] to validate moves.
    pub fn to_trace(&self) -> Result<GameTrace, TraceJsonError> {
        let tree = parse_edge_list(self.tree.as_bytes())?;
        let mut initial = GuardConfig::new();
        for &v in &self.c0 {
            if !initial.insert(v) {
                return Err(TraceJsonError::DuplicateGuard(v));
            }
        }
        Ok(GameTrace {
            tree,
            initial,
            turns: self
                .turns
                .iter()
                .map(|t| Turn {
                    attack: t.attack,
                    defense: (&t.defense).into(),
                })
                .collect(),
            outcome: self.outcome.into(),
        })
    }
}

/// The attacker's reasoning for one turn: `a`, the deficit vector, `v`,
/// `x`, `d` and `b`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttackJson {
    pub a: Option<Vertex>,
    pub deficits: Option<Vec<i64>>,
    pub v: Option<Vertex>,
    pub x: Option<Vertex>,
    pub d: Option<Vertex>,
    pub b: Vertex,
    /// `"attack"`, or `"already_won"` when the previous attack was not defended.
    pub verdict: String,
}

impl AttackJson {
    /// `diag` is `None` when the configuration was empty and the root is attacked.
    pub fn new(diag: Option<&AttackDiagnostic>, root: Vertex) -> Self {
        match diag {
            None => AttackJson {
                a: None,
                deficits: None,
                v: None,
                x: None,
                d: None,
                b: root,
                verdict: "attack".into(),
            },
            Some(dg) => AttackJson {
                a: Some(dg.reference),
                deficits: Some(dg.deficits.clone()),
                v: Some(dg.deepest),
                x: dg.extra,
                d: dg.child,
                b: dg.target,
                verdict: match dg.verdict {
                    Verdict::Attack => "attack",
                    Verdict::AlreadyWon => "already_won",
                }
                .into(),
            },
        }
    }
}
