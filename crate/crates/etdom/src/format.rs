//! Line-oriented text formats: the tree wire format, the reduction log and
//! `from>to` defence moves.

use std::fmt::Write as _;

use etdom_core::reduction::{ReductionStep, ReductionTrace, StepKind, Terminal};
use etdom_core::tree::{Tree, TreeError, Vertex};
use etdom_core::DefenseMove;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("input is not ASCII")]
    NotAscii,
    #[error("empty input")]
    Empty,
    #[error("malformed integer {0:?}")]
    MalformedInteger(String),
    #[error("expected \"u v\" separated by a single space, got {0:?}")]
    MalformedEdge(String),
    #[error("expected {expected} edges, found {found}")]
    WrongEdgeCount { expected: usize, found: usize },
    #[error("vertex {0} out of range")]
    VertexOutOfRange(Vertex),
    #[error("self-loop")]
    SelfLoop,
    #[error("duplicate edge")]
    DuplicateEdge,
    #[error("edge closes a cycle")]
    Cycle,
    #[error("a tree needs at least one vertex")]
    NoVertices,
    #[error("unrecognized record {0:?}")]
    UnknownRecord(String),
    #[error("missing terminal record")]
    MissingTerminal,
}

fn err(line: usize, kind: ParseErrorKind) -> ParseError {
    ParseError { line, kind }
}

fn parse_uint(line: usize, s: &str) -> Result<usize, ParseError> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(err(line, ParseErrorKind::MalformedInteger(s.to_string())));
    }
    s.parse()
        .map_err(|_| err(line, ParseErrorKind::MalformedInteger(s.to_string())))
}

/// Splits on LF. A final LF is optional; CR and blank lines are not accepted.
fn lines(text: &[u8]) -> Result<Vec<&str>, ParseError> {
    if !text.is_ascii() {
        let line = 1 + text.iter().take_while(|b| b.is_ascii()).filter(|&&b| b == b'\n').count();
        return Err(err(line, ParseErrorKind::NotAscii));
    }
    let s = std::str::from_utf8(text).expect("ASCII is UTF-8");
    let mut out: Vec<&str> = s.split('\n').collect();
    if out.last() == Some(&"") {
        out.pop();
    }
    Ok(out)
}

/// Parses the tree wire format: `n` on the first line, then `n - 1` lines `u v`.
pub fn parse_edge_list(text: &[u8]) -> Result<Tree, ParseError> {
    let lines = lines(text)?;
    let Some(first) = lines.first() else {
        return Err(err(1, ParseErrorKind::Empty));
    };
    let n = parse_uint(1, first)?;
    if n == 0 {
        return Err(err(1, ParseErrorKind::NoVertices));
    }
    let mut edges = Vec::with_capacity(n - 1);
    for (i, l) in lines.iter().enumerate().skip(1) {
        let line = i + 1;
        if edges.len() == n - 1 {
            return Err(err(
                line,
                ParseErrorKind::WrongEdgeCount {
                    expected: n - 1,
                    found: lines.len() - 1,
                },
            ));
        }
        let (u, v) = l
            .split_once(' ')
            .ok_or_else(|| err(line, ParseErrorKind::MalformedEdge(l.to_string())))?;
        edges.push((parse_uint(line, u)?, parse_uint(line, v)?));
    }
    if edges.len() != n - 1 {
        return Err(err(
            lines.len() + 1,
            ParseErrorKind::WrongEdgeCount {
                expected: n - 1,
                found: edges.len(),
            },
        ));
    }
    Tree::new(n, edges).map_err(|e| match e {
        TreeError::VertexOutOfRange { edge, vertex } => {
            err(edge + 2, ParseErrorKind::VertexOutOfRange(vertex))
        }
        TreeError::SelfLoop { edge } => err(edge + 2, ParseErrorKind::SelfLoop),
        TreeError::DuplicateEdge { edge } => err(edge + 2, ParseErrorKind::DuplicateEdge),
        TreeError::Cycle { edge } => err(edge + 2, ParseErrorKind::Cycle),
        other => unreachable!("edge count already checked: {other}"),
    })
}

/// The wire format, edges sorted by `(min, max)`.
pub fn serialize_tree(t: &Tree) -> String {
    let mut s = format!("{}\n", t.n());
    for &(u, v) in t.edges() {
        let _ = writeln!(s, "{u} {v}");
    }
    s
}

/// One reduction per line (`P x y` or `B x c1 … ck`), then `T K1 v` or `T K2 u v`.
pub fn write_reduction_log(trace: &ReductionTrace) -> String {
    let mut s = String::new();
    for step in &trace.steps {
        match step.kind {
            StepKind::LeafPair => {
                let _ = writeln!(s, "P {} {}", step.removed[0], step.removed[1]);
            }
            StepKind::LeafBunch => {
                let _ = write!(s, "B {}", step.anchor);
                for c in &step.removed {
                    let _ = write!(s, " {c}");
                }
                s.push('\n');
            }
        }
    }
    match trace.terminal {
        Terminal::K1(v) => {
            let _ = writeln!(s, "T K1 {v}");
        }
        Terminal::K2(u, v) => {
            let _ = writeln!(s, "T K2 {u} {v}");
        }
    }
    s
}

pub fn parse_reduction_log(text: &[u8]) -> Result<ReductionTrace, ParseError> {
    let mut steps = Vec::new();
    for (i, l) in lines(text)?.into_iter().enumerate() {
        let line = i + 1;
        let fields: Vec<&str> = l.split(' ').collect();
        let nums = |from: usize| -> Result<Vec<usize>, ParseError> {
            fields[from..].iter().map(|f| parse_uint(line, f)).collect()
        };
        let unknown = || err(line, ParseErrorKind::UnknownRecord(l.to_string()));
        match fields[0] {
            "P" => match nums(1)?[..] {
                [x, y] => steps.push(ReductionStep {
                    kind: StepKind::LeafPair,
                    anchor: x,
                    removed: vec![x, y],
                    h_edges: vec![(x, y)],
                }),
                _ => return Err(unknown()),
            },
            "B" => {
                let v = nums(1)?;
                if v.len() < 3 {
                    return Err(unknown());
                }
                steps.push(ReductionStep {
                    kind: StepKind::LeafBunch,
                    anchor: v[0],
                    removed: v[1..].to_vec(),
                    h_edges: v[1..].iter().map(|&c| (c, v[0])).collect(),
                });
            }
            "T" if fields.len() >= 2 => {
                let terminal = match (fields[1], &nums(2)?[..]) {
                    ("K1", &[v]) => Terminal::K1(v),
                    ("K2", &[u, v]) => Terminal::K2(u, v),
                    _ => return Err(unknown()),
                };
                return Ok(ReductionTrace { steps, terminal });
            }
            _ => return Err(unknown()),
        }
    }
    Err(err(steps.len() + 1, ParseErrorKind::MissingTerminal))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed move {0:?}: expected comma-separated from>to pairs")]
pub struct MoveParseError(pub String);

/// Parses `0>3,2>0`; the empty string is the standing defence.
pub fn parse_defense_move(s: &str) -> Result<DefenseMove, MoveParseError> {
    if s.is_empty() {
        return Ok(DefenseMove::stand());
    }
    s.split(',')
        .map(|pair| {
            let (a, b) = pair.split_once('>').ok_or_else(|| MoveParseError(s.to_string()))?;
            let a = a.parse().map_err(|_| MoveParseError(s.to_string()))?;
            let b = b.parse().map_err(|_| MoveParseError(s.to_string()))?;
            Ok((a, b))
        })
        .collect::<Result<Vec<_>, _>>()
        .map(DefenseMove::new)
}
