//! Game rules, move legality and the game loop.
//!
//! A defence is legal when every moving guard starts on an occupied vertex
//! and steps along one edge (or stays), no two guards end on the same vertex,
//! and the attacked vertex is occupied afterwards. Guards may swap across an
//! edge. Equivalently, `C'` is reachable from `C` iff `|C| = |C'|` and the
//! bipartite "equal or adjacent" graph between them has a perfect matching.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::analysis::Analysis;
use crate::attack::{AttackError, AttackerState};
use crate::defense::{DefenseMove, DefenseState, GuardConfig};
use crate::tree::{Tree, Vertex};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IllegalMove {
    NoSuchVertex(Vertex),
    NotOccupied(Vertex),
    DuplicateSource(Vertex),
    DuplicateTarget(Vertex),
    NotAdjacent(Vertex, Vertex),
    /// A moving guard lands on a guard that stays.
    Collision(Vertex),
    Uncovered(Vertex),
}

impl fmt::Display for IllegalMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            IllegalMove::NoSuchVertex(v) => write!(f, "vertex {v} does not exist"),
            IllegalMove::NotOccupied(v) => write!(f, "no guard on {v}"),
            IllegalMove::DuplicateSource(v) => write!(f, "guard on {v} moved twice"),
            IllegalMove::DuplicateTarget(v) => write!(f, "two guards moved to {v}"),
            IllegalMove::NotAdjacent(a, b) => write!(f, "{a} is not adjacent to {b}"),
            IllegalMove::Collision(v) => write!(f, "{v} is occupied by a guard that stays"),
            IllegalMove::Uncovered(v) => write!(f, "attacked vertex {v} is not occupied"),
        }
    }
}

impl core::error::Error for IllegalMove {}

/// Applies `mv` to `c` under the movement rules, without looking at any attack.
pub fn check_move(t: &Tree, c: &GuardConfig, mv: &DefenseMove) -> Result<GuardConfig, IllegalMove> {
    let mut sources = BTreeSet::new();
    let mut targets = BTreeSet::new();
    for &(from, to) in mv.pairs() {
        for v in [from, to] {
            if v >= t.n() {
                return Err(IllegalMove::NoSuchVertex(v));
            }
        }
        if !c.contains(from) {
            return Err(IllegalMove::NotOccupied(from));
        }
        if !sources.insert(from) {
            return Err(IllegalMove::DuplicateSource(from));
        }
        if !targets.insert(to) {
            return Err(IllegalMove::DuplicateTarget(to));
        }
        if from != to && !t.adjacent(from, to) {
            return Err(IllegalMove::NotAdjacent(from, to));
        }
    }
    let mut next: GuardConfig = c.iter().filter(|v| !sources.contains(v)).collect();
    for to in targets {
        if !next.insert(to) {
            return Err(IllegalMove::Collision(to));
        }
    }
    Ok(next)
}

/// [`check_move`] plus the requirement that `attacked` ends up occupied.
pub fn check_defense(
    t: &Tree,
    c: &GuardConfig,
    mv: &DefenseMove,
    attacked: Vertex,
) -> Result<GuardConfig, IllegalMove> {
    let next = check_move(t, c, mv)?;
    if next.contains(attacked) {
        Ok(next)
    } else {
        Err(IllegalMove::Uncovered(attacked))
    }
}

pub fn validate_defense(t: &Tree, c: &GuardConfig, mv: &DefenseMove, attacked: Vertex) -> bool {
    check_defense(t, c, mv, attacked).is_ok()
}

/// Maximum matching by BFS augmenting paths. `cands[i]` lists the right
/// indices compatible with left index `i`; `seed` is a partial matching to
/// start from. Returns `right → left`.
pub fn max_matching(
    cands: &[Vec<usize>],
    right_len: usize,
    seed: &[(usize, usize)],
) -> Vec<Option<usize>> {
    let mut match_left: Vec<Option<usize>> = vec![None; cands.len()];
    let mut match_right: Vec<Option<usize>> = vec![None; right_len];
    for &(l, r) in seed {
        if match_left[l].is_none() && match_right[r].is_none() {
            match_left[l] = Some(r);
            match_right[r] = Some(l);
        }
    }
    let mut prev = vec![usize::MAX; right_len];
    for start in 0..cands.len() {
        if match_left[start].is_some() {
            continue;
        }
        prev.iter_mut().for_each(|p| *p = usize::MAX);
        let mut queue = VecDeque::from([start]);
        let mut free = None;
        'search: while let Some(u) = queue.pop_front() {
            for &r in &cands[u] {
                if prev[r] != usize::MAX {
                    continue;
                }
                prev[r] = u;
                match match_right[r] {
                    None => {
                        free = Some(r);
                        break 'search;
                    }
                    Some(next) => queue.push_back(next),
                }
            }
        }
        let mut r = match free {
            Some(r) => r,
            None => continue,
        };
        loop {
            let u = prev[r];
            let displaced = match_left[u];
            match_left[u] = Some(r);
            match_right[r] = Some(u);
            match displaced {
                Some(d) if u != start => r = d,
                _ => break,
            }
        }
    }
    match_right
}

/// Guard assignment `from → to` turning `c` into `next` in one turn, if any.
/// Guards on `c ∩ next` stay put whenever possible.
pub fn transition(t: &Tree, c: &GuardConfig, next: &GuardConfig) -> Option<Vec<(Vertex, Vertex)>> {
    if c.len() != next.len() {
        return None;
    }
    let left: Vec<Vertex> = c.iter().collect();
    let right: Vec<Vertex> = next.iter().collect();
    let index: BTreeMap<Vertex, usize> = right.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut seed = Vec::new();
    let cands: Vec<Vec<usize>> = left
        .iter()
        .enumerate()
        .map(|(i, &u)| {
            let mut out = Vec::new();
            if let Some(&j) = index.get(&u) {
                seed.push((i, j));
                out.push(j);
            }
            if u < t.n() {
                out.extend(t.neighbors(u).iter().filter_map(|w| index.get(w).copied()));
            }
            out
        })
        .collect();
    let matched = max_matching(&cands, right.len(), &seed);
    matched
        .iter()
        .enumerate()
        .map(|(j, l)| l.map(|l| (left[l], right[j])))
        .collect()
}

/// Whether the defender can move from `c` to `next` in one turn.
pub fn reachable(t: &Tree, c: &GuardConfig, next: &GuardConfig) -> bool {
    transition(t, c, next).is_some()
}

/// The move realizing a reachable transition, listing only guards that move.
pub fn transition_move(t: &Tree, c: &GuardConfig, next: &GuardConfig) -> Option<DefenseMove> {
    transition(t, c, next).map(|pairs| DefenseMove::new(pairs.into_iter().filter(|(a, b)| a != b)))
}

/// Stand if `attacked` is occupied, otherwise step the smallest adjacent
/// guard onto it, otherwise forfeit.
pub fn cover_greedily(t: &Tree, c: &GuardConfig, attacked: Vertex) -> Defense {
    if c.contains(attacked) {
        return Defense::Moves(DefenseMove::stand());
    }
    if attacked >= t.n() {
        return Defense::Forfeit;
    }
    match t.neighbors(attacked).iter().find(|&&w| c.contains(w)) {
        Some(&w) => Defense::Moves(DefenseMove::new([(w, attacked)])),
        None => Defense::Forfeit,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Defense {
    Moves(DefenseMove),
    Forfeit,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Turn {
    pub attack: Vertex,
    pub defense: Defense,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    /// The attack of this (1-based) turn was not defended.
    AttackerWins(usize),
    /// The defender answered every one of this many attacks.
    DefenderSurvived(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameTrace {
    pub tree: Tree,
    pub initial: GuardConfig,
    pub turns: Vec<Turn>,
    pub outcome: Outcome,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReplayError {
    Illegal { turn: usize, reason: IllegalMove },
    OutcomeMismatch { recorded: Outcome, replayed: Outcome },
}

impl fmt::Display for ReplayError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReplayError::Illegal { turn, reason } => write!(f, "turn {turn}: {reason}"),
            ReplayError::OutcomeMismatch { recorded, replayed } => {
                write!(f, "recorded outcome {recorded:?}, replay gives {replayed:?}")
            }
        }
    }
}

impl core::error::Error for ReplayError {}

impl GameTrace {
    pub fn attack_count(&self) -> usize {
        self.turns.len()
    }

    /// Re-validates every recorded defence. Returns the configuration after
    /// the initial placement and after every defended turn.
    pub fn replay(&self) -> Result<Vec<GuardConfig>, ReplayError> {
        let mut configs = vec![self.initial.clone()];
        let mut replayed = Outcome::DefenderSurvived(self.turns.len());
        for (i, turn) in self.turns.iter().enumerate() {
            let current = configs.last().expect("non-empty");
            match &turn.defense {
                Defense::Forfeit => {
                    replayed = Outcome::AttackerWins(i + 1);
                    break;
                }
                Defense::Moves(mv) => {
                    let next = check_defense(&self.tree, current, mv, turn.attack)
                        .map_err(|reason| ReplayError::Illegal { turn: i + 1, reason })?;
                    configs.push(next);
                }
            }
        }
        if replayed != self.outcome {
            return Err(ReplayError::OutcomeMismatch {
                recorded: self.outcome,
                replayed,
            });
        }
        Ok(configs)
    }
}

/// Failure raised by a strategy itself (not an illegal move).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrategyError(pub String);

impl fmt::Display for StrategyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl core::error::Error for StrategyError {}

pub trait AttackStrategy {
    fn attack(&mut self, config: &GuardConfig, turns: &[Turn]) -> Result<Vertex, StrategyError>;
}

pub trait DefenseStrategy {
    fn defend(
        &mut self,
        config: &GuardConfig,
        attacked: Vertex,
        turns: &[Turn],
    ) -> Result<Defense, StrategyError>;
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GameError {
    ZeroTurns,
    InvalidInitial(Vertex),
    AttackOutOfRange { turn: usize, vertex: Vertex },
    /// A strategy failed; `turns` holds the game up to that point.
    Strategy {
        turn: usize,
        error: StrategyError,
        turns: Vec<Turn>,
    },
}

impl fmt::Display for GameError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GameError::ZeroTurns => write!(f, "max_turns must be at least 1"),
            GameError::InvalidInitial(v) => write!(f, "initial guard on nonexistent vertex {v}"),
            GameError::AttackOutOfRange { turn, vertex } => {
                write!(f, "turn {turn}: attacker chose nonexistent vertex {vertex}")
            }
            GameError::Strategy { turn, error, .. } => write!(f, "turn {turn}: {error}"),
        }
    }
}

impl core::error::Error for GameError {}

/// Plays until the attacker wins or `max_turns` attacks have been answered.
///
/// An illegal or uncovering defence is recorded as a forfeit and loses on
/// the spot.
pub fn play_game(
    t: &Tree,
    attacker: &mut dyn AttackStrategy,
    defender: &mut dyn DefenseStrategy,
    initial: GuardConfig,
    max_turns: usize,
) -> Result<GameTrace, GameError> {
    if max_turns == 0 {
        return Err(GameError::ZeroTurns);
    }
    if let Some(v) = initial.max_vertex().filter(|&v| v >= t.n()) {
        return Err(GameError::InvalidInitial(v));
    }
    let mut config = initial.clone();
    let mut turns: Vec<Turn> = Vec::new();
    for turn in 1..=max_turns {
        let attack = match attacker.attack(&config, &turns) {
            Ok(a) => a,
            Err(error) => return Err(GameError::Strategy { turn, error, turns }),
        };
        if attack >= t.n() {
            return Err(GameError::AttackOutOfRange { turn, vertex: attack });
        }
        let defense = match defender.defend(&config, attack, &turns) {
            Ok(d) => d,
            Err(error) => return Err(GameError::Strategy { turn, error, turns }),
        };
        let next = match &defense {
            Defense::Moves(mv) => check_defense(t, &config, mv, attack).ok(),
            Defense::Forfeit => None,
        };
        match next {
            Some(next) => {
                turns.push(Turn { attack, defense });
                config = next;
            }
            None => {
                turns.push(Turn {
                    attack,
                    defense: Defense::Forfeit,
                });
                return Ok(GameTrace {
                    tree: t.clone(),
                    initial,
                    turns,
                    outcome: Outcome::AttackerWins(turn),
                });
            }
        }
    }
    Ok(GameTrace {
        tree: t.clone(),
        initial,
        turns,
        outcome: Outcome::DefenderSurvived(max_turns),
    })
}

/// The deficit-guided attacker as a game strategy.
///
/// Against `EDN(T)` or more guards there is no deficient vertex; the
/// strategy then attacks the smallest unoccupied vertex unless `strict`.
pub struct TheoremAttacker<'a> {
    an: &'a Analysis,
    state: AttackerState,
    strict: bool,
}

impl<'a> TheoremAttacker<'a> {
    pub fn new(an: &'a Analysis) -> Self {
        TheoremAttacker {
            an,
            state: AttackerState::new(),
            strict: false,
        }
    }

    /// Fails instead of falling back when no deficient vertex exists.
    pub fn strict(an: &'a Analysis) -> Self {
        TheoremAttacker {
            strict: true,
            ..TheoremAttacker::new(an)
        }
    }

    pub fn state(&self) -> &AttackerState {
        &self.state
    }
}

/// Smallest unoccupied vertex, or 0 if every vertex is guarded.
pub fn smallest_unoccupied(n: usize, c: &GuardConfig) -> Vertex {
    (0..n).find(|&v| !c.contains(v)).unwrap_or(0)
}

impl AttackStrategy for TheoremAttacker<'_> {
    fn attack(&mut self, config: &GuardConfig, _turns: &[Turn]) -> Result<Vertex, StrategyError> {
        match self.state.next_attack(self.an, config) {
            Ok((v, _)) => Ok(v),
            Err(AttackError::NoDeficientVertex) if !self.strict => {
                Ok(smallest_unoccupied(self.an.n(), config))
            }
            Err(e) => Err(StrategyError(e.to_string())),
        }
    }
}

/// The canonical defender.
///
/// It plays the canonical strategy while the board matches the canonical
/// configuration it expects; on any other board (for instance when seeded
/// with fewer guards) it falls back to [`cover_greedily`].
pub struct CanonicalDefender<'a> {
    an: &'a Analysis,
    state: DefenseState,
}

impl<'a> CanonicalDefender<'a> {
    pub fn new(an: &'a Analysis) -> Self {
        let (_, state) = crate::defense::initial_canonical_config(an);
        CanonicalDefender { an, state }
    }

    pub fn state(&self) -> &DefenseState {
        &self.state
    }
}

impl DefenseStrategy for CanonicalDefender<'_> {
    fn defend(
        &mut self,
        config: &GuardConfig,
        attacked: Vertex,
        _turns: &[Turn],
    ) -> Result<Defense, StrategyError> {
        if *config == self.state.config(self.an) {
            self.state
                .respond(self.an, attacked)
                .map(Defense::Moves)
                .map_err(|e| StrategyError(e.to_string()))
        } else {
            Ok(cover_greedily(self.an.tree(), config, attacked))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::defense::initial_canonical_config;
    use crate::fixtures::double_star;

    fn set(vs: &[Vertex]) -> GuardConfig {
        vs.iter().copied().collect()
    }

    #[test]
    fn validate_examples() {
        assert!(validate_defense(&Tree::path(2), &set(&[0]), &DefenseMove::new([(0, 1)]), 1));
        assert!(!validate_defense(&Tree::path(3), &set(&[0]), &DefenseMove::new([(0, 2)]), 2));
        assert!(validate_defense(
            &double_star(),
            &set(&[0, 1, 2]),
            &DefenseMove::new([(2, 0), (0, 3)]),
            3
        ));
    }

    #[test]
    fn illegal_move_reasons() {
        let t = double_star();
        let c = set(&[0, 1]);
        let chk = |mv: &[(usize, usize)], a| check_defense(&t, &c, &DefenseMove::new(mv.iter().copied()), a);
        assert_eq!(chk(&[(1, 3)], 3), Err(IllegalMove::NotAdjacent(1, 3)));
        assert_eq!(chk(&[(2, 0)], 2), Err(IllegalMove::NotOccupied(2)));
        assert_eq!(chk(&[(0, 3), (1, 3)], 3), Err(IllegalMove::DuplicateTarget(3)));
        assert_eq!(chk(&[(0, 1)], 1), Err(IllegalMove::Collision(1)));
        assert_eq!(chk(&[(0, 3), (0, 2)], 3), Err(IllegalMove::DuplicateSource(0)));
        assert_eq!(chk(&[], 3), Err(IllegalMove::Uncovered(3)));
        assert_eq!(chk(&[(0, 9)], 3), Err(IllegalMove::NoSuchVertex(9)));
        assert!(chk(&[(0, 1), (1, 0)], 0).is_ok(), "swaps are legal");
        assert!(chk(&[], 0).is_ok(), "standing guard defends");
    }

    #[test]
    fn transitions_prefer_standing_guards() {
        let t = double_star();
        let mv = transition_move(&t, &set(&[0, 1, 2]), &set(&[0, 1, 3])).unwrap();
        assert_eq!(mv, DefenseMove::new([(2, 0), (0, 3)]));
        assert!(transition_move(&t, &set(&[0, 1]), &set(&[0, 1])).unwrap().is_empty());
        assert!(!reachable(&t, &set(&[2]), &set(&[4])));
        assert!(!reachable(&t, &set(&[2]), &set(&[0, 1])));
    }

    #[test]
    fn theorem_attacker_beats_weak_canonical_defender() {
        let an = Analysis::with_root(double_star(), Some(2)).unwrap();
        let mut att = TheoremAttacker::new(&an);
        let mut def = CanonicalDefender::new(&an);
        let trace = play_game(an.tree(), &mut att, &mut def, set(&[0, 1]), 50).unwrap();
        match trace.outcome {
            Outcome::AttackerWins(t) => assert!(t <= 3),
            o => panic!("unexpected {o:?}"),
        }
        trace.replay().unwrap();
    }

    #[test]
    fn canonical_defender_survives_with_edn_guards() {
        let an = Analysis::with_root(double_star(), Some(2)).unwrap();
        let (c0, _) = initial_canonical_config(&an);
        let mut att = TheoremAttacker::new(&an);
        let mut def = CanonicalDefender::new(&an);
        let trace = play_game(an.tree(), &mut att, &mut def, c0, 50).unwrap();
        assert_eq!(trace.outcome, Outcome::DefenderSurvived(50));
        assert_eq!(trace.replay().unwrap().len(), 51);
    }

    #[test]
    fn single_vertex_without_guards() {
        let an = Analysis::new(Tree::single());
        let mut att = TheoremAttacker::new(&an);
        let mut def = CanonicalDefender::new(&an);
        let trace = play_game(an.tree(), &mut att, &mut def, GuardConfig::new(), 5).unwrap();
        assert_eq!(trace.outcome, Outcome::AttackerWins(1));
        assert_eq!(trace.turns[0].defense, Defense::Forfeit);
    }

    #[test]
    fn game_input_errors() {
        let an = Analysis::new(Tree::path(2));
        let mut att = TheoremAttacker::new(&an);
        let mut def = CanonicalDefender::new(&an);
        assert_eq!(
            play_game(an.tree(), &mut att, &mut def, set(&[0]), 0),
            Err(GameError::ZeroTurns)
        );
        assert_eq!(
            play_game(an.tree(), &mut att, &mut def, set(&[5]), 3),
            Err(GameError::InvalidInitial(5))
        );
    }

    #[test]
    fn tampered_trace_fails_replay() {
        let an = Analysis::with_root(double_star(), Some(2)).unwrap();
        let mut att = TheoremAttacker::new(&an);
        let mut def = CanonicalDefender::new(&an);
        let mut trace = play_game(an.tree(), &mut att, &mut def, set(&[0, 1]), 10).unwrap();
        trace.turns[0].defense = Defense::Moves(DefenseMove::new([(1, 3)]));
        assert!(matches!(trace.replay(), Err(ReplayError::Illegal { turn: 1, .. })));
    }
}
