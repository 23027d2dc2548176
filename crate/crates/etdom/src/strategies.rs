//! Randomized strategies for fuzzing the engine and the canonical defence.

use etdom_core::engine::{transition_move, AttackStrategy, DefenseStrategy, StrategyError, Turn};
use etdom_core::tree::{Tree, Vertex};
use etdom_core::{Defense, GuardConfig};
use rand::seq::SliceRandom;
use rand::Rng;

/// Attacks a uniformly random vertex.
pub struct RandomAttacker<R> {
    n: usize,
    rng: R,
}

impl<R: Rng> RandomAttacker<R> {
    pub fn new(n: usize, rng: R) -> Self {
        RandomAttacker { n, rng }
    }
}

impl<R: Rng> AttackStrategy for RandomAttacker<R> {
    fn attack(&mut self, _config: &GuardConfig, _turns: &[Turn]) -> Result<Vertex, StrategyError> {
        Ok(self.rng.gen_range(0..self.n))
    }
}

/// Picks a random legal reply covering the attacked vertex.
///
/// One guard is sent to the attacked vertex (standing if it is already
/// there); every other guard, in random order, either stays or steps to a
/// random neighbour that was empty and is still unclaimed. Forfeits only when no
/// guard is on or next to the attacked vertex.
pub struct RandomDefender<'a, R> {
    tree: &'a Tree,
    rng: R,
}

impl<'a, R: Rng> RandomDefender<'a, R> {
    pub fn new(tree: &'a Tree, rng: R) -> Self {
        RandomDefender { tree, rng }
    }
}

impl<R: Rng> DefenseStrategy for RandomDefender<'_, R> {
    fn defend(&mut self, config: &GuardConfig, attacked: Vertex, _turns: &[Turn]) -> Result<Defense, StrategyError> {
        let t = self.tree;
        let mut next = GuardConfig::new();
        let mut guards: Vec<Vertex> = config.iter().collect();
        if config.contains(attacked) {
            guards.retain(|&g| g != attacked);
        } else {
            let near: Vec<Vertex> = t.neighbors(attacked).iter().copied().filter(|&w| config.contains(w)).collect();
            let Some(&g) = near.choose(&mut self.rng) else {
                return Ok(Defense::Forfeit);
            };
            guards.retain(|&h| h != g);
        }
        next.insert(attacked);
        guards.shuffle(&mut self.rng);
        // Steps only go to vertices that are free now, so a guard that stays
        // can never be run into.
        for g in guards {
            let step = if self.rng.gen_bool(0.5) {
                let free: Vec<Vertex> = t
                    .neighbors(g)
                    .iter()
                    .copied()
                    .filter(|&w| !next.contains(w) && !config.contains(w))
                    .collect();
                free.choose(&mut self.rng).copied()
            } else {
                None
            };
            next.insert(step.unwrap_or(g));
        }
        transition_move(t, config, &next)
            .map(Defense::Moves)
            .ok_or_else(|| StrategyError(format!("built unreachable configuration {next}")))
    }
}
