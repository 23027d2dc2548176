//! Brute-force ground truth for small trees.
//!
//! All `k`-subsets of the vertices are encoded as bitmasks. A configuration
//! is *safe* if for every attack some one-turn successor that covers the
//! attack is again safe. The safe set is the greatest fixed point of that
//! condition and is computed by repeatedly discarding configurations that
//! fail it. Successors are decided with the same equal-or-adjacent matching
//! the engine uses.
//!
//! Unsafe configurations get a survival rank: the number of attacks an
//! optimal defender still answers against an optimal attacker.

use alloc::vec;
use alloc::vec::Vec;
use core::cell::OnceCell;
use core::fmt;

use crate::defense::GuardConfig;
use crate::engine::{transition_move, Defense, DefenseStrategy, StrategyError, Turn};
use crate::tree::{Tree, Vertex};

/// Size limits for the oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_n: usize,
    pub max_configs: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_n: 12,
            max_configs: 5_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleError {
    TooLarge { n: usize, k: usize, configs: usize },
    GuardsExceedVertices { n: usize, k: usize },
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::TooLarge { n, k, configs } => write!(
                f,
                "oracle budget exceeded: n={n}, k={k} gives {configs} configurations"
            ),
            OracleError::GuardsExceedVertices { n, k } => {
                write!(f, "{k} guards do not fit on {n} vertices")
            }
        }
    }
}

impl core::error::Error for OracleError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Rank {
    /// The defender answers this many more attacks, then loses.
    Finite(u32),
    /// Safe: the defender survives forever.
    Infinite,
}

#[derive(Debug, Clone)]
pub struct SafeSet {
    tree: Tree,
    k: usize,
    configs: Vec<u32>,
    /// Indexed by mask; `u32::MAX` for masks with the wrong popcount.
    index: Vec<u32>,
    succ: Vec<Vec<u32>>,
    safe: Vec<bool>,
    ranks: OnceCell<Vec<Rank>>,
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1usize, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Safe `k`-guard configurations of `t`.
pub fn safe_configs(t: &Tree, k: usize) -> Result<SafeSet, OracleError> {
    safe_configs_within(t, k, Budget::default())
}

pub fn safe_configs_within(t: &Tree, k: usize, budget: Budget) -> Result<SafeSet, OracleError> {
    let n = t.n();
    if k > n {
        return Err(OracleError::GuardsExceedVertices { n, k });
    }
    let count = binomial(n, k);
    if n > budget.max_n || n > 20 || count > budget.max_configs {
        return Err(OracleError::TooLarge { n, k, configs: count });
    }

    let configs: Vec<u32> = (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == k)
        .collect();
    let mut index = vec![u32::MAX; 1 << n];
    for (i, &m) in configs.iter().enumerate() {
        index[m as usize] = i as u32;
    }
    let closed: Vec<u32> = (0..n)
        .map(|v| t.neighbors(v).iter().fold(1u32 << v, |m, &w| m | (1 << w)))
        .collect();
    let reach = |m: u32| -> u32 {
        (0..n)
            .filter(|&v| m & (1 << v) != 0)
            .fold(0, |acc, v| acc | closed[v])
    };
    let reach_of: Vec<u32> = configs.iter().map(|&m| reach(m)).collect();

    let succ: Vec<Vec<u32>> = (0..configs.len())
        .map(|i| {
            let c = GuardConfig::from_mask(configs[i]);
            (0..configs.len())
                .filter(|&j| {
                    // Cheap necessary condition before the matching test.
                    configs[j] & !reach_of[i] == 0
                        && configs[i] & !reach_of[j] == 0
                        && crate::engine::reachable(t, &c, &GuardConfig::from_mask(configs[j]))
                })
                .map(|j| j as u32)
                .collect()
        })
        .collect();

    let full = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let mut safe = vec![true; configs.len()];
    loop {
        let mut changed = false;
        for i in 0..configs.len() {
            if !safe[i] {
                continue;
            }
            let cover = succ[i]
                .iter()
                .filter(|&&j| safe[j as usize])
                .fold(0, |acc, &j| acc | configs[j as usize]);
            if cover != full {
                safe[i] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }

    Ok(SafeSet {
        tree: t.clone(),
        k,
        configs,
        index,
        succ,
        safe,
        ranks: OnceCell::new(),
    })
}

/// Smallest `k` with a non-empty safe set.
pub fn oracle_edn(t: &Tree) -> Result<usize, OracleError> {
    oracle_edn_within(t, Budget::default())
}

pub fn oracle_edn_within(t: &Tree, budget: Budget) -> Result<usize, OracleError> {
    for k in 1..=t.n() {
        if safe_configs_within(t, k, budget)?.safe_count() > 0 {
            return Ok(k);
        }
    }
    unreachable!("n guards on n vertices are always safe")
}

impl SafeSet {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn tree(&self) -> &Tree {
        &self.tree
    }

    pub fn config_count(&self) -> usize {
        self.configs.len()
    }

    pub fn safe_count(&self) -> usize {
        self.safe.iter().filter(|&&s| s).count()
    }

    /// Safe configurations as ascending bitmasks.
    pub fn safe_masks(&self) -> impl Iterator<Item = u32> + '_ {
        self.configs
            .iter()
            .zip(&self.safe)
            .filter(|(_, &s)| s)
            .map(|(&m, _)| m)
    }

    fn idx(&self, c: &GuardConfig) -> Option<usize> {
        let m = c.mask()?;
        match self.index.get(m as usize) {
            Some(&i) if i != u32::MAX => Some(i as usize),
            _ => None,
        }
    }

    /// `false` for configurations of the wrong size too.
    pub fn is_safe(&self, c: &GuardConfig) -> bool {
        self.idx(c).is_some_and(|i| self.safe[i])
    }

    /// Survival rank of each configuration, computed on first use by value
    /// iteration from "infinite everywhere" down to the fixed point.
    fn ranks(&self) -> &[Rank] {
        self.ranks.get_or_init(|| {
            let n = self.tree.n();
            let m = self.configs.len();
            let mut rank = vec![Rank::Infinite; m];
            loop {
                let next: Vec<Rank> = (0..m)
                    .map(|i| {
                        (0..n)
                            .map(|a| {
                                self.succ[i]
                                    .iter()
                                    .filter(|&&j| self.configs[j as usize] & (1 << a) != 0)
                                    .map(|&j| rank[j as usize])
                                    .max()
                                    .map_or(Rank::Finite(0), |r| match r {
                                        Rank::Finite(x) => Rank::Finite(x + 1),
                                        Rank::Infinite => Rank::Infinite,
                                    })
                            })
                            .min()
                            .unwrap_or(Rank::Infinite)
                    })
                    .collect();
                if next == rank {
                    break rank;
                }
                rank = next;
            }
        })
    }

    pub fn survival_rank(&self, c: &GuardConfig) -> Option<Rank> {
        self.idx(c).map(|i| self.ranks()[i])
    }

    /// Best answer to `attacked`: a safe successor if one exists, else the
    /// successor with the highest survival rank (smallest mask on ties).
    pub fn optimal_defense(&self, c: &GuardConfig, attacked: Vertex) -> Defense {
        let Some(i) = self.idx(c) else {
            return Defense::Forfeit;
        };
        if attacked >= self.tree.n() {
            return Defense::Forfeit;
        }
        let ranks = self.ranks();
        let best = self.succ[i]
            .iter()
            .map(|&j| j as usize)
            .filter(|&j| self.configs[j] & (1 << attacked) != 0)
            .max_by_key(|&j| (self.safe[j], ranks[j], core::cmp::Reverse(self.configs[j])));
        match best {
            None => Defense::Forfeit,
            Some(j) => {
                let next = GuardConfig::from_mask(self.configs[j]);
                Defense::Moves(transition_move(&self.tree, c, &next).expect("successor is reachable"))
            }
        }
    }

    /// Configuration with the best rank, preferring safe ones.
    pub fn best_config(&self) -> GuardConfig {
        let ranks = self.ranks();
        let j = (0..self.configs.len())
            .max_by_key(|&j| (self.safe[j], ranks[j], core::cmp::Reverse(self.configs[j])))
            .expect("at least one configuration");
        GuardConfig::from_mask(self.configs[j])
    }
}

/// Defender that plays [`SafeSet::optimal_defense`].
pub struct OracleDefender<'a> {
    safe: &'a SafeSet,
}

impl<'a> OracleDefender<'a> {
    pub fn new(safe: &'a SafeSet) -> Self {
        OracleDefender { safe }
    }
}

impl DefenseStrategy for OracleDefender<'_> {
    fn defend(
        &mut self,
        config: &GuardConfig,
        attacked: Vertex,
        _turns: &[Turn],
    ) -> Result<Defense, StrategyError> {
        if config.len() != self.safe.k() {
            return Err(StrategyError(alloc::format!(
                "oracle built for {} guards, board has {}",
                self.safe.k(),
                config.len()
            )));
        }
        Ok(self.safe.optimal_defense(config, attacked))
    }
}
