//! Cross-checks of the reduction, the neo-colonization, the canonical
//! defender and the attacker against the brute-force oracle.

use std::collections::{HashSet, VecDeque};

use etdom_core::defense::initial_canonical_config;
use etdom_core::engine::TheoremAttacker;
use etdom_core::neocol::validate_nice;
use etdom_core::oracle::{oracle_edn, safe_configs, OracleDefender, OracleError, SafeSet};
use etdom_core::tree::Vertex;
use etdom_core::{play_game, Analysis, GuardConfig, Outcome, Tree};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Which configurations of `EDN − 1` guards the attacker is tested from.
#[derive(Debug, Clone, Copy)]
pub struct AttackSample {
    /// Every configuration is tried on trees with at most this many vertices.
    pub all_up_to: usize,
    /// Otherwise this many random ones.
    pub per_tree: usize,
}

impl Default for AttackSample {
    fn default() -> Self {
        AttackSample { all_up_to: 8, per_tree: 50 }
    }
}

#[derive(Debug, Clone)]
pub struct TreeReport {
    pub tree: Tree,
    pub edn: usize,
    pub oracle_edn: Option<usize>,
    /// Games played by the attacker and the longest one.
    pub games: usize,
    pub longest_game: usize,
    pub canonical_states: usize,
    pub failures: Vec<String>,
}

impl TreeReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn k_subsets(n: usize, k: usize) -> Vec<GuardConfig> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<Vertex>, out: &mut Vec<GuardConfig>) {
        if cur.len() == k {
            out.push(cur.iter().copied().collect());
            return;
        }
        for v in start..n {
            if n - v < k - cur.len() {
                break;
            }
            cur.push(v);
            go(v + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        go(0, n, k, &mut Vec::new(), &mut out);
    }
    out
}

/// Every configuration the canonical defender can reach from its initial
/// placement; calls `visit` on each, stopping early if it returns `false`.
/// Returns the number of distinct defender states explored.
pub fn explore_canonical(an: &Analysis, mut visit: impl FnMut(&GuardConfig) -> bool) -> Result<usize, String> {
    let (c0, s0) = initial_canonical_config(an);
    if !visit(&c0) {
        return Ok(1);
    }
    let mut seen = HashSet::from([s0.clone()]);
    let mut queue = VecDeque::from([s0]);
    while let Some(st) = queue.pop_front() {
        for a in 0..an.n() {
            let mut next = st.clone();
            next.respond(an, a).map_err(|e| format!("canonical reply to {a}: {e}"))?;
            if seen.insert(next.clone()) {
                if !visit(&next.config(an)) {
                    return Ok(seen.len());
                }
                queue.push_back(next);
            }
        }
    }
    Ok(seen.len())
}

/// Plays the theorem attacker against the oracle's best defender from `c`.
pub fn attacker_game(an: &Analysis, safe: &SafeSet, c: &GuardConfig) -> Result<Outcome, String> {
    let mut att = TheoremAttacker::strict(an);
    let mut def = OracleDefender::new(safe);
    let g = play_game(an.tree(), &mut att, &mut def, c.clone(), an.n() + 1).map_err(|e| e.to_string())?;
    g.replay().map_err(|e| format!("trace does not replay: {e}"))?;
    Ok(g.outcome)
}

pub fn check_tree(t: &Tree, sample_cfg: AttackSample, seed: u64) -> TreeReport {
    let an = Analysis::new(t.clone());
    let n = t.n();
    let edn = an.edn();
    let mut r = TreeReport {
        tree: t.clone(),
        edn,
        oracle_edn: None,
        games: 0,
        longest_game: 0,
        canonical_states: 0,
        failures: Vec::new(),
    };
    let oracle_failure = |e: OracleError| format!("oracle: {e}");

    match oracle_edn(t) {
        Ok(o) => {
            r.oracle_edn = Some(o);
            if o != edn {
                r.failures.push(format!("reduction gives EDN {edn}, oracle {o}"));
            }
        }
        Err(e) => r.failures.push(oracle_failure(e)),
    }

    let nice = validate_nice(&an.neocol, &an.rooted);
    if !nice.passed() {
        r.failures.push(format!("neo-colonization not nice: {}", nice.describe()));
    }
    if an.neocol.total_weight() != edn {
        r.failures.push(format!("total weight {} != EDN {edn}", an.neocol.total_weight()));
    }

    match safe_configs(t, edn) {
        Ok(safe) => {
            let mut bad = None;
            match explore_canonical(&an, |c| {
                let ok = safe.is_safe(c);
                if !ok {
                    bad = Some(c.clone());
                }
                ok
            }) {
                Ok(states) => r.canonical_states = states,
                Err(e) => r.failures.push(e),
            }
            if let Some(c) = bad {
                r.failures.push(format!("canonical defender reaches unsafe {c}"));
            }
        }
        Err(e) => r.failures.push(oracle_failure(e)),
    }

    if n >= 2 {
        let k = edn - 1;
        let configs = if n <= sample_cfg.all_up_to {
            k_subsets(n, k)
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..sample_cfg.per_tree)
                .map(|_| sample(&mut rng, n, k).into_iter().collect())
                .collect()
        };
        match safe_configs(t, k) {
            Ok(safe) => {
                let diam = t.diameter();
                for c in configs {
                    r.games += 1;
                    match attacker_game(&an, &safe, &c) {
                        Ok(Outcome::AttackerWins(turn)) => {
                            r.longest_game = r.longest_game.max(turn);
                            if turn > diam || turn > n {
                                r.failures.push(format!("from {c}: won on turn {turn}, diam {diam}"));
                            }
                        }
                        Ok(o) => r.failures.push(format!("from {c}: {o:?}")),
                        Err(e) => r.failures.push(format!("from {c}: {e}")),
                    }
                }
            }
            Err(e) => r.failures.push(oracle_failure(e)),
        }
    }
    r
}

/// Checks every tree in parallel; reports come back in input order.
pub fn check_trees(trees: &[Tree], sample_cfg: AttackSample, seed: u64) -> Vec<TreeReport> {
    trees
        .par_iter()
        .enumerate()
        .map(|(i, t)| check_tree(t, sample_cfg, seed.wrapping_add(i as u64)))
        .collect()
}

/// `count` random labelled trees with `2..=max_n` vertices.
pub fn random_corpus(max_n: usize, count: usize, seed: u64) -> Vec<Tree> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(2..=max_n.max(2));
            crate::gen::random_tree(n, &mut rng)
        })
        .collect()
}
