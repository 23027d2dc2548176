#![allow(dead_code)]

use etdom_core::tree::Tree;
use etdom_core::GuardConfig;
use rand::Rng;

/// Uniform random parent attachment.
pub fn random_tree<R: Rng>(rng: &mut R, n: usize) -> Tree {
    let parents: Vec<usize> = (1..n).map(|i| rng.gen_range(0..i)).collect();
    Tree::from_parents(&parents).unwrap()
}

/// Every `k`-subset of `0..n` as a guard configuration.
pub fn all_configs(n: usize, k: usize) -> Vec<GuardConfig> {
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == k)
        .map(GuardConfig::from_mask)
        .collect()
}

/// Every configuration reachable from `c` in one turn, by trying every
/// stay-or-step choice for every guard.
pub fn brute_successors(t: &Tree, c: &GuardConfig) -> Vec<GuardConfig> {
    let guards: Vec<usize> = c.iter().collect();
    let mut out = std::collections::BTreeSet::new();
    let mut pick = Vec::new();
    fn rec(
        t: &Tree,
        guards: &[usize],
        pick: &mut Vec<usize>,
        out: &mut std::collections::BTreeSet<GuardConfig>,
    ) {
        if pick.len() == guards.len() {
            out.insert(pick.iter().copied().collect());
            return;
        }
        let g = guards[pick.len()];
        let opts: Vec<usize> = std::iter::once(g).chain(t.neighbors(g).iter().copied()).collect();
        for o in opts {
            if !pick.contains(&o) {
                pick.push(o);
                rec(t, guards, pick, out);
                pick.pop();
            }
        }
    }
    rec(t, &guards, &mut pick, &mut out);
    out.into_iter().collect()
}
