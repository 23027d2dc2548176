mod common;

use common::{all_configs, brute_successors, random_tree};
use etdom_core::attack::{
    deepest_deficient, subtree_canonical_numbers, subtree_deficits, subtree_guard_counts,
};
use etdom_core::enumerate::nonisomorphic_trees;
use etdom_core::{Analysis, AttackerState, GuardConfig, Verdict};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn root_is_deficient_below_edn() {
    for n in 2..=8 {
        for t in nonisomorphic_trees(n) {
            let an = Analysis::new(t);
            let r = an.rooted.root();
            for k in 0..an.edn() {
                for c in all_configs(n, k) {
                    for a in 0..n {
                        assert!(subtree_deficits(&an, &c, a)[r] < 0);
                    }
                }
            }
        }
    }
}

/// Plays the attacker against every possible defender from `c`, checking
/// the progress mechanism on every branch. Returns the longest game.
fn exhaust(an: &Analysis, st: &AttackerState, c: &GuardConfig, played: usize) -> usize {
    let mut st = st.clone();
    let diag = st.explain(an, c).unwrap();
    let (b, verdict) = match &diag {
        Some(d) => (d.target, d.verdict),
        None => (an.rooted.root(), Verdict::Attack),
    };
    if verdict == Verdict::AlreadyWon {
        return played;
    }
    let replies: Vec<GuardConfig> = brute_successors(an.tree(), c)
        .into_iter()
        .filter(|next| next.contains(b))
        .collect();
    if replies.is_empty() {
        return played + 1;
    }
    let mut longest = 0;
    for next in &replies {
        if let Some(d) = &diag {
            let v = d.deepest;
            let new_def = subtree_deficits(an, next, b);
            let new_v = deepest_deficient(an, &new_def).unwrap();
            assert!(an.rooted.depth(new_v) > an.rooted.depth(v));
            if let Some(child) = d.child {
                let before = subtree_canonical_numbers(an, d.reference);
                let after = subtree_canonical_numbers(an, b);
                assert_eq!(after[child], before[child] + 1);
                // Nothing enters T(d) through the empty v; a guard may leave it.
                assert!(subtree_guard_counts(an, next)[child] <= subtree_guard_counts(an, c)[child]);
                assert!(new_def[child] <= -1);
            }
        }
        longest = longest.max(exhaust(an, &st, next, played + 1));
    }
    longest
}

#[test]
fn attacker_wins_within_diameter_against_every_defender() {
    for n in 2..=7 {
        for t in nonisomorphic_trees(n) {
            let an = Analysis::new(t);
            let diam = an.tree().diameter();
            for c in all_configs(n, an.edn() - 1) {
                let longest = exhaust(&an, &AttackerState::new(), &c, 0);
                assert!(longest <= diam, "{:?} from {c}: {longest} > {diam}", an.tree());
            }
        }
    }
}

#[test]
fn attacker_wins_on_random_larger_trees() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..30 {
        let n = rng.gen_range(9..=14);
        let an = Analysis::new(random_tree(&mut rng, n));
        let diam = an.tree().diameter();
        for _ in 0..3 {
            let mut vs: Vec<usize> = (0..n).collect();
            rand::seq::SliceRandom::shuffle(&mut vs[..], &mut rng);
            let c: GuardConfig = vs[..an.edn() - 1].iter().copied().collect();
            assert!(exhaust(&an, &AttackerState::new(), &c, 0) <= diam);
        }
    }
}
