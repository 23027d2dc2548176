//! Tree generators.

use etdom_core::enumerate::nonisomorphic_trees;
use etdom_core::tree::Tree;
use rand::Rng;

/// Uniform random parent attachment: vertex `i` picks a parent in `0..i`.
pub fn random_tree<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Tree {
    assert!(n >= 1, "a tree needs a vertex");
    let parents: Vec<usize> = (1..n).map(|i| rng.gen_range(0..i)).collect();
    Tree::from_parents(&parents).expect("parents precede children")
}

/// All non-isomorphic trees with `1..=max_n` vertices, by size.
pub fn exhaustive(max_n: usize) -> Vec<Tree> {
    (1..=max_n).flat_map(nonisomorphic_trees).collect()
}
