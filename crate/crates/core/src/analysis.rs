use crate::neocol::{build_nice_neocol, classify_vertices, NeoColonization, VertexClasses};
use crate::reduction::{reduce, ReductionTrace};
use crate::tree::{RootedTree, Tree, TreeError, Vertex};

/// Everything the canonical defender and the attacker need about one tree:
/// the rooting, the reduction record, the nice neo-colonization built from
/// it and the L/J/I classes.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub rooted: RootedTree,
    pub trace: ReductionTrace,
    pub neocol: NeoColonization,
    pub classes: VertexClasses,
}

impl Analysis {
    /// Analysis rooted at the smallest-index leaf.
    pub fn new(tree: Tree) -> Analysis {
        Analysis::with_root(tree, None).expect("default root is a leaf")
    }

    pub fn with_root(tree: Tree, root: Option<Vertex>) -> Result<Analysis, TreeError> {
        let rooted = RootedTree::root_at(tree, root)?;
        let trace = reduce(&rooted);
        let neocol = build_nice_neocol(&rooted, &trace)
            .unwrap_or_else(|e| panic!("reduction record produced an invalid partition: {e}"));
        let classes = classify_vertices(&neocol, &rooted);
        Ok(Analysis {
            rooted,
            trace,
            neocol,
            classes,
        })
    }

    pub fn tree(&self) -> &Tree {
        self.rooted.tree()
    }

    pub fn n(&self) -> usize {
        self.rooted.n()
    }

    pub fn edn(&self) -> usize {
        self.trace.edn()
    }
}
