//! Rooted stable trees with labeled leaves and per-vertex degrees.
//!
//! A [`RootedMTree`] is stored in canonical form: leaf labels are sorted and
//! every vertex lists its children in increasing order of their own canonical
//! form. Two leaf-labeled rooted trees are isomorphic exactly when their
//! canonical forms are equal, so the derived `Eq`/`Ord` serve as the
//! isomorphism test and the enumeration order.
//!
//! Vertices are addressed by their preorder index in the canonical form; the
//! root is vertex 0.

mod bstructure;
mod enumerate;
mod md;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use bstructure::{
    b_range, closed_form_contribution, enumerate_b_structures, tree_contribution, BStructure,
};
pub use enumerate::{enumerate_basis_trees, enumerate_rooted, enumerate_stable_trees};
pub use md::{assign_d_labels, enumerate_md_trees, MDTree};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct RootedMTree {
    #[serde(rename = "d")]
    pub degree: u32,
    pub leaves: Vec<u32>,
    pub children: Vec<RootedMTree>,
}

impl RootedMTree {
    /// Builds a vertex and brings the whole tree into canonical form.
    pub fn new(degree: u32, leaves: Vec<u32>, children: Vec<RootedMTree>) -> Self {
        let mut tree = Self {
            degree,
            leaves,
            children,
        };
        tree.canonicalize();
        tree
    }

    pub fn leaf_vertex(degree: u32, leaves: Vec<u32>) -> Self {
        Self::new(degree, leaves, Vec::new())
    }

    pub fn canonicalize(&mut self) {
        self.leaves.sort_unstable();
        for child in &mut self.children {
            child.canonicalize();
        }
        self.children.sort();
    }

    pub fn is_canonical(&self) -> bool {
        self.leaves.windows(2).all(|w| w[0] < w[1])
            && self.children.windows(2).all(|w| w[0] <= w[1])
            && self.children.iter().all(RootedMTree::is_canonical)
    }

    pub fn total_degree(&self) -> u32 {
        self.degree
            + self
                .children
                .iter()
                .map(RootedMTree::total_degree)
                .sum::<u32>()
    }

    pub fn vertex_count(&self) -> usize {
        1 + self
            .children
            .iter()
            .map(RootedMTree::vertex_count)
            .sum::<usize>()
    }

    pub fn edge_count(&self) -> usize {
        self.vertex_count() - 1
    }

    /// All leaf labels in the tree, sorted.
    pub fn labels(&self) -> Vec<u32> {
        let mut out = Vec::new();
        self.collect_labels(&mut out);
        out.sort_unstable();
        out
    }

    fn collect_labels(&self, out: &mut Vec<u32>) {
        out.extend_from_slice(&self.leaves);
        for child in &self.children {
            child.collect_labels(out);
        }
    }

    /// Vertices in preorder.
    pub fn preorder(&self) -> Vec<&RootedMTree> {
        let mut out = Vec::with_capacity(self.vertex_count());
        self.push_preorder(&mut out);
        out
    }

    fn push_preorder<'a>(&'a self, out: &mut Vec<&'a RootedMTree>) {
        out.push(self);
        for child in &self.children {
            child.push_preorder(out);
        }
    }

    /// Parent of each vertex in preorder; `None` for the root.
    pub fn parents(&self) -> Vec<Option<usize>> {
        fn walk(t: &RootedMTree, parent: Option<usize>, out: &mut Vec<Option<usize>>) {
            let me = out.len();
            out.push(parent);
            for c in &t.children {
                walk(c, Some(me), out);
            }
        }
        let mut out = Vec::with_capacity(self.vertex_count());
        walk(self, None, &mut out);
        out
    }

    /// Number of directly subordinated flags (leaves plus child edges).
    pub fn down_valence(&self) -> u32 {
        (self.leaves.len() + self.children.len()) as u32
    }

    /// Valence `n(v)`: all flags at the vertex, including the edge towards
    /// the root when the vertex is not the root.
    pub fn valence(&self, is_root: bool) -> u32 {
        self.down_valence() + u32::from(!is_root)
    }

    /// Stability at every vertex: `n(v) > 2` or `d(v) > 0`.
    pub fn is_stable(&self) -> bool {
        fn walk(t: &RootedMTree, is_root: bool) -> bool {
            (t.degree > 0 || t.valence(is_root) > 2) && t.children.iter().all(|c| walk(c, false))
        }
        walk(self, true)
    }

    /// Whether some vertex has two isomorphic child branches. Since leaf
    /// labels are fixed by automorphisms this is the only way a nontrivial
    /// automorphism can arise.
    pub fn has_automorphisms(&self) -> bool {
        self.children.windows(2).any(|w| w[0] == w[1])
            || self.children.iter().any(RootedMTree::has_automorphisms)
    }
}

/// Compact text form: degree, then `{labels}` if any, then `[children]` if any.
/// The one-vertex tree of degree 2 carrying leaves 1 and 2 prints as `2{1,2}`.
impl fmt::Display for RootedMTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.degree)?;
        if !self.leaves.is_empty() {
            let labels: Vec<String> = self.leaves.iter().map(u32::to_string).collect();
            write!(f, "{{{}}}", labels.join(","))?;
        }
        if !self.children.is_empty() {
            write!(f, "[")?;
            for (i, c) in self.children.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{c}")?;
            }
            write!(f, "]")?;
        }
        Ok(())
    }
}
