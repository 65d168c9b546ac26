use std::collections::{BTreeSet, HashMap};

use super::RootedMTree;
use crate::combinat::{cartesian, integer_partitions, set_partitions};
use crate::error::{Error, Result};

/// One representative per isomorphism class of stable rooted `(M,d)`-trees
/// with `M = {1..m}`, rooted at the vertex carrying leaf 1, sorted by
/// canonical form.
///
/// Every vertex satisfies `n(v) > 2` or `d(v) > 0`. This includes trees whose
/// non-root degree-0 trivalent vertices admit no b-structure; see
/// [`enumerate_basis_trees`] for the subset that indexes basis classes.
pub fn enumerate_stable_trees(m: u32, d: u32) -> Result<Vec<RootedMTree>> {
    if m == 0 {
        return Err(Error::InvalidParameters(
            "at least one marked leaf is required".into(),
        ));
    }
    if d == 0 && m < 3 {
        return Err(Error::NoStableTrees { m, d });
    }
    let others: Vec<u32> = (2..=m).collect();
    let trees = enumerate_rooted(&[1], &others, d);
    if trees.is_empty() {
        return Err(Error::NoStableTrees { m, d });
    }
    Ok(trees)
}

/// Stable trees that carry at least one b-structure for large enough `n`:
/// no vertex other than the root has degree 0 and valence 3.
pub fn enumerate_basis_trees(m: u32, d: u32) -> Result<Vec<RootedMTree>> {
    fn admissible(t: &RootedMTree, is_root: bool) -> bool {
        (is_root || t.degree > 0 || t.valence(false) > 3)
            && t.children.iter().all(|c| admissible(c, false))
    }
    Ok(enumerate_stable_trees(m, d)?
        .into_iter()
        .filter(|t| admissible(t, true))
        .collect())
}

/// Rooted trees with the labels `root_labels` attached to the root and the
/// labels `other_labels` attached anywhere, of total degree `degree`.
///
/// The root is stable when its leaves plus children exceed two or its degree
/// is positive; other vertices use the usual valence including the parent
/// edge. With `root_labels = [1]` this is the stable `(M,d)`-tree family.
pub fn enumerate_rooted(
    root_labels: &[u32],
    other_labels: &[u32],
    degree: u32,
) -> Vec<RootedMTree> {
    let mut gen = Generator::default();
    gen.vertex_trees(root_labels, other_labels, degree, false)
        .into_iter()
        .collect()
}

#[derive(Default)]
struct Generator {
    branches: HashMap<(Vec<u32>, u32), Vec<RootedMTree>>,
}

impl Generator {
    /// Subtrees hanging below an edge, carrying exactly `labels`.
    fn branches(&mut self, labels: &[u32], degree: u32) -> Vec<RootedMTree> {
        if labels.len() < 2 && degree == 0 {
            return Vec::new();
        }
        let key = (labels.to_vec(), degree);
        if let Some(hit) = self.branches.get(&key) {
            return hit.clone();
        }
        let trees: Vec<RootedMTree> = self
            .vertex_trees(&[], labels, degree, true)
            .into_iter()
            .collect();
        self.branches.insert(key, trees.clone());
        trees
    }

    fn vertex_trees(
        &mut self,
        forced: &[u32],
        free: &[u32],
        degree: u32,
        has_parent: bool,
    ) -> BTreeSet<RootedMTree> {
        let mut out = BTreeSet::new();
        for mask in 0u64..(1 << free.len()) {
            let mut here = forced.to_vec();
            let mut rest = Vec::new();
            for (i, &label) in free.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    here.push(label);
                } else {
                    rest.push(label);
                }
            }
            let partitions = set_partitions(&rest);
            for d0 in 0..=degree {
                for blocks in &partitions {
                    for (block_degrees, leftover) in distribute(blocks, degree - d0) {
                        for leafless in integer_partitions(leftover) {
                            let flags = here.len()
                                + blocks.len()
                                + leafless.len()
                                + usize::from(has_parent);
                            if d0 == 0 && flags <= 2 {
                                continue;
                            }
                            let mut options = Vec::with_capacity(blocks.len() + leafless.len());
                            for (block, &f) in blocks.iter().zip(&block_degrees) {
                                options.push(self.branches(block, f));
                            }
                            for &f in &leafless {
                                options.push(self.branches(&[], f));
                            }
                            if options.iter().any(Vec::is_empty) {
                                continue;
                            }
                            for children in cartesian(&options) {
                                out.insert(RootedMTree::new(d0, here.clone(), children));
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

/// Degree assignments to labeled blocks, each block able to form a stable
/// branch (two labels or positive degree); returns the unassigned remainder
/// alongside each assignment.
fn distribute(blocks: &[Vec<u32>], budget: u32) -> Vec<(Vec<u32>, u32)> {
    fn rec(blocks: &[Vec<u32>], left: u32, prefix: &mut Vec<u32>, out: &mut Vec<(Vec<u32>, u32)>) {
        let Some((block, rest)) = blocks.split_first() else {
            out.push((prefix.clone(), left));
            return;
        };
        let min = if block.len() >= 2 { 0 } else { 1 };
        for f in min..=left {
            prefix.push(f);
            rec(rest, left - f, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(blocks, budget, &mut Vec::new(), &mut out);
    out
}
