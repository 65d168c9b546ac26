use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{enumerate_stable_trees, RootedMTree};
use crate::combinat::combinations;
use crate::error::Result;

/// An `(M,D)`-tree: a rooted `(M,d)`-tree whose degree at each vertex is
/// realized by attaching that many labels from `D = {1..d}`.
///
/// Rooted at the vertex carrying mark 1. With the `D` labels present every
/// branch is distinguishable, so canonical form is a plain recursive sort.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MDTree {
    #[serde(rename = "leaves")]
    pub marks: Vec<u32>,
    #[serde(rename = "D")]
    pub degree_labels: Vec<u32>,
    pub children: Vec<MDTree>,
}

impl MDTree {
    pub fn new(marks: Vec<u32>, degree_labels: Vec<u32>, children: Vec<MDTree>) -> Self {
        let mut t = Self {
            marks,
            degree_labels,
            children,
        };
        t.canonicalize();
        t
    }

    pub fn canonicalize(&mut self) {
        self.marks.sort_unstable();
        self.degree_labels.sort_unstable();
        for c in &mut self.children {
            c.canonicalize();
        }
        self.children.sort();
    }

    pub fn canonical(&self) -> Self {
        let mut t = self.clone();
        t.canonicalize();
        t
    }

    pub fn degree(&self) -> u32 {
        self.degree_labels.len() as u32
    }

    /// The underlying `(M,d)`-tree, forgetting the `D` labels.
    pub fn forget(&self) -> RootedMTree {
        RootedMTree::new(
            self.degree(),
            self.marks.clone(),
            self.children.iter().map(MDTree::forget).collect(),
        )
    }

    pub fn is_stable(&self) -> bool {
        self.forget().is_stable()
    }

    pub fn vertex_count(&self) -> usize {
        1 + self
            .children
            .iter()
            .map(MDTree::vertex_count)
            .sum::<usize>()
    }

    pub fn edge_count(&self) -> usize {
        self.vertex_count() - 1
    }

    pub fn preorder(&self) -> Vec<&MDTree> {
        fn walk<'a>(t: &'a MDTree, out: &mut Vec<&'a MDTree>) {
            out.push(t);
            for c in &t.children {
                walk(c, out);
            }
        }
        let mut out = Vec::with_capacity(self.vertex_count());
        walk(self, &mut out);
        out
    }

    /// All marks and `D` labels in this subtree.
    pub fn subtree_labels(&self) -> (Vec<u32>, Vec<u32>) {
        let mut marks = Vec::new();
        let mut ds = Vec::new();
        for v in self.preorder() {
            marks.extend_from_slice(&v.marks);
            ds.extend_from_slice(&v.degree_labels);
        }
        marks.sort_unstable();
        ds.sort_unstable();
        (marks, ds)
    }

    /// Rebuilds `tree` with `labels[i]` attached to preorder vertex `i`,
    /// keeping the vertex order of `tree`.
    fn from_assignment(tree: &RootedMTree, labels: &[Vec<u32>]) -> Self {
        fn walk(t: &RootedMTree, labels: &[Vec<u32>], next: &mut usize) -> MDTree {
            let own = labels[*next].clone();
            *next += 1;
            MDTree {
                marks: t.leaves.clone(),
                degree_labels: own,
                children: t.children.iter().map(|c| walk(c, labels, next)).collect(),
            }
        }
        walk(tree, labels, &mut 0)
    }
}

/// Attaches `D` labels to `tree` deterministically: vertices in preorder
/// receive consecutive blocks of `1..=d` of size `d(v)`.
///
/// The result keeps the vertex order of `tree`, so preorder index `i` in the
/// result is vertex `i` of `tree`.
pub fn assign_d_labels(tree: &RootedMTree) -> MDTree {
    let mut next = 1;
    let labels: Vec<Vec<u32>> = tree
        .preorder()
        .iter()
        .map(|v| {
            let block: Vec<u32> = (next..next + v.degree).collect();
            next += v.degree;
            block
        })
        .collect();
    MDTree::from_assignment(tree, &labels)
}

/// Every stable `(M,D)`-tree with `M = {1..m}`, `D = {1..d}`, in canonical
/// form and sorted.
pub fn enumerate_md_trees(m: u32, d: u32) -> Result<Vec<MDTree>> {
    fn assign(
        degrees: &[u32],
        remaining: &[u32],
        prefix: &mut Vec<Vec<u32>>,
        out: &mut Vec<Vec<Vec<u32>>>,
    ) {
        let Some((&k, rest)) = degrees.split_first() else {
            out.push(prefix.clone());
            return;
        };
        for block in combinations(remaining, k as usize) {
            let left: Vec<u32> = remaining
                .iter()
                .copied()
                .filter(|x| !block.contains(x))
                .collect();
            prefix.push(block);
            assign(rest, &left, prefix, out);
            prefix.pop();
        }
    }

    let all_d: Vec<u32> = (1..=d).collect();
    let mut out = BTreeSet::new();
    for tree in enumerate_stable_trees(m, d)? {
        let degrees: Vec<u32> = tree.preorder().iter().map(|v| v.degree).collect();
        let mut assignments = Vec::new();
        assign(&degrees, &all_d, &mut Vec::new(), &mut assignments);
        for labels in assignments {
            out.insert(MDTree::from_assignment(&tree, &labels).canonical());
        }
    }
    Ok(out.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(d: u32, leaves: &[u32], children: Vec<RootedMTree>) -> RootedMTree {
        RootedMTree::new(d, leaves.to_vec(), children)
    }

    #[test]
    fn consecutive_blocks() {
        let single = assign_d_labels(&v(2, &[1, 2], vec![]));
        assert_eq!(single.degree_labels, vec![1, 2]);

        let two = assign_d_labels(&v(1, &[1], vec![v(1, &[2], vec![])]));
        assert_eq!(two.degree_labels, vec![1]);
        assert_eq!(two.children[0].degree_labels, vec![2]);

        let zero = assign_d_labels(&v(0, &[1, 2], vec![v(2, &[], vec![])]));
        assert!(zero.degree_labels.is_empty());
        assert_eq!(zero.forget(), v(0, &[1, 2], vec![v(2, &[], vec![])]));
    }

    #[test]
    fn md_tree_counts() {
        // One vertex, or a degree-0 root holding both marks with the single
        // D label on a child.
        assert_eq!(enumerate_md_trees(2, 1).unwrap().len(), 2);
        // A swap-symmetric (M,d)-tree has fewer D-labelings than d!.
        let trees = enumerate_md_trees(2, 2).unwrap();
        let with_pair = trees
            .iter()
            .filter(|t| t.forget() == v(0, &[1, 2], vec![v(1, &[], vec![]), v(1, &[], vec![])]))
            .count();
        assert_eq!(with_pair, 1);
        assert!(trees.iter().all(MDTree::is_stable));
    }

    #[test]
    fn json_form() {
        let t = assign_d_labels(&v(1, &[1], vec![v(1, &[2], vec![])]));
        assert_eq!(
            serde_json::to_string(&t).unwrap(),
            r#"{"leaves":[1],"D":[1],"children":[{"leaves":[2],"D":[2],"children":[]}]}"#
        );
    }
}
