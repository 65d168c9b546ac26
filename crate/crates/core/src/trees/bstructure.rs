use std::ops::Range;

use serde::{Deserialize, Serialize};

use super::RootedMTree;
use crate::combinat::{cartesian, multisets};
use crate::qpoly::{q_int, sym_power, QPoly};

/// Per-vertex weights `b(v)` on a tree, indexed by preorder vertex index.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BStructure {
    pub n: u32,
    pub b: Vec<u32>,
}

impl BStructure {
    pub fn total(&self) -> u32 {
        self.b.iter().sum()
    }

    pub fn root(&self) -> u32 {
        self.b[0]
    }

    /// Checks the per-vertex bounds against `tree`.
    pub fn is_valid_for(&self, tree: &RootedMTree) -> bool {
        let vertices = tree.preorder();
        vertices.len() == self.b.len()
            && vertices
                .iter()
                .zip(&self.b)
                .enumerate()
                .all(|(i, (v, b))| b_range(v, i == 0, self.n).contains(b))
    }
}

/// Admissible values of `b` at a vertex:
/// `0 <= b(r) < (n+1)d(r) + n(r) - 2` at the root and
/// `0 < b(v) < (n+1)d(v) + n(v) - 2` elsewhere.
pub fn b_range(vertex: &RootedMTree, is_root: bool, n: u32) -> Range<u32> {
    let top = i64::from(n + 1) * i64::from(vertex.degree) + i64::from(vertex.valence(is_root)) - 2;
    let lo = u32::from(!is_root);
    let hi = top.max(i64::from(lo)) as u32;
    lo..hi
}

/// Runs of equal children as `(first index, multiplicity)`.
fn child_groups(t: &RootedMTree) -> Vec<(usize, u32)> {
    let mut groups: Vec<(usize, u32)> = Vec::new();
    for (i, c) in t.children.iter().enumerate() {
        match groups.last_mut() {
            Some((start, count)) if t.children[*start] == *c => *count += 1,
            _ => groups.push((i, 1)),
        }
    }
    groups
}

/// One b-structure per orbit of the tree's automorphism group.
///
/// Identical sibling branches are filled with non-decreasing sequences of
/// their own orbit representatives, which picks exactly one point per orbit
/// of the wreath-product action.
pub fn enumerate_b_structures(tree: &RootedMTree, n: u32) -> Vec<BStructure> {
    fn reps(t: &RootedMTree, is_root: bool, n: u32) -> Vec<Vec<u32>> {
        let own = b_range(t, is_root, n);
        if own.is_empty() {
            return Vec::new();
        }
        let mut group_options: Vec<Vec<Vec<u32>>> = Vec::new();
        for (start, count) in child_groups(t) {
            let child = reps(&t.children[start], false, n);
            let options: Vec<Vec<u32>> = multisets(child.len(), count as usize)
                .into_iter()
                .map(|idx| idx.iter().flat_map(|&i| child[i].iter().copied()).collect())
                .collect();
            if options.is_empty() {
                return Vec::new();
            }
            group_options.push(options);
        }
        let below = cartesian(&group_options);
        own.flat_map(|b| {
            below.iter().map(move |parts| {
                let mut v = vec![b];
                for p in parts {
                    v.extend_from_slice(p);
                }
                v
            })
        })
        .collect()
    }
    reps(tree, true, n)
        .into_iter()
        .map(|b| BStructure { n, b })
        .collect()
}

/// `sum over b-structure orbits of q^(sum_v b(v))`, computed bottom-up: each
/// group of `k` identical sibling branches contributes the `k`-th symmetric
/// power of one branch's weight.
pub fn tree_contribution(tree: &RootedMTree, n: u32) -> QPoly {
    fn weight(t: &RootedMTree, is_root: bool, n: u32) -> QPoly {
        let range = b_range(t, is_root, n);
        let own = q_int(i64::from(range.end) - i64::from(range.start)).shift(range.start as usize);
        child_groups(t)
            .into_iter()
            .fold(own, |acc, (start, count)| {
                if acc.is_zero() {
                    return acc;
                }
                let branch = weight(&t.children[start], false, n);
                &acc * &sym_power(&branch, count)
            })
    }
    weight(tree, true, n)
}

/// The product formula for trees without automorphisms:
/// `q^(|V|-1) * prod_v [(n+1)d(v) + n'(v) - 2]_q`, with `n'(v)` the number of
/// directly subordinated flags (`n'(r) = n(r)`, `n'(v) = n(v) - 1` otherwise).
pub fn closed_form_contribution(tree: &RootedMTree, n: u32) -> QPoly {
    let vertices = tree.preorder();
    let product: QPoly = vertices
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let is_root = i == 0;
            let n_prime = i64::from(v.valence(is_root)) - i64::from(!is_root);
            q_int(i64::from(n + 1) * i64::from(v.degree) + n_prime - 2)
        })
        .product();
    product.shift(vertices.len() - 1)
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use num_traits::{ToPrimitive, Zero};

    use super::*;
    use crate::trees::enumerate_stable_trees;

    fn v(d: u32, leaves: &[u32], children: Vec<RootedMTree>) -> RootedMTree {
        RootedMTree::new(d, leaves.to_vec(), children)
    }

    fn pair_of_degree_one_branches() -> RootedMTree {
        v(0, &[1, 2], vec![v(1, &[], vec![]), v(1, &[], vec![])])
    }

    #[derive(PartialEq, Eq, PartialOrd, Ord)]
    struct Decorated {
        b: u32,
        degree: u32,
        leaves: Vec<u32>,
        children: Vec<Decorated>,
    }

    fn decorate(t: &RootedMTree, b: &[u32], next: &mut usize) -> Decorated {
        let own = b[*next];
        *next += 1;
        let mut children: Vec<Decorated> =
            t.children.iter().map(|c| decorate(c, b, next)).collect();
        children.sort();
        Decorated {
            b: own,
            degree: t.degree,
            leaves: t.leaves.clone(),
            children,
        }
    }

    /// Orbit count by listing every assignment and canonicalizing the
    /// decorated tree.
    fn brute_orbits(tree: &RootedMTree, n: u32) -> usize {
        let ranges: Vec<Vec<u32>> = tree
            .preorder()
            .iter()
            .enumerate()
            .map(|(i, v)| b_range(v, i == 0, n).collect())
            .collect();
        let mut seen = BTreeSet::new();
        for assignment in cartesian(&ranges) {
            seen.insert(decorate(tree, &assignment, &mut 0));
        }
        seen.len()
    }

    #[test]
    fn single_vertex_ranges() {
        let t = v(2, &[1, 2], vec![]);
        for n in 1..5 {
            assert_eq!(enumerate_b_structures(&t, n).len(), (2 * n + 2) as usize);
            assert_eq!(tree_contribution(&t, n), q_int(2 * (i64::from(n) + 1)));
        }
        let p1 = v(1, &[1], vec![]);
        assert_eq!(
            enumerate_b_structures(&p1, 1),
            vec![BStructure { n: 1, b: vec![0] }]
        );
    }

    #[test]
    fn swapped_branches_give_two_orbits() {
        let t = pair_of_degree_one_branches();
        assert_eq!(b_range(&t, true, 2), 0..2);
        assert_eq!(b_range(&t.children[0], false, 2), 1..2);
        let structures = enumerate_b_structures(&t, 2);
        assert_eq!(structures.len(), 2);
        assert!(structures.iter().all(|s| s.is_valid_for(&t)));
        assert_eq!(brute_orbits(&t, 2), 2);
    }

    #[test]
    fn orbit_enumeration_matches_brute_force_and_contribution() {
        for m in 1..=3 {
            for d in 0..=3 {
                let Ok(trees) = enumerate_stable_trees(m, d) else {
                    continue;
                };
                for t in &trees {
                    for n in 1..=3 {
                        let reps = enumerate_b_structures(t, n);
                        let distinct: BTreeSet<_> = reps.iter().collect();
                        assert_eq!(distinct.len(), reps.len());
                        assert_eq!(reps.len(), brute_orbits(t, n), "tree {t} n={n}");
                        let at_one = tree_contribution(t, n).eval_at_one();
                        assert_eq!(at_one.to_usize().unwrap(), reps.len(), "tree {t} n={n}");
                    }
                }
            }
        }
    }

    #[test]
    fn contribution_shape() {
        for m in 1..=3 {
            for d in 1..=3 {
                for t in enumerate_stable_trees(m, d).unwrap() {
                    for n in 1..=4 {
                        let c = tree_contribution(&t, n);
                        assert!(c.is_integral());
                        assert!(c.coeffs().iter().all(|x| *x >= Zero::zero()));
                        if t.vertex_count() > 1 {
                            assert!(c.coeff(0).is_zero(), "tree {t}");
                        }
                        if !t.has_automorphisms() {
                            assert_eq!(c, closed_form_contribution(&t, n), "tree {t} n={n}");
                        }
                    }
                }
            }
        }
    }
}
