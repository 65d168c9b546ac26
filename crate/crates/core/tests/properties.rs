use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;

use stablemaps_core::partitions::{
    all_two_partitions, are_compatible, good_family_to_tree, tree_to_good_family,
};
use stablemaps_core::poincare::{poincare_recursive, PoincareQuery};
use stablemaps_core::trees::{
    closed_form_contribution, enumerate_b_structures, enumerate_md_trees, enumerate_stable_trees,
    tree_contribution, MDTree, RootedMTree,
};

/// Rebuilds `t` bottom-up with leaves and children in random order.
fn shuffled(t: &RootedMTree, rng: &mut StdRng) -> RootedMTree {
    let mut leaves = t.leaves.clone();
    leaves.shuffle(rng);
    let mut children: Vec<RootedMTree> = t.children.iter().map(|c| shuffled(c, rng)).collect();
    children.shuffle(rng);
    RootedMTree::new(t.degree, leaves, children)
}

fn shuffled_md(t: &MDTree, rng: &mut StdRng) -> MDTree {
    let mut marks = t.marks.clone();
    marks.shuffle(rng);
    let mut labels = t.degree_labels.clone();
    labels.shuffle(rng);
    let mut children: Vec<MDTree> = t.children.iter().map(|c| shuffled_md(c, rng)).collect();
    children.shuffle(rng);
    MDTree::new(marks, labels, children)
}

/// `(m, d)` with at least one stable tree and a small enumeration.
fn small_md() -> impl Strategy<Value = (u32, u32)> {
    (1u32..=4, 0u32..=4).prop_filter("stable and small", |&(m, d)| {
        m + d <= 6 && (d > 0 || m >= 3)
    })
}

fn pick<T: Clone>(list: &[T], i: usize) -> T {
    list[i % list.len()].clone()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn canonical_form_ignores_construction_order((m, d) in small_md(), i in any::<usize>(), seed in any::<u64>()) {
        let t = pick(&enumerate_stable_trees(m, d).unwrap(), i);
        let mut rng = StdRng::seed_from_u64(seed);
        let a = shuffled(&t, &mut rng);
        let b = shuffled(&t, &mut rng);
        prop_assert_eq!(&a, &t);
        prop_assert_eq!(&b, &t);
        prop_assert!(a.is_canonical());
        prop_assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&t).unwrap());
    }

    #[test]
    fn md_canonical_form_and_good_family((m, d) in small_md(), i in any::<usize>(), seed in any::<u64>()) {
        let t = pick(&enumerate_md_trees(m, d).unwrap(), i);
        let mut rng = StdRng::seed_from_u64(seed);
        let s = shuffled_md(&t, &mut rng);
        prop_assert_eq!(&s, &t.canonical());
        let family = tree_to_good_family(&s);
        prop_assert_eq!(&family, &tree_to_good_family(&t));
        prop_assert_eq!(good_family_to_tree(&family, m, d).unwrap(), t.canonical());
    }

    #[test]
    fn contribution_shape((m, d) in small_md(), i in any::<usize>(), n in 1u32..=4) {
        let t = pick(&enumerate_stable_trees(m, d).unwrap(), i);
        let p = tree_contribution(&t, n);
        let count = enumerate_b_structures(&t, n).len();
        prop_assert_eq!(p.eval_at_one(), BigRational::from_integer(BigInt::from(count)));
        for c in p.coeffs() {
            prop_assert!(c.is_integer() && *c >= BigRational::zero());
        }
        if t.vertex_count() > 1 {
            prop_assert!(p.coeff(0).is_zero());
        }
        if !t.has_automorphisms() {
            prop_assert_eq!(p, closed_form_contribution(&t, n));
        }
    }

    #[test]
    fn compatibility_is_symmetric(m in 1u32..=4, d in 1u32..=3, i in any::<usize>(), j in any::<usize>()) {
        let parts = all_two_partitions(m, d);
        prop_assume!(!parts.is_empty());
        let a = pick(&parts, i);
        let b = pick(&parts, j);
        prop_assert_eq!(are_compatible(&a, &b), are_compatible(&b, &a));
        prop_assert!(!are_compatible(&a, &a));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn poincare_polynomials_are_palindromic(n in 1u32..=3, d in 1u32..=3, m in 1u32..=3) {
        let query = PoincareQuery::new(n, d, m).unwrap();
        let p = poincare_recursive(&query).unwrap();
        let top = query.dimension() as usize;
        prop_assert_eq!(p.degree(), Some(top));
        prop_assert_eq!(p.reflect(top), p.clone());
        prop_assert!(p.coeffs().iter().all(|c| c.is_integer() && *c > BigRational::zero()));
    }
}
