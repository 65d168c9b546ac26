//! Stable 2-partitions of `M ⊔ D`, good families, and the correspondence
//! between good families and `(M,D)`-trees.
//!
//! A 2-partition is stored by its side `h` that does not contain `1_M`; the
//! other side is everything else, `1_M` included. The labels available to `h`
//! form `D' = (M \ {1_M}) ⊔ D`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::trees::MDTree;

/// A marked point `i_M` or a degree label `j_D`. Marked points sort first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum Label {
    M(u32),
    D(u32),
}

impl Label {
    pub fn is_mark(self) -> bool {
        matches!(self, Label::M(_))
    }

    pub fn is_degree(self) -> bool {
        matches!(self, Label::D(_))
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::M(i) => write!(f, "{i}_M"),
            Label::D(i) => write!(f, "{i}_D"),
        }
    }
}

impl FromStr for Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidPartition(format!("cannot parse label {s:?}"));
        let (num, kind) = s.split_once('_').ok_or_else(bad)?;
        let i: u32 = num.parse().map_err(|_| bad())?;
        if i == 0 {
            return Err(bad());
        }
        match kind {
            "M" => Ok(Label::M(i)),
            "D" => Ok(Label::D(i)),
            _ => Err(bad()),
        }
    }
}

impl From<Label> for String {
    fn from(l: Label) -> String {
        l.to_string()
    }
}

impl TryFrom<String> for Label {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

/// `D' = {2_M..m_M} ⊔ {1_D..d_D}` in label order.
pub fn d_prime(m: u32, d: u32) -> Vec<Label> {
    (2..=m).map(Label::M).chain((1..=d).map(Label::D)).collect()
}

/// A stable 2-partition, keyed by its side `h` not containing `1_M`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TwoPartition {
    h: BTreeSet<Label>,
}

impl TwoPartition {
    /// Validates `h` against `D'` for the given `m` and `d`: nonempty, not all
    /// of `D'`, and not a single marked point.
    pub fn new(h: impl IntoIterator<Item = Label>, m: u32, d: u32) -> Result<Self> {
        let h: BTreeSet<Label> = h.into_iter().collect();
        let part = Self { h };
        let universe: BTreeSet<Label> = d_prime(m, d).into_iter().collect();
        if let Some(l) = part.h.iter().find(|l| !universe.contains(l)) {
            return Err(Error::InvalidPartition(format!(
                "label {l} is not in D' for m={m}, d={d}"
            )));
        }
        if part.h.is_empty() {
            return Err(Error::InvalidPartition("empty side".into()));
        }
        if part.h.len() == universe.len() {
            return Err(Error::InvalidPartition(format!(
                "{part} leaves 1_M alone on the other side"
            )));
        }
        if !part.is_stable_side() {
            return Err(Error::InvalidPartition(format!(
                "{part} is a single marked point"
            )));
        }
        Ok(part)
    }

    /// Builds the side from labels without validation.
    pub(crate) fn from_labels(h: BTreeSet<Label>) -> Self {
        Self { h }
    }

    fn is_stable_side(&self) -> bool {
        self.h.len() >= 2 || self.h.iter().any(|l| l.is_degree())
    }

    pub fn labels(&self) -> &BTreeSet<Label> {
        &self.h
    }

    pub fn len(&self) -> usize {
        self.h.len()
    }

    pub fn is_empty(&self) -> bool {
        self.h.is_empty()
    }

    pub fn contains(&self, l: Label) -> bool {
        self.h.contains(&l)
    }

    pub fn is_subset(&self, other: &TwoPartition) -> bool {
        self.h.is_subset(&other.h)
    }

    pub fn is_disjoint(&self, other: &TwoPartition) -> bool {
        self.h.is_disjoint(&other.h)
    }

    /// `h_D`
    pub fn degree_part(&self) -> BTreeSet<u32> {
        self.h
            .iter()
            .filter_map(|l| match l {
                Label::D(i) => Some(*i),
                Label::M(_) => None,
            })
            .collect()
    }

    /// `h ∩ M'`
    pub fn mark_part(&self) -> BTreeSet<u32> {
        self.h
            .iter()
            .filter_map(|l| match l {
                Label::M(i) => Some(*i),
                Label::D(_) => None,
            })
            .collect()
    }

    /// Comma-separated labels, the form used as a JSON map key.
    pub fn key(&self) -> String {
        self.h
            .iter()
            .map(Label::to_string)
            .collect::<Vec<_>>()
            .join(",")
    }

    /// The image under a permutation of the `D` labels; `perm[i-1]` is the
    /// image of `i_D`.
    pub fn permute_degree_labels(&self, perm: &[u32]) -> Self {
        Self {
            h: self
                .h
                .iter()
                .map(|l| match l {
                    Label::D(i) => Label::D(perm[*i as usize - 1]),
                    m => *m,
                })
                .collect(),
        }
    }
}

impl fmt::Display for TwoPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.key())
    }
}

/// Every stable 2-partition for `m` marked points and degree `d`, sorted.
pub fn all_two_partitions(m: u32, d: u32) -> Vec<TwoPartition> {
    let universe = d_prime(m, d);
    assert!(universe.len() < 64, "D' too large to enumerate");
    let mut out: Vec<TwoPartition> = (1u64..(1 << universe.len()) - 1)
        .map(|mask| {
            TwoPartition::from_labels(
                universe
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, l)| *l)
                    .collect(),
            )
        })
        .filter(TwoPartition::is_stable_side)
        .collect();
    out.sort();
    out
}

/// Exactly three of the four intersections `A_i ∩ B_j` are nonempty, and those
/// three are pairwise distinct.
///
/// The intersections are taken inside `h ∪ h' ∪ {1_M}`. Labels outside this set
/// lie only in the intersection of the two `1_M` sides, which already
/// contains `1_M`, so emptiness and distinctness are unaffected.
pub fn are_compatible(a: &TwoPartition, b: &TwoPartition) -> bool {
    const ROOT: Label = Label::M(1);
    let mut universe: BTreeSet<Label> = a.h.union(&b.h).copied().collect();
    universe.insert(ROOT);
    let a2: BTreeSet<Label> = universe.difference(&a.h).copied().collect();
    let b2: BTreeSet<Label> = universe.difference(&b.h).copied().collect();
    let sides_a = [&a.h, &a2];
    let sides_b = [&b.h, &b2];
    let nonempty: Vec<BTreeSet<Label>> = sides_a
        .iter()
        .flat_map(|x| {
            sides_b
                .iter()
                .map(move |y| x.intersection(y).copied().collect())
        })
        .filter(|s: &BTreeSet<Label>| !s.is_empty())
        .collect();
    nonempty.len() == 3
        && nonempty[0] != nonempty[1]
        && nonempty[0] != nonempty[2]
        && nonempty[1] != nonempty[2]
}

pub fn is_good_family<'a, I>(parts: I) -> bool
where
    I: IntoIterator<Item = &'a TwoPartition>,
{
    let parts: Vec<&TwoPartition> = parts.into_iter().collect();
    parts
        .iter()
        .enumerate()
        .all(|(i, a)| parts[i + 1..].iter().all(|b| are_compatible(a, b)))
}

/// A set of pairwise compatible stable 2-partitions.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GoodFamily {
    parts: BTreeSet<TwoPartition>,
}

impl GoodFamily {
    pub fn new(parts: impl IntoIterator<Item = TwoPartition>) -> Result<Self> {
        let parts: BTreeSet<TwoPartition> = parts.into_iter().collect();
        for a in &parts {
            for b in parts.range(a..).skip(1) {
                if !are_compatible(a, b) {
                    return Err(Error::NotGood(format!("{a} and {b} cross")));
                }
            }
        }
        Ok(Self { parts })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn parts(&self) -> &BTreeSet<TwoPartition> {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn contains(&self, p: &TwoPartition) -> bool {
        self.parts.contains(p)
    }
}

/// The 2-partition cut by the edge above `branch`: its marks other than
/// `1_M` and its `D` labels.
pub fn edge_partition(t: &MDTree) -> TwoPartition {
    let (marks, ds) = t.subtree_labels();
    TwoPartition::from_labels(
        marks
            .into_iter()
            .filter(|&i| i != 1)
            .map(Label::M)
            .chain(ds.into_iter().map(Label::D))
            .collect(),
    )
}

/// One 2-partition per edge: the labels hanging below the edge.
pub fn tree_to_good_family(t: &MDTree) -> GoodFamily {
    GoodFamily {
        parts: t
            .preorder()
            .into_iter()
            .skip(1)
            .map(edge_partition)
            .collect(),
    }
}

/// The `(M,D)`-tree whose edge partitions are exactly `family`.
///
/// The `h` sides form a laminar family; the tree is its Hasse diagram with a
/// root above the maximal sets, and every label sits at the smallest set
/// containing it (the root if none does).
pub fn good_family_to_tree(family: &GoodFamily, m: u32, d: u32) -> Result<MDTree> {
    if m == 0 {
        return Err(Error::InvalidParameters(
            "at least one marked leaf is required".into(),
        ));
    }
    let universe = d_prime(m, d);
    for p in &family.parts {
        TwoPartition::new(p.h.iter().copied(), m, d)?;
    }
    if !is_good_family(&family.parts) {
        return Err(Error::NotGood(format!("{} parts", family.len())));
    }

    // Node 0 is the root; node i+1 is sets[i]. Larger sets come first, so a
    // set's parent is the last earlier set containing it.
    let mut sets: Vec<&TwoPartition> = family.parts.iter().collect();
    sets.sort_by_key(|s| std::cmp::Reverse(s.len()));
    let parent: Vec<usize> = (0..sets.len())
        .map(|i| {
            (0..i)
                .rev()
                .find(|&j| sets[i].is_subset(sets[j]))
                .map_or(0, |j| j + 1)
        })
        .collect();

    let mut marks = vec![Vec::new(); sets.len() + 1];
    let mut ds = vec![Vec::new(); sets.len() + 1];
    marks[0].push(1);
    for l in universe {
        let home = (0..sets.len())
            .rev()
            .find(|&i| sets[i].contains(l))
            .map_or(0, |i| i + 1);
        match l {
            Label::M(i) => marks[home].push(i),
            Label::D(i) => ds[home].push(i),
        }
    }

    fn build(node: usize, parent: &[usize], marks: &[Vec<u32>], ds: &[Vec<u32>]) -> MDTree {
        let children = (0..parent.len())
            .filter(|&i| parent[i] == node)
            .map(|i| build(i + 1, parent, marks, ds))
            .collect();
        MDTree::new(marks[node].clone(), ds[node].clone(), children)
    }
    let tree = build(0, &parent, &marks, &ds);
    if !tree.is_stable() {
        return Err(Error::Unstable(tree.forget().to_string()));
    }
    Ok(tree)
}

/// Contracts the edge above preorder vertex `edge` (which must be a
/// non-root vertex), merging it into its parent.
pub fn contract_edge(t: &MDTree, edge: usize) -> Result<MDTree> {
    fn walk(t: &MDTree, target: usize, next: &mut usize) -> MDTree {
        *next += 1;
        let mut marks = t.marks.clone();
        let mut ds = t.degree_labels.clone();
        let mut children = Vec::new();
        for c in &t.children {
            if *next == target {
                let merged = walk(c, target, next);
                marks.extend(merged.marks);
                ds.extend(merged.degree_labels);
                children.extend(merged.children);
            } else {
                children.push(walk(c, target, next));
            }
        }
        MDTree::new(marks, ds, children)
    }
    if edge == 0 || edge >= t.vertex_count() {
        return Err(Error::InvalidParameters(format!(
            "edge index {edge} outside 1..{}",
            t.vertex_count()
        )));
    }
    Ok(walk(t, edge, &mut 0))
}
