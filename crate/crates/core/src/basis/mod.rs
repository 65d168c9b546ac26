//! The additive basis of the Chow groups indexed by decorated trees, and the
//! generators-and-relations presentation of the Chow ring.

mod relations;
mod ring;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::combinat::permutations;
use crate::error::{Error, Result};
use crate::partitions::{edge_partition, TwoPartition};
use crate::poincare::PoincareQuery;
use crate::trees::{
    assign_d_labels, enumerate_b_structures, enumerate_stable_trees, BStructure, RootedMTree,
};

pub use relations::{
    divisor_factors, emit_relations, DivisorFactors, Relation, RelationFamily, MAX_RELATION_SIZE,
};
pub use ring::{Monomial, RingExpression};

/// Largest degree for which the symmetrization is expanded term by term.
pub const MAX_EXPANDED_DEGREE: u32 = 4;

/// `[τ_k] = H^(k - Σ b) ψ^(b(r)) sym_d(Π_{v ≠ r} T_v^(b(v)))`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct BasisClass {
    pub tree: RootedMTree,
    pub b: BStructure,
    pub k: u32,
    pub h_power: u32,
    pub psi_power: u32,
}

/// One class per decorated tree `(τ, b)` with `k - n <= Σ b(v) <= k`, in tree
/// order then b-structure order.
pub fn enumerate_basis(n: u32, d: u32, m: u32, k: u32) -> Result<Vec<BasisClass>> {
    let query = PoincareQuery::new(n, d, m)?;
    if k > query.dimension() {
        return Err(Error::InvalidParameters(format!(
            "k={k} exceeds the dimension {}",
            query.dimension()
        )));
    }
    let mut out = Vec::new();
    for tree in enumerate_stable_trees(m, d)? {
        for b in enumerate_b_structures(&tree, n) {
            let total = b.total();
            if total <= k && k - total <= n {
                out.push(BasisClass {
                    tree: tree.clone(),
                    k,
                    h_power: k - total,
                    psi_power: b.root(),
                    b,
                });
            }
        }
    }
    Ok(out)
}

/// `H^a ψ^b sym_d(Π T^e)` with the `T` factors read off one fixed labeling
/// of the tree by `D`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompactClass {
    pub h_power: u32,
    pub psi_power: u32,
    pub d: u32,
    #[serde(serialize_with = "factors_by_key")]
    pub factors: BTreeMap<TwoPartition, u32>,
}

fn factors_by_key<S: serde::Serializer>(
    factors: &BTreeMap<TwoPartition, u32>,
    s: S,
) -> Result<S::Ok, S::Error> {
    s.collect_map(factors.iter().map(|(p, e)| (p.key(), e)))
}

impl CompactClass {
    fn monomial(&self) -> Monomial {
        Monomial {
            h: self.h_power,
            psi: self.psi_power,
            t: self.factors.clone(),
        }
    }
}

impl fmt::Display for CompactClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let head = Monomial {
            h: self.h_power,
            psi: self.psi_power,
            t: BTreeMap::new(),
        };
        let sym = Monomial {
            t: self.factors.clone(),
            ..Monomial::default()
        };
        match (head.is_one(), sym.is_one()) {
            (_, true) => write!(f, "{head}"),
            (true, false) => write!(f, "sym_{}({sym})", self.d),
            (false, false) => write!(f, "{head} sym_{}({sym})", self.d),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum ClassExpression {
    Compact(CompactClass),
    Expanded(RingExpression),
}

impl fmt::Display for ClassExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassExpression::Compact(c) => write!(f, "{c}"),
            ClassExpression::Expanded(e) => write!(f, "{e}"),
        }
    }
}

/// The class of `c` in the generators `H`, `ψ`, `T_h`. With `expand_sym` the
/// symmetrization is written out as the average over all permutations of
/// `D`, which is only allowed up to degree [`MAX_EXPANDED_DEGREE`].
pub fn class_expression(c: &BasisClass, expand_sym: bool) -> Result<ClassExpression> {
    let d = c.tree.total_degree();
    let labeled = assign_d_labels(&c.tree);
    let mut factors = BTreeMap::new();
    for (i, v) in labeled.preorder().into_iter().enumerate().skip(1) {
        if c.b.b[i] > 0 {
            *factors.entry(edge_partition(v)).or_insert(0) += c.b.b[i];
        }
    }
    let compact = CompactClass {
        h_power: c.h_power,
        psi_power: c.psi_power,
        d,
        factors,
    };
    if !expand_sym {
        return Ok(ClassExpression::Compact(compact));
    }
    if d > MAX_EXPANDED_DEGREE {
        return Err(Error::Intractable(format!(
            "symmetrizing over S_{d} is limited to degree {MAX_EXPANDED_DEGREE}"
        )));
    }
    let perms = permutations(d);
    let weight = BigRational::new(BigInt::from(1), BigInt::from(perms.len()));
    let base = compact.monomial();
    let mut out = RingExpression::zero();
    for perm in &perms {
        let image = Monomial {
            t: base
                .t
                .iter()
                .map(|(p, e)| (p.permute_degree_labels(perm), *e))
                .collect(),
            ..base.clone()
        };
        out.add_term(image, weight.clone());
    }
    Ok(ClassExpression::Expanded(out))
}
