use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use super::ring::RingExpression;
use crate::error::{Error, Result};
use crate::partitions::{all_two_partitions, Label, TwoPartition};
use crate::poincare::PoincareQuery;
use crate::qpoly::binomial;

/// Largest `d + m` for which relations are emitted.
pub const MAX_RELATION_SIZE: u32 = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum RelationFamily {
    /// `H^(n+1)`
    #[serde(rename = "1")]
    HyperplanePower,
    /// `T_h T_h'` for crossing `h`, `h'`
    #[serde(rename = "2")]
    Crossing,
    /// `T_h T_h' (ψ + Σ_{h ∪ h' ⊆ h''} T_h'')`
    #[serde(rename = "3a")]
    PsiPair,
    /// `T_h (ψ + Σ_{h ∪ {i} ⊆ h'} T_h')`
    #[serde(rename = "3b")]
    PsiMark,
    /// `ψ + Σ_{{i,j} ⊆ h} T_h`
    #[serde(rename = "3c")]
    PsiTwoMarks,
    /// `(H + dψ + Σ_{i ∈ h} |h ∩ M'| T_h)^(n+1)`
    #[serde(rename = "4")]
    MarkHyperplane,
    /// The relation attached to each divisor `T_h`.
    #[serde(rename = "5")]
    Divisor,
}

impl RelationFamily {
    pub fn tag(self) -> &'static str {
        match self {
            RelationFamily::HyperplanePower => "1",
            RelationFamily::Crossing => "2",
            RelationFamily::PsiPair => "3a",
            RelationFamily::PsiMark => "3b",
            RelationFamily::PsiTwoMarks => "3c",
            RelationFamily::MarkHyperplane => "4",
            RelationFamily::Divisor => "5",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Relation {
    pub family: RelationFamily,
    /// Which instance of the family, e.g. `h={2_M,1_D}`.
    pub label: String,
    #[serde(rename = "terms")]
    pub expr: RingExpression,
}

fn int(c: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(c.into())
}

fn t_sum<'a>(parts: impl IntoIterator<Item = (&'a TwoPartition, u64)>) -> RingExpression {
    let mut out = RingExpression::zero();
    for (p, c) in parts {
        out.add_term(super::ring::Monomial::t(p.clone()), int(c));
    }
    out
}

/// The pieces of the divisor relation for the pair `(h, h')`:
///
/// ```text
/// A(t) = H + |ᶜh_D| ψ + Σ_{h'' ⊋ h'} |h''_D \ h_D| T_h'' + a' t
/// B    = H + |ᶜh_D ∩ ᶜh'_D| ψ + Σ_{h'' ⊋ h'} |h''_D \ (h_D ∪ h'_D)| T_h''
/// Ψ(t) = ψ + Σ_{h'' ⊋ h'} T_h'' + t
/// ```
///
/// with `a' = |h'_D \ h_D|`, so that `A(t) - B = a' Ψ(t)`. The fields hold
/// these at `t = T_h'` and at `t = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorFactors {
    pub weight: u32,
    pub a: RingExpression,
    pub a_zero: RingExpression,
    pub b: RingExpression,
    pub psi: RingExpression,
    pub psi_zero: RingExpression,
}

pub fn divisor_factors(
    h: &TwoPartition,
    h2: &TwoPartition,
    m: u32,
    d: u32,
) -> Result<DivisorFactors> {
    for p in [h, h2] {
        TwoPartition::new(p.labels().iter().copied(), m, d)?;
    }
    Ok(factors_with(h, h2, d, &all_two_partitions(m, d)))
}

fn factors_with(
    h: &TwoPartition,
    h2: &TwoPartition,
    d: u32,
    generators: &[TwoPartition],
) -> DivisorFactors {
    let hd = h.degree_part();
    let h2d = h2.degree_part();
    let weight = h2d.difference(&hd).count() as u32;
    let c = d - hd.len() as u32;
    let c2 = d - hd.union(&h2d).count() as u32;
    let above: Vec<&TwoPartition> = generators
        .iter()
        .filter(|g| *g != h2 && h2.is_subset(g))
        .collect();

    let a_zero = &(&RingExpression::h() + &RingExpression::psi().scale_int(c.into()))
        + &t_sum(above.iter().map(|g| {
            let gd = g.degree_part();
            (*g, gd.difference(&hd).count() as u64)
        }));
    let b = &(&RingExpression::h() + &RingExpression::psi().scale_int(c2.into()))
        + &t_sum(above.iter().map(|g| {
            let gd = g.degree_part();
            (
                *g,
                gd.iter()
                    .filter(|x| !hd.contains(x) && !h2d.contains(x))
                    .count() as u64,
            )
        }));
    let psi_zero = &RingExpression::psi() + &t_sum(above.iter().map(|g| (*g, 1)));
    let t = RingExpression::t(h2.clone());
    DivisorFactors {
        weight,
        a: &a_zero + &t.scale_int(weight.into()),
        a_zero,
        b,
        psi: &psi_zero + &t,
        psi_zero,
    }
}

fn powers(x: &RingExpression, top: u32) -> Vec<RingExpression> {
    let mut out = vec![RingExpression::one()];
    for i in 1..=top as usize {
        let next = &out[i - 1] * x;
        out.push(next);
    }
    out
}

/// `T_h (Σ_{h' ≠ h} [P(t_h')]_{t=0}^{t=T_h'} + ψ^(-1)((H + cψ)^(n+1) - H^(n+1)))`
/// with `P(t) = Ψ(t)^(-1)(A(t)^(n+1) - B^(n+1)) = a' Σ_j A(t)^j B^(n-j)`.
fn divisor_relation(
    h: &TwoPartition,
    n: u32,
    d: u32,
    generators: &[TwoPartition],
) -> RingExpression {
    let mut inner = RingExpression::zero();
    for h2 in generators.iter().filter(|g| *g != h) {
        let f = factors_with(h, h2, d, generators);
        if f.weight == 0 {
            continue;
        }
        let a = powers(&f.a, n);
        let a0 = powers(&f.a_zero, n);
        let b = powers(&f.b, n);
        let mut diff = RingExpression::zero();
        for j in 0..=n as usize {
            diff = &diff + &(&(&a[j] - &a0[j]) * &b[n as usize - j]);
        }
        inner = &inner + &diff.scale_int(f.weight.into());
    }
    let c = d - h.degree_part().len() as u32;
    let mut tail = RingExpression::zero();
    for j in 1..=n + 1 {
        let coeff = int(binomial(u64::from(n) + 1, u64::from(j))) * int(BigInt::from(c).pow(j));
        tail.add_term(
            super::ring::Monomial {
                h: n + 1 - j,
                psi: j - 1,
                ..Default::default()
            },
            coeff,
        );
    }
    &RingExpression::t(h.clone()) * &(&inner + &tail)
}

/// Every generator of the ideal of relations, family by family. Instances
/// that expand to zero are left out.
pub fn emit_relations(n: u32, d: u32, m: u32) -> Result<Vec<Relation>> {
    PoincareQuery::new(n, d, m)?;
    if d + m > MAX_RELATION_SIZE {
        return Err(Error::Intractable(format!(
            "relations are emitted for d + m <= {MAX_RELATION_SIZE}, got {}",
            d + m
        )));
    }
    let gens = all_two_partitions(m, d);
    let marks: Vec<u32> = (2..=m).collect();
    let mut out = Vec::new();
    let mut push = |family, label: String, expr: RingExpression| {
        if !expr.is_zero() {
            out.push(Relation {
                family,
                label,
                expr,
            });
        }
    };

    push(
        RelationFamily::HyperplanePower,
        format!("H^{}", n + 1),
        RingExpression::h().pow(n + 1),
    );

    for (i, a) in gens.iter().enumerate() {
        for b in &gens[i + 1..] {
            if !(a.is_disjoint(b) || a.is_subset(b) || b.is_subset(a)) {
                push(
                    RelationFamily::Crossing,
                    format!("T{a} T{b}"),
                    &RingExpression::t(a.clone()) * &RingExpression::t(b.clone()),
                );
            }
        }
    }

    for (i, a) in gens.iter().enumerate() {
        for b in &gens[i + 1..] {
            let above = gens.iter().filter(|g| a.is_subset(g) && b.is_subset(g));
            let factor = &RingExpression::psi() + &t_sum(above.map(|g| (g, 1)));
            let pair = &RingExpression::t(a.clone()) * &RingExpression::t(b.clone());
            push(
                RelationFamily::PsiPair,
                format!("h={a}, h'={b}"),
                &pair * &factor,
            );
        }
    }

    if m >= 2 {
        for h in &gens {
            for &i in marks.iter().filter(|&&i| !h.contains(Label::M(i))) {
                let above = gens
                    .iter()
                    .filter(|g| h.is_subset(g) && g.contains(Label::M(i)));
                let factor = &RingExpression::psi() + &t_sum(above.map(|g| (g, 1)));
                push(
                    RelationFamily::PsiMark,
                    format!("h={h}, i={}", Label::M(i)),
                    &RingExpression::t(h.clone()) * &factor,
                );
            }
        }
    }

    if m >= 3 {
        for (x, &i) in marks.iter().enumerate() {
            for &j in &marks[x + 1..] {
                let above = gens
                    .iter()
                    .filter(|g| g.contains(Label::M(i)) && g.contains(Label::M(j)));
                push(
                    RelationFamily::PsiTwoMarks,
                    format!("i={}, j={}", Label::M(i), Label::M(j)),
                    &RingExpression::psi() + &t_sum(above.map(|g| (g, 1))),
                );
            }
        }
    }

    if m > 1 {
        for &i in &marks {
            let base = &RingExpression::h() + &RingExpression::psi().scale_int(d.into());
            let terms = t_sum(
                gens.iter()
                    .filter(|g| g.contains(Label::M(i)))
                    .map(|g| (g, g.mark_part().len() as u64)),
            );
            push(
                RelationFamily::MarkHyperplane,
                format!("i={}", Label::M(i)),
                (&base + &terms).pow(n + 1),
            );
        }
    }

    for h in &gens {
        push(
            RelationFamily::Divisor,
            format!("h={h}"),
            divisor_relation(h, n, d, &gens),
        );
    }
    Ok(out)
}
