use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::partitions::{Label, TwoPartition};

/// `H^h ψ^psi Π T_p^e`. Every generator has cohomological degree 1.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub h: u32,
    pub psi: u32,
    pub t: BTreeMap<TwoPartition, u32>,
}

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn h() -> Self {
        Self {
            h: 1,
            ..Self::default()
        }
    }

    pub fn psi() -> Self {
        Self {
            psi: 1,
            ..Self::default()
        }
    }

    pub fn t(p: TwoPartition) -> Self {
        Self {
            t: BTreeMap::from([(p, 1)]),
            ..Self::default()
        }
    }

    pub fn degree(&self) -> u32 {
        self.h + self.psi + self.t.values().sum::<u32>()
    }

    pub fn is_one(&self) -> bool {
        self.degree() == 0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut t = self.t.clone();
        for (p, e) in &other.t {
            *t.entry(p.clone()).or_insert(0) += e;
        }
        Monomial {
            h: self.h + other.h,
            psi: self.psi + other.psi,
            t,
        }
    }
}

/// `H ψ^2 T{2_M,1_D}^3`; the empty monomial prints as `1`.
impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        let mut push = |name: String, e: u32| match e {
            0 => {}
            1 => parts.push(name),
            _ => parts.push(format!("{name}^{e}")),
        };
        push("H".into(), self.h);
        push("psi".into(), self.psi);
        for (p, e) in &self.t {
            push(format!("T{p}"), *e);
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join(" "))
        }
    }
}

/// A polynomial in `H`, `ψ` and the `T_h` with exact rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct RingExpression {
    terms: BTreeMap<Monomial, BigRational>,
}

impl RingExpression {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(Monomial::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn monomial(m: Monomial) -> Self {
        Self::term(m, BigRational::one())
    }

    pub fn term(m: Monomial, c: BigRational) -> Self {
        let mut out = Self::zero();
        out.add_term(m, c);
        out
    }

    pub fn h() -> Self {
        Self::monomial(Monomial::h())
    }

    pub fn psi() -> Self {
        Self::monomial(Monomial::psi())
    }

    pub fn t(p: TwoPartition) -> Self {
        Self::monomial(Monomial::t(p))
    }

    pub fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let slot = self
            .terms
            .entry(m.clone())
            .or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, BigRational> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn scale_int(&self, c: i64) -> Self {
        self.scale(&BigRational::from_integer(BigInt::from(c)))
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Cohomological degrees of the terms present.
    pub fn degrees(&self) -> BTreeSet<u32> {
        self.terms.keys().map(Monomial::degree).collect()
    }

    /// True when all terms share one degree (vacuously for zero).
    pub fn is_homogeneous(&self) -> bool {
        self.degrees().len() <= 1
    }

    /// The `T` variables that occur.
    pub fn t_variables(&self) -> BTreeSet<TwoPartition> {
        self.terms
            .keys()
            .flat_map(|m| m.t.keys().cloned())
            .collect()
    }
}

impl Add for &RingExpression {
    type Output = RingExpression;

    fn add(self, rhs: &RingExpression) -> RingExpression {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Neg for &RingExpression {
    type Output = RingExpression;

    fn neg(self) -> RingExpression {
        RingExpression {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Sub for &RingExpression {
    type Output = RingExpression;

    fn sub(self, rhs: &RingExpression) -> RingExpression {
        self + &(-rhs)
    }
}

impl Mul for &RingExpression {
    type Output = RingExpression;

    fn mul(self, rhs: &RingExpression) -> RingExpression {
        let mut out = RingExpression::zero();
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                out.add_term(a.mul(b), x * y);
            }
        }
        out
    }
}

impl std::iter::Sum for RingExpression {
    fn sum<I: Iterator<Item = RingExpression>>(iter: I) -> Self {
        iter.fold(RingExpression::zero(), |acc, x| &acc + &x)
    }
}

fn coeff_text(c: &BigRational) -> String {
    if c.is_integer() {
        c.to_integer().to_string()
    } else {
        format!("({c})")
    }
}

/// Terms in decreasing monomial order, e.g. `H^2 - 2 psi T{1_D} + (1/2) T{2_D}`.
impl fmt::Display for RingExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let magnitude = c.abs();
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{}", coeff_text(&magnitude))?;
            } else if magnitude.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{} {m}", coeff_text(&magnitude))?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    coeff: String,
    #[serde(rename = "H")]
    h: u32,
    psi: u32,
    #[serde(rename = "T")]
    t: BTreeMap<String, u32>,
}

impl Serialize for RingExpression {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let terms: Vec<TermJson> = self
            .terms
            .iter()
            .rev()
            .map(|(m, c)| TermJson {
                coeff: c.to_string(),
                h: m.h,
                psi: m.psi,
                t: m.t.iter().map(|(p, e)| (p.key(), *e)).collect(),
            })
            .collect();
        terms.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RingExpression {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let terms = Vec::<TermJson>::deserialize(de)?;
        let mut out = RingExpression::zero();
        for term in terms {
            let coeff: BigRational = term.coeff.parse().map_err(D::Error::custom)?;
            let mut t = BTreeMap::new();
            for (key, e) in term.t {
                let labels = key
                    .split(',')
                    .map(str::parse::<Label>)
                    .collect::<Result<BTreeSet<_>, _>>()
                    .map_err(D::Error::custom)?;
                t.insert(TwoPartition::from_labels(labels), e);
            }
            out.add_term(
                Monomial {
                    h: term.h,
                    psi: term.psi,
                    t,
                },
                coeff,
            );
        }
        Ok(out)
    }
}
