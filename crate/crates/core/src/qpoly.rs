//! Exact univariate polynomials in `q` and the q-combinatorial operators built
//! on them: q-integers, Gaussian binomials, symmetric powers and the degree
//! convolution of polynomial families.

use std::collections::BTreeMap;
use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::sync::RwLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// A polynomial in `q` with rational coefficients.
///
/// `coeffs[i]` is the coefficient of `q^i`. The vector never has trailing
/// zeros, so the zero polynomial is the empty vector and equality is
/// structural.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct QPoly {
    coeffs: Vec<BigRational>,
}

impl QPoly {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// `c * q^k`
    pub fn monomial(c: BigRational, k: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); k + 1];
        coeffs[k] = c;
        Self::from_coeffs(coeffs)
    }

    /// `q^k`
    pub fn q_pow(k: usize) -> Self {
        Self::monomial(BigRational::one(), k)
    }

    pub fn from_coeffs(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_ints<I>(coeffs: I) -> Self
    where
        I: IntoIterator,
        I::Item: Into<BigInt>,
    {
        Self::from_coeffs(
            coeffs
                .into_iter()
                .map(|c| BigRational::from_integer(c.into()))
                .collect(),
        )
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Multiplies by `q^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigRational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self { coeffs }
    }

    /// The substitution `q -> q^j`.
    pub fn substitute_power(&self, j: usize) -> Self {
        assert!(j > 0, "substitute_power needs a positive exponent");
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigRational::zero(); (self.coeffs.len() - 1) * j + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * j] = c.clone();
        }
        Self { coeffs }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Long division, returning `(quotient, remainder)`.
    pub fn div_rem(&self, divisor: &QPoly) -> Result<(QPoly, QPoly)> {
        let lead = divisor.leading_coeff().ok_or(Error::DivisionByZero)?;
        let dd = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((QPoly::zero(), self.clone()));
        }
        let mut quot = vec![BigRational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] / lead;
            if c.is_zero() {
                continue;
            }
            for (i, b) in divisor.coeffs.iter().enumerate() {
                rem[k + i] -= &c * b;
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((QPoly::from_coeffs(quot), QPoly::from_coeffs(rem)))
    }

    /// Division that must leave no remainder.
    pub fn div_exact(&self, divisor: &QPoly) -> Result<QPoly> {
        let (quot, rem) = self.div_rem(divisor)?;
        if rem.is_zero() {
            Ok(quot)
        } else {
            Err(Error::InexactDivision(rem.to_string()))
        }
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_at_one(&self) -> BigRational {
        self.coeffs.iter().sum()
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// The coefficient list as integers; fails if any coefficient is fractional.
    pub fn integer_coeffs(&self) -> Result<Vec<BigInt>> {
        self.coeffs
            .iter()
            .map(|c| {
                if c.is_integer() {
                    Ok(c.to_integer())
                } else {
                    Err(Error::NonIntegral(self.to_string()))
                }
            })
            .collect()
    }

    /// `q^top * self(1/q)`, the coefficient reversal used for duality checks.
    /// `top` must be at least the degree.
    pub fn reflect(&self, top: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); top + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[top - i] = c.clone();
        }
        Self::from_coeffs(coeffs)
    }
}

/// `1 + q + ... + q^(k-1)`; zero for `k <= 0`.
pub fn q_int(k: i64) -> QPoly {
    if k <= 0 {
        return QPoly::zero();
    }
    QPoly::from_coeffs(vec![BigRational::one(); k as usize])
}

/// `q^k - 1`
fn q_pow_minus_one(k: usize) -> QPoly {
    &QPoly::q_pow(k) - &QPoly::one()
}

/// The Gaussian binomial written as a quotient of q-Pochhammer-type products,
///
/// ```text
/// (q^top - 1)(q^(top+1) - 1)...(q^(top+i-1) - 1)
/// ----------------------------------------------
///       (q - 1)(q^2 - 1)...(q^i - 1)
/// ```
///
/// evaluated by exact division of the expanded numerator by the expanded
/// denominator. This is `[top + i - 1 choose i]_q`.
pub fn gaussian_binomial(top: i64, i: u32) -> Result<QPoly> {
    if i == 0 {
        return Ok(QPoly::one());
    }
    if top < 0 {
        return Err(Error::InvalidParameters(format!(
            "Gaussian binomial numerator starts at negative exponent {top}"
        )));
    }
    let top = top as usize;
    let i = i as usize;
    let numerator: QPoly = (0..i).map(|k| q_pow_minus_one(top + k)).product();
    let denominator: QPoly = (1..=i).map(q_pow_minus_one).product();
    numerator.div_exact(&denominator)
}

/// Generating polynomial of size-`i` multisets drawn from the weighted objects
/// counted by `f`.
///
/// Uses the Newton-type recurrence `i S^i(f) = sum_{j=1..i} f(q^j) S^(i-j)(f)`,
/// which is the coefficient form of `exp(sum_j f(q^j) t^j / j)`.
pub fn sym_power(f: &QPoly, i: u32) -> QPoly {
    let i = i as usize;
    let powered: Vec<QPoly> = (1..=i).map(|j| f.substitute_power(j)).collect();
    let mut table: Vec<QPoly> = Vec::with_capacity(i + 1);
    table.push(QPoly::one());
    for k in 1..=i {
        let sum: QPoly = (1..=k).map(|j| &powered[j - 1] * &table[k - j]).sum();
        table.push(sum.scale(&BigRational::new(BigInt::one(), BigInt::from(k))));
    }
    table.swap_remove(i)
}

/// Lazy degree convolution `sum_{e=0..d} left(e) * right(d - e)`.
///
/// `right` is evaluated first and `left(e)` is skipped whenever `right(d - e)`
/// vanishes, so a family may appear on the left of its own recursion as long
/// as the matching right-hand factor is zero.
pub fn convolve<L, R>(d: u32, mut left: L, mut right: R) -> Result<QPoly>
where
    L: FnMut(u32) -> Result<QPoly>,
    R: FnMut(u32) -> Result<QPoly>,
{
    let mut acc = QPoly::zero();
    for e in 0..=d {
        let r = right(d - e)?;
        if r.is_zero() {
            continue;
        }
        let l = left(e)?;
        acc += &l * &r;
    }
    Ok(acc)
}

/// A degree-indexed family `d -> QPoly` with fill-once entries.
///
/// Entries are never overwritten. Filling an existing degree with the same
/// value is a no-op; filling it with a different value is an error.
#[derive(Debug, Default)]
pub struct GfTable {
    entries: RwLock<BTreeMap<u32, QPoly>>,
}

impl GfTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_fn(max_degree: u32, f: impl Fn(u32) -> QPoly) -> Self {
        let table = Self::new();
        for d in 0..=max_degree {
            table.insert(d, f(d)).expect("fresh table cannot conflict");
        }
        table
    }

    pub fn get(&self, d: u32) -> Option<QPoly> {
        self.entries.read().unwrap().get(&d).cloned()
    }

    pub fn insert(&self, d: u32, value: QPoly) -> Result<QPoly> {
        let mut entries = self.entries.write().unwrap();
        match entries.get(&d) {
            Some(existing) if *existing != value => Err(Error::InconsistentFill(d)),
            Some(existing) => Ok(existing.clone()),
            None => {
                entries.insert(d, value.clone());
                Ok(value)
            }
        }
    }

    /// Returns the entry for `d`, computing it with `fill` if absent. `fill`
    /// runs without holding the lock, so it may recurse into this table.
    pub fn get_or_try_fill(&self, d: u32, fill: impl FnOnce() -> Result<QPoly>) -> Result<QPoly> {
        if let Some(v) = self.get(d) {
            return Ok(v);
        }
        let value = fill()?;
        self.insert(d, value)
    }

    pub fn len(&self) -> usize {
        self.entries.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn entries(&self) -> Vec<(u32, QPoly)> {
        self.entries
            .read()
            .unwrap()
            .iter()
            .map(|(d, p)| (*d, p.clone()))
            .collect()
    }
}

/// `(P * Q)(d) = sum_{e=0..d} P(e) Q(d - e)` over two filled tables.
pub fn star(p: &GfTable, q: &GfTable, d: u32) -> Result<QPoly> {
    (0..=d).try_fold(QPoly::zero(), |acc, e| {
        let left = p.get(e).ok_or(Error::MissingEntry(e))?;
        let right = q.get(d - e).ok_or(Error::MissingEntry(d - e))?;
        Ok(acc + &left * &right)
    })
}

impl Add<&QPoly> for &QPoly {
    type Output = QPoly;

    fn add(self, rhs: &QPoly) -> QPoly {
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut coeffs = long.coeffs.clone();
        for (c, s) in coeffs.iter_mut().zip(&short.coeffs) {
            *c += s;
        }
        QPoly::from_coeffs(coeffs)
    }
}

impl Add<&QPoly> for QPoly {
    type Output = QPoly;

    fn add(self, rhs: &QPoly) -> QPoly {
        &self + rhs
    }
}

impl Add for QPoly {
    type Output = QPoly;

    fn add(self, rhs: QPoly) -> QPoly {
        &self + &rhs
    }
}

impl AddAssign<&QPoly> for QPoly {
    fn add_assign(&mut self, rhs: &QPoly) {
        if self.coeffs.len() < rhs.coeffs.len() {
            self.coeffs.resize(rhs.coeffs.len(), BigRational::zero());
        }
        for (c, r) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *c += r;
        }
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }
}

impl AddAssign for QPoly {
    fn add_assign(&mut self, rhs: QPoly) {
        *self += &rhs;
    }
}

impl Neg for &QPoly {
    type Output = QPoly;

    fn neg(self) -> QPoly {
        QPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Sub<&QPoly> for &QPoly {
    type Output = QPoly;

    fn sub(self, rhs: &QPoly) -> QPoly {
        self + &(-rhs)
    }
}

impl Sub for QPoly {
    type Output = QPoly;

    fn sub(self, rhs: QPoly) -> QPoly {
        &self - &rhs
    }
}

impl Mul<&QPoly> for &QPoly {
    type Output = QPoly;

    fn mul(self, rhs: &QPoly) -> QPoly {
        if self.is_zero() || rhs.is_zero() {
            return QPoly::zero();
        }
        let mut coeffs = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        QPoly::from_coeffs(coeffs)
    }
}

impl Mul for QPoly {
    type Output = QPoly;

    fn mul(self, rhs: QPoly) -> QPoly {
        &self * &rhs
    }
}

impl Sum for QPoly {
    fn sum<I: Iterator<Item = QPoly>>(iter: I) -> QPoly {
        iter.fold(QPoly::zero(), |mut acc, p| {
            acc += &p;
            acc
        })
    }
}

impl Product for QPoly {
    fn product<I: Iterator<Item = QPoly>>(iter: I) -> QPoly {
        iter.fold(QPoly::one(), |acc, p| &acc * &p)
    }
}

/// Ascending powers with explicit coefficients: `1 + 3q + q^2`.
impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let magnitude = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            let unit = magnitude.is_one();
            match (i, unit, magnitude.is_integer()) {
                (0, _, _) => write!(f, "{magnitude}")?,
                (_, true, _) => {}
                (_, false, true) => write!(f, "{magnitude}")?,
                (_, false, false) => write!(f, "({magnitude})")?,
            }
            match i {
                0 => {}
                1 => write!(f, "q")?,
                _ => write!(f, "q^{i}")?,
            }
        }
        Ok(())
    }
}

/// `C(n, k)` over the integers.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    (0..k).fold(BigInt::one(), |acc, i| {
        acc * BigInt::from(n - i) / BigInt::from(i + 1)
    })
}

/// Number of size-`i` multisets from `c` objects, `C(c + i - 1, i)`.
pub fn multichoose(c: &BigInt, i: u64) -> BigInt {
    if i == 0 {
        return BigInt::one();
    }
    (0..i).fold(BigInt::one(), |acc, k| {
        acc * (c + BigInt::from(k)) / BigInt::from(k + 1)
    })
}
