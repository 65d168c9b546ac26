//! Poincaré polynomials of `M̄_{0,m}(P^n, d)`, by direct tree summation and
//! by the recursion on the families `P^l_m(d)`.
//!
//! `P^l_m(d)` sums `q^(Σ b(v))` over rooted trees with `m` labeled leaves and
//! total degree `d`, where leaves `1..l` sit on the root. The root uses the
//! bound `0 <= b(r) < (n+1)d(r) + n(r) - 2` with `n(r)` counting only its own
//! leaves and child edges; the other vertices use the usual bound. The values
//! depend on `l` and `m` only through their counts.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::combinat::{integer_partitions, runs};
use crate::error::{Error, Result};
use crate::qpoly::{binomial, convolve, q_int, sym_power, GfTable, QPoly};
use crate::trees::{enumerate_stable_trees, tree_contribution};

/// Parameters `(n, d, m)` of `M̄_{0,m}(P^n, d)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PoincareQuery {
    pub n: u32,
    pub d: u32,
    pub m: u32,
}

impl PoincareQuery {
    pub fn new(n: u32, d: u32, m: u32) -> Result<Self> {
        let q = Self { n, d, m };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in [("n", self.n), ("d", self.d), ("m", self.m)] {
            if value == 0 {
                return Err(Error::InvalidParameters(format!(
                    "{name} must be at least 1"
                )));
            }
        }
        Ok(())
    }

    /// `(n+1)(d+1) + m - 4`
    pub fn dimension(&self) -> u32 {
        (self.n + 1) * (self.d + 1) + self.m - 4
    }
}

impl fmt::Display for PoincareQuery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={}, d={}, m={}", self.n, self.d, self.m)
    }
}

/// `[n+1]_q` times the sum of tree contributions over all stable trees.
pub fn poincare_direct(query: &PoincareQuery) -> Result<QPoly> {
    query.validate()?;
    let sum: QPoly = enumerate_stable_trees(query.m, query.d)?
        .iter()
        .map(|t| tree_contribution(t, query.n))
        .sum();
    Ok(&q_int(i64::from(query.n) + 1) * &sum)
}

/// `[n+1]_q · P^1_m(d)`
pub fn poincare_recursive(query: &PoincareQuery) -> Result<QPoly> {
    query.validate()?;
    Recursion::new(query.n)?.poincare(query)
}

/// The coefficients of `poly`, checked to be integers and to stop exactly at
/// the dimension of the space.
pub fn betti_numbers(poly: &QPoly, query: &PoincareQuery) -> Result<Vec<BigInt>> {
    let expected = query.dimension();
    if poly.degree() != Some(expected as usize) {
        return Err(Error::DimensionMismatch {
            expected,
            found: poly.degree(),
        });
    }
    poly.integer_coeffs()
}

/// Betti numbers from the recursive method.
pub fn betti_table(query: &PoincareQuery) -> Result<Vec<BigInt>> {
    betti_numbers(&poincare_recursive(query)?, query)
}

/// `P^l_m(d)` for projective dimension `n`.
pub fn p_l_m(l: u32, m: u32, d: u32, n: u32) -> Result<QPoly> {
    Recursion::new(n)?.p_l_m(l, m, d)
}

/// `S^i P^0_0(k)`: unordered `i`-tuples of leafless rooted trees, each of
/// degree `k`.
pub fn s_p00(i: u32, k: u32, n: u32) -> Result<QPoly> {
    Recursion::new(n)?.s_p00(i, k)
}

/// Key of a memoized recursion value: `P:l,m,d,n` or `S:i,d,n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CacheKey {
    P { l: u32, m: u32, d: u32, n: u32 },
    S { i: u32, d: u32, n: u32 },
}

impl CacheKey {
    pub fn n(&self) -> u32 {
        match self {
            CacheKey::P { n, .. } | CacheKey::S { n, .. } => *n,
        }
    }
}

impl fmt::Display for CacheKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CacheKey::P { l, m, d, n } => write!(f, "P:{l},{m},{d},{n}"),
            CacheKey::S { i, d, n } => write!(f, "S:{i},{d},{n}"),
        }
    }
}

impl FromStr for CacheKey {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameters(format!("malformed cache key {s:?}"));
        let (kind, rest) = s.split_once(':').ok_or_else(bad)?;
        let nums: Vec<u32> = rest
            .split(',')
            .map(|x| x.parse().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        match (kind, nums.as_slice()) {
            ("P", &[l, m, d, n]) if l <= m => Ok(CacheKey::P { l, m, d, n }),
            ("S", &[i, d, n]) => Ok(CacheKey::S { i, d, n }),
            _ => Err(bad()),
        }
    }
}

/// Memoized evaluation of `P^l_m(d)` and `S^i P^0_0(k)` for a fixed `n`.
///
/// Safe to share between threads; every table entry is filled at most once
/// with a single value.
#[derive(Debug)]
pub struct Recursion {
    n: u32,
    p: RwLock<HashMap<(u32, u32), Arc<GfTable>>>,
    s: RwLock<HashMap<u32, Arc<GfTable>>>,
}

impl Recursion {
    pub fn new(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameters("n must be at least 1".into()));
        }
        Ok(Self {
            n,
            p: RwLock::default(),
            s: RwLock::default(),
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    fn p_table(&self, l: u32, m: u32) -> Arc<GfTable> {
        if let Some(t) = self.p.read().unwrap().get(&(l, m)) {
            return Arc::clone(t);
        }
        Arc::clone(self.p.write().unwrap().entry((l, m)).or_default())
    }

    fn s_table(&self, i: u32) -> Arc<GfTable> {
        if let Some(t) = self.s.read().unwrap().get(&i) {
            return Arc::clone(t);
        }
        Arc::clone(self.s.write().unwrap().entry(i).or_default())
    }

    pub fn poincare(&self, query: &PoincareQuery) -> Result<QPoly> {
        query.validate()?;
        if query.n != self.n {
            return Err(Error::InvalidParameters(format!(
                "query has n={} but the recursion was built for n={}",
                query.n, self.n
            )));
        }
        Ok(&q_int(i64::from(self.n) + 1) * &self.p_l_m(1, query.m, query.d)?)
    }

    pub fn p_l_m(&self, l: u32, m: u32, d: u32) -> Result<QPoly> {
        if l > m {
            return Err(Error::InvalidParameters(format!("l={l} exceeds m={m}")));
        }
        self.p_table(l, m).get_or_try_fill(d, || {
            if l == m {
                self.diagonal(m, d)
            } else {
                self.lower(l, m, d)
            }
        })
    }

    /// `P^l_m = P^{l+1}_m + q Σ_j C(m-l-1, j) P^0_{j+1} ⋆ P^{l+1}_{m-j}`:
    /// the trees where leaf `l+1` is not on the root, split along the root
    /// edge leading to it.
    fn lower(&self, l: u32, m: u32, d: u32) -> Result<QPoly> {
        let k = l + 1;
        let mut split = QPoly::zero();
        for j in 0..=(m - k) {
            let conv = convolve(d, |e| self.p_l_m(0, j + 1, e), |e| self.p_l_m(k, m - j, e))?;
            let c = binomial(u64::from(m - k), u64::from(j));
            split += &conv.scale(&c.into());
        }
        Ok(&self.p_l_m(k, m, d)? + &split.shift(1))
    }

    /// `P^m_m(d)`. A root of positive degree trades one unit of degree for
    /// `n+1` extra root leaves; a root of degree 0 carries `l` leafless
    /// branches whose degrees form a partition of `d`.
    fn diagonal(&self, m: u32, d: u32) -> Result<QPoly> {
        if d == 0 {
            return Ok(q_int(i64::from(m) - 2));
        }
        let k = m + self.n + 1;
        let mut total = self.p_l_m(k, k, d - 1)?;
        for mu in integer_partitions(d) {
            let len = mu.len();
            let root = q_int(i64::from(m) + len as i64 - 2);
            if root.is_zero() {
                continue;
            }
            let mut term = root.shift(len);
            for (part, mult) in runs(&mu) {
                term = &term * &self.s_p00(mult, part)?;
            }
            total += &term;
        }
        Ok(total)
    }

    /// `S^i P^0_0(k)`, the `i`-th symmetric power of `P^0_0(k)`.
    pub fn s_p00(&self, i: u32, k: u32) -> Result<QPoly> {
        if i == 0 {
            return Err(Error::InvalidParameters("i must be at least 1".into()));
        }
        self.s_table(i)
            .get_or_try_fill(k, || Ok(sym_power(&self.p_l_m(0, 0, k)?, i)))
    }

    /// Forests of `i` leafless rooted trees with total degree `d`, read off
    /// the plethystic exponential `exp(Σ_j F(x^j, q^j) t^j / j)` with
    /// `F(x, q) = Σ_e P^0_0(e) x^e`.
    pub fn leafless_forests(&self, i: u32, d: u32) -> Result<QPoly> {
        let base: Vec<QPoly> = (0..=d)
            .map(|e| self.p_l_m(0, 0, e))
            .collect::<Result<_>>()?;
        // powers[j-1][x] = coefficient of x^x in F(x^j, q^j)
        let powers: Vec<Vec<QPoly>> = (1..=i as usize)
            .map(|j| {
                let mut row = vec![QPoly::zero(); d as usize + 1];
                for (e, p) in base.iter().enumerate() {
                    if e * j <= d as usize {
                        row[e * j] = p.substitute_power(j);
                    }
                }
                row
            })
            .collect();
        let mut s: Vec<Vec<QPoly>> = vec![one_at_zero(d)];
        for k in 1..=i as usize {
            let mut acc = vec![QPoly::zero(); d as usize + 1];
            for j in 1..=k {
                let f = &powers[j - 1];
                let prev = &s[k - j];
                for (a, fa) in f.iter().enumerate().filter(|(_, p)| !p.is_zero()) {
                    for (b, pb) in prev.iter().enumerate().take(d as usize + 1 - a) {
                        if !pb.is_zero() {
                            acc[a + b] += &(fa * pb);
                        }
                    }
                }
            }
            let inv = num_rational::BigRational::new(1.into(), (k as i64).into());
            s.push(acc.iter().map(|p| p.scale(&inv)).collect());
        }
        Ok(s[i as usize][d as usize].clone())
    }

    /// Every memoized value, sorted by key.
    pub fn export(&self) -> BTreeMap<CacheKey, QPoly> {
        let n = self.n;
        let mut out = BTreeMap::new();
        for (&(l, m), table) in self.p.read().unwrap().iter() {
            for (d, v) in table.entries() {
                out.insert(CacheKey::P { l, m, d, n }, v);
            }
        }
        for (&i, table) in self.s.read().unwrap().iter() {
            for (d, v) in table.entries() {
                out.insert(CacheKey::S { i, d, n }, v);
            }
        }
        out
    }

    /// Preloads memoized values. Entries for another `n` are skipped; an
    /// entry that disagrees with an existing value is an error.
    pub fn seed(&self, entries: impl IntoIterator<Item = (CacheKey, QPoly)>) -> Result<usize> {
        let mut used = 0;
        for (key, value) in entries {
            if key.n() != self.n {
                continue;
            }
            match key {
                CacheKey::P { l, m, d, .. } => self.p_table(l, m).insert(d, value)?,
                CacheKey::S { i, d, .. } => self.s_table(i).insert(d, value)?,
            };
            used += 1;
        }
        Ok(used)
    }
}

fn one_at_zero(d: u32) -> Vec<QPoly> {
    let mut v = vec![QPoly::zero(); d as usize + 1];
    v[0] = QPoly::one();
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qpoly::gaussian_binomial;
    use crate::trees::enumerate_rooted;

    /// `P^l_m(d)` straight from its definition.
    fn brute_p(l: u32, m: u32, d: u32, n: u32) -> QPoly {
        let root: Vec<u32> = (1..=l).collect();
        let rest: Vec<u32> = (l + 1..=m).collect();
        enumerate_rooted(&root, &rest, d)
            .iter()
            .map(|t| tree_contribution(t, n))
            .sum()
    }

    /// Unordered tuples of leafless trees with b-structures, one component
    /// per entry of `degrees`, listed object by object.
    fn brute_forests(degrees: &[u32], n: u32) -> QPoly {
        use crate::trees::enumerate_b_structures;
        fn rec(
            degrees: &[u32],
            pool: &BTreeMap<u32, Vec<u32>>,
            min: (u32, usize),
            acc: u32,
            out: &mut QPoly,
        ) {
            let Some((&e, rest)) = degrees.split_first() else {
                *out += &QPoly::q_pow(acc as usize);
                return;
            };
            for (idx, w) in pool[&e].iter().enumerate() {
                if (e, idx) >= min {
                    rec(rest, pool, (e, idx), acc + w, out);
                }
            }
        }
        let mut sorted = degrees.to_vec();
        sorted.sort_unstable();
        let pool: BTreeMap<u32, Vec<u32>> = sorted
            .iter()
            .map(|&e| {
                let weights = enumerate_rooted(&[], &[], e)
                    .iter()
                    .flat_map(|t| enumerate_b_structures(t, n))
                    .map(|b| b.total())
                    .collect();
                (e, weights)
            })
            .collect();
        let mut out = QPoly::zero();
        rec(&sorted, &pool, (0, 0), 0, &mut out);
        out
    }

    #[test]
    fn query_validation() {
        assert!(PoincareQuery::new(0, 1, 1).is_err());
        assert!(PoincareQuery::new(1, 0, 1).is_err());
        assert!(PoincareQuery::new(1, 1, 0).is_err());
        assert_eq!(PoincareQuery::new(2, 2, 2).unwrap().dimension(), 7);
    }

    #[test]
    fn projective_line() {
        let q = PoincareQuery::new(1, 1, 1).unwrap();
        let expected = QPoly::from_ints([1, 1]);
        assert_eq!(poincare_direct(&q).unwrap(), expected);
        assert_eq!(poincare_recursive(&q).unwrap(), expected);
        assert_eq!(
            betti_table(&q).unwrap(),
            vec![BigInt::from(1), BigInt::from(1)]
        );
    }

    #[test]
    fn degree_one_one_point() {
        for n in 1..=5 {
            let q = PoincareQuery::new(n, 1, 1).unwrap();
            let expected = &q_int(i64::from(n) + 1) * &q_int(i64::from(n));
            assert_eq!(poincare_direct(&q).unwrap(), expected);
            assert_eq!(poincare_recursive(&q).unwrap(), expected);
        }
    }

    #[test]
    fn recursion_matches_definition() {
        for n in 1..=3 {
            let r = Recursion::new(n).unwrap();
            for m in 0..=4 {
                for l in 0..=m {
                    for d in 0..=3 {
                        if m + d > 6 {
                            continue;
                        }
                        assert_eq!(
                            r.p_l_m(l, m, d).unwrap(),
                            brute_p(l, m, d, n),
                            "l={l} m={m} d={d} n={n}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn small_values() {
        for n in 1..=4 {
            let n64 = i64::from(n);
            assert_eq!(p_l_m(0, 0, 1, n).unwrap(), q_int(n64 - 1));
            for m in 1..=4 {
                assert_eq!(
                    p_l_m(m, m, 1, n).unwrap(),
                    &q_int(i64::from(m)) * &q_int(n64)
                );
            }
            for k in 0..=5 {
                assert_eq!(p_l_m(k, k, 0, n).unwrap(), q_int(i64::from(k) - 2));
            }
        }
        assert!(p_l_m(3, 2, 1, 1).is_err());
        assert!(p_l_m(0, 0, 1, 0).is_err());
    }

    #[test]
    fn symmetric_powers_of_leafless_trees() {
        for n in 2..=5 {
            let r = Recursion::new(n).unwrap();
            for i in 1..=4 {
                let g = gaussian_binomial(i64::from(n) - 1, i).unwrap();
                assert_eq!(r.s_p00(i, 1).unwrap(), g);
            }
            for d in 0..=4 {
                assert_eq!(r.s_p00(1, d).unwrap(), r.p_l_m(0, 0, d).unwrap());
                assert_eq!(r.s_p00(1, d).unwrap(), brute_p(0, 0, d, n));
            }
            for (i, k) in [(2, 1), (2, 2), (3, 1), (2, 3)] {
                let degrees = vec![k; i as usize];
                assert_eq!(
                    r.s_p00(i, k).unwrap(),
                    brute_forests(&degrees, n),
                    "i={i} k={k}"
                );
            }
        }
        assert!(s_p00(0, 1, 2).is_err());
    }

    #[test]
    fn forests_by_total_degree() {
        for n in 1..=3 {
            let r = Recursion::new(n).unwrap();
            for d in 0..=5 {
                for i in 1..=4 {
                    // Partition route: group components by degree.
                    let by_partitions: QPoly = integer_partitions(d)
                        .into_iter()
                        .filter(|mu| mu.len() == i as usize)
                        .map(|mu| {
                            runs(&mu)
                                .into_iter()
                                .map(|(part, mult)| r.s_p00(mult, part).unwrap())
                                .product::<QPoly>()
                        })
                        .sum();
                    let forests = r.leafless_forests(i, d).unwrap();
                    assert_eq!(forests, by_partitions, "i={i} d={d} n={n}");
                    if d <= 3 {
                        let direct: QPoly = integer_partitions(d)
                            .into_iter()
                            .filter(|mu| mu.len() == i as usize)
                            .map(|mu| brute_forests(&mu, n))
                            .sum();
                        assert_eq!(forests, direct);
                    }
                }
            }
        }
    }

    #[test]
    fn cross_method_small_grid() {
        for n in 1..=2 {
            for d in 1..=3 {
                for m in 1..=3 {
                    let q = PoincareQuery::new(n, d, m).unwrap();
                    let direct = poincare_direct(&q).unwrap();
                    assert_eq!(direct, poincare_recursive(&q).unwrap(), "{q}");
                    let betti = betti_numbers(&direct, &q).unwrap();
                    assert_eq!(betti.first(), Some(&BigInt::from(1)));
                    assert_eq!(betti.last(), Some(&BigInt::from(1)));
                }
            }
        }
    }

    #[test]
    fn dimension_check() {
        let q = PoincareQuery::new(1, 1, 1).unwrap();
        let err = betti_numbers(&QPoly::from_ints([1, 1, 1]), &q).unwrap_err();
        assert_eq!(
            err,
            Error::DimensionMismatch {
                expected: 1,
                found: Some(2)
            }
        );
    }

    #[test]
    fn cache_round_trip() {
        let a = Recursion::new(2).unwrap();
        let q = PoincareQuery::new(2, 2, 3).unwrap();
        let expected = a.poincare(&q).unwrap();
        let exported = a.export();
        assert!(exported.keys().any(|k| matches!(k, CacheKey::S { .. })));
        for key in exported.keys() {
            assert_eq!(key.to_string().parse::<CacheKey>().unwrap(), *key);
        }
        let b = Recursion::new(2).unwrap();
        assert_eq!(b.seed(exported.clone()).unwrap(), exported.len());
        assert_eq!(b.export(), exported);
        assert_eq!(b.poincare(&q).unwrap(), expected);

        let other = Recursion::new(3).unwrap();
        assert_eq!(other.seed(exported).unwrap(), 0);

        let bad = [(
            CacheKey::P {
                l: 1,
                m: 1,
                d: 0,
                n: 2,
            },
            QPoly::one(),
        )];
        assert!(b.seed(bad).is_err());
        assert!("P:2,1,0,1".parse::<CacheKey>().is_err());
        assert!("Q:1,1,1".parse::<CacheKey>().is_err());
    }

    #[test]
    fn shared_between_threads() {
        let r = Recursion::new(2).unwrap();
        let results: Vec<QPoly> = std::thread::scope(|s| {
            let handles: Vec<_> = (0..4)
                .map(|_| s.spawn(|| r.p_l_m(1, 3, 3).unwrap()))
                .collect();
            handles.into_iter().map(|h| h.join().unwrap()).collect()
        });
        assert!(results.windows(2).all(|w| w[0] == w[1]));
    }
}
