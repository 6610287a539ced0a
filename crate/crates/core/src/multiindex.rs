//! Multi-indexes and the combinatorial factors built from them.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest degree for which `|a|!/a!` is computed in exact integers.
pub const EXACT_DEGREE_LIMIT: u32 = 20;

/// An n-tuple of nonnegative integers, ordered lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Self {
        MultiIndex(entries)
    }

    pub fn zeros(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    /// `k * e_j` in dimension `n`.
    pub fn axis(n: usize, j: usize, k: u32) -> Self {
        let mut e = vec![0; n];
        e[j] = k;
        MultiIndex(e)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }

    /// Number of nonzero entries.
    pub fn support(&self) -> usize {
        self.0.iter().filter(|&&a| a != 0).count()
    }

    /// `a! = a_1! ... a_n!` as a float (exact for degree <= 20).
    pub fn factorial(&self) -> f64 {
        self.0.iter().map(|&a| factorial(a)).product()
    }

    /// `|a|! / a!` in exact integer arithmetic.
    ///
    /// Degrees above [`EXACT_DEGREE_LIMIT`] are refused; use
    /// [`MultiIndex::multinomial_weight_f64`] there.
    pub fn multinomial_weight(&self) -> Result<u64> {
        let degree = self.degree();
        if degree > EXACT_DEGREE_LIMIT {
            return Err(Error::Capacity {
                degree,
                max: EXACT_DEGREE_LIMIT,
            });
        }
        // product of binomials C(a_1 + .. + a_j, a_j); every partial product
        // is itself a multinomial coefficient bounded by 20!
        let mut acc: u128 = 1;
        let mut running = 0u128;
        for &a in &self.0 {
            for i in 1..=a as u128 {
                running += 1;
                acc = acc * running / i;
            }
        }
        Ok(acc as u64)
    }

    /// `|a|! / a!` as a float: exact up to degree 20, log-factorial sums above.
    pub fn multinomial_weight_f64(&self) -> f64 {
        match self.multinomial_weight() {
            Ok(w) => w as f64,
            Err(_) => {
                let log = ln_factorial(self.degree())
                    - self.0.iter().map(|&a| ln_factorial(a)).sum::<f64>();
                log.exp()
            }
        }
    }

    /// `|v|^|v| / v^v`, with `0^0 = 1`.
    pub fn sharpness_factor(&self) -> Result<f64> {
        if self.is_zero() {
            return Err(Error::ZeroMultiIndex);
        }
        let total = self.degree() as f64;
        Ok(self
            .0
            .iter()
            .filter(|&&a| a > 0)
            .map(|&a| (total / a as f64).powi(a as i32))
            .product())
    }

    /// `v^a = prod_j v_j^{a_j}` with `0^0 = 1`.
    pub fn pow_index(&self, exponent: &MultiIndex) -> f64 {
        self.0
            .iter()
            .zip(&exponent.0)
            .map(|(&base, &e)| (base as f64).powi(e as i32))
            .product()
    }

    /// `z^a` for a complex point.
    pub fn monomial(&self, z: &[Complex64]) -> Complex64 {
        self.0
            .iter()
            .zip(z)
            .fold(Complex64::new(1.0, 0.0), |acc, (&a, zj)| acc * zj.powu(a))
    }

    /// `z^a` for real nonnegative coordinates.
    pub fn monomial_real(&self, x: &[f64]) -> f64 {
        self.0
            .iter()
            .zip(x)
            .map(|(&a, xj)| xj.powi(a as i32))
            .product()
    }

    pub fn checked_add(&self, other: &MultiIndex) -> Result<MultiIndex> {
        self.same_dim(other)?;
        Ok(MultiIndex(
            self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect(),
        ))
    }

    /// `self - other` when every entry stays nonnegative.
    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        if self.dim() != other.dim() {
            return None;
        }
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(MultiIndex)
    }

    /// Entrywise `self <= other`.
    pub fn dominated_by(&self, other: &MultiIndex) -> bool {
        self.dim() == other.dim() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Whether `self = j * v` for some integer `j >= 0`.
    pub fn is_multiple_of(&self, v: &MultiIndex) -> bool {
        if self.dim() != v.dim() || v.is_zero() {
            return false;
        }
        let (pos, &vj) = v.0.iter().enumerate().find(|(_, &x)| x > 0).unwrap();
        if self.0[pos] % vj != 0 {
            return false;
        }
        let j = self.0[pos] / vj;
        self.0.iter().zip(&v.0).all(|(a, b)| *a == j * b)
    }

    /// All multi-indexes of dimension `n` and degree `k`, lexicographically.
    pub fn enumerate(n: usize, k: u32) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        if n == 0 {
            return out;
        }
        let mut current = vec![0u32; n];
        fill(&mut current, 0, k, &mut out);
        out
    }

    /// All multi-indexes of dimension `n` with degree at most `max_degree`,
    /// by degree and then lexicographically.
    pub fn enumerate_up_to(n: usize, max_degree: u32) -> Vec<MultiIndex> {
        (0..=max_degree)
            .flat_map(|k| MultiIndex::enumerate(n, k))
            .collect()
    }

    fn same_dim(&self, other: &MultiIndex) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(())
    }
}

fn fill(current: &mut Vec<u32>, pos: usize, remaining: u32, out: &mut Vec<MultiIndex>) {
    let n = current.len();
    if pos == n - 1 {
        current[pos] = remaining;
        out.push(MultiIndex(current.clone()));
        return;
    }
    for a in 0..=remaining {
        current[pos] = a;
        fill(current, pos + 1, remaining - a, out);
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(v: Vec<u32>) -> Self {
        MultiIndex(v)
    }
}

pub fn factorial(k: u32) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

pub fn ln_factorial(k: u32) -> f64 {
    (2..=k).map(|i| (i as f64).ln()).sum()
}

/// `C(n, k)` as a float.
pub fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    #[test]
    fn degree_examples() {
        assert_eq!(mi(&[0, 0, 0]).degree(), 0);
        assert_eq!(mi(&[2, 1]).degree(), 3);
        assert_eq!(mi(&[1, 0, 4]).degree(), 5);
    }

    #[test]
    fn multinomial_examples() {
        assert_eq!(mi(&[7]).multinomial_weight().unwrap(), 1);
        assert_eq!(mi(&[1, 1]).multinomial_weight().unwrap(), 2);
        assert_eq!(mi(&[2, 1]).multinomial_weight().unwrap(), 3);
        // 20! / (5!)^4 = 11732745024
        assert_eq!(mi(&[5, 5, 5, 5]).multinomial_weight().unwrap(), 11_732_745_024);
        assert_eq!(mi(&[20, 0]).multinomial_weight().unwrap(), 1);
    }

    #[test]
    fn multinomial_capacity_error() {
        let err = mi(&[11, 10]).multinomial_weight().unwrap_err();
        assert_eq!(err, Error::Capacity { degree: 21, max: 20 });
        // float path keeps working: C(21, 10) = 352716
        let w = mi(&[11, 10]).multinomial_weight_f64();
        assert!((w - 352_716.0).abs() / 352_716.0 < 1e-12);
    }

    #[test]
    fn sharpness_examples() {
        assert_eq!(mi(&[4, 0, 0]).sharpness_factor().unwrap(), 1.0);
        assert_eq!(mi(&[1, 1]).sharpness_factor().unwrap(), 4.0);
        assert_eq!(mi(&[2, 1]).sharpness_factor().unwrap(), 6.75);
        assert_eq!(mi(&[0, 0]).sharpness_factor(), Err(Error::ZeroMultiIndex));
    }

    #[test]
    fn enumerate_examples() {
        assert_eq!(MultiIndex::enumerate(1, 3), vec![mi(&[3])]);
        assert_eq!(
            MultiIndex::enumerate(2, 2),
            vec![mi(&[0, 2]), mi(&[1, 1]), mi(&[2, 0])]
        );
        assert_eq!(MultiIndex::enumerate(3, 1).len(), 3);
        assert_eq!(MultiIndex::enumerate(3, 0), vec![mi(&[0, 0, 0])]);
    }

    #[test]
    fn enumerate_counts_match_binomial() {
        for n in 1..=4usize {
            for k in 0..=8u32 {
                let list = MultiIndex::enumerate(n, k);
                assert_eq!(list.len() as f64, binomial(n as u32 + k - 1, n as u32 - 1));
                assert!(list.windows(2).all(|w| w[0] < w[1]));
                assert!(list.iter().all(|a| a.degree() == k && a.dim() == n));
            }
        }
    }

    #[test]
    fn sharpness_monotone_under_entrywise_order() {
        // exhaustive scan, |v| <= 6, n <= 3
        for n in 1..=3usize {
            let all = MultiIndex::enumerate_up_to(n, 6);
            for v in all.iter().filter(|v| !v.is_zero()) {
                let sv = v.sharpness_factor().unwrap();
                for a in all.iter().filter(|a| !a.is_zero() && a.dominated_by(v)) {
                    assert!(a.sharpness_factor().unwrap() <= sv * (1.0 + 1e-14), "{a} vs {v}");
                }
            }
        }
    }

    #[test]
    fn multiples() {
        assert!(mi(&[4, 2]).is_multiple_of(&mi(&[2, 1])));
        assert!(mi(&[0, 0]).is_multiple_of(&mi(&[2, 1])));
        assert!(!mi(&[1, 1]).is_multiple_of(&mi(&[2, 1])));
        assert!(!mi(&[2, 2]).is_multiple_of(&mi(&[2, 1])));
        assert!(mi(&[0, 3]).is_multiple_of(&mi(&[0, 1])));
        assert!(!mi(&[1, 3]).is_multiple_of(&mi(&[0, 1])));
    }

    #[test]
    fn pow_index_zero_convention() {
        assert_eq!(mi(&[0, 2]).pow_index(&mi(&[0, 3])), 8.0);
        assert_eq!(mi(&[0, 2]).pow_index(&mi(&[1, 3])), 0.0);
    }

    fn small_index() -> impl Strategy<Value = MultiIndex> {
        prop::collection::vec(0u32..5, 1..4).prop_map(MultiIndex::new)
    }

    proptest! {
        #[test]
        fn multinomial_theorem(n in 1usize..4, k in 0u32..7,
                               xs in prop::collection::vec(0.0f64..2.0, 4)) {
            let x = &xs[..n];
            let lhs: f64 = MultiIndex::enumerate(n, k)
                .iter()
                .map(|a| a.multinomial_weight().unwrap() as f64 * a.monomial_real(x))
                .sum();
            let rhs = x.iter().sum::<f64>().powi(k as i32);
            prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1.0));
        }

        #[test]
        fn sharpness_bounds(v in small_index()) {
            prop_assume!(!v.is_zero());
            let s = v.sharpness_factor().unwrap();
            prop_assert!(s >= 1.0 - 1e-15);
            prop_assert_eq!(s == 1.0, v.support() == 1);
            let cap = (v.dim() as f64).powi(v.degree() as i32);
            prop_assert!(s <= cap * (1.0 + 1e-14));
            // equality in the n^|v| cap iff all entries coincide
            let all_equal = v.entries().iter().all(|&a| a == v.entries()[0]);
            prop_assert_eq!((s - cap).abs() <= 1e-9 * cap, all_equal);
        }

        #[test]
        fn float_weight_matches_exact(v in small_index()) {
            let exact = v.multinomial_weight().unwrap() as f64;
            prop_assert_eq!(v.multinomial_weight_f64(), exact);
            prop_assert!((v.factorial() * exact - factorial(v.degree())).abs() < 1e-6);
        }
    }
}
