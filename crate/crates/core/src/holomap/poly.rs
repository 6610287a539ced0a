use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{norm, CVec};
use crate::multiindex::MultiIndex;

/// A polynomial map `C^n -> C^m` stored as a sparse coefficient table.
///
/// Absent keys are zero coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyMap {
    n: usize,
    m: usize,
    max_degree: u32,
    coeffs: BTreeMap<MultiIndex, CVec>,
}

impl PolyMap {
    pub fn new(n: usize, m: usize, max_degree: u32) -> Self {
        PolyMap {
            n,
            m,
            max_degree,
            coeffs: BTreeMap::new(),
        }
    }

    /// Builds a map from `(alpha, a_alpha)` pairs; the degree cap is the
    /// largest degree present.
    pub fn from_terms<I>(n: usize, m: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, CVec)>,
    {
        let terms: Vec<_> = terms.into_iter().collect();
        let max_degree = terms.iter().map(|(a, _)| a.degree()).max().unwrap_or(0);
        let mut p = PolyMap::new(n, m, max_degree);
        for (alpha, a) in terms {
            p.insert(alpha, a)?;
        }
        Ok(p)
    }

    pub fn identity(n: usize) -> Self {
        let mut p = PolyMap::new(n, n, 1);
        for j in 0..n {
            p.coeffs
                .insert(MultiIndex::axis(n, j, 1), crate::linalg::unit(n, j));
        }
        p
    }

    pub fn constant(n: usize, a0: CVec) -> Self {
        let mut p = PolyMap::new(n, a0.len(), 0);
        p.coeffs.insert(MultiIndex::zeros(n), a0);
        p
    }

    /// Adds `a` to the coefficient at `alpha`.
    pub fn insert(&mut self, alpha: MultiIndex, a: CVec) -> Result<()> {
        if alpha.dim() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: alpha.dim(),
            });
        }
        if a.len() != self.m {
            return Err(Error::DimensionMismatch {
                expected: self.m,
                got: a.len(),
            });
        }
        if alpha.degree() > self.max_degree {
            return Err(Error::Precondition(format!(
                "degree {} exceeds cap {}",
                alpha.degree(),
                self.max_degree
            )));
        }
        match self.coeffs.get_mut(&alpha) {
            Some(existing) => *existing += a,
            None => {
                self.coeffs.insert(alpha, a);
            }
        }
        Ok(())
    }

    pub fn domain_dim(&self) -> usize {
        self.n
    }

    pub fn codomain_dim(&self) -> usize {
        self.m
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    /// Largest degree carrying a stored coefficient.
    pub fn degree(&self) -> u32 {
        self.coeffs.keys().map(|a| a.degree()).max().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &CVec)> {
        self.coeffs.iter()
    }

    pub fn coefficient(&self, alpha: &MultiIndex) -> CVec {
        self.coeffs
            .get(alpha)
            .cloned()
            .unwrap_or_else(|| CVec::zeros(self.m))
    }

    /// `sum_alpha |a_alpha|`; at most one certifies `|f| <= 1` on the ball.
    pub fn certificate_sum(&self) -> f64 {
        self.coeffs.values().map(norm).sum()
    }

    pub(crate) fn eval_raw(&self, z: &[Complex64]) -> CVec {
        let d = self.max_degree as usize;
        let powers: Vec<Vec<Complex64>> = z
            .iter()
            .map(|&zj| {
                let mut row = Vec::with_capacity(d + 1);
                let mut p = Complex64::new(1.0, 0.0);
                for _ in 0..=d {
                    row.push(p);
                    p *= zj;
                }
                row
            })
            .collect();
        let mut out = CVec::zeros(self.m);
        for (alpha, a) in &self.coeffs {
            let mono = alpha
                .entries()
                .iter()
                .zip(&powers)
                .fold(Complex64::new(1.0, 0.0), |acc, (&e, row)| acc * row[e as usize]);
            out.axpy(mono, a, Complex64::new(1.0, 0.0));
        }
        out
    }

    /// Exact coefficient table of `d^{|v|} f / dz^v`.
    pub fn partial(&self, v: &MultiIndex) -> Result<PolyMap> {
        if v.dim() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: v.dim(),
            });
        }
        let mut out = PolyMap::new(self.n, self.m, self.max_degree.saturating_sub(v.degree()));
        for (beta, a) in &self.coeffs {
            let Some(alpha) = beta.checked_sub(v) else {
                continue;
            };
            let factor: f64 = alpha
                .entries()
                .iter()
                .zip(v.entries())
                .map(|(&aj, &vj)| falling(aj + vj, vj))
                .product();
            out.coeffs.insert(alpha, a * Complex64::new(factor, 0.0));
        }
        Ok(out)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&PolyMapWire::from(self)).expect("plain data serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let wire: PolyMapWire =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        PolyMap::try_from(wire)
    }
}

/// `x (x-1) ... (x-k+1)`.
fn falling(x: u32, k: u32) -> f64 {
    (0..k).map(|i| (x - i) as f64).product()
}

/// Seeded draw from the certified polynomial class.
///
/// Every coefficient with `|alpha| <= degree` gets independent standard
/// complex Gaussian entries; the table is then rescaled so that
/// `sum |a_alpha| = 1 - margin`.
pub fn random_polymap(n: usize, m: usize, degree: u32, seed: u64, margin: f64) -> Result<PolyMap> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_polymap_with(&mut rng, n, m, degree, margin)
}

pub fn random_polymap_with<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    m: usize,
    degree: u32,
    margin: f64,
) -> Result<PolyMap> {
    if !(margin > 0.0 && margin < 1.0) {
        return Err(Error::Config(format!("margin must lie in (0, 1), got {margin}")));
    }
    if n == 0 || m == 0 {
        return Err(Error::Config("dimensions must be positive".into()));
    }
    let mut p = PolyMap::new(n, m, degree);
    for alpha in MultiIndex::enumerate_up_to(n, degree) {
        let a = CVec::from_fn(m, |_, _| {
            Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
        });
        p.coeffs.insert(alpha, a);
    }
    let total = p.certificate_sum();
    let scale = Complex64::new((1.0 - margin) / total, 0.0);
    for a in p.coeffs.values_mut() {
        *a *= scale;
    }
    Ok(p)
}

#[derive(Serialize, Deserialize)]
struct TermWire {
    alpha: Vec<u32>,
    re: Vec<f64>,
    im: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct PolyMapWire {
    n: usize,
    m: usize,
    coeffs: Vec<TermWire>,
}

impl From<&PolyMap> for PolyMapWire {
    fn from(p: &PolyMap) -> Self {
        PolyMapWire {
            n: p.n,
            m: p.m,
            coeffs: p
                .coeffs
                .iter()
                .map(|(alpha, a)| TermWire {
                    alpha: alpha.entries().to_vec(),
                    re: a.iter().map(|c| c.re).collect(),
                    im: a.iter().map(|c| c.im).collect(),
                })
                .collect(),
        }
    }
}

impl TryFrom<PolyMapWire> for PolyMap {
    type Error = Error;

    fn try_from(w: PolyMapWire) -> Result<Self> {
        let mut terms = Vec::with_capacity(w.coeffs.len());
        for t in w.coeffs {
            if t.re.len() != w.m || t.im.len() != w.m {
                return Err(Error::Parse(format!(
                    "coefficient at {:?} has {} real and {} imaginary parts, expected {}",
                    t.alpha,
                    t.re.len(),
                    t.im.len(),
                    w.m
                )));
            }
            let a = CVec::from_iterator(
                w.m,
                t.re.iter().zip(&t.im).map(|(&re, &im)| Complex64::new(re, im)),
            );
            terms.push((MultiIndex::new(t.alpha), a));
        }
        PolyMap::from_terms(w.n, w.m, terms)
    }
}
