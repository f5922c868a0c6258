//! Multiplicative functions: coefficient vectors, Dirichlet convolution,
//! divisor functions and the generalized von Mangoldt transform.
//!
//! Coefficient vectors are 1-indexed in the mathematical sense; slot `0`
//! of the backing `Vec` holds `f(1)`.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Finite coefficient vector `f(1..=N)` of a Dirichlet series.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientSeries {
    values: Vec<Complex64>,
}

impl CoefficientSeries {
    pub fn new(values: Vec<Complex64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid("coefficient series must have N >= 1"));
        }
        Ok(Self { values })
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub fn from_integers(values: &[i64]) -> Result<Self> {
        Self::new(values.iter().map(|&v| Complex64::new(v as f64, 0.0)).collect())
    }

    /// `f(n) = 1` for all `n <= len`, the coefficients of `zeta_N`.
    pub fn ones(len: usize) -> Self {
        Self {
            values: vec![Complex64::new(1.0, 0.0); len.max(1)],
        }
    }

    /// The unit `[1, 0, 0, ...]` of Dirichlet convolution.
    pub fn delta(len: usize) -> Self {
        let mut values = vec![Complex64::new(0.0, 0.0); len.max(1)];
        values[0] = Complex64::new(1.0, 0.0);
        Self { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `f(n)` for `1 <= n <= len`.
    #[inline]
    pub fn get(&self, n: usize) -> Complex64 {
        self.values[n - 1]
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    /// True exactly when `f(1) = 1`.
    pub fn is_normalized(&self) -> bool {
        self.values[0] == Complex64::new(1.0, 0.0)
    }

    pub fn is_real(&self) -> bool {
        self.values.iter().all(|v| v.im == 0.0)
    }

    /// Prefix `f(1..=len)`; `len` is clamped to the available length.
    pub fn truncated(&self, len: usize) -> Self {
        let len = len.clamp(1, self.values.len());
        Self {
            values: self.values[..len].to_vec(),
        }
    }
}

/// Smallest-prime-factor table for `0..=limit`.
#[derive(Clone, Debug)]
pub struct Sieve {
    spf: Vec<u32>,
}

impl Sieve {
    pub fn new(limit: usize) -> Self {
        let limit = limit.max(1);
        let mut spf = vec![0u32; limit + 1];
        for i in 2..=limit {
            if spf[i] == 0 {
                let mut j = i;
                while j <= limit {
                    if spf[j] == 0 {
                        spf[j] = i as u32;
                    }
                    j += i;
                }
            }
        }
        Self { spf }
    }

    pub fn limit(&self) -> usize {
        self.spf.len() - 1
    }

    pub fn smallest_prime_factor(&self, n: usize) -> Option<usize> {
        match self.spf[n] {
            0 => None,
            p => Some(p as usize),
        }
    }

    pub fn is_prime(&self, n: usize) -> bool {
        n >= 2 && self.spf[n] as usize == n
    }

    /// `Some((p, m))` when `n = p^m` with `m >= 1`.
    pub fn prime_power(&self, n: usize) -> Option<(usize, u32)> {
        let p = self.smallest_prime_factor(n)?;
        let mut m = n;
        let mut e = 0;
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        (m == 1).then_some((p, e))
    }

    /// Classical von Mangoldt function, exact prime-power detection.
    pub fn von_mangoldt(&self, n: usize) -> f64 {
        match self.prime_power(n) {
            Some((p, _)) => (p as f64).ln(),
            None => 0.0,
        }
    }

    pub fn primes(&self) -> impl Iterator<Item = usize> + '_ {
        (2..self.spf.len()).filter(|&n| self.spf[n] as usize == n)
    }

    /// Factorization of `n` as `(prime, exponent)` pairs in increasing order.
    pub fn factorize(&self, mut n: usize) -> Vec<(usize, u32)> {
        let mut out = Vec::new();
        while n > 1 {
            let p = self.spf[n] as usize;
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        out
    }
}

type PrimePowerRule = dyn Fn(u64, u32) -> Complex64 + Send + Sync;

/// A multiplicative function given by its values `f(p^m)` on prime powers.
#[derive(Clone)]
pub struct MultiplicativeSpec {
    label: String,
    rule: Arc<PrimePowerRule>,
}

impl fmt::Debug for MultiplicativeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MultiplicativeSpec")
            .field("label", &self.label)
            .finish_non_exhaustive()
    }
}

impl MultiplicativeSpec {
    pub fn new(
        label: impl Into<String>,
        rule: impl Fn(u64, u32) -> Complex64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            label: label.into(),
            rule: Arc::new(rule),
        }
    }

    pub fn zeta() -> Self {
        Self::new("zeta", |_, _| Complex64::new(1.0, 0.0))
    }

    pub fn moebius() -> Self {
        Self::new("moebius", |_, m| {
            if m == 1 {
                Complex64::new(-1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn value(&self, p: u64, m: u32) -> Complex64 {
        (self.rule)(p, m)
    }
}

/// Expands a multiplicative rule into `f(1..=n)`.
pub fn coeffs_from_multiplicative(spec: &MultiplicativeSpec, n: usize) -> CoefficientSeries {
    let sieve = Sieve::new(n);
    coeffs_from_multiplicative_with(spec, n, &sieve)
}

pub fn coeffs_from_multiplicative_with(
    spec: &MultiplicativeSpec,
    n: usize,
    sieve: &Sieve,
) -> CoefficientSeries {
    assert!(sieve.limit() >= n, "sieve too small");
    let n = n.max(1);
    let mut values = vec![Complex64::new(0.0, 0.0); n];
    values[0] = Complex64::new(1.0, 0.0);
    for k in 2..=n {
        let p = sieve.spf[k] as usize;
        let mut rest = k;
        let mut e = 0u32;
        let mut pp = 1usize;
        while rest % p == 0 {
            rest /= p;
            pp *= p;
            e += 1;
        }
        values[k - 1] = if rest == 1 {
            spec.value(p as u64, e)
        } else {
            // p^e and rest are both below k and already filled
            values[pp - 1] * values[rest - 1]
        };
    }
    CoefficientSeries { values }
}

/// `d_k(n)`, the number of ordered `k`-tuples of positive integers with product `n`.
pub fn dk(n: u64, k: u32) -> Result<u64> {
    if n == 0 || k == 0 {
        return Err(Error::invalid("dk requires n >= 1 and k >= 1"));
    }
    let mut rest = n;
    let mut total: u64 = 1;
    let mut p = 2u64;
    while p * p <= rest {
        if rest % p == 0 {
            let mut a = 0u32;
            while rest % p == 0 {
                rest /= p;
                a += 1;
            }
            total = total
                .checked_mul(binomial(a as u64 + k as u64 - 1, k as u64 - 1)?)
                .ok_or_else(|| Error::Overflow(format!("d_{k}({n}) exceeds u64")))?;
        }
        p += 1;
    }
    if rest > 1 {
        total = total
            .checked_mul(k as u64)
            .ok_or_else(|| Error::Overflow(format!("d_{k}({n}) exceeds u64")))?;
    }
    Ok(total)
}

fn binomial(n: u64, r: u64) -> Result<u64> {
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return Err(Error::Overflow(format!("binomial({n}, {r}) exceeds u64")));
        }
    }
    Ok(acc as u64)
}

/// Truncated Dirichlet convolution; the result has length `min(len a, len b)`.
pub fn dirichlet_convolve(a: &CoefficientSeries, b: &CoefficientSeries) -> CoefficientSeries {
    let len = a.len().min(b.len());
    let mut out = vec![Complex64::new(0.0, 0.0); len];
    for d in 1..=len {
        let ad = a.values[d - 1];
        if ad == Complex64::new(0.0, 0.0) {
            continue;
        }
        for m in 1..=len / d {
            out[d * m - 1] += ad * b.values[m - 1];
        }
    }
    CoefficientSeries { values: out }
}

/// Coefficients `Λ_f(n)` of `-F'/F`, indexed by `n` (entries 0 and 1 are zero).
#[derive(Clone, Debug, PartialEq)]
pub struct VonMangoldtSeries {
    values: Vec<Complex64>,
}

impl VonMangoldtSeries {
    /// Largest `n` covered.
    pub fn len(&self) -> usize {
        self.values.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() < 2
    }

    /// `Λ_f(n)` for `2 <= n <= len`.
    pub fn get(&self, n: usize) -> Complex64 {
        self.values[n]
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        self.values.iter().copied().enumerate().skip(2)
    }
}

/// Inverts `f(n) log n = Σ_{d|n} Λ_f(d) f(n/d)` for `Λ_f(2..=N)`.
pub fn lambda_f_from_coeffs(f: &CoefficientSeries) -> Result<VonMangoldtSeries> {
    if !f.is_normalized() {
        return Err(Error::NotNormalized(f.values[0]));
    }
    let n = f.len();
    // acc[m] collects Σ_{d|m, 1<d<m} Λ_f(d) f(m/d) as each Λ_f(d) becomes known
    let mut acc = vec![Complex64::new(0.0, 0.0); n + 1];
    let mut lam = vec![Complex64::new(0.0, 0.0); n + 1];
    for d in 2..=n {
        let value = f.values[d - 1] * (d as f64).ln() - acc[d];
        lam[d] = value;
        if value == Complex64::new(0.0, 0.0) {
            continue;
        }
        for m in 2..=n / d {
            acc[d * m] += value * f.values[m - 1];
        }
    }
    Ok(VonMangoldtSeries { values: lam })
}

/// An index where `|Λ_f(n)| > k Λ(n) + tol`.
#[derive(Clone, Debug, PartialEq)]
pub struct KBoundViolation {
    pub n: usize,
    pub lambda_f_abs: f64,
    pub bound: f64,
}

pub fn check_k_bounded(lam: &VonMangoldtSeries, k: f64, tol: f64) -> Vec<KBoundViolation> {
    let sieve = Sieve::new(lam.len().max(2));
    lam.iter()
        .filter_map(|(n, v)| {
            let bound = k * sieve.von_mangoldt(n);
            let lhs = v.norm();
            (lhs > bound + tol).then_some(KBoundViolation {
                n,
                lambda_f_abs: lhs,
                bound,
            })
        })
        .collect()
}
