//! Evaluation of finite Dirichlet series `F_N(s) = Σ_{n<=N} f(n) n^{-s}`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::multcore::CoefficientSeries;

#[derive(Clone, Copy, Debug)]
struct Term {
    n: usize,
    log_n: f64,
    coef: Complex64,
    abs: f64,
}

/// Neumaier-compensated accumulator.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct Compensated {
    sum: f64,
    carry: f64,
}

impl Compensated {
    #[inline]
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub(crate) fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct CompensatedComplex {
    re: Compensated,
    im: Compensated,
}

impl CompensatedComplex {
    #[inline]
    pub(crate) fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    #[inline]
    pub(crate) fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

/// Value of `F_N` at a point together with the magnitude sums used for
/// scaling and Lipschitz estimates, all multiplied by `exp(shift)`.
#[derive(Clone, Copy, Debug)]
pub struct PointStats {
    pub value: Complex64,
    /// `Σ |f(n)| n^{-σ}`
    pub abs_sum: f64,
    /// `Σ |f(n)| log(n) n^{-σ}`, a bound for `|F'|` on the line `Re s = σ`
    pub deriv_bound: f64,
}

/// `F_N(s)` for a fixed coefficient vector, with `log n` cached.
///
/// Only nonzero coefficients are kept for evaluation.
#[derive(Clone, Debug)]
pub struct DirichletPolynomial {
    coeffs: CoefficientSeries,
    terms: Vec<Term>,
}

impl DirichletPolynomial {
    pub fn new(coeffs: CoefficientSeries) -> Self {
        let terms = coeffs
            .values()
            .iter()
            .enumerate()
            .filter(|(_, c)| c.norm() > 0.0)
            .map(|(i, &coef)| Term {
                n: i + 1,
                log_n: ((i + 1) as f64).ln(),
                coef,
                abs: coef.norm(),
            })
            .collect();
        Self { coeffs, terms }
    }

    pub fn coeffs(&self) -> &CoefficientSeries {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `M`, the largest `n <= N` with `f(n) != 0`.
    pub fn largest_nonzero(&self) -> Result<usize> {
        self.terms
            .last()
            .map(|t| t.n)
            .ok_or_else(|| Error::invalid("all coefficients are zero"))
    }

    /// `E(N) = #{n <= N : f(n) != 0}`.
    pub fn nonzero_count(&self) -> Result<usize> {
        if self.terms.is_empty() {
            return Err(Error::invalid("all coefficients are zero"));
        }
        Ok(self.terms.len())
    }

    fn log_max(&self) -> f64 {
        self.terms.last().map_or(0.0, |t| t.log_n)
    }

    /// Shift `c` with `exp(-σ log n + c) <= 1` for every term when `σ >= sigma_min`.
    pub fn shift_for(&self, sigma_min: f64) -> f64 {
        if sigma_min < 0.0 {
            sigma_min * self.log_max()
        } else {
            0.0
        }
    }

    pub fn eval(&self, s: Complex64) -> Complex64 {
        let mut acc = CompensatedComplex::default();
        for t in &self.terms {
            let mag = (-s.re * t.log_n).exp();
            let (sin, cos) = (s.im * t.log_n).sin_cos();
            acc.add(t.coef * Complex64::new(mag * cos, -mag * sin));
        }
        acc.value()
    }

    /// `F_N'(s) = -Σ f(n) log(n) n^{-s}`.
    pub fn eval_deriv(&self, s: Complex64) -> Complex64 {
        self.eval_with_deriv(s).1
    }

    pub fn eval_with_deriv(&self, s: Complex64) -> (Complex64, Complex64) {
        let mut val = CompensatedComplex::default();
        let mut der = CompensatedComplex::default();
        for t in &self.terms {
            let mag = (-s.re * t.log_n).exp();
            let (sin, cos) = (s.im * t.log_n).sin_cos();
            let term = t.coef * Complex64::new(mag * cos, -mag * sin);
            val.add(term);
            der.add(-term * t.log_n);
        }
        (val.value(), der.value())
    }

    /// `exp(shift) · F_N(s)` together with the matching magnitude sums.
    pub fn eval_stats(&self, s: Complex64, shift: f64) -> PointStats {
        let mut val = CompensatedComplex::default();
        let mut abs_sum = 0.0;
        let mut deriv_bound = 0.0;
        for t in &self.terms {
            let mag = (shift - s.re * t.log_n).exp();
            let (sin, cos) = (s.im * t.log_n).sin_cos();
            val.add(t.coef * Complex64::new(mag * cos, -mag * sin));
            abs_sum += t.abs * mag;
            deriv_bound += t.abs * mag * t.log_n;
        }
        PointStats {
            value: val.value(),
            abs_sum,
            deriv_bound,
        }
    }

    /// `exp(shift) · Σ |f(n)| log(n) n^{-σ}`.
    pub fn deriv_bound(&self, sigma: f64, shift: f64) -> f64 {
        self.terms
            .iter()
            .map(|t| t.abs * t.log_n * (shift - sigma * t.log_n).exp())
            .sum()
    }

    /// `Σ |f(n)| n^{-σ}`.
    pub fn abs_sum(&self, sigma: f64) -> f64 {
        self.terms
            .iter()
            .map(|t| t.abs * (-sigma * t.log_n).exp())
            .sum()
    }

    /// Forward error bound `N · ε · Σ |f(n)| n^{-σ}` for [`eval`](Self::eval).
    pub fn eval_error_bound(&self, s: Complex64) -> f64 {
        self.terms.len() as f64 * f64::EPSILON * self.abs_sum(s.re)
    }

    /// `F_N` on the vertical grid `σ + i(t0 + j·dt)`, `j = 0..count`, by
    /// rotating each term's phase. Plain summation; the forward error is
    /// within a small multiple of [`eval_error_bound`](Self::eval_error_bound).
    pub fn eval_vertical(&self, sigma: f64, t0: f64, dt: f64, count: usize) -> Vec<Complex64> {
        let mut acc = vec![Complex64::new(0.0, 0.0); count];
        for t in &self.terms {
            let mag = (-sigma * t.log_n).exp();
            let start = t.coef * Complex64::from_polar(mag, -t0 * t.log_n);
            let step = Complex64::from_polar(1.0, -dt * t.log_n);
            let mut z = start;
            for (j, a) in acc.iter_mut().enumerate() {
                // re-anchor periodically to keep rotation drift at rounding level
                if j % 64 == 0 && j > 0 {
                    z = t.coef * Complex64::from_polar(mag, -(t0 + j as f64 * dt) * t.log_n);
                }
                *a += z;
                z *= step;
            }
        }
        acc
    }

    /// Strip half-width containing every zero; see [`StripBound`].
    pub fn strip_bound(&self, margin: f64) -> Result<f64> {
        Ok(self.strip_bound_detail(margin)?.bound)
    }

    pub fn strip_bound_detail(&self, margin: f64) -> Result<StripBound> {
        if !(margin > 0.0) {
            return Err(Error::invalid("strip margin must be positive"));
        }
        if !self.coeffs.is_normalized() {
            return Err(Error::NotNormalized(self.coeffs.get(1)));
        }
        let tail: Vec<Term> = self.terms.iter().copied().filter(|t| t.n >= 2).collect();
        let Some(&top) = tail.last() else {
            return Err(Error::NoZeros);
        };
        // Σ_{2<=n<=M} |f(n)| n^{-B} < 1
        let right = |b: f64| tail.iter().map(|t| t.abs * (-b * t.log_n).exp()).sum::<f64>() < 1.0;
        // Σ_{n<M} |f(n)| (n/M)^B < |f(M)|
        let left = |b: f64| {
            self.terms
                .iter()
                .filter(|t| t.n < top.n)
                .map(|t| t.abs * (b * (t.log_n - top.log_n)).exp())
                .sum::<f64>()
                < top.abs
        };
        let right_inf = monotone_threshold(right)?;
        let left_inf = monotone_threshold(left)?;
        let infimum = right_inf.max(left_inf);
        Ok(StripBound {
            right_infimum: right_inf,
            left_infimum: left_inf,
            infimum,
            bound: infimum + margin,
        })
    }
}

/// Output of [`DirichletPolynomial::strip_bound_detail`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StripBound {
    /// Infimum of `B` with `Σ_{2<=n<=M} |f(n)| n^{-B} < 1`.
    pub right_infimum: f64,
    /// Infimum of `B` with `Σ_{n<M} |f(n)| n^B < |f(M)| M^B`.
    pub left_infimum: f64,
    pub infimum: f64,
    /// `infimum + margin`; every zero satisfies `|Re s| < bound`.
    pub bound: f64,
}

const STRIP_BISECTION_TOL: f64 = 1e-9;

/// Infimum over `B >= 0` of a predicate that holds for all `B` beyond some threshold.
fn monotone_threshold(holds: impl Fn(f64) -> bool) -> Result<f64> {
    let mut hi = 1.0;
    while !holds(hi) {
        hi *= 2.0;
        if hi > 1e12 {
            return Err(Error::Invariant("strip condition never satisfied".into()));
        }
    }
    let mut lo = 0.0;
    if holds(lo) {
        return Ok(0.0);
    }
    while hi - lo > STRIP_BISECTION_TOL {
        let mid = 0.5 * (lo + hi);
        if holds(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}
