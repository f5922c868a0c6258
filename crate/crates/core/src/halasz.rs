//! Logarithmic means `S_1(x) = Σ_{n<=x} f(n)/n` of k-bounded multiplicative
//! functions and the Halász-type bounds controlling them.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dirichletpoly::{CompensatedComplex, DirichletPolynomial};
use crate::error::{Error, Result};
use crate::multcore::{coeffs_from_multiplicative, CoefficientSeries, MultiplicativeSpec};

/// `S_1(x) = Σ_{n<=x} f(n)/n`.
pub fn log_mean(f: &CoefficientSeries, x: f64) -> Result<Complex64> {
    if !(x >= 1.0) {
        return Err(Error::invalid(format!("log_mean needs x >= 1, got {x}")));
    }
    let upto = x.floor() as usize;
    if upto > f.len() {
        return Err(Error::invalid(format!(
            "x = {x} exceeds series length {}",
            f.len()
        )));
    }
    let mut acc = CompensatedComplex::default();
    for (i, v) in f.values()[..upto].iter().enumerate() {
        acc.add(v / (i + 1) as f64);
    }
    Ok(acc.value())
}

/// `S_1` at each point of an increasing grid, in one pass.
fn log_means_on_grid(f: &CoefficientSeries, grid: &[f64]) -> Result<Vec<Complex64>> {
    let mut out = Vec::with_capacity(grid.len());
    let mut acc = CompensatedComplex::default();
    let mut n = 0usize;
    for &x in grid {
        let upto = x.floor() as usize;
        if upto > f.len() {
            return Err(Error::invalid(format!("grid point {x} exceeds series length {}", f.len())));
        }
        while n < upto {
            acc.add(f.values()[n] / (n + 1) as f64);
            n += 1;
        }
        out.push(acc.value());
    }
    Ok(out)
}

/// Something that can evaluate an analytic `F(s)` in a right half-plane.
pub trait AnalyticEvaluator: Sync {
    fn eval(&self, s: Complex64) -> Complex64;

    /// `F(σ + i(t0 + j·dt))` for `j = 0..count`.
    fn eval_vertical(&self, sigma: f64, t0: f64, dt: f64, count: usize) -> Vec<Complex64> {
        (0..count)
            .map(|j| self.eval(Complex64::new(sigma, t0 + j as f64 * dt)))
            .collect()
    }

    /// An upper bound for `|F(σ + it)|` valid for every `t`.
    fn modulus_bound(&self, sigma: f64) -> f64;
}

/// `Σ_{n>N} n^{-s}` by Euler–Maclaurin through the `B_4` term.
pub fn zeta_tail(s: Complex64, n: usize) -> Complex64 {
    let nf = n as f64;
    let ln = nf.ln();
    let pow = |e: Complex64| (-e * ln).exp();
    pow(s - 1.0) / (s - 1.0) - pow(s) * 0.5 + s * pow(s + 1.0) / 12.0
        - s * (s + 1.0) * (s + 2.0) * pow(s + 3.0) / 720.0
}

/// Truncated Dirichlet series `Σ_{n<=N} f(n) n^{-s}`, optionally completed by
/// a mean-density tail `c · Σ_{n>N} n^{-s}`.
///
/// The tail uncertainty comes from partial summation with the remainder
/// `R(y) = Σ_{n<=y} f(n) - c·y`, assuming `|R(u)| <= R_N · u/N` beyond `N`,
/// where `R_N = max_{N/2 <= y <= N} |R(y)|`.
#[derive(Clone, Debug)]
pub struct SeriesEvaluator {
    poly: DirichletPolynomial,
    density: Option<Complex64>,
    remainder: f64,
}

impl SeriesEvaluator {
    pub fn new(coeffs: &CoefficientSeries, cutoff: usize) -> Self {
        let coeffs = coeffs.truncated(cutoff);
        let remainder = tail_remainder(&coeffs, Complex64::new(0.0, 0.0));
        Self {
            poly: DirichletPolynomial::new(coeffs),
            density: None,
            remainder,
        }
    }

    /// Completes the series with `f(n) ≈ density` beyond the cutoff.
    pub fn with_tail_density(mut self, density: Complex64) -> Self {
        self.remainder = tail_remainder(self.poly.coeffs(), density);
        self.density = Some(density);
        self
    }

    pub fn cutoff(&self) -> usize {
        self.poly.len()
    }

    /// `(F(s), tail uncertainty)`; the uncertainty is infinite for `Re s <= 1`.
    pub fn eval_with_uncertainty(&self, s: Complex64) -> (Complex64, f64) {
        let n = self.poly.len();
        let mut value = self.poly.eval(s);
        if let Some(c) = self.density {
            value += c * zeta_tail(s, n);
        }
        if s.re <= 1.0 {
            return (value, f64::INFINITY);
        }
        let nf = n as f64;
        let c_abs = self.density.map_or(0.0, |c| c.norm());
        // next Euler–Maclaurin term as the truncation estimate
        let em = c_abs * (s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0)).norm()
            * nf.powf(-s.re - 5.0)
            / 30240.0;
        let partial = self.remainder * nf.powf(-s.re) * (1.0 + s.norm() / (s.re - 1.0));
        (value, partial + em)
    }
}

fn tail_remainder(coeffs: &CoefficientSeries, density: Complex64) -> f64 {
    let n = coeffs.len();
    let mut acc = Complex64::new(0.0, 0.0);
    let mut worst: f64 = 0.0;
    for (i, v) in coeffs.values().iter().enumerate() {
        acc += v;
        let y = i + 1;
        if 2 * y >= n {
            worst = worst.max((acc - density * y as f64).norm());
        }
    }
    worst
}

impl AnalyticEvaluator for SeriesEvaluator {
    fn eval(&self, s: Complex64) -> Complex64 {
        self.eval_with_uncertainty(s).0
    }

    fn eval_vertical(&self, sigma: f64, t0: f64, dt: f64, count: usize) -> Vec<Complex64> {
        let mut out = self.poly.eval_vertical(sigma, t0, dt, count);
        if let Some(c) = self.density {
            let n = self.poly.len();
            for (j, v) in out.iter_mut().enumerate() {
                *v += c * zeta_tail(Complex64::new(sigma, t0 + j as f64 * dt), n);
            }
        }
        out
    }

    fn modulus_bound(&self, sigma: f64) -> f64 {
        let tail = self.density.map_or(0.0, |c| {
            if sigma > 1.0 {
                c.norm() * zeta_tail(Complex64::new(sigma, 0.0), self.poly.len()).re
            } else {
                f64::INFINITY
            }
        });
        self.poly.abs_sum(sigma) + tail
    }
}

/// Discretization of `M_1(α)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct M1Params {
    /// Cells `k` with `|k| <= k_trunc` are evaluated.
    pub k_trunc: u32,
    pub grid_sigma: u32,
    pub grid_t: u32,
    pub series_cutoff: usize,
}

impl Default for M1Params {
    fn default() -> Self {
        Self {
            k_trunc: 20,
            grid_sigma: 33,
            grid_t: 65,
            series_cutoff: 100_000,
        }
    }
}

impl M1Params {
    fn validate(&self) -> Result<()> {
        if self.k_trunc == 0 || self.grid_sigma == 0 || self.grid_t < 2 || self.series_cutoff == 0 {
            return Err(Error::invalid(format!("M1 parameters must be positive: {self:?}")));
        }
        Ok(())
    }
}

/// `M_1(α)` over the truncated cell range, with the bound on what the
/// omitted cells `|k| > k_trunc` can add.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct M1Value {
    pub alpha: f64,
    pub value: f64,
    pub tail_bound: f64,
}

fn geometric_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count <= 1 || lo == hi {
        return vec![lo];
    }
    let ratio = (hi / lo).ln() / (count - 1) as f64;
    (0..count)
        .map(|i| if i + 1 == count { hi } else { lo * (ratio * i as f64).exp() })
        .collect()
}

/// `M_1` at every `α` in `alphas`, sharing one σ-grid so the profile is
/// nonincreasing in `α` exactly.
pub fn m1_profile<E: AnalyticEvaluator + ?Sized>(
    eval: &E,
    alphas: &[f64],
    params: &M1Params,
) -> Result<Vec<M1Value>> {
    params.validate()?;
    if alphas.is_empty() {
        return Ok(Vec::new());
    }
    for &a in alphas {
        if !(a > 0.0 && a <= 1.0) {
            return Err(Error::invalid(format!("alpha must lie in (0, 1], got {a}")));
        }
    }
    let alpha_min = alphas.iter().copied().fold(f64::INFINITY, f64::min);
    let mut sigmas = geometric_grid(alpha_min, 1.0, params.grid_sigma as usize);
    sigmas.extend_from_slice(alphas);
    sigmas.sort_by(f64::total_cmp);
    sigmas.dedup();

    let k = params.k_trunc as i64;
    let grid_t = params.grid_t as usize;
    let dt = 1.0 / (grid_t - 1) as f64;
    // grid[cell][i] = (max over the t-grid of |F(1+σ_i+it)/(σ_i+it)|², argmax index)
    let cells: Vec<i64> = (-k..=k).collect();
    let grid: Vec<Vec<(f64, usize)>> = cells
        .par_iter()
        .map(|&cell| {
            let t0 = cell as f64 - 0.5;
            sigmas
                .iter()
                .map(|&sigma| {
                    eval.eval_vertical(1.0 + sigma, t0, dt, grid_t)
                        .iter()
                        .enumerate()
                        .map(|(j, v)| {
                            let d = Complex64::new(sigma, t0 + j as f64 * dt);
                            (v.norm_sqr() / d.norm_sqr(), j)
                        })
                        .fold((0.0, 0), |b, c| if c.0 > b.0 { c } else { b })
                })
                .collect()
        })
        .collect();

    let firsts: Vec<usize> = alphas
        .iter()
        .map(|&a| sigmas.partition_point(|&s| s < a))
        .collect();
    // Refine each grid point that is the suffix argmax for some α. The cell
    // value for α is then the suffix maximum of the refined values, which is
    // nonincreasing in α by construction.
    let refined: Vec<Vec<f64>> = cells
        .par_iter()
        .zip(&grid)
        .map(|(&cell, row)| {
            let mut r: Vec<f64> = row.iter().map(|g| g.0).collect();
            let mut done = vec![false; row.len()];
            for &first in &firsts {
                let arg = (first..row.len()).fold(first, |b, i| if row[i].0 > row[b].0 { i } else { b });
                if !done[arg] {
                    done[arg] = true;
                    r[arg] = r[arg].max(refine_cell_max(eval, cell, &sigmas, arg, row[arg].1, dt));
                }
            }
            for i in (0..r.len().saturating_sub(1)).rev() {
                r[i] = r[i].max(r[i + 1]);
            }
            r
        })
        .collect();

    let sq_tail_cells = 2.0 / (k as f64 - 0.5);
    alphas
        .iter()
        .zip(&firsts)
        .map(|(&alpha, &first)| {
            let total: f64 = refined.iter().map(|r| r[first]).sum();
            let value = total.sqrt();
            let bound = eval.modulus_bound(1.0 + alpha);
            let tail_sq = bound * bound * sq_tail_cells;
            Ok(M1Value {
                alpha,
                value,
                tail_bound: (total + tail_sq).sqrt() - value,
            })
        })
        .collect()
}

/// Local 5×5 pass on `[σ_i, σ_{i+1}] × [t* - dt, t* + dt]`, clamped to the cell.
fn refine_cell_max<E: AnalyticEvaluator + ?Sized>(
    eval: &E,
    cell: i64,
    sigmas: &[f64],
    i: usize,
    j_best: usize,
    dt: f64,
) -> f64 {
    let t_lo = cell as f64 - 0.5;
    let t_hi = cell as f64 + 0.5;
    let s_lo = sigmas[i];
    let s_hi = sigmas.get(i + 1).copied().unwrap_or(s_lo);
    let t_center = t_lo + j_best as f64 * dt;
    let t_start = (t_center - dt).max(t_lo);
    let t_end = (t_center + dt).min(t_hi);
    let step = (t_end - t_start) / 4.0;
    let mut best: f64 = 0.0;
    for a in 0..5 {
        let s = s_lo + (s_hi - s_lo) * a as f64 / 4.0;
        for (b, v) in eval.eval_vertical(1.0 + s, t_start, step, 5).iter().enumerate() {
            let d = Complex64::new(s, t_start + b as f64 * step);
            best = best.max(v.norm_sqr() / d.norm_sqr());
        }
    }
    best
}

/// `M_1(α) = (Σ_k max_{|t-k|<=1/2, α<=σ<=1} |F(1+σ+it)/(σ+it)|²)^{1/2}`.
pub fn m1<E: AnalyticEvaluator + ?Sized>(eval: &E, alpha: f64, params: &M1Params) -> Result<M1Value> {
    Ok(m1_profile(eval, &[alpha], params)?[0])
}

/// `|S_1(x)|` against `(k²(k+1)/log x) ∫_{1/log x}^1 M_1(α)/α dα`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub x: f64,
    pub k: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub params: M1Params,
    /// Largest possible increase of `rhs` from the omitted cells.
    pub tail_bound: f64,
}

/// Number of geometric `α` nodes for the `M_1` integral.
pub const ALPHA_NODES: usize = 32;

pub fn halasz_bound(f: &CoefficientSeries, x: f64, k: f64, params: &M1Params) -> Result<BoundReport> {
    let eval = SeriesEvaluator::new(f, params.series_cutoff);
    halasz_bound_with(f, &eval, x, k, params)
}

/// As [`halasz_bound`] with a caller-supplied evaluator for `F`.
pub fn halasz_bound_with<E: AnalyticEvaluator + ?Sized>(
    f: &CoefficientSeries,
    eval: &E,
    x: f64,
    k: f64,
    params: &M1Params,
) -> Result<BoundReport> {
    if !(x >= 3.0) {
        return Err(Error::invalid(format!("halasz bound needs x >= 3, got {x}")));
    }
    if !(k > 0.0) {
        return Err(Error::invalid("k must be positive"));
    }
    let lhs = log_mean(f, x)?.norm();
    let log_x = x.ln();
    let alphas = geometric_grid(1.0 / log_x, 1.0, ALPHA_NODES);
    let profile = m1_profile(eval, &alphas, params)?;
    // trapezoid in log α: ∫ M_1(α)/α dα = ∫ M_1 d(log α)
    let trapezoid = |g: &dyn Fn(&M1Value) -> f64| -> f64 {
        profile
            .windows(2)
            .map(|w| 0.5 * (g(&w[0]) + g(&w[1])) * (w[1].alpha / w[0].alpha).ln())
            .sum()
    };
    let integral = trapezoid(&|m| m.value);
    let tail_integral = trapezoid(&|m| m.tail_bound);
    let factor = k * k * (k + 1.0) / log_x;
    let rhs = factor * integral;
    Ok(BoundReport {
        x,
        k,
        lhs,
        rhs,
        ratio: lhs / rhs,
        params: *params,
        tail_bound: factor * tail_integral,
    })
}

/// `|F(σ)| (σ-1)^k (log x)^{k-1} ((σ-1)^{-4k/π} + log x)`.
///
/// Accepts `1 + 1/log x <= σ <= 2`; the lower endpoint is the sharp case.
pub fn f1_estimate_bound(f_sigma_abs: f64, sigma: f64, x: f64, k: f64) -> Result<f64> {
    if !(x > 1.0) {
        return Err(Error::invalid(format!("x must exceed 1, got {x}")));
    }
    let log_x = x.ln();
    if !(sigma >= 1.0 + 1.0 / log_x && sigma <= 2.0) {
        return Err(Error::invalid(format!(
            "sigma = {sigma} outside [1 + 1/log x, 2] = [{}, 2]",
            1.0 + 1.0 / log_x
        )));
    }
    let d = sigma - 1.0;
    Ok(f_sigma_abs * d.powf(k) * log_x.powf(k - 1.0) * (d.powf(-4.0 * k / PI) + log_x))
}

/// `g(p) = i·exp(iπ·frac(log p / 2π))`.
pub fn sharp_prime_value(p: u64) -> Complex64 {
    let u = ((p as f64).ln() / (2.0 * PI)).fract();
    Complex64::new(0.0, 1.0) * Complex64::from_polar(1.0, PI * u)
}

/// Multiplicative rule `f(p^m) = g(p)^m · d_k(p^m)`.
pub fn sharp_example_spec(k: u32) -> MultiplicativeSpec {
    MultiplicativeSpec::new(format!("sharp-example(k={k})"), move |p, m| {
        let g = sharp_prime_value(p);
        // d_k(p^m) = C(m + k - 1, k - 1)
        let mut dk = 1.0;
        for j in 1..k {
            dk = dk * f64::from(m + j) / f64::from(j);
        }
        g.powu(m) * dk.round()
    })
}

/// Coefficients `g(n) d_k(n)` of `Π_p (1 - g(p) p^{-s})^{-k}`.
pub fn sharp_example_coeffs(k: u32, n: usize) -> Result<CoefficientSeries> {
    if k == 0 {
        return Err(Error::invalid("k must be >= 1"));
    }
    Ok(coeffs_from_multiplicative(&sharp_example_spec(k), n))
}

/// Fourier coefficient `a_r = ∫_0^1 i e^{iπu} e^{-2πiru} du = 2/(π(2r-1))`.
pub fn fourier_coeffs_b(r: i64) -> Complex64 {
    Complex64::new(2.0 / (PI * (2 * r - 1) as f64), 0.0)
}

/// Outcome of comparing `|F(σ₂)/F(σ₁)|` with `((σ₁-1)/(σ₂-1))^k` and its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioCheck1 {
    pub ratio: f64,
    pub lower: f64,
    pub upper: f64,
    /// Largest tail uncertainty relative to `|F(σ₁)|` or `|F(σ₂)|`.
    pub tail_fraction: f64,
    /// Tail uncertainty above 10% of either side.
    pub void: bool,
}

impl RatioCheck1 {
    pub fn within(&self, c_lo: f64, c_hi: f64) -> bool {
        self.ratio >= c_lo * self.lower && self.ratio <= c_hi * self.upper
    }
}

const VOID_FRACTION: f64 = 0.1;

pub fn ratio_check_lemma1(eval: &SeriesEvaluator, sigma1: f64, sigma2: f64, k: f64) -> Result<RatioCheck1> {
    if !(1.0 < sigma1 && sigma1 <= sigma2 && sigma2 <= 2.0) {
        return Err(Error::invalid(format!(
            "need 1 < sigma1 <= sigma2 <= 2, got {sigma1}, {sigma2}"
        )));
    }
    let (f1, u1) = eval.eval_with_uncertainty(Complex64::new(sigma1, 0.0));
    let (f2, u2) = eval.eval_with_uncertainty(Complex64::new(sigma2, 0.0));
    let tail_fraction = (u1 / f1.norm()).max(u2 / f2.norm());
    Ok(RatioCheck1 {
        ratio: f2.norm() / f1.norm(),
        lower: ((sigma1 - 1.0) / (sigma2 - 1.0)).powf(k),
        upper: ((sigma2 - 1.0) / (sigma1 - 1.0)).powf(k),
        tail_fraction,
        void: tail_fraction > VOID_FRACTION,
    })
}

/// Outcome of comparing `|F(σ+it)/F(σ)|` with the `4k/π` growth bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioCheck2 {
    pub ratio: f64,
    pub bound: f64,
    pub ratio_to_bound: f64,
    pub tail_fraction: f64,
    pub void: bool,
}

/// `(1 + |t|/(σ-1))^{4k/π}` for `|t| <= 2`, `(log|t|/(σ-1))^{4k/π}` beyond.
pub fn lemma2_bound(sigma: f64, t: f64, k: f64) -> f64 {
    let e = 4.0 * k / PI;
    if t.abs() <= 2.0 {
        (1.0 + t.abs() / (sigma - 1.0)).powf(e)
    } else {
        (t.abs().ln() / (sigma - 1.0)).powf(e)
    }
}

pub fn ratio_check_lemma2(eval: &SeriesEvaluator, sigma: f64, t: f64, k: f64) -> Result<RatioCheck2> {
    if !(1.0 < sigma && sigma <= 2.0) {
        return Err(Error::invalid(format!("need 1 < sigma <= 2, got {sigma}")));
    }
    let (base, u0) = eval.eval_with_uncertainty(Complex64::new(sigma, 0.0));
    let (moved, u1) = eval.eval_with_uncertainty(Complex64::new(sigma, t));
    let ratio = if t == 0.0 { 1.0 } else { moved.norm() / base.norm() };
    let bound = lemma2_bound(sigma, t, k);
    let tail_fraction = (u0 / base.norm()).max(u1 / moved.norm());
    Ok(RatioCheck2 {
        ratio,
        bound,
        ratio_to_bound: ratio / bound,
        tail_fraction,
        void: tail_fraction > VOID_FRACTION,
    })
}

/// Least-squares fit of `log|S_1(x)|` against `log log x`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual of the fit.
    pub residual: f64,
    pub points: Vec<(f64, f64)>,
}

pub fn growth_fit(f: &CoefficientSeries, x_grid: &[f64]) -> Result<GrowthFit> {
    if x_grid.len() < 5 {
        return Err(Error::invalid("growth fit needs at least 5 grid points"));
    }
    if x_grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::invalid("growth fit grid must be strictly increasing"));
    }
    if !(x_grid[0] > std::f64::consts::E) {
        return Err(Error::invalid("growth fit grid must start above e"));
    }
    let means = log_means_on_grid(f, x_grid)?;
    let points: Vec<(f64, f64)> = x_grid
        .iter()
        .zip(&means)
        .map(|(&x, s)| (x.ln().ln(), s.norm().ln()))
        .collect();
    if points.iter().any(|(_, y)| !y.is_finite()) {
        return Err(Error::invalid("S_1 vanishes on the grid"));
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = (points
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    Ok(GrowthFit {
        slope,
        intercept,
        residual,
        points,
    })
}

/// Growth exponent of `|S_1(x)|` for the sharp example; the coefficients
/// are generated up to the last grid point.
pub fn growth_fit_sharp(k: u32, x_grid: &[f64]) -> Result<GrowthFit> {
    let top = x_grid.last().copied().unwrap_or(0.0);
    if !(top >= 1.0) {
        return Err(Error::invalid("growth fit grid is empty"));
    }
    let f = sharp_example_coeffs(k, top.floor() as usize)?;
    growth_fit(&f, x_grid)
}
