//! Mollified partial Dedekind zeta functions and the zero-density apparatus.
//!
//! With `a(n)` the ideal count of norm `n` and `μ_K(n)` the Möbius function
//! summed over ideals of norm `n`, the product
//! `ζ_{K,X}(s) M_{K,Y}(s) = 1 + f_K(s)` has coefficients `g(n)` that vanish
//! for `n <= min(X, Y)`. Everything is aggregated by norm.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dirichletpoly::{Compensated, DirichletPolynomial};
use crate::error::{Error, Result};
use crate::multcore::CoefficientSeries;
use crate::numberfield::{dedekind_coeffs_int, divisor_by_norm, mobius_by_norm, FieldSpec};
use crate::zeroengine::{locate_zeros, zero_density, RectangleRegion, ZeroRecord, COUNT_EPSILON, STRIP_MARGIN};

#[derive(Clone, Debug)]
pub struct MollifiedProduct {
    field: FieldSpec,
    x: usize,
    y: usize,
    zeta: Vec<i64>,
    mobius: Vec<i64>,
    g: Vec<i64>,
    z: usize,
    f_k: DirichletPolynomial,
}

/// Builds `g(n) = Σ_{ab=n, a<=X, b<=Y} a(a) μ_K(b) - [n = 1]` for `n <= XY`.
pub fn build_mollified(field: &FieldSpec, x: usize, y: usize) -> Result<MollifiedProduct> {
    if x < 2 || y < 2 {
        return Err(Error::invalid(format!("X and Y must be >= 2, got X={x}, Y={y}")));
    }
    let top = x
        .checked_mul(y)
        .ok_or_else(|| Error::Overflow(format!("X·Y for X={x}, Y={y}")))?;
    let zeta = dedekind_coeffs_int(field, x)?;
    let mobius = mobius_by_norm(field, y)?;
    let mut g = vec![0i64; top];
    for (i, &za) in zeta.iter().enumerate() {
        if za == 0 {
            continue;
        }
        for (j, &mb) in mobius.iter().enumerate() {
            if mb == 0 {
                continue;
            }
            let n = (i + 1) * (j + 1);
            let term = za
                .checked_mul(mb)
                .and_then(|t| g[n - 1].checked_add(t))
                .ok_or_else(|| Error::Overflow(format!("g({n})")))?;
            g[n - 1] = term;
        }
    }
    g[0] -= 1;
    let z = x.min(y);
    if let Some(n) = g[..z].iter().position(|&v| v != 0) {
        return Err(Error::Invariant(format!(
            "g({}) = {} but g must vanish up to Z = {z}",
            n + 1,
            g[n]
        )));
    }
    let d = divisor_by_norm(field, top)?;
    if let Some(n) = (0..top).find(|&n| g[n].unsigned_abs() > d[n].unsigned_abs()) {
        return Err(Error::Invariant(format!(
            "|g({})| = {} exceeds the divisor count {}",
            n + 1,
            g[n].abs(),
            d[n]
        )));
    }
    let f_k = DirichletPolynomial::new(CoefficientSeries::from_integers(&g)?);
    Ok(MollifiedProduct {
        field: field.clone(),
        x,
        y,
        zeta,
        mobius,
        g,
        z,
        f_k,
    })
}

impl MollifiedProduct {
    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn x(&self) -> usize {
        self.x
    }

    pub fn y(&self) -> usize {
        self.y
    }

    /// `min(X, Y)`.
    pub fn z(&self) -> usize {
        self.z
    }

    /// `a(n)` for `n <= X`.
    pub fn zeta_by_norm(&self) -> &[i64] {
        &self.zeta
    }

    /// `μ_K(n)` for `n <= Y`.
    pub fn mobius_by_norm(&self) -> &[i64] {
        &self.mobius
    }

    /// `g(n)` for `n <= XY`.
    pub fn g_by_norm(&self) -> &[i64] {
        &self.g
    }

    pub fn zeta_coeffs(&self) -> CoefficientSeries {
        CoefficientSeries::from_integers(&self.zeta).expect("X >= 2")
    }

    pub fn mobius_coeffs(&self) -> CoefficientSeries {
        CoefficientSeries::from_integers(&self.mobius).expect("Y >= 2")
    }

    pub fn g_coeffs(&self) -> &CoefficientSeries {
        self.f_k.coeffs()
    }

    /// `f_K(s) = Σ_{Z<n<=XY} g(n) n^{-s}`.
    pub fn f_k(&self, s: Complex64) -> Complex64 {
        self.f_k.eval(s)
    }

    /// `h_K(s) = 1 - f_K(s)²`.
    pub fn h_k(&self, s: Complex64) -> Complex64 {
        let f = self.f_k(s);
        1.0 - f * f
    }
}

pub fn fk_eval(mp: &MollifiedProduct, s: Complex64) -> Complex64 {
    mp.f_k(s)
}

pub fn hk_eval(mp: &MollifiedProduct, s: Complex64) -> Complex64 {
    mp.h_k(s)
}

/// Relative change at which node doubling stops.
pub const QUAD_TOL: f64 = 1e-4;
const MAX_QUAD_NODES: usize = 1 << 22;

/// `∫_0^T log|h_K(σ₀ + it)| dt` by composite Simpson with node doubling.
///
/// Convergence is measured against `∫ |log|h_K||` so integrals near zero do
/// not stall. Nodes landing on a zero of `h_K` are nudged upward by
/// `ε, 2ε, 4ε`.
pub fn littlewood_integrand(mp: &MollifiedProduct, sigma0: f64, t_max: f64, quad_nodes: usize) -> Result<f64> {
    if !(sigma0 >= 0.5) {
        return Err(Error::invalid(format!("sigma0 must be >= 1/2, got {sigma0}")));
    }
    if !(t_max >= 0.0) || !t_max.is_finite() {
        return Err(Error::invalid(format!("T must be finite and >= 0, got {t_max}")));
    }
    if t_max == 0.0 {
        return Ok(0.0);
    }
    let mut n = quad_nodes.max(2).next_power_of_two();
    let mut vals = log_abs_h(mp, sigma0, 0.0, t_max / n as f64, n + 1)?;
    let mut prev = simpson(&vals, t_max / n as f64);
    while n < MAX_QUAD_NODES {
        let h = t_max / n as f64;
        let mids = log_abs_h(mp, sigma0, 0.5 * h, h, n)?;
        let mut merged = Vec::with_capacity(2 * n + 1);
        for j in 0..n {
            merged.push(vals[j]);
            merged.push(mids[j]);
        }
        merged.push(vals[n]);
        vals = merged;
        n *= 2;
        let cur = simpson(&vals, t_max / n as f64);
        let abs_scale = simpson_abs(&vals, t_max / n as f64);
        if (cur - prev).abs() <= QUAD_TOL * abs_scale.max(cur.abs()) {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::QuadratureStall(format!(
        "no convergence with {n} nodes at sigma0 = {sigma0}, T = {t_max}"
    )))
}

fn log_abs_h(mp: &MollifiedProduct, sigma: f64, t0: f64, dt: f64, count: usize) -> Result<Vec<f64>> {
    let guard = 1e-12;
    mp.f_k
        .eval_vertical(sigma, t0, dt, count)
        .into_iter()
        .enumerate()
        .map(|(j, f)| {
            let h = (1.0 - f * f).norm();
            if h > guard {
                return Ok(h.ln());
            }
            let t = t0 + j as f64 * dt;
            for k in 0..3 {
                let shifted = Complex64::new(sigma, t + COUNT_EPSILON * f64::from(1u32 << k));
                let h = mp.h_k(shifted).norm();
                if h > guard {
                    return Ok(h.ln());
                }
            }
            Err(Error::QuadratureStall(format!("h_K vanishes at {sigma} + {t}i")))
        })
        .collect()
}

fn simpson(vals: &[f64], h: f64) -> f64 {
    let mut acc = Compensated::default();
    let last = vals.len() - 1;
    for (j, &v) in vals.iter().enumerate() {
        let w = if j == 0 || j == last {
            1.0
        } else if j % 2 == 1 {
            4.0
        } else {
            2.0
        };
        acc.add(w * v);
    }
    acc.value() * h / 3.0
}

fn simpson_abs(vals: &[f64], h: f64) -> f64 {
    let abs: Vec<f64> = vals.iter().map(|v| v.abs()).collect();
    simpson(&abs, h)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityRow {
    pub sigma: f64,
    pub count: u64,
    pub bound: f64,
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityReport {
    pub field: FieldSpec,
    #[serde(rename = "X")]
    pub x: usize,
    #[serde(rename = "T")]
    pub t: f64,
    pub strip_bound: f64,
    pub zeros_total: u64,
    pub max_ratio: f64,
    pub rows: Vec<DensityRow>,
}

/// `T X^{-2(σ-1/2)} (log T)^5 + (log T)^2`.
pub fn density_bound(x: usize, t: f64, sigma: f64) -> f64 {
    let lt = t.ln();
    t * (x as f64).powf(-2.0 * (sigma - 0.5)) * lt.powi(5) + lt * lt
}

/// Zeros of the partial Dedekind zeta function `ζ_{K,X}` in `0 <= t <= T`,
/// over the whole certified strip.
pub fn partial_zeta_zeros(field: &FieldSpec, x: usize, t: f64, tol: f64) -> Result<(Vec<ZeroRecord>, f64)> {
    let poly = DirichletPolynomial::new(crate::numberfield::dedekind_coeffs(field, x)?);
    let b = poly.strip_bound(STRIP_MARGIN)?;
    let rect = RectangleRegion::new(-b, b, 0.0, t)?;
    Ok((locate_zeros(&poly, &rect, tol)?, b))
}

/// Zero-location tolerance used by the density check.
pub const DENSITY_TOL: f64 = 1e-8;

/// `N_{K,X}(σ, T)` against the density shape at each `σ` in the grid.
pub fn density_shape_check(field: &FieldSpec, x: usize, t: f64, sigma_grid: &[f64]) -> Result<DensityReport> {
    if x < 2 {
        return Err(Error::invalid("X must be >= 2"));
    }
    if !(t >= x as f64) || !t.is_finite() {
        return Err(Error::invalid(format!("need X <= T, got X={x}, T={t}")));
    }
    if let Some(s) = sigma_grid.iter().find(|s| !(0.5..=2.0).contains(*s)) {
        return Err(Error::invalid(format!("sigma {s} outside [1/2, 2]")));
    }
    let (zeros, b) = partial_zeta_zeros(field, x, t, DENSITY_TOL)?;
    let mut sigmas = sigma_grid.to_vec();
    sigmas.sort_by(f64::total_cmp);
    sigmas.dedup();
    let rows: Vec<DensityRow> = sigmas
        .iter()
        .map(|&sigma| {
            let count = zero_density(&zeros, sigma);
            let bound = density_bound(x, t, sigma);
            DensityRow {
                sigma,
                count,
                bound,
                ratio: count as f64 / bound,
            }
        })
        .collect();
    Ok(DensityReport {
        field: field.clone(),
        x,
        t,
        strip_bound: b,
        zeros_total: zeros.iter().map(|z| u64::from(z.multiplicity)).sum(),
        max_ratio: rows.iter().map(|r| r.ratio).fold(0.0, f64::max),
        rows,
    })
}

/// `∫_0^T |Σ a_n n^{-it}|² dt` in closed form, compared with `T Σ|a_n|²`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MvtReport {
    #[serde(rename = "T")]
    pub t: f64,
    pub integral: f64,
    pub diagonal: f64,
    pub deviation: f64,
    /// `Σ n |a_n|²`
    pub envelope: f64,
    pub ratio: f64,
}

pub fn mvt_check(a: &CoefficientSeries, t: f64) -> Result<MvtReport> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::invalid(format!("T must be finite and >= 0, got {t}")));
    }
    let vals = a.values();
    let mut sq = Compensated::default();
    let mut env = Compensated::default();
    for (i, v) in vals.iter().enumerate() {
        sq.add(v.norm_sqr());
        env.add((i + 1) as f64 * v.norm_sqr());
    }
    let diagonal = t * sq.value();
    // pairs m > n contribute 2 Re[a_m conj(a_n) (1 - e^{-iTL}) / (iL)], L = log(m/n)
    let mut off = Compensated::default();
    for m in 1..vals.len() {
        if vals[m] == Complex64::new(0.0, 0.0) {
            continue;
        }
        for n in 0..m {
            let l = ((m + 1) as f64 / (n + 1) as f64).ln();
            let prod = vals[m] * vals[n].conj();
            let phase = Complex64::from_polar(1.0, -t * l);
            let integral = (1.0 - phase) / Complex64::new(0.0, l);
            off.add(2.0 * (prod * integral).re);
        }
    }
    let deviation = off.value();
    let envelope = env.value();
    Ok(MvtReport {
        t,
        integral: diagonal + deviation,
        diagonal,
        deviation,
        envelope,
        ratio: if envelope > 0.0 { deviation.abs() / envelope } else { 0.0 },
    })
}

/// Constant in the mean-value envelope `|deviation| <= C Σ n|a_n|²`.
pub const MVT_CONSTANT: f64 = 3.0;
