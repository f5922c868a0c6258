//! Zero counting and localization for Dirichlet polynomials by the
//! argument principle.
//!
//! The winding number of `F_N` around a rectangle is accumulated edge by
//! edge. Each edge is bisected until a segment is certified: with `L` the
//! bound `Σ |f(n)| log(n) n^{-σ_min}` on `|F'|` over the segment and `h`
//! its length, `L·h/2 < |F(mid)|·sin(π/4)` keeps `F` inside a disk that
//! excludes 0 and subtends less than `π/2`, so the phase increment over the
//! segment is the principal argument of `F(end)/F(start)`.
//!
//! All magnitudes are compared after multiplying by `exp(shift)` (see
//! [`DirichletPolynomial::shift_for`]) so that far-left contours do not
//! overflow; the argument is unaffected.

use std::f64::consts::{FRAC_PI_2, FRAC_1_SQRT_2, PI, TAU};
use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dirichletpoly::{DirichletPolynomial, PointStats};
use crate::error::{Error, Result};

/// Relative guard: a contour sample with `|F| < guard · Σ|f(n)| n^{-σ}` is a boundary zero.
pub const DEFAULT_GUARD: f64 = 1e-12;
/// Initial ordinate shift when a counting contour passes through a zero.
pub const COUNT_EPSILON: f64 = 1e-8;
/// Edge-shift retries after the initial attempt.
pub const MAX_SHIFT_RETRIES: u32 = 3;

const MAX_EDGE_DEPTH: u32 = 64;
const MAX_NEWTON_STEPS: u32 = 100;
/// Split positions tried, in order, when quadrisecting a rectangle; the
/// exact midpoint is avoided because symmetric families put zeros there.
const SPLIT_FRACTIONS: [f64; 6] = [0.5371, 0.4627, 0.5719, 0.4281, 0.6133, 0.3867];

/// Axis-aligned rectangle `[sigma_lo, sigma_hi] × [t_lo, t_hi]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RectangleRegion {
    pub sigma_lo: f64,
    pub sigma_hi: f64,
    pub t_lo: f64,
    pub t_hi: f64,
}

impl RectangleRegion {
    pub fn new(sigma_lo: f64, sigma_hi: f64, t_lo: f64, t_hi: f64) -> Result<Self> {
        let finite = [sigma_lo, sigma_hi, t_lo, t_hi].iter().all(|v| v.is_finite());
        if !finite || !(sigma_lo < sigma_hi) || !(t_lo < t_hi) {
            return Err(Error::invalid(format!(
                "degenerate rectangle [{sigma_lo}, {sigma_hi}] x [{t_lo}, {t_hi}]"
            )));
        }
        Ok(Self {
            sigma_lo,
            sigma_hi,
            t_lo,
            t_hi,
        })
    }

    pub fn width(&self) -> f64 {
        self.sigma_hi - self.sigma_lo
    }

    pub fn height(&self) -> f64 {
        self.t_hi - self.t_lo
    }

    pub fn diameter(&self) -> f64 {
        self.width().hypot(self.height())
    }

    pub fn center(&self) -> Complex64 {
        Complex64::new(
            0.5 * (self.sigma_lo + self.sigma_hi),
            0.5 * (self.t_lo + self.t_hi),
        )
    }

    pub fn contains(&self, z: Complex64, slack: f64) -> bool {
        z.re >= self.sigma_lo - slack
            && z.re <= self.sigma_hi + slack
            && z.im >= self.t_lo - slack
            && z.im <= self.t_hi + slack
    }

    pub fn expanded(&self, eps: f64) -> Self {
        Self {
            sigma_lo: self.sigma_lo - eps,
            sigma_hi: self.sigma_hi + eps,
            t_lo: self.t_lo - eps,
            t_hi: self.t_hi + eps,
        }
    }

    /// The mirror image under `t -> -t`.
    pub fn conjugate(&self) -> Self {
        Self {
            sigma_lo: self.sigma_lo,
            sigma_hi: self.sigma_hi,
            t_lo: -self.t_hi,
            t_hi: -self.t_lo,
        }
    }

    fn split(&self, fs: f64, ft: f64) -> [Self; 4] {
        let sm = self.sigma_lo + fs * self.width();
        let tm = self.t_lo + ft * self.height();
        [
            Self { sigma_hi: sm, t_hi: tm, ..*self },
            Self { sigma_lo: sm, t_hi: tm, ..*self },
            Self { sigma_hi: sm, t_lo: tm, ..*self },
            Self { sigma_lo: sm, t_lo: tm, ..*self },
        ]
    }
}

/// A located zero `β + iγ` of `F_N`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroRecord {
    pub beta: f64,
    pub gamma: f64,
    /// `|F_N(β + iγ)|`
    pub residual: f64,
    pub iterations: u32,
    /// Winding multiplicity; greater than 1 only for unresolved clusters.
    pub multiplicity: u32,
    /// `Σ |f(n)| n^{-β}`, the natural magnitude of `F_N` near the zero.
    pub scale: f64,
}

impl ZeroRecord {
    pub fn point(&self) -> Complex64 {
        Complex64::new(self.beta, self.gamma)
    }

    pub fn relative_residual(&self) -> f64 {
        self.residual / self.scale
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WindingResult {
    pub count: i64,
    /// Smallest `|F_N|` over contour samples, relative to the local scale `Σ|f(n)| n^{-σ}`.
    pub min_abs_on_contour: f64,
    pub samples: usize,
}

#[derive(Clone, Copy)]
struct Sample {
    value: Complex64,
}

struct EdgeWalker<'a> {
    poly: &'a DirichletPolynomial,
    guard: f64,
    samples: usize,
    min_rel: f64,
}

impl<'a> EdgeWalker<'a> {
    fn sample(&mut self, z: Complex64, shift: f64) -> Result<(Sample, PointStats)> {
        let st = self.poly.eval_stats(z, shift);
        self.samples += 1;
        let abs = st.value.norm();
        let rel = abs / st.abs_sum;
        self.min_rel = self.min_rel.min(rel);
        if rel < self.guard || !abs.is_finite() {
            return Err(Error::BoundaryZero {
                at: z,
                abs: rel,
                guard: self.guard,
            });
        }
        Ok((Sample { value: st.value }, st))
    }

    /// Continuous change of `arg F` along the segment `a -> b`.
    fn edge_phase(&mut self, a: Complex64, sa: Sample, b: Complex64, sb: Sample) -> Result<f64> {
        let mut total = 0.0;
        let mut stack = vec![(a, sa, b, sb, 0u32)];
        while let Some((a, sa, b, sb, depth)) = stack.pop() {
            let sigma_min = a.re.min(b.re);
            let shift = self.poly.shift_for(sigma_min);
            let mid = 0.5 * (a + b);
            let (sm, stats) = self.sample(mid, shift)?;
            let mid_abs = stats.value.norm();
            // on a vertical segment the midpoint already carries the bound
            let lipschitz = if a.re == b.re {
                stats.deriv_bound
            } else {
                self.poly.deriv_bound(sigma_min, shift)
            };
            let half = 0.5 * (b - a).norm();
            let inc = (sb.value / sa.value).arg();
            if lipschitz * half < mid_abs * FRAC_1_SQRT_2 && inc.abs() < FRAC_PI_2 {
                total += inc;
                continue;
            }
            if depth >= MAX_EDGE_DEPTH {
                let first = (sm.value / sa.value).arg();
                let second = (sb.value / sm.value).arg();
                if first.abs() < FRAC_PI_2 && second.abs() < FRAC_PI_2 {
                    total += first + second;
                    continue;
                }
                return Err(Error::BoundaryZero {
                    at: mid,
                    abs: self.min_rel,
                    guard: self.guard,
                });
            }
            stack.push((mid, sm, b, sb, depth + 1));
            stack.push((a, sa, mid, sm, depth + 1));
        }
        Ok(total)
    }
}

/// Number of zeros of `poly` inside `rect`, counted with multiplicity.
///
/// `guard` is relative to the local scale `Σ |f(n)| n^{-σ}`.
pub fn winding_number(
    poly: &DirichletPolynomial,
    rect: &RectangleRegion,
    guard: f64,
) -> Result<WindingResult> {
    if !(guard > 0.0) {
        return Err(Error::invalid("guard must be positive"));
    }
    let mut walker = EdgeWalker {
        poly,
        guard,
        samples: 0,
        min_rel: f64::INFINITY,
    };
    let corners = [
        Complex64::new(rect.sigma_lo, rect.t_lo),
        Complex64::new(rect.sigma_hi, rect.t_lo),
        Complex64::new(rect.sigma_hi, rect.t_hi),
        Complex64::new(rect.sigma_lo, rect.t_hi),
    ];
    let mut values = Vec::with_capacity(4);
    for z in corners {
        let shift = poly.shift_for(z.re);
        values.push(walker.sample(z, shift)?.0);
    }
    let mut total = 0.0;
    for i in 0..4 {
        let j = (i + 1) % 4;
        total += walker.edge_phase(corners[i], values[i], corners[j], values[j])?;
    }
    let turns = total / TAU;
    let count = turns.round();
    if (turns - count).abs() > 1e-6 {
        return Err(Error::Invariant(format!(
            "winding {turns} is not an integer on {rect:?}"
        )));
    }
    Ok(WindingResult {
        count: count as i64,
        min_abs_on_contour: walker.min_rel,
        samples: walker.samples,
    })
}

/// `winding_number` with the outward edge-shift schedule `0, ε, 2ε, 4ε`.
fn winding_with_retry(
    poly: &DirichletPolynomial,
    rect: &RectangleRegion,
    eps: f64,
) -> Result<(RectangleRegion, WindingResult)> {
    let mut last = None;
    for attempt in 0..=MAX_SHIFT_RETRIES {
        let shifted = if attempt == 0 {
            *rect
        } else {
            rect.expanded(eps * f64::from(1u32 << (attempt - 1)))
        };
        match winding_number(poly, &shifted, DEFAULT_GUARD) {
            Ok(w) => return Ok((shifted, w)),
            Err(e @ Error::BoundaryZero { .. }) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.expect("at least one attempt"))
}

/// Newton iteration from `start`; returns the final point and step count.
pub fn newton(poly: &DirichletPolynomial, start: Complex64, tol: f64) -> Option<(Complex64, u32)> {
    let mut z = start;
    for it in 1..=MAX_NEWTON_STEPS {
        let (f, df) = poly.eval_with_deriv(z);
        if df.norm() == 0.0 || !f.is_finite() || !df.is_finite() {
            return None;
        }
        let step = f / df;
        z -= step;
        if step.norm() <= (0.01 * tol).max(4.0 * f64::EPSILON * z.norm()) {
            return Some((z, it));
        }
    }
    None
}

fn make_record(
    poly: &DirichletPolynomial,
    z: Complex64,
    iterations: u32,
    multiplicity: u32,
) -> ZeroRecord {
    ZeroRecord {
        beta: z.re,
        gamma: z.im,
        residual: poly.eval(z).norm(),
        iterations,
        multiplicity,
        scale: poly.abs_sum(z.re),
    }
}

fn refine(
    poly: &DirichletPolynomial,
    rect: RectangleRegion,
    count: i64,
    tol: f64,
) -> Result<Vec<ZeroRecord>> {
    if count <= 0 {
        return Ok(Vec::new());
    }
    if count == 1 {
        if let Some((z, it)) = newton(poly, rect.center(), tol) {
            let rec = make_record(poly, z, it, 1);
            if rect.contains(z, tol) && rec.relative_residual() <= tol {
                return Ok(vec![rec]);
            }
        }
    }
    if rect.diameter() < 10.0 * tol {
        let (z, it) = newton(poly, rect.center(), tol)
            .filter(|(z, _)| rect.contains(*z, 10.0 * tol))
            .unwrap_or((rect.center(), 0));
        return Ok(vec![make_record(poly, z, it, count as u32)]);
    }
    let mut last_err = None;
    for (i, &fs) in SPLIT_FRACTIONS.iter().enumerate() {
        let ft = SPLIT_FRACTIONS[(i + 1) % SPLIT_FRACTIONS.len()];
        let children = rect.split(fs, ft);
        let counts: Result<Vec<i64>> = children
            .iter()
            .map(|c| winding_number(poly, c, DEFAULT_GUARD).map(|w| w.count))
            .collect();
        match counts {
            Ok(counts) if counts.iter().sum::<i64>() == count => {
                let parts: Result<Vec<Vec<ZeroRecord>>> = children
                    .par_iter()
                    .zip(counts.par_iter())
                    .map(|(c, &n)| refine(poly, *c, n, tol))
                    .collect();
                return Ok(parts?.into_iter().flatten().collect());
            }
            Ok(counts) => {
                last_err = Some(Error::Invariant(format!(
                    "child windings {counts:?} do not sum to {count}"
                )))
            }
            Err(e @ Error::BoundaryZero { .. }) => last_err = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last_err.expect("split attempted"))
}

pub fn sort_zeros(zeros: &mut [ZeroRecord]) {
    zeros.sort_by(|a, b| {
        a.gamma
            .total_cmp(&b.gamma)
            .then(a.beta.total_cmp(&b.beta))
    });
}

/// All zeros in `rect`, sorted by `(gamma, beta)`.
///
/// Records carry multiplicity; their total equals the winding number of the
/// (possibly edge-shifted) rectangle.
pub fn locate_zeros(
    poly: &DirichletPolynomial,
    rect: &RectangleRegion,
    tol: f64,
) -> Result<Vec<ZeroRecord>> {
    if !(tol > 0.0) {
        return Err(Error::invalid("tolerance must be positive"));
    }
    let (rect, w) = winding_with_retry(poly, rect, tol)?;
    let mut zeros = refine(poly, rect, w.count, tol)?;
    sort_zeros(&mut zeros);
    let total: i64 = zeros.iter().map(|z| i64::from(z.multiplicity)).sum();
    if total != w.count {
        return Err(Error::Invariant(format!(
            "located multiplicity {total} differs from winding count {}",
            w.count
        )));
    }
    Ok(zeros)
}

/// `N(T)`: zeros with ordinate in `[0, T]` and real part in `strip`.
///
/// A zero on `t = 0` or `t = T` is counted, following `lim_{ε→0+} N(T + ε)`.
pub fn count_upto(poly: &DirichletPolynomial, t_max: f64, strip: (f64, f64)) -> Result<i64> {
    if !(t_max > 0.0) {
        return Err(Error::invalid("T must be positive"));
    }
    let mut last = None;
    for attempt in 0..=MAX_SHIFT_RETRIES {
        let eps = if attempt == 0 {
            0.0
        } else {
            COUNT_EPSILON * f64::from(1u32 << (attempt - 1))
        };
        let rect = RectangleRegion::new(strip.0, strip.1, -eps, t_max + eps)?;
        match winding_number(poly, &rect, DEFAULT_GUARD) {
            Ok(w) => return Ok(w.count),
            Err(e @ Error::BoundaryZero { .. }) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.expect("at least one attempt"))
}

/// `N(σ, T)`: total multiplicity of records with `beta > sigma`.
pub fn zero_density(zeros: &[ZeroRecord], sigma: f64) -> u64 {
    zeros
        .iter()
        .filter(|z| z.beta > sigma)
        .map(|z| u64::from(z.multiplicity))
        .sum()
}

/// Margin added to the strip infimum for counting contours.
pub const STRIP_MARGIN: f64 = 0.5;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountingReport {
    #[serde(rename = "NT")]
    pub n_t: i64,
    /// `(T / 2π) log M`
    pub formula: f64,
    /// `N(T) - (T / 2π) log M`
    pub residual: f64,
    #[serde(rename = "EN")]
    pub e_n: usize,
    #[serde(rename = "M")]
    pub m: usize,
    pub strip_bound: f64,
}

/// Compares `N(T)` with `(T / 2π) log M` over the certified strip.
pub fn counting_residual(poly: &DirichletPolynomial, t_max: f64) -> Result<CountingReport> {
    if !poly.coeffs().is_real() {
        return Err(Error::invalid("counting formula applies to real coefficient series"));
    }
    let b = poly.strip_bound(STRIP_MARGIN)?;
    let m = poly.largest_nonzero()?;
    let e_n = poly.nonzero_count()?;
    let n_t = count_upto(poly, t_max, (-b, b))?;
    let formula = t_max / (2.0 * PI) * (m as f64).ln();
    Ok(CountingReport {
        n_t,
        formula,
        residual: n_t as f64 - formula,
        e_n,
        m,
        strip_bound: b,
    })
}

/// Writes `beta,gamma,residual,iterations` rows with round-trip float formatting.
pub fn write_zero_csv<W: Write>(mut out: W, zeros: &[ZeroRecord]) -> std::io::Result<()> {
    writeln!(out, "beta,gamma,residual,iterations")?;
    for z in zeros {
        writeln!(
            out,
            "{:?},{:?},{:?},{}",
            z.beta, z.gamma, z.residual, z.iterations
        )?;
    }
    Ok(())
}

/// Parses the output of [`write_zero_csv`]; multiplicity and scale are not
/// stored. Lines starting with `#` are skipped.
pub fn read_zero_csv(text: &str) -> Result<Vec<(f64, f64, f64, u32)>> {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    if lines.next() != Some("beta,gamma,residual,iterations") {
        return Err(Error::invalid("missing zero CSV header"));
    }
    lines
        .filter(|l| !l.is_empty())
        .map(|line| {
            let cols: Vec<&str> = line.split(',').collect();
            let bad = || Error::invalid(format!("bad zero CSV row {line:?}"));
            if cols.len() != 4 {
                return Err(bad());
            }
            let f = |s: &str| s.parse::<f64>().map_err(|_| bad());
            Ok((f(cols[0])?, f(cols[1])?, f(cols[2])?, cols[3].parse().map_err(|_| bad())?))
        })
        .collect()
}
