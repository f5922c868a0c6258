//! Ideal counts by norm for number fields described by their local
//! splitting data.
//!
//! Nothing here materializes ideals. Each rational prime `p` carries a
//! [`SplittingRule`] listing `(e_i, f_i)` for the primes above it; the
//! Euler factor at `p` depends only on the residue degrees, and all
//! norm-aggregated coefficients are assembled multiplicatively from it.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multcore::{CoefficientSeries, Sieve};

/// `(ramification index, residue degree)` for each prime above `p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SplittingRule {
    pairs: Vec<(u32, u32)>,
}

impl SplittingRule {
    pub fn new(pairs: Vec<(u32, u32)>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::invalid("splitting rule needs at least one prime"));
        }
        if pairs.iter().any(|&(e, f)| e == 0 || f == 0) {
            return Err(Error::invalid("ramification index and residue degree must be >= 1"));
        }
        Ok(Self { pairs })
    }

    /// `g` copies of `(e, f)`.
    pub fn uniform(g: u32, e: u32, f: u32) -> Self {
        Self {
            pairs: vec![(e, f); g as usize],
        }
    }

    pub fn pairs(&self) -> &[(u32, u32)] {
        &self.pairs
    }

    /// `Σ e_i f_i`, which must equal the field degree.
    pub fn local_degree(&self) -> u32 {
        self.pairs.iter().map(|&(e, f)| e * f).sum()
    }
}

fn checked_add(a: i64, b: i64) -> Result<i64> {
    a.checked_add(b)
        .ok_or_else(|| Error::Overflow("local coefficient exceeds i64".into()))
}

/// Multiplies `series` in place by `1/(1 - x^f)` up to its length.
fn mul_geometric(series: &mut [i64], f: usize) -> Result<()> {
    for m in f..series.len() {
        series[m] = checked_add(series[m], series[m - f])?;
    }
    Ok(())
}

/// Coefficients of `Π_i (1 - x^{f_i})^{-1}` through degree `max_exp`: `a(p^m)`.
pub fn local_coeffs(rule: &SplittingRule, max_exp: usize) -> Result<Vec<i64>> {
    let mut out = vec![0i64; max_exp + 1];
    out[0] = 1;
    for &(_, f) in &rule.pairs {
        mul_geometric(&mut out, f as usize)?;
    }
    Ok(out)
}

/// Coefficients of `Π_i (1 - x^{f_i})` through degree `max_exp`.
pub fn mobius_local_coeffs(rule: &SplittingRule, max_exp: usize) -> Vec<i64> {
    let mut out = vec![0i64; max_exp + 1];
    out[0] = 1;
    for &(_, f) in &rule.pairs {
        let f = f as usize;
        for m in (f..=max_exp).rev() {
            out[m] -= out[m - f];
        }
    }
    out
}

/// Coefficients of `Π_i (1 - x^{f_i})^{-2}`: the divisor function summed over ideals of norm `p^m`.
pub fn divisor_local_coeffs(rule: &SplittingRule, max_exp: usize) -> Result<Vec<i64>> {
    let mut out = vec![0i64; max_exp + 1];
    out[0] = 1;
    for &(_, f) in &rule.pairs {
        mul_geometric(&mut out, f as usize)?;
        mul_geometric(&mut out, f as usize)?;
    }
    Ok(out)
}

/// Coefficients of `Π_i Σ_j (j+1)² x^{j f_i}`: `Σ d(m)²` over ideals of norm `p^m`.
pub fn divisor_square_local_coeffs(rule: &SplittingRule, max_exp: usize) -> Result<Vec<i64>> {
    let mut out = vec![0i64; max_exp + 1];
    out[0] = 1;
    for &(_, f) in &rule.pairs {
        let f = f as usize;
        let prev = out.clone();
        for m in 0..=max_exp {
            let mut acc = 0i64;
            for j in 0..=m / f {
                let w = ((j + 1) * (j + 1)) as i64;
                acc = w
                    .checked_mul(prev[m - j * f])
                    .and_then(|t| acc.checked_add(t))
                    .ok_or_else(|| Error::Overflow("local divisor-square series".into()))?;
            }
            out[m] = acc;
        }
    }
    Ok(out)
}

/// Kronecker symbol `(a/n)` with the full sign and 2-adic extension.
pub fn kronecker(a: i64, n: i64) -> i32 {
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    let mut a = a as i128;
    let mut n = n as i128;
    let mut sign = 1i32;
    if n < 0 {
        n = -n;
        if a < 0 {
            sign = -sign;
        }
    }
    let mut twos = 0;
    while n % 2 == 0 {
        n /= 2;
        twos += 1;
    }
    if twos > 0 {
        if a % 2 == 0 {
            return 0;
        }
        // (a/2) = 1 for a ≡ ±1 mod 8, -1 for a ≡ ±3 mod 8
        if twos % 2 == 1 && matches!(a.rem_euclid(8), 3 | 5) {
            sign = -sign;
        }
    }
    // Jacobi symbol (a/n), n odd positive
    a = a.rem_euclid(n);
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                sign = -sign;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            sign = -sign;
        }
        a %= n;
    }
    if n == 1 {
        sign
    } else {
        0
    }
}

fn is_squarefree(mut m: u64) -> bool {
    let mut p = 2u64;
    while p * p <= m {
        if m % (p * p) == 0 {
            return false;
        }
        if m % p == 0 {
            m /= p;
        }
        p += 1;
    }
    true
}

/// Discriminant of a quadratic field: `d ≡ 1 (mod 4)` squarefree, or `d = 4m` with `m ≡ 2, 3 (mod 4)` squarefree.
pub fn is_fundamental_discriminant(d: i64) -> bool {
    if d == 0 || d == 1 {
        return false;
    }
    match d.rem_euclid(4) {
        1 => is_squarefree(d.unsigned_abs()),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && is_squarefree(m.unsigned_abs())
        }
        _ => false,
    }
}

pub fn quadratic_splitting(d: i64, p: u64) -> Result<SplittingRule> {
    if !is_fundamental_discriminant(d) {
        return Err(Error::NonFundamental(d));
    }
    Ok(match kronecker(d, p as i64) {
        1 => SplittingRule::uniform(2, 1, 1),
        -1 => SplittingRule::uniform(1, 1, 2),
        _ => SplittingRule::uniform(1, 2, 1),
    })
}

pub fn euler_phi(mut n: u64) -> u64 {
    let mut out = n;
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            out -= out / p;
        }
        p += 1;
    }
    if n > 1 {
        out -= out / n;
    }
    out
}

fn multiplicative_order(p: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 1;
    }
    let base = p % modulus;
    let mut acc = base;
    let mut order = 1;
    while acc != 1 {
        acc = acc * base % modulus;
        order += 1;
    }
    order
}

pub fn cyclotomic_splitting(q: u64, p: u64) -> Result<SplittingRule> {
    if q < 3 {
        return Err(Error::invalid("cyclotomic conductor must be >= 3"));
    }
    let mut rest = q;
    let mut v = 0u32;
    while rest % p == 0 {
        rest /= p;
        v += 1;
    }
    let e = if v == 0 { 1 } else { euler_phi(p.pow(v)) };
    let f = multiplicative_order(p, rest);
    let g = euler_phi(rest) / f;
    Ok(SplittingRule::uniform(g as u32, e as u32, f as u32))
}

/// A number field described by its degree and how rational primes split.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FieldSpecJson", into = "FieldSpecJson")]
pub struct FieldSpec {
    degree: u32,
    kind: FieldKind,
}

#[derive(Clone, Debug, PartialEq)]
pub enum FieldKind {
    Quadratic { disc: i64 },
    Cyclotomic { q: u64 },
    Custom {
        rules: BTreeMap<u64, SplittingRule>,
        default: SplittingRule,
    },
}

impl FieldSpec {
    pub fn quadratic(disc: i64) -> Result<Self> {
        if !is_fundamental_discriminant(disc) {
            return Err(Error::NonFundamental(disc));
        }
        Ok(Self {
            degree: 2,
            kind: FieldKind::Quadratic { disc },
        })
    }

    pub fn cyclotomic(q: u64) -> Result<Self> {
        if q < 3 {
            return Err(Error::invalid("cyclotomic conductor must be >= 3"));
        }
        Ok(Self {
            degree: euler_phi(q) as u32,
            kind: FieldKind::Cyclotomic { q },
        })
    }

    /// Every rule, including `default`, must satisfy `Σ e_i f_i = degree`.
    pub fn custom(
        degree: u32,
        rules: BTreeMap<u64, SplittingRule>,
        default: SplittingRule,
    ) -> Result<Self> {
        if degree == 0 {
            return Err(Error::invalid("field degree must be >= 1"));
        }
        for (p, rule) in rules.iter().chain(std::iter::once((&0, &default))) {
            if rule.local_degree() != degree {
                let which = if *p == 0 { "default".to_string() } else { format!("p = {p}") };
                return Err(Error::invalid(format!(
                    "splitting rule for {which} has Σ e·f = {}, field degree is {degree}",
                    rule.local_degree()
                )));
            }
        }
        Ok(Self {
            degree,
            kind: FieldKind::Custom { rules, default },
        })
    }

    pub fn rationals() -> Self {
        Self {
            degree: 1,
            kind: FieldKind::Custom {
                rules: BTreeMap::new(),
                default: SplittingRule::uniform(1, 1, 1),
            },
        }
    }

    pub fn gaussian() -> Self {
        Self::quadratic(-4).expect("-4 is fundamental")
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn kind(&self) -> &FieldKind {
        &self.kind
    }

    pub fn label(&self) -> String {
        match &self.kind {
            FieldKind::Quadratic { disc } => format!("quadratic({disc})"),
            FieldKind::Cyclotomic { q } => format!("cyclotomic({q})"),
            FieldKind::Custom { .. } if self.degree == 1 => "rationals".to_string(),
            FieldKind::Custom { .. } => format!("custom(degree {})", self.degree),
        }
    }

    pub fn splitting(&self, p: u64) -> Result<SplittingRule> {
        let rule = match &self.kind {
            FieldKind::Quadratic { disc } => quadratic_splitting(*disc, p)?,
            FieldKind::Cyclotomic { q } => cyclotomic_splitting(*q, p)?,
            FieldKind::Custom { rules, default } => {
                rules.get(&p).unwrap_or(default).clone()
            }
        };
        if rule.local_degree() != self.degree {
            return Err(Error::Invariant(format!(
                "rule at p = {p} has Σ e·f = {} but degree is {}",
                rule.local_degree(),
                self.degree
            )));
        }
        Ok(rule)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
enum FieldSpecJson {
    Quadratic {
        disc: i64,
    },
    Cyclotomic {
        q: u64,
    },
    Custom {
        degree: u32,
        #[serde(default)]
        rules: BTreeMap<String, Vec<(u32, u32)>>,
        default: Vec<(u32, u32)>,
    },
}

impl TryFrom<FieldSpecJson> for FieldSpec {
    type Error = Error;

    fn try_from(json: FieldSpecJson) -> Result<Self> {
        match json {
            FieldSpecJson::Quadratic { disc } => FieldSpec::quadratic(disc),
            FieldSpecJson::Cyclotomic { q } => FieldSpec::cyclotomic(q),
            FieldSpecJson::Custom {
                degree,
                rules,
                default,
            } => {
                let rules = rules
                    .into_iter()
                    .map(|(p, pairs)| {
                        let p: u64 = p
                            .parse()
                            .map_err(|_| Error::invalid(format!("rule key {p:?} is not a prime")))?;
                        Ok((p, SplittingRule::new(pairs)?))
                    })
                    .collect::<Result<_>>()?;
                FieldSpec::custom(degree, rules, SplittingRule::new(default)?)
            }
        }
    }
}

impl From<FieldSpec> for FieldSpecJson {
    fn from(spec: FieldSpec) -> Self {
        match spec.kind {
            FieldKind::Quadratic { disc } => FieldSpecJson::Quadratic { disc },
            FieldKind::Cyclotomic { q } => FieldSpecJson::Cyclotomic { q },
            FieldKind::Custom { rules, default } => FieldSpecJson::Custom {
                degree: spec.degree,
                rules: rules
                    .into_iter()
                    .map(|(p, r)| (p.to_string(), r.pairs))
                    .collect(),
                default: default.pairs,
            },
        }
    }
}

/// Assembles a multiplicative integer sequence `c(1..=n)` from per-prime local series.
fn assemble_by_norm(
    field: &FieldSpec,
    n: usize,
    local: impl Fn(&SplittingRule, usize) -> Result<Vec<i64>>,
) -> Result<Vec<i64>> {
    let n = n.max(1);
    let sieve = Sieve::new(n);
    let mut out = vec![0i64; n];
    out[0] = 1;
    // local series of the prime currently being swept, keyed by prime
    let mut cache: Option<(usize, Vec<i64>)> = None;
    for k in 2..=n {
        let p = sieve.smallest_prime_factor(k).expect("k >= 2");
        let mut rest = k;
        let mut e = 0usize;
        while rest % p == 0 {
            rest /= p;
            e += 1;
        }
        if rest == 1 {
            if cache.as_ref().map(|(q, _)| *q) != Some(p) {
                let mut max_exp = 0usize;
                let mut pp = 1usize;
                while pp <= n / p {
                    pp *= p;
                    max_exp += 1;
                }
                let rule = field.splitting(p as u64)?;
                cache = Some((p, local(&rule, max_exp)?));
            }
            out[k - 1] = cache.as_ref().expect("filled above").1[e];
        } else {
            let pp = k / rest;
            out[k - 1] = out[pp - 1].checked_mul(out[rest - 1]).ok_or_else(|| {
                Error::Overflow(format!("coefficient at n = {k} exceeds i64"))
            })?;
        }
    }
    Ok(out)
}

/// `a(n)`, the number of integral ideals of norm `n`, for `n <= len`.
pub fn dedekind_coeffs_int(field: &FieldSpec, len: usize) -> Result<Vec<i64>> {
    assemble_by_norm(field, len, local_coeffs)
}

pub fn dedekind_coeffs(field: &FieldSpec, len: usize) -> Result<CoefficientSeries> {
    CoefficientSeries::from_integers(&dedekind_coeffs_int(field, len)?)
}

/// `Σ_{‖b‖ = n} μ(b)`, the coefficients of `1/ζ_K`.
pub fn mobius_by_norm(field: &FieldSpec, len: usize) -> Result<Vec<i64>> {
    assemble_by_norm(field, len, |rule, m| Ok(mobius_local_coeffs(rule, m)))
}

/// `Σ_{‖m‖ = n} d(m)`, the coefficients of `ζ_K²`.
pub fn divisor_by_norm(field: &FieldSpec, len: usize) -> Result<Vec<i64>> {
    assemble_by_norm(field, len, divisor_local_coeffs)
}

/// `Σ_{‖m‖ = n} d(m)²`, computed ideal by ideal through the local factors.
pub fn divisor_square_by_norm(field: &FieldSpec, len: usize) -> Result<Vec<i64>> {
    assemble_by_norm(field, len, divisor_square_local_coeffs)
}

/// `A(x) = #{n <= x : a(n) != 0}`.
pub fn count_nonzero(a: &CoefficientSeries, x: usize) -> Result<usize> {
    if x == 0 || x > a.len() {
        return Err(Error::invalid(format!(
            "x = {x} outside 1..={}",
            a.len()
        )));
    }
    Ok(a.values()[..x].iter().filter(|v| v.norm() > 0.0).count())
}
