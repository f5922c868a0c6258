//! Acceptance gate: one line per criterion, nonzero exit if any fails.

use std::f64::consts::{LN_2, PI};
use std::process::Command;
use std::time::{Duration, Instant};

use partial_sums::dirichletpoly::DirichletPolynomial;
use partial_sums::halasz::{
    fourier_coeffs_b, growth_fit_sharp, halasz_bound_with, sharp_example_coeffs, M1Params, SeriesEvaluator,
};
use partial_sums::mollifier::{build_mollified, density_shape_check, mvt_check, MVT_CONSTANT};
use partial_sums::multcore::{check_k_bounded, lambda_f_from_coeffs, CoefficientSeries, Sieve};
use partial_sums::numberfield::{dedekind_coeffs, dedekind_coeffs_int, divisor_by_norm, kronecker, FieldSpec};
use partial_sums::zeroengine::{count_upto, locate_zeros, RectangleRegion, STRIP_MARGIN};
use partial_sums::{Complex64, FunctionSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// Pinned tolerances and recorded constants.
const C1_ZERO_TOL: f64 = 1e-10;
const C1_MAX_TIME: Duration = Duration::from_secs(1);
const C2_FACTOR: f64 = 3.0;
const C2_MAX_TIME: Duration = Duration::from_secs(120);
const C3_CONSTANT: f64 = 10.0;
const C3_MAX_TIME: Duration = Duration::from_secs(600);
const C4_MAX_TIME: Duration = Duration::from_secs(10);
const C6_MAX_TIME: Duration = Duration::from_secs(5);
const C7_MAX_TIME: Duration = Duration::from_secs(300);
const C8_FOURIER_TOL: f64 = 1e-12;
const C8_SLOPE_TOL: f64 = 0.2;
/// Geometric grid points spanning `10³..10⁷` for the growth fit.
const C8_GRID_POINTS: usize = 101;
const C8_MAX_TIME: Duration = Duration::from_secs(180);
const C9_CONSTANT: f64 = 1.5;
/// Coefficients summed explicitly; the rest of `F` comes from the mean-density tail.
const C9_SERIES_LEN: usize = 10_000;
const C9_MAX_TIME: Duration = Duration::from_secs(600);
const C10_MAX_TIME: Duration = Duration::from_secs(5);
const C11_CONSTANT: f64 = 1e-3;
const C11_MAX_TIME: Duration = Duration::from_secs(900);

type Outcome = Result<String, String>;

fn timed(limit: Duration, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let out = f();
    let took = start.elapsed();
    match out {
        Ok(msg) if took <= limit => Ok(format!("{msg}; {:.2}s", took.as_secs_f64())),
        Ok(msg) => Err(format!("{msg}; runtime {:.2}s exceeds {:?}", took.as_secs_f64(), limit)),
        Err(msg) => Err(format!("{msg}; {:.2}s", took.as_secs_f64())),
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: partial_sums::Error) -> String {
    e.to_string()
}

fn zeta(n: usize) -> DirichletPolynomial {
    DirichletPolynomial::new(CoefficientSeries::ones(n))
}

fn c1_exact_zeros() -> Outcome {
    timed(C1_MAX_TIME, || {
        let rect = RectangleRegion::new(-1.0, 1.0, 0.0, 100.0).map_err(err)?;
        let zeros = locate_zeros(&zeta(2), &rect, C1_ZERO_TOL).map_err(err)?;
        ensure(zeros.len() == 11, || format!("{} zeros, expected 11", zeros.len()))?;
        let mut worst: f64 = 0.0;
        for (m, z) in zeros.iter().enumerate() {
            let exact = Complex64::new(0.0, (2 * m + 1) as f64 * PI / LN_2);
            worst = worst.max((z.point() - exact).norm());
        }
        ensure(worst <= C1_ZERO_TOL, || format!("max distance {worst:e}"))?;
        Ok(format!("11 zeros, max distance {worst:.1e}"))
    })
}

fn c2_counting_formula() -> Outcome {
    timed(C2_MAX_TIME, || {
        let mut worst: f64 = 0.0;
        for n in [2usize, 3, 5, 10, 20] {
            let p = zeta(n);
            let b = p.strip_bound(STRIP_MARGIN).map_err(err)?;
            for t in [50.0, 100.0, 500.0] {
                let count = count_upto(&p, t, (-b, b)).map_err(err)?;
                let dev = (count as f64 - t / (2.0 * PI) * (n as f64).ln()).abs();
                let rel = dev / n as f64;
                ensure(rel <= C2_FACTOR, || format!("N={n} T={t}: |residual| {dev:.3} > {C2_FACTOR}·E(N)"))?;
                worst = worst.max(rel);
            }
        }
        Ok(format!("15 cells, max |residual|/E(N) = {worst:.4}"))
    })
}

fn c3_dedekind_counting() -> Outcome {
    timed(C3_MAX_TIME, || {
        let mut worst: f64 = 0.0;
        for field in [FieldSpec::gaussian(), FieldSpec::cyclotomic(5).map_err(err)?] {
            let n0 = f64::from(field.degree());
            for x in [20usize, 50] {
                let p = DirichletPolynomial::new(dedekind_coeffs(&field, x).map_err(err)?);
                let m = p.largest_nonzero().map_err(err)?;
                let b = p.strip_bound(STRIP_MARGIN).map_err(err)?;
                let scale = x as f64 / (x as f64).ln().powf(1.0 - 1.0 / n0);
                for t in [100.0, 500.0] {
                    let count = count_upto(&p, t, (-b, b)).map_err(err)?;
                    let dev = (count as f64 - t / (2.0 * PI) * (m as f64).ln()).abs();
                    worst = worst.max(dev / scale);
                }
            }
        }
        ensure(worst <= C3_CONSTANT, || format!("constant {worst:.4} exceeds {C3_CONSTANT}"))?;
        Ok(format!("8 cells, smallest covering constant C = {worst:.4} (limit {C3_CONSTANT})"))
    })
}

fn c4_dedekind_oracles() -> Outcome {
    timed(C4_MAX_TIME, || {
        let n_max = 10_000usize;
        let a = dedekind_coeffs_int(&FieldSpec::gaussian(), n_max).map_err(err)?;
        let mut oracle = vec![0i64; n_max];
        for d in 1..=n_max {
            let chi = i64::from(kronecker(-4, d as i64));
            if chi != 0 {
                for m in (d..=n_max).step_by(d) {
                    oracle[m - 1] += chi;
                }
            }
        }
        if let Some(n) = (0..n_max).find(|&n| a[n] != oracle[n]) {
            return Err(format!("divisor-character oracle differs at n = {}", n + 1));
        }
        for n in 1..=500i64 {
            let mut lattice = 0i64;
            for x in -23i64..=23 {
                for y in -23i64..=23 {
                    lattice += i64::from(x * x + y * y == n);
                }
            }
            ensure(4 * a[n as usize - 1] == lattice, || format!("lattice oracle differs at n = {n}"))?;
        }
        Ok("n <= 10^4 character oracle and n <= 500 lattice oracle agree exactly".into())
    })
}

fn c5_class_membership() -> Outcome {
    let a = dedekind_coeffs(&FieldSpec::gaussian(), 10_000).map_err(err)?;
    let lam = lambda_f_from_coeffs(&a).map_err(err)?;
    let two = check_k_bounded(&lam, 2.0, 1e-9);
    ensure(two.is_empty(), || format!("k=2 violated at n = {}", two[0].n))?;
    let one = check_k_bounded(&lam, 1.0, 1e-9);
    let first = one.first().map(|v| v.n);
    ensure(first == Some(5), || format!("k=1 first violation at {first:?}, expected 5"))?;
    Ok(format!("k=2 holds for n <= 10^4; k=1 fails first at n = 5 ({} violations)", one.len()))
}

fn c6_mollifier_vanishing() -> Outcome {
    timed(C6_MAX_TIME, || {
        let mut built = 0;
        for field in [FieldSpec::rationals(), FieldSpec::gaussian(), FieldSpec::cyclotomic(5).map_err(err)?] {
            let d = divisor_by_norm(&field, 2500).map_err(err)?;
            for x in 2..=50 {
                for y in 2..=50 {
                    let mp = build_mollified(&field, x, y).map_err(err)?;
                    let g = mp.g_by_norm();
                    ensure(g[..x.min(y)].iter().all(|&v| v == 0), || format!("{} X={x} Y={y}: g nonzero below Z", field.label()))?;
                    ensure(g.iter().zip(&d).all(|(a, b)| a.abs() <= *b), || format!("{} X={x} Y={y}: divisor bound", field.label()))?;
                    built += 1;
                }
            }
        }
        Ok(format!("{built} products checked exhaustively"))
    })
}

fn c7_zero_free() -> Outcome {
    timed(C7_MAX_TIME, || {
        let mut parts = Vec::new();
        for n in [100usize, 1000, 10_000] {
            let p = zeta(n);
            let l = (n as f64).ln();
            let sigma_star = 1.0 + (4.0 / PI - 1.0) * l.ln() / l;
            let b = p.strip_bound(STRIP_MARGIN).map_err(err)?;
            let count = count_upto(&p, 1000.0, (sigma_star, b)).map_err(err)?;
            ensure(count == 0, || format!("N={n}: {count} zeros right of {sigma_star}"))?;
            parts.push(format!("N={n} σ*={sigma_star:.4}"));
        }
        Ok(format!("winding 0 for {}", parts.join(", ")))
    })
}

fn c8_sharp_example() -> Outcome {
    timed(C8_MAX_TIME, || {
        let f = sharp_example_coeffs(1, 10_000_000).map_err(err)?;
        let lam = lambda_f_from_coeffs(&f.truncated(10_000)).map_err(err)?;
        let bad = check_k_bounded(&lam, 1.0, 1e-9);
        ensure(bad.is_empty(), || format!("k=1 violated at n = {}", bad[0].n))?;
        let sieve = Sieve::new(10_000);
        let off = (2..=10_000).filter(|&n| sieve.prime_power(n).is_none() && lam.get(n).norm() > 1e-9).count();
        ensure(off == 0, || format!("Λ_f nonzero at {off} non-prime-powers"))?;
        drop(f);
        let a0 = fourier_coeffs_b(0).re;
        let a1 = fourier_coeffs_b(1).re;
        ensure((a0 + 2.0 / PI).abs() <= C8_FOURIER_TOL && (a1 - 2.0 / PI).abs() <= C8_FOURIER_TOL, || {
            format!("a0 = {a0}, a1 = {a1}")
        })?;
        let expected = 2.0 / PI - 1.0;
        let grid: Vec<f64> = (0..C8_GRID_POINTS)
            .map(|i| 10f64.powf(3.0 + 4.0 * i as f64 / (C8_GRID_POINTS - 1) as f64))
            .collect();
        let fit = growth_fit_sharp(1, &grid).map_err(err)?;
        let decades = growth_fit_sharp(1, &[1e3, 1e4, 1e5, 1e6, 1e7]).map_err(err)?;
        let detail = format!(
            "slope {:.4} on {C8_GRID_POINTS}-point grid (target {expected:.4} ± {C8_SLOPE_TOL}); decade-only grid gives {:.4}",
            fit.slope, decades.slope
        );
        ensure((fit.slope - expected).abs() <= C8_SLOPE_TOL, || detail.clone())?;
        Ok(format!("k=1 bounded, a0/a1 exact, {detail}"))
    })
}

fn c9_halasz() -> Outcome {
    timed(C9_MAX_TIME, || {
        let specs = [
            (FunctionSpec::Zeta, 1.0),
            (FunctionSpec::Moebius, 1.0),
            (FunctionSpec::Dedekind { field: FieldSpec::gaussian() }, 2.0),
            (FunctionSpec::SharpExample { k: 1 }, 1.0),
        ];
        let params = M1Params {
            series_cutoff: C9_SERIES_LEN,
            ..M1Params::default()
        };
        let mut worst: f64 = 0.0;
        let mut at = String::new();
        for (spec, k) in &specs {
            let f = spec.coefficients(C9_SERIES_LEN).map_err(err)?;
            let mut ev = SeriesEvaluator::new(&f, C9_SERIES_LEN);
            if let Some(c) = spec.mean_density(&f) {
                ev = ev.with_tail_density(c);
            }
            for x in [1e2, 1e3, 1e4] {
                let r = halasz_bound_with(&f, &ev, x, *k, &params).map_err(err)?;
                if r.ratio > worst {
                    worst = r.ratio;
                    at = format!("{} x={x}", spec.label());
                }
            }
        }
        ensure(worst <= C9_CONSTANT, || format!("ratio {worst:.4} at {at} exceeds {C9_CONSTANT}"))?;
        Ok(format!("12 cells, recorded constant {worst:.4} (at {at}, limit {C9_CONSTANT})"))
    })
}

fn c10_mean_value() -> Outcome {
    timed(C10_MAX_TIME, || {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let mut worst: f64 = 0.0;
        for _ in 0..100 {
            let a = CoefficientSeries::new(
                (0..20)
                    .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                    .collect(),
            )
            .map_err(err)?;
            for t in [10.0, 100.0] {
                worst = worst.max(mvt_check(&a, t).map_err(err)?.ratio);
            }
        }
        ensure(worst <= MVT_CONSTANT, || format!("deviation ratio {worst:.4} > {MVT_CONSTANT}"))?;
        Ok(format!("200 checks, max |deviation|/Σn|a_n|² = {worst:.4}"))
    })
}

fn c11_density() -> Outcome {
    timed(C11_MAX_TIME, || {
        let grid = [0.55, 0.6, 0.75, 1.0, 1.25];
        let mut worst: f64 = 0.0;
        for field in [FieldSpec::rationals(), FieldSpec::gaussian()] {
            for x in [10usize, 20] {
                for t in [100.0, 200.0] {
                    let r = density_shape_check(&field, x, t, &grid).map_err(err)?;
                    worst = worst.max(r.max_ratio);
                }
            }
        }
        ensure(worst <= C11_CONSTANT, || format!("ratio {worst:e} exceeds {C11_CONSTANT:e}"))?;
        Ok(format!("8 configurations x 5 sigmas, recorded constant {worst:.3e} (limit {C11_CONSTANT:e})"))
    })
}

fn psums(args: &[&str], threads: &str) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_psums"))
        .args(args)
        .args(["--threads", threads])
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!(
            "{args:?} exited {:?}: {}",
            out.status.code(),
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    Ok(out.stdout)
}

fn c12_determinism() -> Outcome {
    let zeta = r#"{"type":"zeta"}"#;
    let gauss = r#"{"type":"dedekind","field":{"type":"quadratic","disc":-4}}"#;
    let runs: Vec<Vec<&str>> = vec![
        vec!["zeros", "--spec", gauss, "--N", "20", "--T", "60"],
        vec!["zeros", "--spec", zeta, "--N", "10", "--T", "50", "--format", "json"],
        vec!["count", "--spec", zeta, "--N", "20", "--T", "100"],
        vec!["density", "--spec", gauss, "--X", "10", "--T", "100"],
        vec!["dedekind", "--spec", gauss, "--N", "200"],
        vec!["halasz", "--spec", zeta, "--X", "1000", "--N", "2000", "--k-trunc", "6", "--grid-sigma", "9", "--grid-t", "17"],
        vec!["zerofree", "--spec", zeta, "--N", "100", "--T", "200"],
        vec!["sharp-fit", "--N", "100000"],
        vec!["mollify", "--spec", gauss, "--X", "8", "--Y", "6", "--T", "20", "--sigma", "0.75,2"],
        vec!["mvt", "--T", "50", "--seed", "9", "--draws", "20"],
    ];
    for args in &runs {
        let reference = psums(args, "1")?;
        for threads in ["8", "1", "8"] {
            let again = psums(args, threads)?;
            ensure(again == reference, || format!("{} output differs with --threads {threads}", args[0]))?;
        }
    }
    Ok(format!("{} runs byte-identical across --threads 1 and 8", runs.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("exact zeros of the two-term polynomial", c1_exact_zeros),
        ("counting formula for truncated zeta", c2_counting_formula),
        ("counting shape for partial Dedekind zeta", c3_dedekind_counting),
        ("Dedekind coefficient oracles", c4_dedekind_oracles),
        ("class membership of the Gaussian series", c5_class_membership),
        ("mollifier vanishing and divisor bound", c6_mollifier_vanishing),
        ("zero-free half-plane", c7_zero_free),
        ("sharp example", c8_sharp_example),
        ("logarithmic mean bound", c9_halasz),
        ("mean value self-test", c10_mean_value),
        ("zero density shape", c11_density),
        ("CLI determinism", c12_determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(msg) => println!("criterion {:>2} PASS  {name}: {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {msg}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
