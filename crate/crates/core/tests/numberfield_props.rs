use std::collections::BTreeMap;

use partial_sums::multcore::{check_k_bounded, dirichlet_convolve, lambda_f_from_coeffs, CoefficientSeries};
use partial_sums::numberfield::*;
use proptest::prelude::*;

/// Ratio ceiling for `A(x) / (x / (log x)^{1-1/n₀})` over the tested range.
const A_RATIO_CEILING: f64 = 1.5;

fn test_fields() -> Vec<FieldSpec> {
    vec![
        FieldSpec::gaussian(),
        FieldSpec::quadratic(-3).unwrap(),
        FieldSpec::quadratic(5).unwrap(),
        FieldSpec::quadratic(-23).unwrap(),
        FieldSpec::cyclotomic(5).unwrap(),
        FieldSpec::cyclotomic(8).unwrap(),
        FieldSpec::cyclotomic(12).unwrap(),
    ]
}

#[test]
fn dedekind_series_lie_in_class_of_their_degree() {
    for field in test_fields() {
        let a = dedekind_coeffs(&field, 10_000).unwrap();
        let lam = lambda_f_from_coeffs(&a).unwrap();
        let k = f64::from(field.degree());
        let bad = check_k_bounded(&lam, k, 1e-9);
        assert!(bad.is_empty(), "{}: {:?}", field.label(), &bad[..bad.len().min(3)]);
    }
}

#[test]
fn counting_function_shape_is_bounded() {
    for field in [FieldSpec::gaussian(), FieldSpec::cyclotomic(5).unwrap()] {
        let a = dedekind_coeffs(&field, 1_000_000).unwrap();
        let n0 = f64::from(field.degree());
        let mut worst: f64 = 0.0;
        for e in 0..=30 {
            let x = (1e3 * 10f64.powf(e as f64 / 10.0)).round() as usize;
            let xf = x as f64;
            let shape = xf / xf.ln().powf(1.0 - 1.0 / n0);
            let ratio = count_nonzero(&a, x).unwrap() as f64 / shape;
            worst = worst.max(ratio);
        }
        println!("{}: max A(x) ratio {worst:.4}", field.label());
        assert!(worst <= A_RATIO_CEILING);
    }
}

#[test]
fn two_squares_oracle() {
    // a(n) for Q(i) is r_2(n)/4, the lattice points on x² + y² = n up to units
    let a = dedekind_coeffs_int(&FieldSpec::gaussian(), 500).unwrap();
    for n in 1..=500i64 {
        let mut r2 = 0;
        for x in -23i64..=23 {
            for y in -23i64..=23 {
                if x * x + y * y == n {
                    r2 += 1;
                }
            }
        }
        assert_eq!(a[n as usize - 1] * 4, r2, "n = {n}");
    }
}

/// Random Galois-like splitting: `g` primes of residue degree `f` and
/// ramification `e` with `e f g = degree`.
fn uniform_rule(degree: u32) -> impl Strategy<Value = SplittingRule> {
    let divisors: Vec<(u32, u32, u32)> = (1..=degree)
        .flat_map(|e| (1..=degree).map(move |f| (e, f)))
        .filter(|(e, f)| degree % (e * f) == 0)
        .map(|(e, f)| (degree / (e * f), e, f))
        .collect();
    prop::sample::select(divisors).prop_map(|(g, e, f)| SplittingRule::uniform(g, e, f))
}

fn custom_field() -> impl Strategy<Value = FieldSpec> {
    (1u32..=6).prop_flat_map(|degree| {
        (
            prop::collection::vec(uniform_rule(degree), 5),
            uniform_rule(degree),
        )
            .prop_map(move |(rules, default)| {
                let primes = [2u64, 3, 5, 7, 11];
                let map: BTreeMap<u64, SplittingRule> = primes.iter().copied().zip(rules).collect();
                FieldSpec::custom(degree, map, default).unwrap()
            })
    })
}

fn as_series(v: &[i64]) -> CoefficientSeries {
    CoefficientSeries::from_integers(v).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn mobius_inverts_ideal_count(field in custom_field()) {
        let a = dedekind_coeffs_int(&field, 300).unwrap();
        let mu = mobius_by_norm(&field, 300).unwrap();
        let conv = dirichlet_convolve(&as_series(&a), &as_series(&mu));
        prop_assert_eq!(conv, CoefficientSeries::delta(300));
    }

    #[test]
    fn divisor_series_is_square(field in custom_field()) {
        let a = dedekind_coeffs_int(&field, 300).unwrap();
        let d = divisor_by_norm(&field, 300).unwrap();
        prop_assert_eq!(dirichlet_convolve(&as_series(&a), &as_series(&a)), as_series(&d));
    }

    #[test]
    fn divisor_squares_dominate_divisors(field in custom_field()) {
        // Σ d(m)² >= Σ d(m) >= a(n), and (Σ d)² >= Σ d² by norm
        let a = dedekind_coeffs_int(&field, 300).unwrap();
        let d = divisor_by_norm(&field, 300).unwrap();
        let d2 = divisor_square_by_norm(&field, 300).unwrap();
        for n in 0..300 {
            prop_assert!(d2[n] >= d[n] && d[n] >= a[n]);
            prop_assert!(d[n] * d[n] >= d2[n]);
        }
    }

    #[test]
    fn kronecker_is_multiplicative(a in -200i64..200, m in 1i64..200, n in 1i64..200) {
        prop_assert_eq!(kronecker(a, m * n), kronecker(a, m) * kronecker(a, n));
    }
}
