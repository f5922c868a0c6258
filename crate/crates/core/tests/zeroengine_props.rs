use partial_sums::dirichletpoly::DirichletPolynomial;
use partial_sums::multcore::CoefficientSeries;
use partial_sums::numberfield::{dedekind_coeffs, FieldSpec};
use partial_sums::zeroengine::*;
use partial_sums::{Complex64, Error};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn zeta(n: usize) -> DirichletPolynomial {
    DirichletPolynomial::new(CoefficientSeries::ones(n))
}

fn gaussian(x: usize) -> DirichletPolynomial {
    DirichletPolynomial::new(dedekind_coeffs(&FieldSpec::gaussian(), x).unwrap())
}

fn real_series(len: usize) -> impl Strategy<Value = CoefficientSeries> {
    prop::collection::vec(-1.0f64..1.0, len - 1).prop_map(|rest| {
        let mut v = vec![1.0];
        v.extend(rest);
        CoefficientSeries::from_real(&v).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn reflection_symmetry(c in real_series(20), re in -3.0f64..3.0, im in -50.0f64..50.0) {
        let p = DirichletPolynomial::new(c);
        let s = Complex64::new(re, im);
        let a = p.eval(s.conj());
        let b = p.eval(s).conj();
        prop_assert!((a - b).norm() <= 1e-13 * p.abs_sum(re));
    }

    #[test]
    fn density_is_nonincreasing(s1 in -2.0f64..2.0, s2 in -2.0f64..2.0) {
        let p = zeta(10);
        let b = p.strip_bound(STRIP_MARGIN).unwrap();
        let zeros = locate_zeros(&p, &RectangleRegion::new(-b, b, 0.0, 60.0).unwrap(), 1e-10).unwrap();
        let (lo, hi) = if s1 <= s2 { (s1, s2) } else { (s2, s1) };
        prop_assert!(zero_density(&zeros, lo) >= zero_density(&zeros, hi));
    }
}

#[test]
fn winding_is_additive_under_vertical_bisection() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let polys = [("zeta5", zeta(5)), ("zeta10", zeta(10)), ("Q(i) X=30", gaussian(30))];
    for (name, p) in &polys {
        let b = p.strip_bound(STRIP_MARGIN).unwrap();
        let mut tested = 0;
        let mut skipped = 0;
        while tested < 50 {
            let s0 = rng.gen_range(-b..b);
            let s1 = rng.gen_range(-b..b);
            let t0 = rng.gen_range(0.0..80.0);
            let t1 = t0 + rng.gen_range(0.5..40.0);
            let (lo, hi) = if s0 < s1 { (s0, s1) } else { (s1, s0) };
            if hi - lo < 1e-3 {
                continue;
            }
            let mid = lo + rng.gen_range(0.2..0.8) * (hi - lo);
            let whole = winding_number(p, &RectangleRegion::new(lo, hi, t0, t1).unwrap(), DEFAULT_GUARD);
            let left = winding_number(p, &RectangleRegion::new(lo, mid, t0, t1).unwrap(), DEFAULT_GUARD);
            let right = winding_number(p, &RectangleRegion::new(mid, hi, t0, t1).unwrap(), DEFAULT_GUARD);
            match (whole, left, right) {
                (Ok(w), Ok(l), Ok(r)) => {
                    assert!(w.count >= 0 && l.count >= 0 && r.count >= 0);
                    assert_eq!(w.count, l.count + r.count, "{name} [{lo},{hi}]x[{t0},{t1}] split {mid}");
                    tested += 1;
                }
                (a, b, c) => {
                    for r in [a, b, c] {
                        if let Err(e) = r {
                            assert!(matches!(e, Error::BoundaryZero { .. }), "{e}");
                        }
                    }
                    skipped += 1;
                }
            }
        }
        assert!(skipped < 10, "{name}: {skipped} rectangles hit zeros");
    }
}

#[test]
fn located_zeros_are_stable_and_inside_strip() {
    let tol = 1e-10;
    for p in [zeta(10), zeta(17), gaussian(30)] {
        let b = p.strip_bound(STRIP_MARGIN).unwrap();
        let zeros = locate_zeros(&p, &RectangleRegion::new(-b, b, 0.0, 40.0).unwrap(), tol).unwrap();
        assert!(!zeros.is_empty());
        for z in &zeros {
            assert_eq!(z.multiplicity, 1);
            assert!(z.beta.abs() < b);
            assert!(z.relative_residual() < tol);
            let fresh = p.eval(z.point()).norm() / p.abs_sum(z.beta);
            assert!(fresh < tol);
            for k in 0..4 {
                let dir = Complex64::from_polar(1e-3, std::f64::consts::FRAC_PI_2 * k as f64 + 0.3);
                let (back, _) = newton(&p, z.point() + dir, tol).expect("newton converges");
                assert!((back - z.point()).norm() <= 10.0 * tol.max(1e-12 * z.point().norm()));
            }
        }
    }
}

#[test]
fn zeros_mirror_across_real_axis() {
    let tol = 1e-10;
    for p in [zeta(7), gaussian(20)] {
        let b = p.strip_bound(STRIP_MARGIN).unwrap();
        let upper = locate_zeros(&p, &RectangleRegion::new(-b, b, 0.5, 30.0).unwrap(), tol).unwrap();
        let lower = locate_zeros(&p, &RectangleRegion::new(-b, b, -30.0, -0.5).unwrap(), tol).unwrap();
        assert_eq!(upper.len(), lower.len());
        for z in &upper {
            let m = lower
                .iter()
                .map(|w| (w.point() - z.point().conj()).norm())
                .fold(f64::INFINITY, f64::min);
            assert!(m <= 10.0 * tol, "no mirror for {:?}", z.point());
        }
    }
}

#[test]
fn counts_agree_with_located_zeros() {
    let p = gaussian(20);
    let b = p.strip_bound(STRIP_MARGIN).unwrap();
    let zeros = locate_zeros(&p, &RectangleRegion::new(-b, b, 0.0, 100.0).unwrap(), 1e-10).unwrap();
    let n = count_upto(&p, 100.0, (-b, b)).unwrap();
    assert_eq!(n, zeros.len() as i64);
}
