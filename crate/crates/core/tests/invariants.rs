//! Randomized checks of the structural invariants.

use genhankel::harmonic_ops::translate;
use genhankel::harness::STANDARD_PARAMS;
use genhankel::kernels::{kernel_k, nu_integrate, xi, MeasureNu};
use genhankel::specfun::{bessel_j_norm, nth_root};
use genhankel::testfns::{Gaussian, PolyBump};
use genhankel::transform::{b_kernel, decompose_f_via_h, transform_f_at, Evaluable};
use genhankel::Params;
use num_complex::Complex64;
use proptest::prelude::*;

fn params() -> impl Strategy<Value = Params> {
    (0..STANDARD_PARAMS.len()).prop_map(|i| {
        let (n, k) = STANDARD_PARAMS[i];
        Params::new(n, k).unwrap()
    })
}

/// Nonzero point in `[-5, 5]` away from the origin.
fn point() -> impl Strategy<Value = f64> {
    (0.05f64..5.0, any::<bool>()).prop_map(|(r, neg)| if neg { -r } else { r })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn bessel_is_even(alpha in 0.0f64..6.0, x in 0.0f64..30.0) {
        prop_assert_eq!(bessel_j_norm(alpha, x).unwrap(), bessel_j_norm(alpha, -x).unwrap());
    }

    #[test]
    fn product_formula(p in params(), lambda in -5.0f64..5.0, x in point(), y in point()) {
        let lhs = b_kernel(&p, lambda, x).unwrap() * b_kernel(&p, lambda, y).unwrap();
        let rhs: Complex64 = nu_integrate(&p, x, y, |z| b_kernel(&p, lambda, z)).unwrap();
        prop_assert!((lhs - rhs).norm() < 1e-7, "{} vs {}", lhs, rhs);
    }

    #[test]
    fn measure_mass_and_variation(p in params(), x in point(), y in point()) {
        let nu = MeasureNu::new(p, x, y).unwrap();
        let mass = nu.mass().unwrap();
        let tv = nu.total_variation().unwrap();
        prop_assert!((mass - 1.0).abs() < 1e-8, "mass {}", mass);
        prop_assert!(tv <= 4.0 + 1e-8, "variation {}", tv);
    }

    #[test]
    fn kernel_vanishes_off_support(p in params(), x in point(), y in point(), z in -40.0f64..40.0) {
        let n = p.n();
        let (a, b) = (nth_root(x.abs(), n), nth_root(y.abs(), n));
        let r = nth_root(z.abs(), n);
        let (lo, hi) = ((a - b).abs(), a + b);
        // stay clear of the edges, where rounding decides the side
        prop_assume!(r < lo * (1.0 - 1e-9) || r > hi * (1.0 + 1e-9));
        prop_assert_eq!(kernel_k(&p, x, y, z).unwrap(), 0.0);
    }

    #[test]
    fn kernel_symmetries_and_xi_bound(p in params(), x in point(), y in point(), s in 0.02f64..0.98, neg in any::<bool>()) {
        let n = p.n();
        let (a, b) = (nth_root(x.abs(), n), nth_root(y.abs(), n));
        let (lo, hi) = ((a - b).abs(), a + b);
        let r = lo + s * (hi - lo);
        let z = if neg { -r.powi(n as i32) } else { r.powi(n as i32) };
        let k = kernel_k(&p, x, y, z).unwrap();
        let tol = 1e-12 * k.abs().max(1e-300);
        let sgn = p.parity_sign();
        prop_assert!((k - kernel_k(&p, y, x, z).unwrap()).abs() <= tol);
        prop_assert!((k - kernel_k(&p, sgn * x, z, y).unwrap()).abs() <= tol);
        prop_assert!((k - kernel_k(&p, z, sgn * y, x).unwrap()).abs() <= tol);
        let v = xi(&p, x, y, z).unwrap();
        prop_assert!(v.abs() <= 1.0, "xi = {}", v);
    }

    #[test]
    fn transform_is_linear(p in params(), lambda in -6.0f64..6.0, c in -3.0f64..3.0) {
        let f = Gaussian::new(0.4, 0.5);
        let g = PolyBump::unit_peak(-1.5, 0.7, 3);
        let sum = genhankel::transform::FnEvaluable::new(
            |x: f64| f.eval(x) + g.eval(x) * c,
            (-4.1, 4.9),
        )
        .with_breakpoints(vec![-1.5, 0.7]);
        let lhs = transform_f_at(&p, &sum, lambda).unwrap();
        let rhs = transform_f_at(&p, &f, lambda).unwrap() + transform_f_at(&p, &g, lambda).unwrap() * c;
        prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + rhs.norm()));
    }

    #[test]
    fn decomposition_agrees_with_direct_path(n in 1u32..=3, lambda in 0.1f64..4.0, neg in any::<bool>()) {
        let p = Params::new(n, [1.0, 0.8, 0.7][n as usize - 1]).unwrap();
        let lambda = if neg { -lambda } else { lambda };
        let f = PolyBump::unit_peak(-0.8, 1.4, 6);
        let direct = transform_f_at(&p, &f, lambda).unwrap();
        prop_assume!(direct.norm() > 1e-8);
        let dec = decompose_f_via_h(&p, &f, lambda).unwrap().total();
        prop_assert!((dec - direct).norm() <= 1e-6 * direct.norm(), "{} vs {}", dec, direct);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn translation_by_zero_is_identity(p in params(), y in -2.0f64..2.0) {
        let f = PolyBump::unit_peak(-0.8, 1.4, 6);
        let v = translate(&p, &f, 0.0, y).unwrap();
        prop_assert!((v - f.eval(y)).norm() < 1e-9);
    }
}
