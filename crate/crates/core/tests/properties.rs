use std::f64::consts::PI;

use dce_core::bogoliubov::{beta_rr_perfect_asymptotic, beta_rr_perfect_exact};
use dce_core::quadrature::integrate;
use dce_core::scattering::{reflection, transmission, unitarity_defect};
use dce_core::special::{gamma_abs_sq_half_plus, gamma_abs_sq_one_plus, log_gamma};
use dce_core::{MirrorTrajectory, QuadratureConfig, ScatteringParams};
use num_complex::Complex64;
use proptest::prelude::*;

// round trip through the coasting branch loses exp(k u0) ulps
fn trajectory() -> impl Strategy<Value = MirrorTrajectory> {
    (-1.5f64..1.0, 0.05f64..10.0).prop_map(|(lk, ku0)| {
        let k = 10f64.powf(lk);
        MirrorTrajectory::new(k, ku0 / k).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn round_trip(t in trajectory(), x in -10.0f64..10.0) {
        let u = x * t.u0();
        let back = t.eval_u(t.eval_v(u));
        prop_assert!((back - u).abs() <= 1e-10 * u.abs().max(1.0), "u={u} back={back}");
        let vb = t.eval_vbar(t.eval_v(u));
        prop_assert!((vb - t.eval_ubar(u)).abs() <= 1e-10 * u.abs().max(1.0));
    }

    #[test]
    fn monotone(t in trajectory(), x in -10.0f64..10.0, dx in 1e-6f64..1.0) {
        let (u1, u2) = (x * t.u0(), (x + dx) * t.u0());
        prop_assert!(t.eval_v(u2) > t.eval_v(u1));
        prop_assert!(t.eval_ubar(u2) > t.eval_ubar(u1));
        let (v1, v2) = (t.eval_v(u1), t.eval_v(u2));
        prop_assert!(t.eval_u(v2) > t.eval_u(v1));
        prop_assert!(t.eval_vbar(v2) > t.eval_vbar(v1));
    }

    #[test]
    fn c1_joins(t in trajectory()) {
        // a fixed step drowns in roundoff once |V|/A is large
        let h = 1e-6 * t.u0().max(1.0);
        for u in [0.0, t.u0()] {
            let fd = (t.eval_v(u + h) - t.eval_v(u - h)) / (2.0 * h);
            prop_assert!((fd / t.eval_dv(u) - 1.0).abs() <= 1e-5);
        }
    }

    #[test]
    fn length_element(t in trajectory(), frac in prop_oneof![-3.0f64..-0.01, 0.01f64..0.99, 1.01f64..3.0]) {
        let u = frac * t.u0();
        let h = 1e-6 * t.u0().min(1.0);
        let d = (t.eval_ubar(u + h) - t.eval_ubar(u - h)) / (2.0 * h);
        prop_assert!((d * d / t.eval_dv(u) - 1.0).abs() <= 1e-5, "u={u}");
        prop_assert!((t.eval_dubar(u).powi(2) / t.eval_dv(u) - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn scattering_identities(la in -4.0f64..6.0, w in prop_oneof![-1e4f64..-1e-4, 1e-4f64..1e4]) {
        let p = ScatteringParams::new(10f64.powf(la)).unwrap();
        prop_assert!(unitarity_defect(w, &p).unwrap() <= 1e-14);
        let (r, s) = (reflection(w, &p).unwrap(), transmission(w, &p).unwrap());
        prop_assert!((r * s.conj()).re.abs() <= 1e-14);
        prop_assert!((1.0 - s).norm() <= p.alpha() / w.abs() * (1.0 + 1e-14));
        prop_assert!((reflection(-w, &p).unwrap() - r.conj()).norm() <= 1e-14);
    }

    #[test]
    fn gamma_identities(y in 0.1f64..50.0) {
        let one = (2.0 * log_gamma(Complex64::new(1.0, y)).unwrap().re).exp();
        prop_assert!((one * (PI * y).sinh() / (PI * y) - 1.0).abs() <= 1e-12);
        let half = (2.0 * log_gamma(Complex64::new(0.5, y)).unwrap().re).exp();
        prop_assert!((half * (PI * y).cosh() / PI - 1.0).abs() <= 1e-12);
        prop_assert!((gamma_abs_sq_one_plus(y) / one - 1.0).abs() <= 1e-12);
        prop_assert!((gamma_abs_sq_half_plus(y) / half - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn quadrature_linearity(
        c1 in -3.0f64..3.0, c2 in -3.0f64..3.0, f1 in 0.1f64..40.0, f2 in 0.1f64..40.0,
        a in -2.0f64..0.0, len in 0.1f64..5.0, cut in 0.01f64..0.99,
    ) {
        let cfg = QuadratureConfig::default();
        let b = a + len;
        let f = move |x: f64| Complex64::new(0.0, f1 * x).exp() * (-(x * x)).exp();
        let g = move |x: f64| Complex64::new((f2 * x).sin(), 1.0 / (1.0 + x * x));
        let lhs = integrate(|x| c1 * f(x) + c2 * g(x), a, b, &cfg).unwrap();
        let rf = integrate(f, a, b, &cfg).unwrap();
        let rg = integrate(g, a, b, &cfg).unwrap();
        let d = (lhs.value - c1 * rf.value - c2 * rg.value).norm();
        prop_assert!(d <= lhs.abs_err + c1.abs() * rf.abs_err + c2.abs() * rg.abs_err + 1e-14);

        let m = a + cut * len;
        let l = integrate(g, a, m, &cfg).unwrap();
        let r = integrate(g, m, b, &cfg).unwrap();
        let d = (rg.value - l.value - r.value).norm();
        prop_assert!(d <= rg.abs_err + l.abs_err + r.abs_err + 1e-14);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    // deep in the window the exact and late-time forms share |beta|^2
    #[test]
    fn perfect_exact_matches_asymptotic_deep_in_window(
        w in 0.2f64..1.0, lwp in 2.5f64..3.5,
    ) {
        let t = MirrorTrajectory::new(1.0, 30.0).unwrap();
        let wp = 10f64.powf(lwp);
        let e = beta_rr_perfect_exact(w, wp, &t, &QuadratureConfig::default()).unwrap();
        let a = beta_rr_perfect_asymptotic(w, wp, 1.0).unwrap();
        prop_assert!((e.abs_sq / a.abs_sq - 1.0).abs() < 0.01);
    }
}
