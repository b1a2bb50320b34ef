//! Property tests for the moment/norm substrate.

use kinetic_core::{
    maxwellian_from_moments, moments, weighted_lp_norm, Lp, MacroFields, Maxwellian,
    QuadratureSpec, Weight,
};
use proptest::prelude::*;

fn spec() -> QuadratureSpec {
    QuadratureSpec::default()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// moments(maxwellian_from_moments(mf)) round-trips within 10x the
    /// quadrature tolerance over the whole parameter box.
    #[test]
    fn moment_roundtrip(
        rho in 0.1f64..10.0,
        temp in 0.1f64..10.0,
        ux in -5.0f64..5.0,
        uy in -5.0f64..5.0,
        dim in 1usize..=3,
    ) {
        let mut u = vec![0.0; dim];
        u[0] = ux;
        if dim > 1 {
            u[1] = uy * 0.5;
        }
        let mf = MacroFields::new(rho.ln(), u.clone(), temp);
        let m = maxwellian_from_moments(&mf, dim).unwrap();
        let back = moments(&m, &spec()).unwrap();
        let tol = 10.0 * spec().rel_tol;
        prop_assert!((back.log_rho - mf.log_rho).abs() < tol.max(1e-6));
        prop_assert!((back.temp - temp).abs() < (tol * temp).max(1e-5));
        for i in 0..dim {
            prop_assert!((back.u[i] - u[i]).abs() < 1e-5);
        }
    }

    /// weight and Maxwellian evaluations stay finite over extreme speeds and
    /// temperatures.
    #[test]
    fn log_space_safety(
        speed in 0.0f64..1.0e4,
        log_temp in -4.0f64..8.0,
        alpha in 0.01f64..5.0,
        beta in 0.1f64..2.0,
        delta in 0.0f64..10.0,
    ) {
        let w = Weight::new(alpha, beta, delta);
        prop_assert!(w.log_eval(speed).is_finite());
        let temp = 10f64.powf(log_temp);
        let m = Maxwellian::new(MacroFields::new(0.0, vec![0.0; 3], temp), 3).unwrap();
        let lv = m.log_eval(&[speed, 0.0, 0.0]);
        prop_assert!(lv.is_finite());
    }
}

/// Norm monotonicity in the weight parameters on a sampled Maxwellian.
#[test]
fn norm_monotone_in_weight_parameters() {
    let m = Maxwellian::new(MacroFields::new(0.2, vec![0.4, 0.0, 0.0], 1.4), 3).unwrap();
    let sp = spec();
    for p in [Lp::finite(1.0), Lp::finite(2.0), Lp::Infinity] {
        let mut prev = weighted_lp_norm(&m, &Weight::new(0.02, 2.0, 0.0), p, &sp).unwrap();
        for alpha in [0.05, 0.1, 0.2, 0.3] {
            let cur = weighted_lp_norm(&m, &Weight::new(alpha, 2.0, 0.0), p, &sp).unwrap();
            assert!(cur.ge(&prev), "alpha = {alpha}: {cur} < {prev}");
            prev = cur;
        }
        let mut prev = weighted_lp_norm(&m, &Weight::new(0.05, 2.0, 0.0), p, &sp).unwrap();
        for delta in [0.5, 1.0, 2.0] {
            let cur = weighted_lp_norm(&m, &Weight::new(0.05, 2.0, delta), p, &sp).unwrap();
            assert!(cur.ge(&prev), "delta = {delta}");
            prev = cur;
        }
    }
}
