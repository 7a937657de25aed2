use proptest::prelude::*;
use wavelock::problem::ExponentConstants;
use wavelock::*;

fn exponent() -> impl Strategy<Value = f64> {
    1.05f64..10.0
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sigma_identity(beta in 0.1f64..5.0, e in exponent()) {
        let c = ExponentConstants::new(e, beta);
        prop_assert!(((c.sigma - c.alpha / (e - c.alpha)) / c.sigma).abs() < 1e-13);
        prop_assert!((c.kappa - (e - 1.0) / e).abs() < 1e-15);
    }

    #[test]
    fn thresholds_swap(beta in 0.1f64..5.0, p in exponent(), q in exponent()) {
        prop_assume!((p - q).abs() > 1e-3);
        let a = derive_constants(&ProblemParams::new(beta, p, q, 1.0, 1.0).unwrap()).unwrap();
        let b = derive_constants(&ProblemParams::new(beta, q, p, 1.0, 1.0).unwrap()).unwrap();
        match (a.r1.value(), b.r2.value()) {
            (Some(x), Some(y)) => prop_assert!((x * y - 1.0).abs() < 1e-12),
            (None, None) => {}
            other => prop_assert!(false, "finiteness mismatch {:?}", other),
        }
        if let (Some(r1), Some(r2)) = (a.r1.value(), a.r2.value()) {
            // Hoelder interpolation forces r1 < r2 whenever both exist.
            prop_assert!(r1 < r2);
        }
    }

    #[test]
    fn regime_swaps_with_exponents(
        beta in 0.2f64..3.0, p in 1.2f64..6.0, q in 1.2f64..6.0, a in 0.2f64..3.0, b in 0.2f64..3.0
    ) {
        prop_assume!((p - q).abs() > 1e-2);
        let fwd = ProblemParams::new(beta, p, q, a, b).unwrap();
        let rev = fwd.swapped();
        let cf = derive_constants(&fwd).unwrap();
        let cr = derive_constants(&rev).unwrap();
        let (kf, kr) = (classify_regime(&fwd, &cf), classify_regime(&rev, &cr));
        prop_assert_eq!(kf.kind.swapped(), kr.kind);
    }

    #[test]
    fn bound_is_swap_invariant_and_monotone(
        beta in 0.3f64..2.0, p in 1.3f64..3.0, dq in 0.5f64..3.0, a in 0.5f64..2.0, ratio in 0.1f64..1.0
    ) {
        let q = p + dq;
        let prm = ProblemParams::new(beta, p, q, a, a * ratio).unwrap();
        let r = compute_bound(&prm).unwrap();
        let s = compute_bound(&prm.swapped()).unwrap();
        prop_assert!(((r.bound - s.bound) / r.bound).abs() < 1e-9);
        prop_assert!(r.bound.is_finite() && r.bound > 0.0);
        let more_a = compute_bound(&prm.with_budgets(a * 1.1, a * ratio)).unwrap();
        let more_b = compute_bound(&prm.with_budgets(a, a * ratio * 1.1)).unwrap();
        prop_assert!(more_a.bound >= r.bound * (1.0 - 1e-10));
        prop_assert!(more_b.bound >= r.bound * (1.0 - 1e-10));
        // Never above either single-budget value.
        let c = derive_constants(&prm).unwrap();
        let cp = ExponentConstants::new(p, beta);
        let cq = ExponentConstants::new(q, beta);
        let single_p = wavelock::closed_form::single_side_bound(beta, &cp, prm.a);
        let single_q = wavelock::closed_form::single_side_bound(beta, &cq, prm.b);
        prop_assert!(r.bound <= single_p.min(single_q) * (1.0 + 1e-9), "{:?} {:?}", r, c);
    }
}

#[test]
fn dual_bound_sweep_is_monotone() {
    let base = ProblemParams::new(0.5, 2.0, 4.0, 1.0, 0.27).unwrap();
    let mut last = 0.0;
    for k in 0..=30 {
        let b = 0.27 + (0.56 - 0.27) * k as f64 / 30.0;
        let r = compute_bound(&base.with_budgets(1.0, b)).unwrap();
        assert!(r.bound >= last, "B = {b}");
        last = r.bound;
    }
}

#[test]
fn absent_fields_are_none() {
    let r = compute_bound(&ProblemParams::new(0.5, 2.0, 4.0, 1.0, 0.4).unwrap()).unwrap();
    assert_eq!(r.schema, SCHEMA);
    assert!(r.t_end.is_some() && r.amplitude.is_none());
    let single = compute_bound(&ProblemParams::new(0.5, 2.0, 4.0, 1.0, 1.0).unwrap()).unwrap();
    assert!(single.t_end.is_none() && single.residual_q.is_none());
}
