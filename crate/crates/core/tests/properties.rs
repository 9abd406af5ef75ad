use proptest::prelude::*;
use spin_otto::coc::{enumerate_cocs, max_engine_coc_efficiency, CocClass};
use spin_otto::cycle::{cycle_report, stage_states};
use spin_otto::ensemble::occupation_probabilities;
use spin_otto::oracle::compare_with_analytic;
use spin_otto::regime::{
    coupling_bounds, efficiency_bounds, j_a_bound, majorization_check, wcs_predicate,
};
use spin_otto::{CycleParams, SpinPair, Spectrum};

fn pair_strategy(max_two_s: u32) -> impl Strategy<Value = SpinPair> {
    (1..=max_two_s / 2)
        .prop_flat_map(move |a| (Just(a), a..=max_two_s - a))
        .prop_map(|(a, b)| SpinPair::new(a, b).unwrap())
}

/// Engine-side parameters with `J = frac·Jc`.
fn engine_params(pair: SpinPair) -> impl Strategy<Value = CycleParams> {
    (0.5..5.0f64, 0.1..0.9f64, 0.5..10.0f64, 0.05..0.95f64, 0.01..0.99f64).prop_map(
        move |(b1, theta, t2, r, frac)| {
            let b2 = b1 * (theta + (1.0 - theta) * r);
            let base = CycleParams::new(b1, b2, t2 / theta, t2, 0.0).unwrap();
            base.with_coupling(frac * coupling_bounds(pair, &base).jc).unwrap()
        },
    )
}

fn pair_and_engine(max_two_s: u32) -> impl Strategy<Value = (SpinPair, CycleParams)> {
    pair_strategy(max_two_s).prop_flat_map(|p| (Just(p), engine_params(p)))
}

proptest! {
    #[test]
    fn populations_are_normalized(
        pair in pair_strategy(12),
        b in 0.0..6.0f64,
        t in 0.2..20.0f64,
        j in 0.0..2.0f64,
    ) {
        let sp = Spectrum::build(pair);
        let st = occupation_probabilities(&sp, b, t, j).unwrap();
        let total: f64 = st.probabilities().iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
        prop_assert!(st.probabilities().iter().all(|p| *p >= 0.0));
    }

    #[test]
    fn uncoupled_populations_fall_with_m1(
        pair in pair_strategy(9),
        b in 0.0..5.0f64,
        db in 0.01..1.0f64,
        t in 0.5..10.0f64,
    ) {
        let sp = Spectrum::build(pair);
        let low = occupation_probabilities(&sp, b, t, 0.0).unwrap();
        let high = occupation_probabilities(&sp, b + db, t, 0.0).unwrap();
        prop_assert!(high.p(1) >= low.p(1));
        let p = high.probabilities();
        for w in sp.levels().windows(2) {
            if w[1].two_m > w[0].two_m {
                prop_assert!(p[w[1].index - 1] <= p[w[0].index - 1]);
            }
        }
    }

    #[test]
    fn jx_never_exceeds_jc(pair in pair_strategy(16), params in engine_params(SpinPair::new(1, 1).unwrap())) {
        let b = coupling_bounds(pair, &params);
        prop_assert!(b.jx <= b.jc);
        prop_assert_eq!(b.jx == b.jc, pair.two_s1() == 1);
    }

    #[test]
    fn first_law_and_engine_chain((pair, params) in pair_and_engine(9)) {
        let r = cycle_report(&Spectrum::build(pair), &params).unwrap();
        prop_assert_eq!(r.w, r.q1 - r.q2);
        prop_assert!(r.w > 0.0);
        prop_assert!(r.ds > 0.0);
        let eff = efficiency_bounds(pair, &params);
        prop_assert!(r.eta.unwrap() <= eff.eta_ub.unwrap() + 1e-9);
        prop_assert!(eff.eta_ub.unwrap() < eff.eta_carnot);
    }

    #[test]
    fn majorization_implies_entropy_order((pair, params) in pair_and_engine(9)) {
        let sp = Spectrum::build(pair);
        let (hot, cold) = stage_states(&sp, &params).unwrap();
        let m = majorization_check(&hot, &cold).unwrap();
        if m.sorted {
            prop_assert!(hot.entropy() >= cold.entropy() - 1e-12);
        }
        if wcs_predicate(&hot, &cold).unwrap().wcs {
            prop_assert!(m.index_order);
        }
    }

    #[test]
    fn coc_antisymmetry_and_threshold((pair, params) in pair_and_engine(7)) {
        let sp = Spectrum::build(pair);
        let recs = enumerate_cocs(&sp, &params);
        let n = sp.len();
        prop_assert_eq!(recs.len(), n * (n - 1));
        for r in &recs {
            let back = recs
                .iter()
                .find(|b| b.initial_k == r.final_k && b.final_k == r.initial_k)
                .unwrap();
            prop_assert_eq!((back.x, back.two_y), (-r.x, -r.two_y));
            prop_assert_eq!(back.ds, -r.ds);
            if r.class == CocClass::FieldOnly && r.x > 0 {
                prop_assert_eq!(r.efficiency, Some(params.eta0()));
            }
            if r.x > 0 {
                let below = j_a_bound(r.x, r.two_y, &params).map_or(true, |ja| params.j < ja);
                if below {
                    prop_assert!(r.ds >= -1e-12, "{:?}", r);
                }
            }
        }
    }

    #[test]
    fn enumeration_maximum_matches_closed_form((pair, params) in pair_and_engine(9)) {
        // Rescale J from (0, Jc) into (0, Jx).
        let b = coupling_bounds(pair, &params);
        let params = params.with_coupling(params.j * b.jx / b.jc).unwrap();
        let (eta, witness) = max_engine_coc_efficiency(&Spectrum::build(pair), &params).unwrap();
        let closed = efficiency_bounds(pair, &params).eta_max.unwrap();
        prop_assert!((eta - closed).abs() < 1e-12);
        prop_assert_eq!(witness.x, 2);
        prop_assert_eq!(witness.two_y.unsigned_abs(), pair.two_m2_max());
    }

    #[test]
    fn oracle_matches_spectrum(pair in pair_strategy(10), b in 0.0..5.0f64, j in 0.0..2.0f64) {
        prop_assert!(compare_with_analytic(pair, b, j).unwrap() < 1e-9);
    }
}
