// Copyright 2026 MacroQ Contributors
// SPDX-License-Identifier: Apache-2.0

//! Randomized invariants of the operator-path measures.

use std::f64::consts::PI;

use macroq::measures::{measure_i_three_term, measure_i_two_term, measure_report, pure_state_measures};
use macroq::random::StateSampler;
use macroq::states::{cat_state, displace, mix, product_state};
use macroq::{Complex64, ModeSpec, OperatorCache};
use proptest::prelude::*;

fn config() -> ProptestConfig {
    ProptestConfig { cases: 48, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn identity_and_two_forms_hold_for_random_mixed_states(seed in any::<u64>(), n in 3usize..12) {
        let spec = ModeSpec::single(n).unwrap();
        let rho = StateSampler::new(seed).mixed(spec).unwrap();
        let cache = OperatorCache::new();
        let three = measure_i_three_term(&rho, &cache).unwrap();
        let two = measure_i_two_term(&rho, &cache).unwrap();
        prop_assert!((three - two).abs() < 1e-10, "{three} vs {two}");
        let r = measure_report(&rho).unwrap();
        prop_assert!(r.identity_residual < 1e-9, "residual {}", r.identity_residual);
        prop_assert!(r.chi2 > 0.0);
        prop_assert!(r.p > 0.0 && r.p <= 1.0 + 1e-12);
    }

    #[test]
    fn pure_relation_holds_for_random_pure_states(seed in any::<u64>(), n in 3usize..14) {
        let spec = ModeSpec::single(n).unwrap();
        let psi = StateSampler::new(seed).pure(spec).unwrap();
        let r = pure_state_measures(&psi).unwrap();
        prop_assert!((r.i - (r.chi2 / 4.0 - 0.5)).abs() < 1e-10);
        prop_assert!((r.p - 1.0).abs() < 1e-12);
    }

    #[test]
    fn two_mode_products_add(seed in any::<u64>(), n in 3usize..7) {
        let spec = ModeSpec::single(n).unwrap();
        let mut sampler = StateSampler::new(seed);
        let a = sampler.mixed(spec).unwrap();
        let b = sampler.mixed(spec).unwrap();
        let (ra, rb) = (measure_report(&a).unwrap(), measure_report(&b).unwrap());
        let r = measure_report(&product_state(&a, &b).unwrap()).unwrap();
        prop_assert!((r.chi2 - (ra.chi2 + rb.chi2)).abs() < 1e-9);
        prop_assert!((r.p - ra.p * rb.p).abs() < 1e-12);
        prop_assert!(r.identity_residual < 1e-9);
    }

    #[test]
    fn displacement_leaves_measures_unchanged(
        alpha in -1.0f64..1.0,
        phase in 0.0f64..(2.0 * PI),
        re in -0.8f64..0.8,
        im in -0.8f64..0.8,
    ) {
        let spec = ModeSpec::single(48).unwrap();
        let rho = cat_state(spec, Complex64::new(alpha, 0.0), phase).unwrap().projector();
        let moved = displace(&rho, 1, Complex64::new(re, im)).unwrap();
        let (r0, r1) = (measure_report(&rho).unwrap(), measure_report(&moved).unwrap());
        prop_assert!((r0.i - r1.i).abs() < 1e-7, "I {} vs {}", r0.i, r1.i);
        prop_assert!((r0.chi2 - r1.chi2).abs() < 1e-6);
    }

    #[test]
    fn mixing_never_raises_purity(seed in any::<u64>(), w in 0.05f64..0.95) {
        let spec = ModeSpec::single(8).unwrap();
        let mut sampler = StateSampler::new(seed);
        let a = sampler.mixed(spec).unwrap();
        let b = sampler.mixed(spec).unwrap();
        let m = mix(&[(w, a.clone()), (1.0 - w, b.clone())]).unwrap();
        let (pa, pb, pm) = (
            measure_report(&a).unwrap().p,
            measure_report(&b).unwrap().p,
            measure_report(&m).unwrap().p,
        );
        prop_assert!(pm <= pa.max(pb) + 1e-12);
    }
}
