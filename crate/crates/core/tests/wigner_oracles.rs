// Copyright 2026 MacroQ Contributors
// SPDX-License-Identifier: Apache-2.0

//! Wigner-engine oracles: closed-form Gaussians, the kernel transform against
//! direct quadrature of the Wigner integral, marginals and normalization.

use std::f64::consts::PI;

use macroq::states::{cat_state, coherent_state, fock_mixture, fock_state, thermal_state};
use macroq::wigner::{
    gaussian_wigner, measure_c_wigner, measure_p_wigner, position_density, wigner_direct, wigner_from_density,
};
use macroq::{Complex64, GaussianSpec, GridSpec, ModeSpec};

fn laguerre(n: usize, x: f64) -> f64 {
    let (mut l0, mut l1) = (1.0, 1.0 - x);
    if n == 0 {
        return l0;
    }
    for k in 1..n {
        let kf = k as f64;
        let l2 = ((2.0 * kf + 1.0 - x) * l1 - kf * l0) / (kf + 1.0);
        l0 = l1;
        l1 = l2;
    }
    l1
}

#[test]
fn fock_states_match_laguerre_closed_form() {
    let spec = ModeSpec::single(24).unwrap();
    let gs = GridSpec::new(7.0, 71, 71).unwrap();
    for n in [0, 1, 2, 5, 12] {
        let rho = fock_state(spec, n).unwrap().projector();
        let w = wigner_from_density(&rho, &gs).unwrap();
        let mut worst: f64 = 0.0;
        for i in 0..gs.nq {
            for j in 0..gs.np {
                let r2 = gs.q(i).powi(2) + gs.p(j).powi(2);
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                let exact = sign / PI * (-r2).exp() * laguerre(n, 2.0 * r2);
                worst = worst.max((w.at(i, j) - exact).abs());
            }
        }
        assert!(worst < 1e-12, "n={n}: max deviation {worst:e}");
    }
}

#[test]
fn thermal_states_match_gaussian_closed_form() {
    for a in [1.0, 1.5, 2.0] {
        let g = GaussianSpec::new(a).unwrap();
        let spec = ModeSpec::single(macroq::states::default_thermal_truncation(g)).unwrap();
        let rho = thermal_state(spec, g).unwrap();
        let gs = GridSpec::new(8.0, 65, 65).unwrap();
        let w = wigner_from_density(&rho, &gs).unwrap();
        let exact = gaussian_wigner(g, &gs);
        let d = w.max_abs_diff(&exact).unwrap();
        assert!(d < 1e-10, "a={a}: max deviation {d:e}");
    }
}

#[test]
fn kernel_transform_agrees_with_direct_quadrature() {
    let spec = ModeSpec::single(20).unwrap();
    let gs = GridSpec::new(6.0, 41, 41).unwrap();
    let states = [
        coherent_state(spec, Complex64::new(0.8, -0.4)).unwrap().projector(),
        cat_state(spec, Complex64::new(1.2, 0.0), PI).unwrap().projector(),
        fock_mixture(spec, 3, false).unwrap(),
    ];
    for (k, rho) in states.iter().enumerate() {
        let kernel = wigner_from_density(rho, &gs).unwrap();
        let direct = wigner_direct(rho, &gs, 512).unwrap();
        let d = kernel.max_abs_diff(&direct).unwrap();
        assert!(d < 1e-6, "state {k}: kernel vs direct {d:e}");
    }
}

#[test]
fn marginal_is_position_density() {
    let spec = ModeSpec::single(24).unwrap();
    let rho = cat_state(spec, Complex64::new(1.5, 0.3), 0.0).unwrap().projector();
    let gs = GridSpec::for_truncation(24, 128).unwrap();
    let w = wigner_from_density(&rho, &gs).unwrap();
    for i in (0..gs.nq).step_by(9) {
        let exact = position_density(&rho, gs.q(i)).unwrap();
        let got = w.marginal_q(i);
        assert!((got - exact).abs() < 1e-9, "q={}: {got} vs {exact}", gs.q(i));
    }
    assert!((w.integral() - 1.0).abs() < 1e-9);
}

#[test]
fn grid_measures_reproduce_gaussian_values() {
    for a in [1.0, 1.3, 2.0] {
        let g = GaussianSpec::new(a).unwrap();
        let gs = GridSpec::for_truncation(macroq::states::default_thermal_truncation(g), 256).unwrap();
        let w = gaussian_wigner(g, &gs);
        let p = measure_p_wigner(&w);
        let c = measure_c_wigner(&w).unwrap();
        assert!((p - 1.0 / (a * a)).abs() < 1e-9 * p, "a={a}: P={p}");
        assert!((c - 1.0 / a.powi(4)).abs() < 1e-6 * c, "a={a}: C={c}");
    }
}

#[test]
fn wigner_is_bounded_by_one_over_pi() {
    let spec = ModeSpec::single(30).unwrap();
    let rho = cat_state(spec, Complex64::new(2.0, 0.0), PI).unwrap().projector();
    let gs = GridSpec::for_truncation(30, 96).unwrap();
    let w = wigner_from_density(&rho, &gs).unwrap();
    let bound = 1.0 / PI + 1e-12;
    assert!(w.values.iter().all(|v| v.abs() <= bound));
}
