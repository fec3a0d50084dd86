use std::f64::consts::{PI, TAU};

use fracks::ensemble::{gaussian_field, member_rng};
use fracks::gevrey::{
    bilinear_sides, bt_exponent_max, bt_operator, decay_fit, gevrey_lift, kernel_l1_norm, lemma_exponent,
    lemma_exponent_min, symbol_sup, BilinearEstimate, BilinearParams,
};
use fracks::littlewood_paley::{besov_norm, build_filter_bank, chi, lp_norm, BesovParams};
use fracks::solver::{simulate, SolverConfig, Status};
use fracks::spectral::{apply_multiplier, make_grid, MultiplierSpec};
use fracks::{Field64, Grid64};
use num_complex::Complex;
use proptest::prelude::*;

fn grid(n: usize) -> Grid64 {
    make_grid(2, n, TAU).unwrap()
}

fn small_data(g: &Grid64, seed: u64, amplitude: f64) -> Field64 {
    gaussian_field(g, &mut member_rng(seed, 0), -1.0, g.dealias_cutoff() / 2).scaled(amplitude)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn lifted_norm_stays_bounded(seed in any::<u64>(), alpha in 1.2..=2.0f64) {
        let g = grid(32);
        let u0 = small_data(&g, seed, 0.2);
        let (traj, outcome) = simulate(&u0, &SolverConfig::new(alpha, 1.0, 20)).unwrap();
        prop_assert_eq!(outcome.status, Status::Completed);
        let initial = traj.norms[0].besov_critical;
        let worst = traj.norms.iter().map(|r| r.gevrey_norm).fold(0.0, f64::max);
        prop_assert!(worst <= 5.0 * initial, "{worst} vs {initial}");
    }

    #[test]
    fn lemma_exponent_is_nonnegative(alpha in 1.0..=2.0f64, t in 0.0..100.0f64, frac in 0.0..=1.0f64) {
        let s = (frac * t).min(t);
        prop_assert!(lemma_exponent(s, t, alpha) >= 0.0);
    }

    #[test]
    fn bt_exponent_is_never_positive(a in prop::array::uniform2(-40i64..40), b in prop::array::uniform2(-40i64..40)) {
        let l1 = |k: [i64; 2]| k[0].abs() + k[1].abs();
        prop_assert!(l1([a[0] + b[0], a[1] + b[1]]) - l1(a) - l1(b) <= 0);
    }
}

#[test]
fn bt_exponent_max_over_whole_lattices() {
    for (dim, n) in [(1, 64), (2, 16), (2, 32), (3, 8)] {
        assert_eq!(bt_exponent_max(&make_grid(dim, n, TAU).unwrap()).unwrap(), 0);
    }
}

#[test]
fn lemma_exponent_vanishes_at_the_ends() {
    for alpha in [1.0, 1.3, 2.0] {
        for t in [0.1, 1.0, 7.0] {
            assert_eq!(lemma_exponent(0.0, t, alpha), 0.0);
            assert_eq!(lemma_exponent(t, t, alpha), 0.0);
            assert!(lemma_exponent_min(t, alpha, 501) >= 0.0);
        }
    }
}

#[test]
fn decay_is_controlled_by_the_kernel_norm() {
    let g = grid(64);
    let (alpha, sigma, theta) = (2.0, 1.0, 1.0);
    let u0 = small_data(&g, 21, 0.3);
    let (traj, outcome) = simulate(&u0, &SolverConfig::new(alpha, 1.0, 4)).unwrap();
    assert_eq!(outcome.status, Status::Completed);
    for (&t, u) in traj.times.iter().zip(&traj.snapshots).skip(1) {
        let lhs = lp_norm(&apply_multiplier(u, &MultiplierSpec::Power { sigma }).unwrap(), 2.0).unwrap();
        let lifted = gevrey_lift(u, t, alpha, theta).unwrap().to_field().unwrap();
        let kernel = kernel_l1_norm(sigma, alpha, theta, t, 2, 512, 64.0).unwrap();
        assert!(!kernel.resolution_warning, "{kernel:?}");
        let rhs = kernel.value * lp_norm(&lifted, 2.0).unwrap();
        assert!(lhs <= 1.05 * rhs, "t={t}: {lhs} vs {rhs}");
    }
}

#[test]
fn kernel_norm_scales_over_a_decade() {
    for (sigma, alpha) in [(1.0, 2.0), (0.5, 1.5)] {
        let rescaled: Vec<f64> = [1.0, 10f64.sqrt(), 10.0]
            .iter()
            .map(|&t| kernel_l1_norm(sigma, alpha, 1.0, t, 2, 1024, 200.0).unwrap().rescaled)
            .collect();
        let lo = rescaled.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = rescaled.iter().cloned().fold(0.0, f64::max);
        assert!(hi / lo - 1.0 <= 0.03, "σ={sigma}: {rescaled:?}");
    }
}

#[test]
fn symbol_sup_is_invariant_under_rescaling() {
    // t^{1/α}|ξ|₁ - (t/2)|ξ|^α at ξ = t^{-1/α}η is |η|₁ - |η|^α/2, so the
    // supremum does not depend on t once the lattice is fine enough.
    let g = make_grid(2, 512, 64.0 * PI).unwrap();
    let sups: Vec<f64> = [0.5, 1.0, 2.0].iter().map(|&t| symbol_sup(1.5, t, &g).unwrap().log_sup.exp()).collect();
    let drift = sups.iter().cloned().fold(0.0, f64::max) / sups.iter().cloned().fold(f64::INFINITY, f64::min) - 1.0;
    assert!(drift <= 0.005, "{sups:?}");
}

#[test]
fn lift_examples() {
    let g = grid(16);
    let u = Field64::plane_wave(&g, &[1, 1], Complex::new(0.5, 0.0)).unwrap();
    let lifted = gevrey_lift(&u, 1.0, 2.0, 1.0).unwrap().to_field().unwrap();
    assert!((lifted.coeff_at(&[1, 1]).re - 0.5 * 2f64.exp()).abs() < 1e-13);
    let w = gaussian_field(&g, &mut member_rng(3, 0), 0.0, 5);
    assert_eq!(gevrey_lift(&w, 0.0, 1.5, 1.0).unwrap().to_field().unwrap(), w);

    let g = grid(64);
    let bank = build_filter_bank(&g);
    let noise = gaussian_field(&g, &mut member_rng(4, 0), 0.0, g.dealias_cutoff());
    let smoothed = apply_multiplier(&noise, &MultiplierSpec::Semigroup { alpha: 2.0, t: 1.0 }).unwrap();
    let params = BesovParams::critical(2.0, 2, 2.0, 2.0).unwrap();
    let base = besov_norm(&smoothed, &params, &bank).unwrap();
    let lifted = gevrey_lift(&smoothed, 1.0, 2.0, 1.0).unwrap().besov_norm(&params, &bank).unwrap();
    assert!(lifted.is_finite() && lifted <= 10.0 * base, "{lifted} vs {base}");
}

#[test]
fn decay_fit_examples() {
    let times: Vec<f64> = (0..20).map(|i| 0.1 * 1.3f64.powi(i)).collect();
    let power: Vec<f64> = times.iter().map(|t| 2.5 * t.powf(-0.75)).collect();
    let fit = decay_fit(&times, &power, None).unwrap();
    assert!((fit.exponent + 0.75).abs() < 1e-9);
    let flat = vec![3.0; times.len()];
    assert!(decay_fit(&times, &flat, None).unwrap().exponent.abs() < 1e-12);
    assert!(decay_fit(&times[..5], &flat[..5], None).is_err());
}

#[test]
fn bilinear_side_vanishes_with_one_factor() {
    let g = grid(16);
    let bank = build_filter_bank(&g);
    let u = small_data(&g, 1, 1.0);
    let zero = Field64::zeros(&g);
    for estimate in BilinearEstimate::ALL {
        let params = BilinearParams::defaults(estimate, 2);
        let (lhs, _, ratio) = bilinear_sides(&params, &[0.0, 1.0], &[u.clone(), u.clone()], &[zero.clone(), zero.clone()], &bank).unwrap();
        assert_eq!((lhs, ratio), (0.0, 0.0));
    }
}

/// Quintic smoothstep written out independently of the library.
fn chi_at_one() -> f64 {
    let x: f64 = (1.0 - 0.75) / (4.0 / 3.0 - 0.75);
    1.0 - x.powi(3) * (10.0 - 15.0 * x + 6.0 * x * x)
}

#[test]
fn bilinear_sides_for_two_cosines() {
    // u = cos x, v = cos y: the form is (-sin x cos y, -cos x sin y), four
    // modes with |ξ| = √2 inside the single shell j = 0, and ‖·‖₂ = π√2.
    // Each factor splits between j = -1 (weight χ(1)) and j = 0
    // (weight 1 - χ(1)), with ‖cos‖₂ = π√2.
    let g = grid(16);
    let bank = build_filter_bank(&g);
    let u = Field64::from_fn(&g, |x| x[0].cos());
    let v = Field64::from_fn(&g, |x| x[1].cos());
    let c = chi_at_one();
    assert!((chi(1.0) - c).abs() < 1e-15);
    let horizon: f64 = 2.0;
    let times: Vec<f64> = (0..=8).map(|i| horizon * i as f64 / 8.0).collect();
    let us = vec![u; times.len()];
    let vs = vec![v; times.len()];
    let cos_norm = PI * 2f64.sqrt();
    for estimate in BilinearEstimate::ALL {
        let p = BilinearParams::<f64>::defaults(estimate, 2);
        if p.p != 2.0 {
            continue;
        }
        let time = |rho: f64| if rho.is_infinite() { 1.0 } else { horizon.powf(1.0 / rho) };
        let factor = |s: f64, rho: f64| {
            let w = [2f64.powf(-s) * c, 1.0 - c];
            let sum = if p.q.is_infinite() { w[0].max(w[1]) } else { (w[0].powf(p.q) + w[1].powf(p.q)).powf(1.0 / p.q) };
            time(rho) * cos_norm * sum
        };
        let lhs = time(p.rho) * PI * 2f64.sqrt();
        let rhs = 2.0 * factor(p.s1, p.rho1) * factor(p.s2, p.rho2);
        let (got_lhs, got_rhs, ratio) = bilinear_sides(&p, &times, &us, &vs, &bank).unwrap();
        assert!((got_lhs - lhs).abs() < 1e-12 * lhs, "{}: {got_lhs} vs {lhs}", estimate.name());
        assert!((got_rhs - rhs).abs() < 1e-12 * rhs, "{}: {got_rhs} vs {rhs}", estimate.name());
        assert!((ratio - lhs / rhs).abs() < 1e-12 * ratio);
    }
}

#[test]
fn bt_at_zero_time_is_the_product() {
    let g = grid(16);
    let f = Field64::cosine_mode(&g, &[2, 1], 1.0).unwrap();
    let h = Field64::cosine_mode(&g, &[-1, 3], 1.0).unwrap();
    let out = bt_operator(&f, &h, 0.0, 1.5).unwrap();
    let fine = out.grid().clone();
    let (fp, hp) = (f.padded(32).unwrap().inverse(), h.padded(32).unwrap().inverse());
    let prod: Vec<f64> = fp.iter().zip(&hp).map(|(a, b)| a * b).collect();
    let direct = Field64::forward(&prod, &fine).unwrap();
    assert!((&out - &direct).max_abs() < 1e-15);
}
