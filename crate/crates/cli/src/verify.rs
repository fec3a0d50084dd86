//! A fast, seeded pass over the structural invariants of the library.

use std::f64::consts::TAU;

use fracks::ensemble::{bilinear_member, gaussian_field, member_rng};
use fracks::gevrey::{bt_exponent_max, kernel_l1_norm, lemma_exponent_min, strict_domination};
use fracks::littlewood_paley::{besov_norm, build_filter_bank, dyadic_block, paraproduct, BesovParams};
use fracks::solver::{scaling_transform, simulate, SolverConfig, Status};
use fracks::spectral::{
    apply_multiplier, decode_snapshot, encode_snapshot, evaluate_symbol, make_grid, pointwise_product_dealiased,
    MultiplierSpec,
};
use fracks::{Field64, Grid64, Result};
use num_complex::Complex;

pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

fn grid(n: usize) -> Result<Grid64> {
    make_grid(2, n, TAU)
}

fn relative_gap(a: &Field64, b: &Field64) -> f64 {
    (a - b).max_abs() / a.max_abs().max(b.max_abs()).max(f64::MIN_POSITIVE)
}

fn smooth_data(g: &Grid64, seed: u64, amplitude: f64, mean: f64) -> Field64 {
    let mut f = gaussian_field(g, &mut member_rng(seed, 0), -1.0, g.dealias_cutoff() / 2).scaled(amplitude);
    f.coeffs_mut()[0] = Complex::new(mean, 0.0);
    f
}

fn within(name: &'static str, value: f64, tol: f64) -> Check {
    Check { name, pass: value <= tol, detail: format!("{value:.2e} (tol {tol:.0e})") }
}

fn eigenfunctions() -> Result<Check> {
    let g = grid(32)?;
    let mut worst: f64 = 0.0;
    for k in [[1i64, 0], [3, -2], [-7, 5], [15, 15]] {
        let wave = Field64::plane_wave(&g, &k, Complex::new(0.6, -0.8))?;
        for spec in [
            MultiplierSpec::FracLaplacian { alpha: 1.5 },
            MultiplierSpec::Semigroup { alpha: 1.2, t: 0.3 },
            MultiplierSpec::RieszGrad { axis: 1 },
            MultiplierSpec::Power { sigma: 0.7 },
        ] {
            let symbol = evaluate_symbol(&spec, &[k[0] as f64, k[1] as f64]);
            let expect = wave.map_indexed(|_, c| c * symbol);
            worst = worst.max(relative_gap(&apply_multiplier(&wave, &spec)?, &expect));
        }
    }
    Ok(within("plane waves are eigenfunctions", worst, 1e-13))
}

fn semigroup(seed: u64) -> Result<Check> {
    let g = grid(32)?;
    let mut worst: f64 = 0.0;
    for trial in 0..5 {
        let f = gaussian_field(&g, &mut member_rng(seed, trial), 0.0, 10);
        let sg = |t| MultiplierSpec::Semigroup { alpha: 1.0 + 0.25 * trial as f64, t };
        let two = apply_multiplier(&apply_multiplier(&f, &sg(0.1))?, &sg(0.25))?;
        worst = worst.max(relative_gap(&two, &apply_multiplier(&f, &sg(0.35))?));
    }
    Ok(within("semigroup composes", worst, 1e-13))
}

fn partition() -> Result<Check> {
    let worst = [16, 64, 128].iter().map(|&n| grid(n).map(|g| build_filter_bank(&g).partition_residual())).try_fold(
        0.0f64,
        |m, r| r.map(|r| m.max(r)),
    )?;
    Ok(within("dyadic blocks sum to one", worst, 1e-12))
}

fn orthogonality_and_paraproduct(seed: u64) -> Result<[Check; 2]> {
    let g = grid(64)?;
    let bank = build_filter_bank(&g);
    let (mut leak, mut recon): (f64, f64) = (0.0, 0.0);
    for trial in 0..5u64 {
        let f = bilinear_member::<f64>(&g, seed, 2 * trial);
        let h = bilinear_member::<f64>(&g, seed, 2 * trial + 1);
        let blocks = bank.indices().map(|j| dyadic_block(&f, j, &bank)).collect::<Result<Vec<_>>>()?;
        for j in bank.indices() {
            for k in bank.indices().filter(|k| (j - k).abs() >= 2) {
                leak = leak.max(dyadic_block(&blocks[(k - bank.j_min()) as usize], j, &bank)?.max_abs());
            }
        }
        let parts = paraproduct(&f, &h, &bank)?;
        recon = recon.max(relative_gap(&parts.sum(), &pointwise_product_dealiased(&f, &h)?));
    }
    Ok([
        Check { name: "distant blocks are orthogonal", pass: leak == 0.0, detail: format!("{leak:.1e} (exact 0)") },
        within("paraproduct reconstructs the product", recon, 1e-10),
    ])
}

fn critical_scaling(seed: u64) -> Result<Check> {
    let g = grid(64)?;
    // Annular spectrum well away from both ends of the lattice.
    let raw = gaussian_field(&g, &mut member_rng(seed, 7), 0.0, 8);
    let f = raw.map_indexed(|i, c| if (4.0..=8.0).contains(&g.modulus(i)) { c } else { Complex::new(0.0, 0.0) });
    let mut worst: f64 = 0.0;
    for alpha in [1.0, 1.5, 2.0] {
        for p in [2.0, f64::INFINITY] {
            let params = BesovParams::critical(alpha, 2, p, 2.0)?;
            let before = besov_norm(&f, &params, &build_filter_bank(&g))?;
            let scaled = scaling_transform(&f, 2.0, alpha)?;
            let after = besov_norm(&scaled, &params, &build_filter_bank(scaled.grid()))?;
            worst = worst.max((after / before - 1.0).abs());
        }
    }
    Ok(within("critical norm is scale invariant", worst, 0.02))
}

fn flows(seed: u64) -> Result<[Check; 4]> {
    let g = grid(32)?;
    let (mut drift, mut linear, mut covariance): (f64, f64, f64) = (0.0, 0.0, 0.0);
    let mut repeatable = true;
    for (trial, alpha) in [1.0, 1.5, 2.0].into_iter().enumerate() {
        let u0 = smooth_data(&g, seed.wrapping_add(trial as u64), 0.5, 0.5);
        let cfg = SolverConfig::new(alpha, 0.2, 4);
        let (traj, outcome) = simulate(&u0, &cfg)?;
        drift = drift.max(if outcome.status == Status::Completed { traj.mass_drift() } else { f64::INFINITY });
        let (again, _) = simulate(&u0, &cfg)?;
        repeatable &= again.norms == traj.norms && again.snapshots == traj.snapshots;

        let mut heat = cfg.clone();
        heat.nonlinear = false;
        let (free, _) = simulate(&u0, &heat)?;
        for (t, snap) in free.times.iter().zip(&free.snapshots) {
            let exact = apply_multiplier(&u0.clone().dealiased(), &MultiplierSpec::Semigroup { alpha, t: *t })?;
            linear = linear.max(relative_gap(snap, &exact));
        }

        let factor = 2f64.powf(alpha);
        let (fast, _) = simulate(&scaling_transform(&u0, 2.0, alpha)?, &SolverConfig::new(alpha, 0.2 / factor, 4))?;
        for (a, b) in traj.snapshots.iter().zip(&fast.snapshots) {
            let back = Field64::from_coeffs(a.grid(), b.coeffs().iter().map(|c| c / factor).collect())?;
            covariance = covariance.max(relative_gap(a, &back));
        }
    }
    Ok([
        within("mass is conserved", drift, 1e-10),
        within("linear flow is the semigroup", linear, 1e-12),
        within("flow commutes with scaling", covariance, 1e-10),
        Check { name: "reruns are bit-identical", pass: repeatable, detail: format!("{repeatable}") },
    ])
}

fn symbols() -> Result<[Check; 3]> {
    let bt = [(1, 64), (2, 16), (3, 8)]
        .iter()
        .map(|&(d, n)| make_grid(d, n, TAU).and_then(|g: Grid64| bt_exponent_max(&g)))
        .collect::<Result<Vec<_>>>()?;
    let violations: usize = (2..=3)
        .map(|d| make_grid(d, 16, TAU).map(|g: Grid64| strict_domination(&g).violations))
        .sum::<Result<usize>>()?;
    let lemma = [1.0, 1.5, 2.0]
        .iter()
        .flat_map(|&a| [0.1, 1.0, 10.0].map(|t| lemma_exponent_min(t, a, 501)))
        .fold(f64::INFINITY, f64::min);
    Ok([
        Check {
            name: "product exponent is never positive",
            pass: bt.iter().all(|&m| m == 0),
            detail: format!("max exponents {bt:?} (expect 0)"),
        },
        Check {
            name: "unit-speed symbol is dominated",
            pass: violations == 0,
            detail: format!("{violations} violations in 2D and 3D"),
        },
        Check { name: "time-splitting exponent is nonnegative", pass: lemma >= 0.0, detail: format!("min {lemma:.3e}") },
    ])
}

fn kernel_identity() -> Result<Check> {
    let e = kernel_l1_norm::<f64>(0.0, 2.0, 1.0, 1.0, 2, 512, 64.0)?;
    let err = (e.value - 1.0).abs();
    Ok(Check {
        name: "order-zero kernel has unit mass",
        pass: err <= 5e-3 && !e.resolution_warning,
        detail: format!("value {:.6} (tol 5e-3)", e.value),
    })
}

fn snapshots(seed: u64) -> Result<Check> {
    let g = make_grid(3, 8, 2.5)?;
    let f = gaussian_field(&g, &mut member_rng(seed, 3), 0.0, 3);
    let back: Field64 = decode_snapshot(&encode_snapshot(&f))?;
    let pass = back.grid() == f.grid() && back.coeffs() == f.coeffs();
    Ok(Check { name: "snapshots round-trip exactly", pass, detail: format!("{pass}") })
}

/// Runs every check; an error inside a check counts as a failure.
pub fn run_all(seed: u64) -> Vec<Check> {
    let mut out = Vec::new();
    let mut push = |name: &'static str, r: Result<Vec<Check>>| match r {
        Ok(checks) => out.extend(checks),
        Err(e) => out.push(Check { name, pass: false, detail: format!("error: {e}") }),
    };
    push("plane waves are eigenfunctions", eigenfunctions().map(|c| vec![c]));
    push("semigroup composes", semigroup(seed).map(|c| vec![c]));
    push("dyadic blocks sum to one", partition().map(|c| vec![c]));
    push("block orthogonality", orthogonality_and_paraproduct(seed).map(Vec::from));
    push("critical norm is scale invariant", critical_scaling(seed).map(|c| vec![c]));
    push("flow invariants", flows(seed).map(Vec::from));
    push("symbol inequalities", symbols().map(Vec::from));
    push("order-zero kernel has unit mass", kernel_identity().map(|c| vec![c]));
    push("snapshots round-trip exactly", snapshots(seed).map(|c| vec![c]));
    out
}
