use num_complex::Complex;

use crate::littlewood_paley::lp_norm;
use crate::spectral::{Grid, SpectralField};
use crate::{Error, Result, Scalar};

/// Largest input grid (total modes) the double sum accepts.
pub const BT_MODE_LIMIT: usize = 4096;

/// Exponents of the ratio `‖𝓑_t(f,g)‖_{L^p} / (‖f‖_{L^{p₁}} ‖g‖_{L^{p₂}})`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BtExponents<T> {
    pub p: T,
    pub p1: T,
    pub p2: T,
}

impl<T: Scalar> Default for BtExponents<T> {
    fn default() -> Self {
        Self { p: T::lit(2.0), p1: T::lit(4.0), p2: T::lit(4.0) }
    }
}

impl<T: Scalar> BtExponents<T> {
    pub fn validate(&self) -> Result<()> {
        let ok = |v: T| v >= T::one();
        if !ok(self.p) || !ok(self.p1) || !ok(self.p2) {
            return Err(Error::Hypothesis(format!("exponents must be ≥ 1: {self:?}")));
        }
        let gap = self.p.recip() - self.p1.recip() - self.p2.recip();
        if gap.abs() > T::lit(1e-12) {
            return Err(Error::Hypothesis(format!(
                "Hölder relation 1/p = 1/p1 + 1/p2 fails for {self:?}"
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct BtOutput<T: Scalar> {
    /// `𝓑_t(f,g)` on the grid with twice the points, which holds every sum
    /// frequency without aliasing.
    pub field: SpectralField<T>,
    pub lhs: T,
    pub rhs: T,
    pub ratio: T,
}

fn l1_index(k: &[i64]) -> i64 {
    k.iter().map(|v| v.abs()).sum()
}

fn check_size<T: Scalar>(grid: &Grid<T>) -> Result<()> {
    if grid.len() > BT_MODE_LIMIT {
        return Err(Error::Refused(format!(
            "brute-force bilinear sum over {} modes exceeds the {BT_MODE_LIMIT}-mode cap",
            grid.len()
        )));
    }
    Ok(())
}

/// Largest value of `|k+l|₁ - |k|₁ - |l|₁` over all pairs of lattice indices
/// on `grid`, in exact integer arithmetic. Never positive.
pub fn bt_exponent_max<T: Scalar>(grid: &Grid<T>) -> Result<i64> {
    check_size(grid)?;
    let dim = grid.dim();
    let waves: Vec<_> = (0..grid.len()).map(|i| grid.wave_index(i)).collect();
    let mut best = i64::MIN;
    let mut sum = [0i64; 8];
    for a in &waves {
        for b in &waves {
            for d in 0..dim {
                sum[d] = a[d] + b[d];
            }
            best = best.max(l1_index(&sum[..dim]) - l1_index(&a[..dim]) - l1_index(&b[..dim]));
        }
    }
    Ok(best)
}

/// `Σ_ξ Σ_η e^{ix·(ξ+η)} e^{t^{1/α}(|ξ+η|₁-|ξ|₁-|η|₁)} f̂(ξ) ĝ(η)` by direct
/// double sum. Nyquist modes of the inputs are ignored.
pub fn bt_operator<T: Scalar>(f: &SpectralField<T>, g: &SpectralField<T>, t: T, alpha: T) -> Result<SpectralField<T>> {
    let grid = f.grid();
    grid.check_same(g.grid())?;
    check_size(grid)?;
    if !(t >= T::zero()) || !(T::one()..=T::lit(2.0)).contains(&alpha) {
        return Err(Error::Config(format!("need t ≥ 0 and α ∈ [1, 2], got t={t}, α={alpha}")));
    }
    let dim = grid.dim();
    let out_grid = Grid::new(dim, 2 * grid.points_per_axis(), grid.period())?;
    let a = t.powf(alpha.recip()) * grid.wave_scale();
    let live = |h: &SpectralField<T>| -> Vec<(_, Complex<T>)> {
        h.coeffs()
            .iter()
            .enumerate()
            .filter(|&(i, c)| !grid.has_nyquist(i) && (c.re != T::zero() || c.im != T::zero()))
            .map(|(i, &c)| (grid.wave_index(i), c))
            .collect()
    };
    let (fs, gs) = (live(f), live(g));
    let mut out = SpectralField::zeros(&out_grid);
    let mut sum = [0i64; 8];
    for (kf, cf) in &fs {
        for (kg, cg) in &gs {
            for d in 0..dim {
                sum[d] = kf[d] + kg[d];
            }
            let gap = l1_index(&sum[..dim]) - l1_index(&kf[..dim]) - l1_index(&kg[..dim]);
            let weight = (a * T::from_i64_lossy(gap)).exp();
            let target = out_grid.flat_of_wave(&sum[..dim]).expect("sum frequency fits the doubled grid");
            out.coeffs_mut()[target] += *cf * *cg * weight;
        }
    }
    Ok(out)
}

/// Evaluates `𝓑_t(f,g)` and its boundedness ratio. Norms are computed on a
/// grid four times finer than the input, where the Riemann sums of `|f|^4`
/// and `|g|^4` are exact for band-limited input.
pub fn bt_oracle<T: Scalar>(
    f: &SpectralField<T>,
    g: &SpectralField<T>,
    t: T,
    alpha: T,
    exponents: &BtExponents<T>,
) -> Result<BtOutput<T>> {
    exponents.validate()?;
    let field = bt_operator(f, g, t, alpha)?;
    let fine = 4 * f.grid().points_per_axis();
    let lhs = lp_norm(&field.padded(fine)?, exponents.p)?;
    let rhs = lp_norm(&f.padded(fine)?, exponents.p1)? * lp_norm(&g.padded(fine)?, exponents.p2)?;
    if !(rhs > T::zero()) {
        return Err(Error::UndefinedRatio("input norms vanish".into()));
    }
    Ok(BtOutput { field, lhs, rhs, ratio: lhs / rhs })
}
