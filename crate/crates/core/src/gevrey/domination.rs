use crate::spectral::Grid;
use crate::{Error, Result, Scalar};

/// Lattice supremum of `t^{1/α}|ξ|₁ - (t/2)|ξ|^α`, the log-symbol of the
/// operator `e^{t^{1/α}Λ₁ - (t/2)Λ^α}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SymbolSup<T> {
    pub alpha: T,
    pub t: T,
    pub log_sup: T,
    /// `|ξ|` at the maximizing lattice point.
    pub argmax_modulus: T,
}

/// Pointwise check of `(1/2n)|ξ|₁ < (1/2)|ξ|` for `ξ ≠ 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StrictDomination<T> {
    pub checked: usize,
    pub violations: usize,
    /// Largest `|ξ|₁ / (n|ξ|)`; bounded by `1/√n`.
    pub max_ratio: T,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SymbolDominationReport<T> {
    /// Present for `α > 1`; for `α = 1` the symbol is unbounded on ℝⁿ.
    pub sup: Option<SymbolSup<T>>,
    /// Smallest sampled value of `(t-s)^{1/α} + s^{1/α} - t^{1/α}` over `0 ≤ s ≤ t`.
    pub lemma_exponent_min: T,
    /// Present for `α = 1`.
    pub strict: Option<StrictDomination<T>>,
}

fn check_params<T: Scalar>(alpha: T, t: T) -> Result<()> {
    if !(T::one()..=T::lit(2.0)).contains(&alpha) || !(t > T::zero()) {
        return Err(Error::Config(format!("need α ∈ [1, 2] and t > 0, got α={alpha}, t={t}")));
    }
    Ok(())
}

pub fn symbol_sup<T: Scalar>(alpha: T, t: T, grid: &Grid<T>) -> Result<SymbolSup<T>> {
    check_params(alpha, t)?;
    let a = t.powf(alpha.recip());
    let half_t = t * T::lit(0.5);
    let (log_sup, argmax_modulus) = (0..grid.len())
        .map(|i| {
            let r = grid.modulus(i);
            (a * grid.l1_modulus(i) - half_t * r.powf(alpha), r)
        })
        .fold((T::neg_infinity(), T::zero()), |best, cand| if cand.0 > best.0 { cand } else { best });
    Ok(SymbolSup { alpha, t, log_sup, argmax_modulus })
}

/// `(t-s)^{1/α} + s^{1/α} - t^{1/α}`, nonnegative by concavity of `x ↦ x^{1/α}`.
pub fn lemma_exponent<T: Scalar>(s: T, t: T, alpha: T) -> T {
    let e = alpha.recip();
    (t - s).powf(e) + s.powf(e) - t.powf(e)
}

/// Minimum of [`lemma_exponent`] on `samples` evenly spaced `s ∈ [0, t]`.
pub fn lemma_exponent_min<T: Scalar>(t: T, alpha: T, samples: usize) -> T {
    let n = samples.max(2);
    (0..n)
        .map(|i| {
            let s = t * T::from_usize_lossy(i) / T::from_usize_lossy(n - 1);
            lemma_exponent(s.min(t), t, alpha)
        })
        .fold(T::infinity(), T::min)
}

pub fn strict_domination<T: Scalar>(grid: &Grid<T>) -> StrictDomination<T> {
    let n = T::from_usize_lossy(grid.dim());
    let mut out = StrictDomination { checked: 0, violations: 0, max_ratio: T::zero() };
    for i in 1..grid.len() {
        let l1 = grid.l1_modulus(i);
        let r = grid.modulus(i);
        out.checked += 1;
        if !(l1 / (T::lit(2.0) * n) < r * T::lit(0.5)) {
            out.violations += 1;
        }
        out.max_ratio = out.max_ratio.max(l1 / (n * r));
    }
    out
}

/// All three domination facts at once.
pub fn symbol_domination_check<T: Scalar>(alpha: T, t: T, grid: &Grid<T>) -> Result<SymbolDominationReport<T>> {
    check_params(alpha, t)?;
    let is_one = alpha == T::one();
    Ok(SymbolDominationReport {
        sup: if is_one { None } else { Some(symbol_sup(alpha, t, grid)?) },
        lemma_exponent_min: lemma_exponent_min(t, alpha, 1001),
        strict: if is_one { Some(strict_domination(grid)) } else { None },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::make_grid;
    use std::f64::consts::TAU;

    #[test]
    fn lemma_exponent_endpoints_vanish() {
        for &alpha in &[1.0, 1.3, 2.0] {
            assert_eq!(lemma_exponent(0.0, 2.0, alpha), 0.0);
            assert_eq!(lemma_exponent(2.0, 2.0, alpha), 0.0);
            assert!(lemma_exponent_min(3.0, alpha, 501) >= -1e-15);
        }
    }

    #[test]
    fn alpha_one_strict() {
        let g = make_grid(2, 32, TAU).unwrap();
        let d = strict_domination(&g);
        assert_eq!(d.violations, 0);
        assert_eq!(d.checked, g.len() - 1);
        assert!(d.max_ratio <= 1.0 / 2f64.sqrt() + 1e-15);
        let r = symbol_domination_check(1.0, 1.0, &g).unwrap();
        assert!(r.sup.is_none() && r.strict.is_some());
    }

    #[test]
    fn sup_matches_continuum_maximum() {
        // Along the diagonal |ξ|₁ = √2|ξ|, so the continuum maximum of
        // √2 r - r^{3/2}/2 is at r* = (2√2/1.5)² with value r*·√2/3.
        let g = make_grid(2, 512, TAU * 16.0).unwrap();
        let s = symbol_sup(1.5, 1.0, &g).unwrap();
        let r_star: f64 = (2.0 * 2f64.sqrt() / 1.5).powi(2);
        let expect = 2f64.sqrt() * r_star - 0.5 * r_star.powf(1.5);
        assert!((s.log_sup - expect).abs() < 1e-3 * expect, "{} vs {expect}", s.log_sup);
    }

    #[test]
    fn rejects_bad_params() {
        let g = make_grid(2, 8, TAU).unwrap();
        assert!(symbol_sup(2.5, 1.0, &g).is_err());
        assert!(symbol_sup(1.5, 0.0, &g).is_err());
    }
}
