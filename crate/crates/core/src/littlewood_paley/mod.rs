//! Dyadic Littlewood–Paley analysis on the frequency lattice: the filter
//! bank, homogeneous Besov and Chemin–Lerner mixed norms, Bony's
//! paraproduct, and Bernstein and semigroup-decay checks.

mod checks;
mod filter;
mod norms;
mod paraproduct;
mod report;

pub use checks::{
    bernstein_check, bernstein_sweep, gradient_lp_norm, semigroup_decay_check, BernsteinReport,
    BernsteinSweep, SemigroupDecayReport,
};
pub use filter::{
    build_filter_bank, chi, dyadic_block, low_pass, low_pass_by_blocks, phi, DyadicFilterBank,
    CHI_INNER, CHI_OUTER,
};
pub use norms::{
    besov_norm, besov_norm_vector, block_lp_norms, block_lp_norms_vector, combine_blocks,
    dyadic_weight, lp_norm, lp_norm_quadrature, lp_norm_vector, mixed_norm, norm_report,
    BesovParams, BlockNormTable, MixedNormParams, NormReport, NormRow,
};
pub use paraproduct::{paraproduct, Paraproduct};
pub use report::{exponent_label, write_besov_summary, write_norm_report};
