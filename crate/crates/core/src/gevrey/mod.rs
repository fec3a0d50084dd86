//! Gevrey-class analysis: the lift `e^{θ t^{1/α} Λ₁}`, analyticity radii,
//! kernel `L¹` constants, decay fits, and empirical bilinear bounds.

mod bilinear;
mod bt;
mod decay;
mod domination;
mod kernel;
mod lift;
mod radius;
mod report;

pub use bilinear::{
    bilinear_estimate_check, bilinear_form, bilinear_sides, BilinearCheckReport, BilinearEstimate, BilinearParams,
    BilinearSample, EnsembleConfig,
};
pub use bt::{bt_exponent_max, bt_operator, bt_oracle, BtExponents, BtOutput, BT_MODE_LIMIT};
pub use decay::{decay_fit, DecayFit, MIN_DECAY_SAMPLES};
pub use domination::{
    lemma_exponent, lemma_exponent_min, strict_domination, symbol_domination_check, symbol_sup, StrictDomination,
    SymbolDominationReport, SymbolSup,
};
pub use kernel::{kernel_l1_norm, KernelNormEstimate, RESOLUTION_TOLERANCE};
pub use lift::{default_theta, gevrey_besov_norm, gevrey_exponent, gevrey_lift, GevreyLift, LOG_SPACE_THRESHOLD};
pub use radius::{analyticity_radius, gevrey_report, shell_maxima, GevreyReport, RadiusFit, MIN_SHELLS};
pub use report::{write_bilinear_report, write_gevrey_study, write_kernel_norms};
