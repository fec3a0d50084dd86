//! Periodic grids, spectral transforms, Fourier multipliers and dealiased
//! products.

mod field;
mod grid;
mod multiplier;
mod product;
mod snapshot;
mod transform;

pub use field::{transform_forward, transform_inverse, SpectralField};
pub use grid::{make_grid, Grid, WaveIndex, MAX_DIM};
pub use multiplier::{apply_multiplier, apply_table, evaluate_symbol, symbol_table, MultiplierSpec};
pub use product::{pointwise_product_dealiased, products_with};
pub use snapshot::{
    decode_snapshot, encode_snapshot, read_snapshot, write_snapshot, SNAPSHOT_MAGIC,
};
