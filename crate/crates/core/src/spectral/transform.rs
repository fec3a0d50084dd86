//! Multi-dimensional FFT driver: a 1-D plan applied along every axis.

use num_complex::Complex;

use super::grid::Grid;
use crate::Scalar;

#[derive(Clone, Copy)]
enum Direction {
    Forward,
    Inverse,
}

fn transform_axes<T: Scalar>(grid: &Grid<T>, data: &mut [Complex<T>], dir: Direction) {
    let n = grid.points_per_axis();
    let dim = grid.dim();
    let plan = match dir {
        Direction::Forward => &grid.plans().forward,
        Direction::Inverse => &grid.plans().inverse,
    };
    let mut scratch = vec![Complex::new(T::zero(), T::zero()); plan.get_inplace_scratch_len()];

    // Last axis: lines are contiguous.
    plan.process_with_scratch(data, &mut scratch);

    // Remaining axes: gather a block of strided lines, transform, scatter back.
    for axis in (0..dim.saturating_sub(1)).rev() {
        let stride = n.pow((dim - 1 - axis) as u32);
        let block = n * stride;
        let mut lines = vec![Complex::new(T::zero(), T::zero()); block];
        for chunk in data.chunks_mut(block) {
            for i in 0..n {
                for inner in 0..stride {
                    lines[inner * n + i] = chunk[i * stride + inner];
                }
            }
            plan.process_with_scratch(&mut lines, &mut scratch);
            for i in 0..n {
                for inner in 0..stride {
                    chunk[i * stride + inner] = lines[inner * n + i];
                }
            }
        }
    }
}

/// In-place forward transform normalized so the zero mode is the grid mean.
pub(crate) fn forward_in_place<T: Scalar>(grid: &Grid<T>, data: &mut [Complex<T>]) {
    debug_assert_eq!(data.len(), grid.len());
    transform_axes(grid, data, Direction::Forward);
    let inv = T::one() / T::from_usize_lossy(grid.len());
    for c in data.iter_mut() {
        *c *= inv;
    }
}

/// In-place inverse transform: evaluates `Σ_k c_k e^{iξ_k·x}` at the grid points.
pub(crate) fn inverse_in_place<T: Scalar>(grid: &Grid<T>, data: &mut [Complex<T>]) {
    debug_assert_eq!(data.len(), grid.len());
    transform_axes(grid, data, Direction::Inverse);
}
