//! Bilinear sampling shared by polar resampling, rotation and upsampling.

use crate::grid::Grid;
use crate::scalar::Scalar;

/// Samples `g` at column `x`, row `y`.
///
/// Positions outside `[0, W-1] x [0, H-1]` read as zero. Integer positions
/// return the stored value bit-for-bit.
#[inline]
pub fn bilinear_or_zero<T: Scalar>(g: &Grid<T>, x: T, y: T) -> T {
    let max_x = T::of_usize(g.width() - 1);
    let max_y = T::of_usize(g.height() - 1);
    // written so that NaN coordinates fall through to zero
    if !(x >= T::zero() && y >= T::zero() && x <= max_x && y <= max_y) {
        return T::zero();
    }
    bilinear_inside(g, x, y)
}

/// Samples `g` at `(x, y)` after clamping the position onto the grid.
#[inline]
pub fn bilinear_clamped<T: Scalar>(g: &Grid<T>, x: T, y: T) -> T {
    let max_x = T::of_usize(g.width() - 1);
    let max_y = T::of_usize(g.height() - 1);
    bilinear_inside(g, x.max(T::zero()).min(max_x), y.max(T::zero()).min(max_y))
}

#[inline]
fn bilinear_inside<T: Scalar>(g: &Grid<T>, x: T, y: T) -> T {
    let x0 = x.floor();
    let y0 = y.floor();
    let fx = x - x0;
    let fy = y - y0;
    let c0 = x0.to_usize().unwrap_or(0);
    let r0 = y0.to_usize().unwrap_or(0);
    if fx == T::zero() && fy == T::zero() {
        return g.get(r0, c0);
    }
    let c1 = (c0 + 1).min(g.width() - 1);
    let r1 = (r0 + 1).min(g.height() - 1);
    // lerp form keeps constant neighbourhoods exact
    let top = g.get(r0, c0) + fx * (g.get(r0, c1) - g.get(r0, c0));
    let bottom = g.get(r1, c0) + fx * (g.get(r1, c1) - g.get(r1, c0));
    top + fy * (bottom - top)
}
