//! Six-point Lagrange interpolation on uniform grids.

use crate::grid::Grid1D;
use crate::scalar::Real;

pub const STENCIL: usize = 6;

/// Interpolation weights for value, first and second derivative at one point.
#[derive(Clone, Copy, Debug)]
pub struct Weights<T> {
    pub start: usize,
    pub value: [T; STENCIL],
    pub d1: [T; STENCIL],
    pub d2: [T; STENCIL],
}

impl<T: Real> Weights<T> {
    pub fn at(grid: &Grid1D<T>, x: T) -> Self {
        let n = grid.n_points();
        let s = (x - grid.x_min()) / grid.dx();
        let cell = s.floor().max(T::zero()).to_usize().unwrap_or(0).min(n - 2);
        let start = cell.saturating_sub(STENCIL / 2 - 1).min(n - STENCIL);
        let u = s - T::from_usize_lossy(start);
        let inv_dx = grid.dx().recip();

        let mut value = [T::zero(); STENCIL];
        let mut d1 = [T::zero(); STENCIL];
        let mut d2 = [T::zero(); STENCIL];
        for j in 0..STENCIL {
            // Product rule over linear factors keeps this finite at the nodes.
            let (mut p, mut dp, mut ddp) = (T::one(), T::zero(), T::zero());
            for m in 0..STENCIL {
                if m == j {
                    continue;
                }
                let den = (T::from_usize_lossy(j) - T::from_usize_lossy(m)).recip();
                let f = (u - T::from_usize_lossy(m)) * den;
                ddp = ddp * f + T::lit(2.0) * dp * den;
                dp = dp * f + p * den;
                p *= f;
            }
            value[j] = p;
            d1[j] = dp * inv_dx;
            d2[j] = ddp * inv_dx * inv_dx;
        }
        Self { start, value, d1, d2 }
    }
}
