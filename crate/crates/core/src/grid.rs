use crate::error::{Error, Result};
use crate::scalar::Real;

/// Uniform grid including both end points.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid1D<T> {
    x_min: T,
    x_max: T,
    n_points: usize,
    dx: T,
}

impl<T: Real> Grid1D<T> {
    pub const MIN_POINTS: usize = 16;

    pub fn new(x_min: T, x_max: T, n_points: usize) -> Result<Self> {
        if !(x_max > x_min) || !x_min.is_finite() || !x_max.is_finite() {
            return Err(Error::InvalidGrid(format!(
                "x_max ({x_max}) must exceed x_min ({x_min})"
            )));
        }
        if n_points < Self::MIN_POINTS {
            return Err(Error::InvalidGrid(format!(
                "n_points = {n_points} is below the minimum of {}",
                Self::MIN_POINTS
            )));
        }
        let dx = (x_max - x_min) / T::from_usize_lossy(n_points - 1);
        Ok(Self {
            x_min,
            x_max,
            n_points,
            dx,
        })
    }

    /// Grid covering `[x_min, x_max]` with spacing no larger than `dx_max`.
    pub fn with_spacing(x_min: T, x_max: T, dx_max: T) -> Result<Self> {
        let cells = ((x_max - x_min) / dx_max).ceil().to_usize().unwrap_or(0);
        Self::new(x_min, x_max, cells.max(Self::MIN_POINTS - 1) + 1)
    }

    #[inline]
    pub fn x_min(&self) -> T {
        self.x_min
    }
    #[inline]
    pub fn x_max(&self) -> T {
        self.x_max
    }
    #[inline]
    pub fn n_points(&self) -> usize {
        self.n_points
    }
    #[inline]
    pub fn dx(&self) -> T {
        self.dx
    }
    #[inline]
    pub fn len(&self) -> T {
        self.x_max - self.x_min
    }

    #[inline]
    pub fn x(&self, i: usize) -> T {
        self.x_min + self.dx * T::from_usize_lossy(i)
    }

    pub fn points(&self) -> impl Iterator<Item = T> + '_ {
        (0..self.n_points).map(move |i| self.x(i))
    }

    #[inline]
    pub fn contains(&self, x: T) -> bool {
        x >= self.x_min && x <= self.x_max
    }

    #[inline]
    pub fn clamp(&self, x: T) -> T {
        x.max(self.x_min).min(self.x_max)
    }

    /// Index of the nearest grid point (clamped).
    pub fn nearest(&self, x: T) -> usize {
        let s = ((x - self.x_min) / self.dx).round();
        s.max(T::zero()).to_usize().unwrap_or(0).min(self.n_points - 1)
    }

    /// Trapezoid weight (in units of `dx`) of point `i`.
    #[inline]
    pub fn trapezoid_weight(&self, i: usize) -> T {
        if i == 0 || i + 1 == self.n_points {
            T::lit(0.5)
        } else {
            T::one()
        }
    }

    /// Trapezoid rule over samples of length `n_points`.
    pub fn integrate(&self, values: &[T]) -> T {
        debug_assert_eq!(values.len(), self.n_points);
        let n = values.len();
        let inner: T = values[1..n - 1].iter().copied().sum();
        (inner + T::lit(0.5) * (values[0] + values[n - 1])) * self.dx
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spacing_is_exact() {
        let g = Grid1D::<f64>::new(-400.0, 400.0, 2048).unwrap();
        assert_eq!(g.dx(), 800.0 / 2047.0);
        assert_eq!(g.x(0), -400.0);
        assert!((g.x(2047) - 400.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(Grid1D::<f64>::new(1.0, 0.0, 64).is_err());
        assert!(Grid1D::<f64>::new(0.0, 1.0, 15).is_err());
        assert!(Grid1D::<f64>::new(0.0, 1.0, 16).is_ok());
    }

    #[test]
    fn trapezoid_of_linear_is_exact() {
        let g = Grid1D::<f64>::new(0.0, 2.0, 33).unwrap();
        let v: Vec<f64> = g.points().map(|x| 3.0 * x + 1.0).collect();
        assert!((g.integrate(&v) - 8.0).abs() < 1e-12);
    }
}
