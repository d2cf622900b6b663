use num_complex::Complex;

use crate::error::{Error, Result};
use crate::grid::Grid1D;
use crate::interp::{Weights, STENCIL};
use crate::scalar::{Cplx, Real};

/// Value and first two derivatives of a field at one point.
#[derive(Clone, Copy, Debug)]
pub struct Jet<T> {
    pub value: Cplx<T>,
    pub d1: Cplx<T>,
    pub d2: Cplx<T>,
}

/// Complex amplitudes on a 1D grid.
#[derive(Clone, Debug, PartialEq)]
pub struct WaveField1D<T> {
    grid: Grid1D<T>,
    amps: Vec<Cplx<T>>,
    time: T,
}

impl<T: Real> WaveField1D<T> {
    pub fn zeros(grid: Grid1D<T>) -> Self {
        Self {
            grid,
            amps: vec![Complex::new(T::zero(), T::zero()); grid.n_points()],
            time: T::zero(),
        }
    }

    pub fn from_amplitudes(grid: Grid1D<T>, amps: Vec<Cplx<T>>, time: T) -> Result<Self> {
        if amps.len() != grid.n_points() {
            return Err(Error::ShapeMismatch(format!(
                "{} amplitudes for a {}-point grid",
                amps.len(),
                grid.n_points()
            )));
        }
        Ok(Self { grid, amps, time })
    }

    pub fn from_fn(grid: Grid1D<T>, time: T, f: impl Fn(T) -> Cplx<T>) -> Self {
        Self {
            grid,
            amps: grid.points().map(f).collect(),
            time,
        }
    }

    #[inline]
    pub fn grid(&self) -> &Grid1D<T> {
        &self.grid
    }
    #[inline]
    pub fn amplitudes(&self) -> &[Cplx<T>] {
        &self.amps
    }
    #[inline]
    pub fn amplitudes_mut(&mut self) -> &mut [Cplx<T>] {
        &mut self.amps
    }
    #[inline]
    pub fn time(&self) -> T {
        self.time
    }
    #[inline]
    pub fn set_time(&mut self, t: T) {
        self.time = t;
    }

    pub fn density(&self) -> Vec<T> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Trapezoid ∑|ψ|² dx.
    pub fn norm(&self) -> T {
        self.grid.integrate(&self.density())
    }

    pub fn scale(&mut self, s: Cplx<T>) {
        self.amps.iter_mut().for_each(|a| *a *= s);
    }

    /// Rescales to unit norm and returns the previous norm.
    pub fn normalize(&mut self) -> T {
        let n = self.norm();
        if n > T::zero() {
            let s = n.sqrt().recip();
            self.amps.iter_mut().for_each(|a| *a = *a * s);
        }
        n
    }

    pub fn max_abs(&self) -> T {
        self.amps.iter().fold(T::zero(), |m, a| m.max(a.norm_sqr())).sqrt()
    }

    /// ⟨x⟩ divided by the norm.
    pub fn mean_position(&self) -> T {
        let w: Vec<T> = self
            .grid
            .points()
            .zip(&self.amps)
            .map(|(x, a)| x * a.norm_sqr())
            .collect();
        self.grid.integrate(&w) / self.norm()
    }

    /// Position variance divided by the norm.
    pub fn position_variance(&self) -> T {
        let mean = self.mean_position();
        let w: Vec<T> = self
            .grid
            .points()
            .zip(&self.amps)
            .map(|(x, a)| (x - mean) * (x - mean) * a.norm_sqr())
            .collect();
        self.grid.integrate(&w) / self.norm()
    }

    /// Trapezoid ⟨self|other⟩.
    pub fn inner(&self, other: &Self) -> Cplx<T> {
        let n = self.amps.len();
        let mut acc = Complex::new(T::zero(), T::zero());
        for i in 0..n {
            acc += self.amps[i].conj() * other.amps[i] * self.grid.trapezoid_weight(i);
        }
        acc * self.grid.dx()
    }

    /// Interpolated value at `x` (clamped into the grid).
    pub fn value_at(&self, x: T) -> Cplx<T> {
        self.value_with(&Weights::at(&self.grid, self.grid.clamp(x)))
    }

    pub fn value_with(&self, w: &Weights<T>) -> Cplx<T> {
        let mut v = Complex::new(T::zero(), T::zero());
        for j in 0..STENCIL {
            v += self.amps[w.start + j] * w.value[j];
        }
        v
    }

    /// Interpolated value and derivatives at `x` (clamped into the grid).
    pub fn jet_at(&self, x: T) -> Jet<T> {
        self.jet_with(&Weights::at(&self.grid, self.grid.clamp(x)))
    }

    /// Value and derivatives from precomputed weights.
    pub fn jet_with(&self, w: &Weights<T>) -> Jet<T> {
        let zero = Complex::new(T::zero(), T::zero());
        let (mut v, mut d1, mut d2) = (zero, zero, zero);
        for j in 0..STENCIL {
            let a = self.amps[w.start + j];
            v += a * w.value[j];
            d1 += a * w.d1[j];
            d2 += a * w.d2[j];
        }
        Jet { value: v, d1, d2 }
    }

    pub fn all_finite(&self) -> bool {
        self.amps.iter().all(|a| a.re.is_finite() && a.im.is_finite())
    }
}

/// Partial derivatives of a two-coordinate field at one point.
#[derive(Clone, Copy, Debug)]
pub struct Jet2<T> {
    pub value: Cplx<T>,
    pub d1: Cplx<T>,
    pub d2: Cplx<T>,
    pub d11: Cplx<T>,
    pub d22: Cplx<T>,
}

impl<T: Real> Jet2<T> {
    /// Derivatives with respect to coordinate `j` (0 or 1) as a 1D jet.
    pub fn along(&self, j: usize) -> Jet<T> {
        match j {
            0 => Jet {
                value: self.value,
                d1: self.d1,
                d2: self.d11,
            },
            _ => Jet {
                value: self.value,
                d1: self.d2,
                d2: self.d22,
            },
        }
    }
}

/// Complex amplitudes on a tensor-product grid, stored row-major with the
/// second coordinate contiguous.
#[derive(Clone, Debug, PartialEq)]
pub struct WaveField2D<T> {
    grid_x1: Grid1D<T>,
    grid_x2: Grid1D<T>,
    amps: Vec<Cplx<T>>,
    time: T,
}

impl<T: Real> WaveField2D<T> {
    pub fn zeros(grid_x1: Grid1D<T>, grid_x2: Grid1D<T>) -> Self {
        Self {
            grid_x1,
            grid_x2,
            amps: vec![Complex::new(T::zero(), T::zero()); grid_x1.n_points() * grid_x2.n_points()],
            time: T::zero(),
        }
    }

    pub fn from_amplitudes(grid_x1: Grid1D<T>, grid_x2: Grid1D<T>, amps: Vec<Cplx<T>>, time: T) -> Result<Self> {
        if amps.len() != grid_x1.n_points() * grid_x2.n_points() {
            return Err(Error::ShapeMismatch(format!(
                "{} amplitudes for a {}x{} grid",
                amps.len(),
                grid_x1.n_points(),
                grid_x2.n_points()
            )));
        }
        Ok(Self {
            grid_x1,
            grid_x2,
            amps,
            time,
        })
    }

    /// Outer product ψ₁(x₁)ψ₂(x₂).
    pub fn product(a: &WaveField1D<T>, b: &WaveField1D<T>) -> Self {
        let n2 = b.grid().n_points();
        let mut amps = Vec::with_capacity(a.amplitudes().len() * n2);
        for &u in a.amplitudes() {
            amps.extend(b.amplitudes().iter().map(|&v| u * v));
        }
        Self {
            grid_x1: *a.grid(),
            grid_x2: *b.grid(),
            amps,
            time: a.time(),
        }
    }

    #[inline]
    pub fn grid_x1(&self) -> &Grid1D<T> {
        &self.grid_x1
    }
    #[inline]
    pub fn grid_x2(&self) -> &Grid1D<T> {
        &self.grid_x2
    }
    #[inline]
    pub fn amplitudes(&self) -> &[Cplx<T>] {
        &self.amps
    }
    #[inline]
    pub fn amplitudes_mut(&mut self) -> &mut [Cplx<T>] {
        &mut self.amps
    }
    #[inline]
    pub fn time(&self) -> T {
        self.time
    }
    #[inline]
    pub fn set_time(&mut self, t: T) {
        self.time = t;
    }
    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.grid_x1.n_points(), self.grid_x2.n_points())
    }
    #[inline]
    pub fn at(&self, i1: usize, i2: usize) -> Cplx<T> {
        self.amps[i1 * self.grid_x2.n_points() + i2]
    }

    /// Trapezoid integral of `f(|Ψ|², i1, i2)` over the grid.
    pub fn integrate_with(&self, f: impl Fn(T, usize, usize) -> T) -> T {
        let (n1, n2) = self.shape();
        let mut acc = T::zero();
        for i1 in 0..n1 {
            let w1 = self.grid_x1.trapezoid_weight(i1);
            let row = &self.amps[i1 * n2..(i1 + 1) * n2];
            let mut r = T::zero();
            for (i2, a) in row.iter().enumerate() {
                r += self.grid_x2.trapezoid_weight(i2) * f(a.norm_sqr(), i1, i2);
            }
            acc += w1 * r;
        }
        acc * self.grid_x1.dx() * self.grid_x2.dx()
    }

    pub fn norm(&self) -> T {
        self.integrate_with(|p, _, _| p)
    }

    pub fn normalize(&mut self) -> T {
        let n = self.norm();
        if n > T::zero() {
            let s = n.sqrt().recip();
            self.amps.iter_mut().for_each(|a| *a = *a * s);
        }
        n
    }

    pub fn max_abs(&self) -> T {
        self.amps.iter().fold(T::zero(), |m, a| m.max(a.norm_sqr())).sqrt()
    }

    /// ⟨x_j⟩ for coordinate `j` (0 or 1), divided by the norm.
    pub fn mean_position(&self, j: usize) -> T {
        let (g1, g2) = (self.grid_x1, self.grid_x2);
        let num = self.integrate_with(|p, i1, i2| p * if j == 0 { g1.x(i1) } else { g2.x(i2) });
        num / self.norm()
    }

    /// max |Ψ(x₁,x₂) − sign·Ψ(x₂,x₁)| over the grid. Requires equal grids.
    pub fn max_swap_defect(&self, sign: T) -> T {
        assert_eq!(self.grid_x1, self.grid_x2, "swap needs identical axes");
        let n = self.grid_x1.n_points();
        let mut m = T::zero();
        for i in 0..n {
            for j in 0..n {
                m = m.max((self.at(i, j) - self.at(j, i) * sign).norm());
            }
        }
        m
    }

    /// Max |Ψ(x,x)| along the diagonal. Requires equal grids.
    pub fn max_diagonal(&self) -> T {
        assert_eq!(self.grid_x1, self.grid_x2, "diagonal needs identical axes");
        (0..self.grid_x1.n_points()).fold(T::zero(), |m, i| m.max(self.at(i, i).norm()))
    }

    /// Interpolated value and partial derivatives at (x₁, x₂).
    pub fn jet_at(&self, x1: T, x2: T) -> Jet2<T> {
        let w1 = Weights::at(&self.grid_x1, self.grid_x1.clamp(x1));
        let w2 = Weights::at(&self.grid_x2, self.grid_x2.clamp(x2));
        let n2 = self.grid_x2.n_points();
        let zero = Complex::new(T::zero(), T::zero());
        let mut out = Jet2 {
            value: zero,
            d1: zero,
            d2: zero,
            d11: zero,
            d22: zero,
        };
        for a in 0..STENCIL {
            let row = &self.amps[(w1.start + a) * n2 + w2.start..][..STENCIL];
            let (mut r0, mut r1, mut r2) = (zero, zero, zero);
            for b in 0..STENCIL {
                r0 += row[b] * w2.value[b];
                r1 += row[b] * w2.d1[b];
                r2 += row[b] * w2.d2[b];
            }
            out.value += r0 * w1.value[a];
            out.d1 += r0 * w1.d1[a];
            out.d11 += r0 * w1.d2[a];
            out.d2 += r1 * w1.value[a];
            out.d22 += r2 * w1.value[a];
        }
        out
    }

    pub fn value_at(&self, x1: T, x2: T) -> Cplx<T> {
        self.jet_at(x1, x2).value
    }

    /// Slice Ψ(x, x₂) as a function of the first coordinate.
    pub fn slice_x1(&self, x2: T) -> WaveField1D<T> {
        let w2 = Weights::at(&self.grid_x2, self.grid_x2.clamp(x2));
        let n2 = self.grid_x2.n_points();
        let amps = (0..self.grid_x1.n_points())
            .map(|i| {
                let row = &self.amps[i * n2 + w2.start..][..STENCIL];
                (0..STENCIL).fold(Complex::new(T::zero(), T::zero()), |acc, b| acc + row[b] * w2.value[b])
            })
            .collect();
        WaveField1D::from_amplitudes(self.grid_x1, amps, self.time).expect("shape")
    }

    /// Slice Ψ(x₁, x) as a function of the second coordinate.
    pub fn slice_x2(&self, x1: T) -> WaveField1D<T> {
        let w1 = Weights::at(&self.grid_x1, self.grid_x1.clamp(x1));
        let n2 = self.grid_x2.n_points();
        let mut amps = vec![Complex::new(T::zero(), T::zero()); n2];
        for a in 0..STENCIL {
            let row = &self.amps[(w1.start + a) * n2..][..n2];
            for (o, &v) in amps.iter_mut().zip(row) {
                *o += v * w1.value[a];
            }
        }
        WaveField1D::from_amplitudes(self.grid_x2, amps, self.time).expect("shape")
    }

    pub fn all_finite(&self) -> bool {
        self.amps.iter().all(|a| a.re.is_finite() && a.im.is_finite())
    }
}
