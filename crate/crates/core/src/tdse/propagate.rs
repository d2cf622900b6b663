use num_complex::Complex;
use rayon::prelude::*;

use super::potential::{Potential1D, Potential2D};
use super::tridiag::ConstTridiag;
use crate::error::{Error, Result};
use crate::field::{WaveField1D, WaveField2D};
use crate::grid::Grid1D;
use crate::scalar::{cis, Cplx, Real};
use crate::units::UnitSystem;

/// Second-derivative discretization used by the propagator and by kinetic
/// expectation values.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Stencil {
    /// Three-point difference with the compact fourth-order mass matrix
    /// (1, 10, 1)/12; still tridiagonal.
    #[default]
    Compact,
    /// Plain three-point difference.
    ThreePoint,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Boundary<T> {
    /// Zero amplitude outside the grid.
    Hard,
    /// Quadratic complex absorbing layer of `width` nm reaching `strength`
    /// eV at the grid edge.
    Cap { strength: T, width: T },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PropagatorConfig<T> {
    /// Time step (fs).
    pub dt: T,
    pub boundary: Boundary<T>,
    pub stencil: Stencil,
}

impl<T: Real> PropagatorConfig<T> {
    pub fn new(dt: T) -> Self {
        Self {
            dt,
            boundary: Boundary::Hard,
            stencil: Stencil::Compact,
        }
    }

    pub fn with_boundary(mut self, boundary: Boundary<T>) -> Self {
        self.boundary = boundary;
        self
    }

    pub fn with_stencil(mut self, stencil: Stencil) -> Self {
        self.stencil = stencil;
        self
    }

    pub fn validate(&self, grid: &Grid1D<T>) -> Result<()> {
        if !(self.dt > T::zero()) || !self.dt.is_finite() {
            return Err(Error::InvalidInput(format!("dt must be positive, got {}", self.dt)));
        }
        if let Boundary::Cap { strength, width } = self.boundary {
            if width < T::lit(10.0) * grid.dx() {
                return Err(Error::InvalidInput(format!(
                    "absorbing layer width {width} nm is below 10 dx = {} nm",
                    T::lit(10.0) * grid.dx()
                )));
            }
            if !(strength >= T::zero()) || width * T::lit(2.0) > grid.len() {
                return Err(Error::InvalidInput(
                    "absorbing layer must have non-negative strength and fit in the grid".into(),
                ));
            }
        }
        Ok(())
    }
}

/// Mass-matrix and kinetic coefficients of one axis: (M + iβK)ψ' = (M − iβK)ψ.
#[derive(Clone, Debug)]
struct Axis<T> {
    lhs: ConstTridiag<T>,
    rd: Cplx<T>,
    ro: Cplx<T>,
}

impl<T: Real> Axis<T> {
    fn new(grid: &Grid1D<T>, dt: T, stencil: Stencil, units: &UnitSystem<T>) -> Self {
        let (md, mo) = match stencil {
            Stencil::Compact => (T::lit(10.0 / 12.0), T::lit(1.0 / 12.0)),
            Stencil::ThreePoint => (T::one(), T::zero()),
        };
        let beta = dt / (T::lit(2.0) * units.hbar);
        let kappa = units.hbar2_over_m() / (grid.dx() * grid.dx());
        let kd = beta * kappa;
        let ko = -beta * kappa * T::lit(0.5);
        Self {
            lhs: ConstTridiag::new(grid.n_points(), Complex::new(md, kd), Complex::new(mo, ko)),
            rd: Complex::new(md, -kd),
            ro: Complex::new(mo, -ko),
        }
    }

    #[inline]
    fn apply(&self, x: &mut [Cplx<T>]) {
        self.lhs.multiply_and_solve(self.rd, self.ro, x);
    }
}

fn cap_profile<T: Real>(grid: &Grid1D<T>, boundary: &Boundary<T>) -> Option<Vec<T>> {
    match *boundary {
        Boundary::Hard => None,
        Boundary::Cap { strength, width } => Some(
            grid.points()
                .map(|x| {
                    let d = (grid.x_min() + width - x).max(x - (grid.x_max() - width));
                    if d > T::zero() {
                        let s = d / width;
                        strength * s * s
                    } else {
                        T::zero()
                    }
                })
                .collect(),
        ),
    }
}

/// Half-step factors exp(−i V dt/(2ħ)) (times absorbing damping, if any).
pub fn phase_factors_1d<T: Real>(
    grid: &Grid1D<T>,
    v: &Potential1D<T>,
    t: T,
    others: &[T],
    dt: T,
    hbar: T,
) -> Vec<Cplx<T>> {
    let beta = dt / (T::lit(2.0) * hbar);
    let n = grid.n_points();
    if let Some(q) = v.as_quadratic(others) {
        if q.a == T::zero() && q.b == T::zero() {
            return vec![cis(-beta * q.c); n];
        }
        // Chirp recurrence, re-anchored periodically against drift.
        const ANCHOR: usize = 64;
        let dx = grid.dx();
        let h = cis(-T::lit(2.0) * beta * q.a * dx * dx);
        let mut out = Vec::with_capacity(n);
        let (mut f, mut g) = (Complex::new(T::one(), T::zero()), Complex::new(T::one(), T::zero()));
        for i in 0..n {
            if i % ANCHOR == 0 {
                let x = grid.x(i);
                f = cis(-beta * q.eval(x));
                g = cis(-beta * (q.a * (T::lit(2.0) * x * dx + dx * dx) + q.b * dx));
            }
            out.push(f);
            f *= g;
            g *= h;
        }
        return out;
    }
    grid.points().map(|x| cis(-beta * v.evaluate(x, t, others))).collect()
}

/// Crank–Nicolson propagator for one-coordinate fields with the potential
/// applied as symmetric half-step phases.
#[derive(Clone, Debug)]
pub struct Propagator1D<T> {
    grid: Grid1D<T>,
    cfg: PropagatorConfig<T>,
    units: UnitSystem<T>,
    axis: Axis<T>,
    damping: Option<Vec<T>>,
}

impl<T: Real> Propagator1D<T> {
    pub fn new(grid: Grid1D<T>, cfg: PropagatorConfig<T>, units: UnitSystem<T>) -> Result<Self> {
        cfg.validate(&grid)?;
        Ok(Self::build(grid, cfg, units))
    }

    fn build(grid: Grid1D<T>, cfg: PropagatorConfig<T>, units: UnitSystem<T>) -> Self {
        let axis = Axis::new(&grid, cfg.dt, cfg.stencil, &units);
        let beta = cfg.dt.abs() / (T::lit(2.0) * units.hbar);
        let damping = cap_profile(&grid, &cfg.boundary).map(|w| w.into_iter().map(|w| (-w * beta).exp()).collect());
        Self {
            grid,
            cfg,
            units,
            axis,
            damping,
        }
    }

    /// Propagator running backwards in time by the same step.
    pub fn reversed(&self) -> Self {
        let mut cfg = self.cfg;
        cfg.dt = -cfg.dt;
        Self::build(self.grid, cfg, self.units)
    }

    #[inline]
    pub fn dt(&self) -> T {
        self.cfg.dt
    }

    #[inline]
    pub fn grid(&self) -> &Grid1D<T> {
        &self.grid
    }

    #[inline]
    pub fn units(&self) -> &UnitSystem<T> {
        &self.units
    }

    #[inline]
    pub fn config(&self) -> &PropagatorConfig<T> {
        &self.cfg
    }

    /// Half-step factors for `v` with the others frozen at `others`.
    pub fn factors(&self, v: &Potential1D<T>, t: T, others: &[T]) -> Vec<Cplx<T>> {
        let mut f = phase_factors_1d(&self.grid, v, t, others, self.cfg.dt, self.units.hbar);
        if let Some(d) = &self.damping {
            f.iter_mut().zip(d).for_each(|(f, &d)| *f = *f * d);
        }
        f
    }

    /// Advances by one step using precomputed half-step factors.
    pub fn step_with_factors(&self, psi: &mut WaveField1D<T>, factors: &[Cplx<T>]) -> Result<()> {
        let t = psi.time();
        let amps = psi.amplitudes_mut();
        amps.iter_mut().zip(factors).for_each(|(a, f)| *a *= *f);
        self.axis.apply(amps);
        amps.iter_mut().zip(factors).for_each(|(a, f)| *a *= *f);
        psi.set_time(t + self.cfg.dt);
        if !psi.all_finite() {
            return Err(Error::NonFiniteAmplitude {
                time: psi.time().to_f64_lossy(),
            });
        }
        Ok(())
    }

    pub fn step(&self, psi: &mut WaveField1D<T>, v: &Potential1D<T>, others: &[T]) -> Result<()> {
        let f = self.factors(v, psi.time(), others);
        self.step_with_factors(psi, &f)
    }
}

/// One step of a one-coordinate field; `others` are the other particles'
/// positions at the start of the step.
pub fn step_1d<T: Real>(
    psi: &mut WaveField1D<T>,
    v: &Potential1D<T>,
    cfg: &PropagatorConfig<T>,
    units: &UnitSystem<T>,
    others: &[T],
) -> Result<()> {
    Propagator1D::new(*psi.grid(), *cfg, *units)?.step(psi, v, others)
}

/// Alternating-direction Crank–Nicolson for two-coordinate fields.
#[derive(Clone, Debug)]
pub struct Propagator2D<T> {
    g1: Grid1D<T>,
    g2: Grid1D<T>,
    cfg: PropagatorConfig<T>,
    units: UnitSystem<T>,
    potential: Potential2D<T>,
    ax1: Axis<T>,
    ax2: Axis<T>,
    damping1: Option<Vec<T>>,
    damping2: Option<Vec<T>>,
    cached: Option<Vec<Cplx<T>>>,
}

impl<T: Real> Propagator2D<T> {
    pub fn new(
        g1: Grid1D<T>,
        g2: Grid1D<T>,
        cfg: PropagatorConfig<T>,
        units: UnitSystem<T>,
        potential: Potential2D<T>,
    ) -> Result<Self> {
        cfg.validate(&g1)?;
        cfg.validate(&g2)?;
        Ok(Self::build(g1, g2, cfg, units, potential))
    }

    fn build(
        g1: Grid1D<T>,
        g2: Grid1D<T>,
        cfg: PropagatorConfig<T>,
        units: UnitSystem<T>,
        potential: Potential2D<T>,
    ) -> Self {
        let beta = cfg.dt.abs() / (T::lit(2.0) * units.hbar);
        let damp =
            |g: &Grid1D<T>| cap_profile(g, &cfg.boundary).map(|w| w.into_iter().map(|w| (-w * beta).exp()).collect());
        let mut p = Self {
            ax1: Axis::new(&g1, cfg.dt, cfg.stencil, &units),
            ax2: Axis::new(&g2, cfg.dt, cfg.stencil, &units),
            damping1: damp(&g1),
            damping2: damp(&g2),
            g1,
            g2,
            cfg,
            units,
            potential,
            cached: None,
        };
        if p.potential.is_time_independent() {
            p.cached = Some(p.compute_factors(T::zero()));
        }
        p
    }

    pub fn reversed(&self) -> Self {
        let mut cfg = self.cfg;
        cfg.dt = -cfg.dt;
        Self::build(self.g1, self.g2, cfg, self.units, self.potential.clone())
    }

    #[inline]
    pub fn dt(&self) -> T {
        self.cfg.dt
    }

    #[inline]
    pub fn potential(&self) -> &Potential2D<T> {
        &self.potential
    }

    fn compute_factors(&self, t: T) -> Vec<Cplx<T>> {
        let beta = self.cfg.dt / (T::lit(2.0) * self.units.hbar);
        let n2 = self.g2.n_points();
        let mut out = vec![Complex::new(T::zero(), T::zero()); self.g1.n_points() * n2];
        out.par_chunks_mut(n2).enumerate().for_each(|(i, row)| {
            let x1 = self.g1.x(i);
            let d1 = self.damping1.as_ref().map_or(T::one(), |d| d[i]);
            for (j, o) in row.iter_mut().enumerate() {
                let d2 = self.damping2.as_ref().map_or(T::one(), |d| d[j]);
                *o = cis(-beta * self.potential.evaluate(x1, self.g2.x(j), t)) * (d1 * d2);
            }
        });
        out
    }

    pub fn step(&self, psi: &mut WaveField2D<T>) -> Result<()> {
        let (n1, n2) = psi.shape();
        if n1 != self.g1.n_points() || n2 != self.g2.n_points() {
            return Err(Error::ShapeMismatch("field does not match propagator grids".into()));
        }
        let t = psi.time();
        let owned;
        let factors: &[Cplx<T>] = match &self.cached {
            Some(f) => f,
            None => {
                owned = self.compute_factors(t);
                &owned
            }
        };
        let amps = psi.amplitudes_mut();
        amps.iter_mut().zip(factors).for_each(|(a, f)| *a *= *f);
        self.sweep_x1(amps, n1, n2);
        amps.par_chunks_mut(n2).for_each(|row| self.ax2.apply(row));
        amps.iter_mut().zip(factors).for_each(|(a, f)| *a *= *f);
        psi.set_time(t + self.cfg.dt);
        if !psi.all_finite() {
            return Err(Error::NonFiniteAmplitude {
                time: psi.time().to_f64_lossy(),
            });
        }
        Ok(())
    }

    // Tridiagonal solve along the strided axis, processing whole rows.
    fn sweep_x1(&self, amps: &mut [Cplx<T>], n1: usize, n2: usize) {
        let zero = Complex::new(T::zero(), T::zero());
        let (rd, ro) = (self.ax1.rd, self.ax1.ro);
        let off = self.ax1.lhs.off();
        let mut orig_prev = vec![zero; n2];
        let mut orig_cur = vec![zero; n2];
        for i in 0..n1 {
            let (_, inv_m) = self.ax1.lhs.forward_coeff(i);
            let (head, tail) = amps.split_at_mut(i * n2);
            let (cur, rest) = tail.split_at_mut(n2);
            orig_cur.copy_from_slice(cur);
            let next = if i + 1 < n1 { Some(&rest[..n2]) } else { None };
            let dprev = if i > 0 { Some(&head[(i - 1) * n2..]) } else { None };
            for j in 0..n2 {
                let nx = next.map_or(zero, |r| r[j]);
                let r = rd * orig_cur[j] + ro * (orig_prev[j] + nx);
                let dp = dprev.map_or(zero, |r| r[j]);
                cur[j] = (r - off * dp) * inv_m;
            }
            std::mem::swap(&mut orig_prev, &mut orig_cur);
        }
        for i in (0..n1 - 1).rev() {
            let (cp, _) = self.ax1.lhs.forward_coeff(i);
            let (head, tail) = amps.split_at_mut((i + 1) * n2);
            let cur = &mut head[i * n2..];
            let next = &tail[..n2];
            for j in 0..n2 {
                cur[j] -= cp * next[j];
            }
        }
    }
}

/// One step of a two-coordinate field.
pub fn step_2d<T: Real>(
    psi: &mut WaveField2D<T>,
    v: &Potential2D<T>,
    cfg: &PropagatorConfig<T>,
    units: &UnitSystem<T>,
) -> Result<()> {
    Propagator2D::new(*psi.grid_x1(), *psi.grid_x2(), *cfg, *units, v.clone())?.step(psi)
}
