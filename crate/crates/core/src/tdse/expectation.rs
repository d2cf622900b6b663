use num_complex::Complex;

use super::potential::{Potential1D, Potential2D};
use super::propagate::Stencil;
use super::tridiag::ConstTridiag;
use crate::error::{Error, Result};
use crate::field::{WaveField1D, WaveField2D};
use crate::grid::Grid1D;
use crate::sampling::NORM_TOLERANCE;
use crate::scalar::{Cplx, Real};
use crate::units::UnitSystem;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Observable {
    /// Kinetic energy of coordinate `j`.
    Kinetic(usize),
    Potential,
    /// Total energy.
    Hamiltonian,
    /// Position of coordinate `j`.
    Position(usize),
}

fn check_normalized<T: Real>(norm: T) -> Result<()> {
    if (norm - T::one()).abs() > T::lit(NORM_TOLERANCE) {
        return Err(Error::NotNormalized {
            norm: norm.to_f64_lossy(),
        });
    }
    Ok(())
}

// Discrete Laplacian of one line (zero outside).
fn laplacian_line<T: Real>(line: &[Cplx<T>], grid: &Grid1D<T>, stencil: Stencil) -> Vec<Cplx<T>> {
    let n = line.len();
    let zero = Complex::new(T::zero(), T::zero());
    let inv = (grid.dx() * grid.dx()).recip();
    let mut out: Vec<Cplx<T>> = (0..n)
        .map(|i| {
            let l = if i > 0 { line[i - 1] } else { zero };
            let r = if i + 1 < n { line[i + 1] } else { zero };
            (l + r - line[i] * T::lit(2.0)) * inv
        })
        .collect();
    if stencil == Stencil::Compact {
        ConstTridiag::new(
            n,
            Complex::new(T::lit(10.0 / 12.0), T::zero()),
            Complex::new(T::lit(1.0 / 12.0), T::zero()),
        )
        .solve(&mut out);
    }
    out
}

fn weighted_dot<T: Real>(a: &[Cplx<T>], b: &[Cplx<T>], grid: &Grid1D<T>) -> Cplx<T> {
    let mut acc = Complex::new(T::zero(), T::zero());
    for i in 0..a.len() {
        acc += a[i].conj() * b[i] * grid.trapezoid_weight(i);
    }
    acc * grid.dx()
}

/// ⟨ψ|−(ħ²/2m)∂²|ψ⟩ without the normalization check.
pub fn kinetic_energy_1d<T: Real>(psi: &WaveField1D<T>, stencil: Stencil, units: &UnitSystem<T>) -> T {
    let lap = laplacian_line(psi.amplitudes(), psi.grid(), stencil);
    -weighted_dot(psi.amplitudes(), &lap, psi.grid()).re * units.hbar2_over_m() * T::lit(0.5)
}

pub fn expectation_1d<T: Real>(
    psi: &WaveField1D<T>,
    obs: Observable,
    v: &Potential1D<T>,
    others: &[T],
    stencil: Stencil,
    units: &UnitSystem<T>,
) -> Result<T> {
    check_normalized(psi.norm())?;
    let potential = || {
        let w: Vec<T> = psi
            .grid()
            .points()
            .zip(psi.amplitudes())
            .map(|(x, a)| v.evaluate(x, psi.time(), others) * a.norm_sqr())
            .collect();
        psi.grid().integrate(&w)
    };
    match obs {
        Observable::Kinetic(_) => Ok(kinetic_energy_1d(psi, stencil, units)),
        Observable::Potential => Ok(potential()),
        Observable::Hamiltonian => Ok(kinetic_energy_1d(psi, stencil, units) + potential()),
        Observable::Position(_) => Ok(psi.mean_position()),
    }
}

fn kinetic_2d<T: Real>(psi: &WaveField2D<T>, axis: usize, stencil: Stencil, units: &UnitSystem<T>) -> T {
    let (n1, n2) = psi.shape();
    let amps = psi.amplitudes();
    let mut acc = T::zero();
    if axis == 0 {
        let g = psi.grid_x1();
        let mut col = vec![Complex::new(T::zero(), T::zero()); n1];
        for j in 0..n2 {
            for i in 0..n1 {
                col[i] = amps[i * n2 + j];
            }
            let lap = laplacian_line(&col, g, stencil);
            acc += weighted_dot(&col, &lap, g).re * psi.grid_x2().trapezoid_weight(j);
        }
        acc *= psi.grid_x2().dx();
    } else {
        let g = psi.grid_x2();
        for i in 0..n1 {
            let row = &amps[i * n2..(i + 1) * n2];
            let lap = laplacian_line(row, g, stencil);
            acc += weighted_dot(row, &lap, g).re * psi.grid_x1().trapezoid_weight(i);
        }
        acc *= psi.grid_x1().dx();
    }
    -acc * units.hbar2_over_m() * T::lit(0.5)
}

pub fn expectation_2d<T: Real>(
    psi: &WaveField2D<T>,
    obs: Observable,
    v: &Potential2D<T>,
    stencil: Stencil,
    units: &UnitSystem<T>,
) -> Result<T> {
    check_normalized(psi.norm())?;
    let (g1, g2, t) = (*psi.grid_x1(), *psi.grid_x2(), psi.time());
    let potential = || psi.integrate_with(|p, i, j| p * v.evaluate(g1.x(i), g2.x(j), t));
    match obs {
        Observable::Kinetic(j) => {
            if j > 1 {
                return Err(Error::InvalidInput(format!("coordinate {j} out of range")));
            }
            Ok(kinetic_2d(psi, j, stencil, units))
        }
        Observable::Potential => Ok(potential()),
        Observable::Hamiltonian => {
            Ok(kinetic_2d(psi, 0, stencil, units) + kinetic_2d(psi, 1, stencil, units) + potential())
        }
        Observable::Position(j) => {
            if j > 1 {
                return Err(Error::InvalidInput(format!("coordinate {j} out of range")));
            }
            Ok(psi.mean_position(j))
        }
    }
}
