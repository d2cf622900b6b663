use crate::error::{Error, Result};
use crate::field::{Jet, WaveField1D, WaveField2D};
use crate::scalar::Real;
use crate::units::UnitSystem;

/// Node threshold relative to the field maximum.
pub const NODE_FRACTION: f64 = 1e-6;

/// Velocity at one grid point, or a node flag.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FieldSample<T> {
    Value(T),
    Node,
}

impl<T: Copy> FieldSample<T> {
    pub fn value(&self) -> Option<T> {
        match self {
            FieldSample::Value(v) => Some(*v),
            FieldSample::Node => None,
        }
    }
}

#[inline]
pub fn node_threshold<T: Real>(max_abs: T) -> T {
    max_abs * T::lit(NODE_FRACTION)
}

/// (ħ/m) Im(ψ′/ψ) from a local jet.
#[inline]
pub fn local_velocity<T: Real>(jet: &Jet<T>, units: &UnitSystem<T>) -> T {
    let den = jet.value.norm_sqr();
    if den == T::zero() {
        return T::zero();
    }
    units.hbar_over_m() * (jet.value.conj() * jet.d1).im / den
}

/// ½mv² from a local jet.
#[inline]
pub fn local_kinetic<T: Real>(jet: &Jet<T>, units: &UnitSystem<T>) -> T {
    let den = jet.value.norm_sqr();
    if den == T::zero() {
        return T::zero();
    }
    let g = (jet.value.conj() * jet.d1).im / den;
    units.hbar2_over_m() * g * g * T::lit(0.5)
}

/// Velocity on every grid point from a fourth-order centred derivative
/// (second order on the two outermost points).
pub fn velocity_field<T: Real>(psi: &WaveField1D<T>, units: &UnitSystem<T>) -> Vec<FieldSample<T>> {
    let a = psi.amplitudes();
    let n = a.len();
    let dx = psi.grid().dx();
    let eps = node_threshold(psi.max_abs());
    (0..n)
        .map(|i| {
            if a[i].norm() <= eps {
                return FieldSample::Node;
            }
            let d = if i >= 2 && i + 2 < n {
                (a[i - 2] - a[i - 1] * T::lit(8.0) + a[i + 1] * T::lit(8.0) - a[i + 2]) / (dx * T::lit(12.0))
            } else if i >= 1 && i + 1 < n {
                (a[i + 1] - a[i - 1]) / (dx * T::lit(2.0))
            } else if i == 0 {
                (a[1] - a[0]) / dx
            } else {
                (a[i] - a[i - 1]) / dx
            };
            let jet = Jet {
                value: a[i],
                d1: d,
                d2: a[i] * T::zero(),
            };
            FieldSample::Value(local_velocity(&jet, units))
        })
        .collect()
}

fn q_from_three<T: Real>(r_lo: T, r: T, r_hi: T, h: T, units: &UnitSystem<T>) -> T {
    -units.hbar2_over_m() * T::lit(0.5) * (r_lo - r * T::lit(2.0) + r_hi) / (h * h * r)
}

/// −(ħ²/2m) R″/R at `x`, with R = |ψ| and a three-point difference of one
/// grid spacing.
pub fn quantum_potential<T: Real>(psi: &WaveField1D<T>, x: T, units: &UnitSystem<T>) -> Result<T> {
    quantum_potential_with_max(psi, x, psi.max_abs(), units)
}

/// As [`quantum_potential`] with the field maximum supplied by the caller.
pub fn quantum_potential_with_max<T: Real>(psi: &WaveField1D<T>, x: T, max_abs: T, units: &UnitSystem<T>) -> Result<T> {
    let r = psi.value_at(x).norm();
    if r <= node_threshold(max_abs) {
        return Err(Error::NodeRegion { x: x.to_f64_lossy() });
    }
    let h = psi.grid().dx();
    Ok(q_from_three(
        psi.value_at(x - h).norm(),
        r,
        psi.value_at(x + h).norm(),
        h,
        units,
    ))
}

/// Quantum potential of coordinate `j` of a two-coordinate field at (x₁, x₂).
pub fn quantum_potential_2d<T: Real>(
    psi: &WaveField2D<T>,
    x: [T; 2],
    j: usize,
    max_abs: T,
    units: &UnitSystem<T>,
) -> Result<T> {
    let r = psi.value_at(x[0], x[1]).norm();
    if r <= node_threshold(max_abs) {
        return Err(Error::NodeRegion { x: x[j].to_f64_lossy() });
    }
    let h = if j == 0 { psi.grid_x1().dx() } else { psi.grid_x2().dx() };
    let shifted = |s: T| {
        let mut y = x;
        y[j] += s;
        psi.value_at(y[0], y[1]).norm()
    };
    Ok(q_from_three(shifted(-h), r, shifted(h), h, units))
}

pub(crate) fn q_three_point<T: Real>(r_lo: T, r: T, r_hi: T, h: T, units: &UnitSystem<T>) -> T {
    q_from_three(r_lo, r, r_hi, h, units)
}
