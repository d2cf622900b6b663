use super::evolve::evolve_system;
use super::set::{ConditionalSet, FieldSource};
use crate::error::Result;
use crate::scalar::Real;
use crate::tdse::{Potential1D, Propagator1D};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SwapStatus {
    Pass,
    Fail,
    /// Distinguishable particles carry no exchange symmetry.
    NotApplicable,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SwapReport<T> {
    pub status: SwapStatus,
    /// Largest |Δr| / max(|r|, 1 nm) over all recorded times.
    pub max_relative_deviation: T,
}

/// Evolves the configuration `positions` and the one with particles `j`
/// and `h` interchanged, and checks that the trajectories map onto each
/// other under the same interchange.
#[allow(clippy::too_many_arguments)]
pub fn swap_symmetry_check<T: Real>(
    build: impl Fn(Vec<T>) -> Result<ConditionalSet<T>>,
    positions: &[T],
    j: usize,
    h: usize,
    potential: &Potential1D<T>,
    prop: &Propagator1D<T>,
    n_steps: usize,
    tolerance: T,
) -> Result<SwapReport<T>> {
    let mut first = build(positions.to_vec())?;
    if !first.species().is_identical() {
        return Ok(SwapReport {
            status: SwapStatus::NotApplicable,
            max_relative_deviation: T::zero(),
        });
    }
    let mut swapped_x = positions.to_vec();
    swapped_x.swap(j, h);
    let mut second = build(swapped_x)?;
    let a = evolve_system(&mut first, potential, prop, n_steps)?;
    let b = evolve_system(&mut second, potential, prop, n_steps)?;
    let perm = |k: usize| {
        if k == j {
            h
        } else if k == h {
            j
        } else {
            k
        }
    };
    let mut worst = T::zero();
    for (ra, rb) in a.iter().zip(&b) {
        for k in 0..ra.positions.len() {
            let x = ra.positions[k];
            let y = rb.positions[perm(k)];
            worst = worst.max((x - y).abs() / x.abs().max(T::one()));
        }
    }
    Ok(SwapReport {
        status: if worst <= tolerance {
            SwapStatus::Pass
        } else {
            SwapStatus::Fail
        },
        max_relative_deviation: worst,
    })
}
