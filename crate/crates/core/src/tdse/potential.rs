use std::fmt;
use std::sync::Arc;

use crate::scalar::Real;
use crate::units::COULOMB_EV_NM;

/// Potential energy seen by one particle, given the positions of the others.
#[derive(Clone, Debug, PartialEq)]
pub enum Potential1D<T> {
    Free,
    /// Uniform offset (eV).
    Constant(T),
    /// c·(x − x_other)² summed over the other particles; c in eV/nm².
    HarmonicPair {
        c: T,
    },
    /// Softened Coulomb repulsion e²/(4πε₀ε_r √((x − x_other)² + α²)).
    CoulombSoft {
        alpha: T,
        eps_r: T,
    },
    /// Applied bias (V) dropping linearly across [0, length].
    LinearRamp {
        bias: T,
        length: T,
    },
    Sum(Vec<Potential1D<T>>),
}

/// Coefficients of a potential a·x² + b·x + c.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quadratic<T> {
    pub a: T,
    pub b: T,
    pub c: T,
}

impl<T: Real> Quadratic<T> {
    fn zero() -> Self {
        Self {
            a: T::zero(),
            b: T::zero(),
            c: T::zero(),
        }
    }

    #[inline]
    pub fn eval(&self, x: T) -> T {
        (self.a * x + self.b) * x + self.c
    }
}

impl<T: Real> Potential1D<T> {
    /// Softened Coulomb with the default softening of two grid spacings.
    pub fn coulomb_for_grid(eps_r: T, dx: T) -> Self {
        Potential1D::CoulombSoft {
            alpha: T::lit(2.0) * dx,
            eps_r,
        }
    }

    /// Single-particle part at `x`.
    pub fn external(&self, x: T) -> T {
        match self {
            Potential1D::Constant(v) => *v,
            Potential1D::LinearRamp { bias, length } => {
                let s = (x / *length).max(T::zero()).min(T::one());
                -*bias * s
            }
            Potential1D::Sum(parts) => parts.iter().map(|p| p.external(x)).sum(),
            _ => T::zero(),
        }
    }

    /// Interaction energy of one pair separated by `d`.
    pub fn pair(&self, d: T) -> T {
        match self {
            Potential1D::HarmonicPair { c } => *c * d * d,
            Potential1D::CoulombSoft { alpha, eps_r } => {
                T::lit(COULOMB_EV_NM) / (*eps_r * (d * d + *alpha * *alpha).sqrt())
            }
            Potential1D::Sum(parts) => parts.iter().map(|p| p.pair(d)).sum(),
            _ => T::zero(),
        }
    }

    pub fn has_pair_terms(&self) -> bool {
        match self {
            Potential1D::HarmonicPair { .. } | Potential1D::CoulombSoft { .. } => true,
            Potential1D::Sum(parts) => parts.iter().any(|p| p.has_pair_terms()),
            _ => false,
        }
    }

    /// Energy at `x` with the other particles at `others`. Time is accepted
    /// for interface completeness; none of the built-in kinds depend on it.
    pub fn evaluate(&self, x: T, _t: T, others: &[T]) -> T {
        let mut v = self.external(x);
        if self.has_pair_terms() {
            for &o in others {
                v += self.pair(x - o);
            }
        }
        v
    }

    /// Potential energy of a full configuration: external terms of every
    /// particle plus each pair once.
    pub fn configuration_energy(&self, xs: &[T]) -> T {
        let mut v: T = xs.iter().map(|&x| self.external(x)).sum();
        if self.has_pair_terms() {
            for i in 0..xs.len() {
                for j in i + 1..xs.len() {
                    v += self.pair(xs[i] - xs[j]);
                }
            }
        }
        v
    }

    /// Quadratic form of the potential for the given context, if it has one.
    pub fn as_quadratic(&self, others: &[T]) -> Option<Quadratic<T>> {
        match self {
            Potential1D::Free => Some(Quadratic::zero()),
            Potential1D::Constant(v) => Some(Quadratic {
                c: *v,
                ..Quadratic::zero()
            }),
            Potential1D::HarmonicPair { c } => {
                let n = T::from_usize_lossy(others.len());
                let s: T = others.iter().copied().sum();
                let s2: T = others.iter().map(|&o| o * o).sum();
                Some(Quadratic {
                    a: *c * n,
                    b: -T::lit(2.0) * *c * s,
                    c: *c * s2,
                })
            }
            Potential1D::Sum(parts) => parts.iter().try_fold(Quadratic::zero(), |acc, p| {
                p.as_quadratic(others).map(|q| Quadratic {
                    a: acc.a + q.a,
                    b: acc.b + q.b,
                    c: acc.c + q.c,
                })
            }),
            _ => None,
        }
    }

    /// Whether the potential depends on the other particles' positions.
    pub fn is_context_free(&self) -> bool {
        !self.has_pair_terms()
    }
}

type Custom2D<T> = Arc<dyn Fn(T, T, T) -> T + Send + Sync>;

/// Potential energy on the two-coordinate configuration space.
#[derive(Clone)]
pub enum Potential2D<T> {
    /// V₁(x₁) + V₂(x₂) from the external parts of two 1D potentials.
    Separable(Potential1D<T>, Potential1D<T>),
    /// External part of `v` for both particles plus its pair term.
    Pair(Potential1D<T>),
    Custom {
        f: Custom2D<T>,
        time_independent: bool,
        symmetric: bool,
    },
}

impl<T: fmt::Debug> fmt::Debug for Potential2D<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Potential2D::Separable(a, b) => f.debug_tuple("Separable").field(a).field(b).finish(),
            Potential2D::Pair(v) => f.debug_tuple("Pair").field(v).finish(),
            Potential2D::Custom {
                time_independent,
                symmetric,
                ..
            } => f
                .debug_struct("Custom")
                .field("time_independent", time_independent)
                .field("symmetric", symmetric)
                .finish(),
        }
    }
}

impl<T: Real> Potential2D<T> {
    pub fn evaluate(&self, x1: T, x2: T, t: T) -> T {
        match self {
            Potential2D::Separable(a, b) => a.external(x1) + b.external(x2),
            Potential2D::Pair(v) => v.external(x1) + v.external(x2) + v.pair(x1 - x2),
            Potential2D::Custom { f, .. } => f(x1, x2, t),
        }
    }

    pub fn is_time_independent(&self) -> bool {
        match self {
            Potential2D::Custom { time_independent, .. } => *time_independent,
            _ => true,
        }
    }

    /// Invariant under exchange of the two coordinates.
    pub fn is_symmetric(&self) -> bool {
        match self {
            Potential2D::Separable(a, b) => a == b,
            Potential2D::Pair(_) => true,
            Potential2D::Custom { symmetric, .. } => *symmetric,
        }
    }
}
