//! Quantum-equilibrium sampling of initial positions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::field::{WaveField1D, WaveField2D};
use crate::grid::Grid1D;
use crate::scalar::Real;

/// Allowed deviation of the norm from one before sampling.
pub const NORM_TOLERANCE: f64 = 1e-6;
/// Metropolis burn-in steps per walker.
pub const METROPOLIS_BURN_IN: usize = 1000;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

// Solves ∫₀ˢ (b + 2a u) du = r on a cell with linearly varying density.
fn invert_linear_cell<T: Real>(p_lo: T, p_hi: T, dx: T, r: T) -> T {
    let a = (p_hi - p_lo) / (T::lit(2.0) * dx);
    let b = p_lo;
    let s = if a.abs() * dx <= T::lit(1e-12) * b.abs() {
        if b > T::zero() {
            r / b
        } else {
            T::zero()
        }
    } else {
        let disc = (b * b + T::lit(4.0) * a * r).max(T::zero());
        let den = b + disc.sqrt();
        if den > T::zero() {
            T::lit(2.0) * r / den
        } else {
            T::zero()
        }
    };
    s.max(T::zero()).min(dx)
}

/// Cumulative distribution of a piecewise-linear density on a grid.
#[derive(Clone, Debug)]
pub struct PiecewiseLinearCdf<T> {
    grid: Grid1D<T>,
    density: Vec<T>,
    cumulative: Vec<T>,
}

impl<T: Real> PiecewiseLinearCdf<T> {
    pub fn new(grid: Grid1D<T>, density: Vec<T>) -> Self {
        assert_eq!(density.len(), grid.n_points());
        let mut cumulative = Vec::with_capacity(density.len());
        let mut acc = T::zero();
        cumulative.push(acc);
        let half_dx = grid.dx() * T::lit(0.5);
        for w in density.windows(2) {
            acc += (w[0] + w[1]) * half_dx;
            cumulative.push(acc);
        }
        Self {
            grid,
            density,
            cumulative,
        }
    }

    pub fn total(&self) -> T {
        *self.cumulative.last().expect("non-empty")
    }

    /// CDF value (unnormalized) at `x`.
    pub fn cdf(&self, x: T) -> T {
        let g = &self.grid;
        if x <= g.x_min() {
            return T::zero();
        }
        if x >= g.x_max() {
            return self.total();
        }
        let s = (x - g.x_min()) / g.dx();
        let i = s.floor().to_usize().unwrap_or(0).min(g.n_points() - 2);
        let u = x - g.x(i);
        let slope = (self.density[i + 1] - self.density[i]) / g.dx();
        self.cumulative[i] + self.density[i] * u + slope * u * u * T::lit(0.5)
    }

    /// Position where the CDF equals `q · total`, `q` in [0, 1).
    pub fn quantile(&self, q: T) -> T {
        let target = q * self.total();
        let n = self.cumulative.len();
        let i = self
            .cumulative
            .partition_point(|&c| c <= target)
            .saturating_sub(1)
            .min(n - 2);
        let r = target - self.cumulative[i];
        self.grid.x(i) + invert_linear_cell(self.density[i], self.density[i + 1], self.grid.dx(), r)
    }
}

/// Types whose |ψ|² can be sampled.
pub trait QuantumEquilibrium<T> {
    type Point;
    fn sample_positions(&self, m: usize, seed: u64) -> Result<Vec<Self::Point>>;
}

fn check_norm<T: Real>(norm: T) -> Result<()> {
    if (norm - T::one()).abs() > T::lit(NORM_TOLERANCE) {
        return Err(Error::NotNormalized {
            norm: norm.to_f64_lossy(),
        });
    }
    Ok(())
}

impl<T: Real> QuantumEquilibrium<T> for WaveField1D<T> {
    type Point = T;

    fn sample_positions(&self, m: usize, seed: u64) -> Result<Vec<T>> {
        check_norm(self.norm())?;
        let cdf = PiecewiseLinearCdf::new(*self.grid(), self.density());
        let mut rng = rng_from_seed(seed);
        Ok((0..m).map(|_| cdf.quantile(T::lit(rng.gen::<f64>()))).collect())
    }
}

/// Marginal-then-conditional sampler for a two-coordinate density.
pub struct Sampler2D<T> {
    marginal: PiecewiseLinearCdf<T>,
    grid_x2: Grid1D<T>,
    rows: Vec<Vec<T>>,
    row_cdfs: Vec<Vec<T>>,
}

impl<T: Real> Sampler2D<T> {
    pub fn new(psi: &WaveField2D<T>) -> Self {
        let (n1, n2) = psi.shape();
        let g2 = *psi.grid_x2();
        let mut rows = Vec::with_capacity(n1);
        let mut row_cdfs = Vec::with_capacity(n1);
        let mut marg = Vec::with_capacity(n1);
        for i in 0..n1 {
            let row: Vec<T> = psi.amplitudes()[i * n2..(i + 1) * n2]
                .iter()
                .map(|a| a.norm_sqr())
                .collect();
            let c = PiecewiseLinearCdf::new(g2, row.clone());
            marg.push(c.total());
            row_cdfs.push(c.cumulative);
            rows.push(row);
        }
        Self {
            marginal: PiecewiseLinearCdf::new(*psi.grid_x1(), marg),
            grid_x2: g2,
            rows,
            row_cdfs,
        }
    }

    /// Maps two uniforms in [0, 1) to a point.
    pub fn point(&self, u1: T, u2: T) -> [T; 2] {
        let x1 = self.marginal.quantile(u1);
        let g1 = self.marginal.grid;
        let s = ((x1 - g1.x_min()) / g1.dx()).max(T::zero());
        let i = s.floor().to_usize().unwrap_or(0).min(g1.n_points() - 2);
        let lam = (s - T::from_usize_lossy(i)).min(T::one());
        let (c0, c1) = (&self.row_cdfs[i], &self.row_cdfs[i + 1]);
        let (r0, r1) = (&self.rows[i], &self.rows[i + 1]);
        let mix = |a: T, b: T| a * (T::one() - lam) + b * lam;
        let n2 = self.grid_x2.n_points();
        let total = mix(c0[n2 - 1], c1[n2 - 1]);
        let target = u2 * total;
        let (mut lo, mut hi) = (0usize, n2 - 1);
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if mix(c0[mid], c1[mid]) <= target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let r = target - mix(c0[lo], c1[lo]);
        let x2 = self.grid_x2.x(lo)
            + invert_linear_cell(mix(r0[lo], r1[lo]), mix(r0[lo + 1], r1[lo + 1]), self.grid_x2.dx(), r);
        [x1, x2]
    }
}

impl<T: Real> QuantumEquilibrium<T> for WaveField2D<T> {
    type Point = [T; 2];

    fn sample_positions(&self, m: usize, seed: u64) -> Result<Vec<[T; 2]>> {
        check_norm(self.norm())?;
        let s = Sampler2D::new(self);
        let mut rng = rng_from_seed(seed);
        Ok((0..m)
            .map(|_| {
                let u1 = T::lit(rng.gen::<f64>());
                let u2 = T::lit(rng.gen::<f64>());
                s.point(u1, u2)
            })
            .collect())
    }
}

/// Draws `m` positions distributed as |ψ|².
pub fn sample_initial_positions<T: Real, F: QuantumEquilibrium<T>>(
    psi: &F,
    m: usize,
    seed: u64,
) -> Result<Vec<F::Point>> {
    psi.sample_positions(m, seed)
}

/// Independent Metropolis walkers on an unnormalized density; each walker
/// starts at `start`, runs `burn_in` Gaussian-proposal steps of width `step`
/// and contributes its final point.
pub fn metropolis<T: Real>(
    start: &[T],
    step: T,
    burn_in: usize,
    m: usize,
    seed: u64,
    density: impl Fn(&[T]) -> T,
) -> Vec<Vec<T>> {
    let mut rng = rng_from_seed(seed);
    let dim = start.len();
    (0..m)
        .map(|_| {
            let mut x: Vec<T> = start.to_vec();
            let mut p = density(&x);
            let mut y = x.clone();
            for _ in 0..burn_in {
                for d in 0..dim {
                    y[d] = x[d] + step * T::lit(rng.sample::<f64, _>(StandardNormal));
                }
                let q = density(&y);
                let accept = if p <= T::zero() {
                    true
                } else {
                    T::lit(rng.gen::<f64>()) * p < q
                };
                if accept {
                    std::mem::swap(&mut x, &mut y);
                    p = q;
                }
            }
            x
        })
        .collect()
}
