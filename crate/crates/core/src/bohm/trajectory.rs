use crate::error::{Error, Result};
use crate::grid::Grid1D;
use crate::scalar::Real;
use crate::species::Species;

/// Time series of one particle of one ensemble member.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory<T> {
    pub id: usize,
    pub particle_index: usize,
    pub seed: u64,
    pub positions: Vec<T>,
    pub velocities: Vec<T>,
}

impl<T: Real> Trajectory<T> {
    pub fn new(id: usize, particle_index: usize, seed: u64, x0: T, v0: T) -> Self {
        Self {
            id,
            particle_index,
            seed,
            positions: vec![x0],
            velocities: vec![v0],
        }
    }

    pub fn position(&self) -> T {
        *self.positions.last().expect("non-empty trajectory")
    }

    pub fn push(&mut self, x: T, v: T) {
        self.positions.push(x);
        self.velocities.push(v);
    }
}

/// M members of N particles on a shared time grid. Trajectory `m·N + j` is
/// particle `j` of member `m`.
#[derive(Clone, Debug, PartialEq)]
pub struct TrajectoryEnsemble<T> {
    pub times: Vec<T>,
    pub species: Species,
    pub n_particles: usize,
    pub trajectories: Vec<Trajectory<T>>,
}

impl<T: Real> TrajectoryEnsemble<T> {
    pub fn members(&self) -> usize {
        if self.n_particles == 0 {
            0
        } else {
            self.trajectories.len() / self.n_particles
        }
    }

    pub fn member(&self, m: usize) -> &[Trajectory<T>] {
        &self.trajectories[m * self.n_particles..(m + 1) * self.n_particles]
    }

    /// Number of members whose x₁ − x₂ changes sign at some recorded time.
    pub fn diagonal_crossings(&self) -> usize {
        assert!(self.n_particles >= 2);
        (0..self.members())
            .filter(|&m| {
                let t = self.member(m);
                let s0 = (t[0].positions[0] - t[1].positions[0]).signum();
                t[0].positions
                    .iter()
                    .zip(&t[1].positions)
                    .any(|(a, b)| (*a - *b).signum() != s0)
            })
            .count()
    }
}

#[inline]
fn cap<T: Real>(v: T, v_cap: T) -> T {
    if v.is_finite() {
        v.max(-v_cap).min(v_cap)
    } else {
        T::zero()
    }
}

/// Heun update from velocity `v0` at `x`; `v_next` evaluates the velocity
/// at the predicted point one step later. Returns the new position and the
/// capped corrector velocity.
pub fn heun_step<T: Real>(x: T, v0: T, dt: T, grid: &Grid1D<T>, v_next: impl FnOnce(T) -> T) -> (T, T) {
    let v_cap = grid.dx() / dt.abs();
    let v0 = cap(v0, v_cap);
    let xp = grid.clamp(x + v0 * dt);
    let v1 = cap(v_next(xp), v_cap);
    (x + (v0 + v1) * T::lit(0.5) * dt, v1)
}

/// Advances a trajectory by one step with a time-dependent velocity field
/// `v_at(x, t)`.
pub fn advance_trajectory<T: Real>(
    traj: &mut Trajectory<T>,
    v_at: impl Fn(T, T) -> T,
    t: T,
    dt: T,
    grid: &Grid1D<T>,
) -> Result<()> {
    let x = traj.position();
    let (xn, v1) = heun_step(x, v_at(x, t), dt, grid, |xp| v_at(xp, t + dt));
    if !grid.contains(xn) {
        return Err(Error::LeftDomain {
            particle: traj.particle_index,
            x: xn.to_f64_lossy(),
        });
    }
    traj.push(xn, v1);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_velocity_is_exact() {
        let g = Grid1D::new(-100.0, 100.0, 2001).unwrap();
        let mut t = Trajectory::new(0, 0, 0, 1.5, 0.3);
        for i in 0..10 {
            advance_trajectory(&mut t, |_, _| 0.3, i as f64, 0.1, &g).unwrap();
        }
        assert!((t.position() - (1.5 + 0.3)).abs() < 1e-12);
    }

    #[test]
    fn velocity_is_capped() {
        let g = Grid1D::new(-10.0, 10.0, 201).unwrap();
        let mut t = Trajectory::<f64>::new(0, 0, 0, 0.0, 0.0);
        advance_trajectory(&mut t, |_, _| 1e6, 0.0, 0.5, &g).unwrap();
        assert!(t.velocities.iter().all(|v| v.abs() <= g.dx() / 0.5 + 1e-15));
    }

    #[test]
    fn leaving_is_reported() {
        let g = Grid1D::new(-1.0, 1.0, 21).unwrap();
        let mut t = Trajectory::new(0, 3, 0, 0.99, 0.0);
        let r = advance_trajectory(&mut t, |_, _| 0.2, 0.0, 0.5, &g);
        assert!(matches!(r, Err(Error::LeftDomain { particle: 3, .. })));
    }
}
