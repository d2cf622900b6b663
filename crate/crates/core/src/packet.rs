use num_complex::Complex;

use crate::error::{Error, Result};
use crate::field::WaveField1D;
use crate::grid::Grid1D;
use crate::scalar::{cis, Cplx, Real};
use crate::units::UnitSystem;

/// Minimum grid extent on each side of a packet centre, in widths.
pub const PACKET_SPAN_SIGMAS: f64 = 6.0;

/// A single-particle Gaussian wave packet.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaussianPacketSpec<T> {
    /// Centre position (nm).
    pub x0: T,
    /// Central wave vector (nm⁻¹).
    pub k0: T,
    /// Spatial width (nm).
    pub sigma_x: T,
    /// Central energy (ħk₀)²/(2m) in eV.
    pub e0: T,
}

impl<T: Real> GaussianPacketSpec<T> {
    pub fn from_k(x0: T, k0: T, sigma_x: T, units: &UnitSystem<T>) -> Self {
        assert!(sigma_x > T::zero(), "packet width must be positive");
        Self {
            x0,
            k0,
            sigma_x,
            e0: units.energy_of_k(k0),
        }
    }

    /// Packet with central energy `e0` travelling along `sign(direction)`.
    pub fn from_energy(x0: T, e0: T, direction: T, sigma_x: T, units: &UnitSystem<T>) -> Self {
        assert!(e0 >= T::zero(), "central energy must be non-negative");
        let k = units.k_of_energy(e0);
        let k0 = if direction < T::zero() { -k } else { k };
        Self { x0, k0, sigma_x, e0 }
    }

    /// Momentum-space width 1/σ_x.
    #[inline]
    pub fn sigma_k(&self) -> T {
        self.sigma_x.recip()
    }

    /// Mean kinetic energy ⟨T⟩ = E₀ + ħ²/(4mσ²).
    pub fn mean_kinetic(&self, units: &UnitSystem<T>) -> T {
        self.e0 + units.hbar2_over_m() / (T::lit(4.0) * self.sigma_x * self.sigma_x)
    }

    /// Value of the (t = 0) packet at `x`.
    #[inline]
    pub fn value(&self, x: T) -> Cplx<T> {
        let u = (x - self.x0) / self.sigma_x;
        let e = -T::lit(0.5) * u * u;
        if e < T::gaussian_cutoff() {
            return Complex::new(T::zero(), T::zero());
        }
        cis(self.k0 * x) * (self.amplitude() * e.exp())
    }

    #[inline]
    fn amplitude(&self) -> T {
        (T::PI() * self.sigma_x * self.sigma_x).powf(-T::lit(0.25))
    }

    pub fn check_fits(&self, grid: &Grid1D<T>) -> Result<()> {
        let span = T::lit(PACKET_SPAN_SIGMAS) * self.sigma_x;
        let lo = self.x0 - span;
        let hi = self.x0 + span;
        if lo < grid.x_min() || hi > grid.x_max() {
            return Err(Error::GridTooNarrow {
                x0: self.x0.to_f64_lossy(),
                sigma: self.sigma_x.to_f64_lossy(),
                need_lo: lo.to_f64_lossy(),
                need_hi: hi.to_f64_lossy(),
                x_min: grid.x_min().to_f64_lossy(),
                x_max: grid.x_max().to_f64_lossy(),
            });
        }
        Ok(())
    }
}

/// Samples a Gaussian packet on `grid`.
pub fn build_packet<T: Real>(spec: &GaussianPacketSpec<T>, grid: &Grid1D<T>) -> Result<WaveField1D<T>> {
    spec.check_fits(grid)?;
    let amps = grid.points().map(|x| spec.value(x)).collect();
    WaveField1D::from_amplitudes(*grid, amps, T::zero())
}
