use num_complex::Complex;

use crate::error::{Error, Result};
use crate::field::{WaveField1D, WaveField2D};
use crate::grid::Grid1D;
use crate::linalg::{determinant, permanent};
use crate::packet::{build_packet, GaussianPacketSpec};
use crate::scalar::{Cplx, Real};
use crate::species::Species;

/// Norm below which an antisymmetrized state is rejected.
pub const DEGENERATE_NORM: f64 = 1e-12;

/// Two-particle state from two packets, (anti)symmetrized per species and
/// normalized on the grid.
pub fn build_manybody_2d<T: Real>(
    p1: &GaussianPacketSpec<T>,
    p2: &GaussianPacketSpec<T>,
    species: Species,
    grid_x1: &Grid1D<T>,
    grid_x2: &Grid1D<T>,
) -> Result<WaveField2D<T>> {
    if species.is_identical() && grid_x1 != grid_x2 {
        return Err(Error::InvalidInput(
            "identical particles need the same grid on both axes".into(),
        ));
    }
    let a1 = build_packet(p1, grid_x1)?;
    let b2 = build_packet(p2, grid_x2)?;
    let mut psi = WaveField2D::product(&a1, &b2);
    if species.is_identical() {
        let a2 = build_packet(p1, grid_x2)?;
        let b1 = build_packet(p2, grid_x1)?;
        let swapped = WaveField2D::product(&b1, &a2);
        let sign = T::lit(species.permutation_sign(true));
        for (d, s) in psi.amplitudes_mut().iter_mut().zip(swapped.amplitudes()) {
            *d += *s * sign;
        }
    }
    let norm = psi.normalize();
    if norm < T::lit(DEGENERATE_NORM) {
        return Err(Error::DegenerateState {
            norm: norm.to_f64_lossy(),
        });
    }
    Ok(psi)
}

/// Two-particle state assembled from already propagated single-particle
/// fields, normalized on the grid.
pub fn symmetrize_fields<T: Real>(
    f1: &WaveField1D<T>,
    f2: &WaveField1D<T>,
    species: Species,
) -> Result<WaveField2D<T>> {
    let mut psi = WaveField2D::product(f1, f2);
    if species.is_identical() {
        let swapped = WaveField2D::product(f2, f1);
        let sign = T::lit(species.permutation_sign(true));
        for (d, s) in psi.amplitudes_mut().iter_mut().zip(swapped.amplitudes()) {
            *d += *s * sign;
        }
    }
    let norm = psi.normalize();
    if norm < T::lit(DEGENERATE_NORM) {
        return Err(Error::DegenerateState {
            norm: norm.to_f64_lossy(),
        });
    }
    Ok(psi)
}

/// Unnormalized Σ_p sign(p) Π_k φ_{p(k)}(x_k) where `orbital(l, x)` is φ_l(x).
pub fn symmetrized_value<T: Real>(
    n: usize,
    species: Species,
    xs: &[T],
    orbital: impl Fn(usize, T) -> Cplx<T>,
) -> Cplx<T> {
    debug_assert_eq!(xs.len(), n);
    let mut m = vec![Complex::new(T::zero(), T::zero()); n * n];
    for l in 0..n {
        for k in 0..n {
            m[l * n + k] = orbital(l, xs[k]);
        }
    }
    match species {
        Species::Fermion => determinant(&m, n),
        Species::Boson => permanent(&m, n),
        Species::Distinguishable => (0..n).fold(Complex::new(T::one(), T::zero()), |p, k| p * m[k * n + k]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::overlap;
    use crate::units::UnitSystem;

    fn paper_packets() -> (GaussianPacketSpec<f64>, GaussianPacketSpec<f64>) {
        let u = UnitSystem::free_electron();
        (
            GaussianPacketSpec::from_energy(50.0, 0.12, -1.0, 25.0, &u),
            GaussianPacketSpec::from_energy(-50.0, 0.08, 1.0, 25.0, &u),
        )
    }

    #[test]
    fn fermion_diagonal_vanishes() {
        let g = Grid1D::new(-250.0, 250.0, 501).unwrap();
        let (a, b) = paper_packets();
        let psi = build_manybody_2d(&a, &b, Species::Fermion, &g, &g).unwrap();
        assert!(psi.max_diagonal() <= 1e-10 * psi.max_abs());
        assert!((psi.norm() - 1.0).abs() < 1e-8);
        assert!(psi.max_swap_defect(-1.0) < 1e-12 * psi.max_abs().max(1.0));
    }

    #[test]
    fn identical_fermions_are_degenerate() {
        let g = Grid1D::new(-200.0, 200.0, 201).unwrap();
        let (a, _) = paper_packets();
        assert!(matches!(
            build_manybody_2d(&a, &a, Species::Fermion, &g, &g),
            Err(Error::DegenerateState { .. })
        ));
    }

    #[test]
    fn identical_bosons_equal_product() {
        let g = Grid1D::new(-200.0, 200.0, 301).unwrap();
        let (a, _) = paper_packets();
        let s = build_manybody_2d(&a, &a, Species::Boson, &g, &g).unwrap();
        let p = build_manybody_2d(&a, &a, Species::Distinguishable, &g, &g).unwrap();
        let d = s
            .amplitudes()
            .iter()
            .zip(p.amplitudes())
            .fold(0.0f64, |m, (x, y)| m.max((x - y).norm()));
        assert!(d < 1e-12);
    }

    #[test]
    fn separated_fermions_match_distinguishable_norm() {
        // Exchange correction to the norm is |<a|b>|², analytically negligible
        // for packets 12 widths apart.
        let u = UnitSystem::free_electron();
        let a = GaussianPacketSpec::from_k(-150.0, 0.0, 25.0, &u);
        let b = GaussianPacketSpec::from_k(150.0, 0.0, 25.0, &u);
        assert!(overlap(&a, &b).norm_sqr() < 1e-12);
        let g = Grid1D::new(-400.0, 400.0, 401).unwrap();
        let fa = build_packet(&a, &g).unwrap();
        let fb = build_packet(&b, &g).unwrap();
        let direct = WaveField2D::product(&fa, &fb);
        let swapped = WaveField2D::product(&fb, &fa);
        let mut anti = direct.clone();
        for (d, s) in anti.amplitudes_mut().iter_mut().zip(swapped.amplitudes()) {
            *d -= *s;
        }
        let diff: f64 = anti.norm() / 2.0 - direct.norm();
        assert!(diff.abs() < 1e-6);
    }
}
