//! Closed-form Gaussian integrals and free evolution.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::permutations;
use crate::packet::GaussianPacketSpec;
use crate::scalar::{Cplx, Real};
use crate::species::Species;
use crate::units::UnitSystem;

/// Largest particle count for the explicit permutation sums.
pub const MAX_ANALYTIC_PARTICLES: usize = 6;

struct Product<T> {
    a: T,
    mu: Cplx<T>,
    i0: Cplx<T>,
}

// conj(g_a) g_b = N exp(-A x² + B x + C)
fn product<T: Real>(ga: &GaussianPacketSpec<T>, gb: &GaussianPacketSpec<T>) -> Product<T> {
    let half = T::lit(0.5);
    let (sa2, sb2) = (ga.sigma_x * ga.sigma_x, gb.sigma_x * gb.sigma_x);
    let a = half / sa2 + half / sb2;
    let b = Complex::new(ga.x0 / sa2 + gb.x0 / sb2, gb.k0 - ga.k0);
    let c = -half * ga.x0 * ga.x0 / sa2 - half * gb.x0 * gb.x0 / sb2;
    let norm = (T::PI() * T::PI() * sa2 * sb2).powf(-T::lit(0.25));
    let expo = b * b / (T::lit(4.0) * a) + c;
    let i0 = expo.exp() * ((T::PI() / a).sqrt() * norm);
    Product {
        a,
        mu: b / (T::lit(2.0) * a),
        i0,
    }
}

/// ⟨g_a|g_b⟩.
pub fn overlap<T: Real>(ga: &GaussianPacketSpec<T>, gb: &GaussianPacketSpec<T>) -> Cplx<T> {
    product(ga, gb).i0
}

/// ⟨g_a| −(ħ²/2m) ∂² |g_b⟩.
pub fn kinetic_matrix_element<T: Real>(
    ga: &GaussianPacketSpec<T>,
    gb: &GaussianPacketSpec<T>,
    units: &UnitSystem<T>,
) -> Cplx<T> {
    let p = product(ga, gb);
    let sb2 = gb.sigma_x * gb.sigma_x;
    // g_b'' = g_b [(α + βx)² − 1/σ_b²]
    let alpha = Complex::new(gb.x0 / sb2, gb.k0);
    let beta = -sb2.recip();
    let m1 = p.mu;
    let m2 = p.mu * p.mu + (T::lit(2.0) * p.a).recip();
    let poly = alpha * alpha - sb2.recip() + m1 * alpha * (T::lit(2.0) * beta) + m2 * (beta * beta);
    poly * p.i0 * (-units.hbar2_over_m() * T::lit(0.5))
}

/// Normalized phase-space distance between two packets of equal width.
pub fn phase_space_distance<T: Real>(p1: &GaussianPacketSpec<T>, p2: &GaussianPacketSpec<T>) -> Result<T> {
    if p1.sigma_x != p2.sigma_x {
        return Err(Error::MixedWidths(p1.sigma_x.to_f64_lossy(), p2.sigma_x.to_f64_lossy()));
    }
    let dk = (p1.k0 - p2.k0) / p1.sigma_k();
    let dx = (p1.x0 - p2.x0) / p1.sigma_x;
    Ok(((dk * dk + dx * dx) * T::lit(0.5)).sqrt())
}

/// Total mean kinetic energy of the (anti)symmetrized product of `packets`.
///
/// Evaluated as the explicit double sum over permutations of bra and ket,
/// divided by the norm of the symmetrized state.
pub fn ensemble_kinetic_energy<T: Real>(
    packets: &[GaussianPacketSpec<T>],
    species: Species,
    units: &UnitSystem<T>,
) -> Result<T> {
    let n = packets.len();
    if n > MAX_ANALYTIC_PARTICLES {
        return Err(Error::TooManyParticles {
            n,
            max: MAX_ANALYTIC_PARTICLES,
        });
    }
    if n == 0 {
        return Ok(T::zero());
    }
    if species == Species::Distinguishable {
        return Ok(packets.iter().map(|p| p.mean_kinetic(units)).sum());
    }
    let mut s = vec![Complex::new(T::zero(), T::zero()); n * n];
    let mut t = s.clone();
    for l in 0..n {
        for m in 0..n {
            s[l * n + m] = overlap(&packets[l], &packets[m]);
            t[l * n + m] = kinetic_matrix_element(&packets[l], &packets[m], units);
        }
    }
    let perms = permutations(n);
    let one = Complex::new(T::one(), T::zero());
    let (mut norm, mut kin) = (Complex::new(T::zero(), T::zero()), Complex::new(T::zero(), T::zero()));
    for (p, p_odd) in &perms {
        for (q, q_odd) in &perms {
            let sign = if species == Species::Fermion && (p_odd != q_odd) {
                -T::one()
            } else {
                T::one()
            };
            let mut prod = one;
            for k in 0..n {
                prod *= s[p[k] * n + q[k]];
            }
            norm += prod * sign;
            let mut ksum = Complex::new(T::zero(), T::zero());
            for j in 0..n {
                let mut term = t[p[j] * n + q[j]];
                for k in (0..n).filter(|&k| k != j) {
                    term *= s[p[k] * n + q[k]];
                }
                ksum += term;
            }
            kin += ksum * sign;
        }
    }
    if norm.re <= T::lit(1e-300) {
        return Err(Error::DegenerateState {
            norm: norm.re.to_f64_lossy(),
        });
    }
    Ok(kin.re / norm.re)
}

/// Pointwise |Φ|² for three electrons with spins (↑,↓,↓): the full
/// antisymmetrized value and the value with exchange only inside the ↓ pair.
pub fn spin_mixed_norm_check<T: Real>(packets: &[GaussianPacketSpec<T>; 3], x: [T; 3]) -> (T, T) {
    let v = |l: usize, k: usize| packets[l].value(x[k]);
    // Orbital products in the order they appear in the antisymmetrized state.
    let p1 = v(0, 0) * v(1, 1) * v(2, 2);
    let p2 = v(0, 0) * v(1, 2) * v(2, 1);
    let p3 = v(0, 1) * v(1, 0) * v(2, 2);
    let p4 = v(0, 2) * v(1, 0) * v(2, 1);
    let p5 = v(0, 1) * v(1, 2) * v(2, 0);
    let p6 = v(0, 2) * v(1, 1) * v(2, 0);
    let block = |a: Cplx<T>, b: Cplx<T>| (a.conj() * a - a.conj() * b - b.conj() * a + b.conj() * b).re;
    let approx = block(p1, p2);
    let exact = approx + block(p3, p4) + block(p5, p6);
    (exact.max(T::zero()), approx.max(T::zero()))
}

/// Freely evolved Gaussian packet at time `t`, evaluated at `x`.
pub fn free_gaussian<T: Real>(spec: &GaussianPacketSpec<T>, units: &UnitSystem<T>, t: T, x: T) -> Cplx<T> {
    let s2 = spec.sigma_x * spec.sigma_x;
    let tau = units.hbar_over_m() * t / s2;
    let den = Complex::new(T::one(), tau);
    let u = x - spec.x0;
    let num = Complex::new(
        -u * u / (T::lit(2.0) * s2),
        spec.k0 * u - spec.k0 * spec.k0 * s2 * tau * T::lit(0.5),
    );
    let amp = (T::PI() * s2).powf(-T::lit(0.25));
    let phase0 = Complex::new(T::zero(), spec.k0 * spec.x0).exp();
    (num / den).exp() * phase0 * amp / den.sqrt()
}

/// Free-packet width σ(t)/σ = √(1 + (ħt/(mσ²))²).
pub fn free_spreading_factor<T: Real>(sigma: T, units: &UnitSystem<T>, t: T) -> T {
    let tau = units.hbar_over_m() * t / (sigma * sigma);
    (T::one() + tau * tau).sqrt()
}
