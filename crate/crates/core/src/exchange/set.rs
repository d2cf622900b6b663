use num_complex::Complex;

use crate::bohm::node_threshold;
use crate::error::{Error, Result};
use crate::field::{Jet, WaveField1D};
use crate::gaussian::overlap;
use crate::grid::Grid1D;
use crate::interp::Weights;
use crate::linalg::{cofactor_column, determinant, permutations, MAX_PERMANENT_ORDER};
use crate::manybody::DEGENERATE_NORM;
use crate::packet::{build_packet, GaussianPacketSpec};
use crate::scalar::{Cplx, Real};
use crate::species::Species;

/// Assembled norm below which a conditional wave function is rejected.
pub const NULL_ASSEMBLY_NORM: f64 = 1e-14;

/// Read access to the conditional fields ψ̃_{l,a} (initial packet `l`,
/// potential channel `a`).
pub trait FieldSource<T: Real>: Sync {
    fn n_particles(&self) -> usize;
    fn species(&self) -> Species;
    fn field(&self, l: usize, a: usize) -> &WaveField1D<T>;
    /// max |ψ̃_{l,a}| over the grid.
    fn field_max(&self, l: usize, a: usize) -> T;
}

/// Storage layout of a conditional set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Layout {
    /// All N² fields.
    Full,
    /// Only ψ̃_{a,a}; enough when no exchange assembly is performed.
    Diagonal,
    /// One field per packet, shared by every channel; valid only while the
    /// potential ignores the other particles.
    Shared,
}

/// The N×N conditional fields of one many-particle trajectory together with
/// its current positions.
#[derive(Clone, Debug)]
pub struct ConditionalSet<T> {
    grid: Grid1D<T>,
    species: Species,
    layout: Layout,
    n: usize,
    packets: Vec<GaussianPacketSpec<T>>,
    fields: Vec<WaveField1D<T>>,
    maxes: Vec<T>,
    positions: Vec<T>,
    time: T,
}

/// Rejects packet sets the species cannot represent.
pub fn check_packets<T: Real>(packets: &[GaussianPacketSpec<T>], species: Species) -> Result<()> {
    let n = packets.len();
    if species == Species::Boson && n > MAX_PERMANENT_ORDER {
        return Err(Error::TooManyParticles {
            n,
            max: MAX_PERMANENT_ORDER,
        });
    }
    if species == Species::Fermion && n > 1 {
        let mut s = vec![Complex::new(T::zero(), T::zero()); n * n];
        for l in 0..n {
            for m in 0..n {
                s[l * n + m] = overlap(&packets[l], &packets[m]);
            }
        }
        // Gram determinant = norm of the antisymmetrized product divided by N!.
        let g = determinant(&s, n).re;
        if g < T::lit(DEGENERATE_NORM) {
            return Err(Error::DegenerateState { norm: g.to_f64_lossy() });
        }
    }
    Ok(())
}

impl<T: Real> ConditionalSet<T> {
    pub fn new(
        packets: &[GaussianPacketSpec<T>],
        species: Species,
        grid: Grid1D<T>,
        positions: Vec<T>,
        layout: Layout,
    ) -> Result<Self> {
        let n = packets.len();
        if positions.len() != n {
            return Err(Error::ShapeMismatch(format!(
                "{n} packets but {} positions",
                positions.len()
            )));
        }
        check_packets(packets, species)?;
        let base: Vec<WaveField1D<T>> = packets.iter().map(|p| build_packet(p, &grid)).collect::<Result<_>>()?;
        let fields = match layout {
            Layout::Full => (0..n * n).map(|i| base[i / n].clone()).collect(),
            Layout::Diagonal | Layout::Shared => base,
        };
        let maxes = fields.iter().map(|f| f.max_abs()).collect();
        Ok(Self {
            grid,
            species,
            layout,
            n,
            packets: packets.to_vec(),
            fields,
            maxes,
            positions,
            time: T::zero(),
        })
    }

    #[inline]
    pub fn grid(&self) -> &Grid1D<T> {
        &self.grid
    }
    #[inline]
    pub fn layout(&self) -> Layout {
        self.layout
    }
    #[inline]
    pub fn time(&self) -> T {
        self.time
    }
    #[inline]
    pub fn positions(&self) -> &[T] {
        &self.positions
    }
    #[inline]
    pub fn packets(&self) -> &[GaussianPacketSpec<T>] {
        &self.packets
    }
    #[inline]
    pub fn stored_fields(&self) -> usize {
        self.fields.len()
    }

    pub(crate) fn set_positions(&mut self, xs: &[T]) {
        self.positions.copy_from_slice(xs);
    }

    pub(crate) fn set_time(&mut self, t: T) {
        self.time = t;
        self.fields.iter_mut().for_each(|f| f.set_time(t));
    }

    #[inline]
    fn index(&self, l: usize, a: usize) -> usize {
        match self.layout {
            Layout::Full => l * self.n + a,
            Layout::Diagonal => {
                debug_assert_eq!(l, a, "diagonal layout holds only (a, a)");
                a
            }
            Layout::Shared => l,
        }
    }

    /// Stored fields that evolve under channel `a`, as (storage index).
    pub(crate) fn channel_indices(&self, a: usize) -> Vec<usize> {
        match self.layout {
            Layout::Full => (0..self.n).map(|l| l * self.n + a).collect(),
            Layout::Diagonal => vec![a],
            Layout::Shared => {
                if a == 0 {
                    (0..self.n).collect()
                } else {
                    Vec::new()
                }
            }
        }
    }

    pub(crate) fn fields_mut(&mut self) -> (&mut [WaveField1D<T>], &mut [T]) {
        (&mut self.fields, &mut self.maxes)
    }

    /// Inserts a new particle with packet `spec` at position `x`. In the
    /// full layout the new row starts from the packet and the new column
    /// copies each existing packet's own-channel field.
    pub fn add_particle(&mut self, spec: GaussianPacketSpec<T>, x: T) -> Result<()> {
        let fresh = build_packet(&spec, &self.grid)?;
        let mut fresh = fresh;
        fresh.set_time(self.time);
        let n = self.n;
        let m = n + 1;
        match self.layout {
            Layout::Full => {
                let mut fields = Vec::with_capacity(m * m);
                for l in 0..m {
                    for a in 0..m {
                        let f = if l == n {
                            fresh.clone()
                        } else if a == n {
                            self.fields[l * n + l].clone()
                        } else {
                            self.fields[l * n + a].clone()
                        };
                        fields.push(f);
                    }
                }
                self.fields = fields;
            }
            Layout::Diagonal | Layout::Shared => self.fields.push(fresh),
        }
        self.maxes = self.fields.iter().map(|f| f.max_abs()).collect();
        self.packets.push(spec);
        self.positions.push(x);
        self.n = m;
        Ok(())
    }

    /// Removes particle `k`: its packet row and its channel column.
    pub fn remove_particle(&mut self, k: usize) {
        let n = self.n;
        assert!(k < n);
        match self.layout {
            Layout::Full => {
                let mut fields = Vec::with_capacity((n - 1) * (n - 1));
                let mut maxes = Vec::with_capacity((n - 1) * (n - 1));
                for (i, (f, m)) in self.fields.drain(..).zip(self.maxes.drain(..)).enumerate() {
                    if i / n != k && i % n != k {
                        fields.push(f);
                        maxes.push(m);
                    }
                }
                self.fields = fields;
                self.maxes = maxes;
            }
            Layout::Diagonal | Layout::Shared => {
                self.fields.remove(k);
                self.maxes.remove(k);
            }
        }
        self.packets.remove(k);
        self.positions.remove(k);
        self.n = n - 1;
    }
}

impl<T: Real> FieldSource<T> for ConditionalSet<T> {
    fn n_particles(&self) -> usize {
        self.n
    }
    fn species(&self) -> Species {
        self.species
    }
    fn field(&self, l: usize, a: usize) -> &WaveField1D<T> {
        &self.fields[self.index(l, a)]
    }
    fn field_max(&self, l: usize, a: usize) -> T {
        self.maxes[self.index(l, a)]
    }
}

/// Builds the full-layout conditional set for `packets` with positions drawn
/// from the (anti)symmetrized initial density.
pub fn init_conditional_set<T: Real>(
    packets: &[GaussianPacketSpec<T>],
    species: Species,
    grid: Grid1D<T>,
    seed: u64,
) -> Result<ConditionalSet<T>> {
    check_packets(packets, species)?;
    let x = super::ensemble::sample_symmetrized_positions(packets, species, &grid, 1, seed)?
        .pop()
        .expect("one sample");
    ConditionalSet::new(packets, species, grid, x, Layout::Full)
}

/// Matrix T[l][k] = ψ̃_{l,a}(r_k) of one channel `a`.
#[derive(Clone, Debug, PartialEq)]
pub struct TrajectoryMatrix<T> {
    pub channel: usize,
    pub n: usize,
    pub values: Vec<Cplx<T>>,
}

impl<T: Real> TrajectoryMatrix<T> {
    pub fn build<S: FieldSource<T> + ?Sized>(src: &S, a: usize, positions: &[T]) -> Self {
        let n = src.n_particles();
        let weights: Vec<Weights<T>> = positions
            .iter()
            .map(|&x| {
                let g = src.field(a, a).grid();
                Weights::at(g, g.clamp(x))
            })
            .collect();
        let mut values = Vec::with_capacity(n * n);
        for l in 0..n {
            let f = src.field(l, a);
            for w in &weights {
                values.push(f.value_with(w));
            }
        }
        Self { channel: a, n, values }
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.re.is_finite() && v.im.is_finite())
    }
}

/// Raw expansion coefficients A_l of channel `a`: cofactors (Fermion),
/// permanental cofactors (Boson) or the unit vector (Distinguishable).
pub fn cofactor_coefficients<T: Real, S: FieldSource<T> + ?Sized>(src: &S, a: usize, positions: &[T]) -> Vec<Cplx<T>> {
    let n = src.n_particles();
    match src.species() {
        Species::Distinguishable => (0..n)
            .map(|l| Complex::new(if l == a { T::one() } else { T::zero() }, T::zero()))
            .collect(),
        species => {
            let t = TrajectoryMatrix::build(src, a, positions);
            cofactor_column(&t.values, n, a, species)
        }
    }
}

/// Coefficients scaled to unit largest magnitude.
pub fn channel_coefficients<T: Real, S: FieldSource<T> + ?Sized>(
    src: &S,
    a: usize,
    positions: &[T],
) -> Result<Vec<Cplx<T>>> {
    let mut c = cofactor_coefficients(src, a, positions);
    let m = c.iter().fold(T::zero(), |m, v| m.max(v.norm()));
    if !(m > T::zero()) || !m.is_finite() {
        return Err(Error::NullAssembly { particle: a, norm: 0.0 });
    }
    let s = m.recip();
    c.iter_mut().for_each(|v| *v = *v * s);
    Ok(c)
}

/// Σ_l A_l ψ̃_{l,a} on the grid.
pub fn combine<T: Real, S: FieldSource<T> + ?Sized>(src: &S, a: usize, coeffs: &[Cplx<T>]) -> WaveField1D<T> {
    let f0 = src.field(a, a);
    let mut out = WaveField1D::zeros(*f0.grid());
    out.set_time(f0.time());
    for (l, c) in coeffs.iter().enumerate() {
        if c.norm() == T::zero() {
            continue;
        }
        let f = src.field(l, a);
        for (o, v) in out.amplitudes_mut().iter_mut().zip(f.amplitudes()) {
            *o += *v * *c;
        }
    }
    out
}

/// Normalized conditional wave function of particle `a`.
pub fn assemble_conditional<T: Real, S: FieldSource<T> + ?Sized>(
    src: &S,
    a: usize,
    positions: &[T],
) -> Result<WaveField1D<T>> {
    let c = channel_coefficients(src, a, positions)?;
    let mut psi = combine(src, a, &c);
    let norm = psi.normalize();
    if norm < T::lit(NULL_ASSEMBLY_NORM) {
        return Err(Error::NullAssembly {
            particle: a,
            norm: norm.to_f64_lossy(),
        });
    }
    Ok(psi)
}

/// Σ_p sign(p) Π_k ψ̃_{p(k),a}(y_k) with y_a = x and y_k = r_k otherwise,
/// by explicit enumeration. Unnormalized; reference only.
pub fn direct_assembly<T: Real, S: FieldSource<T> + ?Sized>(src: &S, a: usize, positions: &[T]) -> WaveField1D<T> {
    let n = src.n_particles();
    let species = src.species();
    let grid = *src.field(a, a).grid();
    let fixed: Vec<Vec<Cplx<T>>> = (0..n)
        .map(|l| positions.iter().map(|&x| src.field(l, a).value_at(x)).collect())
        .collect();
    let perms = permutations(n);
    let mut out = WaveField1D::zeros(grid);
    for (i, amp) in out.amplitudes_mut().iter_mut().enumerate() {
        let mut acc = Complex::new(T::zero(), T::zero());
        for (p, odd) in &perms {
            if species == Species::Distinguishable && p.iter().enumerate().any(|(k, &l)| k != l) {
                continue;
            }
            let mut prod = src.field(p[a], a).amplitudes()[i];
            for k in (0..n).filter(|&k| k != a) {
                prod *= fixed[p[k]][k];
            }
            if species == Species::Fermion && *odd {
                acc -= prod;
            } else {
                acc += prod;
            }
        }
        *amp = acc;
    }
    out
}

/// Local value and derivatives of the (unnormalized) conditional wave
/// function of channel `a` at `x`.
pub fn conditional_jet<T: Real, S: FieldSource<T> + ?Sized>(src: &S, a: usize, coeffs: &[Cplx<T>], x: T) -> Jet<T> {
    let g = src.field(a, a).grid();
    let w = Weights::at(g, g.clamp(x));
    let zero = Complex::new(T::zero(), T::zero());
    let mut out = Jet {
        value: zero,
        d1: zero,
        d2: zero,
    };
    for (l, c) in coeffs.iter().enumerate() {
        if c.norm() == T::zero() {
            continue;
        }
        let j = src.field(l, a).jet_with(&w);
        out.value += j.value * *c;
        out.d1 += j.d1 * *c;
        out.d2 += j.d2 * *c;
    }
    out
}

/// |Ψ_a| at `x` relative to the node threshold. Uses the cheap bound
/// Σ|A_l|·max|ψ̃_{l,a}| first and assembles the full field only when needed.
pub fn is_node<T: Real, S: FieldSource<T> + ?Sized>(src: &S, a: usize, coeffs: &[Cplx<T>], value: Cplx<T>) -> bool {
    let bound: T = coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| c.norm() != T::zero())
        .map(|(l, c)| c.norm() * src.field_max(l, a))
        .sum();
    let r = value.norm();
    if r > node_threshold(bound) {
        return false;
    }
    r <= node_threshold(combine(src, a, coeffs).max_abs())
}
