//! Determinants, permanents and their cofactors for small complex matrices
//! stored row-major.

use num_complex::Complex;

use crate::scalar::{Cplx, Real};
use crate::species::Species;

/// Largest order accepted by the permanent routines.
pub const MAX_PERMANENT_ORDER: usize = 8;

/// All permutations of `0..n` with their parity (true = odd), in
/// lexicographic order.
pub fn permutations(n: usize) -> Vec<(Vec<usize>, bool)> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<(Vec<usize>, bool)>) {
        let n = used.len();
        if prefix.len() == n {
            let mut inv = 0usize;
            for i in 0..n {
                for j in i + 1..n {
                    if prefix[i] > prefix[j] {
                        inv += 1;
                    }
                }
            }
            out.push((prefix.clone(), inv % 2 == 1));
            return;
        }
        for v in 0..n {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                rec(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(n), &mut vec![false; n], &mut out);
    out
}

fn zero<T: Real>() -> Cplx<T> {
    Complex::new(T::zero(), T::zero())
}

/// Determinant by LU with partial pivoting.
pub fn determinant<T: Real>(m: &[Cplx<T>], n: usize) -> Cplx<T> {
    debug_assert_eq!(m.len(), n * n);
    if n == 0 {
        return Complex::new(T::one(), T::zero());
    }
    let mut a = m.to_vec();
    let mut det = Complex::new(T::one(), T::zero());
    for c in 0..n {
        let mut p = c;
        let mut best = a[c * n + c].norm();
        for r in c + 1..n {
            let v = a[r * n + c].norm();
            if v > best {
                best = v;
                p = r;
            }
        }
        if best == T::zero() {
            return zero();
        }
        if p != c {
            for k in 0..n {
                a.swap(c * n + k, p * n + k);
            }
            det = -det;
        }
        let piv = a[c * n + c];
        det *= piv;
        let inv = piv.inv();
        for r in c + 1..n {
            let f = a[r * n + c] * inv;
            if f == zero() {
                continue;
            }
            for k in c + 1..n {
                let t = a[c * n + k];
                a[r * n + k] -= f * t;
            }
        }
    }
    det
}

/// Permanent by Ryser's formula with Gray-code updates.
pub fn permanent<T: Real>(m: &[Cplx<T>], n: usize) -> Cplx<T> {
    debug_assert_eq!(m.len(), n * n);
    assert!(n <= MAX_PERMANENT_ORDER + 1, "permanent order {n} too large");
    if n == 0 {
        return Complex::new(T::one(), T::zero());
    }
    let mut row_sums = vec![zero::<T>(); n];
    let mut total = zero::<T>();
    let mut gray_prev = 0usize;
    for g in 1usize..(1 << n) {
        let gray = g ^ (g >> 1);
        let col = (gray ^ gray_prev).trailing_zeros() as usize;
        let added = gray & (1 << col) != 0;
        for r in 0..n {
            if added {
                row_sums[r] += m[r * n + col];
            } else {
                row_sums[r] -= m[r * n + col];
            }
        }
        gray_prev = gray;
        let prod = row_sums.iter().fold(Complex::new(T::one(), T::zero()), |p, &s| p * s);
        if (n - gray.count_ones() as usize) % 2 == 1 {
            total -= prod;
        } else {
            total += prod;
        }
    }
    total
}

fn minor<T: Real>(m: &[Cplx<T>], n: usize, skip_r: usize, skip_c: usize) -> Vec<Cplx<T>> {
    let mut out = Vec::with_capacity((n - 1) * (n - 1));
    for r in (0..n).filter(|&r| r != skip_r) {
        for c in (0..n).filter(|&c| c != skip_c) {
            out.push(m[r * n + c]);
        }
    }
    out
}

/// Signed cofactors (Fermion) or permanental cofactors (Boson) of column `col`:
/// entry `l` multiplies `m[l][col]` in the expansion along that column.
pub fn cofactor_column<T: Real>(m: &[Cplx<T>], n: usize, col: usize, species: Species) -> Vec<Cplx<T>> {
    (0..n)
        .map(|l| {
            let sub = minor(m, n, l, col);
            match species {
                Species::Fermion => {
                    let d = determinant(&sub, n - 1);
                    if (l + col) % 2 == 1 {
                        -d
                    } else {
                        d
                    }
                }
                Species::Boson => permanent(&sub, n - 1),
                Species::Distinguishable => {
                    if l == col {
                        Complex::new(T::one(), T::zero())
                    } else {
                        zero()
                    }
                }
            }
        })
        .collect()
}

/// Σ_p sign(p) Π_k m[p(k)][k] by explicit enumeration. Reference only.
pub fn permutation_sum<T: Real>(m: &[Cplx<T>], n: usize, species: Species) -> Cplx<T> {
    let mut acc = zero::<T>();
    for (p, odd) in permutations(n) {
        let prod = (0..n).fold(Complex::new(T::one(), T::zero()), |a, k| a * m[p[k] * n + k]);
        if species == Species::Fermion && odd {
            acc -= prod;
        } else {
            acc += prod;
        }
    }
    acc
}
