use num_complex::Complex;

use crate::scalar::{Cplx, Real};

/// Constant-coefficient tridiagonal system with zero boundary values,
/// factorized once for repeated solves.
#[derive(Clone, Debug)]
pub struct ConstTridiag<T> {
    diag: Cplx<T>,
    off: Cplx<T>,
    cp: Vec<Cplx<T>>,
    inv_m: Vec<Cplx<T>>,
}

impl<T: Real> ConstTridiag<T> {
    pub fn new(n: usize, diag: Cplx<T>, off: Cplx<T>) -> Self {
        let mut cp = Vec::with_capacity(n);
        let mut inv_m = Vec::with_capacity(n);
        let mut prev = Complex::new(T::zero(), T::zero());
        for _ in 0..n {
            let m = diag - off * prev;
            let im = m.inv();
            inv_m.push(im);
            prev = off * im;
            cp.push(prev);
        }
        Self { diag, off, cp, inv_m }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.cp.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.cp.is_empty()
    }

    #[inline]
    pub fn diag(&self) -> Cplx<T> {
        self.diag
    }

    #[inline]
    pub fn off(&self) -> Cplx<T> {
        self.off
    }

    #[inline]
    pub fn forward_coeff(&self, i: usize) -> (Cplx<T>, Cplx<T>) {
        (self.cp[i], self.inv_m[i])
    }

    /// Solves in place.
    pub fn solve(&self, x: &mut [Cplx<T>]) {
        let n = x.len();
        debug_assert_eq!(n, self.len());
        let mut prev = Complex::new(T::zero(), T::zero());
        for i in 0..n {
            prev = (x[i] - self.off * prev) * self.inv_m[i];
            x[i] = prev;
        }
        for i in (0..n - 1).rev() {
            let next = x[i + 1];
            x[i] -= self.cp[i] * next;
        }
    }

    /// Computes `(rd, ro)·x` then solves this system, all in place.
    pub fn multiply_and_solve(&self, rd: Cplx<T>, ro: Cplx<T>, x: &mut [Cplx<T>]) {
        let n = x.len();
        debug_assert_eq!(n, self.len());
        let zero = Complex::new(T::zero(), T::zero());
        let mut orig_prev = zero;
        let mut d_prev = zero;
        for i in 0..n {
            let cur = x[i];
            let next = if i + 1 < n { x[i + 1] } else { zero };
            let r = rd * cur + ro * (orig_prev + next);
            d_prev = (r - self.off * d_prev) * self.inv_m[i];
            x[i] = d_prev;
            orig_prev = cur;
        }
        for i in (0..n - 1).rev() {
            let next = x[i + 1];
            x[i] -= self.cp[i] * next;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_against_dense_product() {
        let n = 9;
        let d = Complex::new(2.5, 0.3);
        let o = Complex::new(-0.7, 0.2);
        let t = ConstTridiag::<f64>::new(n, d, o);
        let x0: Vec<Complex<f64>> = (0..n).map(|i| Complex::new(i as f64, 1.0 - i as f64)).collect();
        let mut b = vec![Complex::new(0.0, 0.0); n];
        for i in 0..n {
            b[i] = d * x0[i];
            if i > 0 {
                b[i] += o * x0[i - 1];
            }
            if i + 1 < n {
                b[i] += o * x0[i + 1];
            }
        }
        t.solve(&mut b);
        for i in 0..n {
            assert!((b[i] - x0[i]).norm() < 1e-12);
        }
    }
}
