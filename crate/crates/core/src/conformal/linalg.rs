use num_complex::Complex;

use crate::scalar::Real;

/// Outcome of a [`gmres`] solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GmresReport<T> {
    pub iterations: usize,
    /// `|b - A x| / |b|`, recomputed from the returned iterate.
    pub relative_residual: T,
}

fn norm<T: Real>(v: &[Complex<T>]) -> T {
    v.iter().fold(T::zero(), |s, z| s + z.norm_sqr()).sqrt()
}

fn dot<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> Complex<T> {
    a.iter().zip(b).fold(Complex::new(T::zero(), T::zero()), |s, (x, y)| s + x.conj() * y)
}

/// Restarted GMRES for `A x = b` with `A` given as a matrix-vector product.
///
/// Stops once the estimated relative residual drops below `tol` or after
/// `max_iter` Arnoldi steps in total.
pub fn gmres<T: Real>(
    apply: impl Fn(&[Complex<T>]) -> Vec<Complex<T>>,
    b: &[Complex<T>],
    tol: T,
    restart: usize,
    max_iter: usize,
) -> (Vec<Complex<T>>, GmresReport<T>) {
    let m = b.len();
    let zero = Complex::new(T::zero(), T::zero());
    let mut x = vec![zero; m];
    let bnorm = norm(b);
    if bnorm == T::zero() {
        return (x, GmresReport { iterations: 0, relative_residual: T::zero() });
    }
    let mut iterations = 0;
    let restart = restart.max(1);
    loop {
        let ax = apply(&x);
        let r: Vec<_> = b.iter().zip(&ax).map(|(p, q)| p - q).collect();
        let beta = norm(&r);
        if beta <= tol * bnorm || iterations >= max_iter {
            return (x, GmresReport { iterations, relative_residual: beta / bnorm });
        }
        let mut basis: Vec<Vec<Complex<T>>> = vec![r.iter().map(|z| z / beta).collect()];
        // Hessenberg columns after Givens rotation
        let mut h: Vec<Vec<Complex<T>>> = Vec::new();
        let mut rot: Vec<(T, Complex<T>)> = Vec::new();
        let mut g = vec![Complex::new(beta, T::zero())];
        let mut converged = false;
        for k in 0..restart.min(max_iter - iterations) {
            iterations += 1;
            let mut w = apply(&basis[k]);
            let mut col = vec![zero; k + 2];
            // modified Gram-Schmidt, twice for stability
            for _ in 0..2 {
                for (j, v) in basis.iter().enumerate() {
                    let c = dot(v, &w);
                    col[j] = col[j] + c;
                    for (wi, vi) in w.iter_mut().zip(v) {
                        *wi = *wi - c * vi;
                    }
                }
            }
            let wn = norm(&w);
            col[k + 1] = Complex::new(wn, T::zero());
            for (j, &(cs, sn)) in rot.iter().enumerate() {
                let (a, b2) = (col[j], col[j + 1]);
                col[j] = a * cs + sn * b2;
                col[j + 1] = -sn.conj() * a + b2 * cs;
            }
            let (a, b2) = (col[k], col[k + 1]);
            let r = (a.norm_sqr() + b2.norm_sqr()).sqrt();
            let (cs, sn) = if a.norm() == T::zero() {
                (T::zero(), Complex::new(T::one(), T::zero()))
            } else {
                let phase = a / a.norm();
                (a.norm() / r, phase * b2.conj() / r)
            };
            col[k] = a * cs + sn * b2;
            col[k + 1] = zero;
            rot.push((cs, sn));
            let gk = g[k];
            g[k] = gk * cs;
            g.push(-sn.conj() * gk);
            h.push(col);
            let estimate = g[k + 1].norm();
            if wn > T::zero() {
                basis.push(w.iter().map(|z| z / wn).collect());
            }
            if estimate <= tol * bnorm || wn == T::zero() {
                converged = true;
                break;
            }
        }
        // back substitution on the triangular system
        let kdim = h.len();
        let mut y = vec![zero; kdim];
        for i in (0..kdim).rev() {
            let mut s = g[i];
            for j in i + 1..kdim {
                s = s - h[j][i] * y[j];
            }
            y[i] = s / h[i][i];
        }
        for (j, yj) in y.iter().enumerate() {
            for (xi, vi) in x.iter_mut().zip(&basis[j]) {
                *xi = *xi + yj * vi;
            }
        }
        if converged || iterations >= max_iter {
            let ax = apply(&x);
            let res = b.iter().zip(&ax).fold(T::zero(), |s, (p, q)| s + (p - q).norm_sqr()).sqrt();
            return (x, GmresReport { iterations, relative_residual: res / bnorm });
        }
    }
}
