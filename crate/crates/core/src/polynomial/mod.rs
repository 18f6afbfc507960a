//! Complex polynomial algebra and the lemniscate machinery built on it.

mod critical;
mod normal_form;
mod oracle;
mod roots;

pub use critical::{critical_data, is_proper, CriticalData, ProperLemniscate, DEFAULT_MIN_MARGIN};
pub use normal_form::{affine_pullback, lambda_project, normalize_el, psi_from_critical_points, AffineMap};
pub use oracle::component_count_oracle;
pub use roots::{roots, RootOptions};

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Polynomial `a_0 + a_1 z + ... + a_n z^n` with nonzero leading coefficient.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: Deserialize<'de>"))]
pub struct ComplexPolynomial<T> {
    coeffs: Vec<Complex<T>>,
}

impl<T: Real> ComplexPolynomial<T> {
    /// Builds a polynomial from `a_0..a_n`. Trailing exact zeros are trimmed;
    /// the zero polynomial is rejected.
    pub fn new(mut coeffs: Vec<Complex<T>>) -> Result<Self> {
        while coeffs.last().is_some_and(|c| c.re == T::zero() && c.im == T::zero()) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Err(Error::InvalidInput("zero polynomial".into()));
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidInput("non-finite coefficient".into()));
        }
        Ok(Self { coeffs })
    }

    pub fn from_real(coeffs: &[T]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| Complex::new(c, T::zero())).collect())
    }

    /// Monic-times-`leading` polynomial with the given roots.
    pub fn from_roots(leading: Complex<T>, roots: &[Complex<T>]) -> Result<Self> {
        let mut c = vec![leading];
        for r in roots {
            let mut next = vec![Complex::new(T::zero(), T::zero()); c.len() + 1];
            for (k, &ck) in c.iter().enumerate() {
                next[k + 1] = next[k + 1] + ck;
                next[k] = next[k] - ck * r;
            }
            c = next;
        }
        Self::new(c)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    pub fn leading(&self) -> Complex<T> {
        self.coeffs[self.degree()]
    }

    pub fn max_abs_coeff(&self) -> T {
        self.coeffs.iter().fold(T::zero(), |m, c| m.max(c.norm()))
    }

    #[inline]
    pub fn eval(&self, z: Complex<T>) -> Complex<T> {
        let mut acc = Complex::new(T::zero(), T::zero());
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// `(P(z), P'(z))` by a single Horner pass.
    #[inline]
    pub fn eval_with_derivative(&self, z: Complex<T>) -> (Complex<T>, Complex<T>) {
        let zero = Complex::new(T::zero(), T::zero());
        let (mut p, mut dp) = (zero, zero);
        for c in self.coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    }

    /// Derivative; the derivative of a constant is the constant zero, which is
    /// returned as `None`.
    pub fn derivative(&self) -> Option<Self> {
        if self.degree() == 0 {
            return None;
        }
        let d = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * T::of(k))
            .collect();
        Self::new(d).ok()
    }

    /// Antiderivative with zero constant term.
    pub fn integral(&self) -> Self {
        let mut c = Vec::with_capacity(self.coeffs.len() + 1);
        c.push(Complex::new(T::zero(), T::zero()));
        c.extend(self.coeffs.iter().enumerate().map(|(k, a)| a / T::of(k + 1)));
        Self { coeffs: c }
    }

    pub fn scale(&self, s: Complex<T>) -> Result<Self> {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// True when the leading coefficient is real and strictly positive, the
    /// convention under which a polynomial defines a lemniscate.
    pub fn has_positive_leading(&self) -> bool {
        let l = self.leading();
        l.re > T::zero() && l.im.abs() <= T::tol(1e-12) * l.re
    }

    /// Returns a copy multiplied by the unimodular constant that makes the
    /// leading coefficient real and positive. The lemniscate is unchanged.
    pub fn with_positive_leading(&self) -> Self {
        let l = self.leading();
        let phase = l.conj() / l.norm();
        let mut c: Vec<_> = self.coeffs.iter().map(|a| a * phase).collect();
        let last = c.len() - 1;
        c[last] = Complex::new(c[last].re, T::zero());
        Self { coeffs: c }
    }

    /// Largest coefficientwise distance to `other` (degrees may differ).
    pub fn coeff_distance(&self, other: &Self) -> T {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = Complex::new(T::zero(), T::zero());
        (0..n).fold(T::zero(), |m, k| {
            let a = self.coeffs.get(k).copied().unwrap_or(zero);
            let b = other.coeffs.get(k).copied().unwrap_or(zero);
            m.max((a - b).norm())
        })
    }
}
