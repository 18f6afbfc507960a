use num_complex::Complex;

use super::{roots, ComplexPolynomial, RootOptions};
use crate::error::{Error, Result};
use crate::scalar::{lex_cmp, Real};

/// Default distance kept between critical values and the unit circle.
pub const DEFAULT_MIN_MARGIN: f64 = 1e-6;

/// Critical points of a polynomial (with multiplicity) and their images.
#[derive(Debug, Clone, PartialEq)]
pub struct CriticalData<T> {
    pub points: Vec<Complex<T>>,
    pub values: Vec<Complex<T>>,
    pub max_abs_value: T,
}

/// A polynomial whose lemniscate `{|P| = 1}` is smooth with connected
/// interior, together with its zeros and critical data.
#[derive(Debug, Clone, PartialEq)]
pub struct ProperLemniscate<T> {
    pub poly: ComplexPolynomial<T>,
    /// Zeros `ξ_j` of `P`, with multiplicity, sorted lexicographically.
    pub zeros: Vec<Complex<T>>,
    pub critical: CriticalData<T>,
    /// `1 - max |w_k|`.
    pub margin: T,
}

impl<T: Real> ProperLemniscate<T> {
    pub fn degree(&self) -> usize {
        self.poly.degree()
    }

    pub fn zero_centroid(&self) -> Complex<T> {
        let s = self.zeros.iter().fold(Complex::new(T::zero(), T::zero()), |s, z| s + z);
        s / T::of(self.zeros.len())
    }
}

/// Roots of `P'` with their critical values, ordered by (re, im) of the point.
pub fn critical_data<T: Real>(p: &ComplexPolynomial<T>) -> Result<CriticalData<T>> {
    let Some(dp) = p.derivative() else {
        return Err(Error::InvalidInput("constant polynomial has no critical data".into()));
    };
    let mut points = roots(&dp, RootOptions::default())?;
    points.sort_by(lex_cmp);
    let values: Vec<_> = points.iter().map(|&z| p.eval(z)).collect();
    let max_abs_value = values.iter().fold(T::zero(), |m, v| m.max(v.norm()));
    Ok(CriticalData { points, values, max_abs_value })
}

/// Certifies that `p` defines a proper lemniscate: every critical value lies
/// in the disk of radius `1 - min_margin`.
pub fn is_proper<T: Real>(p: &ComplexPolynomial<T>, min_margin: T) -> Result<ProperLemniscate<T>> {
    if !p.has_positive_leading() {
        return Err(Error::InvalidInput("leading coefficient must be real and positive".into()));
    }
    if !(min_margin > T::zero() && min_margin < T::one()) {
        return Err(Error::InvalidInput("margin must lie in (0, 1)".into()));
    }
    let critical = if p.degree() == 1 {
        CriticalData { points: vec![], values: vec![], max_abs_value: T::zero() }
    } else {
        critical_data(p)?
    };
    let m = critical.max_abs_value;
    if m >= T::one() {
        return Err(Error::NotProper { max_critical_modulus: m.to_f64_lossy() });
    }
    if m > T::one() - min_margin {
        return Err(Error::MarginTooSmall {
            max_critical_modulus: m.to_f64_lossy(),
            min_margin: min_margin.to_f64_lossy(),
        });
    }
    let zeros = roots(p, RootOptions::default())?;
    Ok(ProperLemniscate { poly: p.clone(), zeros, margin: T::one() - m, critical })
}
