//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point scalar the algorithms are written against (`f32` or `f64`).
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + rustfft::FftNum + Default + Display + Debug
{
    /// Converts an `f64` constant into `Self`.
    #[inline]
    fn lit(x: f64) -> Self {
        <Self as FromPrimitive>::from_f64(x).unwrap_or_else(Self::nan)
    }

    /// Converts a count or index into `Self`.
    #[inline]
    fn of(n: usize) -> Self {
        <Self as FromPrimitive>::from_usize(n).unwrap_or_else(Self::nan)
    }

    /// A tolerance of `x`, floored at a few thousand ulps of one so that
    /// single precision callers get attainable thresholds.
    #[inline]
    fn tol(x: f64) -> Self {
        Self::lit(x).max(Self::epsilon() * Self::lit(4096.0))
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// `e^{i x}`.
#[inline]
pub fn cis<T: Real>(x: T) -> Complex<T> {
    Complex::new(x.cos(), x.sin())
}

/// Principal argument difference `arg(b) - arg(a)` folded into `(-π, π]`.
#[inline]
pub fn wrap_angle<T: Real>(x: T) -> T {
    let two_pi = T::TAU();
    let mut y = x - two_pi * (x / two_pi).round();
    if y <= -T::PI() {
        y = y + two_pi;
    } else if y > T::PI() {
        y = y - two_pi;
    }
    y
}

/// Lexicographic order on (real, imaginary) used for every multiset result.
/// Total order on reals with NaN sorted last.
pub fn real_cmp<T: Real>(a: T, b: T) -> std::cmp::Ordering {
    a.partial_cmp(&b).unwrap_or_else(|| a.is_nan().cmp(&b.is_nan()))
}

pub fn lex_cmp<T: Real>(a: &Complex<T>, b: &Complex<T>) -> std::cmp::Ordering {
    a.re.partial_cmp(&b.re)
        .unwrap_or(std::cmp::Ordering::Equal)
        .then(a.im.partial_cmp(&b.im).unwrap_or(std::cmp::Ordering::Equal))
}

pub fn sort_lex<T: Real>(v: &mut [Complex<T>]) {
    v.sort_by(lex_cmp);
}

/// Distance between two multisets of equal size under the best matching.
///
/// Greedy nearest matching; adequate for well separated clusters and exact
/// for the small sets this crate compares.
pub fn multiset_distance<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> T {
    if a.len() != b.len() {
        return T::infinity();
    }
    if a.len() <= 7 {
        return best_permutation_distance(a, b);
    }
    let mut used = vec![false; b.len()];
    let mut worst = T::zero();
    for x in a {
        let mut best = T::infinity();
        let mut best_j = 0;
        for (j, y) in b.iter().enumerate() {
            if !used[j] {
                let d = (x - y).norm();
                if d < best {
                    best = d;
                    best_j = j;
                }
            }
        }
        used[best_j] = true;
        worst = worst.max(best);
    }
    worst
}

fn best_permutation_distance<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> T {
    fn rec<T: Real>(a: &[Complex<T>], b: &[Complex<T>], used: &mut [bool], i: usize, cur: T, best: &mut T) {
        if cur >= *best {
            return;
        }
        if i == a.len() {
            *best = cur;
            return;
        }
        for j in 0..b.len() {
            if !used[j] {
                used[j] = true;
                rec(a, b, used, i + 1, cur.max((a[i] - b[j]).norm()), best);
                used[j] = false;
            }
        }
    }
    let mut best = T::infinity();
    let mut used = vec![false; b.len()];
    rec(a, b, &mut used, 0, T::zero(), &mut best);
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrap_angle_folds_into_half_open_interval() {
        assert!((wrap_angle(3.0 * std::f64::consts::PI) - std::f64::consts::PI).abs() < 1e-12);
        assert!((wrap_angle(-0.5f64) + 0.5).abs() < 1e-15);
        assert!((wrap_angle(7.0f64) - (7.0 - std::f64::consts::TAU)).abs() < 1e-12);
    }

    #[test]
    fn multiset_distance_ignores_order() {
        let a = [Complex::new(1.0, 0.0), Complex::new(0.0, 2.0), Complex::new(-1.0, 0.5)];
        let b = [Complex::new(-1.0, 0.5), Complex::new(1.0, 1e-9), Complex::new(0.0, 2.0)];
        assert!(multiset_distance(&a, &b) < 2e-9);
    }

    #[test]
    fn tolerances_are_floored_for_single_precision() {
        assert_eq!(<f64 as Real>::tol(1e-10), 1e-10);
        assert!(<f32 as Real>::tol(1e-10) > 1e-4);
    }
}
