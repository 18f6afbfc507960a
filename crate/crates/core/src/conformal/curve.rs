use num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::polynomial::AffineMap;
use crate::scalar::{wrap_angle, Real};

/// A closed, simple, positively oriented curve sampled at `M` points of a
/// uniform parameter `θ_j = 2πj/M`, with the velocity `dz/dθ` at each sample.
#[derive(Debug, Clone, PartialEq)]
pub struct JordanCurveSamples<T> {
    points: Vec<Complex<T>>,
    velocity: Vec<Complex<T>>,
}

impl<T: Real> JordanCurveSamples<T> {
    /// Velocities are obtained by spectral differentiation of the samples.
    pub fn new(points: Vec<Complex<T>>) -> Result<Self> {
        let velocity = spectral_derivative(&points);
        Self::with_velocity(points, velocity)
    }

    pub fn with_velocity(points: Vec<Complex<T>>, velocity: Vec<Complex<T>>) -> Result<Self> {
        if points.len() < 8 || velocity.len() != points.len() {
            return Err(Error::InvalidInput("curve needs at least 8 points with matching velocities".into()));
        }
        if points.iter().chain(&velocity).any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidInput("non-finite curve sample".into()));
        }
        let curve = Self { points, velocity };
        if !(curve.signed_area() > T::zero()) {
            return Err(Error::InvalidInput("curve is not positively oriented".into()));
        }
        if let Some((i, j)) = curve.first_crossing() {
            return Err(Error::InvalidInput(format!("curve segments {i} and {j} intersect")));
        }
        Ok(curve)
    }

    /// `center + r e^{iθ}`.
    pub fn circle(center: Complex<T>, radius: T, m: usize) -> Result<Self> {
        let grid = crate::diffeo::grid::<T>(m);
        let points = grid.iter().map(|&t| center + Complex::from_polar(radius, t)).collect();
        let velocity = grid.iter().map(|&t| Complex::from_polar(radius, t) * Complex::new(T::zero(), T::one())).collect();
        Self::with_velocity(points, velocity)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Complex<T>] {
        &self.points
    }

    pub fn velocity(&self) -> &[Complex<T>] {
        &self.velocity
    }

    /// Image under `z ↦ a z + b`; orientation is preserved for every `a ≠ 0`.
    pub fn map_affine(&self, t: &AffineMap<T>) -> Self {
        Self {
            points: self.points.iter().map(|&z| t.apply(z)).collect(),
            velocity: self.velocity.iter().map(|&v| v * t.a).collect(),
        }
    }

    /// Shoelace area of the sample polygon.
    pub fn signed_area(&self) -> T {
        let m = self.len();
        let twice = (0..m).fold(T::zero(), |s, j| {
            let (a, b) = (self.points[j], self.points[(j + 1) % m]);
            s + a.re * b.im - a.im * b.re
        });
        twice / T::lit(2.0)
    }

    pub fn winding_number(&self, w: Complex<T>) -> i64 {
        let m = self.len();
        let total = (0..m).fold(T::zero(), |s, j| {
            s + wrap_angle((self.points[(j + 1) % m] - w).arg() - (self.points[j] - w).arg())
        });
        (total / T::TAU()).round().to_i64().unwrap_or(0)
    }

    /// Distance from `w` to the sample polygon.
    pub fn distance_to(&self, w: Complex<T>) -> T {
        let m = self.len();
        (0..m).fold(T::infinity(), |d, j| d.min(segment_distance(w, self.points[j], self.points[(j + 1) % m])))
    }

    /// Largest distance between two samples.
    pub fn diameter(&self) -> T {
        let mut d = T::zero();
        for (i, a) in self.points.iter().enumerate() {
            for b in &self.points[i + 1..] {
                d = d.max((a - b).norm_sqr());
            }
        }
        d.sqrt()
    }

    fn first_crossing(&self) -> Option<(usize, usize)> {
        let m = self.len();
        let seg = |j: usize| (self.points[j], self.points[(j + 1) % m]);
        for i in 0..m {
            let (a, b) = seg(i);
            let (lo_x, hi_x) = (a.re.min(b.re), a.re.max(b.re));
            let (lo_y, hi_y) = (a.im.min(b.im), a.im.max(b.im));
            for j in i + 2..m {
                if i == 0 && j == m - 1 {
                    continue;
                }
                let (c, d) = seg(j);
                if c.re.max(d.re) < lo_x || c.re.min(d.re) > hi_x || c.im.max(d.im) < lo_y || c.im.min(d.im) > hi_y {
                    continue;
                }
                if segments_cross(a, b, c, d) {
                    return Some((i, j));
                }
            }
        }
        None
    }
}

fn cross<T: Real>(o: Complex<T>, a: Complex<T>, b: Complex<T>) -> T {
    let (u, v) = (a - o, b - o);
    u.re * v.im - u.im * v.re
}

fn segments_cross<T: Real>(a: Complex<T>, b: Complex<T>, c: Complex<T>, d: Complex<T>) -> bool {
    let (d1, d2) = (cross(a, b, c), cross(a, b, d));
    let (d3, d4) = (cross(c, d, a), cross(c, d, b));
    let z = T::zero();
    ((d1 > z && d2 < z) || (d1 < z && d2 > z)) && ((d3 > z && d4 < z) || (d3 < z && d4 > z))
}

pub(crate) fn segment_distance<T: Real>(w: Complex<T>, a: Complex<T>, b: Complex<T>) -> T {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == T::zero() {
        return (w - a).norm();
    }
    let s = ((w - a) * ab.conj()).re / len2;
    let s = s.max(T::zero()).min(T::one());
    (w - (a + ab * s)).norm()
}

/// `dz/dθ` of periodic samples on the uniform grid via FFT.
fn spectral_derivative<T: Real>(points: &[Complex<T>]) -> Vec<Complex<T>> {
    let m = points.len();
    if m == 0 {
        return Vec::new();
    }
    let mut planner = FftPlanner::new();
    let mut buf = points.to_vec();
    planner.plan_fft_forward(m).process(&mut buf);
    for (k, c) in buf.iter_mut().enumerate() {
        let freq = if 2 * k < m {
            T::of(k)
        } else if 2 * k == m {
            T::zero()
        } else {
            -T::of(m - k)
        };
        *c = *c * Complex::new(T::zero(), freq / T::of(m));
    }
    planner.plan_fft_inverse(m).process(&mut buf);
    buf
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn circle_properties() {
        let curve = JordanCurveSamples::circle(c(1.0, -2.0), 2.0, 256).unwrap();
        assert!((curve.signed_area() - 4.0 * std::f64::consts::PI).abs() < 1e-2);
        assert_eq!(curve.winding_number(c(1.0, -2.0)), 1);
        assert_eq!(curve.winding_number(c(4.0, -2.0)), 0);
        assert!((curve.diameter() - 4.0).abs() < 1e-12);
        assert!((curve.distance_to(c(1.0, -2.0)) - 2.0).abs() < 1e-3);
    }

    #[test]
    fn spectral_velocity_is_exact_for_ellipse() {
        let grid = crate::diffeo::grid::<f64>(64);
        let pts = grid.iter().map(|&t| c(2.0 * t.cos(), t.sin())).collect();
        let curve = JordanCurveSamples::new(pts).unwrap();
        for (v, &t) in curve.velocity().iter().zip(&grid) {
            assert!((v - c(-2.0 * t.sin(), t.cos())).norm() < 1e-13);
        }
    }

    #[test]
    fn rejects_bad_curves() {
        let grid = crate::diffeo::grid::<f64>(64);
        let clockwise: Vec<_> = grid.iter().map(|&t| c(t.cos(), -t.sin())).collect();
        assert!(JordanCurveSamples::new(clockwise).is_err());
        // figure eight traversed once
        let eight: Vec<_> = grid.iter().map(|&t| c(t.sin(), (2.0 * t).sin() / 2.0 + 0.01 * t.cos())).collect();
        assert!(JordanCurveSamples::new(eight).is_err());
        // curve winding twice
        let twice: Vec<_> = grid.iter().map(|&t| c((2.0 * t).cos(), (2.0 * t).sin()) * (1.0 + 0.1 * t.cos())).collect();
        assert!(JordanCurveSamples::new(twice).is_err());
        assert!(JordanCurveSamples::new(vec![c(0.0, 0.0); 4]).is_err());
    }

    #[test]
    fn affine_image() {
        let curve = JordanCurveSamples::circle(c(0.0, 0.0), 1.0, 64).unwrap();
        let t = AffineMap::new(c(0.0, 2.0), c(1.0, 1.0));
        let img = curve.map_affine(&t);
        assert!(img.signed_area() > 0.0);
        assert_eq!(img.winding_number(c(1.0, 1.0)), 1);
    }
}
