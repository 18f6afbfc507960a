//! Tracing `Γ = {|P| = 1}` by exterior angle.
//!
//! The exterior map satisfies `P(Φ₊(ζ)) = ζⁿ`, so `w(θ) = Φ₊(e^{iθ})` solves
//! `P(w) = e^{inθ}` with `w'(θ) = i n P(w)/P'(w)`. The branch is pinned by
//! following the real ray `P(w) = ρⁿ` from large `ρ`, where
//! `Φ₊(ρ) ≈ ρ a_n^{-1/n} - a_{n-1}/(n a_n)`, down to `ρ = 1`.

use num_complex::Complex;

use super::curve::JordanCurveSamples;
use crate::error::{Error, Result};
use crate::polynomial::{ComplexPolynomial, ProperLemniscate};
use crate::scalar::{cis, real_cmp, wrap_angle, Real};

/// Fewest substeps a single sample step may be split into before giving up.
const MAX_HALVINGS: u32 = 24;

struct Path<'a, T> {
    poly: &'a ComplexPolynomial<T>,
    /// The right-hand side `v(τ)` and `v'(τ)`.
    target: &'a dyn Fn(T) -> (Complex<T>, Complex<T>),
}

impl<T: Real> Path<'_, T> {
    fn velocity(&self, w: Complex<T>, tau: T) -> Complex<T> {
        let (_, dv) = (self.target)(tau);
        let (_, dp) = self.poly.eval_with_derivative(w);
        dv / dp
    }

    /// Newton on `P(w) = v(τ)`; returns the corrected point and the total
    /// length of the corrections.
    fn correct(&self, mut w: Complex<T>, tau: T) -> Option<(Complex<T>, T)> {
        let (v, _) = (self.target)(tau);
        let mut moved = T::zero();
        for _ in 0..12 {
            let (p, dp) = self.poly.eval_with_derivative(w);
            let step = (p - v) / dp;
            if !step.re.is_finite() || !step.im.is_finite() {
                return None;
            }
            w = w - step;
            moved = moved + step.norm();
            if step.norm() <= T::epsilon() * T::lit(4.0) * (T::one() + w.norm()) {
                return Some((w, moved));
            }
        }
        let (p, _) = self.poly.eval_with_derivative(w);
        ((p - v).norm() <= T::tol(1e-12) * v.norm().max(T::one())).then_some((w, moved))
    }

    /// Advances from `(w, a)` to parameter `b` with an RK4 predictor and a
    /// Newton corrector, halving the step whenever the correction exceeds
    /// the predicted displacement.
    fn advance(&self, mut w: Complex<T>, a: T, b: T) -> Result<Complex<T>> {
        let mut tau = a;
        let mut h = b - a;
        let mut halvings = 0;
        while (b - tau).abs() > T::zero() {
            if (h.abs() > (b - tau).abs()) || ((b - tau - h).abs() < h.abs() * T::lit(1e-9)) {
                h = b - tau;
            }
            let two = T::lit(2.0);
            let k1 = self.velocity(w, tau);
            let k2 = self.velocity(w + k1 * (h / two), tau + h / two);
            let k3 = self.velocity(w + k2 * (h / two), tau + h / two);
            let k4 = self.velocity(w + k3 * h, tau + h);
            let predicted = w + (k1 + k2 * two + k3 * two + k4) * (h / T::lit(6.0));
            let displacement = (predicted - w).norm();
            match self.correct(predicted, tau + h) {
                Some((next, moved)) if moved <= displacement && next.re.is_finite() => {
                    w = next;
                    tau = tau + h;
                }
                _ => {
                    halvings += 1;
                    if halvings > MAX_HALVINGS {
                        return Err(Error::PathJump { theta: tau.to_f64_lossy() });
                    }
                    h = h / T::lit(2.0);
                }
            }
        }
        Ok(w)
    }
}

/// Start of the trace: `Φ₊(1)`, the point of `Γ` with exterior angle 0.
fn trace_origin<T: Real>(l: &ProperLemniscate<T>) -> Result<Complex<T>> {
    let p = &l.poly;
    let n = T::of(p.degree());
    let an = p.leading().re;
    let scale = an.powf(-T::one() / n);
    let center = l.zero_centroid();
    let spread = l.zeros.iter().fold(T::zero(), |r, z| r.max((z - center).norm()));
    // radius at which the asymptotic expansion is an accurate Newton seed
    let rho0 = (T::lit(8.0) * spread / scale).max(T::lit(2.0));
    let path = Path {
        poly: p,
        target: &|s: T| {
            let v = (n * s).exp();
            (Complex::new(v, T::zero()), Complex::new(n * v, T::zero()))
        },
    };
    let s0 = rho0.ln();
    let seed = center + Complex::new(scale * rho0, T::zero());
    let (start, _) = path.correct(seed, s0).ok_or(Error::PathJump { theta: 0.0 })?;
    path.advance(start, s0, T::zero())
}

/// `M` points of the lemniscate at exterior angles `2πj/M`, with the exact
/// velocities `i n P(w)/P'(w)`.
pub fn trace_lemniscate<T: Real>(l: &ProperLemniscate<T>, m: usize) -> Result<JordanCurveSamples<T>> {
    let deg = l.degree();
    if m < 64 * deg {
        return Err(Error::InvalidInput(format!("trace needs M >= 64n = {}", 64 * deg)));
    }
    let n = T::of(deg);
    let path = Path {
        poly: &l.poly,
        target: &|theta: T| {
            let v = cis(n * theta);
            (v, v * Complex::new(T::zero(), n))
        },
    };
    let mut w = trace_origin(l)?;
    let start = w;
    let h = T::TAU() / T::of(m);
    let mut points = Vec::with_capacity(m);
    for j in 0..m {
        points.push(w);
        w = path.advance(w, h * T::of(j), h * T::of(j + 1))?;
    }
    let scale = points.iter().fold(T::zero(), |r, z| r.max(z.norm())).max(T::one());
    if (w - start).norm() > T::tol(1e-9) * scale {
        return Err(Error::PathJump { theta: T::TAU().to_f64_lossy() });
    }
    let worst = points.iter().fold(T::zero(), |r, &z| r.max((l.poly.eval(z).norm() - T::one()).abs()));
    if worst > T::tol(1e-10) {
        return Err(Error::NonConvergence { residual: worst.to_f64_lossy() });
    }
    let velocity = points
        .iter()
        .map(|&z| {
            let (p, dp) = l.poly.eval_with_derivative(z);
            Complex::new(T::zero(), n) * p / dp
        })
        .collect();
    JordanCurveSamples::with_velocity(points, velocity)
}

/// Exterior angle `θ ∈ [0, 2π)` of a point `w` of `Γ`, i.e. `arg Φ₊⁻¹(w)`.
pub fn exterior_angle<T: Real>(l: &ProperLemniscate<T>, w: Complex<T>) -> Result<T> {
    check_on_curve(l, w)?;
    let trace = trace_lemniscate(l, 256 * l.degree())?;
    exterior_angle_on(l, &trace, w)
}

/// As [`exterior_angle`], reusing a trace produced by [`trace_lemniscate`].
///
/// The `n` candidate angles `(arg P(w) + 2πk)/n` are exact; the trace only
/// selects the branch by locating the nearest sample.
pub fn exterior_angle_on<T: Real>(l: &ProperLemniscate<T>, trace: &JordanCurveSamples<T>, w: Complex<T>) -> Result<T> {
    check_on_curve(l, w)?;
    let m = trace.len();
    let nearest = (0..m)
        .min_by(|&i, &j| real_cmp((trace.points()[i] - w).norm(), (trace.points()[j] - w).norm()))
        .unwrap_or(0);
    let near_theta = T::TAU() * T::of(nearest) / T::of(m);
    let n = l.degree();
    let base = l.poly.eval(w).arg() / T::of(n);
    let best = (0..n)
        .map(|k| base + T::TAU() * T::of(k) / T::of(n))
        .min_by(|a, b| real_cmp(wrap_angle(*a - near_theta).abs(), wrap_angle(*b - near_theta).abs()))
        .unwrap_or(base);
    let mut theta = best % T::TAU();
    if theta < T::zero() {
        theta = theta + T::TAU();
    }
    if theta >= T::TAU() {
        theta = theta - T::TAU();
    }
    Ok(theta)
}

fn check_on_curve<T: Real>(l: &ProperLemniscate<T>, w: Complex<T>) -> Result<()> {
    let deviation = (l.poly.eval(w).norm() - T::one()).abs();
    if !(deviation <= T::tol(1e-8)) {
        return Err(Error::OffCurve { deviation: deviation.to_f64_lossy() });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomial::is_proper;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn lem(coeffs: &[f64]) -> ProperLemniscate<f64> {
        is_proper(&ComplexPolynomial::from_real(coeffs).unwrap(), 1e-6).unwrap()
    }

    #[test]
    fn circle_examples() {
        let l = lem(&[0.0, 0.0, 0.5]);
        let t = trace_lemniscate(&l, 128).unwrap();
        let r = 2f64.sqrt();
        for (j, z) in t.points().iter().enumerate() {
            let theta = std::f64::consts::TAU * j as f64 / 128.0;
            assert!((z - Complex::from_polar(r, theta)).norm() < 1e-13);
        }
        let l = lem(&[0.0, 1.0]);
        let t = trace_lemniscate(&l, 64).unwrap();
        for (j, z) in t.points().iter().enumerate() {
            assert!((z - cis(std::f64::consts::TAU * j as f64 / 64.0)).norm() < 1e-13);
        }
    }

    #[test]
    fn cubic_trace_is_on_curve_and_simple() {
        let l = lem(&[0.0, -1.0, 0.0, 1.0 / 3.0]);
        let t = trace_lemniscate(&l, 512).unwrap();
        for z in t.points() {
            assert!((l.poly.eval(*z).norm() - 1.0).abs() <= 1e-10);
        }
        assert!(t.signed_area() > 0.0);
        for zeta in &l.zeros {
            assert_eq!(t.winding_number(*zeta), 1);
        }
    }

    #[test]
    fn velocities_match_spectral_derivative() {
        let l = lem(&[0.1, -0.8, 0.2, 1.0 / 3.0]);
        let t = trace_lemniscate(&l, 1024).unwrap();
        let spectral = JordanCurveSamples::new(t.points().to_vec()).unwrap();
        for (a, b) in t.velocity().iter().zip(spectral.velocity()) {
            assert!((a - b).norm() < 1e-8 * (1.0 + a.norm()));
        }
    }

    #[test]
    fn exterior_angle_examples() {
        let l = lem(&[0.0, 1.0]);
        assert!((exterior_angle(&l, c(0.0, 1.0)).unwrap() - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
        let l = lem(&[0.0, 0.0, 0.5]);
        assert!(exterior_angle(&l, c(2f64.sqrt(), 0.0)).unwrap().abs() < 1e-15);
        assert!(matches!(exterior_angle(&l, c(1.0, 0.0)), Err(Error::OffCurve { .. })));
    }

    #[test]
    fn exterior_angle_round_trip() {
        let l = lem(&[0.0, -1.0, 0.0, 1.0 / 3.0]);
        let m = 384;
        let t = trace_lemniscate(&l, m).unwrap();
        for (j, z) in t.points().iter().enumerate() {
            let theta = exterior_angle_on(&l, &t, *z).unwrap();
            let expect = std::f64::consts::TAU * j as f64 / m as f64;
            assert!(wrap_angle(theta - expect).abs() < 1e-9, "{j}: {theta} vs {expect}");
        }
    }

    #[test]
    fn near_critical_lemniscate_still_traces() {
        // critical values ±(1 - 1e-4) for z³/3 - c z with c = ((1 - 1e-4)·3/2)^(2/3)
        let cc = (1.5f64 * (1.0 - 1e-4)).powf(2.0 / 3.0);
        let l = is_proper(&ComplexPolynomial::from_real(&[0.0, -cc, 0.0, 1.0 / 3.0]).unwrap(), 1e-6).unwrap();
        let t = trace_lemniscate(&l, 2048).unwrap();
        assert!(t.points().iter().all(|z| (l.poly.eval(*z).norm() - 1.0).abs() <= 1e-10));
    }

    #[test]
    fn resolution_precondition() {
        let l = lem(&[0.0, 0.0, 0.5]);
        assert!(trace_lemniscate(&l, 100).is_err());
    }
}
