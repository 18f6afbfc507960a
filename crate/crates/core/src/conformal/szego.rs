//! Interior Riemann map through the Szegő kernel.
//!
//! With `H(z, w) = T(w) / (2πi (w - z))` and `A(z, w) = H(z, w) - conj H(w, z)`
//! the Szegő kernel of the interior domain solves
//! `S(z, a) - ∫ A(z, w) S(w, a) |dw| = conj H(a, z)` for `z` on the boundary.
//! The map `f = Φ₋⁻¹` then has boundary values `-i T(z) S(z,a)² / |S(z,a)|²`,
//! `f'(a) = 2π S(a, a)` and `|f'(z)| = 2π |S(z, a)|² / S(a, a)` on `Γ`.
//!
//! The equation is discretized with the trapezoid rule in the curve
//! parameter and symmetrized, which makes the operator the identity minus a
//! skew-Hermitian matrix; GMRES converges quickly on it.

use num_complex::Complex;
use rayon::prelude::*;

use super::curve::JordanCurveSamples;
use super::linalg::gmres;
use crate::error::{Error, Result};
use crate::scalar::{cis, real_cmp, wrap_angle, Real};

/// `Φ₋ : 𝔻 → Ω₋` with `Φ₋(0) = w₀` and `Φ₋'(0) > 0`, known through its
/// boundary correspondence.
#[derive(Debug, Clone)]
pub struct InteriorMap<T> {
    curve: JordanCurveSamples<T>,
    center: Complex<T>,
    /// `t_j` with `Φ₋(e^{i t_j}) = z_j`, strictly increasing, `t_0 ∈ (-π, π]`.
    boundary_corr: Vec<T>,
    /// `dt/dθ` at the curve samples.
    corr_derivative: Vec<T>,
    derivative_at_center: T,
    diameter: T,
}

impl<T: Real> InteriorMap<T> {
    pub fn curve(&self) -> &JordanCurveSamples<T> {
        &self.curve
    }

    pub fn center(&self) -> Complex<T> {
        self.center
    }

    pub fn boundary_corr(&self) -> &[T] {
        &self.boundary_corr
    }

    pub fn corr_derivative(&self) -> &[T] {
        &self.corr_derivative
    }

    pub fn derivative_at_center(&self) -> T {
        self.derivative_at_center
    }

    pub fn diameter(&self) -> T {
        self.diameter
    }

    /// `Φ₋(z)` for `|z| ≤ 1` by the barycentric Cauchy integral over the
    /// circle, with derivative.
    pub fn eval_with_derivative(&self, z: Complex<T>) -> (Complex<T>, Complex<T>) {
        let h = T::TAU() / T::of(self.curve.len());
        let zero = Complex::new(T::zero(), T::zero());
        let (mut num, mut den, mut dnum, mut dden) = (zero, zero, zero, zero);
        for ((&t, &dt), &w) in self.boundary_corr.iter().zip(&self.corr_derivative).zip(self.curve.points()) {
            let zeta = cis(t);
            let diff = zeta - z;
            if diff.norm() <= T::epsilon() * T::lit(16.0) {
                return (w, self.boundary_derivative_at(t, dt, w));
            }
            let weight = zeta * (dt * h);
            let q = weight / diff;
            let q2 = q / diff;
            num = num + q * w;
            den = den + q;
            dnum = dnum + q2 * w;
            dden = dden + q2;
        }
        let value = num / den;
        (value, (dnum * den - num * dden) / (den * den))
    }

    fn boundary_derivative_at(&self, _t: T, dt: T, w: Complex<T>) -> Complex<T> {
        // Φ₋'(e^{it}) = z'(θ) / (i e^{it} t'(θ))
        let j = self.curve.points().iter().position(|p| *p == w).unwrap_or(0);
        let t = self.boundary_corr[j];
        self.curve.velocity()[j] / (Complex::new(T::zero(), T::one()) * cis(t) * dt)
    }

    pub fn eval(&self, z: Complex<T>) -> Complex<T> {
        self.eval_with_derivative(z).0
    }

    /// `Φ₋⁻¹(w)` for `w` inside the curve by the barycentric Cauchy integral
    /// over `Γ`. Serves as a Newton seed; [`invert_interior`] refines it.
    pub fn inverse_estimate(&self, w: Complex<T>) -> Complex<T> {
        let h = T::TAU() / T::of(self.curve.len());
        let zero = Complex::new(T::zero(), T::zero());
        let (mut num, mut den) = (zero, zero);
        for ((&t, &z), &v) in self.boundary_corr.iter().zip(self.curve.points()).zip(self.curve.velocity()) {
            let diff = z - w;
            if diff.norm() <= T::epsilon() * T::lit(16.0) {
                return cis(t);
            }
            let q = v * h / diff;
            num = num + q * cis(t);
            den = den + q;
        }
        num / den
    }

    /// `t(θ)` evaluated off the sample grid by trigonometric interpolation
    /// of its periodic part.
    pub fn correspondence_interpolant(&self) -> crate::diffeo::DiffeoInterpolant<T> {
        crate::diffeo::CircleDiffeo::new_unchecked(self.boundary_corr.clone(), self.corr_derivative.clone()).interpolant()
    }
}

/// Riemann map of the inside of `curve` onto the unit disk, normalized at `w0`.
pub fn interior_riemann<T: Real>(curve: &JordanCurveSamples<T>, w0: Complex<T>) -> Result<InteriorMap<T>> {
    let winding = curve.winding_number(w0);
    if winding != 1 {
        return Err(Error::NotInside { winding });
    }
    let m = curve.len();
    let h = T::TAU() / T::of(m);
    let pts = curve.points();
    let speed: Vec<T> = curve.velocity().iter().map(|v| v.norm()).collect();
    if speed.iter().any(|s| !(*s > T::zero())) {
        return Err(Error::InvalidInput("curve has a stationary sample".into()));
    }
    let tangent: Vec<Complex<T>> = curve.velocity().iter().zip(&speed).map(|(v, s)| v / *s).collect();
    let root_w: Vec<T> = speed.iter().map(|s| (*s * h).sqrt()).collect();
    let two_pi_i = Complex::new(T::zero(), T::TAU());
    let cauchy = |z: Complex<T>, k: usize| tangent[k] / (two_pi_i * (pts[k] - z));

    let kernel: Vec<Vec<Complex<T>>> = (0..m)
        .into_par_iter()
        .map(|i| {
            (0..m)
                .map(|j| {
                    if i == j {
                        return Complex::new(T::zero(), T::zero());
                    }
                    let a = cauchy(pts[i], j) - cauchy(pts[j], i).conj();
                    a * (root_w[i] * root_w[j])
                })
                .collect()
        })
        .collect();
    let rhs: Vec<Complex<T>> = (0..m).map(|i| cauchy(w0, i).conj() * root_w[i]).collect();
    let apply = |x: &[Complex<T>]| -> Vec<Complex<T>> {
        kernel
            .par_iter()
            .zip(x.par_iter())
            .map(|(row, xi)| row.iter().zip(x).fold(*xi, |s, (k, v)| s - k * v))
            .collect()
    };
    let tol = T::tol(1e-14);
    let (u, report) = gmres(apply, &rhs, tol, 150, 1500);
    if !(report.relative_residual <= T::tol(1e-11)) {
        return Err(Error::NoConvergence(format!(
            "Szegő system residual {:.3e} after {} iterations",
            report.relative_residual.to_f64_lossy(),
            report.iterations
        )));
    }
    let s_aa = u.iter().fold(T::zero(), |acc, x| acc + x.norm_sqr());
    let szego: Vec<Complex<T>> = u.iter().zip(&root_w).map(|(x, r)| x / *r).collect();

    let minus_i = Complex::new(T::zero(), -T::one());
    let raw: Vec<T> = szego
        .iter()
        .zip(&tangent)
        .map(|(s, tg)| (minus_i * tg * s * s).arg())
        .collect();
    let mut corr = Vec::with_capacity(m);
    corr.push(raw[0]);
    for j in 1..m {
        let step = wrap_angle(raw[j] - raw[j - 1]);
        if !(step > T::zero()) {
            return Err(Error::NoConvergence(format!("boundary correspondence not increasing at sample {j}")));
        }
        corr.push(corr[j - 1] + step);
    }
    let closing = wrap_angle(raw[0] - raw[m - 1]);
    let total = corr[m - 1] + closing - corr[0];
    if !(closing > T::zero()) || (total - T::TAU()).abs() > T::lit(1e-6) {
        return Err(Error::NoConvergence("boundary correspondence does not wind once".into()));
    }
    let scale = T::TAU() / s_aa;
    let corr_derivative = szego.iter().zip(&speed).map(|(s, v)| scale * s.norm_sqr() * *v).collect();
    Ok(InteriorMap {
        curve: curve.clone(),
        center: w0,
        boundary_corr: corr,
        corr_derivative,
        derivative_at_center: T::one() / (T::TAU() * s_aa),
        diameter: curve.diameter(),
    })
}

/// `Φ₋⁻¹` at each target by damped Newton on the Cauchy-integral evaluation
/// of `Φ₋`, seeded from the Cauchy integral of `Φ₋⁻¹` and, failing that,
/// from a polar grid.
pub fn invert_interior<T: Real>(map: &InteriorMap<T>, targets: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
    targets.par_iter().map(|&w| invert_one(map, w)).collect()
}

fn invert_one<T: Real>(map: &InteriorMap<T>, target: Complex<T>) -> Result<Complex<T>> {
    let winding = map.curve.winding_number(target);
    if winding != 1 {
        return Err(Error::NotInside { winding });
    }
    let accept = T::tol(1e-8) * map.diameter;
    let mut seeds = vec![clamp_to_disk(map.inverse_estimate(target))];
    let mut tried_grid = false;
    loop {
        for &seed in &seeds {
            if let Some(z) = newton(map, target, seed, accept) {
                return Ok(z);
            }
        }
        if tried_grid {
            return Err(Error::SeedFailure { distance_to_boundary: map.curve.distance_to(target).to_f64_lossy() });
        }
        tried_grid = true;
        let mut grid: Vec<(T, Complex<T>)> = Vec::new();
        for ri in 1..=12 {
            let r = T::one() - (T::lit(0.85)).powi(ri);
            for k in 0..32 {
                let z = Complex::from_polar(r, T::TAU() * T::of(k) / T::lit(32.0));
                grid.push(((map.eval(z) - target).norm(), z));
            }
        }
        grid.sort_by(|a, b| real_cmp(a.0, b.0));
        seeds = grid.into_iter().take(6).map(|(_, z)| z).collect();
    }
}

fn clamp_to_disk<T: Real>(z: Complex<T>) -> Complex<T> {
    let cap = T::lit(0.995);
    if !(z.norm() < cap) || !z.re.is_finite() {
        if z.re.is_finite() && z.im.is_finite() && z.norm() > T::zero() {
            return z * (cap / z.norm());
        }
        return Complex::new(T::zero(), T::zero());
    }
    z
}

fn newton<T: Real>(map: &InteriorMap<T>, target: Complex<T>, mut z: Complex<T>, accept: T) -> Option<Complex<T>> {
    let (mut value, mut deriv) = map.eval_with_derivative(z);
    let mut res = (value - target).norm();
    for _ in 0..60 {
        if res <= accept * T::lit(1e-4) {
            break;
        }
        let step = (value - target) / deriv;
        if !step.re.is_finite() || !step.im.is_finite() {
            return None;
        }
        let mut lambda = T::one();
        let mut improved = false;
        for _ in 0..30 {
            let cand = z - step * lambda;
            if cand.norm() < T::one() {
                let (v, d) = map.eval_with_derivative(cand);
                let r = (v - target).norm();
                if r < res {
                    z = cand;
                    value = v;
                    deriv = d;
                    res = r;
                    improved = true;
                    break;
                }
            }
            lambda = lambda / T::lit(2.0);
        }
        if !improved {
            break;
        }
    }
    (res <= accept).then_some(z)
}
