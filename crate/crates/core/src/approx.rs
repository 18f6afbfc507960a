//! Approximation of circle diffeomorphisms by roots of Blaschke products.
//!
//! The derivative of `ⁿ√B` is `(1/n) Σ P(e^{iθ}, a_j)`, a Poisson integral of
//! the atomic measure with mass `1/n` at each zero. A target `ψ` is handled by
//! fitting a positive trigonometric polynomial `h ≈ ψ'`, writing `h` as the
//! Poisson integral of a positive density on the circle `|z| = R`, and
//! discretizing that density into `n` equal-mass atoms at its quantiles.

use num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::blaschke::{poisson_kernel, BlaschkeProduct};
use crate::diffeo::{grid, monotone_inverse, CircleDiffeo};
use crate::error::{Error, Result};
use crate::fingerprint::{c1_distance, BlaschkeRoot};
use crate::scalar::{cis, Real};

/// Default radius of the atom circle.
pub const DEFAULT_RADIUS: f64 = 0.9;

/// Default trigonometric degree `2⌈√M⌉` for an `M`-point target.
pub fn default_degree(m: usize) -> usize {
    2 * (m as f64).sqrt().ceil() as usize
}

/// Real trigonometric polynomial `Σ_{|k| ≤ N} a_k e^{ikθ}` with
/// `a_{-k} = conj a_k`; only `a_0 .. a_N` are stored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: Deserialize<'de>"))]
pub struct TrigPolynomial<T> {
    coeffs: Vec<Complex<T>>,
}

impl<T: Real> TrigPolynomial<T> {
    /// Requires `a_0 = 1` and positivity on the `16N` grid.
    pub fn new(coeffs: Vec<Complex<T>>) -> Result<Self> {
        if coeffs.is_empty() || (coeffs[0] - Complex::new(T::one(), T::zero())).norm() > T::tol(1e-12) {
            return Err(Error::InvalidInput("trigonometric polynomial needs a_0 = 1".into()));
        }
        let p = Self { coeffs };
        let minimum = p.grid_minimum();
        if !(minimum > T::zero()) {
            return Err(Error::NotPositive { minimum: minimum.to_f64_lossy() });
        }
        Ok(p)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `a_0 .. a_N`.
    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    pub fn eval(&self, theta: T) -> T {
        self.eval_scaled(theta, T::one())
    }

    /// `Σ a_k r^{|k|} e^{ikθ}`.
    fn eval_scaled(&self, theta: T, r: T) -> T {
        let step = cis(theta) * r;
        let mut e = step;
        let mut acc = T::zero();
        for c in &self.coeffs[1..] {
            acc = acc + (c * e).re;
            e = e * step;
        }
        self.coeffs[0].re + T::lit(2.0) * acc
    }

    fn grid_minimum(&self) -> T {
        let m = 16 * self.degree().max(1);
        grid::<T>(m).into_iter().fold(T::infinity(), |a, t| a.min(self.eval(t)))
    }

    /// `sup_j |h(θ_j) - samples_j|` on the uniform grid of the samples.
    pub fn sup_deviation(&self, samples: &[T]) -> T {
        grid::<T>(samples.len()).iter().zip(samples).fold(T::zero(), |a, (&t, &s)| a.max((self.eval(t) - s).abs()))
    }
}

/// Fejér mean of order `N` of the Fourier series of `ψ'`, rescaled to
/// `a_0 = 1`. Positive whenever the samples are.
pub fn fit_positive_trig<T: Real>(dpsi: &[T], n: usize) -> Result<TrigPolynomial<T>> {
    let m = dpsi.len();
    if m < 2 * n + 2 {
        return Err(Error::InvalidInput(format!("{m} samples cannot resolve degree {n}")));
    }
    if let Some(bad) = dpsi.iter().find(|&&x| !(x > T::zero())) {
        return Err(Error::NotPositive { minimum: bad.to_f64_lossy() });
    }
    let mean = dpsi.iter().fold(T::zero(), |s, &x| s + x) / T::of(m);
    if (mean - T::one()).abs() > T::tol(1e-6) {
        return Err(Error::InvalidInput(format!("samples have mean {} instead of 1", mean.to_f64_lossy())));
    }
    let mut buf: Vec<Complex<T>> = dpsi.iter().map(|&x| Complex::new(x, T::zero())).collect();
    FftPlanner::new().plan_fft_forward(m).process(&mut buf);
    let c0 = buf[0].re;
    let coeffs = (0..=n)
        .map(|k| {
            let fejer = T::one() - T::of(k) / T::of(n + 1);
            buf[k] * (fejer / c0)
        })
        .collect();
    TrigPolynomial::new(coeffs)
}

/// `n` atoms of mass `1/n` on `|z| = R`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: Deserialize<'de>"))]
pub struct AtomicMeasure<T> {
    pub radius: T,
    pub angles: Vec<T>,
}

impl<T: Real> AtomicMeasure<T> {
    pub fn atoms(&self) -> Vec<Complex<T>> {
        self.angles.iter().map(|&a| Complex::from_polar(self.radius, a)).collect()
    }

    /// `(1/n) Σ P(e^{iθ}, a_j)`.
    pub fn poisson_sum(&self, theta: T) -> T {
        let s = self.atoms().into_iter().fold(T::zero(), |s, a| s + poisson_kernel(theta, a));
        s / T::of(self.angles.len())
    }
}

/// Density `H(φ) = Σ a_k R^{-|k|} e^{ikφ}` on `|z| = R` whose Poisson
/// integral is `h`, and its distribution function.
struct Extension<'a, T> {
    h: &'a TrigPolynomial<T>,
    radius: T,
}

impl<T: Real> Extension<'_, T> {
    fn density(&self, phi: T) -> T {
        self.h.eval_scaled(phi, T::one() / self.radius)
    }

    /// `2π F(φ) = φ + 2 Σ_{k≥1} Re[a_k R^{-k} (e^{ikφ} - 1)/(ik)]`.
    fn scaled_cdf(&self, phi: T) -> T {
        let inv = T::one() / self.radius;
        let one = Complex::new(T::one(), T::zero());
        let mut acc = T::zero();
        let mut scale = T::one();
        for (k, c) in self.h.coeffs.iter().enumerate().skip(1) {
            scale = scale * inv;
            let kk = T::of(k);
            let term = c * scale * (cis(kk * phi) - one) / Complex::new(T::zero(), kk);
            acc = acc + term.re;
        }
        phi + T::lit(2.0) * acc
    }
}

/// Quantile atoms of the harmonic extension of `h` to the circle `|z| = R`:
/// `φ_j` solves `F(φ_j) = (j - 1/2)/n`.
pub fn atoms_from_density<T: Real>(h: &TrigPolynomial<T>, radius: T, n: usize) -> Result<AtomicMeasure<T>> {
    if !(radius > T::zero() && radius < T::one()) || n == 0 {
        return Err(Error::InvalidInput("need 0 < R < 1 and at least one atom".into()));
    }
    let ext = Extension { h, radius };
    let check = 64 * (h.degree() + 1);
    let minimum = grid::<T>(check).into_iter().fold(T::infinity(), |a, t| a.min(ext.density(t)));
    if !(minimum > T::zero()) {
        return Err(Error::ExtensionNotPositive { radius: radius.to_f64_lossy(), minimum: minimum.to_f64_lossy() });
    }
    let angles = (0..n)
        .map(|j| {
            let level = T::TAU() * (T::of(j) + T::lit(0.5)) / T::of(n);
            monotone_inverse(|x| ext.scaled_cdf(x), |x| ext.density(x), level, T::zero())
        })
        .collect();
    Ok(AtomicMeasure { radius, angles })
}

/// Mass of the extended density on the arc `[a, b]`.
pub fn arc_mass<T: Real>(h: &TrigPolynomial<T>, radius: T, a: T, b: T) -> T {
    let ext = Extension { h, radius };
    (ext.scaled_cdf(b) - ext.scaled_cdf(a)) / T::TAU()
}

/// Errors of `ⁿ√B` against the target, on the target's grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ApproxReport<T> {
    pub c1_error: T,
    pub sup_lift_error: T,
    pub sup_derivative_error: T,
}

/// Result of [`approximate_diffeo`].
#[derive(Debug, Clone)]
pub struct Approximation<T> {
    pub blaschke: BlaschkeProduct<T>,
    /// The branch of `ⁿ√B` compared with the target.
    pub root: BlaschkeRoot<T>,
    pub density: TrigPolynomial<T>,
    pub atoms: AtomicMeasure<T>,
    pub report: ApproxReport<T>,
}

/// Degree-`n` Blaschke product whose root approximates `ψ` in `C¹`.
///
/// The phase `λ` and the branch of the root are chosen so that the lifts of
/// `ⁿ√B` and `ψ` agree at `θ = 0`.
pub fn approximate_diffeo<T: Real>(psi: &CircleDiffeo<T>, n: usize, radius: T, degree: usize) -> Result<Approximation<T>> {
    if n == 0 {
        return Err(Error::InvalidInput("degree must be at least 1".into()));
    }
    let density = fit_positive_trig(psi.derivative(), degree)?;
    let atoms = atoms_from_density(&density, radius, n)?;
    let zeros = atoms.atoms();
    let unit = BlaschkeProduct::from_zeros(zeros.clone())?;
    let nt = T::of(n);
    // lift of B with λ = 1 at θ = 0 is Σ 2 Arg(1 - a_j)
    let beta = nt * psi.lift()[0] - unit.boundary_lift(T::zero());
    let blaschke = BlaschkeProduct::new(cis(beta), zeros)?;
    let mut root = BlaschkeRoot::new(blaschke.clone());
    root.offset = psi.lift()[0] - root.lift(T::zero());
    let approx = root.sample(psi.grid_size());
    let sup_lift_error = approx.lift().iter().zip(psi.lift()).fold(T::zero(), |a, (x, y)| a.max((*x - *y).abs()));
    let sup_derivative_error =
        approx.derivative().iter().zip(psi.derivative()).fold(T::zero(), |a, (x, y)| a.max((*x - *y).abs()));
    let report = ApproxReport { c1_error: c1_distance(&approx, psi), sup_lift_error, sup_derivative_error };
    Ok(Approximation { blaschke, root, density, atoms, report })
}
