//! Sampled orientation preserving circle diffeomorphisms.

use num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::scalar::{cis, Real};

/// Monotone lift `ψ` of a circle diffeomorphism sampled on `θ_j = 2πj/M`,
/// together with `ψ'(θ_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CircleDiffeo<T> {
    lift: Vec<T>,
    derivative: Vec<T>,
}

impl<T: Real> CircleDiffeo<T> {
    /// Validates monotonicity, the period condition, positivity of the
    /// derivative and `∫ψ' = 2π` (periodic trapezoid, tolerance `1e-6`).
    pub fn new(lift: Vec<T>, derivative: Vec<T>) -> Result<Self> {
        let m = lift.len();
        if m < 4 || derivative.len() != m {
            return Err(Error::InvalidInput("diffeomorphism needs at least 4 samples of lift and derivative".into()));
        }
        if lift.iter().chain(&derivative).any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput("non-finite sample".into()));
        }
        if let Some(bad) = derivative.iter().find(|&&d| d <= T::zero()) {
            return Err(Error::NotPositive { minimum: bad.to_f64_lossy() });
        }
        if lift.windows(2).any(|w| w[1] <= w[0]) || lift[m - 1] >= lift[0] + T::TAU() {
            return Err(Error::InvalidInput("lift is not strictly increasing across the period".into()));
        }
        let integral = derivative.iter().fold(T::zero(), |s, &d| s + d) * T::TAU() / T::of(m);
        if (integral - T::TAU()).abs() > T::tol(1e-6) {
            return Err(Error::InvalidInput(format!(
                "derivative integrates to {} instead of 2π",
                integral.to_f64_lossy()
            )));
        }
        Ok(Self { lift, derivative })
    }

    pub(crate) fn new_unchecked(lift: Vec<T>, derivative: Vec<T>) -> Self {
        Self { lift, derivative }
    }

    /// Samples `f` and `df` on the uniform grid of size `m`.
    pub fn from_fn(m: usize, f: impl Fn(T) -> T, df: impl Fn(T) -> T) -> Result<Self> {
        let grid = grid::<T>(m);
        Self::new(grid.iter().map(|&t| f(t)).collect(), grid.iter().map(|&t| df(t)).collect())
    }

    pub fn identity(m: usize) -> Self {
        Self::rotation(m, T::zero())
    }

    pub fn rotation(m: usize, alpha: T) -> Self {
        Self::new_unchecked(grid::<T>(m).into_iter().map(|t| t + alpha).collect(), vec![T::one(); m])
    }

    pub fn grid_size(&self) -> usize {
        self.lift.len()
    }

    pub fn theta(&self, j: usize) -> T {
        T::TAU() * T::of(j) / T::of(self.grid_size())
    }

    pub fn lift(&self) -> &[T] {
        &self.lift
    }

    pub fn derivative(&self) -> &[T] {
        &self.derivative
    }

    /// `e^{iψ(θ_j)}`.
    pub fn boundary_values(&self) -> Vec<Complex<T>> {
        self.lift.iter().map(|&x| cis(x)).collect()
    }

    /// Post-composition with the rotation by `alpha`: `ψ + alpha`.
    pub fn rotated(&self, alpha: T) -> Self {
        Self::new_unchecked(self.lift.iter().map(|&x| x + alpha).collect(), self.derivative.clone())
    }

    /// Shifts the lift by a multiple of `2π` so that `ψ(0)` lies in `[-π, π)`.
    pub fn with_principal_start(&self) -> Self {
        let k = ((self.lift[0] + T::PI()) / T::TAU()).floor();
        self.rotated(-k * T::TAU())
    }

    /// Spectral interpolant of the periodic parts `ψ(θ) - θ` and `ψ'(θ)`.
    pub fn interpolant(&self) -> DiffeoInterpolant<T> {
        let grid = grid::<T>(self.grid_size());
        let periodic: Vec<T> = self.lift.iter().zip(&grid).map(|(&l, &t)| l - t).collect();
        DiffeoInterpolant {
            lift: TrigInterpolant::new(&periodic),
            derivative: TrigInterpolant::new(&self.derivative),
        }
    }

    /// The same map sampled on a grid of size `m`.
    pub fn resample(&self, m: usize) -> Self {
        if m == self.grid_size() {
            return self.clone();
        }
        let it = self.interpolant();
        let grid = grid::<T>(m);
        Self::new_unchecked(
            grid.iter().map(|&t| it.lift(t)).collect(),
            grid.iter().map(|&t| it.derivative(t)).collect(),
        )
    }
}

/// Uniform grid `2πj/m`, `j = 0..m`.
pub fn grid<T: Real>(m: usize) -> Vec<T> {
    (0..m).map(|j| T::TAU() * T::of(j) / T::of(m)).collect()
}

/// Evaluation of a sampled diffeomorphism off the grid.
#[derive(Debug, Clone)]
pub struct DiffeoInterpolant<T> {
    lift: TrigInterpolant<T>,
    derivative: TrigInterpolant<T>,
}

impl<T: Real> DiffeoInterpolant<T> {
    pub fn lift(&self, x: T) -> T {
        x + self.lift.eval(x)
    }

    pub fn derivative(&self, x: T) -> T {
        self.derivative.eval(x)
    }

    /// The `θ` in `[x0, x0 + 2π)` with `ψ(θ) ≡ target (mod 2π)`.
    pub fn inverse(&self, target: T, x0: T) -> T {
        monotone_inverse(|x| self.lift(x), |x| self.derivative(x), target, x0)
    }
}

/// Inverse of an increasing lift `f` with `f(x + 2π) = f(x) + 2π`: the `x`
/// in `[x0, x0 + 2π)` with `f(x) ≡ target (mod 2π)`, by Newton iteration
/// safeguarded with bisection.
pub fn monotone_inverse<T: Real>(f: impl Fn(T) -> T, df: impl Fn(T) -> T, target: T, x0: T) -> T {
    let base = f(x0);
    // target lifted into [f(x0), f(x0) + 2π)
    let k = ((target - base) / T::TAU()).floor();
    let goal = target - k * T::TAU();
    let (mut lo, mut hi) = (x0, x0 + T::TAU());
    let mut x = (x0 + (goal - base)).max(lo).min(hi);
    let two = T::lit(2.0);
    let mut last_step = hi - lo;
    for _ in 0..200 {
        let v = f(x) - goal;
        if v > T::zero() {
            hi = x;
        } else {
            lo = x;
        }
        let d = df(x);
        let newton = x - v / d;
        // bisect when Newton leaves the bracket or fails to halve the step
        let next = if !(newton > lo && newton < hi) || !(d > T::zero()) || (two * v).abs() > (last_step * d).abs() {
            (lo + hi) / two
        } else {
            newton
        };
        last_step = next - x;
        let tiny = T::epsilon() * T::lit(8.0) * (T::one() + x.abs());
        if last_step.abs() <= tiny || hi - lo <= tiny {
            return next;
        }
        x = next;
    }
    x
}

/// Trigonometric interpolant of real samples on the uniform grid.
#[derive(Debug, Clone)]
pub struct TrigInterpolant<T> {
    /// `c_0 .. c_{K}`; the real interpolant is `c_0 + 2 Re Σ c_k e^{ikx}`
    /// with the Nyquist coefficient already halved.
    coeffs: Vec<Complex<T>>,
}

impl<T: Real> TrigInterpolant<T> {
    pub fn new(samples: &[T]) -> Self {
        let m = samples.len();
        let mut buf: Vec<Complex<T>> = samples.iter().map(|&s| Complex::new(s, T::zero())).collect();
        FftPlanner::new().plan_fft_forward(m).process(&mut buf);
        let scale = T::one() / T::of(m);
        let half = m / 2;
        let mut coeffs: Vec<Complex<T>> = buf[..=half].iter().map(|c| c * scale).collect();
        if m.is_multiple_of(2) {
            coeffs[half] = coeffs[half] * T::lit(0.5);
        }
        // trailing modes below rounding level contribute nothing
        let top = coeffs.iter().fold(T::zero(), |a, c| a.max(c.norm()));
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.norm() <= top * T::epsilon() * T::lit(0.01)) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn eval(&self, x: T) -> T {
        let step = cis(x);
        let mut e = step;
        let mut acc = T::zero();
        for c in &self.coeffs[1..] {
            acc = acc + (c * e).re;
            e = e * step;
        }
        self.coeffs[0].re + T::lit(2.0) * acc
    }
}
