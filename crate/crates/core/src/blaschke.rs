//! Finite Blaschke products, disk automorphisms and the `n`th-root circle
//! diffeomorphism.
//!
//! For a factor `(z - a)/(1 - ā z)` the boundary argument has the continuous
//! lift `θ + 2 Arg(1 - a e^{-iθ})`: `1 - a e^{-iθ}` has positive real part,
//! so the principal argument never jumps. Its derivative is the Poisson
//! kernel `(1 - r²)/(1 + r² - 2r cos(θ - φ))` at `a = r e^{iφ}`.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::diffeo::{grid, CircleDiffeo};
use crate::error::{Error, Result};
use crate::polynomial::{roots, ComplexPolynomial, RootOptions};
use crate::scalar::{cis, sort_lex, Real};

/// Largest zero modulus accepted, `1 - 1e-9`.
pub const MAX_ZERO_MODULUS: f64 = 1.0 - 1e-9;

/// `λ ∏ (z - a_j)/(1 - ā_j z)` with `|λ| = 1` and `|a_j| < 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: Deserialize<'de>"))]
pub struct BlaschkeProduct<T> {
    lambda: Complex<T>,
    zeros: Vec<Complex<T>>,
}

impl<T: Real> BlaschkeProduct<T> {
    pub fn new(lambda: Complex<T>, zeros: Vec<Complex<T>>) -> Result<Self> {
        if (lambda.norm() - T::one()).abs() > T::tol(1e-12) {
            return Err(Error::InvalidInput(format!("|lambda| = {} is not 1", lambda.norm())));
        }
        if zeros.is_empty() {
            return Err(Error::InvalidInput("Blaschke product needs at least one zero".into()));
        }
        let cap = T::lit(MAX_ZERO_MODULUS);
        if let Some(a) = zeros.iter().find(|a| !(a.norm() <= cap)) {
            return Err(Error::InvalidInput(format!("zero {a} is not inside the unit disk")));
        }
        Ok(Self { lambda: lambda / lambda.norm(), zeros })
    }

    pub fn from_zeros(zeros: Vec<Complex<T>>) -> Result<Self> {
        Self::new(Complex::new(T::one(), T::zero()), zeros)
    }

    /// `z^n`.
    pub fn power(n: usize) -> Self {
        Self::from_zeros(vec![Complex::new(T::zero(), T::zero()); n]).expect("zeros at the origin")
    }

    pub fn degree(&self) -> usize {
        self.zeros.len()
    }

    pub fn lambda(&self) -> Complex<T> {
        self.lambda
    }

    pub fn zeros(&self) -> &[Complex<T>] {
        &self.zeros
    }

    pub fn with_lambda(&self, lambda: Complex<T>) -> Result<Self> {
        Self::new(lambda, self.zeros.clone())
    }

    pub fn eval(&self, z: Complex<T>) -> Complex<T> {
        let one = Complex::new(T::one(), T::zero());
        self.zeros.iter().fold(self.lambda, |acc, a| acc * (z - a) / (one - a.conj() * z))
    }

    /// Continuous lift of `arg B(e^{iθ})`, anchored at the principal
    /// argument of `λ`.
    pub fn boundary_lift(&self, theta: T) -> T {
        let e = cis(-theta);
        let one = Complex::new(T::one(), T::zero());
        self.zeros.iter().fold(self.lambda.arg(), |acc, a| acc + theta + T::lit(2.0) * (one - a * e).arg())
    }

    /// `d/dθ arg B(e^{iθ}) = Σ_j P(e^{iθ}, a_j)`.
    pub fn arg_derivative(&self, theta: T) -> T {
        self.zeros.iter().fold(T::zero(), |acc, &a| acc + poisson_kernel(theta, a))
    }
}

/// Poisson kernel `(1 - r²)/(1 + r² - 2 r cos(θ - φ))` at `z = r e^{iφ}`.
#[inline]
pub fn poisson_kernel<T: Real>(theta: T, z: Complex<T>) -> T {
    let r2 = z.norm_sqr();
    // |e^{iθ} - z|² = 1 + r² - 2 r cos(θ - φ)
    let d = (cis(theta) - z).norm_sqr();
    (T::one() - r2) / d
}

/// Disk automorphism `λ (z - a)/(1 - ā z)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: Deserialize<'de>"))]
pub struct MobiusAut<T> {
    pub lambda: Complex<T>,
    pub a: Complex<T>,
}

impl<T: Real> MobiusAut<T> {
    pub fn new(lambda: Complex<T>, a: Complex<T>) -> Result<Self> {
        if (lambda.norm() - T::one()).abs() > T::tol(1e-12) || !(a.norm() < T::one()) {
            return Err(Error::InvalidInput("automorphism needs |lambda| = 1 and |a| < 1".into()));
        }
        Ok(Self { lambda: lambda / lambda.norm(), a })
    }

    pub fn identity() -> Self {
        Self { lambda: Complex::new(T::one(), T::zero()), a: Complex::new(T::zero(), T::zero()) }
    }

    pub fn rotation(alpha: T) -> Self {
        Self { lambda: cis(alpha), a: Complex::new(T::zero(), T::zero()) }
    }

    pub fn eval(&self, z: Complex<T>) -> Complex<T> {
        self.lambda * (z - self.a) / (Complex::new(T::one(), T::zero()) - self.a.conj() * z)
    }

    pub fn inverse_eval(&self, w: Complex<T>) -> Complex<T> {
        let u = w / self.lambda;
        (u + self.a) / (Complex::new(T::one(), T::zero()) + self.a.conj() * u)
    }

    /// Continuous lift of `arg φ(e^{iθ})`.
    pub fn boundary_lift(&self, theta: T) -> T {
        let one = Complex::new(T::one(), T::zero());
        self.lambda.arg() + theta + T::lit(2.0) * (one - self.a * cis(-theta)).arg()
    }

    pub fn boundary_lift_derivative(&self, theta: T) -> T {
        poisson_kernel(theta, self.a)
    }

    /// The automorphism taking `1, i, -1` to the boundary points `p1, p2, p3`
    /// (which must be in counterclockwise order).
    pub fn from_boundary_triple(p: [Complex<T>; 3]) -> Result<Self> {
        let one = Complex::new(T::one(), T::zero());
        let i = Complex::new(T::zero(), T::one());
        // cross-ratio maps to (0, 1, ∞) as 2x2 matrices
        let to_std = |z1: Complex<T>, z2: Complex<T>, z3: Complex<T>| {
            // S(z) = ((z - z1)(z2 - z3)) / ((z - z3)(z2 - z1))
            let u = z2 - z3;
            let v = z2 - z1;
            [[u, -z1 * u], [v, -z3 * v]]
        };
        let s1 = to_std(one, i, -one);
        let s2 = to_std(p[0], p[1], p[2]);
        // φ = S2^{-1} ∘ S1
        let inv2 = [[s2[1][1], -s2[0][1]], [-s2[1][0], s2[0][0]]];
        let m = mat_mul(inv2, s1);
        let (ma, mb, mc, md) = (m[0][0], m[0][1], m[1][0], m[1][1]);
        if ma.norm() == T::zero() {
            return Err(Error::InvalidInput("degenerate boundary triple".into()));
        }
        let a = -mb / ma;
        if !(a.norm() < T::one()) {
            return Err(Error::InvalidInput("boundary triple is not counterclockwise".into()));
        }
        let phi_at_one = (ma + mb) / (mc + md);
        let lambda = phi_at_one * (one - a.conj()) / (one - a);
        MobiusAut::new(lambda / lambda.norm(), a)
    }
}

fn mat_mul<T: Real>(x: [[Complex<T>; 2]; 2], y: [[Complex<T>; 2]; 2]) -> [[Complex<T>; 2]; 2] {
    [
        [x[0][0] * y[0][0] + x[0][1] * y[1][0], x[0][0] * y[0][1] + x[0][1] * y[1][1]],
        [x[1][0] * y[0][0] + x[1][1] * y[1][0], x[1][0] * y[0][1] + x[1][1] * y[1][1]],
    ]
}

/// Boundary samples of `B` on `θ_j = 2πj/M` with the argument unwrapped by
/// nearest-branch continuation.
#[derive(Debug, Clone)]
pub struct BoundarySamples<T> {
    pub theta: Vec<T>,
    pub values: Vec<Complex<T>>,
    pub unwrapped_arg: Vec<T>,
    /// Increase of the argument over one full period, closing step included.
    pub total_increase: T,
}

fn check_grid(m: usize, n: usize) -> Result<()> {
    if m < 16 * n {
        return Err(Error::InvalidInput(format!("grid size {m} below 16n = {}", 16 * n)));
    }
    Ok(())
}

/// Samples `B` on the boundary and unwraps its argument step by step.
pub fn eval_boundary<T: Real>(b: &BlaschkeProduct<T>, m: usize) -> Result<BoundarySamples<T>> {
    check_grid(m, b.degree())?;
    let theta = grid::<T>(m);
    let values: Vec<_> = theta.iter().map(|&t| b.eval(cis(t))).collect();
    let limit = T::FRAC_PI_2();
    let mut unwrapped = Vec::with_capacity(m);
    unwrapped.push(values[0].arg());
    let mut max_step = T::zero();
    for j in 1..=m {
        let step = (values[j % m] / values[j - 1]).arg();
        max_step = max_step.max(step.abs());
        if j < m {
            unwrapped.push(unwrapped[j - 1] + step);
        } else {
            let total = unwrapped[m - 1] + step - unwrapped[0];
            if max_step > limit {
                return Err(Error::GridTooCoarse { max_step: max_step.to_f64_lossy() });
            }
            return Ok(BoundarySamples { theta, values, unwrapped_arg: unwrapped, total_increase: total });
        }
    }
    unreachable!()
}

/// `B ∘ φ`, again a Blaschke product of the same degree.
pub fn mobius_compose<T: Real>(b: &BlaschkeProduct<T>, phi: &MobiusAut<T>) -> BlaschkeProduct<T> {
    let zeros: Vec<_> = b.zeros.iter().map(|&a| phi.inverse_eval(a)).collect();
    let probe = Complex::new(T::one(), T::zero());
    let target = b.eval(phi.eval(probe));
    let base = BlaschkeProduct { lambda: Complex::new(T::one(), T::zero()), zeros };
    let lambda = target / base.eval(probe);
    BlaschkeProduct { lambda: lambda / lambda.norm(), zeros: base.zeros }
}

/// All Möbius-equivalent products of the form `z ∏_{k<n} (z - b_k)/(1 - b̄_k z)`.
///
/// Each distinct zero is sent to the origin in turn; the leftover phase
/// `λ'` is then removed by a rotation `ρ` with `ρ^n λ' = 1`, which has `n`
/// solutions. Every solution is kept, so a generic class yields `n²`
/// representatives. Results are sorted by their zero lists.
pub fn canonical_forms<T: Real>(b: &BlaschkeProduct<T>) -> Vec<BlaschkeProduct<T>> {
    let n = b.degree();
    let tol = T::tol(1e-10);
    let mut distinct: Vec<Complex<T>> = Vec::new();
    for &a in &b.zeros {
        if distinct.iter().all(|d| (d - a).norm() > tol) {
            distinct.push(a);
        }
    }
    let mut out: Vec<BlaschkeProduct<T>> = Vec::new();
    for a in distinct {
        let phi = MobiusAut { lambda: Complex::new(T::one(), T::zero()), a: -a };
        let moved = mobius_compose(b, &phi);
        let base = moved.lambda.arg();
        for k in 0..n {
            let rho = cis(-(base + T::TAU() * T::of(k)) / T::of(n));
            let mut zeros: Vec<_> = moved.zeros.iter().map(|z| z / rho).collect();
            for z in zeros.iter_mut() {
                if z.norm() <= tol {
                    *z = Complex::new(T::zero(), T::zero());
                }
            }
            sort_lex(&mut zeros);
            let cand = BlaschkeProduct { lambda: Complex::new(T::one(), T::zero()), zeros };
            if out.iter().all(|o| crate::scalar::multiset_distance(&o.zeros, &cand.zeros) > tol) {
                out.push(cand);
            }
        }
    }
    out.sort_by(|x, y| {
        x.zeros
            .iter()
            .zip(&y.zeros)
            .map(|(p, q)| crate::scalar::lex_cmp(p, q))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    out
}

/// Numerator of `B'` up to a constant: `N' D - N D'` with `N = ∏(z - a_j)`,
/// `D = ∏(1 - ā_j z)`. Its roots come in pairs `z`, `1/z̄`.
fn derivative_numerator<T: Real>(b: &BlaschkeProduct<T>) -> Result<ComplexPolynomial<T>> {
    let one = Complex::new(T::one(), T::zero());
    let zero = Complex::new(T::zero(), T::zero());
    let num = ComplexPolynomial::from_roots(one, &b.zeros)?;
    let mut den = vec![one];
    for a in &b.zeros {
        let mut next = vec![zero; den.len() + 1];
        for (k, &c) in den.iter().enumerate() {
            next[k] = next[k] + c;
            next[k + 1] = next[k + 1] - c * a.conj();
        }
        den = next;
    }
    let dn: Vec<_> = num.coeffs().iter().enumerate().skip(1).map(|(k, c)| c * T::of(k)).collect();
    let dd: Vec<_> = den.iter().enumerate().skip(1).map(|(k, c)| c * T::of(k)).collect();
    let mut out = vec![zero; 2 * b.degree()];
    for (i, x) in dn.iter().enumerate() {
        for (j, y) in den.iter().enumerate() {
            out[i + j] = out[i + j] + x * y;
        }
    }
    for (i, x) in num.coeffs().iter().enumerate() {
        for (j, y) in dd.iter().enumerate() {
            out[i + j] = out[i + j] - x * y;
        }
    }
    let top = out.iter().fold(T::zero(), |m, c| m.max(c.norm()));
    while out.len() > 1 && out.last().is_some_and(|c| c.norm() <= top * T::tol(1e-13)) {
        out.pop();
    }
    ComplexPolynomial::new(out)
}

/// The `n - 1` critical points of `B` inside the unit disk, sorted.
pub fn blaschke_critical_points<T: Real>(b: &BlaschkeProduct<T>) -> Result<Vec<Complex<T>>> {
    let n = b.degree();
    if n < 2 {
        return Err(Error::InvalidInput("critical points need degree at least 2".into()));
    }
    let numerator = derivative_numerator(b)?;
    let mut inside: Vec<_> = roots(&numerator, RootOptions::default())?
        .into_iter()
        .filter(|z| z.norm() < T::one())
        .collect();
    if inside.len() != n - 1 {
        return Err(Error::CountMismatch { found: inside.len(), expected: n - 1 });
    }
    sort_lex(&mut inside);
    Ok(inside)
}

/// The `n - 1` critical values of `B` in the disk, with multiplicity, sorted.
pub fn blaschke_critical_values<T: Real>(b: &BlaschkeProduct<T>) -> Result<Vec<Complex<T>>> {
    let mut v: Vec<_> = blaschke_critical_points(b)?.into_iter().map(|z| b.eval(z)).collect();
    sort_lex(&mut v);
    Ok(v)
}

/// `d/dθ arg B(e^{iθ_j})` as a sum of Poisson kernels.
pub fn boundary_arg_derivative<T: Real>(b: &BlaschkeProduct<T>, m: usize) -> Result<Vec<T>> {
    check_grid(m, b.degree())?;
    Ok(grid::<T>(m).into_iter().map(|t| b.arg_derivative(t)).collect())
}

/// `ψ(θ) = (1/n) arg B(e^{iθ})` on the principal branch of `λ`, with
/// `ψ' = (1/n) Σ_j P(e^{iθ}, a_j)`.
pub fn nth_root_diffeo<T: Real>(b: &BlaschkeProduct<T>, m: usize) -> Result<CircleDiffeo<T>> {
    check_grid(m, b.degree())?;
    let n = T::of(b.degree());
    let g = grid::<T>(m);
    let lift = g.iter().map(|&t| b.boundary_lift(t) / n).collect();
    let derivative = g.iter().map(|&t| b.arg_derivative(t) / n).collect();
    Ok(CircleDiffeo::new_unchecked(lift, derivative))
}
