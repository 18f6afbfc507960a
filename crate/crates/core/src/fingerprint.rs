//! Fingerprints of proper lemniscates and their comparison.
//!
//! For a proper lemniscate the fingerprint `Φ₊⁻¹ ∘ Φ₋` is the `n`th root of
//! the Blaschke product `P ∘ Φ₋`, whose zeros are `Φ₋⁻¹(ξ_j)`.

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::blaschke::{nth_root_diffeo, BlaschkeProduct, MobiusAut};
use crate::conformal::{interior_riemann, invert_interior, trace_lemniscate, InteriorMap, JordanCurveSamples};
use crate::diffeo::{grid, CircleDiffeo};
use crate::error::{Error, Result};
use crate::polynomial::ProperLemniscate;
use crate::scalar::{cis, real_cmp, wrap_angle, Real};

/// Largest admissible disagreement between the boundary computations.
pub const CONSISTENCY_TOL: f64 = 1e-6;

/// Everything computed on the way to a fingerprint.
#[derive(Debug, Clone)]
pub struct Fingerprint<T> {
    pub diffeo: CircleDiffeo<T>,
    pub blaschke: BlaschkeProduct<T>,
    /// `diffeo` in closed form.
    pub root: BlaschkeRoot<T>,
    pub curve: JordanCurveSamples<T>,
    pub interior: InteriorMap<T>,
    pub report: FingerprintReport<T>,
}

/// Diagnostics of [`fingerprint`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: Deserialize<'de>"))]
pub struct FingerprintReport<T> {
    pub grid: usize,
    /// The point `Φ₋(0)`.
    pub center: Complex<T>,
    pub derivative_at_center: T,
    /// `max_j |Φ₋(a_j) - ξ_j|`.
    pub zero_residual: T,
    /// `sup |B(e^{it}) - P(Φ₋(e^{it}))|` over the boundary samples.
    pub phase_discrepancy: T,
    /// `sup |ψ - ψ_direct|` with `ψ_direct` the inverse of the boundary
    /// correspondence read against the exterior angles.
    pub cross_check: T,
}

/// Fingerprint `k = ⁿ√B` of a proper lemniscate, sampled on `M` points.
pub fn lemniscate_fingerprint<T: Real>(l: &ProperLemniscate<T>, m: usize) -> Result<(CircleDiffeo<T>, BlaschkeProduct<T>)> {
    let f = fingerprint(l, m)?;
    Ok((f.diffeo, f.blaschke))
}

/// The normalization point of `Φ₋`: the zero centroid when it is safely
/// inside `Γ`, otherwise the zero nearest to it.
pub fn interior_center<T: Real>(l: &ProperLemniscate<T>, curve: &JordanCurveSamples<T>) -> Complex<T> {
    let centroid = l.zero_centroid();
    let safe = T::lit(0.02) * curve.diameter();
    if curve.winding_number(centroid) == 1 && curve.distance_to(centroid) > safe {
        return centroid;
    }
    *l.zeros
        .iter()
        .min_by(|a, b| real_cmp((*a - centroid).norm(), (*b - centroid).norm()))
        .expect("a lemniscate has zeros")
}

/// Full fingerprint pipeline with its internal cross-checks.
pub fn fingerprint<T: Real>(l: &ProperLemniscate<T>, m: usize) -> Result<Fingerprint<T>> {
    let n = l.degree();
    let curve = trace_lemniscate(l, m)?;
    let center = interior_center(l, &curve);
    let interior = interior_riemann(&curve, center)?;
    let zeros = invert_interior(&interior, &l.zeros)?;
    let zero_residual = zeros
        .iter()
        .zip(&l.zeros)
        .fold(T::zero(), |r, (a, xi)| r.max((interior.eval(*a) - xi).norm()));

    let cap = T::lit(crate::blaschke::MAX_ZERO_MODULUS);
    let zeros: Vec<_> = zeros.into_iter().map(|a| if a.norm() > cap { a * (cap / a.norm()) } else { a }).collect();
    let unit = BlaschkeProduct::from_zeros(zeros.clone())?;
    let exterior = grid::<T>(m);
    let nt = T::of(n);
    // P(z_j) = e^{inθ_j} while z_j = Φ₋(e^{it_j})
    let ratio_sum = interior
        .boundary_corr()
        .iter()
        .zip(&exterior)
        .fold(Complex::new(T::zero(), T::zero()), |s, (&t, &th)| s + cis(nt * th) / unit.eval(cis(t)));
    let lambda = ratio_sum / ratio_sum.norm();
    let blaschke = BlaschkeProduct::new(lambda, zeros)?;
    let phase_discrepancy = interior
        .boundary_corr()
        .iter()
        .zip(&exterior)
        .fold(T::zero(), |r, (&t, &th)| r.max((blaschke.eval(cis(t)) - cis(nt * th)).norm()));
    if !(phase_discrepancy <= T::tol(CONSISTENCY_TOL)) {
        return Err(Error::PhaseMismatch { discrepancy: phase_discrepancy.to_f64_lossy() });
    }

    // pick the branch of the nth root with ψ(t_0) = θ_0 = 0
    let root = nth_root_diffeo(&blaschke, m)?;
    let t0 = interior.boundary_corr()[0];
    let offset = branch_offset(blaschke.boundary_lift(t0) / nt, T::zero(), n);
    let diffeo = root.rotated(offset);
    let root = BlaschkeRoot { blaschke: blaschke.clone(), offset };

    let cross_check = cross_check(&diffeo, &interior);
    if !(cross_check <= T::tol(CONSISTENCY_TOL)) {
        return Err(Error::PhaseMismatch { discrepancy: cross_check.to_f64_lossy() });
    }
    let report = FingerprintReport {
        grid: m,
        center,
        derivative_at_center: interior.derivative_at_center(),
        zero_residual,
        phase_discrepancy,
        cross_check,
    };
    Ok(Fingerprint { diffeo, blaschke, root, curve, interior, report })
}

/// The multiple of `2π/n` that moves `value` closest to `target`.
fn branch_offset<T: Real>(value: T, target: T, n: usize) -> T {
    let step = T::TAU() / T::of(n);
    (0..n)
        .map(|k| T::of(k) * step)
        .min_by(|a, b| real_cmp(wrap_angle(value + *a - target).abs(), wrap_angle(value + *b - target).abs()))
        .unwrap_or(T::zero())
}

/// Independent evaluation of `ψ` on the uniform grid: invert the boundary
/// correspondence `θ ↦ t(θ)` and read off the exterior angle.
fn cross_check<T: Real>(k: &CircleDiffeo<T>, interior: &InteriorMap<T>) -> T {
    let corr = interior.correspondence_interpolant();
    let m = k.grid_size();
    (0..m)
        .into_par_iter()
        .map(|j| {
            let tau = k.theta(j);
            let theta = corr.inverse(tau, T::zero());
            let lift_err = wrap_angle(k.lift()[j] - theta).abs();
            let deriv_err = (k.derivative()[j] - T::one() / corr.derivative(theta)).abs();
            lift_err.max(deriv_err / T::of(m))
        })
        .reduce(T::zero, |a, b| a.max(b))
}

/// `k ∘ φ` for the disk automorphism `φ` with `k ∘ φ` fixing `1, i, -1`.
pub fn normalize_triple<T: Real>(k: &CircleDiffeo<T>) -> CircleDiffeo<T> {
    let it = k.interpolant();
    let pre = |alpha: T| it.inverse(alpha, T::zero());
    let triple = [cis(pre(T::zero())), cis(pre(T::FRAC_PI_2())), cis(pre(T::PI()))];
    let phi = MobiusAut::from_boundary_triple(triple).unwrap_or_else(|_| MobiusAut::identity());
    let m = k.grid_size();
    let g = grid::<T>(m);
    let mut lift: Vec<T> = Vec::with_capacity(m);
    let mut derivative: Vec<T> = Vec::with_capacity(m);
    for &t in &g {
        let x = phi.boundary_lift(t);
        lift.push(it.lift(x));
        derivative.push(it.derivative(x) * phi.boundary_lift_derivative(t));
    }
    let shift = (lift[0] / T::TAU()).round() * T::TAU();
    CircleDiffeo::new_unchecked(lift.into_iter().map(|x| x - shift).collect(), derivative)
}

/// `sup_θ |e^{iψ₁} - e^{iψ₂}| + |(e^{iψ₁})' - (e^{iψ₂})'|`, on the finer of
/// the two grids.
pub fn c1_distance<T: Real>(k1: &CircleDiffeo<T>, k2: &CircleDiffeo<T>) -> T {
    let m = k1.grid_size().max(k2.grid_size());
    let (a, b) = (k1.resample(m), k2.resample(m));
    let i = Complex::new(T::zero(), T::one());
    (0..m).fold(T::zero(), |r, j| {
        let (e1, e2) = (cis(a.lift()[j]), cis(b.lift()[j]));
        let d0 = (e1 - e2).norm();
        let d1 = (i * e1 * a.derivative()[j] - i * e2 * b.derivative()[j]).norm();
        r.max(d0 + d1)
    })
}

/// Distance between two degree-`n` fingerprints as classes: both are
/// triple-normalized and the first is additionally rotated by every `n`th
/// root of unity. Returns the distance and the minimizing `ε`.
pub fn fingerprint_distance<T: Real>(k1: &CircleDiffeo<T>, k2: &CircleDiffeo<T>, n: usize) -> (T, Complex<T>) {
    let target = normalize_triple(k2);
    (0..n.max(1))
        .map(|j| {
            let alpha = T::TAU() * T::of(j) / T::of(n.max(1));
            (c1_distance(&normalize_triple(&k1.rotated(alpha)), &target), cis(alpha))
        })
        .min_by(|a, b| real_cmp(a.0, b.0))
        .expect("at least one rotation")
}

/// A fixed branch `ψ(θ) = (1/n) arg B(e^{iθ}) + offset` of `ⁿ√B`, the lift
/// of `B` being the continuous one from [`BlaschkeProduct::boundary_lift`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: Deserialize<'de>"))]
pub struct BlaschkeRoot<T> {
    pub blaschke: BlaschkeProduct<T>,
    pub offset: T,
}

impl<T: Real> BlaschkeRoot<T> {
    pub fn new(blaschke: BlaschkeProduct<T>) -> Self {
        Self { blaschke, offset: T::zero() }
    }

    pub fn degree(&self) -> usize {
        self.blaschke.degree()
    }

    pub fn lift(&self, theta: T) -> T {
        self.blaschke.boundary_lift(theta) / T::of(self.degree()) + self.offset
    }

    pub fn derivative(&self, theta: T) -> T {
        self.blaschke.arg_derivative(theta) / T::of(self.degree())
    }

    /// Post-composition with the rotation by `alpha`.
    pub fn rotated(&self, alpha: T) -> Self {
        Self { blaschke: self.blaschke.clone(), offset: self.offset + alpha }
    }

    pub fn sample(&self, m: usize) -> CircleDiffeo<T> {
        let g = grid::<T>(m);
        CircleDiffeo::new_unchecked(g.iter().map(|&t| self.lift(t)).collect(), g.iter().map(|&t| self.derivative(t)).collect())
    }

    pub fn inverse(&self, alpha: T) -> T {
        crate::diffeo::monotone_inverse(|x| self.lift(x), |x| self.derivative(x), alpha, T::zero())
    }

    /// Exact triple normalization: the root of `B ∘ φ` on the branch that
    /// fixes `1, i, -1`, together with `φ`.
    pub fn normalize_triple(&self) -> (Self, MobiusAut<T>) {
        let triple = [cis(self.inverse(T::zero())), cis(self.inverse(T::FRAC_PI_2())), cis(self.inverse(T::PI()))];
        let phi = MobiusAut::from_boundary_triple(triple).unwrap_or_else(|_| MobiusAut::identity());
        let blaschke = crate::blaschke::mobius_compose(&self.blaschke, &phi);
        let n = T::of(self.degree());
        let at_zero = self.lift(phi.boundary_lift(T::zero()));
        let mut offset = at_zero - blaschke.boundary_lift(T::zero()) / n;
        offset = offset - (at_zero / T::TAU()).round() * T::TAU();
        (Self { blaschke, offset }, phi)
    }
}

/// Class distance of two roots of Blaschke products of equal degree `n`,
/// computed from the closed forms: triple normalization is exact and the
/// first root is rotated by every `n`th root of unity. Returns the C¹
/// distance on an `m`-grid and the minimizing `ε`.
pub fn root_distance<T: Real>(r1: &BlaschkeRoot<T>, r2: &BlaschkeRoot<T>, m: usize) -> (T, Complex<T>) {
    let n = r1.degree().max(1);
    let target = r2.normalize_triple().0.sample(m);
    (0..n)
        .into_par_iter()
        .map(|j| {
            let alpha = T::TAU() * T::of(j) / T::of(n);
            (c1_distance(&r1.rotated(alpha).normalize_triple().0.sample(m), &target), cis(alpha))
        })
        .min_by(|a, b| real_cmp(a.0, b.0))
        .expect("at least one rotation")
}

/// Sum of the two directed Hausdorff distances between the sample
/// polygons, each point measured against the other curve's segments.
pub fn hausdorff_distance<T: Real>(c1: &JordanCurveSamples<T>, c2: &JordanCurveSamples<T>) -> T {
    directed(c2, c1) + directed(c1, c2)
}

fn directed<T: Real>(from: &JordanCurveSamples<T>, to: &JordanCurveSamples<T>) -> T {
    from.points()
        .par_iter()
        .map(|&z| to.distance_to(z))
        .reduce(T::zero, |a, b| a.max(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomial::{is_proper, ComplexPolynomial};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn lem(coeffs: &[Complex<f64>]) -> ProperLemniscate<f64> {
        is_proper(&ComplexPolynomial::new(coeffs.to_vec()).unwrap(), 1e-6).unwrap()
    }

    fn is_rotation(k: &CircleDiffeo<f64>, tol: f64) -> bool {
        let off = k.lift()[0];
        (0..k.grid_size()).all(|j| (k.lift()[j] - k.theta(j) - off).abs() < tol && (k.derivative()[j] - 1.0).abs() < tol)
    }

    #[test]
    fn centered_circle() {
        let l = lem(&[c(0.0, 0.0), c(0.0, 0.0), c(0.5, 0.0)]);
        let (k, b) = lemniscate_fingerprint(&l, 256).unwrap();
        assert_eq!(b.degree(), 2);
        assert!(b.zeros().iter().all(|a| a.norm() < 1e-10));
        assert!(is_rotation(&k, 1e-9));
    }

    #[test]
    fn degree_one_circle() {
        let l = lem(&[c(-0.6, -0.2), c(1.5, 0.0)]);
        let (k, b) = lemniscate_fingerprint(&l, 128).unwrap();
        assert!(b.zeros()[0].norm() < 1e-10);
        assert!(is_rotation(&k, 1e-9));
    }

    #[test]
    fn cubic_zeros_pull_back() {
        let l = lem(&[c(0.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0), c(1.0 / 3.0, 0.0)]);
        let f = fingerprint(&l, 1024).unwrap();
        for a in f.blaschke.zeros() {
            assert!(l.poly.eval(f.interior.eval(*a)).norm() <= 1e-6);
        }
        assert!(f.report.phase_discrepancy <= 1e-6);
        assert!(f.report.cross_check <= 1e-6);
        assert!(CircleDiffeo::new(f.diffeo.lift().to_vec(), f.diffeo.derivative().to_vec()).is_ok());
    }

    #[test]
    fn normalize_triple_examples() {
        let id = CircleDiffeo::<f64>::identity(128);
        assert!(c1_distance(&normalize_triple(&id), &id) < 1e-12);
        let rot = CircleDiffeo::<f64>::rotation(128, 0.9);
        let n = normalize_triple(&rot);
        assert!(c1_distance(&n, &id) < 1e-8);
        for target in [0.0, std::f64::consts::FRAC_PI_2, std::f64::consts::PI] {
            let it = n.interpolant();
            assert!((it.lift(target) - target).abs() < 1e-8);
        }
    }

    fn sample_diffeo() -> CircleDiffeo<f64> {
        let b = BlaschkeProduct::new(cis(0.4), vec![c(0.3, 0.2), c(-0.5, 0.1), c(0.1, -0.6)]).unwrap();
        nth_root_diffeo(&b, 512).unwrap()
    }

    #[test]
    fn normalization_is_well_defined() {
        let b = BlaschkeProduct::new(cis(0.4), vec![c(0.3, 0.2), c(-0.5, 0.1), c(0.1, -0.6)]).unwrap();
        let base = normalize_triple(&nth_root_diffeo(&b, 512).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let phi = MobiusAut::new(cis(rng.gen_range(-3.0..3.0)), Complex::from_polar(0.6 * rng.gen::<f64>(), rng.gen_range(0.0..6.3))).unwrap();
            // k ∘ φ sampled exactly
            let composed = CircleDiffeo::from_fn(
                512,
                |t| b.boundary_lift(phi.boundary_lift(t)) / 3.0,
                |t| b.arg_derivative(phi.boundary_lift(t)) * phi.boundary_lift_derivative(t) / 3.0,
            )
            .unwrap();
            assert!(c1_distance(&normalize_triple(&composed), &base) <= 1e-6);
            // the root of B ∘ φ may sit on another branch
            let moved = crate::blaschke::mobius_compose(&b, &phi);
            let k = nth_root_diffeo(&moved, 512).unwrap();
            assert!(fingerprint_distance(&k, &base, 3).0 <= 1e-6);
            // the other branches of the root differ by a rotation and are
            // identified once ε is minimized over
            let (d, _) = fingerprint_distance(&k.rotated(std::f64::consts::TAU / 3.0), &base, 3);
            assert!(d <= 1e-6);
        }
        let twice = normalize_triple(&base);
        assert!(c1_distance(&twice, &base) <= 1e-9);
    }

    #[test]
    fn exact_normalization_matches_sampled() {
        let b = BlaschkeProduct::new(cis(0.4), vec![c(0.3, 0.2), c(-0.5, 0.1), c(0.1, -0.6)]).unwrap();
        let root = BlaschkeRoot::new(b.clone());
        let (norm, _) = root.normalize_triple();
        let sampled = normalize_triple(&nth_root_diffeo(&b, 512).unwrap());
        assert!(c1_distance(&norm.sample(512), &sampled) < 1e-9);
        for alpha in [0.0, std::f64::consts::FRAC_PI_2, std::f64::consts::PI] {
            assert!((norm.lift(norm.inverse(alpha)) - alpha).abs() < 1e-12);
            assert!(wrap_angle(norm.inverse(alpha) - alpha).abs() < 1e-10);
        }
        // a zero close to the circle is handled by the closed form
        let sharp = BlaschkeRoot::new(BlaschkeProduct::from_zeros(vec![c(0.999, 0.0), c(0.0, 0.5)]).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..5 {
            let phi = MobiusAut::new(cis(rng.gen_range(-3.0..3.0)), Complex::from_polar(0.5 * rng.gen::<f64>(), rng.gen_range(0.0..6.3))).unwrap();
            let moved = BlaschkeRoot::new(crate::blaschke::mobius_compose(&sharp.blaschke, &phi));
            assert!(root_distance(&moved, &sharp, 4096).0 < 1e-8);
        }
    }

    #[test]
    fn c1_examples() {
        let k = sample_diffeo();
        assert_eq!(c1_distance(&k, &k), 0.0);
        let id = CircleDiffeo::<f64>::identity(256);
        let rot = CircleDiffeo::<f64>::rotation(256, std::f64::consts::PI);
        assert!((c1_distance(&id, &rot) - 4.0).abs() < 1e-12);
        let other = normalize_triple(&k);
        assert_eq!(c1_distance(&k, &other), c1_distance(&other, &k));
        // different grids are resampled
        assert!(c1_distance(&id, &CircleDiffeo::identity(64)) < 1e-12);
    }

    #[test]
    fn hausdorff_examples() {
        let o = c(0.0, 0.0);
        let a = JordanCurveSamples::circle(o, 1.0, 512).unwrap();
        let b = JordanCurveSamples::circle(o, 2.0, 512).unwrap();
        assert_eq!(hausdorff_distance(&a, &a), 0.0);
        assert!((hausdorff_distance(&a, &b) - 2.0).abs() < 1e-4);
        let t = c(0.3, 0.1);
        let moved = JordanCurveSamples::circle(t, 1.0, 512).unwrap();
        let d = hausdorff_distance(&a, &moved);
        assert!(d <= 2.0 * t.norm() + 1e-9 && d >= t.norm() - 1e-4);
        assert_eq!(hausdorff_distance(&a, &b), hausdorff_distance(&b, &a));
        let ab = hausdorff_distance(&a, &b);
        let bm = hausdorff_distance(&b, &moved);
        assert!(hausdorff_distance(&a, &moved) <= ab + bm + 1e-9);
    }
}
