//! The affine group action on polynomials and the EL / Λ / Ψ normal forms.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::ComplexPolynomial;
use crate::scalar::Real;

/// `T(z) = a z + b` with `a != 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: Deserialize<'de>"))]
pub struct AffineMap<T> {
    pub a: Complex<T>,
    pub b: Complex<T>,
}

impl<T: Real> AffineMap<T> {
    pub fn new(a: Complex<T>, b: Complex<T>) -> Self {
        Self { a, b }
    }

    pub fn identity() -> Self {
        Self::new(Complex::new(T::one(), T::zero()), Complex::new(T::zero(), T::zero()))
    }

    /// Real positive scale `a` and translation `b`: the shape-equivalence group.
    pub fn scaling(a: T, b: Complex<T>) -> Self {
        Self::new(Complex::new(a, T::zero()), b)
    }

    #[inline]
    pub fn apply(&self, z: Complex<T>) -> Complex<T> {
        self.a * z + self.b
    }

    pub fn inverse(&self) -> Self {
        let ai = self.a.inv();
        Self::new(ai, -self.b * ai)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        Self::new(self.a * other.a, self.a * other.b + self.b)
    }

    pub fn distance(&self, other: &Self) -> T {
        (self.a - other.a).norm().max((self.b - other.b).norm())
    }
}

/// `z ↦ P(a z + b)`, expanded binomially.
pub fn affine_pullback<T: Real>(p: &ComplexPolynomial<T>, t: &AffineMap<T>) -> ComplexPolynomial<T> {
    let n = p.degree();
    let a = p.coeffs();
    let zero = Complex::new(T::zero(), T::zero());
    let one = Complex::new(T::one(), T::zero());
    let mut apow = vec![one; n + 1];
    let mut bpow = vec![one; n + 1];
    for k in 1..=n {
        apow[k] = apow[k - 1] * t.a;
        bpow[k] = bpow[k - 1] * t.b;
    }
    // binom[k][j] built row by row
    let mut row = vec![T::one()];
    let mut out = vec![zero; n + 1];
    for (k, ak) in a.iter().enumerate() {
        if k > 0 {
            let mut next = vec![T::one(); k + 1];
            for j in 1..k {
                next[j] = row[j - 1] + row[j];
            }
            row = next;
        }
        for j in 0..=k {
            out[j] = out[j] + ak * apow[j] * bpow[k - j] * row[j];
        }
    }
    ComplexPolynomial::new(out).expect("pullback by an invertible affine map keeps the degree")
}

/// Unique G-equivalent polynomial `z^n/n + a_{n-2} z^{n-2} + ... + a_0` and
/// the map `T` with `P∘T` equal to it.
///
/// The leading coefficient must be real and positive.
pub fn normalize_el<T: Real>(p: &ComplexPolynomial<T>) -> (ComplexPolynomial<T>, AffineMap<T>) {
    let n = p.degree();
    let an = p.leading().re;
    let nf = T::of(n);
    let scale = (nf * an).powf(-T::one() / nf);
    let shift = -p.coeffs()[n - 1] / (nf * an);
    let t = AffineMap::new(Complex::new(scale, T::zero()), shift);
    let q = affine_pullback(p, &t);
    // pin the two normalised coefficients exactly
    let mut c = q.coeffs().to_vec();
    c[n] = Complex::new(T::one() / nf, T::zero());
    if n >= 2 {
        c[n - 1] = Complex::new(T::zero(), T::zero());
    }
    (ComplexPolynomial::new(c).expect("leading coefficient is 1/n"), t)
}

/// `P̃(z) = ∫_0^z ∏_k (s - ζ_k) ds` and its critical values `Ψ(ζ) = (P̃(ζ_k))_k`.
pub fn psi_from_critical_points<T: Real>(zetas: &[Complex<T>]) -> (ComplexPolynomial<T>, Vec<Complex<T>>) {
    let one = Complex::new(T::one(), T::zero());
    let derivative = ComplexPolynomial::from_roots(one, zetas).expect("monic");
    let tilde = derivative.integral();
    let values = zetas.iter().map(|&z| tilde.eval(z)).collect();
    (tilde, values)
}

/// EL representative of `P̃(z) = z^n/n + ã_{n-1} z^{n-1} + ... + ã_1 z`:
/// the translate `P̃(z + b)` with vanishing `z^{n-1}` coefficient.
pub fn lambda_project<T: Real>(tilde_p: &ComplexPolynomial<T>) -> ComplexPolynomial<T> {
    let n = tilde_p.degree();
    let shift = -tilde_p.coeffs()[n - 1] / (tilde_p.leading() * T::of(n));
    let one = Complex::new(T::one(), T::zero());
    let q = affine_pullback(tilde_p, &AffineMap::new(one, shift));
    let mut c = q.coeffs().to_vec();
    if n >= 2 {
        c[n - 1] = Complex::new(T::zero(), T::zero());
    }
    ComplexPolynomial::new(c).expect("degree preserved")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomial::critical_data;
    use crate::scalar::multiset_distance;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn pullback_examples() {
        let p = ComplexPolynomial::from_real(&[0.0, 0.0, 1.0]).unwrap();
        assert_eq!(affine_pullback(&p, &AffineMap::identity()), p);
        let q = affine_pullback(&p, &AffineMap::scaling(2.0, c(1.0, 0.0)));
        assert!(q.coeff_distance(&ComplexPolynomial::from_real(&[1.0, 4.0, 4.0]).unwrap()) < 1e-15);
    }

    #[test]
    fn pullback_top_coefficients() {
        let p = ComplexPolynomial::new(vec![c(0.3, 0.1), c(-1.0, 2.0), c(0.5, 0.5), c(0.0, 1.0), c(2.0, 0.0)]).unwrap();
        let t = AffineMap::new(c(0.7, -0.2), c(-0.4, 1.1));
        let q = affine_pullback(&p, &t);
        let n = 4;
        let an = p.coeffs()[n];
        assert!((q.coeffs()[n] - t.a.powu(4) * an).norm() < 1e-14);
        let expect = t.a.powu(3) * (an * t.b * 4.0 + p.coeffs()[n - 1]);
        assert!((q.coeffs()[n - 1] - expect).norm() < 1e-13);
        assert!((q.coeffs()[0] - p.eval(t.b)).norm() < 1e-13);
    }

    #[test]
    fn normalize_examples() {
        let p = ComplexPolynomial::from_real(&[0.0, 0.0, 0.5]).unwrap();
        let (q, t) = normalize_el(&p);
        assert!(q.coeff_distance(&p) < 1e-15 && t.distance(&AffineMap::identity()) < 1e-15);

        let p = ComplexPolynomial::from_real(&[0.0, 0.0, 1.0]).unwrap();
        let (q, t) = normalize_el(&p);
        assert!(q.coeff_distance(&ComplexPolynomial::from_real(&[0.0, 0.0, 0.5]).unwrap()) < 1e-15);
        assert!((t.a - c(0.5f64.sqrt(), 0.0)).norm() < 1e-15 && t.b.norm() < 1e-15);

        let z1 = c(0.3, -0.7);
        let p = ComplexPolynomial::new(vec![c(0.0, 0.0), -z1, c(0.5, 0.0)]).unwrap();
        let (q, t) = normalize_el(&p);
        let expect = ComplexPolynomial::new(vec![-z1 * z1 / 2.0, c(0.0, 0.0), c(0.5, 0.0)]).unwrap();
        assert!(q.coeff_distance(&expect) < 1e-15);
        assert!((t.a - c(1.0, 0.0)).norm() < 1e-15 && (t.b - z1).norm() < 1e-15);
        assert!(lambda_project(&p).coeff_distance(&expect) < 1e-15);
    }

    #[test]
    fn psi_examples() {
        let (p, w) = psi_from_critical_points(&[c(0.0, 0.0)]);
        assert!(p.coeff_distance(&ComplexPolynomial::from_real(&[0.0, 0.0, 0.5]).unwrap()) < 1e-15);
        assert!(w[0].norm() < 1e-15);

        let z1 = c(0.2, 0.9);
        let (p, w) = psi_from_critical_points(&[z1]);
        assert!(p.coeff_distance(&ComplexPolynomial::new(vec![c(0.0, 0.0), -z1, c(0.5, 0.0)]).unwrap()) < 1e-15);
        assert!((w[0] + z1 * z1 / 2.0).norm() < 1e-15);

        let (p, w) = psi_from_critical_points(&[c(1.0, 0.0), c(-1.0, 0.0)]);
        assert!(p.coeff_distance(&ComplexPolynomial::from_real(&[0.0, -1.0, 0.0, 1.0 / 3.0]).unwrap()) < 1e-15);
        assert!((w[0] - c(-2.0 / 3.0, 0.0)).norm() < 1e-15);
        assert!((w[1] - c(2.0 / 3.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn lambda_fiber_for_quadratics() {
        let w = c(-0.3, 0.2);
        let s = (w * -2.0).sqrt();
        let expect = ComplexPolynomial::new(vec![w, c(0.0, 0.0), c(0.5, 0.0)]).unwrap();
        for z1 in [s, -s] {
            let (tilde, _) = psi_from_critical_points(&[z1]);
            assert!(lambda_project(&tilde).coeff_distance(&expect) < 1e-14);
        }
    }

    fn cplx() -> impl Strategy<Value = Complex<f64>> {
        (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(a, b)| c(a, b))
    }

    fn poly() -> impl Strategy<Value = ComplexPolynomial<f64>> {
        (1usize..=6, 0.2..3.0f64, prop::collection::vec(cplx(), 6)).prop_map(|(n, lead, rest)| {
            let mut v: Vec<_> = rest.into_iter().take(n).collect();
            v.push(c(lead, 0.0));
            ComplexPolynomial::new(v).unwrap()
        })
    }

    proptest! {
        #[test]
        fn el_form_is_idempotent_and_g_invariant(p in poly(), a in 0.3..3.0f64, b in cplx()) {
            let (q, t) = normalize_el(&p);
            prop_assert!(affine_pullback(&p, &t).coeff_distance(&q) < 1e-9 * (1.0 + q.max_abs_coeff()));
            let (qq, tt) = normalize_el(&q);
            prop_assert!(qq.coeff_distance(&q) < 1e-12 * (1.0 + q.max_abs_coeff()));
            prop_assert!(tt.distance(&AffineMap::identity()) < 1e-12);
            let moved = affine_pullback(&p, &AffineMap::scaling(a, b));
            let (q2, _) = normalize_el(&moved);
            prop_assert!(q2.coeff_distance(&q) < 1e-8 * (1.0 + q.max_abs_coeff()));
        }

        #[test]
        fn critical_values_survive_domain_maps(p in poly(), a in 0.3..3.0f64, b in cplx()) {
            prop_assume!(p.degree() >= 2);
            let moved = affine_pullback(&p, &AffineMap::scaling(a, b));
            let v1 = critical_data(&p).unwrap().values;
            let v2 = critical_data(&moved).unwrap().values;
            let scale = 1.0 + v1.iter().fold(0.0f64, |m, v| m.max(v.norm()));
            prop_assert!(multiset_distance(&v1, &v2) < 1e-6 * scale);
        }

        #[test]
        fn psi_then_critical_points_recovers_zetas(z in prop::collection::vec(cplx(), 1..=5)) {
            let (tilde, _) = psi_from_critical_points(&z);
            let back = critical_data(&tilde).unwrap().points;
            // separated inputs only: clustered inputs are resolved to sqrt(eps)
            let mut sep = f64::INFINITY;
            for i in 0..z.len() { for j in 0..i { sep = sep.min((z[i]-z[j]).norm()); } }
            prop_assume!(sep > 1e-3);
            prop_assert!(multiset_distance(&back, &z) < 1e-8);
        }
    }
}
