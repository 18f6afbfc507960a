#![allow(dead_code)]

use lemniprint::polynomial::{critical_data, ComplexPolynomial};
use lemniprint::Complex64;
use rand::Rng;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn disk_point<R: Rng>(rng: &mut R, radius: f64) -> Complex64 {
    let r = radius * rng.gen::<f64>().sqrt();
    let t = rng.gen_range(0.0..std::f64::consts::TAU);
    Complex64::from_polar(r, t)
}

/// Random polynomial of degree `n` with positive leading coefficient whose
/// largest critical value modulus is `e^u`, `u` uniform in `[-spread, spread]`.
/// Returns `None` when a critical value lands within `band` of the unit circle.
pub fn random_polynomial<R: Rng>(rng: &mut R, n: usize, spread: f64, band: f64) -> Option<ComplexPolynomial<f64>> {
    let zeros: Vec<_> = (0..n).map(|_| disk_point(rng, 1.0)).collect();
    let monic = ComplexPolynomial::from_roots(c(1.0, 0.0), &zeros).ok()?;
    let m0 = critical_data(&monic).ok()?.max_abs_value;
    if m0 < 1e-3 {
        return None;
    }
    let lead = rng.gen_range(-spread..spread).exp() / m0;
    let p = monic.scale(c(lead, 0.0)).ok()?;
    let cd = critical_data(&p).ok()?;
    if cd.values.iter().any(|w| (w.norm() - 1.0).abs() < band) {
        return None;
    }
    Some(p)
}

/// Random proper polynomial of degree `n` with margin at least `margin`.
pub fn random_proper<R: Rng>(rng: &mut R, n: usize, margin: f64) -> ComplexPolynomial<f64> {
    loop {
        let zeros: Vec<_> = (0..n).map(|_| disk_point(rng, 1.0)).collect();
        let monic = ComplexPolynomial::from_roots(c(1.0, 0.0), &zeros).unwrap();
        if n == 1 {
            return monic.scale(c(rng.gen_range(0.5..2.0), 0.0)).unwrap();
        }
        let m0 = critical_data(&monic).unwrap().max_abs_value;
        if m0 < 1e-3 {
            continue;
        }
        let target = rng.gen_range(0.2..(1.0 - margin));
        let p = monic.scale(c(target / m0, 0.0)).unwrap();
        if critical_data(&p).unwrap().max_abs_value <= 1.0 - margin {
            return p;
        }
    }
}

/// Random proper EL polynomial `z^n/n + a_{n-2} z^{n-2} + ... + a_0`.
pub fn random_proper_el<R: Rng>(rng: &mut R, n: usize, margin: f64) -> ComplexPolynomial<f64> {
    let p = random_proper(rng, n, margin);
    lemniprint::polynomial::normalize_el(&p).0
}
