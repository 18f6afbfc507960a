//! Acceptance criteria for the lemniscate fingerprint toolkit.
//!
//! Each test prints one `[PASS]`/`[FAIL]` line with the measured quantity
//! and asserts the pinned threshold.

mod common;

use std::time::Instant;

use common::*;
use lemniprint::approx::approximate_diffeo;
use lemniprint::blaschke::{poisson_kernel, BlaschkeProduct};
use lemniprint::fingerprint::{c1_distance, fingerprint, normalize_triple};
use lemniprint::polynomial::{affine_pullback, component_count_oracle, is_proper, AffineMap, ComplexPolynomial};
use lemniprint::scalar::cis;
use lemniprint::weld::{count_classes, reconstruct, recover_affine, WeldOptions};
use lemniprint::{Complex64, Diffeo, Error};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;

fn report(id: &str, pass: bool, detail: String) {
    println!("[{}] {id}: {detail}", if pass { "PASS" } else { "FAIL" });
}

#[test]
fn criterion_1_properness_matches_connectivity() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut total, mut agree, mut proper) = (0, 0, 0);
    while total < 200 {
        let n = 2 + total % 5;
        let Some(p) = random_polynomial(&mut rng, n, 1.0, 0.05) else { continue };
        total += 1;
        let certified = match is_proper(&p, 1e-6) {
            Ok(_) => true,
            Err(Error::NotProper { .. }) => false,
            Err(e) => panic!("unexpected {e}"),
        };
        let components = component_count_oracle(&p, 512).expect("oracle");
        proper += certified as usize;
        if certified == (components == 1) {
            agree += 1;
        } else {
            println!("disagreement: proper={certified} components={components} p={:?}", p.coeffs());
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let pass = agree == total && secs <= 120.0;
    report(
        "C1 properness <=> connected",
        pass,
        format!("{agree}/{total} agree ({proper} proper), {secs:.1}s (limit 120s)"),
    );
    assert!(pass);
}

fn grid_per_degree() -> usize {
    512
}

#[test]
fn criterion_2_poisson_identity() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let m = 4096;
    let delta = 1e-5;
    let mut worst = 0.0f64;
    for i in 0..50 {
        let n = 1 + i % 8;
        let zeros = (0..n).map(|_| disk_point(&mut rng, 0.9)).collect();
        let b = BlaschkeProduct::new(cis(rng.gen_range(-3.0..3.0)), zeros).unwrap();
        for j in 0..m {
            let t = TAU * j as f64 / m as f64;
            // central difference of arg B; the ratio keeps the branch local
            let fd = (b.eval(cis(t + delta)) / b.eval(cis(t - delta))).arg() / (2.0 * delta);
            let poisson: f64 = b.zeros().iter().map(|a| poisson_kernel(t, *a)).sum();
            worst = worst.max((fd - poisson).abs());
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let pass = worst <= 1e-6 && secs <= 30.0;
    report("C2 d/dθ arg B = Poisson sum", pass, format!("sup error {worst:.2e} (limit 1e-6), {secs:.1}s (limit 30s)"));
    assert!(pass);
}

#[test]
fn criterion_3_fingerprint_self_consistency() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut phase, mut cross, mut zero) = (0.0f64, 0.0f64, 0.0f64);
    for i in 0..20 {
        let n = 2 + i % 3;
        let l = is_proper(&random_proper(&mut rng, n, 0.05), 1e-6).unwrap();
        let f = fingerprint(&l, grid_per_degree() * n).unwrap();
        phase = phase.max(f.report.phase_discrepancy);
        cross = cross.max(f.report.cross_check);
        for (a, xi) in f.blaschke.zeros().iter().zip(&l.zeros) {
            zero = zero.max((f.interior.eval(*a) - xi).norm());
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let pass = phase <= 1e-6 && cross <= 1e-6 && zero <= 1e-6 && secs <= 300.0;
    report(
        "C3 fingerprint self-consistency",
        pass,
        format!("B phase {phase:.2e}, cross-check {cross:.2e}, |Φ(a)-ξ| {zero:.2e} (limit 1e-6), {secs:.1}s (limit 300s)"),
    );
    assert!(pass);
}

#[test]
fn criterion_4_affine_invariance() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst = 0.0f64;
    for i in 0..20 {
        let n = 2 + i % 3;
        let p = random_proper(&mut rng, n, 0.05);
        let t = AffineMap::scaling(rng.gen_range(0.5..2.0), disk_point(&mut rng, 2.0));
        let l1 = is_proper(&p, 1e-6).unwrap();
        let l2 = is_proper(&affine_pullback(&p, &t.inverse()), 1e-6).unwrap();
        let m = grid_per_degree() * n;
        let k1 = fingerprint(&l1, m).unwrap().diffeo;
        let k2 = fingerprint(&l2, m).unwrap().diffeo;
        worst = worst.max(c1_distance(&normalize_triple(&k1), &normalize_triple(&k2)));
    }
    let secs = start.elapsed().as_secs_f64();
    let pass = worst <= 1e-5 && secs <= 300.0;
    report("C4 affine invariance", pass, format!("sup C1 error {worst:.2e} (limit 1e-5), {secs:.1}s (limit 300s)"));
    assert!(pass);
}

#[test]
fn criterion_5_approximation_pipeline() {
    let start = Instant::now();
    let psi = Diffeo::from_fn(4096, |t| t + 0.3 * t.sin(), |t| 1.0 + 0.3 * t.cos()).unwrap();
    let errors: Vec<f64> =
        [8, 16, 32, 64].iter().map(|&n| approximate_diffeo(&psi, n, 0.9, 16).unwrap().report.c1_error).collect();
    let decreasing = errors.windows(2).all(|w| w[1] < w[0]);
    let identity = approximate_diffeo(&Diffeo::identity(4096), 4, 0.5, 16).unwrap();
    let expect = 2.0 * 0.5f64.powi(4) / (1.0 - 0.5f64.powi(4));
    let dev = identity.report.sup_derivative_error;
    let secs = start.elapsed().as_secs_f64();
    let pass = decreasing && (dev - expect).abs() <= 1e-6 && secs <= 60.0;
    report(
        "C5 Blaschke approximation",
        pass,
        format!(
            "C1 errors n=8,16,32,64: {:.3e} {:.3e} {:.3e} {:.3e}; identity deviation {dev:.10} vs {expect:.10}, {secs:.1}s (limit 60s)",
            errors[0], errors[1], errors[2], errors[3]
        ),
    );
    assert!(pass);
}

/// `min_ε max_k |q_k ε^k - p_k|` over `εⁿ = 1`.
fn distance_up_to_rotation(p: &ComplexPolynomial<f64>, q: &ComplexPolynomial<f64>) -> f64 {
    let n = p.degree();
    (0..n)
        .map(|j| {
            let eps = cis(TAU * j as f64 / n as f64);
            q.coeffs().iter().zip(p.coeffs()).enumerate().map(|(k, (a, b))| (a * eps.powu(k as u32) - b).norm()).fold(0.0, f64::max)
        })
        .fold(f64::INFINITY, f64::min)
}

#[test]
fn criterion_6_reconstruction_round_trip() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst = 0.0f64;
    for i in 0..20 {
        let n = 2 + i % 2;
        let p = random_proper_el(&mut rng, n, 0.05);
        let l = is_proper(&p, 1e-6).unwrap();
        let b = fingerprint(&l, grid_per_degree() * n).unwrap().blaschke;
        let r = reconstruct(&b, WeldOptions::default()).unwrap();
        worst = worst.max(distance_up_to_rotation(&p, &r.lemniscate.poly));
    }
    let b = BlaschkeProduct::from_zeros(vec![c(0.0, 0.0), c(0.5, 0.0)]).unwrap();
    let r = reconstruct(&b, WeldOptions::default()).unwrap();
    // root of z² - 4z + 1 inside the disk, and its image under B
    let zc = 2.0 - 3f64.sqrt();
    let w1 = zc * (zc - 0.5) / (1.0 - 0.5 * zc);
    let expect = ComplexPolynomial::new(vec![c(w1, 0.0), c(0.0, 0.0), c(0.5, 0.0)]).unwrap();
    let example = r.lemniscate.poly.coeff_distance(&expect);
    let secs = start.elapsed().as_secs_f64();
    let pass = worst <= 1e-4 && example <= 1e-10 && secs <= 600.0;
    report(
        "C6 reconstruct(fingerprint(P)) = P",
        pass,
        format!("coefficient error {worst:.2e} (limit 1e-4), worked example {example:.2e} (limit 1e-10), {secs:.1}s (limit 600s)"),
    );
    assert!(pass);
}

fn generic_values(rng: &mut ChaCha8Rng, count: usize) -> Vec<Complex64> {
    loop {
        let w: Vec<_> = (0..count).map(|_| disk_point(rng, 0.9)).collect();
        let separated = w.iter().enumerate().all(|(i, a)| w[i + 1..].iter().all(|b| (a - b).norm() >= 0.05));
        if separated {
            return w;
        }
    }
}

#[test]
fn criterion_7_class_counts() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut all = true;
    for (n, expect) in [(2, (1, 1)), (3, (3, 1)), (4, (16, 4))] {
        let start = Instant::now();
        let mut counts = Vec::new();
        for _ in 0..5 {
            let w = generic_values(&mut rng, n - 1);
            let r = count_classes(&w, WeldOptions::default()).unwrap();
            counts.push((r.polynomial_count, r.class_count));
        }
        let secs = start.elapsed().as_secs_f64();
        let pass = counts.iter().all(|&c| c == expect) && secs <= 900.0;
        all &= pass;
        report(&format!("C7 class counts n={n}"), pass, format!("{counts:?} expected {expect:?}, {secs:.1}s (limit 900s)"));
    }
    assert!(all);
}

#[test]
fn criterion_8_affine_rigidity() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst = 0.0f64;
    for i in 0..20 {
        let n = 2 + i % 3;
        let p = random_proper(&mut rng, n, 0.05);
        // Q = c·(P∘F) with |c| = 1 fixing the leading coefficient. arg F' stays
        // below π/n: a rotation by 2π/n may be a symmetry of Γ(P), as it always
        // is for n = 2, and then F is only determined modulo that symmetry.
        let spread = std::f64::consts::PI / n as f64;
        let a = Complex64::from_polar(rng.gen_range(0.5..2.0), rng.gen_range(-spread..spread) * 0.95);
        let f = AffineMap::new(a, disk_point(&mut rng, 2.0));
        let q = affine_pullback(&p, &f);
        let q = q.scale(q.leading().conj() / q.leading().norm()).unwrap();
        let l1 = is_proper(&p, 1e-6).unwrap();
        let l2 = is_proper(&q, 1e-6).unwrap();
        // Γ(Q) = F⁻¹(Γ(P))
        let t = recover_affine(&l1, &l2, WeldOptions::default()).unwrap();
        worst = worst.max(t.distance(&f.inverse()));
    }
    let secs = start.elapsed().as_secs_f64();
    let pass = worst <= 1e-6 && secs <= 180.0;
    report("C8 affine rigidity", pass, format!("parameter error {worst:.2e} (limit 1e-6), {secs:.1}s (limit 180s)"));
    assert!(pass);
}
