//! Simultaneous root finding (Aberth–Ehrlich) with cluster averaging for
//! multiple roots.

use num_complex::Complex;

use super::ComplexPolynomial;
use crate::error::{Error, Result};
use crate::scalar::{sort_lex, Real};

/// Tuning knobs for [`roots`].
#[derive(Debug, Clone, Copy)]
pub struct RootOptions {
    pub max_iterations: usize,
    /// Roots closer than this (relative to `max(1, |z|)`) are treated as one
    /// multiple root and replaced by their mean.
    pub cluster_tol: f64,
    /// Accepted residual `|P(z)| <= residual_tol * (1 + Σ|a_k||z|^k)`.
    pub residual_tol: f64,
}

impl Default for RootOptions {
    fn default() -> Self {
        Self {
            max_iterations: 2000,
            cluster_tol: 1e-7,
            residual_tol: 1e-10,
        }
    }
}

/// All `n` roots of `p` with multiplicity, sorted lexicographically.
pub fn roots<T: Real>(p: &ComplexPolynomial<T>, opts: RootOptions) -> Result<Vec<Complex<T>>> {
    let n = p.degree();
    let a = p.coeffs();
    let mut z = match n {
        0 => return Ok(Vec::new()),
        1 => vec![-a[0] / a[1]],
        _ => aberth(p, initial_guesses(p), opts.max_iterations),
    };
    if n > 1 {
        average_clusters(p, &mut z, T::lit(opts.cluster_tol));
        polish(p, &mut z);
    }
    // backward-error form of the residual test: the evaluation itself
    // carries rounding error proportional to sum |a_k| |z|^k
    let tol = T::tol(opts.residual_tol);
    let mut worst = T::zero();
    for &r in &z {
        let magnitude = p.coeffs().iter().rev().fold(T::zero(), |acc, c| acc * r.norm() + c.norm());
        let ratio = p.eval(r).norm() / (T::one() + magnitude);
        worst = worst.max(ratio);
    }
    if !(worst <= tol) {
        return Err(Error::NonConvergence { residual: worst.to_f64_lossy() });
    }
    sort_lex(&mut z);
    Ok(z)
}

/// Points on a circle about the root centroid whose radius is the geometric
/// mean distance of the roots from that centroid.
fn initial_guesses<T: Real>(p: &ComplexPolynomial<T>) -> Vec<Complex<T>> {
    let n = p.degree();
    let a = p.coeffs();
    let centre = -a[n - 1] / (a[n] * T::of(n));
    let spread = (p.eval(centre) / a[n]).norm().powf(T::one() / T::of(n));
    let scale = T::one() + centre.norm();
    let radius = if spread > T::epsilon() * scale { spread } else { T::lit(1e-3) * scale };
    let offset = T::lit(0.4);
    (0..n)
        .map(|k| {
            let ang = T::TAU() * T::of(k) / T::of(n) + offset;
            centre + Complex::new(ang.cos(), ang.sin()) * radius
        })
        .collect()
}

fn aberth<T: Real>(p: &ComplexPolynomial<T>, mut z: Vec<Complex<T>>, max_iter: usize) -> Vec<Complex<T>> {
    let n = z.len();
    let tiny = T::epsilon() * T::lit(4.0);
    let mut done = vec![false; n];
    for _ in 0..max_iter {
        let mut all_done = true;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let (v, dv) = p.eval_with_derivative(z[i]);
            if v.norm() == T::zero() {
                done[i] = true;
                continue;
            }
            let ratio = if dv.norm() == T::zero() {
                // flat spot: nudge off it
                Complex::new(tiny, tiny) * (T::one() + z[i].norm())
            } else {
                v / dv
            };
            let mut s = Complex::new(T::zero(), T::zero());
            for j in 0..n {
                if j != i {
                    let d = z[i] - z[j];
                    if d.norm() > T::zero() {
                        s = s + d.inv();
                    }
                }
            }
            let denom = Complex::new(T::one(), T::zero()) - ratio * s;
            let step = if denom.norm() > T::zero() { ratio / denom } else { ratio };
            z[i] = z[i] - step;
            if step.norm() <= tiny * (T::one() + z[i].norm()) || !step.norm().is_finite() {
                done[i] = true;
            } else {
                all_done = false;
            }
        }
        if all_done {
            break;
        }
    }
    z
}

fn average_clusters<T: Real>(p: &ComplexPolynomial<T>, z: &mut [Complex<T>], tol: T) {
    let n = z.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while parent[r] != r {
            r = parent[r];
        }
        parent[i] = r;
        r
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let scale = T::one().max(z[i].norm()).max(z[j].norm());
            if (z[i] - z[j]).norm() <= tol * scale {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[rj] = ri;
                }
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..n {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    for members in groups.values().filter(|m| m.len() > 1) {
        let mean = members.iter().fold(Complex::new(T::zero(), T::zero()), |s, &i| s + z[i]) / T::of(members.len());
        let worst = members.iter().fold(T::zero(), |m, &i| m.max(p.eval(z[i]).norm()));
        if p.eval(mean).norm() <= worst {
            for &i in members {
                z[i] = mean;
            }
        }
    }
}

/// A couple of Newton steps on isolated roots, kept only when they help.
fn polish<T: Real>(p: &ComplexPolynomial<T>, z: &mut [Complex<T>]) {
    let n = z.len();
    for i in 0..n {
        let isolated = (0..n).all(|j| j == i || z[j] != z[i]);
        if !isolated {
            continue;
        }
        for _ in 0..2 {
            let (v, dv) = p.eval_with_derivative(z[i]);
            if dv.norm() == T::zero() {
                break;
            }
            let cand = z[i] - v / dv;
            if p.eval(cand).norm() < v.norm() {
                z[i] = cand;
            } else {
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::multiset_distance;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn linear_and_quadratic() {
        let p = ComplexPolynomial::new(vec![c(2.0, 0.0), c(-4.0, 0.0)]).unwrap();
        assert_eq!(roots(&p, RootOptions::default()).unwrap(), vec![c(0.5, 0.0)]);
        // z^2 - 4z + 1
        let q = ComplexPolynomial::from_real(&[1.0, -4.0, 1.0]).unwrap();
        let r = roots(&q, RootOptions::default()).unwrap();
        let s3 = 3f64.sqrt();
        assert!((r[0] - c(2.0 - s3, 0.0)).norm() < 1e-14);
        assert!((r[1] - c(2.0 + s3, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn multiple_root_is_recovered_by_cluster_averaging() {
        let p = ComplexPolynomial::from_roots(c(1.0, 0.0), &[c(0.5, 0.5); 3]).unwrap();
        let r = roots(&p, RootOptions::default()).unwrap();
        for z in r {
            assert!((z - c(0.5, 0.5)).norm() < 1e-5, "{z}");
        }
        let q = ComplexPolynomial::new(vec![c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        for z in roots(&q, RootOptions::default()).unwrap() {
            assert!(z.norm() < 1e-12);
        }
    }

    #[test]
    fn random_polynomials_meet_residual_contract() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let n = rng.gen_range(2..=6);
            let mut coeffs: Vec<_> = (0..n).map(|_| c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))).collect();
            coeffs.push(c(rng.gen_range(0.5..2.0), 0.0));
            let p = ComplexPolynomial::new(coeffs).unwrap();
            let r = roots(&p, RootOptions::default()).unwrap();
            assert_eq!(r.len(), n);
            let bound = 1e-10 * (1.0 + p.max_abs_coeff());
            for z in &r {
                assert!(p.eval(*z).norm() <= bound);
            }
        }
    }

    #[test]
    fn high_degree_with_tiny_leading_coefficient() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..100 {
            let n = rng.gen_range(7..=12);
            let coeffs: Vec<_> = (0..=n).map(|_| c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))).collect();
            let p = ComplexPolynomial::new(coeffs).unwrap();
            assert_eq!(roots(&p, RootOptions::default()).unwrap().len(), n);
        }
    }

    #[test]
    fn recovers_planted_roots() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let n = rng.gen_range(1..=8);
            let planted: Vec<_> = (0..n).map(|_| c(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5))).collect();
            let p = ComplexPolynomial::from_roots(c(0.7, 0.0), &planted).unwrap();
            let r = roots(&p, RootOptions::default()).unwrap();
            assert!(multiset_distance(&r, &planted) < 1e-7);
        }
    }

    #[test]
    fn single_precision_quadratic() {
        let q = ComplexPolynomial::<f32>::from_real(&[1.0, -4.0, 1.0]).unwrap();
        let r = roots(&q, RootOptions::default()).unwrap();
        assert!((r[0].re - (2.0 - 3f32.sqrt())).abs() < 1e-5);
    }
}
