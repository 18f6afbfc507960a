//! The inverse problem: from a Blaschke product to the lemniscate whose
//! fingerprint is its `n`th root.
//!
//! The critical values of `P` and of `B = P ∘ Φ₋` coincide. Candidate
//! polynomials are therefore the solutions of `Ψ(ζ) = w`, where `w` are the
//! critical values of `B` and `Ψ` sends prescribed critical points `ζ` to the
//! critical values of `P̃(z) = ∫_0^z ∏ (s - ζ_k) ds`. Every candidate has the
//! right critical values; the fingerprint picks out the answer.
//!
//! Solutions of `Ψ(ζ) = w` come in orbits of two exact symmetries:
//! `ζ ↦ ζ - r` for every root `r` of `P̃`, and `ζ ↦ εζ` for `εⁿ = 1`.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::blaschke::{blaschke_critical_values, BlaschkeProduct};
use crate::error::{Error, Result};
use crate::fingerprint::{fingerprint, root_distance, BlaschkeRoot};
use crate::polynomial::{
    critical_data, is_proper, lambda_project, normalize_el, psi_from_critical_points, roots, AffineMap, ComplexPolynomial,
    ProperLemniscate, RootOptions,
};
use crate::scalar::{cis, multiset_distance, real_cmp, Real};

/// Largest accepted C¹ discrepancy between a candidate's fingerprint and `ⁿ√B`.
pub const MATCH_TOL: f64 = 1e-4;
/// Tolerance for the fingerprint agreement required by [`recover_affine`].
pub const AFFINE_TOL: f64 = 1e-5;
/// Separation below which two critical values count as coalescing.
pub const DISCRIMINANT_GUARD: f64 = 1e-3;
/// Solutions closer than this (sup norm) are identified.
pub const DEDUP_TOL: f64 = 1e-7;

/// Settings shared by the multistart stages.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeldOptions {
    pub seed: u64,
    /// Multistart attempts; `None` means `50 n^{n-1}`.
    pub attempts: Option<usize>,
    /// Fingerprint grid per unit of degree; the grid is `grid_per_degree · n`.
    pub grid_per_degree: usize,
}

impl Default for WeldOptions {
    fn default() -> Self {
        Self { seed: 0, attempts: None, grid_per_degree: 512 }
    }
}

/// `n^{n-1}`, the number of solutions of `Ψ(ζ) = w` with multiplicity.
pub fn expected_solutions(n: usize) -> usize {
    n.pow(n.saturating_sub(1) as u32)
}

/// Distinct solutions of `Ψ(ζ) = w` found by multistart Newton.
#[derive(Debug, Clone, PartialEq)]
pub struct PsiSolutions<T> {
    /// Each solution is `ζ_1 .. ζ_{n-1}` paired with `w_1 .. w_{n-1}`.
    pub solutions: Vec<Vec<Complex<T>>>,
    pub expected: usize,
    pub attempts: usize,
    /// Attempts whose Newton iteration reached the residual tolerance.
    pub converged: usize,
}

/// `Ψ(ζ) - w` and the Jacobian `J_jk = -Q_k(ζ_j)`, with
/// `Q_k(z) = ∫_0^z ∏_{l≠k} (s - ζ_l) ds`.
fn residual_and_jacobian<T: Real>(zeta: &[Complex<T>], w: &[Complex<T>]) -> (Vec<Complex<T>>, Vec<Vec<Complex<T>>>) {
    let one = Complex::new(T::one(), T::zero());
    let (_, values) = psi_from_critical_points(zeta);
    let residual = values.iter().zip(w).map(|(v, t)| v - t).collect();
    let q: Vec<ComplexPolynomial<T>> = (0..zeta.len())
        .map(|k| {
            let others: Vec<_> = zeta.iter().enumerate().filter(|&(l, _)| l != k).map(|(_, z)| *z).collect();
            ComplexPolynomial::from_roots(one, &others).expect("monic").integral()
        })
        .collect();
    let jac = zeta.iter().map(|&zj| q.iter().map(|qk| -qk.eval(zj)).collect()).collect();
    (residual, jac)
}

fn sup_norm<T: Real>(v: &[Complex<T>]) -> T {
    v.iter().fold(T::zero(), |a, z| a.max(z.norm()))
}

/// Gaussian elimination with partial pivoting.
fn solve_dense<T: Real>(mut a: Vec<Vec<Complex<T>>>, mut b: Vec<Complex<T>>) -> Option<Vec<Complex<T>>> {
    let m = b.len();
    for col in 0..m {
        let pivot = (col..m).max_by(|&i, &j| real_cmp(a[i][col].norm(), a[j][col].norm()))?;
        if !(a[pivot][col].norm() > T::zero()) {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..m {
            let f = a[row][col] / a[col][col];
            for k in col..m {
                let v = a[col][k];
                a[row][k] = a[row][k] - f * v;
            }
            let v = b[col];
            b[row] = b[row] - f * v;
        }
    }
    let mut x = vec![Complex::new(T::zero(), T::zero()); m];
    for i in (0..m).rev() {
        let s = (i + 1..m).fold(b[i], |s, k| s - a[i][k] * x[k]);
        x[i] = s / a[i][i];
    }
    x.iter().all(|z| z.re.is_finite() && z.im.is_finite()).then_some(x)
}

/// Damped Newton on `Ψ(ζ) = w`, continued while the residual decreases so
/// that solutions where the Jacobian degenerates are still resolved.
fn newton_psi<T: Real>(w: &[Complex<T>], mut zeta: Vec<Complex<T>>) -> Option<(Vec<Complex<T>>, T)> {
    let scale = T::one() + sup_norm(w);
    let (mut res, mut jac) = residual_and_jacobian(&zeta, w);
    let mut r = sup_norm(&res);
    for _ in 0..500 {
        if r == T::zero() {
            break;
        }
        let Some(step) = solve_dense(jac.clone(), res.clone()) else { break };
        let mut t = T::one();
        let mut improved = false;
        for _ in 0..40 {
            let cand: Vec<_> = zeta.iter().zip(&step).map(|(z, s)| z - s * t).collect();
            let (cres, cjac) = residual_and_jacobian(&cand, w);
            let cr = sup_norm(&cres);
            if cr < r {
                zeta = cand;
                res = cres;
                jac = cjac;
                r = cr;
                improved = true;
                break;
            }
            t = t / T::lit(2.0);
        }
        if !improved || sup_norm(&zeta) > T::lit(1e4) {
            break;
        }
    }
    (r <= T::tol(1e-12) * scale).then_some((zeta, r))
}

fn insert_distinct<T: Real>(set: &mut Vec<(Vec<Complex<T>>, T)>, cand: Vec<Complex<T>>, res: T) -> bool {
    let tol = T::lit(DEDUP_TOL);
    for (s, r) in set.iter_mut() {
        let d = s.iter().zip(&cand).fold(T::zero(), |a, (x, y)| a.max((x - y).norm()));
        if d <= tol {
            if res < *r {
                *s = cand;
                *r = res;
            }
            return false;
        }
    }
    set.push((cand, res));
    true
}

/// All solutions of `Ψ(ζ) = w` reachable by `attempts` Newton runs seeded
/// uniformly in the disk of radius 3, closed under the root-shift and
/// rotation symmetries and deduplicated at `1e-7`.
pub fn solve_psi<T: Real>(w: &[Complex<T>], attempts: usize, seed: u64) -> Result<PsiSolutions<T>> {
    let n = w.len() + 1;
    let expected = expected_solutions(n);
    if attempts < 50 * expected {
        return Err(Error::InvalidInput(format!("need at least 50 n^(n-1) = {} attempts", 50 * expected)));
    }
    if n == 1 {
        return Ok(PsiSolutions { solutions: vec![Vec::new()], expected, attempts, converged: attempts });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let seeds: Vec<Vec<Complex<T>>> = (0..attempts)
        .map(|_| {
            (0..n - 1)
                .map(|_| {
                    let r = 3.0 * rng.gen::<f64>().sqrt();
                    let t = rng.gen_range(0.0..std::f64::consts::TAU);
                    Complex::new(T::lit(r * t.cos()), T::lit(r * t.sin()))
                })
                .collect()
        })
        .collect();
    let found: Vec<(Vec<Complex<T>>, T)> = seeds.into_par_iter().filter_map(|s| newton_psi(w, s)).collect();
    let converged = found.len();
    let mut set: Vec<(Vec<Complex<T>>, T)> = Vec::new();
    for (z, r) in found {
        insert_distinct(&mut set, z, r);
    }
    close_under_symmetries(w, &mut set);
    let mut solutions: Vec<Vec<Complex<T>>> = set.into_iter().map(|(z, _)| z).collect();
    solutions.sort_by(|a, b| {
        a.iter().zip(b).map(|(x, y)| crate::scalar::lex_cmp(x, y)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(PsiSolutions { solutions, expected, attempts, converged })
}

fn close_under_symmetries<T: Real>(w: &[Complex<T>], set: &mut Vec<(Vec<Complex<T>>, T)>) {
    let n = w.len() + 1;
    let cap = 4 * expected_solutions(n);
    let mut frontier: Vec<Vec<Complex<T>>> = set.iter().map(|(z, _)| z.clone()).collect();
    while let Some(zeta) = frontier.pop() {
        if set.len() >= cap {
            break;
        }
        let mut images = Vec::new();
        let (tilde, _) = psi_from_critical_points(&zeta);
        if let Ok(rs) = roots(&tilde, RootOptions::default()) {
            for r in rs {
                images.push(zeta.iter().map(|z| z - r).collect::<Vec<_>>());
            }
        }
        for k in 1..n {
            let eps = cis(T::TAU() * T::of(k) / T::of(n));
            images.push(zeta.iter().map(|z| z * eps).collect());
        }
        for img in images {
            if let Some((z, r)) = newton_psi(w, img) {
                if insert_distinct(set, z.clone(), r) {
                    frontier.push(z);
                }
            }
        }
    }
}

/// Distinct EL polynomials among the Λ-projections of `Ψ` solutions.
fn el_candidates<T: Real>(solutions: &[Vec<Complex<T>>]) -> Vec<ComplexPolynomial<T>> {
    let mut out: Vec<ComplexPolynomial<T>> = Vec::new();
    for zeta in solutions {
        let (tilde, _) = psi_from_critical_points(zeta);
        let p = lambda_project(&tilde);
        if out.iter().all(|q| q.coeff_distance(&p) > T::lit(1e-6)) {
            out.push(p);
        }
    }
    out
}

/// A candidate of [`reconstruct`] and its fingerprint discrepancy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: Deserialize<'de>"))]
pub struct Candidate<T> {
    pub poly: ComplexPolynomial<T>,
    /// `None` when the candidate was filtered before its fingerprint was taken.
    pub discrepancy: Option<T>,
}

/// Outcome of [`reconstruct`].
#[derive(Debug, Clone)]
pub struct Reconstruction<T> {
    pub lemniscate: ProperLemniscate<T>,
    pub critical_values: Vec<Complex<T>>,
    pub candidates: Vec<Candidate<T>>,
    pub discrepancy: T,
    /// Multiset distance between the critical values of the answer and of `B`.
    pub critical_value_error: T,
    pub solutions_found: usize,
    pub solutions_expected: usize,
}

/// The proper lemniscate, in EL form, whose fingerprint is `ⁿ√B`.
pub fn reconstruct<T: Real>(b: &BlaschkeProduct<T>, opts: WeldOptions) -> Result<Reconstruction<T>> {
    let n = b.degree();
    let one = Complex::new(T::one(), T::zero());
    if n == 1 {
        let p = ComplexPolynomial::new(vec![Complex::new(T::zero(), T::zero()), one])?;
        let lemniscate = is_proper(&p, T::lit(crate::polynomial::DEFAULT_MIN_MARGIN))?;
        return Ok(Reconstruction {
            lemniscate,
            critical_values: Vec::new(),
            candidates: vec![Candidate { poly: p, discrepancy: Some(T::zero()) }],
            discrepancy: T::zero(),
            critical_value_error: T::zero(),
            solutions_found: 1,
            solutions_expected: 1,
        });
    }
    let w = blaschke_critical_values(b)?;
    let attempts = opts.attempts.unwrap_or(50 * expected_solutions(n));
    let sols = solve_psi(&w, attempts, opts.seed)?;
    let m = opts.grid_per_degree * n;
    let target = BlaschkeRoot::new(b.clone());
    let polys = el_candidates(&sols.solutions);
    let scored: Vec<(Candidate<T>, Option<ProperLemniscate<T>>)> = polys
        .into_par_iter()
        .map(|p| {
            let Ok(l) = is_proper(&p, T::lit(crate::polynomial::DEFAULT_MIN_MARGIN)) else {
                return (Candidate { poly: p, discrepancy: None }, None);
            };
            match fingerprint(&l, m) {
                Ok(f) => {
                    let (d, _) = root_distance(&f.root, &target, m);
                    (Candidate { poly: p, discrepancy: Some(d) }, Some(l))
                }
                Err(_) => (Candidate { poly: p, discrepancy: None }, None),
            }
        })
        .collect();
    let best = scored
        .iter()
        .enumerate()
        .filter_map(|(i, (c, _))| c.discrepancy.map(|d| (i, d)))
        .min_by(|a, b| real_cmp(a.1, b.1));
    let candidates: Vec<Candidate<T>> = scored.iter().map(|(c, _)| c.clone()).collect();
    let Some((index, discrepancy)) = best else {
        return Err(Error::NoCandidateMatches { best: f64::INFINITY, candidates: candidates.len() });
    };
    if !(discrepancy <= T::lit(MATCH_TOL)) {
        return Err(Error::NoCandidateMatches { best: discrepancy.to_f64_lossy(), candidates: candidates.len() });
    }
    let lemniscate = scored[index].1.clone().expect("scored candidates are proper");
    let critical_value_error = multiset_distance(&lemniscate.critical.values, &w);
    Ok(Reconstruction {
        lemniscate,
        critical_values: w,
        candidates,
        discrepancy,
        critical_value_error,
        solutions_found: sols.solutions.len(),
        solutions_expected: sols.expected,
    })
}

/// The map `T(z) = az + b` carrying `Γ₁` onto `Γ₂`.
///
/// Both polynomials are brought to EL form, `E_i(z) = P_i(T_i(z))`. If `Γ₂` is
/// an affine image of `Γ₁` then `E₂(z) = ρ⁻ⁿ E₁(ρz)` for a unit `ρ`, which is
/// read off the coefficients, and `T = T₂ ∘ (z ↦ ρ⁻¹z) ∘ T₁⁻¹`. When `Γ₁` is
/// symmetric several `ρ` fit; the one giving the smallest `|arg a|` wins, so
/// `a > 0` whenever such a map exists. The fingerprints of `P₂` and `ρ⁻ⁿP₁`
/// must agree.
pub fn recover_affine<T: Real>(l1: &ProperLemniscate<T>, l2: &ProperLemniscate<T>, opts: WeldOptions) -> Result<AffineMap<T>> {
    let n = l1.degree();
    if l2.degree() != n {
        return Err(Error::InvalidInput(format!("degrees {} and {} differ", n, l2.degree())));
    }
    let (e1, t1) = normalize_el(&l1.poly);
    let (e2, t2) = normalize_el(&l2.poly);
    let scale = T::one() + e1.max_abs_coeff().max(e2.max_abs_coeff());
    let one = Complex::new(T::one(), T::zero());
    let zero = Complex::new(T::zero(), T::zero());
    let mismatch = |rho: Complex<T>| {
        let inv = rho.inv();
        let mut pow = inv.powu(n as u32);
        let mut worst = T::zero();
        for (c1, c2) in e1.coeffs().iter().zip(e2.coeffs()) {
            worst = worst.max((c1 * pow - c2).norm());
            pow = pow * rho;
        }
        worst
    };
    // the dominant lower coefficient fixes ρ up to a root of unity
    let dominant = (0..n.saturating_sub(1)).max_by(|&i, &j| real_cmp(e1.coeffs()[i].norm(), e1.coeffs()[j].norm()));
    let candidates: Vec<Complex<T>> = match dominant {
        Some(k) if e1.coeffs()[k].norm() > T::tol(1e-8) * scale && e2.coeffs()[k].norm() > T::zero() => {
            let j = T::of(n - k);
            let phase = (e2.coeffs()[k] / e1.coeffs()[k]).arg();
            (0..n - k).map(|m| cis((T::TAU() * T::of(m) - phase) / j)).collect()
        }
        // a circle: every rotation fits
        _ => vec![one],
    };
    let tol = T::tol(1e-6) * scale;
    let map_for = |rho: Complex<T>| t2.compose(&AffineMap::new(rho.inv(), zero)).compose(&t1.inverse());
    let best = candidates
        .iter()
        .map(|&rho| (mismatch(rho), rho))
        .min_by(|a, b| real_cmp(a.0, b.0))
        .expect("at least one candidate");
    if !(best.0 <= tol) {
        return Err(Error::FingerprintMismatch { discrepancy: best.0.to_f64_lossy() });
    }
    let rho = candidates
        .into_iter()
        .filter(|&rho| mismatch(rho) <= tol)
        .min_by(|a, b| real_cmp(map_for(*a).a.arg().abs(), map_for(*b).a.arg().abs()))
        .unwrap_or(best.1);

    let m = opts.grid_per_degree * n;
    let (f1, f2) = rayon::join(|| fingerprint(l1, m), || fingerprint(l2, m));
    let (f1, f2) = (f1?, f2?);
    // P₂ = ρ⁻ⁿ P₁ ∘ T⁻¹ has Blaschke product ρ⁻ⁿ B₁ up to a disk automorphism
    let c = rho.inv().powu(n as u32);
    let rotated = BlaschkeRoot::new(f1.blaschke.with_lambda(f1.blaschke.lambda() * c)?);
    let (d, _) = root_distance(&rotated, &f2.root, m);
    if !(d <= T::lit(AFFINE_TOL)) {
        return Err(Error::FingerprintMismatch { discrepancy: d.to_f64_lossy() });
    }
    Ok(map_for(rho))
}

/// Counts for [`count_classes`].
#[derive(Debug, Clone, PartialEq)]
pub struct ClassCount<T> {
    pub polynomial_count: usize,
    pub class_count: usize,
    pub polynomials: Vec<ComplexPolynomial<T>>,
    /// Class index of each polynomial.
    pub class_of: Vec<usize>,
    pub solutions_found: usize,
    pub solutions_expected: usize,
}

/// EL polynomials with critical values `w`, grouped into fingerprint classes.
///
/// Polynomials related by `P(z) ↦ P(εz)`, `εⁿ = 1`, share a class; groups
/// whose fingerprints coincide are merged as well.
pub fn count_classes<T: Real>(w: &[Complex<T>], opts: WeldOptions) -> Result<ClassCount<T>> {
    let n = w.len() + 1;
    if !(2..=4).contains(&n) {
        return Err(Error::InvalidInput(format!("class counting supports degrees 2 to 4, got {n}")));
    }
    if w.iter().any(|x| !(x.norm() < T::one())) {
        return Err(Error::InvalidInput("critical values must lie in the unit disk".into()));
    }
    let mut separation = T::infinity();
    for (i, a) in w.iter().enumerate() {
        for b in &w[i + 1..] {
            separation = separation.min((a - b).norm());
        }
    }
    if separation < T::lit(DISCRIMINANT_GUARD) {
        return Err(Error::NearDiscriminant { separation: separation.to_f64_lossy() });
    }
    let attempts = opts.attempts.unwrap_or(50 * expected_solutions(n));
    let sols = solve_psi(w, attempts, opts.seed)?;
    let polys = el_candidates(&sols.solutions);

    // ε-orbits
    let mut class_of = vec![usize::MAX; polys.len()];
    let mut reps: Vec<usize> = Vec::new();
    for i in 0..polys.len() {
        if class_of[i] != usize::MAX {
            continue;
        }
        class_of[i] = reps.len();
        for k in 1..n {
            let eps = cis(T::TAU() * T::of(k) / T::of(n));
            let rotated = rotate_argument(&polys[i], eps);
            for j in i + 1..polys.len() {
                if class_of[j] == usize::MAX && polys[j].coeff_distance(&rotated) <= T::lit(1e-6) {
                    class_of[j] = reps.len();
                }
            }
        }
        reps.push(i);
    }

    // merge orbits whose fingerprints agree
    let m = opts.grid_per_degree * n;
    let roots: Vec<Option<BlaschkeRoot<T>>> = reps
        .par_iter()
        .map(|&i| {
            let l = is_proper(&polys[i], T::lit(crate::polynomial::DEFAULT_MIN_MARGIN)).ok()?;
            fingerprint(&l, m).ok().map(|f| f.root)
        })
        .collect();
    let mut merged: Vec<usize> = (0..reps.len()).collect();
    for a in 0..reps.len() {
        for b in a + 1..reps.len() {
            if let (Some(ra), Some(rb)) = (&roots[a], &roots[b]) {
                if root_distance(ra, rb, m).0 <= T::lit(MATCH_TOL) {
                    let (from, to) = (merged[b], merged[a]);
                    merged.iter_mut().filter(|x| **x == from).for_each(|x| *x = to);
                }
            }
        }
    }
    let mut labels: Vec<usize> = merged.clone();
    labels.sort_unstable();
    labels.dedup();
    let class_of = class_of.iter().map(|&c| labels.iter().position(|&l| l == merged[c]).expect("label")).collect();
    Ok(ClassCount {
        polynomial_count: polys.len(),
        class_count: labels.len(),
        polynomials: polys,
        class_of,
        solutions_found: sols.solutions.len(),
        solutions_expected: sols.expected,
    })
}

/// `P(εz)`.
fn rotate_argument<T: Real>(p: &ComplexPolynomial<T>, eps: Complex<T>) -> ComplexPolynomial<T> {
    let mut pow = Complex::new(T::one(), T::zero());
    let coeffs = p
        .coeffs()
        .iter()
        .map(|c| {
            let v = c * pow;
            pow = pow * eps;
            v
        })
        .collect();
    ComplexPolynomial::new(coeffs).expect("same degree")
}

/// Critical values of `P` and of `B` as multisets; used to audit a
/// reconstruction.
pub fn critical_value_transport<T: Real>(p: &ComplexPolynomial<T>, b: &BlaschkeProduct<T>) -> Result<T> {
    let wp = critical_data(p)?.values;
    let wb = blaschke_critical_values(b)?;
    Ok(multiset_distance(&wp, &wb))
}
