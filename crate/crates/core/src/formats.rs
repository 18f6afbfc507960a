//! File formats: JSON for polynomials, Blaschke products and reports, CSV
//! for sampled diffeomorphisms and curves.
//!
//! Numbers are written in shortest round-trip form, so reading a written
//! file reproduces every value exactly.

use std::io::{Read, Write};

use num_complex::Complex;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::approx::ApproxReport;
use crate::blaschke::{BlaschkeProduct, MobiusAut};
use crate::conformal::JordanCurveSamples;
use crate::diffeo::CircleDiffeo;
use crate::error::{Error, Result};
use crate::fingerprint::{Fingerprint, FingerprintReport};
use crate::polynomial::ComplexPolynomial;
use crate::scalar::Real;
use crate::weld::Reconstruction;

fn pair<T: Copy>(z: &Complex<T>) -> [T; 2] {
    [z.re, z.im]
}

fn unpair<T: Copy>(p: &[T; 2]) -> Complex<T> {
    Complex::new(p[0], p[1])
}

/// `{"degree": n, "coeffs": [[re, im], ...]}` with `a_0` first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolynomialFile<T> {
    pub degree: usize,
    pub coeffs: Vec<[T; 2]>,
}

impl<T: Real> PolynomialFile<T> {
    pub fn from_poly(p: &ComplexPolynomial<T>) -> Self {
        Self { degree: p.degree(), coeffs: p.coeffs().iter().map(pair).collect() }
    }

    pub fn to_poly(&self) -> Result<ComplexPolynomial<T>> {
        if self.coeffs.len() != self.degree + 1 {
            return Err(Error::Format(format!("degree {} needs {} coefficients, found {}", self.degree, self.degree + 1, self.coeffs.len())));
        }
        let p = ComplexPolynomial::new(self.coeffs.iter().map(unpair).collect())?;
        if p.degree() != self.degree {
            return Err(Error::Format("leading coefficient is zero".into()));
        }
        Ok(p)
    }
}

/// `{"lambda": [re, im], "zeros": [[re, im], ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlaschkeFile<T> {
    pub lambda: [T; 2],
    pub zeros: Vec<[T; 2]>,
}

impl<T: Real> BlaschkeFile<T> {
    pub fn from_blaschke(b: &BlaschkeProduct<T>) -> Self {
        Self { lambda: pair(&b.lambda()), zeros: b.zeros().iter().map(pair).collect() }
    }

    pub fn to_blaschke(&self) -> Result<BlaschkeProduct<T>> {
        BlaschkeProduct::new(unpair(&self.lambda), self.zeros.iter().map(unpair).collect())
    }
}

pub fn to_json<S: Serialize>(value: &S) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)?)
}

pub fn from_json<S: DeserializeOwned>(text: &str) -> Result<S> {
    Ok(serde_json::from_str(text)?)
}

pub fn read_polynomial<T: Real + DeserializeOwned>(text: &str) -> Result<ComplexPolynomial<T>> {
    from_json::<PolynomialFile<T>>(text)?.to_poly()
}

pub fn write_polynomial<T: Real + Serialize>(p: &ComplexPolynomial<T>) -> Result<String> {
    to_json(&PolynomialFile::from_poly(p))
}

pub fn read_blaschke<T: Real + DeserializeOwned>(text: &str) -> Result<BlaschkeProduct<T>> {
    from_json::<BlaschkeFile<T>>(text)?.to_blaschke()
}

pub fn write_blaschke<T: Real + Serialize>(b: &BlaschkeProduct<T>) -> Result<String> {
    to_json(&BlaschkeFile::from_blaschke(b))
}

#[derive(Serialize, Deserialize)]
struct DiffeoRow<T> {
    theta: T,
    lift: T,
    derivative: T,
}

/// CSV with header `theta,lift,derivative` on the uniform grid.
pub fn write_diffeo_csv<T: Real + Serialize, W: Write>(k: &CircleDiffeo<T>, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for j in 0..k.grid_size() {
        w.serialize(DiffeoRow { theta: k.theta(j), lift: k.lift()[j], derivative: k.derivative()[j] })?;
    }
    w.flush()?;
    Ok(())
}

/// Reads and validates a diffeomorphism; the `theta` column must be the
/// uniform grid `2πj/M`.
pub fn read_diffeo_csv<T: Real + DeserializeOwned, R: Read>(input: R) -> Result<CircleDiffeo<T>> {
    let mut r = csv::Reader::from_reader(input);
    let rows: Vec<DiffeoRow<T>> = r.deserialize().collect::<std::result::Result<_, _>>()?;
    let m = rows.len();
    for (j, row) in rows.iter().enumerate() {
        let expect = T::TAU() * T::of(j) / T::of(m.max(1));
        if (row.theta - expect).abs() > T::tol(1e-9) {
            return Err(Error::Format(format!("row {j}: theta {} is not on the uniform grid", row.theta)));
        }
    }
    CircleDiffeo::new(rows.iter().map(|r| r.lift).collect(), rows.iter().map(|r| r.derivative).collect())
}

#[derive(Serialize, Deserialize)]
struct PointRow<T> {
    x: T,
    y: T,
}

/// CSV with header `x,y` in trace order.
pub fn write_curve_csv<T: Real + Serialize, W: Write>(curve: &JordanCurveSamples<T>, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for z in curve.points() {
        w.serialize(PointRow { x: z.re, y: z.im })?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_curve_csv<T: Real + DeserializeOwned, R: Read>(input: R) -> Result<JordanCurveSamples<T>> {
    let mut r = csv::Reader::from_reader(input);
    let rows: Vec<PointRow<T>> = r.deserialize().collect::<std::result::Result<_, _>>()?;
    JordanCurveSamples::new(rows.iter().map(|p| Complex::new(p.x, p.y)).collect())
}

/// How the triple-normalized representative is obtained from the stored
/// fingerprint: `k ∘ φ` fixes `1, i, -1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalizationRecord<T> {
    /// `k⁻¹(1), k⁻¹(i), k⁻¹(-1)`.
    pub triple_preimages: [[T; 2]; 3],
    pub mobius_lambda: [T; 2],
    pub mobius_a: [T; 2],
}

/// JSON sidecar written next to a fingerprint CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FingerprintSidecar<T> {
    pub blaschke: BlaschkeFile<T>,
    /// The CSV lift is `(1/n) arg B + branch_offset`.
    pub branch_offset: T,
    pub normalization: NormalizationRecord<T>,
    pub center: [T; 2],
    pub derivative_at_center: T,
    pub zero_residual: T,
    pub phase_discrepancy: T,
    pub cross_check: T,
    pub grid: usize,
}

impl<T: Real> FingerprintSidecar<T> {
    pub fn new(f: &Fingerprint<T>) -> Self {
        let (_, phi): (_, MobiusAut<T>) = f.root.normalize_triple();
        let pre = |alpha: T| {
            let t = f.root.inverse(alpha);
            [t.cos(), t.sin()]
        };
        let FingerprintReport { grid, center, derivative_at_center, zero_residual, phase_discrepancy, cross_check } =
            f.report.clone();
        Self {
            blaschke: BlaschkeFile::from_blaschke(&f.blaschke),
            branch_offset: f.root.offset,
            normalization: NormalizationRecord {
                triple_preimages: [pre(T::zero()), pre(T::FRAC_PI_2()), pre(T::PI())],
                mobius_lambda: pair(&phi.lambda),
                mobius_a: pair(&phi.a),
            },
            center: pair(&center),
            derivative_at_center,
            zero_residual,
            phase_discrepancy,
            cross_check,
            grid,
        }
    }
}

/// `{"n": .., "R": .., "N": ..}`; `R` and `N` fall back to their defaults.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ApproxConfig {
    pub n: usize,
    #[serde(rename = "R", default)]
    pub radius: Option<f64>,
    #[serde(rename = "N", default)]
    pub degree: Option<usize>,
}

/// Error report of the approximation command.
pub type ApproxErrorFile<T> = ApproxReport<T>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateEntry<T> {
    pub polynomial: PolynomialFile<T>,
    pub discrepancy: Option<T>,
}

/// JSON report of a reconstruction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReconstructionReport<T> {
    pub blaschke: BlaschkeFile<T>,
    pub critical_values: Vec<[T; 2]>,
    pub candidates: Vec<CandidateEntry<T>>,
    pub chosen: PolynomialFile<T>,
    pub discrepancy: T,
    pub critical_value_error: T,
    pub solutions_found: usize,
    pub solutions_expected: usize,
}

impl<T: Real> ReconstructionReport<T> {
    pub fn new(b: &BlaschkeProduct<T>, r: &Reconstruction<T>) -> Self {
        Self {
            blaschke: BlaschkeFile::from_blaschke(b),
            critical_values: r.critical_values.iter().map(pair).collect(),
            candidates: r
                .candidates
                .iter()
                .map(|c| CandidateEntry { polynomial: PolynomialFile::from_poly(&c.poly), discrepancy: c.discrepancy })
                .collect(),
            chosen: PolynomialFile::from_poly(&r.lemniscate.poly),
            discrepancy: r.discrepancy,
            critical_value_error: r.critical_value_error,
            solutions_found: r.solutions_found,
            solutions_expected: r.solutions_expected,
        }
    }
}
