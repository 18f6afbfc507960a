//! Conformal fingerprints of polynomial lemniscates.
//!
//! A proper lemniscate `{|P(z)| = 1}` of degree `n` has as fingerprint the
//! `n`th root of a degree-`n` Blaschke product. This crate computes that
//! fingerprint numerically, approximates arbitrary circle diffeomorphisms by
//! such roots, and recovers the lemniscate from a Blaschke product.
//!
//! All numerical code is generic over [`Real`] (`f32` or `f64`); the aliases
//! at the crate root fix the scalar to `f64`.

// `!(x > 0)` is used on purpose: NaN must land in the rejecting branch
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// dense linear algebra reads better with explicit indices
#![allow(clippy::needless_range_loop)]

pub mod approx;
pub mod blaschke;
pub mod conformal;
pub mod diffeo;
pub mod error;
pub mod fingerprint;
pub mod formats;
pub mod polynomial;
pub mod scalar;
pub mod weld;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Complex64 = num_complex::Complex<f64>;
pub type Polynomial = polynomial::ComplexPolynomial<f64>;
pub type Lemniscate = polynomial::ProperLemniscate<f64>;
pub type Affine = polynomial::AffineMap<f64>;
pub type Blaschke = blaschke::BlaschkeProduct<f64>;
pub type Mobius = blaschke::MobiusAut<f64>;
pub type Diffeo = diffeo::CircleDiffeo<f64>;
pub type Curve = conformal::JordanCurveSamples<f64>;
pub type Interior = conformal::InteriorMap<f64>;
pub type Trig = approx::TrigPolynomial<f64>;
