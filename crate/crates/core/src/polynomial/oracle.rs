//! Brute-force connectivity count of `{|P| < 1}` by grid flood fill.

use std::collections::VecDeque;

use num_complex::Complex;

use super::{roots, ComplexPolynomial, RootOptions};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Number of 4-connected components of `{|P| < 1}` sampled at cell centres
/// of a `resolution × resolution` grid.
///
/// The grid covers the square around the root centroid `c` with half-width
/// `max(2(1 + ρ), 1.25(ρ + a_n^{-1/n}))`, `ρ = max|ξ_j - c|`; the second term
/// bounds `{|P| < 1}` because `|P(z)| >= |a_n| (|z - c| - ρ)^n`.
pub fn component_count_oracle<T: Real>(p: &ComplexPolynomial<T>, resolution: usize) -> Result<usize> {
    if resolution < 64 {
        return Err(Error::InvalidInput(format!("resolution {resolution} below 64")));
    }
    let zeros = roots(p, RootOptions::default())?;
    let n = p.degree();
    let centre = zeros.iter().fold(Complex::new(T::zero(), T::zero()), |s, z| s + z) / T::of(n);
    let rho = zeros.iter().fold(T::zero(), |m, z| m.max((z - centre).norm()));
    let reach = rho + p.leading().norm().powf(-T::one() / T::of(n));
    let half = (T::lit(2.0) * (T::one() + rho)).max(T::lit(1.25) * reach);
    let h = T::lit(2.0) * half / T::of(resolution);

    let idx = |i: usize, j: usize| i * resolution + j;
    let mut inside = vec![false; resolution * resolution];
    for i in 0..resolution {
        let y = centre.im - half + (T::of(i) + T::lit(0.5)) * h;
        for j in 0..resolution {
            let x = centre.re - half + (T::of(j) + T::lit(0.5)) * h;
            inside[idx(i, j)] = p.eval(Complex::new(x, y)).norm() < T::one();
        }
    }

    let mut label = vec![0usize; resolution * resolution];
    let mut sizes = Vec::new();
    let mut queue = VecDeque::new();
    for start in 0..inside.len() {
        if !inside[start] || label[start] != 0 {
            continue;
        }
        let id = sizes.len() + 1;
        let mut size = 0usize;
        label[start] = id;
        queue.push_back(start);
        while let Some(k) = queue.pop_front() {
            size += 1;
            let (i, j) = (k / resolution, k % resolution);
            let mut visit = |ii: usize, jj: usize| {
                let kk = idx(ii, jj);
                if inside[kk] && label[kk] == 0 {
                    label[kk] = id;
                    queue.push_back(kk);
                }
            };
            if i > 0 {
                visit(i - 1, j);
            }
            if i + 1 < resolution {
                visit(i + 1, j);
            }
            if j > 0 {
                visit(i, j - 1);
            }
            if j + 1 < resolution {
                visit(i, j + 1);
            }
        }
        sizes.push(size);
    }
    // every zero lies in {|P| < 1}; a zero on an outside cell means its
    // component slipped between the sample points
    for z in &zeros {
        let j = ((z.re - (centre.re - half)) / h).floor().to_usize();
        let i = ((z.im - (centre.im - half)) / h).floor().to_usize();
        if let (Some(i), Some(j)) = (i, j) {
            if i < resolution && j < resolution && !inside[idx(i, j)] {
                return Err(Error::ResolutionTooCoarse { resolution, cells: 0 });
            }
        }
    }
    if let Some(&smallest) = sizes.iter().min() {
        if smallest < 4 {
            return Err(Error::ResolutionTooCoarse { resolution, cells: smallest });
        }
    }
    Ok(sizes.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disk_has_one_component() {
        let p = ComplexPolynomial::from_real(&[0.0, 0.0, 0.5]).unwrap();
        assert_eq!(component_count_oracle(&p, 256).unwrap(), 1);
    }

    #[test]
    fn separated_ovals() {
        let p = ComplexPolynomial::from_real(&[1.5, 0.0, 0.5]).unwrap();
        assert_eq!(component_count_oracle(&p, 512).unwrap(), 2);
    }

    #[test]
    fn proper_cubic_is_connected() {
        let p = ComplexPolynomial::from_real(&[0.0, -1.0, 0.0, 1.0 / 3.0]).unwrap();
        assert_eq!(component_count_oracle(&p, 512).unwrap(), 1);
    }

    #[test]
    fn small_leading_coefficient_still_fits_in_the_box() {
        // {|z^2| < 1000}: a disk of radius ~31.6 around the double root 0
        let p = ComplexPolynomial::from_real(&[0.0, 0.0, 1e-3]).unwrap();
        assert_eq!(component_count_oracle(&p, 128).unwrap(), 1);
    }

    #[test]
    fn coarse_grid_is_reported() {
        // tiny ovals around two far-apart roots
        let p = ComplexPolynomial::from_roots(Complex::new(50.0, 0.0), &[Complex::new(-10.0, 0.0), Complex::new(10.0, 0.0)]).unwrap();
        assert!(matches!(component_count_oracle(&p, 64), Err(Error::ResolutionTooCoarse { .. })));
    }

    #[test]
    fn rejects_tiny_resolution() {
        let p = ComplexPolynomial::from_real(&[0.0, 1.0]).unwrap();
        assert!(component_count_oracle(&p, 16).is_err());
    }
}
