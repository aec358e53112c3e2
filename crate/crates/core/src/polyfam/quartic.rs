use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::Complex;
use serde::{Deserialize, Serialize};

use crate::jet2::Jet2;

/// Real polynomial of degree at most four, coefficients in ascending order.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Quartic {
    pub coeffs: [f64; 5],
}

impl Quartic {
    pub const ZERO: Quartic = Quartic { coeffs: [0.0; 5] };

    pub const fn new(coeffs: [f64; 5]) -> Self {
        Quartic { coeffs }
    }

    /// Builds a polynomial from up to five ascending coefficients.
    ///
    /// # Panics
    /// Panics if more than five coefficients are given.
    pub fn from_slice(c: &[f64]) -> Self {
        assert!(c.len() <= 5, "a quartic has at most five coefficients");
        let mut coeffs = [0.0; 5];
        coeffs[..c.len()].copy_from_slice(c);
        Quartic { coeffs }
    }

    pub fn constant(c: f64) -> Self {
        Self::from_slice(&[c])
    }

    /// The monic linear factor `t - r`.
    pub fn linear_factor(r: f64) -> Self {
        Self::from_slice(&[-r, 1.0])
    }

    /// The monic quadratic `(t - re)^2 + im2`, i.e. the factor of a conjugate pair when `im2 > 0`.
    pub fn quadratic_factor(re: f64, im2: f64) -> Self {
        Self::from_slice(&[re * re + im2, -2.0 * re, 1.0])
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * t + c)
    }

    pub fn eval_complex(&self, z: Complex<f64>) -> Complex<f64> {
        self.coeffs.iter().rev().fold(Complex::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    pub fn eval_jet(&self, t: Jet2) -> Jet2 {
        self.coeffs.iter().rev().fold(Jet2::ZERO, |acc, &c| acc * t + c)
    }

    pub fn derivative(&self) -> Quartic {
        let c = &self.coeffs;
        Quartic::new([c[1], 2.0 * c[2], 3.0 * c[3], 4.0 * c[4], 0.0])
    }

    pub fn nth_derivative(&self, n: usize) -> Quartic {
        (0..n).fold(*self, |p, _| p.derivative())
    }

    /// Value of the `n`-th derivative at `t`.
    pub fn eval_derivative(&self, n: usize, t: f64) -> f64 {
        self.nth_derivative(n).eval(t)
    }

    /// Index of the highest nonzero coefficient, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|&c| c != 0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.degree().is_none()
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Natural magnitude of an evaluation at `t`: the sum of absolute monomial contributions.
    pub fn magnitude_at(&self, t: f64) -> f64 {
        let a = t.abs();
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * a + c.abs())
    }

    pub fn scale(&self, k: f64) -> Quartic {
        Quartic::new(self.coeffs.map(|c| k * c))
    }

    /// Product of two polynomials, or `None` if the result would exceed degree four.
    pub fn checked_mul(&self, o: &Quartic) -> Option<Quartic> {
        let mut out = [0.0; 5];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in o.coeffs.iter().enumerate() {
                if a == 0.0 || b == 0.0 {
                    continue;
                }
                if i + j > 4 {
                    return None;
                }
                out[i + j] += a * b;
            }
        }
        Some(Quartic::new(out))
    }
}

impl Add for Quartic {
    type Output = Quartic;
    fn add(self, o: Quartic) -> Quartic {
        let mut c = self.coeffs;
        for (a, b) in c.iter_mut().zip(o.coeffs) {
            *a += b;
        }
        Quartic::new(c)
    }
}

impl Sub for Quartic {
    type Output = Quartic;
    fn sub(self, o: Quartic) -> Quartic {
        self + (-o)
    }
}

impl Neg for Quartic {
    type Output = Quartic;
    fn neg(self) -> Quartic {
        self.scale(-1.0)
    }
}

/// # Panics
/// Panics if the product exceeds degree four; use [`Quartic::checked_mul`] otherwise.
impl Mul for Quartic {
    type Output = Quartic;
    fn mul(self, o: Quartic) -> Quartic {
        self.checked_mul(&o).expect("product exceeds degree four")
    }
}

impl fmt::Display for Quartic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0.0 {
                continue;
            }
            if first {
                write!(f, "{c}")?;
            } else if c < 0.0 {
                write!(f, " - {}", -c)?;
            } else {
                write!(f, " + {c}")?;
            }
            match k {
                0 => {}
                1 => write!(f, " t")?,
                _ => write!(f, " t^{k}")?,
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evaluation_and_derivatives() {
        let q = Quartic::new([1.0, -2.0, 0.5, 3.0, -1.0]);
        let t: f64 = 0.7;
        let direct = 1.0 - 2.0 * t + 0.5 * t * t + 3.0 * t.powi(3) - t.powi(4);
        assert!((q.eval(t) - direct).abs() < 1e-14);
        let d = -2.0 + t + 9.0 * t * t - 4.0 * t.powi(3);
        assert!((q.eval_derivative(1, t) - d).abs() < 1e-14);
        assert_eq!(q.eval_derivative(4, t), -24.0);
        assert_eq!(q.nth_derivative(5), Quartic::ZERO);
        let j = q.eval_jet(Jet2::x(t));
        assert!((j.dx - d).abs() < 1e-13);
        assert!((j.dxx - q.eval_derivative(2, t)).abs() < 1e-12);
    }

    #[test]
    fn degree_handles_leading_zeros() {
        assert_eq!(Quartic::from_slice(&[1.0, 2.0]).degree(), Some(1));
        assert_eq!(Quartic::ZERO.degree(), None);
        assert!(Quartic::ZERO.is_zero());
    }

    #[test]
    fn products() {
        let p = Quartic::linear_factor(1.0) * Quartic::linear_factor(-1.0);
        assert_eq!(p, Quartic::from_slice(&[-1.0, 0.0, 1.0]));
        let cube = p.checked_mul(&p).unwrap();
        assert_eq!(cube.degree(), Some(4));
        assert!(cube.checked_mul(&p).is_none());
    }

    #[test]
    fn display() {
        let q = Quartic::from_slice(&[2.0, 0.0, 0.0, 0.0, 1.0]);
        assert_eq!(q.to_string(), "1 t^4 + 2");
    }
}
