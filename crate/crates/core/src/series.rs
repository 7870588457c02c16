//! Truncated power series in `x = N(p)^{-s}`.

use std::ops::Mul;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerSeries {
    coefficients: Vec<Complex64>,
}

impl PowerSeries {
    pub fn new(coefficients: Vec<Complex64>) -> Self {
        assert!(!coefficients.is_empty(), "a power series has at least a constant term");
        PowerSeries { coefficients }
    }

    pub fn one(degree: usize) -> Self {
        let mut c = vec![Complex64::new(0.0, 0.0); degree + 1];
        c[0] = Complex64::new(1.0, 0.0);
        PowerSeries { coefficients: c }
    }

    /// `prod_r (1 - r x)^{-1}` through `x^degree`. Coefficient `k` is the
    /// complete homogeneous symmetric polynomial `h_k` of the roots.
    pub fn euler_inverse(roots: &[Complex64], degree: usize) -> Self {
        let mut c = Self::one(degree).coefficients;
        for r in roots {
            for k in 1..=degree {
                let prev = c[k - 1];
                c[k] += r * prev;
            }
        }
        PowerSeries { coefficients: c }
    }

    /// `prod_r (1 - r x)` through `x^degree`.
    pub fn euler_factor(roots: &[Complex64], degree: usize) -> Self {
        let mut c = Self::one(degree).coefficients;
        for r in roots {
            for k in (1..=degree).rev() {
                let prev = c[k - 1];
                c[k] -= r * prev;
            }
        }
        PowerSeries { coefficients: c }
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coefficients.get(k).copied().unwrap_or_default()
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    pub fn inverse(&self) -> Self {
        let c = &self.coefficients;
        let inv0 = c[0].inv();
        let mut out = vec![Complex64::new(0.0, 0.0); c.len()];
        out[0] = inv0;
        for k in 1..c.len() {
            let s: Complex64 = (1..=k).map(|j| c[j] * out[k - j]).sum();
            out[k] = -s * inv0;
        }
        PowerSeries { coefficients: out }
    }

    /// Evaluate at `x`.
    pub fn eval(&self, x: Complex64) -> Complex64 {
        self.coefficients.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * x + c)
    }
}

impl Mul for &PowerSeries {
    type Output = PowerSeries;

    /// Product truncated at the smaller degree.
    fn mul(self, rhs: &PowerSeries) -> PowerSeries {
        let d = self.degree().min(rhs.degree());
        let mut out = vec![Complex64::new(0.0, 0.0); d + 1];
        for (i, a) in self.coefficients.iter().take(d + 1).enumerate() {
            for (j, b) in rhs.coefficients.iter().take(d + 1 - i).enumerate() {
                out[i + j] += a * b;
            }
        }
        PowerSeries { coefficients: out }
    }
}
