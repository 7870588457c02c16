//! Smooth compactly supported test functions and their Laplace transforms.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::quad::trapezoid_flat;

/// `exp(-1/u)` for `u > 0`, zero otherwise.
fn psi(u: f64) -> f64 {
    if u <= 0.0 {
        0.0
    } else {
        (-1.0 / u).exp()
    }
}

/// C-infinity step from 0 at `u <= 0` to 1 at `u >= 1`, flat to all orders
/// at both ends.
pub fn smooth_step(u: f64) -> f64 {
    if u <= 0.0 {
        return 0.0;
    }
    if u >= 1.0 {
        return 1.0;
    }
    let (a, b) = (psi(u), psi(1.0 - u));
    a / (a + b)
}

/// `phi` rises smoothly on `rise`, equals 1 between, and falls on `fall`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestFunction {
    pub rise: (f64, f64),
    pub fall: (f64, f64),
}

impl TestFunction {
    pub fn new(rise: (f64, f64), fall: (f64, f64)) -> Self {
        assert!(
            rise.0 < rise.1 && rise.1 <= fall.0 && fall.0 < fall.1,
            "test function breakpoints must increase"
        );
        TestFunction { rise, fall }
    }

    /// Supported in `[-2, 2]` with `phi = 1` on `[0, 1]`.
    pub fn standard() -> Self {
        Self::new((-2.0, 0.0), (1.0, 2.0))
    }

    /// Supported in `[0, 1]` with `phi = 1` on `[eps, 1 - eps]`.
    pub fn phi1(eps: f64) -> Self {
        assert!(eps > 0.0 && eps < 0.5, "eps must lie in (0, 1/2)");
        Self::new((0.0, eps), (1.0 - eps, 1.0))
    }

    pub fn support(&self) -> (f64, f64) {
        (self.rise.0, self.fall.1)
    }

    pub fn eval(&self, t: f64) -> f64 {
        if t <= self.rise.0 || t >= self.fall.1 {
            0.0
        } else if t < self.rise.1 {
            smooth_step((t - self.rise.0) / (self.rise.1 - self.rise.0))
        } else if t <= self.fall.0 {
            1.0
        } else {
            smooth_step((self.fall.1 - t) / (self.fall.1 - self.fall.0))
        }
    }

    pub fn total_mass(&self) -> f64 {
        laplace_transform(self, Complex64::new(0.0, 0.0)).re
    }
}

/// `phi^(s) = int phi(y) e^{s y} dy`, by the trapezoid rule over the support
/// (the integrand is flat at both ends).
pub fn laplace_transform(phi: &TestFunction, s: Complex64) -> Complex64 {
    let (a, b) = phi.support();
    let width = b - a;
    let start = (64.0f64).max(4.0 * s.im.abs() * width) as usize;
    let scale = (s.re.abs() * a.abs().max(b.abs())).exp() * width;
    trapezoid_flat(&|y: f64| Complex64::new(s.re * y, s.im * y).exp() * phi.eval(y), a, b, start, 1e-15, 1e-17 * scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::adaptive_simpson;
    use std::f64::consts::{E, PI};

    #[test]
    fn shape() {
        let phi = TestFunction::standard();
        assert_eq!(phi.eval(-2.0), 0.0);
        assert_eq!(phi.eval(2.0), 0.0);
        assert_eq!(phi.eval(0.5), 1.0);
        assert_eq!(phi.eval(0.0), 1.0);
        assert_eq!(phi.eval(1.0), 1.0);
        assert!((phi.eval(-1.0) - 0.5).abs() < 1e-15);
        for i in 0..=400 {
            let t = -2.5 + 5.0 * i as f64 / 400.0;
            let v = phi.eval(t);
            assert!((0.0..=1.0).contains(&v));
            if (0.0..=1.0).contains(&t) {
                assert!(v >= 1.0);
            }
        }
    }

    #[test]
    fn mass_matches_simpson() {
        let phi = TestFunction::standard();
        let oracle = adaptive_simpson(|t| phi.eval(t), -2.0, 2.0, 32, 1e-13, 0.0);
        // By symmetry of the step, each transition contributes half its width.
        assert!((phi.total_mass() - 2.5).abs() < 1e-13);
        assert!((oracle - 2.5).abs() < 1e-10);
    }

    #[test]
    fn laplace_matches_simpson() {
        let phi = TestFunction::standard();
        for s in [Complex64::new(1.0, 0.0), Complex64::new(0.3, 4.0), Complex64::new(-1.5, 20.0)] {
            let oracle = adaptive_simpson(|y| (s * y).exp() * phi.eval(y), -2.0, 2.0, 256, 1e-13, 0.0);
            let v = laplace_transform(&phi, s);
            assert!((v - oracle).norm() < 1e-9 * (1.0 + oracle.norm()), "{s}: {v} vs {oracle}");
        }
    }

    #[test]
    fn phi1_tends_to_e_minus_one() {
        let mut prev = f64::INFINITY;
        for eps in [0.2, 0.1, 0.05, 0.025, 0.0125] {
            let v = laplace_transform(&TestFunction::phi1(eps), Complex64::new(1.0, 0.0)).re;
            let gap = (v - (E - 1.0)).abs();
            assert!(gap < 2.0 * eps * E, "eps {eps}: gap {gap}");
            assert!(gap < prev);
            prev = gap;
        }
    }

    #[test]
    fn laplace_inversion_round_trip() {
        // phi(T log x) = (1/(2 pi T)) int phi^((c + iu)/T) x^{-(c + iu)} du, c = 1, T = 1.
        let phi = TestFunction::standard();
        for x in [0.5f64, 1.0, 2.0] {
            let lx = x.ln();
            let integrand = |u: f64| {
                let s = Complex64::new(1.0, u);
                (laplace_transform(&phi, s) * (-s * lx).exp()).re
            };
            // The integrand is even in u up to conjugation, so integrate over u >= 0.
            let v = 2.0 * adaptive_simpson(integrand, 0.0, 400.0, 800, 1e-9, 1e-12) / (2.0 * PI);
            assert!((v - phi.eval(lx)).abs() < 1e-5, "x = {x}: {v} vs {}", phi.eval(lx));
        }
    }
}
