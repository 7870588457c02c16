//! Quadrature rules: adaptive Simpson for general integrands and the
//! trapezoid rule for integrands that are flat at both ends.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

/// Values that can be integrated: a vector space over the reals with a norm.
pub trait Integrand: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
}

impl Integrand for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl Integrand for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

const MAX_DEPTH: u32 = 40;

/// Adaptive Simpson on `[a, b]`, first split into `panels` equal pieces so
/// oscillatory integrands are resolved before the error test is trusted.
/// Relative tolerance `rtol` against the magnitude of the coarse estimate,
/// with absolute floor `atol`.
pub fn adaptive_simpson<T: Integrand, F: Fn(f64) -> T>(f: F, a: f64, b: f64, panels: usize, rtol: f64, atol: f64) -> T {
    if a == b {
        return T::zero();
    }
    let panels = panels.max(1);
    let h = (b - a) / panels as f64;
    let mut coarse = Vec::with_capacity(panels);
    let mut scale = 0.0;
    for i in 0..panels {
        let x0 = a + h * i as f64;
        let x1 = if i + 1 == panels { b } else { x0 + h };
        let xm = 0.5 * (x0 + x1);
        let (f0, fm, f1) = (f(x0), f(xm), f(x1));
        let s = (f0 + fm * 4.0 + f1) * ((x1 - x0) / 6.0);
        scale += s.magnitude() + (f0.magnitude() + fm.magnitude() + f1.magnitude()) * (x1 - x0).abs() / 3.0;
        coarse.push((x0, x1, f0, fm, f1, s));
    }
    let tol = (rtol * scale).max(atol) / panels as f64;
    let mut total = T::zero();
    for (x0, x1, f0, fm, f1, s) in coarse {
        total = total + refine(&f, x0, x1, f0, fm, f1, s, tol, MAX_DEPTH);
    }
    total
}

#[allow(clippy::too_many_arguments)]
fn refine<T: Integrand, F: Fn(f64) -> T>(f: &F, a: f64, b: f64, fa: T, fm: T, fb: T, whole: T, tol: f64, depth: u32) -> T {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (fa + flm * 4.0 + fm) * ((m - a) / 6.0);
    let right = (fm + frm * 4.0 + fb) * ((b - m) / 6.0);
    let delta = left + right - whole;
    if depth == 0 || delta.magnitude() <= 15.0 * tol {
        return left + right + delta * (1.0 / 15.0);
    }
    refine(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) + refine(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Trapezoid rule on `[a, b]` with `n` intervals.
pub fn trapezoid<T: Integrand, F: Fn(f64) -> T>(f: &F, a: f64, b: f64, n: usize) -> T {
    let h = (b - a) / n as f64;
    let mut sum = (f(a) + f(b)) * 0.5;
    for i in 1..n {
        sum = sum + f(a + h * i as f64);
    }
    sum * h
}

/// Trapezoid rule with interval doubling until successive estimates agree to
/// `rtol` relative (or `atol` absolute). Spectrally accurate when every
/// derivative of `f` vanishes at both endpoints.
pub fn trapezoid_flat<T: Integrand, F: Fn(f64) -> T>(f: &F, a: f64, b: f64, start: usize, rtol: f64, atol: f64) -> T {
    let mut n = start.max(2);
    let mut prev = trapezoid(f, a, b, n);
    for _ in 0..20 {
        // Reuse the previous nodes: only the new midpoints are evaluated.
        let h = (b - a) / n as f64;
        let mut mids = T::zero();
        for i in 0..n {
            mids = mids + f(a + h * (i as f64 + 0.5));
        }
        let next = prev * 0.5 + mids * (0.5 * h);
        n *= 2;
        if (next - prev).magnitude() <= (rtol * next.magnitude()).max(atol) {
            return next;
        }
        prev = next;
    }
    prev
}

/// Neumaier compensated sum.
#[derive(Clone, Copy, Debug, Default)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Compensated sum of complex terms.
#[derive(Clone, Copy, Debug, Default)]
pub struct KahanComplex {
    re: KahanSum,
    im: KahanSum,
}

impl KahanComplex {
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simpson_polynomials_and_oscillation() {
        let v = adaptive_simpson(|x: f64| x * x * x, 0.0, 2.0, 1, 1e-12, 0.0);
        assert!((v - 4.0).abs() < 1e-12);
        let v = adaptive_simpson(|x: f64| (40.0 * x).cos(), 0.0, 3.0, 64, 1e-10, 1e-14);
        assert!((v - (120.0f64).sin() / 40.0).abs() < 1e-9);
        let z = adaptive_simpson(|x: f64| Complex64::new(0.0, x).exp(), 0.0, 1.0, 4, 1e-12, 0.0);
        let exact = (Complex64::new(0.0, 1.0).exp() - 1.0) / Complex64::new(0.0, 1.0);
        assert!((z - exact).norm() < 1e-12);
    }

    #[test]
    fn trapezoid_flat_bump() {
        // Integral of exp(-1/(1-x^2)) over (-1, 1).
        let bump = |x: f64| if x.abs() < 1.0 { (-1.0 / (1.0 - x * x)).exp() } else { 0.0 };
        let v = trapezoid_flat(&bump, -1.0, 1.0, 16, 1e-15, 0.0);
        assert!((v - 0.443_993_816_168_079_4).abs() < 1e-14, "{v}");
    }

    #[test]
    fn compensated_sum() {
        let mut s = KahanSum::default();
        s.add(1.0);
        for _ in 0..1000 {
            s.add(1e-16);
        }
        assert!((s.value() - (1.0 + 1e-13)).abs() < 1e-16);
    }
}
