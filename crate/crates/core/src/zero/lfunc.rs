//! Dirichlet L-functions by Euler-Maclaurin summation, their completions
//! and Taylor data of `log L` from Cauchy integrals.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use super::gamma::{digamma, ln_gamma, BERNOULLI_EVEN};
use crate::character::DirichletCharacter;
use crate::error::{Error, Result};

/// `(2j)!` for `j = 1..=10`.
const EVEN_FACTORIALS: [f64; 10] = [
    2.0,
    24.0,
    720.0,
    40_320.0,
    3_628_800.0,
    479_001_600.0,
    87_178_291_200.0,
    20_922_789_888_000.0,
    6_402_373_705_728_000.0,
    2_432_902_008_176_640_000.0,
];

/// Number of leading terms summed directly before the Euler-Maclaurin tail.
pub fn em_shift(s: Complex64) -> usize {
    10usize.max(s.norm().ceil() as usize + 10)
}

/// `X^{-s}/2 + sum_j B_{2j}/(2j)! (s)_{2j-1} X^{-s-2j+1}`: the Euler-Maclaurin
/// tail of `sum_{n >= 0} (n + X)^{-s}` without the integral term.
fn em_correction(s: Complex64, x: f64) -> Complex64 {
    let xs = (-s * x.ln()).exp();
    let mut total = xs * 0.5;
    // rising = (s)_{2j-1}, pow = X^{-s-2j+1}.
    let mut rising = s;
    let mut pow = xs / x;
    for (j, (b, f)) in BERNOULLI_EVEN.iter().zip(EVEN_FACTORIALS).enumerate() {
        total += rising * pow * (b / f);
        let m = (2 * j + 1) as f64;
        rising *= (s + m) * (s + m + 1.0);
        pow /= x * x;
    }
    total
}

/// `(e^w - 1) / w`, continuous through `w = 0`.
fn expm1_ratio(w: Complex64) -> Complex64 {
    if w.norm() < 1e-2 {
        // Taylor series; the first omitted term is below 1e-17.
        let mut term = Complex64::new(1.0, 0.0);
        let mut sum = term;
        for k in 2..=8 {
            term *= w / k as f64;
            sum += term;
        }
        sum
    } else {
        (w.exp() - 1.0) / w
    }
}

/// Hurwitz zeta `zeta(s, a) = sum_{n >= 0} (n + a)^{-s}` for `a > 0`.
pub fn hurwitz_zeta(s: Complex64, a: f64) -> Result<Complex64> {
    if s == Complex64::new(1.0, 0.0) {
        return Err(Error::Pole);
    }
    assert!(a > 0.0, "Hurwitz parameter must be positive");
    let m = em_shift(s);
    let mut total = Complex64::new(0.0, 0.0);
    for n in 0..m {
        total += (-s * (n as f64 + a).ln()).exp();
    }
    let x = m as f64 + a;
    Ok(total + (-(s - 1.0) * x.ln()).exp() / (s - 1.0) + em_correction(s, x))
}

/// `L(s, chi) = q^{-s} sum_a chi(a) zeta(s, a/q)`, with the leading terms of
/// every residue class summed directly and one shared tail shift. For
/// non-principal `chi` the pole terms cancel in closed form, so `s = 1` is
/// evaluated without loss.
pub fn l_value(chi: &DirichletCharacter, s: Complex64) -> Result<Complex64> {
    let principal = chi.is_trivial();
    if principal && s == Complex64::new(1.0, 0.0) {
        return Err(Error::Pole);
    }
    let q = chi.modulus();
    let values: Vec<Complex64> = (0..q).map(|a| chi.value_u(a)).collect();
    let m = em_shift(s) as u64;
    let mut direct = Complex64::new(0.0, 0.0);
    for n in 1..=m * q {
        let v = values[(n % q) as usize];
        if v.re != 0.0 || v.im != 0.0 {
            direct += v * (-s * (n as f64).ln()).exp();
        }
    }
    let mut tail = Complex64::new(0.0, 0.0);
    for a in 1..=q {
        let v = values[(a % q) as usize];
        if v.re == 0.0 && v.im == 0.0 {
            continue;
        }
        let x = m as f64 + a as f64 / q as f64;
        let lx = x.ln();
        let pole = if principal {
            (-(s - 1.0) * lx).exp() / (s - 1.0)
        } else {
            // X^{1-s}/(s-1) summed against chi(a) equals
            // -sum chi(a) log X E((1-s) log X) because sum chi(a) = 0.
            -expm1_ratio((1.0 - s) * lx) * lx
        };
        tail += v * (pole + em_correction(s, x));
    }
    Ok(direct + tail * (-s * (q as f64).ln()).exp())
}

fn require_primitive(chi: &DirichletCharacter) -> Result<()> {
    if chi.is_primitive() {
        Ok(())
    } else {
        Err(Error::Character(format!("{chi} is not primitive")))
    }
}

/// A logarithm of the completed L-function
/// `Lambda(s) = (q/pi)^{(s+kappa)/2} Gamma((s+kappa)/2) L(s, chi)`, times
/// `s(s-1)/2` for zeta. Left of the critical line the functional equation
/// `Lambda(s, chi) = eps(chi) Lambda(1-s, conj chi)` keeps the gamma argument
/// in the right half-plane. Only differences of imaginary parts modulo 2 pi
/// are meaningful.
pub fn log_completed(chi: &DirichletCharacter, s: Complex64) -> Result<Complex64> {
    require_primitive(chi)?;
    if s.re < 0.5 {
        let eps = if chi.modulus() == 1 { Complex64::new(1.0, 0.0) } else { chi.root_number() };
        return Ok(eps.ln() + log_completed(&chi.conj(), 1.0 - s)?);
    }
    let q = chi.modulus() as f64;
    let half = (s + chi.parity() as f64) * 0.5;
    let mut out = half * (q / PI).ln() + ln_gamma(half);
    if chi.modulus() == 1 {
        if s == Complex64::new(1.0, 0.0) {
            // xi(1) = 1/2.
            return Ok(Complex64::new(0.5f64.ln(), 0.0));
        }
        out += (s * (s - 1.0) * 0.5).ln();
    }
    Ok(out + l_value(chi, s)?.ln())
}

/// `Lambda(1/2 + it)` rotated by `eps^{-1/2}`, which is real: returns
/// `(cos phi, sin phi)` for its phase `phi`. The first entry carries the sign.
pub fn critical_line_phase(chi: &DirichletCharacter, t: f64) -> Result<(f64, f64)> {
    let eps = if chi.modulus() == 1 { Complex64::new(1.0, 0.0) } else { chi.root_number() };
    let phi = log_completed(chi, Complex64::new(0.5, t))?.im - 0.5 * eps.arg();
    Ok((phi.cos(), phi.sin()))
}

/// `L'/L(s, chi_infinity) = -log(pi)/2 + psi((s + kappa)/2)/2`.
pub fn gamma_factor_logderiv(chi: &DirichletCharacter, s: Complex64) -> Complex64 {
    let half = (s + chi.parity() as f64) * 0.5;
    -0.5 * PI.ln() + 0.5 * digamma(half)
}

/// Points on the Cauchy circle.
const CAUCHY_POINTS: usize = 128;

/// Taylor coefficients `c_0..=c_order` of `log L(w, chi)` about `s` from the
/// trapezoid rule on the circle `|w - s| = r`, which must enclose no zero or
/// pole. Aliasing error is about `(r/d)^128` for the distance `d` to the
/// nearest singularity of `log L`.
pub fn log_l_taylor(chi: &DirichletCharacter, s: Complex64, r: f64, order: usize) -> Result<Vec<Complex64>> {
    let m = CAUCHY_POINTS;
    let mut logs = Vec::with_capacity(m);
    let mut prev_arg = 0.0;
    for j in 0..m {
        let w = s + Complex64::from_polar(r, TAU * j as f64 / m as f64);
        let v = l_value(chi, w)?;
        let mut lg = v.ln();
        if j > 0 {
            // Continue the argument from the previous node.
            let mut d = lg.im - prev_arg;
            d -= TAU * (d / TAU).round();
            lg.im = prev_arg + d;
        }
        prev_arg = lg.im;
        logs.push(lg);
    }
    let mut closing = logs[0].im - prev_arg;
    closing -= TAU * (closing / TAU).round();
    if (prev_arg + closing - logs[0].im).abs() > 1.0 {
        return Err(Error::Scan(format!("log L winds around the circle of radius {r} at {s}")));
    }
    Ok((0..=order)
        .map(|k| {
            let sum: Complex64 = logs
                .iter()
                .enumerate()
                .map(|(j, lg)| lg * Complex64::from_polar(1.0, -TAU * (j * k % m) as f64 / m as f64))
                .sum();
            sum / (m as f64 * r.powi(k as i32))
        })
        .collect())
}

/// `(L'/L)^{(k)}(s) / k!` for `k = 0..=order`, via `log L` Taylor data.
pub fn logderiv_taylor(chi: &DirichletCharacter, s: Complex64, r: f64, order: usize) -> Result<Vec<Complex64>> {
    let c = log_l_taylor(chi, s, r, order + 1)?;
    Ok((0..=order).map(|k| c[k + 1] * (k + 1) as f64).collect())
}

/// `L'/L(s, chi)` from a circle of radius `r`.
pub fn l_logderiv(chi: &DirichletCharacter, s: Complex64, r: f64) -> Result<Complex64> {
    Ok(logderiv_taylor(chi, s, r, 0)?[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{primes_up_to, von_mangoldt};
    use crate::character::{primitive_characters, real_primitive_character};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn zeta_two() {
        let v = l_value(&DirichletCharacter::trivial(1), c(2.0, 0.0)).unwrap();
        assert!((v.re - PI * PI / 6.0).abs() < 1e-12 && v.im.abs() < 1e-15);
        // Oracle: partial sums of 1/n^2 with Richardson extrapolation in 1/N.
        let partial = |n: u64| (1..=n).map(|k| 1.0 / (k * k) as f64).sum::<f64>();
        let (a, b) = (partial(20_000), partial(40_000));
        let richardson = 2.0 * b - a;
        assert!((v.re - richardson).abs() < 1e-9);
        assert!((v.re - 1.644_934_066_8).abs() < 1e-9);
    }

    #[test]
    fn chi_minus_four_at_one() {
        let chi = DirichletCharacter::new(4, &[1]).unwrap();
        let v = l_value(&chi, c(1.0, 0.0)).unwrap();
        // Oracle: alternating series 1 - 1/3 + 1/5 - ... averaged over two
        // consecutive partial sums.
        let partial = |n: u64| (0..n).map(|k| if k % 2 == 0 { 1.0 } else { -1.0 } / (2 * k + 1) as f64).sum::<f64>();
        let oracle = 0.5 * (partial(1_000_000) + partial(1_000_001));
        assert!((v.re - oracle).abs() < 1e-9 && v.im.abs() < 1e-15);
        assert!((v.re - PI / 4.0).abs() < 1e-12);
    }

    #[test]
    fn hurwitz_recurrence() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let s = c(rng.gen_range(-2.0..3.0), rng.gen_range(-50.0..50.0));
            let a = rng.gen_range(0.05..3.0);
            let lhs = hurwitz_zeta(s, a).unwrap();
            let rhs = hurwitz_zeta(s, a + 1.0).unwrap() + (-s * a.ln()).exp();
            assert!((lhs - rhs).norm() < 1e-10 * (1.0 + lhs.norm()), "s = {s}, a = {a}");
        }
        assert_eq!(hurwitz_zeta(c(1.0, 0.0), 0.5), Err(Error::Pole));
    }

    #[test]
    fn zeta_known_values() {
        let z = DirichletCharacter::trivial(1);
        assert!((l_value(&z, c(0.0, 0.0)).unwrap() - c(-0.5, 0.0)).norm() < 1e-13);
        assert!((l_value(&z, c(-1.0, 0.0)).unwrap() - c(-1.0 / 12.0, 0.0)).norm() < 1e-13);
        // First zero of zeta.
        assert!(l_value(&z, c(0.5, 14.134_725_141_734_693)).unwrap().norm() < 1e-9);
        assert_eq!(l_value(&z, c(1.0, 0.0)), Err(Error::Pole));
    }

    #[test]
    fn agrees_with_dirichlet_series() {
        // Oracle: the absolutely convergent Euler product at Re s = 3.
        let primes = primes_up_to(10_000);
        for q in [3u64, 5, 8, 13] {
            for chi in primitive_characters(q) {
                let s = c(3.0, 4.5);
                let mut euler = Complex64::new(1.0, 0.0);
                for &p in &primes {
                    euler /= 1.0 - chi.value_u(p) * (-s * (p as f64).ln()).exp();
                }
                let v = l_value(&chi, s).unwrap();
                assert!((v - euler).norm() < 1e-10, "{chi}: {v} vs {euler}");
            }
        }
    }

    #[test]
    fn critical_line_symmetry_for_real_characters() {
        for q in [3u64, 4, 5, 8, 12] {
            for chi in primitive_characters(q).into_iter().filter(DirichletCharacter::is_real) {
                for t in [0.7, 6.0, 23.5, 48.0] {
                    let a = l_value(&chi, c(0.5, t)).unwrap().norm();
                    let b = l_value(&chi, c(0.5, -t)).unwrap().norm();
                    assert!((a - b).abs() < 1e-9 * (1.0 + a), "{chi} t = {t}");
                }
            }
        }
    }

    #[test]
    fn functional_equation() {
        // The completed function computed on either side agrees in modulus.
        for q in [1u64, 5, 7, 12] {
            for chi in primitive_characters(q) {
                for s in [c(0.8, 3.0), c(0.6, -17.0), c(1.3, 40.0)] {
                    let direct = log_completed(&chi, s).unwrap();
                    let mirror = log_completed(&chi.conj(), 1.0 - s).unwrap();
                    assert!((direct.re - mirror.re).abs() < 1e-9, "{chi} {s}");
                }
                let (_, residue) = critical_line_phase(&chi, 9.3).unwrap();
                assert!(residue.abs() < 1e-8, "{chi}: {residue}");
            }
        }
    }

    #[test]
    fn logderiv_matches_series_and_differences() {
        let chi = real_primitive_character(3).unwrap();
        let s = c(2.5, 1.0);
        let cauchy = l_logderiv(&chi, s, 0.25).unwrap();
        // Oracle: -sum Lambda(n) chi(n) n^{-s}, tail below 1e-9 at Re s = 2.5.
        let series: Complex64 = (2..2_000_000u64)
            .filter(|n| n % 3 != 0)
            .map(|n| {
                let l = von_mangoldt(n);
                if l == 0.0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    -chi.value_u(n) * l * (-s * (n as f64).ln()).exp()
                }
            })
            .sum();
        assert!((cauchy - series).norm() < 1e-8, "{cauchy} vs {series}");

        let h = 1e-4;
        let s = c(1.5, 7.0);
        let fd = (l_value(&chi, s + h).unwrap().ln() - l_value(&chi, s - h).unwrap().ln()) / (2.0 * h);
        let taylor = logderiv_taylor(&chi, s, 0.3, 3).unwrap();
        assert!((taylor[0] - fd).norm() < 1e-7);
        let fd2 = (l_value(&chi, s + h).unwrap().ln() - 2.0 * l_value(&chi, s).unwrap().ln()
            + l_value(&chi, s - h).unwrap().ln())
            / (h * h);
        assert!((taylor[1] - fd2).norm() < 1e-5 * (1.0 + fd2.norm()), "{} vs {fd2}", taylor[1]);
    }
}
