//! Complex log-gamma and digamma on the right half-plane.

use num_complex::Complex64;

/// `B_2, B_4, ..., B_20`.
pub(crate) const BERNOULLI_EVEN: [f64; 10] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
];

/// Shift target for the asymptotic series.
const SHIFT: f64 = 15.0;

fn check_domain(z: Complex64) {
    assert!(z.re > 0.0, "gamma functions are only evaluated on Re z > 0, got {z}");
}

/// Principal branch of `log Gamma(z)`, continuous on `Re z > 0` and real on
/// the positive axis.
pub fn ln_gamma(z: Complex64) -> Complex64 {
    check_domain(z);
    let mut z = z;
    let mut shift = Complex64::new(0.0, 0.0);
    while z.norm() < SHIFT {
        shift += z.ln();
        z += 1.0;
    }
    let inv = z.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut pow = inv;
    for (j, b) in BERNOULLI_EVEN.iter().enumerate() {
        let m = 2.0 * (j + 1) as f64;
        series += pow * (b / (m * (m - 1.0)));
        pow *= inv2;
    }
    (z - 0.5) * z.ln() - z + 0.5 * (2.0 * std::f64::consts::PI).ln() + series - shift
}

/// `psi(z) = Gamma'(z) / Gamma(z)`.
pub fn digamma(z: Complex64) -> Complex64 {
    check_domain(z);
    let mut z = z;
    let mut shift = Complex64::new(0.0, 0.0);
    while z.norm() < SHIFT {
        shift += z.inv();
        z += 1.0;
    }
    let inv2 = (z * z).inv();
    let mut series = Complex64::new(0.0, 0.0);
    let mut pow = inv2;
    for (j, b) in BERNOULLI_EVEN.iter().enumerate() {
        series += pow * (b / (2.0 * (j + 1) as f64));
        pow *= inv2;
    }
    z.ln() - 0.5 * z.inv() - series - shift
}
