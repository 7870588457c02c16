//! Zeros of Dirichlet L-functions in a box, located by the argument
//! principle on the completed L-function and polished by Newton's method.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::lfunc::{critical_line_phase, l_value, log_completed};
use crate::character::DirichletCharacter;
use crate::error::{Error, Result};

/// Largest box height accepted.
pub const MAX_HEIGHT: f64 = 60.0;
/// Right edge of every contour; `L(s, chi)` has no zeros with `Re s >= 1`.
const RIGHT_EDGE: f64 = 1.5;
/// Longest contour segment accepted without subdivision.
const MAX_STEP: f64 = 0.5;
/// A segment this short that still needs refinement sits on a zero.
const MIN_STEP: f64 = 1e-10;
/// Boxes this small are reported by their centre.
const MIN_BOX: f64 = 1e-9;
/// Shift applied to a contour line that passes through a zero.
const PERTURBATION: f64 = 1e-6;
const MAX_PERTURBATIONS: usize = 5;
/// Height of the strips the box is cut into before any zero is located.
const STRIP_HEIGHT: f64 = 1.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Scanned,
    Synthetic,
}

/// Zeros `beta + i gamma` with `beta > sigma_min` and `|gamma| <= T`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroList {
    pub q: u64,
    pub character: String,
    /// `(sigma_min, T)`.
    #[serde(rename = "box")]
    pub bbox: (f64, f64),
    /// Sorted by ordinate, then abscissa.
    pub zeros: Vec<Complex64>,
    pub provenance: Provenance,
}

impl ZeroList {
    pub fn synthetic(zeros: Vec<Complex64>, sigma_min: f64, t: f64) -> Self {
        let mut zeros = zeros;
        sort_zeros(&mut zeros);
        ZeroList { q: 0, character: "synthetic".into(), bbox: (sigma_min, t), zeros, provenance: Provenance::Synthetic }
    }

    /// `N(sigma, T)`: zeros with `beta > sigma` and `|gamma| <= T`.
    pub fn count(&self, sigma: f64, t: f64) -> usize {
        self.zeros.iter().filter(|z| z.re > sigma && z.im.abs() <= t).count()
    }

    /// Zeros with `gamma > 0`.
    pub fn upper_half(&self) -> Vec<Complex64> {
        self.zeros.iter().copied().filter(|z| z.im > 0.0).collect()
    }
}

fn sort_zeros(zeros: &mut [Complex64]) {
    zeros.sort_by(|a, b| a.im.total_cmp(&b.im).then(a.re.total_cmp(&b.re)));
}

fn wrap(d: f64) -> f64 {
    d - TAU * (d / TAU).round()
}

struct Contour<'a> {
    chi: &'a DirichletCharacter,
}

impl Contour<'_> {
    fn log_lambda(&self, s: Complex64) -> Result<Complex64> {
        let v = log_completed(self.chi, s)?;
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v)
        } else {
            Err(Error::Scan(format!("completed L-function vanishes at {s}")))
        }
    }

    /// Change in `arg Lambda` along the segment from `a` to `b`.
    fn arg_change(&self, a: Complex64, b: Complex64) -> Result<f64> {
        let pieces = ((b - a).norm() / MAX_STEP).ceil().max(1.0) as usize;
        let points: Vec<Complex64> = (0..=pieces).map(|i| a + (b - a) * (i as f64 / pieces as f64)).collect();
        let logs = points.iter().map(|&s| self.log_lambda(s)).collect::<Result<Vec<_>>>()?;
        let mut total = 0.0;
        for i in 0..pieces {
            total += self.refine(points[i], logs[i], points[i + 1], logs[i + 1])?;
        }
        Ok(total)
    }

    /// Accepts a segment once its increment is below `pi/4` and the two
    /// halves add up to it, so a hidden full turn cannot slip through.
    fn refine(&self, a: Complex64, la: Complex64, b: Complex64, lb: Complex64) -> Result<f64> {
        let d = wrap(lb.im - la.im);
        if (b - a).norm() < MIN_STEP {
            return Err(Error::Scan(format!("contour passes through a zero near {a}")));
        }
        let m = (a + b) * 0.5;
        let lm = self.log_lambda(m)?;
        let (d1, d2) = (wrap(lm.im - la.im), wrap(lb.im - lm.im));
        if d.abs() < PI / 4.0 && (d1 + d2 - d).abs() < 1e-9 {
            return Ok(d1 + d2);
        }
        Ok(self.refine(a, la, m, lm)? + self.refine(m, lm, b, lb)?)
    }

    /// Winding number from four edge increments (bottom, right, top, left,
    /// with top and left traversed in their natural direction).
    fn winding(bottom: f64, right: f64, top: f64, left: f64) -> Result<usize> {
        let turns = (bottom + right - top - left) / TAU;
        let n = turns.round();
        if (turns - n).abs() > 0.1 || n < 0.0 {
            return Err(Error::Scan(format!("non-integral winding {turns}")));
        }
        Ok(n as usize)
    }

    fn box_count(&self, r: &Rect) -> Result<usize> {
        let (z00, z10, z01, z11) = r.corners();
        let bottom = self.arg_change(z00, z10)?;
        let right = self.arg_change(z10, z11)?;
        let top = self.arg_change(z01, z11)?;
        let left = self.arg_change(z00, z01)?;
        Self::winding(bottom, right, top, left)
    }

    fn newton(&self, start: Complex64) -> Option<Complex64> {
        let h = 1e-5;
        let mut s = start;
        for _ in 0..40 {
            let v = l_value(self.chi, s).ok()?;
            let dv = (l_value(self.chi, s + h).ok()? - l_value(self.chi, s - h).ok()?) / (2.0 * h);
            if dv.norm() == 0.0 {
                return None;
            }
            let step = v / dv;
            s -= step;
            if !(s.re.is_finite() && s.im.is_finite()) {
                return None;
            }
            if step.norm() < 1e-13 * (1.0 + s.norm()) {
                return Some(s);
            }
        }
        None
    }

    fn locate(&self, r: Rect, count: usize, out: &mut Vec<Complex64>) -> Result<()> {
        if count == 0 {
            return Ok(());
        }
        if r.size() < MIN_BOX {
            out.extend(std::iter::repeat_n(r.center(), count));
            return Ok(());
        }
        if count == 1 {
            if let Some(z) = self.newton(r.center()) {
                if r.contains(z) && z.re > 0.0 && z.re < 1.0 {
                    out.push(z);
                    return Ok(());
                }
            }
        }
        let mut last_err = None;
        for attempt in 0..=MAX_PERTURBATIONS {
            let (a, b) = r.split(attempt as f64 * PERTURBATION);
            let counts = self.box_count(&a).and_then(|ca| Ok((ca, self.box_count(&b)?)));
            match counts {
                Ok((ca, cb)) if ca + cb == count => {
                    self.locate(a, ca, out)?;
                    return self.locate(b, cb, out);
                }
                Ok((ca, cb)) => {
                    last_err = Some(Error::Scan(format!("children count {ca} + {cb} != {count}")));
                }
                Err(e) => last_err = Some(e),
            }
        }
        Err(last_err.expect("at least one attempt"))
    }
}

#[derive(Clone, Copy, Debug)]
struct Rect {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Rect {
    fn corners(&self) -> (Complex64, Complex64, Complex64, Complex64) {
        (
            Complex64::new(self.x0, self.y0),
            Complex64::new(self.x1, self.y0),
            Complex64::new(self.x0, self.y1),
            Complex64::new(self.x1, self.y1),
        )
    }

    fn size(&self) -> f64 {
        (self.x1 - self.x0).max(self.y1 - self.y0)
    }

    fn center(&self) -> Complex64 {
        Complex64::new(0.5 * (self.x0 + self.x1), 0.5 * (self.y0 + self.y1))
    }

    fn contains(&self, z: Complex64) -> bool {
        z.re >= self.x0 && z.re <= self.x1 && z.im >= self.y0 && z.im <= self.y1
    }

    /// Halves across the longer side. Vertical cuts avoid the critical
    /// line, where most zeros sit.
    fn split(&self, shift: f64) -> (Rect, Rect) {
        let (w, h) = (self.x1 - self.x0, self.y1 - self.y0);
        if w >= h {
            let mut x = self.x0 + w * 0.5123 + shift * w;
            if (x - 0.5).abs() < 1e-3 * w.max(1e-6) {
                x += 0.02 * w;
            }
            (Rect { x1: x, ..*self }, Rect { x0: x, ..*self })
        } else {
            let y = self.y0 + h * 0.4871 + shift * h;
            (Rect { y1: y, ..*self }, Rect { y0: y, ..*self })
        }
    }
}

/// All zeros of `L(s, chi)` with `sigma_min < beta < 1` and `|gamma| <= T`.
///
/// For real characters only the upper half is scanned and mirrored, so the
/// list is exactly closed under conjugation.
pub fn scan_zeros(chi: &DirichletCharacter, t: f64, sigma_min: f64) -> Result<ZeroList> {
    if !(t > 0.0 && t <= MAX_HEIGHT) {
        return Err(Error::Unsupported(format!("T = {t} outside (0, {MAX_HEIGHT}]")));
    }
    if sigma_min >= 1.0 {
        return Ok(ZeroList {
            q: chi.modulus(),
            character: chi.label(),
            bbox: (sigma_min, t),
            zeros: Vec::new(),
            provenance: Provenance::Scanned,
        });
    }
    let contour = Contour { chi };
    let real = chi.is_real();
    let x0 = sigma_min.max(-0.5);
    let y_lo = if real { 0.0 } else { -t };
    let strips = ((t - y_lo) / STRIP_HEIGHT).ceil().max(1.0) as usize;

    let mut last_err = None;
    for attempt in 0..=MAX_PERTURBATIONS {
        // Interior lines move off a zero by perturbation; the outer edges
        // move outward only.
        let shift = attempt as f64 * PERTURBATION;
        let left = x0 - shift;
        let ys: Vec<f64> = (0..=strips)
            .map(|i| {
                if i == 0 {
                    y_lo - if real { 0.0 } else { shift }
                } else if i == strips {
                    t + shift
                } else {
                    y_lo + (t - y_lo) * i as f64 / strips as f64 + shift
                }
            })
            .collect();
        match scan_strips(&contour, left, &ys) {
            Ok(mut zeros) => {
                zeros.retain(|z| z.re > sigma_min && z.im.abs() <= t);
                if real {
                    let mirrored: Vec<Complex64> = zeros.iter().filter(|z| z.im > 0.0).map(|z| z.conj()).collect();
                    zeros.extend(mirrored);
                }
                sort_zeros(&mut zeros);
                return Ok(ZeroList {
                    q: chi.modulus(),
                    character: chi.label(),
                    bbox: (sigma_min, t),
                    zeros,
                    provenance: Provenance::Scanned,
                });
            }
            Err(e) => last_err = Some(e),
        }
    }
    Err(last_err.expect("at least one attempt"))
}

fn scan_strips(contour: &Contour<'_>, left: f64, ys: &[f64]) -> Result<Vec<Complex64>> {
    let horizontal = ys
        .par_iter()
        .map(|&y| contour.arg_change(Complex64::new(left, y), Complex64::new(RIGHT_EDGE, y)))
        .collect::<Result<Vec<f64>>>()?;
    let sides = ys
        .par_windows(2)
        .map(|w| {
            let l = contour.arg_change(Complex64::new(left, w[0]), Complex64::new(left, w[1]))?;
            let r = contour.arg_change(Complex64::new(RIGHT_EDGE, w[0]), Complex64::new(RIGHT_EDGE, w[1]))?;
            Ok((l, r))
        })
        .collect::<Result<Vec<(f64, f64)>>>()?;
    let found = (0..sides.len())
        .into_par_iter()
        .map(|i| {
            let count = Contour::winding(horizontal[i], sides[i].1, horizontal[i + 1], sides[i].0)?;
            let rect = Rect { x0: left, x1: RIGHT_EDGE, y0: ys[i], y1: ys[i + 1] };
            let mut out = Vec::new();
            contour.locate(rect, count, &mut out)?;
            Ok(out)
        })
        .collect::<Result<Vec<Vec<Complex64>>>>()?;
    Ok(found.into_iter().flatten().collect())
}

/// Sign changes of the real rotation of `Lambda(1/2 + it)` on a grid of
/// `[t0, t1]`: an independent lower count of zeros on the critical line.
pub fn critical_line_sign_changes(chi: &DirichletCharacter, t0: f64, t1: f64, step: f64) -> Result<usize> {
    let n = ((t1 - t0) / step).ceil().max(1.0) as usize;
    let signs = (0..=n)
        .into_par_iter()
        .map(|i| {
            let t = t0 + (t1 - t0) * i as f64 / n as f64;
            Ok(critical_line_phase(chi, t)?.0)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(signs.windows(2).filter(|w| w[0] * w[1] < 0.0).count())
}
