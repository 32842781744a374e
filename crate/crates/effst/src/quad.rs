//! Small quadrature toolkit shared by the measure and smoothing code.

use crate::error::{Error, Result};

/// Adaptive Simpson integration of `f` over `[a, b]` with absolute
/// tolerance `tol`. Errors with `NumericFailure` if the recursion budget
/// is exhausted before the tolerance is met.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::invalid("quadrature tolerance must be positive"));
    }
    if a == b {
        return Ok(0.0);
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = simpson(a, b, fa, fm, fb);
    recurse(f, a, b, fa, fm, fb, whole, tol, 48)
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn recurse<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        return Err(Error::NumericFailure(format!(
            "adaptive quadrature did not converge on [{a}, {b}]"
        )));
    }
    let half = 0.5 * tol;
    Ok(recurse(f, a, m, fa, flm, fm, left, half, depth - 1)?
        + recurse(f, m, b, fm, frm, fb, right, half, depth - 1)?)
}

/// Integrate a piecewise-smooth function whose kinks are known: the
/// integration range is split at `breaks` and each piece is handled
/// adaptively. `breaks` need not be sorted or deduplicated.
pub fn piecewise_simpson<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    breaks: &[f64],
    tol: f64,
) -> Result<f64> {
    let mut pts: Vec<f64> = breaks.iter().copied().filter(|t| *t > a && *t < b).collect();
    pts.push(a);
    pts.push(b);
    pts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    pts.dedup();
    let per = tol / (pts.len() - 1) as f64;
    let mut total = 0.0;
    for w in pts.windows(2) {
        total += adaptive_simpson(f, w[0], w[1], per)?;
    }
    Ok(total)
}

/// Equispaced trapezoid rule over one period `[0, 1]`.
///
/// For 1-periodic integrands this is spectrally accurate, and exact (up
/// to rounding) whenever `f` is a trigonometric polynomial of degree
/// less than `n`.
pub fn periodic_trapezoid<F: Fn(f64) -> f64>(f: &F, n: usize) -> f64 {
    let mut acc = 0.0;
    for k in 0..n {
        acc += f(k as f64 / n as f64);
    }
    acc / n as f64
}

/// Tensor version of [`periodic_trapezoid`] on the 2-torus.
pub fn periodic_trapezoid_2d<F: Fn(f64, f64) -> f64>(f: &F, n: usize) -> f64 {
    let mut acc = 0.0;
    for i in 0..n {
        let x = i as f64 / n as f64;
        for j in 0..n {
            acc += f(x, j as f64 / n as f64);
        }
    }
    acc / (n * n) as f64
}
