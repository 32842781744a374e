//! Multivariate trigonometric smoothing of interval indicators.
//!
//! Starting from the indicator of the trace preimage of an interval on
//! the parameter torus, r-fold box averaging produces a continuous
//! periodic function that is exactly 1 well inside the preimage, exactly
//! 0 well outside, and whose Fourier coefficients decay like
//! `(1/(m Delta))^r`. On the Fourier side the averaging is a plain
//! multiplier, so the whole pipeline is carried as a truncated
//! coefficient map: indicator coefficients, multiplier, Weyl average,
//! and finally a rewrite in irreducible characters whose trivial
//! component approximates the trace measure of the interval.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::groups::{Interval, StGroup};
use crate::lie::{self, Weight};
use crate::quad;

const TAU: f64 = std::f64::consts::TAU;

/// Truncated multivariate Fourier expansion with real coefficients on a
/// symmetric frequency box.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierSeries {
    dim: usize,
    support_bound: i64,
    coeffs: BTreeMap<Vec<i64>, f64>,
}

impl FourierSeries {
    pub fn new(dim: usize, support_bound: i64) -> Self {
        FourierSeries { dim, support_bound, coeffs: BTreeMap::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn support_bound(&self) -> i64 {
        self.support_bound
    }

    pub fn coefficient(&self, m: &[i64]) -> f64 {
        self.coeffs.get(m).copied().unwrap_or(0.0)
    }

    pub fn constant_term(&self) -> f64 {
        self.coefficient(&vec![0; self.dim])
    }

    pub fn set(&mut self, m: Vec<i64>, value: f64) -> Result<()> {
        if m.len() != self.dim {
            return Err(Error::invalid("frequency vector has wrong dimension"));
        }
        if m.iter().any(|c| c.abs() > self.support_bound) {
            return Err(Error::invalid("frequency outside the support bound"));
        }
        if value == 0.0 {
            self.coeffs.remove(&m);
        } else {
            self.coeffs.insert(m, value);
        }
        Ok(())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<i64>, f64)> {
        self.coeffs.iter().map(|(m, &c)| (m, c))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// CSV rendering, one `m1,...,mq,coefficient` row per entry in
    /// lexicographic frequency order.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for i in 1..=self.dim {
            out.push_str(&format!("m{i},"));
        }
        out.push_str("coefficient\n");
        for (m, c) in &self.coeffs {
            for v in m {
                out.push_str(&format!("{v},"));
            }
            out.push_str(&crate::fmt::sig(*c));
            out.push('\n');
        }
        out
    }
}

/// The parameter schedule of one smoothing run.
#[derive(Debug, Clone, Copy)]
pub struct SmoothingParams {
    /// Half-width of the transition collar around the interval.
    pub delta_cap: f64,
    /// Number of box-averaging passes.
    pub r: u32,
    /// Box half-width, tied to the others by `r sqrt(q) K delta = Delta`.
    pub delta_box: f64,
    /// Gradient bound of the trace map.
    pub gradient_bound: f64,
    /// Fourier truncation bound.
    pub truncation: i64,
}

impl SmoothingParams {
    pub fn new(group: &StGroup, interval: Interval, delta_cap: f64, r: u32, truncation: i64) -> Result<Self> {
        if !(delta_cap > 0.0) {
            return Err(Error::invalid("Delta must be positive"));
        }
        if 2.0 * delta_cap > interval.length() {
            return Err(Error::BelowThreshold(format!(
                "2 Delta = {} exceeds the interval length {}",
                2.0 * delta_cap,
                interval.length()
            )));
        }
        if truncation < 1 {
            return Err(Error::invalid("truncation bound must be at least 1"));
        }
        let k = group.gradient_bound();
        let q = group.q() as f64;
        let delta_box = if r == 0 { 0.0 } else { delta_cap / (r as f64 * q.sqrt() * k) };
        if !(0.0..1.0).contains(&delta_box) {
            return Err(Error::invalid(format!("box half-width {delta_box} outside [0, 1)")));
        }
        Ok(SmoothingParams { delta_cap, r, delta_box, gradient_bound: k, truncation })
    }
}

/// The schedule used by the effective error analysis:
/// `Delta = x^(-eps) log(x)^(4 eps) log(N x)^(2 eps)`, `r = q + phi - 1`
/// (or `q` when there are no roots), and the matching truncation bound.
/// Fails with `BelowThreshold` when `2 Delta > |I|`, i.e. when `x` is
/// below the admissible threshold for this interval.
pub fn default_parameters(group: &StGroup, x: f64, n: u64, interval: Interval) -> Result<SmoothingParams> {
    if x < 2.0 {
        return Err(Error::invalid("x must be at least 2"));
    }
    if n < 1 {
        return Err(Error::invalid("conductor bound must be at least 1"));
    }
    let eps = group.epsilon()?;
    let epsf = *eps.numer() as f64 / *eps.denom() as f64;
    let q = group.q();
    let phi = group.phi();
    let delta_cap = x.powf(-epsf) * x.ln().powf(4.0 * epsf) * (n as f64 * x).ln().powf(2.0 * epsf);
    let r = if phi > 0 { (q + phi - 1) as u32 } else { q as u32 };
    let m_exponent = if phi > 0 { (q + phi) as f64 / phi as f64 } else { q as f64 + 1.0 };
    let m_float = delta_cap.powf(-m_exponent).ceil();
    if !(m_float >= 1.0) || m_float > 1e15 {
        return Err(Error::NumericFailure(format!(
            "truncation bound {m_float:e} out of tractable range"
        )));
    }
    SmoothingParams::new(group, interval, delta_cap, r, m_float as i64)
}

/// Fourier multiplier of one box-averaging pass.
pub fn box_multiplier(m: i64, delta: f64) -> f64 {
    if m == 0 || delta == 0.0 {
        return 1.0;
    }
    let x = TAU * m as f64 * delta;
    x.sin() / x
}

/// Fourier coefficients of the indicator of the trace preimage of `i`
/// on the parameter torus, up to frequency `m_bound` per coordinate.
/// The constant term is the preimage volume.
pub fn indicator_fourier(group: &StGroup, i: Interval, m_bound: i64) -> Result<FourierSeries> {
    i.validate_for_dimension(group.g())?;
    if m_bound < 1 {
        return Err(Error::invalid("frequency bound must be at least 1"));
    }
    match group.q() {
        1 => indicator_fourier_1d(group, i, m_bound),
        2 => indicator_fourier_2d(group, i, m_bound),
        q => Err(Error::Unsupported(format!("indicator coefficients for rank {q}"))),
    }
}

fn indicator_fourier_1d(group: &StGroup, i: Interval, m_bound: i64) -> Result<FourierSeries> {
    let arcs = group.preimage_arcs_1d(i)?;
    let mut series = FourierSeries::new(1, m_bound);
    for m in -m_bound..=m_bound {
        let mut re = 0.0;
        let mut im = 0.0;
        for &(a, b) in &arcs {
            if m == 0 {
                re += b - a;
            } else {
                // integral of e^(-2 pi i m t) over [a, b]
                let w = TAU * m as f64;
                re += ((w * b).sin() - (w * a).sin()) / w;
                im += ((w * b).cos() - (w * a).cos()) / w;
            }
        }
        if im.abs() > 1e-12 {
            return Err(Error::NumericFailure(format!(
                "asymmetric preimage produced a complex coefficient at m = {m}"
            )));
        }
        series.set(vec![m], chop(re))?;
    }
    Ok(series)
}

fn indicator_fourier_2d(group: &StGroup, i: Interval, m_bound: i64) -> Result<FourierSeries> {
    if m_bound > 64 {
        return Err(Error::Unsupported(
            "rank-2 indicator coefficients are limited to frequency bound 64".into(),
        ));
    }
    if !is_identity_embedding(group) {
        return Err(Error::Unsupported(
            "rank-2 indicator coefficients need the identity embedding".into(),
        ));
    }
    let mut series = FourierSeries::new(2, m_bound);
    let breaks = kink_points_2d(i);
    for m1 in -m_bound..=m_bound {
        for m2 in -m_bound..=m_bound {
            let inner = |theta1: f64, pick_im: bool| -> f64 {
                let u = 2.0 * (TAU * theta1).cos();
                let arcs = crate::groups::cos_arcs((i.lower - u) / 2.0, (i.upper - u) / 2.0);
                let (mut re2, mut im2) = (0.0, 0.0);
                for &(a, b) in &arcs {
                    if m2 == 0 {
                        re2 += b - a;
                    } else {
                        let w = TAU * m2 as f64;
                        re2 += ((w * b).sin() - (w * a).sin()) / w;
                        im2 += ((w * b).cos() - (w * a).cos()) / w;
                    }
                }
                // multiply by e^(-2 pi i m1 theta1)
                let phase = TAU * m1 as f64 * theta1;
                let (s, c) = phase.sin_cos();
                if pick_im {
                    -re2 * s + im2 * c
                } else {
                    re2 * c + im2 * s
                }
            };
            let re = quad::piecewise_simpson(&|t| inner(t, false), 0.0, 1.0, &breaks, 1e-10)?;
            let im = quad::piecewise_simpson(&|t| inner(t, true), 0.0, 1.0, &breaks, 1e-10)?;
            if im.abs() > 1e-8 {
                return Err(Error::NumericFailure(format!(
                    "asymmetric preimage produced a complex coefficient at ({m1}, {m2})"
                )));
            }
            series.set(vec![m1, m2], chop(re))?;
        }
    }
    Ok(series)
}

fn kink_points_2d(i: Interval) -> Vec<f64> {
    let mut pts = vec![0.5];
    for v in [i.lower - 2.0, i.lower + 2.0, i.upper - 2.0, i.upper + 2.0] {
        let c = v / 2.0;
        if (-1.0..=1.0).contains(&c) {
            let t = c.acos() / TAU;
            pts.push(t);
            pts.push(1.0 - t);
        }
    }
    pts
}

fn is_identity_embedding(group: &StGroup) -> bool {
    group.embedding().len() == group.q()
        && group
            .embedding()
            .iter()
            .enumerate()
            .all(|(l, row)| row.iter().enumerate().all(|(j, &e)| e == i64::from(l == j)))
}

fn chop(x: f64) -> f64 {
    if x.abs() < 1e-15 {
        0.0
    } else {
        x
    }
}

/// Apply the r-fold box-averaging multiplier on the Fourier side:
/// `c_m <- c_m prod_j nu(m_j, delta)^r`.
pub fn smooth(series: &FourierSeries, params: &SmoothingParams) -> FourierSeries {
    let mut out = FourierSeries::new(series.dim(), series.support_bound());
    for (m, c) in series.iter() {
        let mult: f64 = m
            .iter()
            .map(|&mj| box_multiplier(mj, params.delta_box).powi(params.r as i32))
            .product();
        out.set(m.clone(), chop(c * mult)).expect("same support");
    }
    out
}

/// Evaluate the truncated series at a torus point; the imaginary part
/// must cancel (real symmetric coefficients) and the real part is
/// returned.
pub fn evaluate_series(series: &FourierSeries, theta: &[f64]) -> Result<f64> {
    if theta.len() != series.dim() {
        return Err(Error::invalid("evaluation point has wrong dimension"));
    }
    let mut re = 0.0;
    let mut im = 0.0;
    for (m, c) in series.iter() {
        let phase: f64 = TAU * m.iter().zip(theta).map(|(&mj, t)| mj as f64 * t).sum::<f64>();
        re += c * phase.cos();
        im += c * phase.sin();
    }
    if im.abs() > 1e-10 {
        return Err(Error::NumericFailure(format!(
            "series evaluation came out complex (im = {im:e})"
        )));
    }
    Ok(re)
}

/// Reference oracle: evaluate the r-fold box average of the indicator by
/// direct nested integration, without any Fourier truncation. Exact
/// (within `tol`) but with no performance budget; production evaluation
/// is series-based.
pub fn evaluate_direct(
    group: &StGroup,
    i: Interval,
    params: &SmoothingParams,
    theta: &[f64],
    tol: f64,
) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::invalid("tolerance must be positive"));
    }
    if theta.len() != group.q() {
        return Err(Error::invalid("evaluation point has wrong dimension"));
    }
    box_average(group, i, params.r, params.delta_box, theta, tol)
}

fn box_average(
    group: &StGroup,
    i: Interval,
    level: u32,
    delta: f64,
    theta: &[f64],
    tol: f64,
) -> Result<f64> {
    if level == 0 || delta == 0.0 {
        let t = group.trace_value(theta);
        let v = if t > i.lower && t < i.upper {
            1.0
        } else if t < i.lower || t > i.upper {
            0.0
        } else {
            0.5
        };
        return Ok(v);
    }
    match group.q() {
        1 => {
            if level == 1 {
                // exact: measure of the box intersected with the
                // periodically tiled preimage arcs
                let arcs = group.preimage_arcs_1d(i)?;
                let (lo, hi) = (theta[0] - delta, theta[0] + delta);
                let mut mass = 0.0;
                let k0 = lo.floor() as i64 - 1;
                let k1 = hi.ceil() as i64 + 1;
                for k in k0..=k1 {
                    for &(a, b) in &arcs {
                        let (a, b) = (a + k as f64, b + k as f64);
                        let ov = (b.min(hi) - a.max(lo)).max(0.0);
                        mass += ov;
                    }
                }
                Ok(mass / (2.0 * delta))
            } else {
                let f = |z: f64| {
                    box_average(group, i, level - 1, delta, &[z], tol * 0.1).unwrap_or(f64::NAN)
                };
                let v = quad::adaptive_simpson(&f, theta[0] - delta, theta[0] + delta, tol * delta)?;
                Ok(v / (2.0 * delta))
            }
        }
        2 => {
            let f = |z1: f64| {
                let inner = |z2: f64| {
                    box_average(group, i, level - 1, delta, &[z1, z2], tol * 0.1)
                        .unwrap_or(f64::NAN)
                };
                quad::adaptive_simpson(&inner, theta[1] - delta, theta[1] + delta, tol * delta)
                    .unwrap_or(f64::NAN)
            };
            let v = quad::adaptive_simpson(&f, theta[0] - delta, theta[0] + delta, tol * delta)?;
            Ok(v / (4.0 * delta * delta))
        }
        q => Err(Error::Unsupported(format!("direct evaluation for rank {q}"))),
    }
}

/// Project a series onto its Weyl average: `c_m <- (1/#W) sum_w c_(w m)`.
pub fn weyl_average(group: &StGroup, series: &FourierSeries) -> Result<FourierSeries> {
    if series.dim() != group.q() {
        return Err(Error::invalid("series dimension does not match the group rank"));
    }
    let action = group.weyl_on_torus();
    let order = action.len() as f64;
    let mut out = FourierSeries::new(series.dim(), series.support_bound());
    let mut seen: BTreeMap<Vec<i64>, f64> = BTreeMap::new();
    for (m, _) in series.iter() {
        for w in &action {
            let img = lie::mat_vec(w, m);
            if !seen.contains_key(&img) {
                let avg: f64 =
                    action.iter().map(|v| series.coefficient(&lie::mat_vec(v, &img))).sum::<f64>() / order;
                seen.insert(img, avg);
            }
        }
    }
    for (m, c) in seen {
        if m.iter().any(|v| v.abs() > series.support_bound()) {
            continue; // orbit escapes the truncation box; drop symmetrically
        }
        out.set(m, chop(c))?;
    }
    Ok(out)
}

/// Character decomposition of a Weyl-invariant truncated series.
#[derive(Debug, Clone)]
pub struct Decomposition {
    /// Coefficient of the trivial character; approximates the trace
    /// measure of the smoothed interval.
    pub delta: f64,
    /// Nontrivial coefficients, indexed by (dominant semisimple part,
    /// abelian frequency).
    pub coefficients: BTreeMap<Weight, f64>,
    /// Total `sum |p| dim` over the nontrivial part, for error budgets.
    pub virtual_dimension: f64,
}

/// Rewrite the truncated series as `delta * 1 + sum p_lambda chi_lambda`
/// using the inverse of the weight-multiplicity matrix.
pub fn character_decomposition(
    group: &StGroup,
    series: &FourierSeries,
    m_bound: i64,
) -> Result<Decomposition> {
    let rs = group.root_system();
    if series.dim() != group.q() {
        return Err(Error::invalid("series dimension does not match the group rank"));
    }
    // Weyl invariance is a precondition
    let action = group.weyl_on_torus();
    for (m, c) in series.iter() {
        for w in &action {
            let img = lie::mat_vec(w, m);
            let ci = series.coefficient(&img);
            if (ci - c).abs() > 1e-10 * (1.0 + c.abs()) {
                return Err(Error::invalid(format!(
                    "series is not Weyl-invariant at frequency {m:?}"
                )));
            }
        }
    }
    let h = group.h();
    let mut delta = 0.0;
    let mut coeffs: BTreeMap<Weight, f64> = BTreeMap::new();
    for (m, c) in series.iter() {
        if m.iter().any(|v| v.abs() > m_bound) || c == 0.0 {
            continue;
        }
        let m_omega = rs.from_torus_coords(&m[..h]);
        let lam = Weight::new(m_omega, m[h..].to_vec());
        if !lam.is_dominant() {
            continue; // only the dominant orbit representative contributes
        }
        for n in lie::dominant_weights_below(rs, &lam)? {
            let d = lie::gupta_inverse_entry(rs, &lam, &n)?;
            let d = *d.numer() as f64 / *d.denom() as f64;
            if d == 0.0 {
                continue;
            }
            if n.is_zero() {
                delta += c * d;
            } else {
                *coeffs.entry(n).or_insert(0.0) += c * d;
            }
        }
    }
    coeffs.retain(|_, p| p.abs() > 1e-14);
    let mut virtual_dimension = 0.0;
    for (lam, p) in &coeffs {
        let sem = Weight::semisimple_only(lam.semisimple.clone());
        let sem = Weight::new(sem.semisimple, vec![0; rs.abelian_rank()]);
        virtual_dimension += p.abs() * lie::weyl_dimension(rs, &sem)? as f64;
    }
    Ok(Decomposition { delta, coefficients: coeffs, virtual_dimension })
}

/// Evaluate a decomposition at a torus point (trivial part plus
/// characters); the exact counterpart of evaluating the truncated
/// series.
pub fn evaluate_decomposition(group: &StGroup, dec: &Decomposition, theta: &[f64]) -> Result<f64> {
    let rs = group.root_system();
    let mut acc = dec.delta;
    for (lam, p) in &dec.coefficients {
        acc += p * lie::character_value(rs, lam, theta)?;
    }
    Ok(acc)
}

/// Upper bound on the smoothed coefficient at frequency `m` from the
/// decay estimate: `min(|c_0|, min_(rho <= r) C/(pi max|m_j|) *
/// prod_(m_j != 0) (r K sqrt(q) / (2 pi |m_j| Delta))^rho)`.
pub fn coefficient_bound(group: &StGroup, params: &SmoothingParams, c0: f64, m: &[i64]) -> f64 {
    let max_m = m.iter().map(|v| v.abs()).max().unwrap_or(0);
    if max_m == 0 {
        return c0.abs();
    }
    let c = group.crossing_bound() as f64;
    let k = params.gradient_bound;
    let q = group.q() as f64;
    let base = c / (std::f64::consts::PI * max_m as f64);
    let mut best = f64::INFINITY;
    for rho in 0..=params.r {
        let mut v = base;
        for &mj in m {
            if mj != 0 {
                v *= (params.r as f64 * k * q.sqrt() / (TAU * mj.abs() as f64 * params.delta_cap))
                    .powi(rho as i32);
            }
        }
        best = best.min(v);
    }
    best.min(c0.abs())
}

/// Closed-form bound on the mass of all coefficients beyond the
/// truncation box, rank-1 case.
pub fn tail_bound_1d(group: &StGroup, params: &SmoothingParams, m_bound: i64) -> f64 {
    let c = group.crossing_bound() as f64;
    let k = params.gradient_bound;
    let r = params.r.max(1) as f64;
    let factor = (r * k / (TAU * params.delta_cap)).powf(r);
    // sum_(m > M) C/(pi m) (…/m)^r <= C/pi * factor / (r M^r)
    2.0 * c / std::f64::consts::PI * factor / (r * (m_bound as f64).powf(r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::catalog_lookup;

    fn su2() -> StGroup {
        catalog_lookup("SU2").unwrap()
    }

    fn interval(a: f64, b: f64) -> Interval {
        Interval::new(a, b).unwrap()
    }

    #[test]
    fn box_multiplier_examples() {
        assert_eq!(box_multiplier(0, 0.3), 1.0);
        let v = box_multiplier(1, 0.25);
        assert!((v - 2.0 / std::f64::consts::PI).abs() < 1e-15);
        assert!(box_multiplier(2, 0.25).abs() < 1e-15);
    }

    #[test]
    fn su2_indicator_coefficients() {
        let s = indicator_fourier(&su2(), interval(0.0, 2.0), 8).unwrap();
        assert!((s.constant_term() - 0.5).abs() < 1e-14);
        assert!((s.coefficient(&[1]) - 1.0 / std::f64::consts::PI).abs() < 1e-14);
        assert!((s.coefficient(&[-1]) - s.coefficient(&[1])).abs() < 1e-15);
        // full range: pure constant
        let s = indicator_fourier(&su2(), interval(-2.0, 2.0), 8).unwrap();
        assert!((s.constant_term() - 1.0).abs() < 1e-14);
        assert_eq!(s.coefficient(&[3]), 0.0);
    }

    #[test]
    fn smoothing_multiplier_is_power() {
        let grp = su2();
        let i = interval(0.0, 2.0);
        let base = indicator_fourier(&grp, i, 8).unwrap();
        let params = SmoothingParams::new(&grp, i, 0.1, 2, 8).unwrap();
        let sm = smooth(&base, &params);
        // constant term unchanged under any number of passes
        assert_eq!(sm.constant_term(), base.constant_term());
        let expected = base.coefficient(&[3]) * box_multiplier(3, params.delta_box).powi(2);
        assert!((sm.coefficient(&[3]) - expected).abs() < 1e-15);
        // r = 0 is the identity
        let id = SmoothingParams::new(&grp, i, 0.1, 0, 8).unwrap();
        assert_eq!(smooth(&base, &id), base);
    }

    #[test]
    fn delta_constraint_enforced() {
        let grp = su2();
        assert!(matches!(
            SmoothingParams::new(&grp, interval(0.0, 0.1), 0.2, 1, 8),
            Err(Error::BelowThreshold(_))
        ));
    }

    #[test]
    fn direct_evaluation_sandwich_1d() {
        let grp = su2();
        let i = interval(0.0, 2.0);
        let params = SmoothingParams::new(&grp, i, 0.1, 1, 100).unwrap();
        // theta = 1/8: trace = sqrt(2), well inside (Delta-shrunk) interval
        let v = evaluate_direct(&grp, i, &params, &[0.125], 1e-9).unwrap();
        assert!((v - 1.0).abs() < 1e-9, "inside value {v}");
        // theta = 0.4: trace = 2 cos(0.8 pi) < -Delta, well outside
        let v = evaluate_direct(&grp, i, &params, &[0.4], 1e-9).unwrap();
        assert!(v.abs() < 1e-9, "outside value {v}");
        // boundary region: between 0 and 1
        let v = evaluate_direct(&grp, i, &params, &[0.25], 1e-9).unwrap();
        assert!((0.0..=1.0).contains(&v));
    }

    #[test]
    fn series_tracks_direct_evaluation() {
        let grp = su2();
        let i = interval(0.0, 2.0);
        let m = 2000;
        let params = SmoothingParams::new(&grp, i, 0.1, 1, m).unwrap();
        let series = smooth(&indicator_fourier(&grp, i, m).unwrap(), &params);
        let tail = tail_bound_1d(&grp, &params, m);
        for theta in [0.03, 0.125, 0.2, 0.26, 0.4, 0.77] {
            let direct = evaluate_direct(&grp, i, &params, &[theta], 1e-9).unwrap();
            let approx = evaluate_series(&series, &[theta]).unwrap();
            assert!(
                (direct - approx).abs() <= tail + 1e-6,
                "theta={theta}: direct {direct} vs series {approx} (tail {tail})"
            );
        }
    }

    #[test]
    fn weyl_average_symmetrizes() {
        let grp = su2();
        let mut s = FourierSeries::new(1, 4);
        s.set(vec![1], 1.0).unwrap();
        let avg = weyl_average(&grp, &s).unwrap();
        assert!((avg.coefficient(&[1]) - 0.5).abs() < 1e-15);
        assert!((avg.coefficient(&[-1]) - 0.5).abs() < 1e-15);
        // projection is idempotent
        let twice = weyl_average(&grp, &avg).unwrap();
        assert_eq!(avg, twice);
    }

    #[test]
    fn decomposition_standard_character() {
        let grp = su2();
        let mut s = FourierSeries::new(1, 4);
        s.set(vec![1], 0.5).unwrap();
        s.set(vec![-1], 0.5).unwrap();
        let dec = character_decomposition(&grp, &s, 4).unwrap();
        assert!(dec.delta.abs() < 1e-14);
        let std = Weight::semisimple_only(vec![1]);
        assert!((dec.coefficients[&std] - 0.5).abs() < 1e-14);
        assert_eq!(dec.coefficients.len(), 1);
        assert!((dec.virtual_dimension - 1.0).abs() < 1e-12);
    }

    #[test]
    fn decomposition_shifts_trivial_part() {
        // cos(4 pi theta) = (chi_2 - chi_0) / ... : c_(+-2) = 1/2 gives
        // p_2 = 1/2 and delta = -1/2
        let grp = su2();
        let mut s = FourierSeries::new(1, 4);
        s.set(vec![2], 0.5).unwrap();
        s.set(vec![-2], 0.5).unwrap();
        let dec = character_decomposition(&grp, &s, 4).unwrap();
        assert!((dec.delta + 0.5).abs() < 1e-14);
        assert!((dec.coefficients[&Weight::semisimple_only(vec![2])] - 0.5).abs() < 1e-14);
    }

    #[test]
    fn decomposition_round_trip_pointwise() {
        let grp = su2();
        let i = interval(1.0, 2.0);
        let m = 40;
        let params = SmoothingParams::new(&grp, i, 0.1, 1, m).unwrap();
        let series = weyl_average(&grp, &smooth(&indicator_fourier(&grp, i, m).unwrap(), &params)).unwrap();
        let dec = character_decomposition(&grp, &series, m).unwrap();
        for k in 0..25 {
            let theta = [k as f64 / 25.0 + 0.013];
            let lhs = evaluate_decomposition(&grp, &dec, &theta).unwrap();
            let rhs = evaluate_series(&series, &theta).unwrap();
            assert!((lhs - rhs).abs() < 1e-8, "theta {theta:?}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn decomposition_rejects_asymmetric_series() {
        let grp = su2();
        let mut s = FourierSeries::new(1, 4);
        s.set(vec![1], 1.0).unwrap();
        assert!(character_decomposition(&grp, &s, 4).is_err());
    }

    #[test]
    fn default_parameter_schedule() {
        let grp = su2();
        // at x = 1e6 the schedule's Delta exceeds short intervals
        let r = default_parameters(&grp, 1e6, 11, interval(0.0, 2.0));
        assert!(matches!(r, Err(Error::BelowThreshold(_))), "{r:?}");
        // r values
        let u1 = catalog_lookup("U1").unwrap();
        let p = default_parameters(&u1, 1e12, 11, interval(-2.0, 2.0)).unwrap();
        assert_eq!(p.r, 1);
    }

    #[test]
    fn usp4_indicator_constant_term_is_volume() {
        let grp = catalog_lookup("USp4").unwrap();
        // preimage of the full range is everything
        let s = indicator_fourier(&grp, interval(-4.0, 4.0), 2).unwrap();
        assert!((s.constant_term() - 1.0).abs() < 1e-9);
        assert!(s.coefficient(&[1, 1]).abs() < 1e-8);
    }
}
