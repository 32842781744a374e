//! Parsers for the small value grammars used on the command line
//! (curve coefficient lists, intervals, grids, weights). Kept in the
//! library so they can be exercised directly by tests and fuzzing.

use crate::error::{Error, Result};
use crate::groups::Interval;
use crate::lie::Weight;

/// `a1,a2,a3,a4,a6` as exact integers.
pub fn parse_curve_coeffs(s: &str) -> Result<[i64; 5]> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 5 {
        return Err(Error::invalid(format!(
            "curve needs exactly 5 coefficients a1,a2,a3,a4,a6, got {}",
            parts.len()
        )));
    }
    let mut out = [0i64; 5];
    for (slot, part) in out.iter_mut().zip(&parts) {
        *slot = part
            .parse()
            .map_err(|_| Error::invalid(format!("coefficient {part:?} is not an integer")))?;
    }
    Ok(out)
}

/// `lower,upper` as a closed interval.
pub fn parse_interval(s: &str) -> Result<Interval> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| Error::invalid("interval needs the form lower,upper"))?;
    let lower: f64 = a
        .trim()
        .parse()
        .map_err(|_| Error::invalid(format!("bad interval bound {a:?}")))?;
    let upper: f64 = b
        .trim()
        .parse()
        .map_err(|_| Error::invalid(format!("bad interval bound {b:?}")))?;
    Interval::new(lower, upper)
}

/// A positive integer count, in plain or scientific notation (`1e6`).
pub fn parse_count(s: &str) -> Result<u64> {
    let t = s.trim();
    if t.is_empty() {
        return Err(Error::invalid("empty count"));
    }
    if t.bytes().all(|b| b.is_ascii_digit()) {
        return t
            .parse()
            .map_err(|_| Error::invalid(format!("count {t:?} out of range")));
    }
    let v: f64 = t
        .parse()
        .map_err(|_| Error::invalid(format!("count {t:?} is not a number")))?;
    if !v.is_finite() || v < 0.0 || v > 9e18 || v.fract() != 0.0 {
        return Err(Error::invalid(format!("count {t:?} must be a nonnegative integer")));
    }
    Ok(v as u64)
}

/// Comma-separated strictly increasing list of counts.
pub fn parse_grid(s: &str) -> Result<Vec<u64>> {
    let grid: Vec<u64> = s
        .split(',')
        .map(parse_count)
        .collect::<Result<_>>()?;
    if grid.is_empty() {
        return Err(Error::invalid("empty grid"));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("grid must be strictly increasing"));
    }
    Ok(grid)
}

/// Weight coordinates `m1,...,m_(h+a)`: semisimple part first.
pub fn parse_weight(s: &str, rank_h: usize, abelian_rank: usize) -> Result<Weight> {
    let coords: Vec<i64> = s
        .split(',')
        .map(|p| {
            p.trim()
                .parse()
                .map_err(|_| Error::invalid(format!("bad weight coordinate {p:?}")))
        })
        .collect::<Result<_>>()?;
    if coords.len() != rank_h + abelian_rank {
        return Err(Error::invalid(format!(
            "expected {} weight coordinates, got {}",
            rank_h + abelian_rank,
            coords.len()
        )));
    }
    let (h, a) = coords.split_at(rank_h);
    Ok(Weight::new(h.to_vec(), a.to_vec()))
}
