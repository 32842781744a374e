//! Frobenius traces of elliptic curves over Q, by three
//! cross-validating algorithms:
//!
//! * `ap_naive`: full character sum over x, O(p) — the oracle;
//! * `ap_bsgs`: Mestre-style group-order search with baby-step/giant-step
//!   inside the Hasse interval, O(p^(1/4+eps)) — the workhorse;
//! * `ap_cm`: Cornacchia decomposition `p = a^2 + b^2` for the curve
//!   y^2 = x^3 - x, O(log p) — the fast path that makes x = 1e8 runs
//!   cheap.
//!
//! `ap_bsgs` uses random points but is deterministic: the generator is
//! seeded from the caller seed and the prime, independent of thread
//! schedule.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::curve::{self, CurveSpec};
use crate::error::{Error, Result};
use crate::modarith::{add_mod, inv_mod, isqrt, legendre, mul_mod, pow_mod, sqrt_mod, sub_mod};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Naive,
    Bsgs,
    Cm,
    Auto,
}

impl Strategy {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "naive" => Ok(Strategy::Naive),
            "bsgs" => Ok(Strategy::Bsgs),
            "cm" => Ok(Strategy::Cm),
            "auto" => Ok(Strategy::Auto),
            other => Err(Error::NotFound(format!("strategy {other:?}"))),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Strategy::Naive => "naive",
            Strategy::Bsgs => "bsgs",
            Strategy::Cm => "cm",
            Strategy::Auto => "auto",
        }
    }
}

/// Trace by exhaustive point count: `a_p = -sum_x chi(f(x))` after
/// completing the square (direct enumeration over F_2).
pub fn ap_naive(curve: &CurveSpec, p: u64) -> Result<i64> {
    if !curve.is_good(p) {
        return Err(Error::BadReduction(p));
    }
    if p == 2 {
        let n = curve::count_points_f2(&curve.a_invariants()) as i64;
        return Ok(2 + 1 - n);
    }
    let a = -curve::character_sum_mod(curve, p);
    debug_assert!(a * a <= 4 * p as i64);
    Ok(a)
}

/// Trace via the group order found by baby-step/giant-step inside the
/// Hasse interval, disambiguating with quadratic twists until the order
/// is unique (Mestre). Delegates to [`ap_naive`] for `p <= 457`, below
/// which uniqueness is not guaranteed.
pub fn ap_bsgs(curve: &CurveSpec, p: u64, seed: u64) -> Result<i64> {
    if !curve.is_good(p) {
        return Err(Error::BadReduction(p));
    }
    if p <= 457 {
        return ap_naive(curve, p);
    }
    if p >= 1 << 62 {
        return Err(Error::Unsupported("primes beyond 2^62 are not supported".into()));
    }
    let (a, b) = curve.short_weierstrass_mod(p);
    // smallest quadratic non-residue, for the twist
    let d = (2..).find(|&d| legendre(d, p) == -1).unwrap();
    let d2 = mul_mod(d, d, p);
    let twist = (mul_mod(a, d2, p), mul_mod(b, mul_mod(d2, d, p), p));

    let sqrt4p = isqrt(4 * p);
    let lo = p + 1 - sqrt4p;
    let hi = p + 1 + sqrt4p;

    let mut rng = ChaCha8Rng::seed_from_u64(mix(seed, p));
    let mut candidates: Option<Vec<u64>> = None;

    for attempt in 0..60u32 {
        let on_twist = attempt % 2 == 1;
        let (ca, cb) = if on_twist { twist } else { (a, b) };
        let Some(point) = random_point(&mut rng, ca, cb, p) else {
            continue;
        };
        let ann = annihilating_multiples(point, lo, hi, ca, p);
        let mapped: Vec<u64> = if on_twist {
            // #E + #E_twist = 2p + 2
            ann.iter().rev().map(|m| 2 * p + 2 - m).collect()
        } else {
            ann
        };
        let merged = match &candidates {
            None => mapped,
            Some(prev) => prev.iter().copied().filter(|m| mapped.contains(m)).collect(),
        };
        match merged.len() {
            0 => {
                return Err(Error::NumericFailure(format!(
                    "group-order candidates became inconsistent at p = {p}"
                )))
            }
            1 => {
                let n = merged[0];
                let ap = (p as i64 + 1) - n as i64;
                debug_assert!(ap * ap <= 4 * p as i64);
                return Ok(ap);
            }
            _ => candidates = Some(merged),
        }
    }
    Err(Error::NumericFailure(format!(
        "group order at p = {p} not unique after the retry budget"
    )))
}

/// CM fast path for `y^2 = x^3 - x` (discriminant -4): zero at inert
/// primes, otherwise `2a` from the normalized decomposition
/// `p = a^2 + b^2` with `a` odd and `a + b = 1 mod 4`.
pub fn ap_cm(curve: &CurveSpec, p: u64) -> Result<i64> {
    if curve.cm_discriminant() != Some(-4) {
        return Err(Error::Unsupported(
            "CM fast path requires a curve with discriminant -4".into(),
        ));
    }
    if p == 2 || !curve.is_good(p) {
        return Err(Error::BadReduction(p));
    }
    if p % 4 == 3 {
        return Ok(0);
    }
    let (a, b) = cornacchia_sum_of_squares(p)?;
    // a odd, b even; b's residue mod 4 does not depend on its sign
    let b_mod = b % 4;
    let a = a as i64;
    let signed = if (a + b_mod as i64).rem_euclid(4) == 1 { a } else { -a };
    Ok(2 * signed)
}

/// Pick the trace algorithm: CM when available, naive for small primes,
/// baby-step/giant-step above.
pub fn ap_with_strategy(curve: &CurveSpec, p: u64, strategy: Strategy, seed: u64) -> Result<i64> {
    match strategy {
        Strategy::Naive => ap_naive(curve, p),
        Strategy::Bsgs => ap_bsgs(curve, p, seed),
        Strategy::Cm => ap_cm(curve, p),
        Strategy::Auto => {
            if curve.cm_discriminant().is_some() {
                ap_cm(curve, p)
            } else if p < 10_000 {
                ap_naive(curve, p)
            } else {
                ap_bsgs(curve, p, seed)
            }
        }
    }
}

/// Write `p = a^2 + b^2` for a prime `p = 1 mod 4`, with `a` odd and
/// both parts positive.
fn cornacchia_sum_of_squares(p: u64) -> Result<(u64, u64)> {
    // square root of -1: t = n^((p-1)/4) for a non-residue n
    let n = (2..).find(|&n| legendre(n, p) == -1).unwrap();
    let t = pow_mod(n, (p - 1) / 4, p);
    debug_assert_eq!(mul_mod(t, t, p), p - 1);
    let bound = isqrt(p);
    let (mut r0, mut r1) = (p, t.min(p - t));
    while r1 > bound {
        (r0, r1) = (r1, r0 % r1);
    }
    let a = r1;
    let b2 = p - a * a;
    let b = isqrt(b2);
    if b * b != b2 {
        return Err(Error::NumericFailure(format!(
            "Cornacchia descent failed at p = {p}"
        )));
    }
    let (a, b) = if a % 2 == 1 { (a, b) } else { (b, a) };
    Ok((a, b))
}

fn mix(seed: u64, p: u64) -> u64 {
    // splitmix64 step over seed xor prime
    let mut z = seed ^ p.wrapping_mul(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

type Point = Option<(u64, u64)>;

fn add(a_coef: u64, p: u64, lhs: Point, rhs: Point) -> Point {
    let Some((x1, y1)) = lhs else {
        return rhs;
    };
    let Some((x2, y2)) = rhs else {
        return lhs;
    };
    let lambda = if x1 == x2 {
        if add_mod(y1, y2, p) == 0 {
            return None;
        }
        // doubling: (3 x^2 + a) / (2 y)
        let num = add_mod(mul_mod(3 % p, mul_mod(x1, x1, p), p), a_coef, p);
        let den = mul_mod(2 % p, y1, p);
        mul_mod(num, inv_mod(den, p).expect("prime modulus"), p)
    } else {
        let num = sub_mod(y2, y1, p);
        let den = sub_mod(x2, x1, p);
        mul_mod(num, inv_mod(den, p).expect("prime modulus"), p)
    };
    let x3 = sub_mod(sub_mod(mul_mod(lambda, lambda, p), x1, p), x2, p);
    let y3 = sub_mod(mul_mod(lambda, sub_mod(x1, x3, p), p), y1, p);
    Some((x3, y3))
}

fn scalar_mul(a_coef: u64, p: u64, mut k: u64, pt: Point) -> Point {
    let mut acc: Point = None;
    let mut base = pt;
    while k > 0 {
        if k & 1 == 1 {
            acc = add(a_coef, p, acc, base);
        }
        base = add(a_coef, p, base, base);
        k >>= 1;
    }
    acc
}

/// Random affine point on `y^2 = x^3 + a x + b`, canonical smaller root.
fn random_point(rng: &mut ChaCha8Rng, a: u64, b: u64, p: u64) -> Option<(u64, u64)> {
    // about half of all x work; the budget failing is astronomically rare
    for _ in 0..96 {
        let x = rng.gen_range(0..p);
        let rhs = add_mod(mul_mod(x, mul_mod(x, x, p), p), add_mod(mul_mod(a, x, p), b, p), p);
        if rhs == 0 {
            return Some((x, 0));
        }
        if let Some(y) = sqrt_mod(rhs, p) {
            return Some((x, y));
        }
    }
    None
}

/// All `m` in `[lo, hi]` with `m P = O`, by baby-step/giant-step.
fn annihilating_multiples(pt: (u64, u64), lo: u64, hi: u64, a: u64, p: u64) -> Vec<u64> {
    let point = Some(pt);
    let width = hi - lo + 1;
    let s = isqrt(width) + 1;

    // baby table: x-coordinate -> (j, y) for j P, 1 <= j < s
    let mut table: HashMap<u64, Vec<(u64, u64)>> = HashMap::with_capacity(s as usize);
    let mut cur = point;
    for j in 1..s {
        match cur {
            None => {
                // ord(P) = j: every multiple of j in range annihilates
                let first = lo.div_ceil(j) * j;
                return (0..).map(|i| first + i * j).take_while(|m| *m <= hi).collect();
            }
            Some((x, y)) => table.entry(x).or_default().push((j, y)),
        }
        cur = add(a, p, cur, point);
    }

    let giant = scalar_mul(a, p, s, point);
    let mut out = Vec::new();
    let mut r = scalar_mul(a, p, lo, point);
    let steps = width / s + 1;
    for i in 0..=steps {
        let base = lo + i * s;
        match r {
            None => {
                if base <= hi {
                    out.push(base);
                }
            }
            Some((x, y)) => {
                if let Some(entries) = table.get(&x) {
                    for &(j, yj) in entries {
                        // j P == -R: m = base + j
                        if yj == if y == 0 { 0 } else { p - y } {
                            let m = base + j;
                            if m >= lo && m <= hi {
                                out.push(m);
                            }
                        }
                        // j P == R: m = base - j
                        if yj == y {
                            if let Some(m) = base.checked_sub(j) {
                                if m >= lo && m <= hi {
                                    out.push(m);
                                }
                            }
                        }
                    }
                }
            }
        }
        r = add(a, p, r, giant);
    }
    out.sort_unstable();
    out.dedup();
    out
}
