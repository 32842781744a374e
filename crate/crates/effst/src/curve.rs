//! Long-Weierstrass elliptic curve models over Q.
//!
//! The bad-prime set is the support of the model discriminant (a user
//! override may enlarge it); minimal models and true conductors are out
//! of scope, and over-excluding finitely many primes does not affect any
//! asymptotic comparison downstream.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::modarith::is_prime_u64;

/// Coefficient cap keeping all invariant arithmetic inside i128.
const COEFF_BOUND: i64 = 10_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveSpec {
    a: [i64; 5],
    label: String,
    bad_norms: BTreeSet<u64>,
    cm_discriminant: Option<i64>,
}

impl CurveSpec {
    /// Build a curve from `[a1, a2, a3, a4, a6]`, computing the bad set
    /// from the model discriminant.
    pub fn new(a: [i64; 5], label: impl Into<String>) -> Result<Self> {
        Self::with_options(a, label, None, None)
    }

    pub fn with_options(
        a: [i64; 5],
        label: impl Into<String>,
        bad_override: Option<BTreeSet<u64>>,
        cm_discriminant: Option<i64>,
    ) -> Result<Self> {
        if a.iter().any(|c| c.abs() > COEFF_BOUND) {
            return Err(Error::invalid(format!(
                "coefficients must lie in [-{COEFF_BOUND}, {COEFF_BOUND}]"
            )));
        }
        let disc = discriminant_from(&a);
        if disc == 0 {
            return Err(Error::invalid("singular model: discriminant is zero"));
        }
        let mut bad = match (factor_support(disc.unsigned_abs()), &bad_override) {
            (Ok(support), _) => support,
            (Err(_), Some(_)) => partial_support(disc.unsigned_abs()),
            (Err(e), None) => return Err(e),
        };
        if let Some(extra) = bad_override {
            bad.extend(extra);
        }
        if let Some(d) = cm_discriminant {
            if d != -4 {
                return Err(Error::Unsupported(format!(
                    "CM fast path only supports discriminant -4, got {d}"
                )));
            }
        }
        Ok(CurveSpec { a, label: label.into(), bad_norms: bad, cm_discriminant })
    }

    pub fn a_invariants(&self) -> [i64; 5] {
        self.a
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn bad_norms(&self) -> &BTreeSet<u64> {
        &self.bad_norms
    }

    pub fn cm_discriminant(&self) -> Option<i64> {
        self.cm_discriminant
    }

    pub fn discriminant(&self) -> i128 {
        discriminant_from(&self.a)
    }

    pub fn is_good(&self, p: u64) -> bool {
        !self.bad_norms.contains(&p)
    }

    /// Default conductor stand-in: the product of the bad norms. The
    /// true conductor divides a power of this; callers may override.
    pub fn conductor_bound(&self) -> u64 {
        self.bad_norms.iter().product::<u64>().max(1)
    }

    fn b_invariants(&self) -> (i128, i128, i128, i128) {
        let [a1, a2, a3, a4, a6] = self.a.map(i128::from);
        let b2 = a1 * a1 + 4 * a2;
        let b4 = 2 * a4 + a1 * a3;
        let b6 = a3 * a3 + 4 * a6;
        let b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
        (b2, b4, b6, b8)
    }

    /// Coefficients of `f(x) = 4x^3 + b2 x^2 + 2 b4 x + b6` reduced mod
    /// an odd prime; the affine point count is
    /// `sum_x (1 + chi(f(x)))` after completing the square.
    pub(crate) fn quartic_mod(&self, p: u64) -> [u64; 4] {
        let (b2, b4, b6, _) = self.b_invariants();
        let m = p as i128;
        [
            4 % p,
            (b2.rem_euclid(m)) as u64,
            ((2 * b4).rem_euclid(m)) as u64,
            (b6.rem_euclid(m)) as u64,
        ]
    }

    /// Short Weierstrass form `y^2 = x^3 + A x + B` isomorphic to the
    /// curve mod a good prime `p > 3`.
    pub(crate) fn short_weierstrass_mod(&self, p: u64) -> (u64, u64) {
        let (b2, b4, b6, _) = self.b_invariants();
        let c4 = b2 * b2 - 24 * b4;
        let c6 = -b2 * b2 * b2 + 36 * b2 * b4 - 216 * b6;
        let m = p as i128;
        let a = (-27 * c4).rem_euclid(m) as u64;
        let b = (-54 * c6).rem_euclid(m) as u64;
        (a, b)
    }
}

impl std::fmt::Display for CurveSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let [a1, a2, a3, a4, a6] = self.a;
        if self.label.is_empty() {
            write!(f, "[{a1},{a2},{a3},{a4},{a6}]")
        } else {
            write!(f, "{} = [{a1},{a2},{a3},{a4},{a6}]", self.label)
        }
    }
}

fn discriminant_from(a: &[i64; 5]) -> i128 {
    let [a1, a2, a3, a4, a6] = a.map(i128::from);
    let b2 = a1 * a1 + 4 * a2;
    let b4 = 2 * a4 + a1 * a3;
    let b6 = a3 * a3 + 4 * a6;
    let b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
    -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6
}

/// Prime support of `n` by trial division, finishing with a primality
/// check on the cofactor. Errors when the cofactor cannot be resolved.
fn factor_support(mut n: u128) -> Result<BTreeSet<u64>> {
    let mut out = BTreeSet::new();
    for d in std::iter::once(2u64).chain((3..=1_000_003).step_by(2)) {
        let d128 = d as u128;
        if d128 * d128 > n {
            break;
        }
        if n % d128 == 0 {
            out.insert(d);
            while n % d128 == 0 {
                n /= d128;
            }
        }
    }
    if n > 1 {
        if n <= u64::MAX as u128 && is_prime_u64(n as u64) {
            out.insert(n as u64);
        } else {
            return Err(Error::Unsupported(format!(
                "cannot factor the discriminant cofactor {n}; supply bad_norms explicitly"
            )));
        }
    }
    Ok(out)
}

/// Best-effort support when a user override will complete the set.
fn partial_support(mut n: u128) -> BTreeSet<u64> {
    let mut out = BTreeSet::new();
    for d in std::iter::once(2u64).chain((3..=1_000_003).step_by(2)) {
        let d128 = d as u128;
        if d128 * d128 > n {
            break;
        }
        if n % d128 == 0 {
            out.insert(d);
            while n % d128 == 0 {
                n /= d128;
            }
        }
    }
    if n > 1 && n <= u64::MAX as u128 && is_prime_u64(n as u64) {
        out.insert(n as u64);
    }
    out
}

/// Legendre-symbol table for a full residue system mod an odd prime:
/// `table[x] = chi(x)` as -1, 0, 1 packed into i8.
pub(crate) fn quadratic_character_table(p: u64) -> Vec<i8> {
    let n = p as usize;
    let mut table = vec![-1i8; n];
    table[0] = 0;
    let mut x = 1u64;
    // mark the quadratic residues by direct squaring
    for i in 1..=(p - 1) / 2 {
        x = (x + 2 * i - 1) % p; // x = i^2 mod p incrementally
        table[x as usize] = 1;
    }
    table
}

/// Evaluate the quartic `c[0] x^3 + c[1] x^2 + c[2] x + c[3]` mod p.
#[inline]
pub(crate) fn eval_cubic(c: &[u64; 4], x: u64, p: u64) -> u64 {
    use crate::modarith::mul_mod;
    let mut acc = c[0];
    acc = mul_mod(acc, x, p);
    acc = (acc + c[1]) % p;
    acc = mul_mod(acc, x, p);
    acc = (acc + c[2]) % p;
    acc = mul_mod(acc, x, p);
    (acc + c[3]) % p
}

/// Count solutions of the long Weierstrass equation over F_2 directly.
pub(crate) fn count_points_f2(a: &[i64; 5]) -> u64 {
    let red = |v: i64| v.rem_euclid(2) as u64;
    let [a1, a2, a3, a4, a6] = a.map(red);
    let mut affine = 0;
    for x in 0..2u64 {
        for y in 0..2u64 {
            let lhs = (y * y + a1 * x * y + a3 * y) % 2;
            let rhs = (x * x * x + a2 * x * x + a4 * x + a6) % 2;
            if lhs == rhs {
                affine += 1;
            }
        }
    }
    affine + 1
}

/// `chi(f(x))` summed over x mod an odd prime gives `-a_p`.
pub(crate) fn character_sum_mod(curve: &CurveSpec, p: u64) -> i64 {
    let table = quadratic_character_table(p);
    let c = curve.quartic_mod(p);
    let mut acc: i64 = 0;
    for x in 0..p {
        acc += i64::from(table[eval_cubic(&c, x, p) as usize]);
    }
    acc
}
