//! Fixed-precision float formatting for machine-readable output.
//!
//! All floating-point values leaving the crate (CSV cells, stdout lines,
//! JSON report fields) are rendered with 12 significant digits so that
//! regression diffs are meaningful and runs are byte-reproducible.

/// Number of significant digits in rendered output.
pub const SIG_DIGITS: usize = 12;

/// Format `x` with [`SIG_DIGITS`] significant digits.
///
/// Values with decimal exponent in [-5, 12) are rendered positionally
/// ("0.195501109478"), everything else in scientific notation.
pub fn sig(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..12).contains(&exp) {
        let decimals = (SIG_DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        trim_zeros_exp(format!("{:.*e}", SIG_DIGITS - 1, x))
    }
}

/// Round `x` to [`SIG_DIGITS`] significant digits, returning an f64.
/// Used before JSON serialization so both output formats agree.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{:.*e}", SIG_DIGITS - 1, x).parse().unwrap_or(x)
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    let t = s.trim_end_matches('0').trim_end_matches('.');
    t.to_string()
}

fn trim_zeros_exp(s: String) -> String {
    match s.split_once('e') {
        Some((mant, exp)) => format!("{}e{}", trim_zeros(mant.to_string()), exp),
        None => s,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positional_range() {
        assert_eq!(sig(0.1955011094778853), "0.195501109478");
        assert_eq!(sig(78626.5039956323), "78626.5039956");
        assert_eq!(sig(-2.0), "-2");
        assert_eq!(sig(0.0), "0");
    }

    #[test]
    fn scientific_range() {
        assert_eq!(sig(1.4905e15), "1.4905e15");
        assert_eq!(sig(3.2e-9), "3.2e-9");
    }

    #[test]
    fn round_trip_rounding() {
        let x = 0.123456789012345;
        assert_eq!(round_sig(x), 0.123456789012);
    }
}
