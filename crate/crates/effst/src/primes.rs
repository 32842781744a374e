//! Prime generation: a segmented sieve of Eratosthenes, exact for bounds
//! up to 1e9.

use crate::error::{Error, Result};

const SEGMENT: usize = 1 << 20;

/// All primes `<= x` in increasing order.
pub fn sieve_primes(x: u64) -> Result<Vec<u64>> {
    if x > 1_000_000_000 {
        return Err(Error::Unsupported(format!(
            "prime sieve bound {x} exceeds 1e9"
        )));
    }
    if x < 2 {
        return Ok(Vec::new());
    }
    let root = crate::modarith::isqrt(x);
    let base = small_sieve(root.max(2));
    let mut primes = Vec::with_capacity(estimate_pi(x));
    primes.extend(base.iter().copied().filter(|p| *p <= x));

    let mut low = root + 1;
    let mut mark = vec![false; SEGMENT];
    while low <= x {
        let high = (low + SEGMENT as u64 - 1).min(x);
        let len = (high - low + 1) as usize;
        mark[..len].fill(false);
        for &p in &base {
            let mut start = low.div_ceil(p) * p;
            if start < p * p {
                start = p * p;
            }
            let mut j = start;
            while j <= high {
                mark[(j - low) as usize] = true;
                j += p;
            }
        }
        for (off, &composite) in mark[..len].iter().enumerate() {
            if !composite {
                primes.push(low + off as u64);
            }
        }
        low = high + 1;
    }
    Ok(primes)
}

fn small_sieve(x: u64) -> Vec<u64> {
    let n = x as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

fn estimate_pi(x: u64) -> usize {
    if x < 17 {
        return 8;
    }
    let xf = x as f64;
    (xf / (xf.ln() - 1.1)) as usize + 16
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_bounds() {
        assert_eq!(sieve_primes(10).unwrap(), vec![2, 3, 5, 7]);
        assert_eq!(sieve_primes(2).unwrap(), vec![2]);
        assert!(sieve_primes(1).unwrap().is_empty());
    }

    #[test]
    fn segmented_matches_simple() {
        let seg = sieve_primes(30_000).unwrap();
        let simple = small_sieve(30_000);
        assert_eq!(seg, simple);
    }

    #[test]
    fn prime_counts() {
        assert_eq!(sieve_primes(100).unwrap().len(), 25);
        assert_eq!(sieve_primes(1_000_000).unwrap().len(), 78_498);
    }
}
