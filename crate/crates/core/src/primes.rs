//! Small prime helpers for base validation.

/// Deterministic trial division; bases are small.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// The first `count` primes in increasing order.
pub fn first_primes(count: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(count);
    let mut candidate = 2u32;
    while out.len() < count {
        if is_prime(u64::from(candidate)) {
            out.push(candidate);
        }
        candidate += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_primes() {
        let primes: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }

    #[test]
    fn first_primes_prefix() {
        assert_eq!(first_primes(5), vec![2, 3, 5, 7, 11]);
        assert!(first_primes(0).is_empty());
    }
}
