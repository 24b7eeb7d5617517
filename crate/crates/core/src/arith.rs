//! Integer helpers: primality, factorization, the Möbius function.

use std::fmt;

use crate::error::{Error, Result};

/// A validated prime characteristic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(u32);

impl Prime {
    pub const TWO: Prime = Prime(2);

    pub fn new(value: u64) -> Result<Self> {
        match u32::try_from(value) {
            Ok(v) if is_prime(value) => Ok(Prime(v)),
            _ => Err(Error::NotPrime(value)),
        }
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    /// Inverse of a nonzero residue modulo p.
    pub fn inv_residue(self, c: u32) -> Option<u32> {
        let p = self.0 as u64;
        let c = c as u64 % p;
        if c == 0 {
            return None;
        }
        Some(pow_mod(c, p - 2, p) as u32)
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Deterministic trial division; fine for every characteristic we accept (u32).
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
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

/// Distinct prime divisors of `n`, ascending.
pub fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

pub fn mobius(n: u64) -> i8 {
    assert!(n >= 1, "mobius is defined for n >= 1");
    let mut n = n;
    let mut sign = 1i8;
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            n /= d;
            if n.is_multiple_of(d) {
                return 0;
            }
            sign = -sign;
        }
        d += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// `p^n` as u128, or `None` on overflow.
pub fn checked_power(p: u32, n: usize) -> Option<u128> {
    let n = u32::try_from(n).ok()?;
    (p as u128).checked_pow(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes() {
        let small: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(Prime::new(1).is_err());
        assert!(Prime::new(4).is_err());
        assert!(Prime::new(1 << 40).is_err());
        assert_eq!(Prime::new(65537).unwrap().get(), 65537);
    }

    #[test]
    fn mobius_values() {
        let got: Vec<i8> = (1..=12).map(mobius).collect();
        assert_eq!(got, vec![1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0]);
    }

    #[test]
    fn divisor_lists() {
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(prime_divisors(12), vec![2, 3]);
        assert_eq!(prime_divisors(1), Vec::<u64>::new());
        assert_eq!(prime_divisors(97), vec![97]);
    }

    #[test]
    fn residue_inverse() {
        let p = Prime::new(7).unwrap();
        for c in 1..7 {
            let i = p.inv_residue(c).unwrap();
            assert_eq!(c * i % 7, 1);
        }
        assert_eq!(p.inv_residue(0), None);
    }
}
