//! Independent GF(2)[x] arithmetic on bit masks, used as test oracles.
#![allow(dead_code)]

/// Degree of a nonzero bit polynomial.
pub fn deg(a: u64) -> u32 {
    63 - a.leading_zeros()
}

/// Carry-less product.
pub fn clmul(a: u64, b: u64) -> u64 {
    let mut out = 0;
    for i in 0..64 {
        if b >> i & 1 == 1 {
            out ^= a << i;
        }
    }
    out
}

/// Remainder of `a` modulo nonzero `f`.
pub fn rem(mut a: u64, f: u64) -> u64 {
    let df = deg(f);
    while a != 0 && deg(a) >= df {
        a ^= f << (deg(a) - df);
    }
    a
}

pub fn mulmod(a: u64, b: u64, f: u64) -> u64 {
    rem(clmul(a, b), f)
}

/// Inverse by trying every candidate.
pub fn brute_inverse(a: u64, f: u64) -> Option<u64> {
    (1..1u64 << deg(f)).find(|&b| mulmod(a, b, f) == 1)
}

/// Irreducibility by trial division through every divisor of degree up to half.
pub fn trial_irreducible(f: u64) -> bool {
    let n = deg(f);
    if n == 0 {
        return false;
    }
    (2..1u64 << (n / 2 + 1)).all(|g| rem(f, g) != 0)
}

/// Monic irreducibles of degree `n` in ascending index order.
pub fn irreducibles(n: u32) -> Vec<u64> {
    (1u64 << n..1u64 << (n + 1)).filter(|&f| trial_irreducible(f)).collect()
}
