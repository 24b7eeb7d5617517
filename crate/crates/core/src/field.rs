//! Arithmetic in F_p[X]/f(X) for monic irreducible f.

use std::fmt;

use rand::Rng;

use crate::arith::{checked_power, divisors, mobius, prime_divisors, Prime};
use crate::error::{Error, Result};
use crate::poly::{Degree, ElementIndex, Poly};

/// Bound on how many items an exhaustive scan may visit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Guard(pub u64);

impl Guard {
    pub const DEFAULT: Guard = Guard(1 << 20);
    /// Default for [`inv_oracle`].
    pub const ORACLE: Guard = Guard(1 << 16);

    pub fn check(self, size: u128) -> Result<()> {
        if size > self.0 as u128 {
            return Err(Error::GuardExceeded {
                size,
                guard: self.0,
            });
        }
        Ok(())
    }

    /// Checks `p^n` against the guard and returns it.
    pub fn field_size(self, p: Prime, n: usize) -> Result<u64> {
        let size = checked_power(p.get(), n).unwrap_or(u128::MAX);
        self.check(size)?;
        Ok(size as u64)
    }
}

impl Default for Guard {
    fn default() -> Self {
        Guard::DEFAULT
    }
}

/// A monic irreducible polynomial of degree at least 1.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IrreduciblePoly {
    poly: Poly,
    degree: usize,
}

impl IrreduciblePoly {
    /// Validates `poly`. On a reducible input the error names a factor when
    /// trial division is cheap enough to find one.
    pub fn new(poly: Poly) -> Result<Self> {
        check_basis_shape(&poly)?;
        if !rabin_test(&poly) {
            return Err(Error::NotIrreducible {
                poly: poly.to_string(),
                p: poly.prime().get(),
                factor: smallest_factor(&poly, Guard::ORACLE).map(|f| f.to_string()),
            });
        }
        let degree = poly.degree().finite().expect("checked non-constant");
        Ok(IrreduciblePoly { poly, degree })
    }

    pub fn parse(p: Prime, input: &str) -> Result<Self> {
        IrreduciblePoly::new(Poly::parse(p, input)?)
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn prime(&self) -> Prime {
        self.poly.prime()
    }

    pub fn index(&self) -> ElementIndex {
        self.poly.index()
    }

    /// `p^n`, the number of field elements.
    pub fn field_size(&self, guard: Guard) -> Result<u64> {
        guard.field_size(self.prime(), self.degree)
    }
}

impl fmt::Display for IrreduciblePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.poly.fmt(f)
    }
}

impl fmt::Debug for IrreduciblePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Irreducible[F_{}]({})", self.prime(), self.poly)
    }
}

fn check_basis_shape(f: &Poly) -> Result<()> {
    if f.is_constant() {
        return Err(Error::Constant(f.to_string()));
    }
    if !f.is_monic() {
        return Err(Error::NotMonic(f.to_string()));
    }
    Ok(())
}

fn check_reduced(a: &Poly, f: &IrreduciblePoly) -> Result<()> {
    if a.prime() != f.prime() {
        return Err(Error::CharacteristicMismatch {
            left: a.prime().get(),
            right: f.prime().get(),
        });
    }
    if let Degree::Finite(d) = a.degree() {
        if d >= f.degree() {
            return Err(Error::DegreeBound {
                degree: d,
                bound: f.degree(),
            });
        }
    }
    Ok(())
}

/// `(a * b) mod f` for reduced `a`, `b`.
pub fn mul_mod(a: &Poly, b: &Poly, f: &IrreduciblePoly) -> Result<Poly> {
    check_reduced(a, f)?;
    check_reduced(b, f)?;
    a.mul(b)?.rem(f.poly())
}

/// Multiplicative inverse modulo `f` via the extended Euclidean algorithm.
pub fn inv(a: &Poly, f: &IrreduciblePoly) -> Result<Poly> {
    check_reduced(a, f)?;
    if a.is_zero() {
        return Err(Error::ZeroHasNoInverse);
    }
    // Invariant: s_i * a ≡ r_i (mod f).
    let p = a.prime();
    let (mut r0, mut r1) = (f.poly().clone(), a.clone());
    let (mut s0, mut s1) = (Poly::zero(p), Poly::one(p));
    while !r1.is_zero() {
        let (q, r) = r0.div_rem(&r1)?;
        let s = s0.sub(&q.mul(&s1)?)?;
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    // r0 is the gcd, a nonzero constant when f is irreducible.
    if !r0.is_constant() {
        return Err(Error::NotInvertible(a.to_string()));
    }
    let c = p
        .inv_residue(r0.leading_coeff())
        .expect("gcd of a nonzero polynomial is nonzero");
    s0.scale(c).rem(f.poly())
}

/// Exhaustive-search inverse: scans `b = 1, 2, ...` in index order until
/// `a * b ≡ 1 (mod f)`.
///
/// Products are maintained incrementally: stepping `b` to `b + 1` in base p
/// adds `a * (1 + x + ... + x^j) mod f`, where `j` is the number of trailing
/// `p - 1` digits of `b`. Coefficients live in packed lanes of a `u64`.
pub fn inv_oracle(a: &Poly, f: &IrreduciblePoly, guard: Guard) -> Result<Poly> {
    check_reduced(a, f)?;
    if a.is_zero() {
        return Err(Error::ZeroHasNoInverse);
    }
    let p = f.prime();
    let n = f.degree();
    let q = f.field_size(guard)?;
    let lanes = Lanes::new(p.get(), n).ok_or(Error::GuardExceeded {
        size: q as u128,
        guard: guard.0,
    })?;

    // a * x^i mod f, by repeated multiplication by x.
    let m = p.get();
    let mut shifted: Vec<u32> = (0..n).map(|i| a.coeff(i)).collect();
    let mut prefix = Vec::with_capacity(n);
    let mut running = 0u64;
    for _ in 0..n {
        running = lanes.add(running, lanes.pack(&shifted));
        prefix.push(running);
        let top = shifted[n - 1];
        shifted.rotate_right(1);
        shifted[0] = 0;
        if top != 0 {
            for (i, s) in shifted.iter_mut().enumerate() {
                let sub = (top as u64 * f.poly().coeff(i) as u64 % m as u64) as u32;
                *s = (*s + m - sub) % m;
            }
        }
    }

    let one = lanes.pack(&[1]);
    let mut product = 0u64;
    let pm = m as u64;
    for b in 0..q - 1 {
        let mut j = 0;
        let mut v = b;
        while v % pm == pm - 1 {
            v /= pm;
            j += 1;
        }
        product = lanes.add(product, prefix[j]);
        if product == one {
            return Ok(Poly::from_index(p, ElementIndex(b + 1)));
        }
    }
    Err(Error::NotInvertible(a.to_string()))
}

/// Packed F_p vectors: each coefficient sits in a `width`-bit lane whose
/// top bit is free for the carry test.
#[derive(Debug, Clone, Copy)]
struct Lanes {
    width: u32,
    count: usize,
    p: u64,
    ones: u64,
    bias: u64,
}

impl Lanes {
    fn new(p: u32, count: usize) -> Option<Self> {
        // bits(p - 1) = ceil(log2 p), plus one spare bit
        let width = 33 - (p - 1).leading_zeros();
        if width as usize * count > 64 || count == 0 {
            return None;
        }
        let ones = (0..count).fold(0u64, |acc, i| acc | 1u64 << (i as u32 * width));
        let half = 1u64 << (width - 1);
        Some(Lanes {
            width,
            count,
            p: p as u64,
            ones,
            bias: (half - p as u64) * ones,
        })
    }

    fn pack(&self, coeffs: &[u32]) -> u64 {
        coeffs
            .iter()
            .take(self.count)
            .enumerate()
            .fold(0u64, |acc, (i, &c)| acc | (c as u64) << (i as u32 * self.width))
    }

    #[inline]
    fn add(&self, x: u64, y: u64) -> u64 {
        let s = x + y;
        let over = ((s + self.bias) >> (self.width - 1)) & self.ones;
        s - over * self.p
    }
}

/// `base^exp mod f` by repeated squaring; `base` is reduced first.
pub fn pow_mod(base: &Poly, exp: u128, f: &Poly) -> Result<Poly> {
    let mut acc = Poly::one(f.prime()).rem(f)?;
    let mut b = base.rem(f)?;
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.mul(&b)?.rem(f)?;
        }
        b = b.mul(&b)?.rem(f)?;
        e >>= 1;
    }
    Ok(acc)
}

/// Rabin's criterion for monic `f` of degree `n >= 1`.
fn rabin_test(f: &Poly) -> bool {
    let n = f.degree().finite().expect("non-constant");
    let p = f.prime();
    let x = Poly::x(p);
    // frob[k] = x^{p^k} mod f
    let mut frob = Vec::with_capacity(n + 1);
    let mut h = x.rem(f).expect("same field");
    frob.push(h.clone());
    for _ in 0..n {
        h = pow_mod(&h, p.get() as u128, f).expect("same field");
        frob.push(h.clone());
    }
    if frob[n] != frob[0] {
        return false;
    }
    prime_divisors(n as u64).into_iter().all(|l| {
        let k = n / l as usize;
        let diff = frob[k].sub(&x).expect("same field");
        let g = f.gcd(&diff).expect("same field");
        g.is_one()
    })
}

/// Irreducibility over F_p for a monic, non-constant polynomial.
pub fn is_irreducible(f: &Poly) -> Result<bool> {
    check_basis_shape(f)?;
    Ok(rabin_test(f))
}

/// Smallest-index monic factor of degree in `[1, deg f / 2]`, by trial
/// division. Returns `None` if `f` is irreducible or the search would pass
/// the guard.
pub fn smallest_factor(f: &Poly, guard: Guard) -> Option<Poly> {
    let n = f.degree().finite()?;
    let p = f.prime();
    let half = n / 2;
    let mut budget = 0u128;
    for d in 1..=half {
        let count = checked_power(p.get(), d)?;
        budget += count;
        if guard.check(budget).is_err() {
            return None;
        }
        let base = checked_power(p.get(), d)? as u64;
        for low in 0..base {
            let mut cand = Poly::from_index(p, ElementIndex(low)).coeffs().to_vec();
            cand.resize(d, 0);
            cand.push(1);
            let cand = Poly::new(p, cand);
            if f.rem(&cand).ok()?.is_zero() {
                return Some(cand);
            }
        }
    }
    None
}

/// All monic irreducible polynomials of degree `n`, ascending by index.
pub fn enumerate_irreducibles(p: Prime, n: usize, guard: Guard) -> Result<Vec<IrreduciblePoly>> {
    if n == 0 {
        return Err(Error::DegreeMismatch {
            expected: 1,
            found: 0,
        });
    }
    let count = guard.field_size(p, n)?;
    let lead = checked_power(p.get(), n).expect("guarded") as u64;
    let mut out = Vec::new();
    for low in 0..count {
        let f = Poly::from_index(p, ElementIndex(lead + low));
        if rabin_test(&f) {
            out.push(IrreduciblePoly {
                poly: f,
                degree: n,
            });
        }
    }
    Ok(out)
}

/// Number of monic irreducibles of degree `n`: `(1/n) sum_{d | n} mu(d) p^{n/d}`.
///
/// # Panics
/// If `n == 0` or `p^n` overflows `u128`.
pub fn count_irreducibles(p: Prime, n: usize) -> u128 {
    assert!(n >= 1, "degree must be at least 1");
    let mut sum: i128 = 0;
    for d in divisors(n as u64) {
        let term = checked_power(p.get(), n / d as usize)
            .and_then(|t| i128::try_from(t).ok())
            .expect("p^n overflows");
        sum += mobius(d) as i128 * term;
    }
    (sum / n as i128) as u128
}

/// Uniform monic irreducible of degree `n` by rejection sampling.
pub fn random_irreducible<R: Rng + ?Sized>(p: Prime, n: usize, rng: &mut R) -> IrreduciblePoly {
    assert!(n >= 1, "degree must be at least 1");
    loop {
        let mut coeffs: Vec<u32> = (0..n).map(|_| rng.gen_range(0..p.get())).collect();
        coeffs.push(1);
        let f = Poly::new(p, coeffs);
        if rabin_test(&f) {
            return IrreduciblePoly {
                poly: f,
                degree: n,
            };
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p2(s: &str) -> Poly {
        Poly::parse(Prime::TWO, s).unwrap()
    }

    fn irr2(s: &str) -> IrreduciblePoly {
        IrreduciblePoly::parse(Prime::TWO, s).unwrap()
    }

    #[test]
    fn mul_mod_examples() {
        let f1 = irr2("x^3+x+1");
        let f2 = irr2("x^3+x^2+1");
        assert!(mul_mod(&p2("x^2+x+1"), &p2("x^2"), &f1).unwrap().is_one());
        assert!(mul_mod(&p2("x^2+x+1"), &p2("x^2+1"), &f2).unwrap().is_one());
        let a = p2("x^2+x");
        assert_eq!(mul_mod(&a, &p2("1"), &f1).unwrap(), a);
    }

    #[test]
    fn mul_mod_degree_violation() {
        let f1 = irr2("x^3+x+1");
        let err = mul_mod(&p2("x^3"), &p2("1"), &f1).unwrap_err();
        assert_eq!(err, Error::DegreeBound { degree: 3, bound: 3 });
    }

    #[test]
    fn inverse_examples() {
        let f1 = irr2("x^3+x+1");
        let f2 = irr2("x^3+x^2+1");
        assert_eq!(inv(&p2("x^2+x+1"), &f1).unwrap(), p2("x^2"));
        assert_eq!(inv(&p2("x^2+x+1"), &f2).unwrap(), p2("x^2+1"));
        assert_eq!(inv(&p2("1"), &f1).unwrap(), p2("1"));
        assert_eq!(inv(&Poly::zero(Prime::TWO), &f1), Err(Error::ZeroHasNoInverse));
    }

    #[test]
    fn constants_invert_in_the_prime_field() {
        let p = Prime::new(7).unwrap();
        let fs = enumerate_irreducibles(p, 2, Guard::DEFAULT).unwrap();
        for c in 1..7u32 {
            let expect = Poly::constant(p, crate::arith::pow_mod(c as u64, 5, 7) as u32);
            for f in &fs {
                assert_eq!(inv(&Poly::constant(p, c), f).unwrap(), expect);
            }
        }
    }

    #[test]
    fn oracle_examples() {
        let f1 = irr2("x^3+x+1");
        assert_eq!(inv_oracle(&p2("x^2+x+1"), &f1, Guard::ORACLE).unwrap(), p2("x^2"));
        assert_eq!(inv_oracle(&p2("1"), &f1, Guard::ORACLE).unwrap(), p2("1"));
        for i in 1..8 {
            let a = Poly::from_index(Prime::TWO, ElementIndex(i));
            assert_eq!(inv_oracle(&a, &f1, Guard::ORACLE).unwrap(), inv(&a, &f1).unwrap());
        }
    }

    #[test]
    fn oracle_guard() {
        let f = enumerate_irreducibles(Prime::TWO, 17, Guard(1 << 17))
            .unwrap()
            .remove(0);
        let err = inv_oracle(&p2("x"), &f, Guard::ORACLE).unwrap_err();
        assert!(matches!(err, Error::GuardExceeded { .. }));
        assert!(inv_oracle(&p2("x"), &f, Guard(1 << 17)).is_ok());
    }

    #[test]
    fn lanes_add_mod_p() {
        for p in [2u32, 3, 5, 7, 11, 13] {
            let lanes = Lanes::new(p, 3).unwrap();
            for x in 0..p {
                for y in 0..p {
                    let s = lanes.add(lanes.pack(&[x, y, 0]), lanes.pack(&[y, x, p - 1]));
                    assert_eq!(s, lanes.pack(&[(x + y) % p, (x + y) % p, p - 1]));
                }
            }
        }
    }

    #[test]
    fn irreducibility_examples() {
        assert!(is_irreducible(&p2("x^3+x+1")).unwrap());
        assert!(!is_irreducible(&p2("x^2")).unwrap());
        assert!(is_irreducible(&p2("x^4+x^3+x^2+x+1")).unwrap());
        assert!(is_irreducible(&p2("x")).unwrap());
        assert!(matches!(is_irreducible(&p2("1")), Err(Error::Constant(_))));
        let three = Prime::new(3).unwrap();
        let non_monic = Poly::parse(three, "2*x^2+1").unwrap();
        assert!(matches!(is_irreducible(&non_monic), Err(Error::NotMonic(_))));
    }

    #[test]
    fn reducible_basis_names_factor() {
        let err = IrreduciblePoly::parse(Prime::TWO, "x^4").unwrap_err();
        assert_eq!(
            err,
            Error::NotIrreducible {
                poly: "x^4".into(),
                p: 2,
                factor: Some("x".into())
            }
        );
        assert!(err.to_string().contains("not irreducible"));
        assert_eq!(smallest_factor(&p2("x^4+x^2+1"), Guard::DEFAULT), Some(p2("x^2+x+1")));
        assert_eq!(smallest_factor(&p2("x^3+x+1"), Guard::DEFAULT), None);
    }

    #[test]
    fn enumeration_examples() {
        let got: Vec<String> = enumerate_irreducibles(Prime::TWO, 3, Guard::DEFAULT)
            .unwrap()
            .iter()
            .map(ToString::to_string)
            .collect();
        assert_eq!(got, ["x^3+x+1", "x^3+x^2+1"]);
        let got: Vec<String> = enumerate_irreducibles(Prime::TWO, 1, Guard::DEFAULT)
            .unwrap()
            .iter()
            .map(ToString::to_string)
            .collect();
        assert_eq!(got, ["x", "x+1"]);
        let got: Vec<String> = enumerate_irreducibles(Prime::TWO, 4, Guard::DEFAULT)
            .unwrap()
            .iter()
            .map(ToString::to_string)
            .collect();
        assert_eq!(got, ["x^4+x+1", "x^4+x^3+1", "x^4+x^3+x^2+x+1"]);
        assert!(matches!(
            enumerate_irreducibles(Prime::TWO, 21, Guard::DEFAULT),
            Err(Error::GuardExceeded { .. })
        ));
    }

    #[test]
    fn count_examples() {
        assert_eq!(count_irreducibles(Prime::TWO, 3), 2);
        assert_eq!(count_irreducibles(Prime::TWO, 1), 2);
        assert_eq!(count_irreducibles(Prime::TWO, 6), 9);
        assert_eq!(count_irreducibles(Prime::new(3).unwrap(), 2), 3);
    }

    #[test]
    fn random_irreducible_is_deterministic_and_uniform() {
        let allowed = [p2("x^3+x+1"), p2("x^3+x^2+1")];
        let mut a = ChaCha8Rng::seed_from_u64(9);
        let mut b = ChaCha8Rng::seed_from_u64(9);
        let mut hits = 0usize;
        let draws = 10_000;
        for _ in 0..draws {
            let x = random_irreducible(Prime::TWO, 3, &mut a);
            let y = random_irreducible(Prime::TWO, 3, &mut b);
            assert_eq!(x, y);
            assert!(allowed.contains(x.poly()));
            if x.poly() == &allowed[0] {
                hits += 1;
            }
        }
        let share = hits as f64 / draws as f64;
        assert!((share - 0.5).abs() <= 0.05, "share {share}");
    }
}
