//! Dense polynomials over F_p with little-endian coefficients.
//!
//! A `Poly` is always kept in canonical form: every coefficient is reduced
//! into `[0, p)` and there are no trailing zeros. The zero polynomial is the
//! empty coefficient vector and reports [`Degree::NegInfinity`].

use std::cmp::Ordering;
use std::fmt;

use crate::arith::Prime;
use crate::error::{Error, Result};

/// Degree of a polynomial, with a dedicated sentinel for zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    NegInfinity,
    Finite(usize),
}

impl Degree {
    pub fn finite(self) -> Option<usize> {
        match self {
            Degree::NegInfinity => None,
            Degree::Finite(d) => Some(d),
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInfinity => f.write_str("-inf"),
            Degree::Finite(d) => d.fmt(f),
        }
    }
}

/// Canonical encoding of a polynomial as the integer `sum coeffs[i] * p^i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ElementIndex(pub u64);

impl fmt::Display for ElementIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    p: Prime,
    coeffs: Vec<u32>,
}

impl Poly {
    /// Builds a polynomial from little-endian coefficients, reducing each mod p.
    pub fn new(p: Prime, coeffs: impl Into<Vec<u32>>) -> Self {
        let mut coeffs = coeffs.into();
        let m = p.get();
        for c in coeffs.iter_mut() {
            *c %= m;
        }
        let mut poly = Poly { p, coeffs };
        poly.trim();
        poly
    }

    pub fn zero(p: Prime) -> Self {
        Poly { p, coeffs: Vec::new() }
    }

    pub fn one(p: Prime) -> Self {
        Poly::constant(p, 1)
    }

    pub fn constant(p: Prime, c: u32) -> Self {
        Poly::new(p, vec![c])
    }

    /// `c * x^k`.
    pub fn monomial(p: Prime, c: u32, k: usize) -> Self {
        let mut coeffs = vec![0; k + 1];
        coeffs[k] = c;
        Poly::new(p, coeffs)
    }

    pub fn x(p: Prime) -> Self {
        Poly::monomial(p, 1, 1)
    }

    /// Decodes a base-p digit index.
    pub fn from_index(p: Prime, index: ElementIndex) -> Self {
        let m = p.get() as u64;
        let mut v = index.0;
        let mut coeffs = Vec::new();
        while v > 0 {
            coeffs.push((v % m) as u32);
            v /= m;
        }
        Poly { p, coeffs }
    }

    pub fn try_index(&self) -> Option<ElementIndex> {
        let m = self.p.get() as u64;
        let mut acc: u64 = 0;
        for &c in self.coeffs.iter().rev() {
            acc = acc.checked_mul(m)?.checked_add(c as u64)?;
        }
        Some(ElementIndex(acc))
    }

    /// # Panics
    /// If the encoding does not fit in 64 bits.
    pub fn index(&self) -> ElementIndex {
        self.try_index()
            .unwrap_or_else(|| panic!("index of {self} overflows u64"))
    }

    #[inline]
    pub fn prime(&self) -> Prime {
        self.p
    }

    #[inline]
    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    /// Coefficient of `x^i` (zero past the end).
    pub fn coeff(&self, i: usize) -> u32 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> Degree {
        match self.coeffs.len() {
            0 => Degree::NegInfinity,
            len => Degree::Finite(len - 1),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    /// True for the zero polynomial and the nonzero constants.
    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&1)
    }

    pub fn leading_coeff(&self) -> u32 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    fn check_same_field(&self, other: &Poly) -> Result<()> {
        if self.p != other.p {
            return Err(Error::CharacteristicMismatch {
                left: self.p.get(),
                right: other.p.get(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Poly) -> Result<Poly> {
        self.check_same_field(other)?;
        let m = self.p.get();
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs: Vec<u32> = (0..len)
            .map(|i| {
                let s = self.coeff(i) + other.coeff(i);
                if s >= m {
                    s - m
                } else {
                    s
                }
            })
            .collect();
        Ok(Poly::new(self.p, coeffs))
    }

    pub fn neg(&self) -> Poly {
        let m = self.p.get();
        let coeffs: Vec<u32> = self.coeffs.iter().map(|&c| (m - c) % m).collect();
        Poly::new(self.p, coeffs)
    }

    pub fn sub(&self, other: &Poly) -> Result<Poly> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: u32) -> Poly {
        let m = self.p.get() as u64;
        let c = c as u64 % m;
        let coeffs: Vec<u32> = self
            .coeffs
            .iter()
            .map(|&a| (a as u64 * c % m) as u32)
            .collect();
        Poly::new(self.p, coeffs)
    }

    /// Schoolbook product in F_p[X], no reduction.
    pub fn mul(&self, other: &Poly) -> Result<Poly> {
        self.check_same_field(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Poly::zero(self.p));
        }
        let m = self.p.get() as u64;
        let mut acc = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                acc[i + j] = (acc[i + j] + a as u64 * b as u64) % m;
            }
        }
        Ok(Poly::new(
            self.p,
            acc.into_iter().map(|c| c as u32).collect::<Vec<_>>(),
        ))
    }

    /// Euclidean division: returns `(q, r)` with `self = q * divisor + r`
    /// and `deg r < deg divisor`.
    ///
    /// # Panics
    /// If `divisor` is zero.
    pub fn div_rem(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        self.check_same_field(divisor)?;
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let p = self.p;
        let m = p.get() as u64;
        let dlen = divisor.coeffs.len();
        if self.coeffs.len() < dlen {
            return Ok((Poly::zero(p), self.clone()));
        }
        let lead_inv = p
            .inv_residue(divisor.leading_coeff())
            .expect("leading coefficient is nonzero") as u64;
        let mut rem: Vec<u64> = self.coeffs.iter().map(|&c| c as u64).collect();
        let mut quot = vec![0u32; rem.len() - dlen + 1];
        for shift in (0..quot.len()).rev() {
            let top = rem[shift + dlen - 1];
            if top == 0 {
                continue;
            }
            let q = top * lead_inv % m;
            quot[shift] = q as u32;
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                let sub = q * d as u64 % m;
                rem[shift + j] = (rem[shift + j] + m - sub) % m;
            }
        }
        rem.truncate(dlen - 1);
        Ok((
            Poly::new(p, quot),
            Poly::new(p, rem.into_iter().map(|c| c as u32).collect::<Vec<_>>()),
        ))
    }

    pub fn rem(&self, divisor: &Poly) -> Result<Poly> {
        Ok(self.div_rem(divisor)?.1)
    }

    /// Monic greatest common divisor (zero if both inputs are zero).
    pub fn gcd(&self, other: &Poly) -> Result<Poly> {
        self.check_same_field(other)?;
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.make_monic())
    }

    /// Divides by the leading coefficient; zero stays zero.
    pub fn make_monic(&self) -> Poly {
        match self.p.inv_residue(self.leading_coeff()) {
            Some(inv) => self.scale(inv),
            None => self.clone(),
        }
    }

    /// Parses a literal in symbolic (`x^3+x+1`, `2*x^2+1`) or indexed (`#11`) form.
    pub fn parse(p: Prime, input: &str) -> Result<Poly> {
        let fail = |reason: &str| Error::Parse {
            input: input.to_string(),
            reason: reason.to_string(),
        };
        let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(fail("empty literal"));
        }
        if let Some(digits) = s.strip_prefix('#') {
            let v: u64 = digits
                .parse()
                .map_err(|_| fail("expected a decimal index after '#'"))?;
            return Ok(Poly::from_index(p, ElementIndex(v)));
        }
        let m = p.get() as u64;
        let mut coeffs: Vec<u64> = Vec::new();
        for term in s.split('+') {
            if term.is_empty() {
                return Err(fail("empty term"));
            }
            let (c, k) = parse_term(term).map_err(|r| fail(&r))?;
            if c >= m {
                return Err(fail(&format!("coefficient {c} is not below p = {m}")));
            }
            if k > 1 << 16 {
                return Err(fail("exponent too large"));
            }
            if coeffs.len() <= k {
                coeffs.resize(k + 1, 0);
            }
            coeffs[k] = (coeffs[k] + c) % m;
        }
        Ok(Poly::new(
            p,
            coeffs.into_iter().map(|c| c as u32).collect::<Vec<_>>(),
        ))
    }

    /// Digit string `b_{n-1} ... b_0`, as in figure labels ("111" = x^2+x+1).
    pub fn digit_string(&self, n: usize) -> String {
        let wide = self.p.get() > 10;
        let digits: Vec<String> = (0..n.max(self.coeffs.len()))
            .rev()
            .map(|i| self.coeff(i).to_string())
            .collect();
        if wide {
            digits.join(".")
        } else {
            digits.concat()
        }
    }
}

fn parse_term(term: &str) -> std::result::Result<(u64, usize), String> {
    let (coeff, mono) = match term.split_once('*') {
        Some((c, rest)) => (Some(c), Some(rest)),
        None if term.starts_with(['x', 'X']) => (None, Some(term)),
        None => (Some(term), None),
    };
    let c = match coeff {
        Some(c) => c
            .parse::<u64>()
            .map_err(|_| format!("bad coefficient {c:?}"))?,
        None => 1,
    };
    let k = match mono {
        None => 0,
        Some(mono) => {
            let rest = mono
                .strip_prefix(['x', 'X'])
                .ok_or_else(|| format!("expected x in {mono:?}"))?;
            if rest.is_empty() {
                1
            } else {
                let e = rest
                    .strip_prefix('^')
                    .ok_or_else(|| format!("expected ^ in {mono:?}"))?;
                e.parse::<usize>()
                    .map_err(|_| format!("bad exponent {e:?}"))?
            }
        }
    };
    Ok((c, k))
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                f.write_str("+")?;
            }
            first = false;
            match (k, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => f.write_str("x")?,
                (1, c) => write!(f, "{c}*x")?,
                (k, 1) => write!(f, "x^{k}")?,
                (k, c) => write!(f, "{c}*x^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[F_{}]({self})", self.p)
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Orders by characteristic, then by element index.
impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.p
            .cmp(&other.p)
            .then_with(|| self.coeffs.len().cmp(&other.coeffs.len()))
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}
