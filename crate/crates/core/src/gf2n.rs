//! Arithmetic in GF(2^n) for even n, polynomial basis, one machine word per element.
//!
//! Each supported degree has a pinned defining polynomial: the irreducible
//! trinomial `x^n + x^k + 1` with the smallest `k` when one exists, otherwise
//! the irreducible pentanomial of smallest integer value. The generator is the
//! numerically smallest primitive element under that polynomial.
//!
//! | n  | defining polynomial            | hex     | primitive |
//! |----|--------------------------------|---------|-----------|
//! | 4  | x^4 + x + 1                    | 0x13    | 0x2       |
//! | 6  | x^6 + x + 1                    | 0x43    | 0x2       |
//! | 8  | x^8 + x^4 + x^3 + x + 1        | 0x11b   | 0x3       |
//! | 10 | x^10 + x^3 + 1                 | 0x409   | 0x2       |
//! | 12 | x^12 + x^3 + 1                 | 0x1009  | 0x2       |
//! | 14 | x^14 + x^5 + 1                 | 0x4021  | 0x2       |
//! | 16 | x^16 + x^5 + x^3 + x + 1       | 0x1002b | 0x2       |
//! | 18 | x^18 + x^3 + 1                 | 0x40009 | 0x2       |
//! | 20 | x^20 + x^3 + 1                 | 0x100009| 0x2       |
//!
//! Degrees above the default cap (up to [`HARD_MAX_N`]) use the same search rule.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exponents::prime_factors;

/// Largest n accepted without raising the cap.
pub const DEFAULT_MAX_N: u32 = 20;

/// Absolute ceiling: value tables of 2^n words must still fit in memory.
pub const HARD_MAX_N: u32 = 26;

/// (n, defining polynomial, primitive element)
pub const PINNED: [(u32, u64, u32); 9] = [
    (4, 0x13, 0x2),
    (6, 0x43, 0x2),
    (8, 0x11b, 0x3),
    (10, 0x409, 0x2),
    (12, 0x1009, 0x3),
    (14, 0x4021, 0x7),
    (16, 0x1002b, 0x3),
    (18, 0x40009, 0xa),
    (20, 0x100009, 0x2),
];

/// An element of GF(2^n): bit i is the coefficient of x^i.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Elem(u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    #[inline]
    pub fn bits(self) -> u32 {
        self.0
    }

    /// Element whose bit pattern is `i`; indices come from tables of length 2^n.
    #[inline]
    pub(crate) fn from_index(i: usize) -> Elem {
        Elem(i as u32)
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::LowerHex for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::LowerHex::fmt(&self.0, f)
    }
}

/// Immutable description of GF(2^n), n = 2m.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldCtx {
    n: u32,
    irreducible: u64,
    primitive: Elem,
    /// Bit i set iff Tr_1^n(x^i) = 1; the absolute trace is a parity of masked bits.
    trace_mask: u32,
}

/// JSON form of a field used in every report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FieldSpec {
    pub n: u32,
    pub irreducible_hex: String,
    pub primitive_hex: String,
}

impl FieldCtx {
    /// Field of degree `n` under the default cap.
    pub fn new(n: u32) -> Result<Self> {
        Self::with_max_n(n, DEFAULT_MAX_N)
    }

    /// Field of degree `n`, accepting any even `n` in `4..=max_n` (clamped to [`HARD_MAX_N`]).
    pub fn with_max_n(n: u32, max_n: u32) -> Result<Self> {
        let max = max_n.clamp(DEFAULT_MAX_N, HARD_MAX_N);
        if n % 2 != 0 || n < 4 || n > max {
            return Err(Error::UnsupportedDegree { n, max });
        }
        let (irreducible, primitive) = match PINNED.iter().find(|row| row.0 == n) {
            Some(&(_, poly, prim)) => (poly, prim),
            None => {
                let poly = find_low_weight_irreducible(n);
                (poly, find_least_primitive(n, poly))
            }
        };
        let mut ctx = FieldCtx { n, irreducible, primitive: Elem(primitive), trace_mask: 0 };
        let mut mask = 0u32;
        for i in 0..n {
            let t = ctx.trace(Elem(1 << i), 1).expect("1 divides n");
            if t == Elem::ONE {
                mask |= 1 << i;
            }
        }
        ctx.trace_mask = mask;
        Ok(ctx)
    }

    #[inline]
    pub fn n(&self) -> u32 {
        self.n
    }

    #[inline]
    pub fn m(&self) -> u32 {
        self.n / 2
    }

    /// Defining polynomial including the x^n term.
    pub fn irreducible(&self) -> u64 {
        self.irreducible
    }

    pub fn primitive(&self) -> Elem {
        self.primitive
    }

    /// Number of elements, 2^n.
    #[inline]
    pub fn size(&self) -> usize {
        1usize << self.n
    }

    /// Order of the multiplicative group, 2^n - 1.
    #[inline]
    pub fn order(&self) -> u64 {
        (1u64 << self.n) - 1
    }

    pub fn spec(&self) -> FieldSpec {
        FieldSpec {
            n: self.n,
            irreducible_hex: format!("{:x}", self.irreducible),
            primitive_hex: format!("{:x}", self.primitive),
        }
    }

    pub fn elem(&self, bits: u64) -> Result<Elem> {
        if bits >> self.n != 0 {
            return Err(Error::ElementOutOfRange { bits, n: self.n });
        }
        Ok(Elem(bits as u32))
    }

    /// Parses a hex bit pattern, with or without a `0x` prefix.
    pub fn parse_hex(&self, s: &str) -> Result<Elem> {
        let digits = s.trim().trim_start_matches("0x").trim_start_matches("0X");
        let bits = u64::from_str_radix(digits, 16)
            .map_err(|_| Error::InvalidParams(format!("`{s}` is not a hex field element")))?;
        self.elem(bits)
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        Elem(a.0 ^ b.0)
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        let mut acc = 0u64;
        let mut x = a.0 as u64;
        let mut y = b.0;
        while y != 0 {
            if y & 1 != 0 {
                acc ^= x;
            }
            x <<= 1;
            y >>= 1;
        }
        self.reduce(acc)
    }

    #[inline]
    fn reduce(&self, mut acc: u64) -> Elem {
        while acc >> self.n != 0 {
            let top = 63 - acc.leading_zeros();
            acc ^= self.irreducible << (top - self.n);
        }
        Elem(acc as u32)
    }

    #[inline]
    pub fn square(&self, a: Elem) -> Elem {
        self.mul(a, a)
    }

    /// `a^k` for non-negative `k`; the exponent is reduced modulo 2^n - 1 for
    /// nonzero `a`, `0^k = 0` for `k > 0` and `0^0 = 1`.
    pub fn pow(&self, a: Elem, k: u64) -> Elem {
        if k == 0 {
            return Elem::ONE;
        }
        if a.is_zero() {
            return Elem::ZERO;
        }
        let mut e = k % self.order();
        let mut base = a;
        let mut acc = Elem::ONE;
        while e != 0 {
            if e & 1 != 0 {
                acc = self.mul(acc, base);
            }
            base = self.square(base);
            e >>= 1;
        }
        acc
    }

    /// `a^k` for any signed `k`.
    pub fn pow_signed(&self, a: Elem, k: i128) -> Result<Elem> {
        if k == 0 {
            return Ok(Elem::ONE);
        }
        if a.is_zero() {
            return if k > 0 { Ok(Elem::ZERO) } else { Err(Error::ZeroToNegativePower) };
        }
        Ok(self.pow(a, k.rem_euclid(self.order() as i128) as u64))
    }

    pub fn inv(&self, a: Elem) -> Option<Elem> {
        if a.is_zero() {
            None
        } else {
            Some(self.pow(a, self.order() - 1))
        }
    }

    /// `a^(2^k)`.
    pub fn frobenius(&self, a: Elem, k: u32) -> Elem {
        (0..k).fold(a, |acc, _| self.square(acc))
    }

    /// Tr_{sub}^n(a) = a + a^(2^sub) + ... + a^(2^((n/sub - 1) sub)).
    pub fn trace(&self, a: Elem, sub: u32) -> Result<Elem> {
        if sub == 0 || self.n % sub != 0 {
            return Err(Error::NotADivisor { sub, n: self.n });
        }
        let mut cur = a;
        let mut acc = a;
        for _ in 1..self.n / sub {
            cur = self.frobenius(cur, sub);
            acc = self.add(acc, cur);
        }
        Ok(acc)
    }

    /// Absolute trace Tr_1^n(a) as a bit.
    #[inline]
    pub fn abs_trace(&self, a: Elem) -> u32 {
        (a.0 & self.trace_mask).count_ones() & 1
    }

    /// Mask `w` such that Tr_1^n(gamma * y) = parity(y & w) for every y.
    pub fn trace_form(&self, gamma: Elem) -> u32 {
        let mut mask = 0u32;
        for i in 0..self.n {
            mask |= self.abs_trace(self.mul(gamma, Elem(1 << i))) << i;
        }
        mask
    }

    /// True iff `a` lies in the subfield GF(2^k).
    pub fn in_subfield(&self, a: Elem, k: u32) -> bool {
        self.frobenius(a, k) == a
    }

    /// All 2^n elements in increasing bit order, starting at zero.
    pub fn elements(&self) -> impl Iterator<Item = Elem> + Clone {
        (0..1u32 << self.n).map(Elem)
    }

    /// Nonzero elements in increasing bit order.
    pub fn nonzero(&self) -> impl Iterator<Item = Elem> + Clone {
        (1..1u32 << self.n).map(Elem)
    }

    /// Matrix of an F_2-linear map, built from the images of the basis x^i.
    pub fn linear_map(&self, f: impl Fn(Elem) -> Elem) -> LinearMap {
        LinearMap { columns: (0..self.n).map(|i| f(Elem(1 << i)).0).collect() }
    }
}

/// An F_2-linear map on GF(2^n) stored by columns.
#[derive(Debug, Clone)]
pub struct LinearMap {
    columns: Vec<u32>,
}

impl LinearMap {
    #[inline]
    pub fn apply(&self, a: Elem) -> Elem {
        let mut bits = a.0;
        let mut out = 0u32;
        while bits != 0 {
            let i = bits.trailing_zeros();
            out ^= self.columns[i as usize];
            bits &= bits - 1;
        }
        Elem(out)
    }
}

// GF(2)[x] helpers for selecting defining polynomials. Polynomials are bit
// vectors with bit i the coefficient of x^i.

fn poly_degree(p: u64) -> u32 {
    63 - p.leading_zeros()
}

fn poly_mulmod(a: u64, b: u64, modulus: u64) -> u64 {
    let deg = poly_degree(modulus);
    let mut acc = 0u128;
    let mut x = a as u128;
    let mut y = b;
    while y != 0 {
        if y & 1 != 0 {
            acc ^= x;
        }
        x <<= 1;
        y >>= 1;
    }
    let modulus = modulus as u128;
    while acc >> deg != 0 {
        let top = 127 - acc.leading_zeros();
        acc ^= modulus << (top - deg);
    }
    acc as u64
}

fn poly_gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let db = poly_degree(b);
        while a != 0 && poly_degree(a) >= db {
            a ^= b << (poly_degree(a) - db);
        }
        std::mem::swap(&mut a, &mut b);
    }
    a
}

/// x^(2^k) mod `modulus`.
fn x_pow_two_pow(k: u32, modulus: u64) -> u64 {
    let mut r = 0b10u64;
    for _ in 0..k {
        r = poly_mulmod(r, r, modulus);
    }
    r
}

/// Rabin's test: x^(2^n) = x mod p and gcd(x^(2^(n/q)) - x, p) = 1 for each prime q | n.
pub(crate) fn is_irreducible(p: u64) -> bool {
    let n = poly_degree(p);
    if n == 0 || p & 1 == 0 {
        return n == 1;
    }
    if x_pow_two_pow(n, p) != 0b10 {
        return false;
    }
    prime_factors(n as u64)
        .into_iter()
        .all(|q| poly_gcd(p, x_pow_two_pow(n / q as u32, p) ^ 0b10) == 1)
}

pub(crate) fn find_low_weight_irreducible(n: u32) -> u64 {
    let top = 1u64 << n;
    for k in 1..n {
        let p = top | (1 << k) | 1;
        if is_irreducible(p) {
            return p;
        }
    }
    for a in 3..n {
        for b in 2..a {
            for c in 1..b {
                let p = top | (1 << a) | (1 << b) | (1 << c) | 1;
                if is_irreducible(p) {
                    return p;
                }
            }
        }
    }
    unreachable!("every degree >= 4 has an irreducible trinomial or pentanomial")
}

pub(crate) fn find_least_primitive(n: u32, poly: u64) -> u32 {
    let order = (1u64 << n) - 1;
    let factors = prime_factors(order);
    let probe = FieldCtx { n, irreducible: poly, primitive: Elem::ONE, trace_mask: 0 };
    (2..1u32 << n)
        .find(|&g| factors.iter().all(|&q| probe.pow(Elem(g), order / q) != Elem::ONE))
        .expect("the multiplicative group of a finite field is cyclic")
}
