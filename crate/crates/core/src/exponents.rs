//! Integer number theory for Niho-type exponents d = s(2^m - 1) + e over GF(2^2m).

use num_bigint::BigUint;
use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};

/// Sign of the `±1` in `2^k ± 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    pub fn apply(self, base: &BigUint) -> BigUint {
        match self {
            Sign::Minus => base - 1u32,
            Sign::Plus => base + 1u32,
        }
    }
}

/// Exponent tuple of a binomial x^d1 + u x^d2 with d1 = s(2^m-1)+e, d2 = (s-l)(2^m-1)+e.
///
/// `d1` and `d2` are stored reduced into `[1, 2^n - 1]`, n = 2m.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct NihoParams {
    pub m: u32,
    pub s: i64,
    pub l: i64,
    pub e: i64,
    pub d1: u64,
    pub d2: u64,
    /// gcd(d1, 2^n - 1) = 1
    pub d1_coprime: bool,
}

impl NihoParams {
    pub fn n(&self) -> u32 {
        2 * self.m
    }

    /// 2^m - 1
    pub fn sub_order(&self) -> u64 {
        (1u64 << self.m) - 1
    }

    /// 2^m + 1, the order of the unit circle.
    pub fn circle_order(&self) -> u64 {
        (1u64 << self.m) + 1
    }

    pub fn field_order(&self) -> u64 {
        (1u64 << self.n()) - 1
    }
}

/// Reduces an integer exponent into `[1, modulus]` (0 maps to `modulus`).
pub fn canonical_exponent(value: i128, modulus: u64) -> u64 {
    let r = value.rem_euclid(modulus as i128) as u64;
    if r == 0 {
        modulus
    } else {
        r
    }
}

pub fn make_niho(m: u32, s: i64, l: i64, e: i64) -> Result<NihoParams> {
    if !(2..=13).contains(&m) {
        return Err(Error::InvalidParams(format!("m={m} must lie in 2..=13")));
    }
    if e < 1 {
        return Err(Error::InvalidParams(format!("e={e} must be positive")));
    }
    let q = (1i128 << m) - 1;
    let order = (1u64 << (2 * m)) - 1;
    let d1 = canonical_exponent(s as i128 * q + e as i128, order);
    let d2 = canonical_exponent((s as i128 - l as i128) * q + e as i128, order);
    Ok(NihoParams { m, s, l, e, d1, d2, d1_coprime: gcd(d1, order) == 1 })
}

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// gcd of |a| with b.
pub fn gcd_signed(a: i128, b: u64) -> u64 {
    a.unsigned_abs().gcd(&(b as u128)) as u64
}

/// Inverse of `a` modulo `modulus`, if it exists.
pub fn mod_inverse(a: i128, modulus: u64) -> Option<u64> {
    let md = modulus as i128;
    let (mut old_r, mut r) = (a.rem_euclid(md), md);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    (old_r == 1).then(|| old_s.rem_euclid(md) as u64)
}

/// gcd(2^r ± 1, 2^s ± 1) from the closed forms in terms of g = gcd(r, s).
pub fn gcd_mersenne_like(r: u32, sign_r: Sign, s: u32, sign_s: Sign) -> BigUint {
    assert!(r >= 1 && s >= 1, "r and s must be positive");
    let g = r.gcd(&s);
    let pow = BigUint::from(1u32) << g;
    let one = || BigUint::from(1u32);
    match (sign_r, sign_s) {
        (Sign::Minus, Sign::Minus) => pow - 1u32,
        (Sign::Minus, Sign::Plus) => {
            if (r / g) % 2 == 1 {
                one()
            } else {
                pow + 1u32
            }
        }
        (Sign::Plus, Sign::Minus) => {
            if (s / g) % 2 == 1 {
                one()
            } else {
                pow + 1u32
            }
        }
        (Sign::Plus, Sign::Plus) => {
            if (r / g) % 2 == 1 && (s / g) % 2 == 1 {
                pow + 1u32
            } else {
                one()
            }
        }
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime factors in increasing order, by trial division.
pub fn prime_factors(mut v: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= v {
        if v % d == 0 {
            out.push(d);
            while v % d == 0 {
                v /= d;
            }
        }
        d += 1;
    }
    if v > 1 {
        out.push(v);
    }
    out
}

/// Multiplicative order of 2 modulo an odd prime.
pub fn order_of_two(p: u64) -> Result<u64> {
    if p % 2 == 0 || !is_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    let mut x = 2 % p;
    let mut r = 1;
    while x != 1 {
        x = x * 2 % p;
        r += 1;
    }
    Ok(r)
}

/// Whether the order-of-two criterion guarantees gcd(p, 2^k + 1) = 1.
///
/// `false` means "no guarantee", not that the gcd exceeds one.
pub fn gcd_p_2k1_guaranteed_one(p: u64, k: u64) -> Result<bool> {
    let r = order_of_two(p)?;
    if r % 2 == 1 {
        return Ok(true);
    }
    let half = r / 2;
    Ok(k % half != 0 || (2 * k / r) % 2 == 0)
}

/// gcd(d1, 2^n - 1) through its split over 2^m - 1 and 2^m + 1:
/// gcd(e, 2^m - 1) * gcd(e - 2s, 2^m + 1).
pub fn split_gcd(m: u32, s: i64, e: i64) -> u64 {
    let q = (1u64 << m) - 1;
    gcd_signed(e as i128, q) * gcd_signed(e as i128 - 2 * s as i128, q + 2)
}
