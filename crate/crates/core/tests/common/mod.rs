//! Reference arithmetic for the integration tests. Shares nothing with the
//! library beyond the defining polynomial.

#![allow(dead_code)]

use nihoperm::{FieldCtx, SparsePoly};

pub struct RefField {
    pub n: u32,
    poly: u64,
}

impl RefField {
    pub fn new(n: u32, poly: u64) -> Self {
        assert_eq!(64 - poly.leading_zeros(), n + 1, "defining polynomial has wrong degree");
        RefField { n, poly }
    }

    pub fn of(ctx: &FieldCtx) -> Self {
        Self::new(ctx.n(), ctx.irreducible())
    }

    pub fn size(&self) -> u64 {
        1 << self.n
    }

    /// Schoolbook product, then long division by the modulus.
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        let mut prod = 0u64;
        for i in 0..self.n {
            if b >> i & 1 == 1 {
                prod ^= a << i;
            }
        }
        for bit in (self.n..2 * self.n).rev() {
            if prod >> bit & 1 == 1 {
                prod ^= self.poly << (bit - self.n);
            }
        }
        prod
    }

    pub fn pow(&self, a: u64, e: u64) -> u64 {
        let mut acc = 1;
        for i in (0..64 - e.leading_zeros()).rev() {
            acc = self.mul(acc, acc);
            if e >> i & 1 == 1 {
                acc = self.mul(acc, a);
            }
        }
        acc
    }

    /// a + a^2 + a^4 + ... + a^(2^(n-1)), which lands in {0, 1}.
    pub fn trace(&self, a: u64) -> u64 {
        let (mut t, mut x) = (0, a);
        for _ in 0..self.n {
            t ^= x;
            x = self.mul(x, x);
        }
        assert!(t <= 1, "trace left the prime field");
        t
    }

    pub fn eval(&self, terms: &[(u64, u64)], x: u64) -> u64 {
        terms.iter().fold(0, |acc, &(c, d)| acc ^ self.mul(c, self.pow(x, d)))
    }

    pub fn is_bijection(&self, terms: &[(u64, u64)]) -> bool {
        let mut seen = vec![false; self.size() as usize];
        for x in 0..self.size() {
            let y = self.eval(terms, x) as usize;
            if std::mem::replace(&mut seen[y], true) {
                return false;
            }
        }
        true
    }

    /// sum over x of (-1)^Tr(γ g(x))
    pub fn char_sum(&self, terms: &[(u64, u64)], gamma: u64) -> i64 {
        (0..self.size())
            .map(|x| if self.trace(self.mul(gamma, self.eval(terms, x))) == 0 { 1 } else { -1 })
            .sum()
    }
}

pub fn terms_of(p: &SparsePoly) -> Vec<(u64, u64)> {
    p.terms().iter().map(|t| (t.coeff.bits() as u64, t.exp)).collect()
}

/// One pass/fail line per criterion, as the acceptance target prints them.
pub fn verdict_line(id: u32, title: &str, ok: bool, detail: &str) -> String {
    format!("[{}] criterion {id}: {title} ({detail})", if ok { "PASS" } else { "FAIL" })
}
