//! Sparse polynomials f(x) = sum u_i x^{d_i} over GF(2^n).

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::exponents::canonical_exponent;
use crate::gf2n::{Elem, FieldCtx};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Term {
    pub coeff: Elem,
    pub exp: u64,
}

/// Terms have strictly increasing exponents in `[1, 2^n - 1]` and nonzero
/// coefficients. Exponents are reduced modulo 2^n - 1 on construction, which
/// leaves the induced map unchanged since every exponent is at least one.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SparsePoly {
    n: u32,
    terms: Vec<Term>,
}

impl SparsePoly {
    pub fn new(ctx: &FieldCtx, terms: impl IntoIterator<Item = (Elem, i128)>) -> Result<Self> {
        let mut out: Vec<Term> = Vec::new();
        for (coeff, exp) in terms {
            if exp < 1 {
                return Err(Error::NonPositiveExponent(exp));
            }
            ctx.elem(coeff.bits() as u64)?;
            out.push(Term { coeff, exp: canonical_exponent(exp, ctx.order()) });
        }
        out.sort_by_key(|t| t.exp);
        let mut merged: Vec<Term> = Vec::with_capacity(out.len());
        for t in out {
            match merged.last_mut() {
                Some(last) if last.exp == t.exp => last.coeff = ctx.add(last.coeff, t.coeff),
                _ => merged.push(t),
            }
        }
        merged.retain(|t| !t.coeff.is_zero());
        Ok(SparsePoly { n: ctx.n(), terms: merged })
    }

    pub fn monomial(ctx: &FieldCtx, coeff: Elem, exp: i128) -> Result<Self> {
        Self::new(ctx, [(coeff, exp)])
    }

    /// Parses `coeffhex:exp,coeffhex:exp,...`.
    pub fn parse(ctx: &FieldCtx, spec: &str) -> Result<Self> {
        let mut terms = Vec::new();
        for raw in spec.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (c, e) = raw.split_once(':').ok_or_else(|| Error::MalformedTerm(raw.to_string()))?;
            let coeff = ctx.parse_hex(c).map_err(|_| Error::MalformedTerm(raw.to_string()))?;
            let exp = i128::from_str(e.trim()).map_err(|_| Error::MalformedTerm(raw.to_string()))?;
            terms.push((coeff, exp));
        }
        if terms.is_empty() {
            return Err(Error::MalformedTerm(spec.to_string()));
        }
        Self::new(ctx, terms)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn exponents(&self) -> Vec<u64> {
        self.terms.iter().map(|t| t.exp).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// f(x) + x, merging with an existing linear term.
    pub fn plus_x(&self, ctx: &FieldCtx) -> Self {
        let mut terms: Vec<(Elem, i128)> =
            self.terms.iter().map(|t| (t.coeff, t.exp as i128)).collect();
        terms.push((Elem::ONE, 1));
        Self::new(ctx, terms).expect("terms already canonical")
    }

    /// Multiplies every coefficient by `c`.
    pub fn scale(&self, ctx: &FieldCtx, c: Elem) -> Self {
        Self::new(ctx, self.terms.iter().map(|t| (ctx.mul(c, t.coeff), t.exp as i128)))
            .expect("terms already canonical")
    }

    pub fn eval(&self, ctx: &FieldCtx, x: Elem) -> Elem {
        self.terms
            .iter()
            .fold(Elem::ZERO, |acc, t| ctx.add(acc, ctx.mul(t.coeff, ctx.pow(x, t.exp))))
    }

    /// f evaluated at every element, indexed by the element's bit pattern.
    ///
    /// Walks the multiplicative group as powers of the primitive element, so
    /// each nonzero point costs one multiplication per term.
    pub fn value_table(&self, ctx: &FieldCtx) -> Vec<u32> {
        let mut values = vec![0u32; ctx.size()];
        let g = ctx.primitive();
        let steps: Vec<Elem> = self.terms.iter().map(|t| ctx.pow(g, t.exp)).collect();
        let mut running: Vec<Elem> = self.terms.iter().map(|t| t.coeff).collect();
        let mut x = Elem::ONE;
        for _ in 0..ctx.order() {
            let v = running.iter().fold(0u32, |acc, r| acc ^ r.bits());
            values[x.bits() as usize] = v;
            for (r, s) in running.iter_mut().zip(&steps) {
                *r = ctx.mul(*r, *s);
            }
            x = ctx.mul(x, g);
        }
        values
    }
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{:x}:{}", t.coeff, t.exp)?;
        }
        Ok(())
    }
}
