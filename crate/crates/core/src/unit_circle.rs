//! The unit circle U = {λ : λ^(2^m+1) = 1} of GF(2^2m) and its power subgroups.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::exponents::gcd;
use crate::gf2n::{Elem, FieldCtx};

#[derive(Debug, Clone)]
pub struct UnitCircle {
    ctx: FieldCtx,
    generator: Elem,
    elements: Vec<Elem>,
}

impl UnitCircle {
    /// Elements are listed as generator^0, generator^1, ... with
    /// generator = primitive^(2^m - 1).
    pub fn build(ctx: &FieldCtx) -> Self {
        let m = ctx.m();
        let generator = ctx.pow(ctx.primitive(), (1u64 << m) - 1);
        let order = (1usize << m) + 1;
        let mut elements = Vec::with_capacity(order);
        let mut x = Elem::ONE;
        for _ in 0..order {
            elements.push(x);
            x = ctx.mul(x, generator);
        }
        debug_assert_eq!(x, Elem::ONE);
        UnitCircle { ctx: ctx.clone(), generator, elements }
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn generator(&self) -> Elem {
        self.generator
    }

    pub fn elements(&self) -> &[Elem] {
        &self.elements
    }

    /// 2^m + 1
    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    pub fn contains(&self, x: Elem) -> bool {
        self.ctx.pow(x, self.order()) == Elem::ONE
    }

    /// Membership in U^r, for `u` already known to lie in U.
    pub fn in_power_subgroup(&self, u: Elem, r: u64) -> bool {
        let g = gcd(r, self.order());
        self.ctx.pow(u, self.order() / g) == Elem::ONE
    }

    /// {v^r : v ∈ U}, in order of first appearance along the generator walk.
    pub fn power_subgroup(&self, r: u64) -> Vec<Elem> {
        let mut seen = HashSet::new();
        self.elements
            .iter()
            .map(|&v| self.ctx.pow(v, r))
            .filter(|w| seen.insert(*w))
            .collect()
    }

    /// U \ U^r, in generator order.
    pub fn complement_coset(&self, r: u64) -> Vec<Elem> {
        self.elements.iter().copied().filter(|&u| !self.in_power_subgroup(u, r)).collect()
    }
}

/// Unique factorization x = λ·y with λ ∈ U and y ∈ GF(2^m)^*.
///
/// y is the square root of x^(2^m+1), i.e. x^((2^m+1)·2^(n-1)).
pub fn polar_decompose(ctx: &FieldCtx, x: Elem) -> Result<(Elem, Elem)> {
    if x.is_zero() {
        return Err(Error::InvalidParams("polar decomposition of zero".into()));
    }
    let order = ctx.order() as u128;
    let e = (((1u128 << ctx.m()) + 1) * (1u128 << (ctx.n() - 1))) % order;
    let y = ctx.pow(x, e as u64);
    let lambda = ctx.mul(x, ctx.inv(y).expect("y is nonzero"));
    Ok((lambda, y))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes_and_membership() {
        for (n, size) in [(4, 5), (6, 9), (8, 17), (10, 33)] {
            let f = FieldCtx::new(n).unwrap();
            let u = UnitCircle::build(&f);
            assert_eq!(u.elements().len(), size);
            assert_eq!(u.elements()[0], Elem::ONE);
            let distinct: HashSet<_> = u.elements().iter().collect();
            assert_eq!(distinct.len(), size);
            for &l in u.elements() {
                assert_eq!(f.pow(l, size as u64), Elem::ONE);
            }
            assert_eq!(u.generator(), f.pow(f.primitive(), (1 << f.m()) - 1));
        }
    }

    #[test]
    fn group_closure_and_trivial_intersection() {
        let f = FieldCtx::new(8).unwrap();
        let u = UnitCircle::build(&f);
        let set: HashSet<_> = u.elements().iter().copied().collect();
        for &a in u.elements() {
            assert!(set.contains(&f.inv(a).unwrap()));
            for &b in u.elements() {
                assert!(set.contains(&f.mul(a, b)));
            }
        }
        let in_subfield: Vec<_> = u.elements().iter().filter(|&&l| f.in_subfield(l, f.m())).collect();
        assert_eq!(in_subfield, vec![&Elem::ONE]);
    }

    #[test]
    fn power_subgroup_examples() {
        let f6 = FieldCtx::new(6).unwrap();
        let u6 = UnitCircle::build(&f6);
        assert_eq!(u6.power_subgroup(3).len(), 3);
        assert_eq!(u6.power_subgroup(1), u6.elements().to_vec());
        let f4 = FieldCtx::new(4).unwrap();
        let u4 = UnitCircle::build(&f4);
        assert_eq!(u4.power_subgroup(3).len(), 5);
    }

    #[test]
    fn complement_examples() {
        let f6 = FieldCtx::new(6).unwrap();
        let u6 = UnitCircle::build(&f6);
        assert_eq!(u6.complement_coset(3).len(), 6);
        assert_eq!(u6.complement_coset(9).len(), 8);
        let f4 = FieldCtx::new(4).unwrap();
        assert!(UnitCircle::build(&f4).complement_coset(3).is_empty());
    }

    #[test]
    fn complement_is_set_difference() {
        for n in [6, 8, 10] {
            let f = FieldCtx::new(n).unwrap();
            let u = UnitCircle::build(&f);
            for r in 1..=u.order() + 2 {
                let sub: HashSet<_> = u.power_subgroup(r).into_iter().collect();
                let expect: Vec<_> = u.elements().iter().copied().filter(|x| !sub.contains(x)).collect();
                let comp = u.complement_coset(r);
                assert_eq!(comp, expect, "n={n} r={r}");
                let g = gcd(r, u.order());
                assert_eq!(comp.len() as u64, u.order() - u.order() / g);
            }
        }
    }

    #[test]
    fn polar_round_trip_is_exhaustive_and_unique() {
        for n in [4, 6, 8] {
            let f = FieldCtx::new(n).unwrap();
            let u = UnitCircle::build(&f);
            let mut seen = HashSet::new();
            for x in f.nonzero() {
                let (l, y) = polar_decompose(&f, x).unwrap();
                assert_eq!(f.mul(l, y), x);
                assert!(u.contains(l));
                assert!(f.in_subfield(y, f.m()) && !y.is_zero());
                assert!(seen.insert((l, y)));
            }
            assert_eq!(seen.len() as u64, f.order());
        }
    }

    #[test]
    fn polar_special_cases() {
        let f = FieldCtx::new(6).unwrap();
        for x in f.nonzero().filter(|&x| f.in_subfield(x, 3)) {
            assert_eq!(polar_decompose(&f, x).unwrap(), (Elem::ONE, x));
        }
        let u = UnitCircle::build(&f);
        for &x in &u.elements()[1..] {
            assert_eq!(polar_decompose(&f, x).unwrap(), (x, Elem::ONE));
        }
        assert!(polar_decompose(&f, Elem::ZERO).is_err());
    }

    #[test]
    fn twisting_by_delta_keeps_u_outside_subgroup() {
        // u ∉ U^r and r = gcd(l, 2^m+1) imply u·δ^{l(2^m-1)} ∉ U^r for every δ ≠ 0.
        let f = FieldCtx::new(6).unwrap();
        let circle = UnitCircle::build(&f);
        for l in [3i64, 6, 9, 12] {
            let r = gcd(l as u64, 9);
            for u in circle.complement_coset(r) {
                for d in f.nonzero() {
                    let w = f.mul(u, f.pow(d, l as u64 * 7));
                    assert_ne!(f.pow(w, 9 / r), Elem::ONE);
                }
            }
        }
    }
}
