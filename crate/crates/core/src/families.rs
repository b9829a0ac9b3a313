//! Parameter validation and instance generation for the binomial PP and
//! monomial CPP families, plus the two conjectured trinomials.

use std::collections::HashMap;
use std::fmt;
use std::io::Write;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exponents::{canonical_exponent, gcd, gcd_signed, make_niho, NihoParams};
use crate::gf2n::{Elem, FieldCtx};
use crate::poly::SparsePoly;
use crate::spectra::{is_cpp, is_permutation_brute, unique_solution_check, VerificationReport};
use crate::unit_circle::UnitCircle;

/// Which flavour of condition list a [`Conditions`] value was computed for;
/// only affects how failures are worded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConditionShape {
    /// x^d1 + u x^d2 with d1 = s(2^m-1)+e, d2 = (s-l)(2^m-1)+e.
    Binomial,
    /// x^d1 + u x with d1 = s(2^m-1)+1.
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Conditions {
    pub shape: ConditionShape,
    pub gcd_d1_ok: bool,
    pub r: u64,
    pub r_ok: bool,
    pub cond_ii_ok: bool,
    /// |U \ U^r|
    pub eligible_u_count: u64,
}

impl Conditions {
    fn new(shape: ConditionShape, m: u32, gcd_d1_ok: bool, r: u64, cond_ii_ok: bool) -> Self {
        let circle = (1u64 << m) + 1;
        Conditions {
            shape,
            gcd_d1_ok,
            r,
            r_ok: r > 1,
            cond_ii_ok,
            eligible_u_count: circle - circle / gcd(r, circle),
        }
    }

    pub fn all_ok(&self) -> bool {
        self.gcd_d1_ok && self.r_ok && self.cond_ii_ok
    }

    /// The first violated condition, worded as in the statement it comes from.
    pub fn failure(&self) -> Option<String> {
        let (cond_i, cond_ii) = match self.shape {
            ConditionShape::Binomial => ("r:=gcd(l,2^m+1)>1", "gcd(e+l-2s,2^m+1)=1"),
            ConditionShape::Linear => ("r:=gcd(s,2^m+1)>1", "gcd(s-1,2^m+1)=1"),
        };
        if !self.r_ok {
            Some(format!("condition (i) {cond_i} failed"))
        } else if !self.cond_ii_ok {
            Some(format!("condition (ii) {cond_ii} failed"))
        } else if !self.gcd_d1_ok {
            Some("gcd(d1,2^n-1)=1 failed".to_string())
        } else {
            None
        }
    }
}

pub fn check_theorem1(p: &NihoParams) -> Conditions {
    let circle = p.circle_order();
    let r = gcd_signed(p.l as i128, circle);
    let cond_ii = gcd_signed(p.e as i128 + p.l as i128 - 2 * p.s as i128, circle) == 1;
    Conditions::new(ConditionShape::Binomial, p.m, p.d1_coprime, r, cond_ii)
}

/// d1 = s(2^m-1)+1, reduced into [1, 2^n-1].
pub fn prop3_exponent(m: u32, s: i64) -> u64 {
    let q = (1i128 << m) - 1;
    canonical_exponent(s as i128 * q + 1, (1u64 << (2 * m)) - 1)
}

pub fn check_prop3(m: u32, s: i64) -> Conditions {
    let circle = (1u64 << m) + 1;
    let d1 = prop3_exponent(m, s);
    let gcd_ok = gcd(d1, (1u64 << (2 * m)) - 1) == 1;
    let r = gcd_signed(s as i128, circle);
    let cond_ii = gcd_signed(s as i128 - 1, circle) == 1;
    Conditions::new(ConditionShape::Linear, m, gcd_ok, r, cond_ii)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyId {
    Thm1,
    Prop1Case(u8),
    Prop3,
    Cor2Cpp,
    CppClass(u8),
    ConjF,
    ConjG,
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyId::Thm1 => f.write_str("THM1"),
            FamilyId::Prop1Case(c) => write!(f, "PROP1_CASE{c}"),
            FamilyId::Prop3 => f.write_str("PROP3"),
            FamilyId::Cor2Cpp => f.write_str("COR2_CPP"),
            FamilyId::CppClass(c) => write!(f, "CPP_CLASS{c}"),
            FamilyId::ConjF => f.write_str("CONJ_F"),
            FamilyId::ConjG => f.write_str("CONJ_G"),
        }
    }
}

impl Serialize for FamilyId {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Claim {
    PP,
    CPP,
}

/// Where an instance came from. CPP classes record their `k` in `k1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Provenance {
    pub family_id: FamilyId,
    pub m: u32,
    pub s: Option<i64>,
    pub l: Option<i64>,
    pub e: Option<i64>,
    pub k1: Option<u32>,
    pub k2: Option<u32>,
    pub k3: Option<u32>,
    #[serde(serialize_with = "hex_opt")]
    pub u: Option<Elem>,
    pub d1: Option<u64>,
    pub d2: Option<u64>,
}

fn hex_opt<S: serde::Serializer>(u: &Option<Elem>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match u {
        Some(u) => s.collect_str(&format_args!("{u:x}")),
        None => s.serialize_none(),
    }
}

impl Provenance {
    fn bare(family_id: FamilyId, m: u32) -> Self {
        Provenance { family_id, m, s: None, l: None, e: None, k1: None, k2: None, k3: None, u: None, d1: None, d2: None }
    }

    fn niho(family_id: FamilyId, p: &NihoParams) -> Self {
        Provenance {
            s: Some(p.s),
            l: Some(p.l),
            e: Some(p.e),
            d1: Some(p.d1),
            d2: Some(p.d2),
            ..Self::bare(family_id, p.m)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FamilyInstance {
    pub provenance: Provenance,
    pub poly: SparsePoly,
    pub claim: Claim,
    /// Exponent tuple for binomials x^d1 + u x^d2 built from the two-exponent criterion.
    pub niho: Option<NihoParams>,
}

fn check_field(circle: &UnitCircle, m: u32) -> Result<()> {
    if circle.ctx().m() != m {
        return Err(Error::InvalidParams(format!(
            "parameters are for m={m}, field has m={}",
            circle.ctx().m()
        )));
    }
    Ok(())
}

fn binomial_instances(
    circle: &UnitCircle,
    p: &NihoParams,
    r: u64,
    family_id: FamilyId,
    extra: impl Fn(&mut Provenance),
) -> Result<Vec<FamilyInstance>> {
    let ctx = circle.ctx();
    circle
        .complement_coset(r)
        .into_iter()
        .map(|u| {
            let poly = SparsePoly::new(ctx, [(Elem::ONE, p.d1 as i128), (u, p.d2 as i128)])?;
            let mut provenance = Provenance::niho(family_id, p);
            provenance.u = Some(u);
            extra(&mut provenance);
            Ok(FamilyInstance { provenance, poly, claim: Claim::PP, niho: Some(*p) })
        })
        .collect()
}

/// x^d1 + u x^d2 for every u ∈ U \ U^r.
pub fn gen_theorem1(circle: &UnitCircle, p: &NihoParams) -> Result<Vec<FamilyInstance>> {
    check_field(circle, p.m)?;
    let conds = check_theorem1(p);
    if let Some(msg) = conds.failure() {
        return Err(Error::ConditionFailed(msg));
    }
    binomial_instances(circle, p, conds.r, FamilyId::Thm1, |_| {})
}

/// Largest k accepted in the parameter tables (2^k must fit comfortably in i64).
pub const MAX_K: u32 = 60;

fn require(ok: bool, what: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidParams(what()))
    }
}

/// (s, l, e) for the six odd-m binomial cases; every output satisfies the
/// binomial conditions with r = 3. `k2` and `k3` are only read by cases 1 and 2.
pub fn prop1_params(case: u8, m: u32, k1: u32, k2: u32, k3: u32) -> Result<NihoParams> {
    require((1..=6).contains(&case), || format!("case {case} must lie in 1..=6"))?;
    require(m % 2 == 1, || format!("m={m} must be odd"))?;
    require(k1.max(k2).max(k3) <= MAX_K, || format!("k values must not exceed {MAX_K}"))?;
    let odd = |k: u32| k % 2 == 1;
    let m64 = m as u64;
    let k1_coprime = gcd(k1 as u64, m64) == 1;
    let k1_k1p1_coprime = gcd(k1 as u64 * (k1 as u64 + 1), m64) == 1;
    match case {
        1 => {
            require(odd(k1) && odd(k2), || "case 1 requires k1 and k2 odd".into())?;
            require(k1_coprime, || "case 1 requires gcd(k1,m)=1".into())?;
        }
        2 => {
            require(!odd(k1) && !odd(k2), || "case 2 requires k1 and k2 even".into())?;
            require(k1_coprime, || "case 2 requires gcd(k1,m)=1".into())?;
        }
        3 | 4 => {
            let want_odd = case == 3;
            require(odd(k1) == want_odd, || {
                format!("case {case} requires k1 {}", if want_odd { "odd" } else { "even" })
            })?;
            require(k1_coprime, || format!("case {case} requires gcd(k1,m)=1"))?;
        }
        _ => {
            let want_odd = case == 5;
            require(odd(k1) == want_odd, || {
                format!("case {case} requires k1 {}", if want_odd { "odd" } else { "even" })
            })?;
            require(k1_k1p1_coprime, || format!("case {case} requires gcd(k1(k1+1),m)=1"))?;
        }
    }
    let p2 = |k: u32| 1i64 << k;
    // (2s, l, e); 2s is carried so that half-integral s can be rejected exactly.
    let (twice_s, l, e) = match case {
        1 => (p2(k3) - p2(k2) + 2, p2(k1) + 1, p2(k3) + 1),
        2 => (p2(k3) - p2(k2), p2(k1) - 1, p2(k3) + 1),
        3 => (2 * (p2(k1) + 1), p2(k1) + 1, p2(k1 + 1) + 1),
        4 => (2 * p2(k1), p2(k1) - 1, p2(k1 + 1) + 1),
        5 => (2 * p2(k1), p2(k1) + 1, p2(k1 + 1) - 1),
        _ => (2 * (p2(k1) - 1), p2(k1) - 1, p2(k1 + 1) - 1),
    };
    require(twice_s % 2 == 0, || format!("case {case}: s = {twice_s}/2 is not an integer"))?;
    let p = make_niho(m, twice_s / 2, l, e)?;
    let conds = check_theorem1(&p);
    if let Some(msg) = conds.failure() {
        return Err(Error::ConditionFailed(format!("case {case} (k1={k1}, k2={k2}, k3={k3}): {msg}")));
    }
    if conds.r != 3 {
        return Err(Error::ConditionFailed(format!("case {case}: expected r = 3, got {}", conds.r)));
    }
    Ok(p)
}

/// x^d1 + u x^d2 for every non-cube u ∈ U.
pub fn gen_prop1(circle: &UnitCircle, case: u8, k1: u32, k2: u32, k3: u32) -> Result<Vec<FamilyInstance>> {
    let m = circle.ctx().m();
    let p = prop1_params(case, m, k1, k2, k3)?;
    let two_ks = case <= 2;
    binomial_instances(circle, &p, 3, FamilyId::Prop1Case(case), |prov| {
        prov.k1 = Some(k1);
        if two_ks {
            prov.k2 = Some(k2);
            prov.k3 = Some(k3);
        }
    })
}

fn linear_conditions_hold(m: u32, s: i64) -> Result<Conditions> {
    let conds = check_prop3(m, s);
    match conds.failure() {
        Some(msg) => Err(Error::ConditionFailed(msg)),
        None => Ok(conds),
    }
}

fn linear_provenance(family_id: FamilyId, m: u32, s: i64, u: Elem) -> Provenance {
    Provenance {
        s: Some(s),
        l: Some(s),
        e: Some(1),
        u: Some(u),
        d1: Some(prop3_exponent(m, s)),
        d2: Some(1),
        ..Provenance::bare(family_id, m)
    }
}

/// x^d1 + u x for every u ∈ U \ U^r, d1 = s(2^m-1)+1.
pub fn gen_prop3(circle: &UnitCircle, s: i64) -> Result<Vec<FamilyInstance>> {
    let ctx = circle.ctx();
    let m = ctx.m();
    let conds = linear_conditions_hold(m, s)?;
    let d1 = prop3_exponent(m, s);
    let niho = make_niho(m, s, s, 1)?;
    circle
        .complement_coset(conds.r)
        .into_iter()
        .map(|u| {
            let poly = SparsePoly::new(ctx, [(Elem::ONE, d1 as i128), (u, 1)])?;
            Ok(FamilyInstance {
                provenance: linear_provenance(FamilyId::Prop3, m, s, u),
                poly,
                claim: Claim::PP,
                niho: Some(niho),
            })
        })
        .collect()
}

fn monomial_cpp_instances(
    circle: &UnitCircle,
    s: i64,
    r: u64,
    family_id: FamilyId,
    k: Option<u32>,
) -> Result<Vec<FamilyInstance>> {
    let ctx = circle.ctx();
    let m = ctx.m();
    let d1 = prop3_exponent(m, s);
    circle
        .complement_coset(r)
        .into_iter()
        .map(|u| {
            let poly = SparsePoly::monomial(ctx, ctx.inv(u).expect("u ∈ U is nonzero"), d1 as i128)?;
            let mut provenance = linear_provenance(family_id, m, s, u);
            provenance.l = None;
            provenance.e = None;
            provenance.d2 = None;
            provenance.k1 = k;
            Ok(FamilyInstance { provenance, poly, claim: Claim::CPP, niho: None })
        })
        .collect()
}

/// u^{-1} x^d1 for every u ∈ U \ U^r.
pub fn gen_cpp_cor2(circle: &UnitCircle, s: i64) -> Result<Vec<FamilyInstance>> {
    let conds = linear_conditions_hold(circle.ctx().m(), s)?;
    monomial_cpp_instances(circle, s, conds.r, FamilyId::Cor2Cpp, None)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CppClassParams {
    pub s: i64,
    /// Eligible u range over U \ U^r.
    pub r: u64,
}

/// `k` is read by classes 1 and 2 only.
pub fn cpp_class_params(class: u8, m: u32, k: Option<u32>) -> Result<CppClassParams> {
    require((1..=6).contains(&class), || format!("class {class} must lie in 1..=6"))?;
    require((2..=13).contains(&m), || format!("m={m} must lie in 2..=13"))?;
    let params = match class {
        1 | 2 => {
            let k = k.ok_or_else(|| Error::InvalidParams(format!("class {class} needs k")))?;
            require((1..=MAX_K).contains(&k), || format!("k={k} must lie in 1..={MAX_K}"))?;
            let t = gcd(m as u64, k as u64) as u32;
            if class == 1 {
                require(m % 2 == 1 && k % 2 == 1, || "class 1 requires m and k odd".into())?;
            } else {
                require(m % 2 == 0 && k % 2 == 0, || "class 2 requires m and k even".into())?;
                require((k / t) % 2 == 1 && (m / t) % 2 == 1, || "class 2 requires k/t and m/t odd".into())?;
            }
            CppClassParams { s: (1i64 << k) + 1, r: (1u64 << t) + 1 }
        }
        _ => {
            require(m % 2 == 1, || format!("class {class} requires m odd"))?;
            let s = match class {
                3 => {
                    require(m % 5 != 0, || format!("class 3 requires 5∤m (m={m})"))?;
                    6
                }
                4 => 15,
                5 => 63,
                _ => (1i64 << m) - 2,
            };
            CppClassParams { s, r: 3 }
        }
    };
    linear_conditions_hold(m, params.s)
        .map_err(|e| Error::ConditionFailed(format!("class {class}: {e}")))?;
    Ok(params)
}

pub fn gen_cpp_class(circle: &UnitCircle, class: u8, k: Option<u32>) -> Result<Vec<FamilyInstance>> {
    let params = cpp_class_params(class, circle.ctx().m(), k)?;
    let k = if class <= 2 { k } else { None };
    monomial_cpp_instances(circle, params.s, params.r, FamilyId::CppClass(class), k)
}

/// f = x^(2^m+4) + x^(2^(m+1)+3) + x^(2^(m+2)+1) and
/// g = x^(2^m) + x^(2^(m+1)-1) + x^(2^(2m)-2^m+1), for odd m >= 3.
pub fn conjecture_trinomials(ctx: &FieldCtx) -> Result<(SparsePoly, SparsePoly)> {
    let m = ctx.m();
    require(m % 2 == 1 && m >= 3, || format!("m={m} must be odd and at least 3"))?;
    let p = |k: u32| 1i128 << k;
    let one = Elem::ONE;
    let f = SparsePoly::new(ctx, [(one, p(m) + 4), (one, p(m + 1) + 3), (one, p(m + 2) + 1)])?;
    let g = SparsePoly::new(ctx, [(one, p(m)), (one, p(m + 1) - 1), (one, p(2 * m) - p(m) + 1)])?;
    Ok((f, g))
}

pub fn gen_conjecture(ctx: &FieldCtx) -> Result<Vec<FamilyInstance>> {
    let (f, g) = conjecture_trinomials(ctx)?;
    Ok([(FamilyId::ConjF, f), (FamilyId::ConjG, g)]
        .into_iter()
        .map(|(id, poly)| FamilyInstance {
            provenance: Provenance::bare(id, ctx.m()),
            poly,
            claim: Claim::PP,
            niho: None,
        })
        .collect())
}

/// Runs the checks an instance's claim calls for: brute force (both maps for
/// CPP claims) and, for two-exponent binomials, the unit-circle argument.
pub fn verify_instance(circle: &UnitCircle, inst: &FamilyInstance) -> Result<Vec<VerificationReport>> {
    let ctx = circle.ctx();
    let mut reports = Vec::with_capacity(2);
    match inst.claim {
        Claim::PP => reports.push(is_permutation_brute(ctx, &inst.poly)),
        Claim::CPP => reports.push(is_cpp(ctx, &inst.poly)),
    }
    if let (Some(p), Some(u), FamilyId::Thm1 | FamilyId::Prop1Case(_)) =
        (inst.niho.as_ref(), inst.provenance.u, inst.provenance.family_id)
    {
        reports.push(unique_solution_check(circle, p, u)?);
    }
    Ok(reports)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyKind {
    Thm1,
    Prop1,
    Prop3,
    Cor2,
    CppClass,
    Conj,
}

impl FamilyKind {
    pub const ALL: [FamilyKind; 6] = [
        FamilyKind::Thm1,
        FamilyKind::Prop1,
        FamilyKind::Prop3,
        FamilyKind::Cor2,
        FamilyKind::CppClass,
        FamilyKind::Conj,
    ];
}

#[derive(Debug, Clone)]
pub struct ScanConfig {
    pub ms: Vec<u32>,
    pub families: Vec<FamilyKind>,
    /// Cap on sampled parameter tuples per family and m, where sampling applies.
    pub budget: usize,
    pub seed: u64,
    /// s and l range over [0, box_max], e over [1, box_max] in exhaustive binomial scans.
    pub box_max: i64,
    /// Upper bound on k1, k2, k3 and k.
    pub k_max: u32,
    /// Largest m for which binomial and linear families are enumerated exhaustively.
    pub exhaustive_max_m: u32,
    pub max_n: u32,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            ms: vec![3],
            families: FamilyKind::ALL.to_vec(),
            budget: 200,
            seed: 0,
            box_max: 9,
            k_max: 6,
            exhaustive_max_m: 3,
            max_n: crate::gf2n::DEFAULT_MAX_N,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ScanRecord {
    pub instance: FamilyInstance,
    /// Every parameter tuple that produced this polynomial; the first is `instance.provenance`.
    pub provenances: Vec<Provenance>,
    pub reports: Vec<VerificationReport>,
}

impl ScanRecord {
    pub fn verdict(&self) -> bool {
        self.reports.iter().all(|r| r.verdict)
    }

    pub fn elapsed_ms(&self) -> f64 {
        self.reports.iter().map(|r| r.elapsed.as_secs_f64() * 1e3).sum()
    }
}

fn rng_for(seed: u64, m: u32, kind: FamilyKind) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ ((m as u64) << 32) ^ ((kind as u64) << 48))
}

fn binomial_tuples(cfg: &ScanConfig, m: u32) -> Result<Vec<NihoParams>> {
    let passes = |p: &NihoParams| check_theorem1(p).all_ok();
    if m <= cfg.exhaustive_max_m {
        let mut out = Vec::new();
        for s in 0..=cfg.box_max {
            for l in 0..=cfg.box_max {
                for e in 1..=cfg.box_max {
                    let p = make_niho(m, s, l, e)?;
                    if passes(&p) {
                        out.push(p);
                    }
                }
            }
        }
        return Ok(out);
    }
    let mut rng = rng_for(cfg.seed, m, FamilyKind::Thm1);
    let top = (1i64 << m) + 1;
    let mut out: Vec<NihoParams> = Vec::new();
    let mut attempts = 0usize;
    while out.len() < cfg.budget && attempts < cfg.budget.saturating_mul(2000) {
        attempts += 1;
        let p = make_niho(m, rng.random_range(0..=top), rng.random_range(0..=top), rng.random_range(1..=top))?;
        if passes(&p) && !out.iter().any(|q| (q.s, q.l, q.e) == (p.s, p.l, p.e)) {
            out.push(p);
        }
    }
    Ok(out)
}

fn prop1_instances(cfg: &ScanConfig, circle: &UnitCircle) -> Result<Vec<FamilyInstance>> {
    let mut out = Vec::new();
    if circle.ctx().m() % 2 == 0 {
        return Ok(out);
    }
    for case in 1..=6u8 {
        let inner = if case <= 2 { cfg.k_max } else { 0 };
        for k1 in 0..=cfg.k_max {
            for k2 in 0..=inner {
                for k3 in 0..=inner {
                    match gen_prop1(circle, case, k1, k2, k3) {
                        Ok(v) => out.extend(v),
                        Err(Error::InvalidParams(_)) => {}
                        Err(e) => return Err(e),
                    }
                }
            }
        }
    }
    Ok(out)
}

fn linear_s_values(cfg: &ScanConfig, m: u32, kind: FamilyKind) -> Vec<i64> {
    // s and s + 2^m + 1 give the same exponent, so [0, 2^m] is complete.
    let all: Vec<i64> = (0..=(1i64 << m)).filter(|&s| check_prop3(m, s).all_ok()).collect();
    if m <= cfg.exhaustive_max_m.max(5) || all.len() <= cfg.budget {
        return all;
    }
    let mut rng = rng_for(cfg.seed, m, kind);
    let mut picked: Vec<i64> = all.choose_multiple(&mut rng, cfg.budget).copied().collect();
    picked.sort_unstable();
    picked
}

fn cpp_class_instances(cfg: &ScanConfig, circle: &UnitCircle) -> Result<Vec<FamilyInstance>> {
    let mut out = Vec::new();
    for class in 1..=6u8 {
        let ks: Vec<Option<u32>> =
            if class <= 2 { (1..=cfg.k_max).map(Some).collect() } else { vec![None] };
        for k in ks {
            match gen_cpp_class(circle, class, k) {
                Ok(v) => out.extend(v),
                Err(Error::InvalidParams(_)) => {}
                Err(e) => return Err(e),
            }
        }
    }
    Ok(out)
}

/// All instances the configuration selects, in canonical order (m, family, parameters, u).
pub fn generate_scan_instances(cfg: &ScanConfig, circle: &UnitCircle) -> Result<Vec<FamilyInstance>> {
    let m = circle.ctx().m();
    let mut kinds = cfg.families.clone();
    kinds.sort();
    kinds.dedup();
    let mut out = Vec::new();
    for kind in kinds {
        match kind {
            FamilyKind::Thm1 => {
                for p in binomial_tuples(cfg, m)? {
                    out.extend(gen_theorem1(circle, &p)?);
                }
            }
            FamilyKind::Prop1 => out.extend(prop1_instances(cfg, circle)?),
            FamilyKind::Prop3 => {
                for s in linear_s_values(cfg, m, kind) {
                    out.extend(gen_prop3(circle, s)?);
                }
            }
            FamilyKind::Cor2 => {
                for s in linear_s_values(cfg, m, kind) {
                    out.extend(gen_cpp_cor2(circle, s)?);
                }
            }
            FamilyKind::CppClass => out.extend(cpp_class_instances(cfg, circle)?),
            FamilyKind::Conj => {
                if m % 2 == 1 && m >= 3 {
                    out.extend(gen_conjecture(circle.ctx())?);
                }
            }
        }
    }
    Ok(out)
}

/// Generates, deduplicates and verifies every selected instance.
///
/// Instances whose polynomial and claim coincide are verified once and keep
/// all their provenances. A record with a false verdict is a soundness failure.
pub fn scan_families(cfg: &ScanConfig) -> Result<Vec<ScanRecord>> {
    let mut records = Vec::new();
    for &m in &cfg.ms {
        let ctx = FieldCtx::with_max_n(2 * m, cfg.max_n)?;
        let circle = UnitCircle::build(&ctx);
        let mut index: HashMap<(SparsePoly, Claim), usize> = HashMap::new();
        let mut pending: Vec<(FamilyInstance, Vec<Provenance>)> = Vec::new();
        for inst in generate_scan_instances(cfg, &circle)? {
            let key = (inst.poly.clone(), inst.claim);
            match index.get(&key) {
                Some(&i) => pending[i].1.push(inst.provenance.clone()),
                None => {
                    index.insert(key, pending.len());
                    let prov = inst.provenance.clone();
                    pending.push((inst, vec![prov]));
                }
            }
        }
        let verified: Vec<ScanRecord> = pending
            .into_par_iter()
            .map(|(instance, provenances)| {
                let reports = verify_instance(&circle, &instance)?;
                Ok(ScanRecord { instance, provenances, reports })
            })
            .collect::<Result<_>>()?;
        records.extend(verified);
    }
    Ok(records)
}

pub const CSV_HEADER: [&str; 14] = [
    "family_id", "m", "s", "l", "e", "k1", "k2", "k3", "u_hex", "d1", "d2", "claim", "verdict", "elapsed_ms",
];

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn csv_row(p: &Provenance, claim: Claim, verdict: bool, elapsed_ms: f64) -> Vec<String> {
    vec![
        p.family_id.to_string(),
        p.m.to_string(),
        opt(p.s),
        opt(p.l),
        opt(p.e),
        opt(p.k1),
        opt(p.k2),
        opt(p.k3),
        p.u.map(|u| format!("{u:x}")).unwrap_or_default(),
        opt(p.d1),
        opt(p.d2),
        format!("{claim:?}"),
        verdict.to_string(),
        format!("{elapsed_ms:.3}"),
    ]
}

/// One CSV row per distinct polynomial, carrying its first provenance.
pub fn write_scan_csv<W: Write>(records: &[ScanRecord], out: W, timing: bool) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        let ms = if timing { r.elapsed_ms() } else { 0.0 };
        w.write_record(csv_row(&r.instance.provenance, r.instance.claim, r.verdict(), ms))?;
    }
    w.flush()
}

pub fn record_json(r: &ScanRecord, timing: bool) -> serde_json::Value {
    serde_json::json!({
        "family_id": r.instance.provenance.family_id,
        "poly": r.instance.poly.to_string(),
        "claim": r.instance.claim,
        "verdict": r.verdict(),
        "provenances": r.provenances,
        "reports": r.reports.iter().map(|x| x.to_json(timing)).collect::<Vec<_>>(),
    })
}

pub fn write_scan_jsonl<W: Write>(records: &[ScanRecord], mut out: W, timing: bool) -> std::io::Result<()> {
    for r in records {
        writeln!(out, "{}", record_json(r, timing))?;
    }
    Ok(())
}
