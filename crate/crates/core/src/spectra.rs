//! Permutation verification engines.
//!
//! * brute force: evaluate everywhere and look for a repeated value;
//! * character sums: f permutes GF(2^n) iff sum_x (-1)^Tr(γ f(x)) = 0 for all γ ≠ 0;
//! * the δ-criterion: when gcd(d1, 2^n-1) = 1 the γ-loop becomes a δ-loop over
//!   x^d1 + sum u_i δ^(d1-d_i) x^d_i, and for Niho-congruent exponents each of
//!   those sums equals (N - 1)·2^m where N counts unit-circle solutions.
//!
//! All sums are exact integers. Loops over γ and δ run in parallel and always
//! report the smallest failing index.

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exponents::{gcd, mod_inverse, NihoParams};
use crate::families::check_theorem1;
use crate::gf2n::{Elem, FieldCtx, FieldSpec, LinearMap};
use crate::poly::SparsePoly;
use crate::unit_circle::UnitCircle;

/// Default cap on n for engines doing 2^(2n) work.
pub const DEFAULT_QUADRATIC_MAX_N: u32 = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Engine {
    Brute,
    Charsum,
    DeltaCriterion,
    Niho,
    UniqueSolution,
}

impl Engine {
    pub fn name(self) -> &'static str {
        match self {
            Engine::Brute => "brute",
            Engine::Charsum => "charsum",
            Engine::DeltaCriterion => "delta_criterion",
            Engine::Niho => "niho",
            Engine::UniqueSolution => "unique_solution",
        }
    }
}

/// Which step of the unit-circle argument broke for a given δ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProofStep {
    /// w = u·δ^(d1-d2) is not on the unit circle.
    WOffCircle,
    /// w·λ^d2 + λ^d1 vanishes for some λ ∈ U.
    FirstFactorVanishes,
    /// w·λ^(d1+d2) = 1 does not have exactly one solution.
    SolutionCount(usize),
    /// The unique solution is not w^(-1/(d1+d2)).
    WrongRoot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Witness {
    /// f(x1) = f(x2) with x1 < x2, the earliest such x2.
    Collision { x1: Elem, x2: Elem },
    /// f(x1) + x1 = f(x2) + x2.
    ShiftedCollision { x1: Elem, x2: Elem },
    Gamma { gamma: Elem, sum: i64 },
    Delta { delta: Elem, sum: i64 },
    Proof { delta: Elem, step: ProofStep },
}

impl Witness {
    pub fn kind(&self) -> &'static str {
        match self {
            Witness::Collision { .. } => "collision",
            Witness::ShiftedCollision { .. } => "collision_f_plus_x",
            Witness::Gamma { .. } => "gamma",
            Witness::Delta { .. } => "delta",
            Witness::Proof { step, .. } => match step {
                ProofStep::WOffCircle => "proof_w_off_circle",
                ProofStep::FirstFactorVanishes => "proof_first_factor_vanishes",
                ProofStep::SolutionCount(_) => "proof_solution_count",
                ProofStep::WrongRoot => "proof_wrong_root",
            },
        }
    }

    pub fn hex(&self) -> String {
        match self {
            Witness::Collision { x1, x2 } | Witness::ShiftedCollision { x1, x2 } => {
                format!("{x1:x},{x2:x}")
            }
            Witness::Gamma { gamma, .. } => format!("{gamma:x}"),
            Witness::Delta { delta, .. } | Witness::Proof { delta, .. } => format!("{delta:x}"),
        }
    }

    pub fn sum(&self) -> Option<i64> {
        match self {
            Witness::Gamma { sum, .. } | Witness::Delta { sum, .. } => Some(*sum),
            Witness::Proof { step: ProofStep::SolutionCount(c), .. } => Some(*c as i64),
            _ => None,
        }
    }
}

/// Outcome of one engine run. `witness` is present exactly when `verdict` is false.
#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub engine: Engine,
    pub verdict: bool,
    pub witness: Option<Witness>,
    pub elapsed: Duration,
    pub field: FieldSpec,
}

#[derive(Serialize)]
struct ReportJson<'a> {
    engine: &'static str,
    verdict: bool,
    witness: Option<String>,
    witness_kind: Option<&'static str>,
    witness_sum: Option<i64>,
    elapsed_ms: f64,
    field: &'a FieldSpec,
}

impl VerificationReport {
    fn new(ctx: &FieldCtx, engine: Engine, witness: Option<Witness>, start: Instant) -> Self {
        VerificationReport {
            engine,
            verdict: witness.is_none(),
            witness,
            elapsed: start.elapsed(),
            field: ctx.spec(),
        }
    }

    /// JSON object; `timing = false` pins `elapsed_ms` to 0 for reproducible output.
    pub fn to_json(&self, timing: bool) -> serde_json::Value {
        let elapsed_ms = if timing { self.elapsed.as_secs_f64() * 1e3 } else { 0.0 };
        serde_json::to_value(ReportJson {
            engine: self.engine.name(),
            verdict: self.verdict,
            witness: self.witness.map(|w| w.hex()),
            witness_kind: self.witness.map(|w| w.kind()),
            witness_sum: self.witness.and_then(|w| w.sum()),
            elapsed_ms,
            field: &self.field,
        })
        .expect("report serializes")
    }
}

/// Earliest x2 (in bit order) whose value repeats, with the first x1 sharing it.
fn first_collision(values: &[u32]) -> Option<(Elem, Elem, u32)> {
    let mut seen = vec![0u64; values.len().div_ceil(64)];
    for (x2, &v) in values.iter().enumerate() {
        let (word, bit) = (v as usize / 64, v % 64);
        if seen[word] >> bit & 1 == 1 {
            let x1 = values.iter().position(|&w| w == v).expect("value was seen");
            return Some((elem(x1), elem(x2), v));
        }
        seen[word] |= 1 << bit;
    }
    None
}

#[inline]
fn elem(i: usize) -> Elem {
    Elem::from_index(i)
}

pub fn is_permutation_brute(ctx: &FieldCtx, f: &SparsePoly) -> VerificationReport {
    let start = Instant::now();
    let values = f.value_table(ctx);
    let witness = first_collision(&values).map(|(x1, x2, _)| Witness::Collision { x1, x2 });
    VerificationReport::new(ctx, Engine::Brute, witness, start)
}

/// f and f + x both permute the field.
pub fn is_cpp(ctx: &FieldCtx, f: &SparsePoly) -> VerificationReport {
    let start = Instant::now();
    let values = f.value_table(ctx);
    let mut witness = first_collision(&values).map(|(x1, x2, _)| Witness::Collision { x1, x2 });
    if witness.is_none() {
        let shifted: Vec<u32> = values.iter().enumerate().map(|(x, &v)| v ^ x as u32).collect();
        witness =
            first_collision(&shifted).map(|(x1, x2, _)| Witness::ShiftedCollision { x1, x2 });
    }
    VerificationReport::new(ctx, Engine::Brute, witness, start)
}

fn signed_sum_over_table(values: &[u32], mask: u32) -> i64 {
    let odd = values.iter().filter(|&&v| (v & mask).count_ones() & 1 == 1).count() as i64;
    values.len() as i64 - 2 * odd
}

/// sum_x (-1)^Tr(γ g(x)), exactly.
pub fn char_sum(ctx: &FieldCtx, g: &SparsePoly, gamma: Elem) -> i64 {
    signed_sum_over_table(&g.value_table(ctx), ctx.trace_form(gamma))
}

/// Character sums at every γ, indexed by γ's bit pattern.
pub fn char_sum_spectrum(ctx: &FieldCtx, g: &SparsePoly) -> Vec<i64> {
    let values = g.value_table(ctx);
    ctx.elements()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|gamma| signed_sum_over_table(&values, ctx.trace_form(gamma)))
        .collect()
}

pub fn is_pp_charsum(ctx: &FieldCtx, g: &SparsePoly, max_n: u32) -> Result<VerificationReport> {
    if ctx.n() > max_n {
        return Err(Error::SizeCapExceeded { n: ctx.n(), cap: max_n });
    }
    let start = Instant::now();
    let values = g.value_table(ctx);
    let witness = (1..ctx.size())
        .into_par_iter()
        .map(|i| {
            let gamma = elem(i);
            (gamma, signed_sum_over_table(&values, ctx.trace_form(gamma)))
        })
        .find_first(|&(_, sum)| sum != 0)
        .map(|(gamma, sum)| Witness::Gamma { gamma, sum });
    Ok(VerificationReport::new(ctx, Engine::Charsum, witness, start))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DeltaPath {
    /// Unit-circle counting when the exponents are Niho-congruent, direct sums otherwise.
    #[default]
    Auto,
    Direct,
    Niho,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DeltaOptions {
    /// Exponent playing the role of d1; defaults to the smallest exponent coprime to 2^n - 1.
    pub lead: Option<u64>,
    pub path: DeltaPath,
    /// Cap on n for the direct path.
    pub max_n_direct: u32,
}

impl Default for DeltaOptions {
    fn default() -> Self {
        DeltaOptions { lead: None, path: DeltaPath::Auto, max_n_direct: DEFAULT_QUADRATIC_MAX_N }
    }
}

/// Whether the δ-criterion applies to `f`: some exponent is coprime to 2^n - 1.
pub fn delta_lead(ctx: &FieldCtx, f: &SparsePoly) -> Option<u64> {
    f.terms().iter().map(|t| t.exp).find(|&d| gcd(d, ctx.order()) == 1)
}

/// True iff every exponent is congruent to the first modulo 2^m - 1.
pub fn niho_congruent(ctx: &FieldCtx, exps: &[u64]) -> bool {
    let q = (1u64 << ctx.m()) - 1;
    exps.iter().all(|&d| d % q == exps[0] % q)
}

pub fn is_pp_delta_criterion(
    ctx: &FieldCtx,
    f: &SparsePoly,
    opts: DeltaOptions,
) -> Result<VerificationReport> {
    let start = Instant::now();
    let order = ctx.order();
    let lead = match opts.lead {
        Some(d) => {
            let d = crate::exponents::canonical_exponent(d as i128, order);
            if !f.terms().iter().any(|t| t.exp == d) {
                return Err(Error::InvalidParams(format!("x^{d} is not a term of the polynomial")));
            }
            d
        }
        None => delta_lead(ctx, f).ok_or(Error::LeadNotCoprime {
            d1: f.terms().first().map_or(0, |t| t.exp),
            order,
        })?,
    };
    if gcd(lead, order) != 1 {
        return Err(Error::LeadNotCoprime { d1: lead, order });
    }
    let lead_coeff = f.terms().iter().find(|t| t.exp == lead).expect("lead is a term").coeff;
    let normalized = f.scale(ctx, ctx.inv(lead_coeff).expect("coefficients are nonzero"));
    let others: Vec<(Elem, u64)> =
        normalized.terms().iter().filter(|t| t.exp != lead).map(|t| (t.coeff, t.exp)).collect();
    let mut exps = vec![lead];
    exps.extend(others.iter().map(|&(_, d)| d));

    let congruent = niho_congruent(ctx, &exps);
    let use_niho = match opts.path {
        DeltaPath::Auto => congruent,
        DeltaPath::Direct => false,
        DeltaPath::Niho => true,
    };
    // w_i = u_i · δ^(d1 - d_i)
    let twists: Vec<u64> =
        others.iter().map(|&(_, d)| (lead as i128 - d as i128).rem_euclid(order as i128) as u64).collect();
    let weights = |delta: Elem| -> Vec<Elem> {
        others.iter().zip(&twists).map(|(&(u, _), &k)| ctx.mul(u, ctx.pow(delta, k))).collect()
    };

    let deltas: Vec<Elem> = ctx.nonzero().collect();
    let witness = if use_niho {
        let circle = UnitCircle::build(ctx);
        let niho = NihoSum::new(&circle, &exps)?;
        deltas
            .into_par_iter()
            .map(|delta| (delta, niho.exp_sum(&weights(delta))))
            .find_first(|&(_, sum)| sum != 0)
    } else {
        if ctx.n() > opts.max_n_direct {
            return Err(Error::SizeCapExceeded { n: ctx.n(), cap: opts.max_n_direct });
        }
        let tables: Vec<Vec<u32>> = exps
            .iter()
            .map(|&d| SparsePoly::monomial(ctx, Elem::ONE, d as i128).map(|p| p.value_table(ctx)))
            .collect::<Result<_>>()?;
        let lead_mask = ctx.trace_form(Elem::ONE);
        deltas
            .into_par_iter()
            .map(|delta| {
                let masks: Vec<u32> = std::iter::once(lead_mask)
                    .chain(weights(delta).into_iter().map(|w| ctx.trace_form(w)))
                    .collect();
                let odd = (0..ctx.size())
                    .filter(|&x| {
                        let bits = tables.iter().zip(&masks).fold(0u32, |acc, (t, &mk)| acc ^ (t[x] & mk));
                        bits.count_ones() & 1 == 1
                    })
                    .count() as i64;
                (delta, ctx.size() as i64 - 2 * odd)
            })
            .find_first(|&(_, sum)| sum != 0)
    };
    let engine = if use_niho { Engine::Niho } else { Engine::DeltaCriterion };
    let witness = witness.map(|(delta, sum)| Witness::Delta { delta, sum });
    Ok(VerificationReport::new(ctx, engine, witness, start))
}

/// Counts λ ∈ U with h(λ) + h(λ)^(2^m) = 0, h(λ) = λ^d1 + sum w_i λ^d_i,
/// for a fixed exponent list and varying weights.
pub struct NihoSum<'a> {
    circle: &'a UnitCircle,
    /// powers[i][j] = U[j]^d_i
    powers: Vec<Vec<Elem>>,
    /// x ↦ x + x^(2^m)
    relative_trace: LinearMap,
}

impl<'a> NihoSum<'a> {
    pub fn new(circle: &'a UnitCircle, exps: &[u64]) -> Result<Self> {
        let ctx = circle.ctx();
        let Some(&lead) = exps.first() else {
            return Err(Error::InvalidParams("empty exponent list".into()));
        };
        if gcd(lead, ctx.order()) != 1 {
            return Err(Error::LeadNotCoprime { d1: lead, order: ctx.order() });
        }
        let q = (1u64 << ctx.m()) - 1;
        if let Some(&bad) = exps.iter().find(|&&d| d % q != lead % q) {
            return Err(Error::NotNihoCongruent { lead, exp: bad, modulus: q });
        }
        let powers = exps
            .iter()
            .map(|&d| circle.elements().iter().map(|&l| ctx.pow(l, d)).collect())
            .collect();
        let relative_trace = ctx.linear_map(|x| ctx.add(x, ctx.frobenius(x, ctx.m())));
        Ok(NihoSum { circle, powers, relative_trace })
    }

    pub fn count(&self, weights: &[Elem]) -> u64 {
        assert_eq!(weights.len() + 1, self.powers.len(), "one weight per non-leading exponent");
        let ctx = self.circle.ctx();
        (0..self.circle.elements().len())
            .filter(|&j| {
                let h = weights
                    .iter()
                    .zip(&self.powers[1..])
                    .fold(self.powers[0][j], |acc, (&w, p)| ctx.add(acc, ctx.mul(w, p[j])));
                self.relative_trace.apply(h).is_zero()
            })
            .count() as u64
    }

    /// (N - 1)·2^m
    pub fn exp_sum(&self, weights: &[Elem]) -> i64 {
        (self.count(weights) as i64 - 1) << self.circle.ctx().m()
    }
}

fn check_weights(exps: &[u64], weights: &[Elem]) -> Result<()> {
    if exps.is_empty() || weights.len() + 1 != exps.len() {
        return Err(Error::InvalidParams(format!(
            "{} exponents need {} weights, got {}",
            exps.len(),
            exps.len().saturating_sub(1),
            weights.len()
        )));
    }
    Ok(())
}

pub fn count_unit_circle_solutions(circle: &UnitCircle, exps: &[u64], weights: &[Elem]) -> Result<u64> {
    check_weights(exps, weights)?;
    Ok(NihoSum::new(circle, exps)?.count(weights))
}

pub fn exp_sum_via_niho(circle: &UnitCircle, exps: &[u64], weights: &[Elem]) -> Result<i64> {
    check_weights(exps, weights)?;
    Ok(NihoSum::new(circle, exps)?.exp_sum(weights))
}

/// Walks the unit-circle argument for x^d1 + u x^d2 at every δ ≠ 0: w = u δ^(d1-d2)
/// lies on U, the factor w λ^d2 + λ^d1 never vanishes on U, and w λ^(d1+d2) = 1
/// has exactly the root w^(-1/(d1+d2)) there.
pub fn unique_solution_check(circle: &UnitCircle, p: &NihoParams, u: Elem) -> Result<VerificationReport> {
    let start = Instant::now();
    let ctx = circle.ctx();
    if ctx.n() != p.n() {
        return Err(Error::InvalidParams(format!("params are for n={}, field has n={}", p.n(), ctx.n())));
    }
    let conds = check_theorem1(p);
    if let Some(msg) = conds.failure() {
        return Err(Error::ConditionFailed(msg));
    }
    if !circle.contains(u) || circle.in_power_subgroup(u, conds.r) {
        return Err(Error::ConditionFailed("condition (iii) u∈U\\U^r failed".into()));
    }
    let order = ctx.order();
    let circle_order = circle.order();
    let twist = (p.d1 as i128 - p.d2 as i128).rem_euclid(order as i128) as u64;
    let sum_exp = p.d1 + p.d2;
    let inv = mod_inverse(sum_exp as i128, circle_order).expect("condition (ii) makes d1+d2 invertible");

    let pw = |d: u64| -> Vec<Elem> { circle.elements().iter().map(|&l| ctx.pow(l, d)).collect() };
    let (lam_d1, lam_d2, lam_sum) = (pw(p.d1), pw(p.d2), pw(sum_exp));

    let check = |delta: Elem| -> Option<ProofStep> {
        let w = ctx.mul(u, ctx.pow(delta, twist));
        if !circle.contains(w) {
            return Some(ProofStep::WOffCircle);
        }
        if lam_d1.iter().zip(&lam_d2).any(|(&a, &b)| ctx.mul(w, b) == a) {
            return Some(ProofStep::FirstFactorVanishes);
        }
        let roots: Vec<usize> = (0..lam_sum.len()).filter(|&j| ctx.mul(w, lam_sum[j]) == Elem::ONE).collect();
        if roots.len() != 1 {
            return Some(ProofStep::SolutionCount(roots.len()));
        }
        let expected = ctx.pow(w, circle_order - inv);
        (circle.elements()[roots[0]] != expected).then_some(ProofStep::WrongRoot)
    };
    let witness = ctx
        .nonzero()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|delta| (delta, check(delta)))
        .find_first(|(_, step)| step.is_some())
        .map(|(delta, step)| Witness::Proof { delta, step: step.expect("filtered") });
    Ok(VerificationReport::new(ctx, Engine::UniqueSolution, witness, start))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponents::make_niho;

    fn gf(n: u32) -> FieldCtx {
        FieldCtx::new(n).unwrap()
    }

    fn poly(ctx: &FieldCtx, s: &str) -> SparsePoly {
        SparsePoly::parse(ctx, s).unwrap()
    }

    /// Collision oracle without bitsets: sort and compare neighbours.
    fn is_bijective_by_sorting(ctx: &FieldCtx, f: &SparsePoly) -> bool {
        let mut v: Vec<_> = ctx.elements().map(|x| f.eval(ctx, x)).collect();
        v.sort();
        v.dedup();
        v.len() == ctx.size()
    }

    fn non_cube(ctx: &FieldCtx) -> Elem {
        UnitCircle::build(ctx).complement_coset(3)[0]
    }

    #[test]
    fn brute_examples() {
        let f4 = gf(4);
        assert!(is_permutation_brute(&f4, &poly(&f4, "1:1")).verdict);
        let cube = is_permutation_brute(&f4, &poly(&f4, "1:3"));
        assert!(!cube.verdict);
        let Some(Witness::Collision { x1, x2 }) = cube.witness else { panic!("expected collision") };
        assert!(x1 < x2);
        assert_eq!(f4.pow(x1, 3), f4.pow(x2, 3));
        // earliest repeated value, found by a quadratic scan
        let vals: Vec<_> = f4.elements().map(|x| f4.pow(x, 3)).collect();
        let first = (1..16).find(|&j| vals[..j].contains(&vals[j])).unwrap();
        assert_eq!(x2.bits() as usize, first);

        let f6 = gf(6);
        let u = non_cube(&f6);
        let p = SparsePoly::new(&f6, [(Elem::ONE, 10), (u, 52)]).unwrap();
        assert!(is_permutation_brute(&f6, &p).verdict);
    }

    #[test]
    fn brute_matches_sorting_oracle() {
        let f = gf(6);
        for e in 1..63 {
            for c in [1u64, 5, 0x2a] {
                let p = SparsePoly::new(&f, [(Elem::ONE, e), (f.elem(c).unwrap(), 2 * e + 1)]).unwrap();
                assert_eq!(is_permutation_brute(&f, &p).verdict, is_bijective_by_sorting(&f, &p), "e={e} c={c}");
            }
        }
    }

    #[test]
    fn char_sum_examples() {
        let f4 = gf(4);
        let cube = poly(&f4, "1:3");
        assert_eq!(char_sum(&f4, &cube, Elem::ZERO), 16);
        let id = poly(&f4, "1:1");
        for g in f4.nonzero() {
            assert_eq!(char_sum(&f4, &id, g), 0);
        }
        assert!(f4.nonzero().any(|g| char_sum(&f4, &cube, g) != 0));
    }

    #[test]
    fn char_sum_matches_definition() {
        let f = gf(6);
        let p = poly(&f, "3:5,1:17");
        for g in f.elements() {
            let direct: i64 = f
                .elements()
                .map(|x| if f.trace(f.mul(g, p.eval(&f, x)), 1).unwrap() == Elem::ONE { -1 } else { 1 })
                .sum();
            assert_eq!(char_sum(&f, &p, g), direct);
        }
    }

    #[test]
    fn charsum_engine() {
        let f4 = gf(4);
        assert!(is_pp_charsum(&f4, &poly(&f4, "1:1"), 12).unwrap().verdict);
        let r = is_pp_charsum(&f4, &poly(&f4, "1:3"), 12).unwrap();
        assert!(!r.verdict);
        assert!(matches!(r.witness, Some(Witness::Gamma { sum, .. }) if sum != 0));
        let f14 = gf(14);
        assert_eq!(
            is_pp_charsum(&f14, &poly(&f14, "1:1"), DEFAULT_QUADRATIC_MAX_N),
            Err(Error::SizeCapExceeded { n: 14, cap: 12 })
        );
    }

    #[test]
    fn delta_criterion_examples() {
        let f6 = gf(6);
        let mono = poly(&f6, "1:5");
        assert!(is_pp_delta_criterion(&f6, &mono, DeltaOptions::default()).unwrap().verdict);

        let u = non_cube(&f6);
        let p = SparsePoly::new(&f6, [(Elem::ONE, 10), (u, 52)]).unwrap();
        for path in [DeltaPath::Auto, DeltaPath::Direct, DeltaPath::Niho] {
            let r = is_pp_delta_criterion(&f6, &p, DeltaOptions { path, ..Default::default() }).unwrap();
            assert!(r.verdict, "{path:?}");
        }
        let one = poly(&f6, "1:10,1:52");
        let brute = is_permutation_brute(&f6, &one).verdict;
        for path in [DeltaPath::Direct, DeltaPath::Niho] {
            let r = is_pp_delta_criterion(&f6, &one, DeltaOptions { path, ..Default::default() }).unwrap();
            assert_eq!(r.verdict, brute);
        }
    }

    #[test]
    fn delta_criterion_errors() {
        let f6 = gf(6);
        assert!(matches!(
            is_pp_delta_criterion(&f6, &poly(&f6, "1:3,1:9"), DeltaOptions::default()),
            Err(Error::LeadNotCoprime { .. })
        ));
        let opts = DeltaOptions { lead: Some(3), ..Default::default() };
        assert!(matches!(is_pp_delta_criterion(&f6, &poly(&f6, "1:3,1:5"), opts), Err(Error::LeadNotCoprime { .. })));
        let opts = DeltaOptions { path: DeltaPath::Niho, ..Default::default() };
        assert!(matches!(
            is_pp_delta_criterion(&f6, &poly(&f6, "1:5,1:6"), opts),
            Err(Error::NotNihoCongruent { .. })
        ));
    }

    #[test]
    fn delta_criterion_normalizes_lead_coefficient() {
        let f6 = gf(6);
        let u = non_cube(&f6);
        let c = f6.elem(0x21).unwrap();
        let p = SparsePoly::new(&f6, [(c, 10), (f6.mul(c, u), 52)]).unwrap();
        assert!(is_permutation_brute(&f6, &p).verdict);
        assert!(is_pp_delta_criterion(&f6, &p, DeltaOptions::default()).unwrap().verdict);
    }

    #[test]
    fn niho_counting_examples() {
        let f6 = gf(6);
        let circle = UnitCircle::build(&f6);
        assert_eq!(count_unit_circle_solutions(&circle, &[10, 52], &[Elem::ZERO]).unwrap(), 1);
        assert_eq!(exp_sum_via_niho(&circle, &[10], &[]).unwrap(), 0);
        assert!(count_unit_circle_solutions(&circle, &[10, 51], &[Elem::ONE]).is_err());
        assert!(count_unit_circle_solutions(&circle, &[9, 51], &[Elem::ONE]).is_err());
        assert!(count_unit_circle_solutions(&circle, &[10, 52], &[]).is_err());

        let p = make_niho(3, 1, 3, 3).unwrap();
        let u = non_cube(&f6);
        for delta in f6.nonzero() {
            let w = f6.mul(u, f6.pow(delta, (p.d1 + 63 - p.d2) % 63));
            assert_eq!(count_unit_circle_solutions(&circle, &[p.d1, p.d2], &[w]).unwrap(), 1);
        }
    }

    #[test]
    fn niho_sum_reaches_minus_two_to_m_when_no_solutions() {
        // N = 0 gives -2^m; look for such weights by scanning.
        let f6 = gf(6);
        let circle = UnitCircle::build(&f6);
        let w = f6
            .elements()
            .find(|&w| count_unit_circle_solutions(&circle, &[10, 52], &[w]).unwrap() == 0)
            .expect("some weight leaves no solutions");
        assert_eq!(exp_sum_via_niho(&circle, &[10, 52], &[w]).unwrap(), -8);
        let g = SparsePoly::new(&f6, [(Elem::ONE, 10), (w, 52)]).unwrap();
        assert_eq!(char_sum(&f6, &g, Elem::ONE), -8);
    }

    #[test]
    fn unique_solution_examples() {
        let f6 = gf(6);
        let circle = UnitCircle::build(&f6);
        let p = make_niho(3, 1, 3, 3).unwrap();
        for u in circle.complement_coset(3) {
            let r = unique_solution_check(&circle, &p, u).unwrap();
            assert!(r.verdict);
            assert_eq!(r.engine, Engine::UniqueSolution);
        }
        assert!(matches!(unique_solution_check(&circle, &p, Elem::ONE), Err(Error::ConditionFailed(_))));
        let bad = make_niho(3, 1, 1, 3).unwrap();
        assert!(matches!(unique_solution_check(&circle, &bad, non_cube(&f6)), Err(Error::ConditionFailed(_))));
    }

    #[test]
    fn cpp_examples() {
        let f4 = gf(4);
        let id = is_cpp(&f4, &poly(&f4, "1:1"));
        assert!(!id.verdict);
        assert!(matches!(id.witness, Some(Witness::ShiftedCollision { .. })));
        assert!(!is_cpp(&f4, &poly(&f4, "1:2")).verdict);

        let f6 = gf(6);
        for u in UnitCircle::build(&f6).complement_coset(3) {
            let p = SparsePoly::monomial(&f6, f6.inv(u).unwrap(), 43).unwrap();
            assert!(is_cpp(&f6, &p).verdict);
        }
    }

    #[test]
    fn report_json_shape() {
        let f4 = gf(4);
        let r = is_permutation_brute(&f4, &poly(&f4, "1:3"));
        let js = r.to_json(false);
        assert_eq!(js["engine"], "brute");
        assert_eq!(js["verdict"], false);
        assert_eq!(js["witness_kind"], "collision");
        assert_eq!(js["elapsed_ms"], 0.0);
        assert_eq!(js["field"]["irreducible_hex"], "13");
        let ok = is_permutation_brute(&f4, &poly(&f4, "1:1")).to_json(false);
        assert!(ok["witness"].is_null());
    }
}
