//! Command-line front end.
//!
//! Exit codes: 0 all claims verified, 1 a claim failed, 2 engines disagree,
//! 64 usage error.

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::Error;
use crate::families::{
    self, gen_conjecture, gen_cpp_class, gen_cpp_cor2, gen_prop1, gen_prop3, gen_theorem1, record_json,
    verify_instance, FamilyInstance, FamilyKind, ScanConfig, ScanRecord,
};
use crate::gf2n::{FieldCtx, DEFAULT_MAX_N, HARD_MAX_N};
use crate::poly::SparsePoly;
use crate::spectra::{
    delta_lead, is_permutation_brute, is_pp_charsum, is_pp_delta_criterion, niho_congruent, DeltaOptions,
    DeltaPath, VerificationReport, DEFAULT_QUADRATIC_MAX_N,
};
use crate::unit_circle::UnitCircle;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CLAIM_FAILED: i32 = 1;
pub const EXIT_DISAGREEMENT: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

/// Environment variable raising the field-size cap.
pub const MAX_N_ENV: &str = "NIHO_PERM_MAX_N";

#[derive(Debug, Parser)]
#[command(name = "nihoperm", version, about = "Construct and verify Niho-type permutation polynomials over GF(2^2m)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Args)]
struct Common {
    /// Output format.
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Report elapsed_ms as 0 so output is byte-reproducible.
    #[arg(long)]
    no_timing: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check whether a sparse polynomial permutes GF(2^n).
    Verify(VerifyArgs),
    /// Emit the instances of one family for given parameters.
    Generate(GenerateArgs),
    /// Generate and brute-force verify whole families.
    Scan(ScanArgs),
    /// Brute-force the two conjectured trinomials.
    Conjecture(ConjectureArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EngineSel {
    Brute,
    Charsum,
    /// δ-criterion with direct character sums.
    Delta,
    /// δ-criterion through unit-circle solution counts.
    Niho,
    All,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Extension degree (even).
    #[arg(long)]
    n: u32,
    /// Terms as coeffhex:exp, comma separated, e.g. 1:10,2a:52.
    #[arg(long)]
    poly: String,
    /// Engines to run (default: brute plus the δ-criterion when it applies).
    #[arg(long, value_enum, value_delimiter = ',')]
    engine: Vec<EngineSel>,
    /// Claim complete permutation: verify f and f + x.
    #[arg(long)]
    cpp: bool,
    /// Lift the n <= 12 cap on engines doing 2^(2n) work.
    #[arg(long)]
    allow_large: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilySel {
    Thm1,
    Prop1,
    Prop3,
    Cor2,
    CppClass,
    Conj,
}

#[derive(Debug, Args)]
struct GenerateArgs {
    family: FamilySel,
    /// Case (prop1) or class (cpp-class), 1..=6.
    index: Option<u8>,
    #[arg(long)]
    m: u32,
    #[arg(long, allow_hyphen_values = true)]
    s: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    l: Option<i64>,
    #[arg(long)]
    e: Option<i64>,
    #[arg(long)]
    k1: Option<u32>,
    #[arg(long)]
    k2: Option<u32>,
    #[arg(long)]
    k3: Option<u32>,
    #[arg(long)]
    k: Option<u32>,
    /// Verify every emitted instance.
    #[arg(long)]
    check: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct ScanArgs {
    /// Comma-separated list of m values.
    #[arg(long)]
    m: String,
    /// all, or a comma-separated subset of thm1,prop1,prop3,cor2,cpp-class,conj.
    #[arg(long, default_value = "all")]
    families: String,
    /// Sampled parameter tuples per family and m beyond the exhaustive range.
    #[arg(long, default_value_t = 200)]
    budget: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// s, l, e range for exhaustive binomial scans.
    #[arg(long, default_value_t = 9)]
    box_max: i64,
    /// Upper bound for k1, k2, k3 and k.
    #[arg(long, default_value_t = 6)]
    k_max: u32,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct ConjectureArgs {
    /// Comma-separated list of odd m values.
    #[arg(long)]
    m: String,
    #[command(flatten)]
    common: Common,
}

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
    max_n: u32,
}

type CmdResult = Result<i32, String>;

fn usage(e: impl std::fmt::Display) -> String {
    e.to_string()
}

/// Reads the field-size cap from the environment.
pub fn max_n_from_env() -> u32 {
    std::env::var(MAX_N_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .map_or(DEFAULT_MAX_N, |n: u32| n.clamp(DEFAULT_MAX_N, HARD_MAX_N))
}

pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with_max_n(args, max_n_from_env(), out, err)
}

pub fn run_with_max_n<I, T>(args: I, max_n: u32, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let _ = write!(err, "{}", e.render());
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    EXIT_OK
                }
                _ => EXIT_USAGE,
            };
        }
    };
    let mut io = Io { out, err, max_n };
    let result = match cli.command {
        Command::Verify(a) => cmd_verify(&mut io, a),
        Command::Generate(a) => cmd_generate(&mut io, a),
        Command::Scan(a) => cmd_scan(&mut io, a),
        Command::Conjecture(a) => cmd_conjecture(&mut io, a),
    };
    match result {
        Ok(code) => code,
        Err(msg) => {
            let _ = writeln!(io.err, "error: {msg}");
            EXIT_USAGE
        }
    }
}

fn field(io: &Io, n: u32) -> Result<FieldCtx, String> {
    FieldCtx::with_max_n(n, io.max_n).map_err(|e| match e {
        Error::UnsupportedDegree { .. } if n % 2 == 0 && n > io.max_n => {
            format!("{e}; set {MAX_N_ENV} to raise the cap")
        }
        other => other.to_string(),
    })
}

fn parse_m_list(raw: &str) -> Result<Vec<u32>, String> {
    let ms: Vec<u32> = raw
        .split(',')
        .map(|t| t.trim().parse::<u32>().map_err(|_| format!("`{t}` is not a valid m")))
        .collect::<Result<_, _>>()?;
    if ms.is_empty() {
        return Err("empty m list".into());
    }
    Ok(ms)
}

fn write_io(r: std::io::Result<()>) -> Result<(), String> {
    r.map_err(|e| format!("write failed: {e}"))
}

fn report_line(target: &str, r: &VerificationReport, timing: bool) -> String {
    let ms = if timing { format!("{:.3}", r.elapsed.as_secs_f64() * 1e3) } else { "0".into() };
    let witness = r.witness.map(|w| format!("{}={}", w.kind(), w.hex())).unwrap_or_else(|| "-".into());
    format!("{target}\t{}\t{}\t{witness}\t{ms}ms", r.engine.name(), if r.verdict { "PP" } else { "not PP" })
}

fn cmd_verify(io: &mut Io, a: VerifyArgs) -> CmdResult {
    let format = a.common.format.unwrap_or(Format::Text);
    if format == Format::Csv {
        return Err("verify supports --format json or text".into());
    }
    let timing = !a.common.no_timing;
    let ctx = field(io, a.n)?;
    let f = SparsePoly::parse(&ctx, &a.poly).map_err(usage)?;
    let quad_cap = if a.allow_large { u32::MAX } else { DEFAULT_QUADRATIC_MAX_N };

    let mut targets = vec![("f", f.clone())];
    if a.cpp {
        targets.push(("f+x", f.plus_x(&ctx)));
    }

    let explicit = !a.engine.is_empty();
    let mut all_pp = true;
    let mut disagreement = false;
    for (name, target) in &targets {
        let mut reports = vec![];
        let wants = |e: EngineSel| a.engine.contains(&e) || a.engine.contains(&EngineSel::All);
        if !explicit || wants(EngineSel::Brute) {
            reports.push(is_permutation_brute(&ctx, target));
        }
        if wants(EngineSel::Charsum) {
            match is_pp_charsum(&ctx, target, quad_cap) {
                Ok(r) => reports.push(r),
                Err(e) if a.engine.contains(&EngineSel::All) => {
                    writeln!(io.err, "skipping charsum: {e}").ok();
                }
                Err(e) => return Err(e.to_string()),
            }
        }
        let applicable = delta_lead(&ctx, target).is_some();
        let congruent = niho_congruent(&ctx, &target.exponents());
        let mut delta_paths = vec![];
        if !explicit {
            if applicable && ctx.n() <= quad_cap {
                delta_paths.push(DeltaPath::Auto);
            }
        } else {
            let all = a.engine.contains(&EngineSel::All);
            if a.engine.contains(&EngineSel::Delta) || (all && applicable && ctx.n() <= quad_cap) {
                delta_paths.push(DeltaPath::Direct);
            }
            if a.engine.contains(&EngineSel::Niho) || (all && applicable && congruent) {
                delta_paths.push(DeltaPath::Niho);
            }
        }
        for path in delta_paths {
            let opts = DeltaOptions { path, max_n_direct: quad_cap, ..Default::default() };
            reports.push(is_pp_delta_criterion(&ctx, target, opts).map_err(usage)?);
        }

        let verdict = reports[0].verdict;
        if reports.iter().any(|r| r.verdict != verdict) {
            disagreement = true;
        }
        all_pp &= verdict;
        for r in &reports {
            let line = match format {
                Format::Json => {
                    let mut js = r.to_json(timing);
                    js["target"] = serde_json::Value::from(*name);
                    js["poly"] = serde_json::Value::from(target.to_string());
                    js.to_string()
                }
                _ => report_line(name, r, timing),
            };
            write_io(writeln!(io.out, "{line}"))?;
        }
    }
    if disagreement {
        writeln!(io.err, "engines disagree").ok();
        return Ok(EXIT_DISAGREEMENT);
    }
    Ok(if all_pp { EXIT_OK } else { EXIT_CLAIM_FAILED })
}

fn need<T>(v: Option<T>, flag: &str) -> Result<T, String> {
    v.ok_or_else(|| format!("--{flag} is required for this family"))
}

fn instance_json(inst: &FamilyInstance, reports: Option<&[VerificationReport]>, timing: bool) -> serde_json::Value {
    let mut js = serde_json::json!({
        "family_id": inst.provenance.family_id,
        "poly": inst.poly.to_string(),
        "claim": inst.claim,
        "provenance": inst.provenance,
    });
    if let Some(reports) = reports {
        js["verdict"] = reports.iter().all(|r| r.verdict).into();
        js["reports"] = reports.iter().map(|r| r.to_json(timing)).collect::<Vec<_>>().into();
    }
    js
}

fn cmd_generate(io: &mut Io, a: GenerateArgs) -> CmdResult {
    let format = a.common.format.unwrap_or(Format::Text);
    let timing = !a.common.no_timing;
    let ctx = field(io, 2 * a.m)?;
    let circle = UnitCircle::build(&ctx);
    let index = |what: &str| a.index.ok_or_else(|| format!("{what} number (1..=6) is required"));
    let instances = match a.family {
        FamilySel::Thm1 => {
            let p = crate::exponents::make_niho(a.m, need(a.s, "s")?, need(a.l, "l")?, need(a.e, "e")?)
                .map_err(usage)?;
            gen_theorem1(&circle, &p)
        }
        FamilySel::Prop1 => {
            let case = index("case")?;
            let (k2, k3) = if case <= 2 { (need(a.k2, "k2")?, need(a.k3, "k3")?) } else { (0, 0) };
            gen_prop1(&circle, case, need(a.k1, "k1")?, k2, k3)
        }
        FamilySel::Prop3 => gen_prop3(&circle, need(a.s, "s")?),
        FamilySel::Cor2 => gen_cpp_cor2(&circle, need(a.s, "s")?),
        FamilySel::CppClass => gen_cpp_class(&circle, index("class")?, a.k),
        FamilySel::Conj => gen_conjecture(&ctx),
    }
    .map_err(usage)?;

    let mut failed = false;
    let mut rows: Vec<(FamilyInstance, Option<Vec<VerificationReport>>)> = Vec::new();
    for inst in instances {
        let reports = if a.check { Some(verify_instance(&circle, &inst).map_err(usage)?) } else { None };
        failed |= reports.as_ref().is_some_and(|r| r.iter().any(|x| !x.verdict));
        rows.push((inst, reports));
    }
    match format {
        Format::Json => {
            for (inst, reports) in &rows {
                write_io(writeln!(io.out, "{}", instance_json(inst, reports.as_deref(), timing)))?;
            }
        }
        Format::Csv => {
            let records: Vec<ScanRecord> = rows
                .into_iter()
                .map(|(instance, reports)| ScanRecord {
                    provenances: vec![instance.provenance.clone()],
                    instance,
                    reports: reports.unwrap_or_default(),
                })
                .collect();
            write_io(families::write_scan_csv(&records, &mut *io.out, timing))?;
        }
        Format::Text => {
            for (inst, reports) in &rows {
                let status = match reports {
                    Some(r) if r.iter().all(|x| x.verdict) => " verified",
                    Some(_) => " FAILED",
                    None => "",
                };
                let u = inst.provenance.u.map(|u| format!(" u={u:x}")).unwrap_or_default();
                write_io(writeln!(
                    io.out,
                    "{}{u}\t{}\t{:?}{status}",
                    inst.provenance.family_id, inst.poly, inst.claim
                ))?;
            }
        }
    }
    Ok(if failed { EXIT_CLAIM_FAILED } else { EXIT_OK })
}

fn parse_families(raw: &str) -> Result<Vec<FamilyKind>, String> {
    if raw.trim() == "all" {
        return Ok(FamilyKind::ALL.to_vec());
    }
    raw.split(',')
        .map(|t| match t.trim() {
            "thm1" => Ok(FamilyKind::Thm1),
            "prop1" => Ok(FamilyKind::Prop1),
            "prop3" => Ok(FamilyKind::Prop3),
            "cor2" => Ok(FamilyKind::Cor2),
            "cpp-class" => Ok(FamilyKind::CppClass),
            "conj" => Ok(FamilyKind::Conj),
            other => Err(format!("unknown family `{other}`")),
        })
        .collect()
}

fn cmd_scan(io: &mut Io, a: ScanArgs) -> CmdResult {
    let format = a.common.format.unwrap_or(Format::Csv);
    let timing = !a.common.no_timing;
    let ms = parse_m_list(&a.m)?;
    for &m in &ms {
        field(io, 2 * m)?;
    }
    let cfg = ScanConfig {
        ms,
        families: parse_families(&a.families)?,
        budget: a.budget,
        seed: a.seed,
        box_max: a.box_max,
        k_max: a.k_max,
        max_n: io.max_n,
        ..Default::default()
    };
    let records = families::scan_families(&cfg).map_err(usage)?;
    match format {
        Format::Csv => write_io(families::write_scan_csv(&records, &mut *io.out, timing))?,
        Format::Json => write_io(families::write_scan_jsonl(&records, &mut *io.out, timing))?,
        Format::Text => {
            for r in &records {
                write_io(writeln!(io.out, "{}", record_json(r, timing)))?;
            }
        }
    }
    let failures: Vec<&ScanRecord> = records.iter().filter(|r| !r.verdict()).collect();
    let provenances: usize = records.iter().map(|r| r.provenances.len()).sum();
    writeln!(
        io.err,
        "scan: instances={} provenances={provenances} failures={}",
        records.len(),
        failures.len()
    )
    .ok();
    for r in &failures {
        writeln!(io.err, "SOUNDNESS FAILURE: {} {}", r.instance.provenance.family_id, r.instance.poly).ok();
    }
    Ok(if failures.is_empty() { EXIT_OK } else { EXIT_CLAIM_FAILED })
}

fn cmd_conjecture(io: &mut Io, a: ConjectureArgs) -> CmdResult {
    let format = a.common.format.unwrap_or(Format::Text);
    if format == Format::Csv {
        return Err("conjecture supports --format json or text".into());
    }
    let timing = !a.common.no_timing;
    let ms = parse_m_list(&a.m)?;
    let mut ctxs = Vec::new();
    for &m in &ms {
        if m % 2 == 0 || m < 3 {
            return Err(format!("m={m} must be odd and at least 3"));
        }
        ctxs.push(field(io, 2 * m)?);
    }
    let mut all_pp = true;
    if format == Format::Text {
        write_io(writeln!(io.out, "m\tname\tpoly\tverdict\telapsed"))?;
    }
    for ctx in &ctxs {
        for inst in gen_conjecture(ctx).map_err(usage)? {
            let r = is_permutation_brute(ctx, &inst.poly);
            all_pp &= r.verdict;
            let name = if inst.provenance.family_id == families::FamilyId::ConjF { "f" } else { "g" };
            let line = match format {
                Format::Json => {
                    let mut js = r.to_json(timing);
                    js["m"] = ctx.m().into();
                    js["name"] = name.into();
                    js["poly"] = inst.poly.to_string().into();
                    js.to_string()
                }
                _ => {
                    let ms = if timing { format!("{:.1}ms", r.elapsed.as_secs_f64() * 1e3) } else { "0ms".into() };
                    format!("{}\t{name}\t{}\t{}\t{ms}", ctx.m(), inst.poly, if r.verdict { "PP" } else { "not PP" })
                }
            };
            write_io(writeln!(io.out, "{line}"))?;
        }
    }
    Ok(if all_pp { EXIT_OK } else { EXIT_CLAIM_FAILED })
}
