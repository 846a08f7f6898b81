//! Resolution of CLI arguments into library inputs: field context, form,
//! level values, and budgets (with environment overrides).

use clap::ValueEnum;
use qfcodes::field::{ExtContext, FieldContext, FieldElement};
use qfcodes::forms::{Convention, FormClass, QuadForm};
use qfcodes::EnumBudget;
use serde::Serialize;

use crate::{BudgetArgs, CliError, FormArgs};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConventionPolicy {
    /// Gate on the printed sign convention.
    Paper,
    /// Gate on the reflected convention.
    Reflected,
    /// Report both; gate on the convention the oracle sweep adjudicated
    /// (the reflected one).
    Adjudicate,
}

impl ConventionPolicy {
    pub fn gating_convention(self) -> Convention {
        match self {
            ConventionPolicy::Paper => Convention::Paper,
            ConventionPolicy::Reflected | ConventionPolicy::Adjudicate => Convention::Reflected,
        }
    }
}

/// Echo of the resolved parameters for reports and cache keys.
#[derive(Debug, Clone, Serialize)]
pub struct Params {
    pub p: u32,
    pub e: u32,
    pub m: usize,
    pub form: FormJson,
    pub a: u32,
}

/// JSON shape of a form: field spec plus 1-based coefficient triples.
#[derive(Debug, Clone, Serialize)]
pub struct FormJson {
    pub field: FieldSpec,
    pub m: usize,
    pub coeffs: Vec<(usize, usize, u32)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FieldSpec {
    pub p: u32,
    pub e: u32,
}

pub fn form_json(form: &QuadForm) -> FormJson {
    FormJson {
        field: FieldSpec {
            p: form.ctx().p(),
            e: form.ctx().e(),
        },
        m: form.m(),
        coeffs: form
            .entries()
            .into_iter()
            .map(|(i, j, c)| (i + 1, j + 1, c.encoding()))
            .collect(),
    }
}

pub fn field_context(args: &FormArgs) -> Result<FieldContext, CliError> {
    FieldContext::new(args.p, args.e).map_err(|e| CliError::invalid(e.to_string()))
}

/// Build the form from whichever source was given.
pub fn resolve_form(args: &FormArgs, budget: &EnumBudget) -> Result<QuadForm, CliError> {
    let ctx = field_context(args)?;
    if args.m == 0 {
        return Err(CliError::invalid("m must be at least 1"));
    }
    match (&args.coeffs, &args.canonical, &args.trace_coeffs) {
        (Some(spec), None, None) => parse_coeffs(&ctx, args.m, spec),
        (None, Some(spec), None) => {
            let class = parse_canonical(spec)?;
            class
                .standard_form(&ctx, args.m)
                .map_err(|e| CliError::invalid(e.to_string()))
        }
        (None, None, Some(spec)) => {
            let ext = ExtContext::new_bounded(&ctx, args.m, budget.max_vectors)
                .map_err(|e| CliError::invalid(e.to_string()))?;
            let coeffs: Result<Vec<_>, _> =
                spec.split(',').map(|s| s.trim().parse::<u64>()).collect();
            let coeffs =
                coeffs.map_err(|e| CliError::invalid(format!("bad trace coefficient: {e}")))?;
            for &c in &coeffs {
                if c >= ext.size() {
                    return Err(CliError::invalid(format!(
                        "trace coefficient {c} out of range for field of size {}",
                        ext.size()
                    )));
                }
            }
            let elements: Vec<_> = coeffs.iter().map(|&c| ext.element(c)).collect();
            QuadForm::from_trace_family(&ext, &elements)
                .map_err(|e| CliError::invalid(e.to_string()))
        }
        _ => Err(CliError::invalid(
            "exactly one of --coeffs, --canonical, --trace-coeffs is required",
        )),
    }
}

fn parse_coeffs(ctx: &FieldContext, m: usize, spec: &str) -> Result<QuadForm, CliError> {
    let mut entries = Vec::new();
    for part in spec.split(';').map(str::trim).filter(|s| !s.is_empty()) {
        let (pos, val) = part.split_once(':').ok_or_else(|| {
            CliError::invalid(format!("bad coefficient entry '{part}', expected i,j:c"))
        })?;
        let (i, j) = pos
            .split_once(',')
            .ok_or_else(|| CliError::invalid(format!("bad position '{pos}', expected i,j")))?;
        let i: usize = i
            .trim()
            .parse()
            .map_err(|_| CliError::invalid("bad index"))?;
        let j: usize = j
            .trim()
            .parse()
            .map_err(|_| CliError::invalid("bad index"))?;
        let c: u32 = val
            .trim()
            .parse()
            .map_err(|_| CliError::invalid("bad value"))?;
        if i == 0 || j == 0 || i > j || j > m {
            return Err(CliError::invalid(format!(
                "coefficient position ({i},{j}) must satisfy 1 <= i <= j <= m = {m}"
            )));
        }
        if c >= ctx.q() {
            return Err(CliError::invalid(format!(
                "coefficient encoding {c} out of range for q = {}",
                ctx.q()
            )));
        }
        entries.push((i - 1, j - 1, ctx.element(c)));
    }
    QuadForm::new(ctx.clone(), m, &entries).map_err(|e| CliError::invalid(e.to_string()))
}

pub fn parse_canonical(spec: &str) -> Result<FormClass, CliError> {
    let mut rank: Option<usize> = None;
    let mut type_label: Option<String> = None;
    let mut mu: Option<String> = None;
    for part in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| CliError::invalid(format!("bad canonical entry '{part}'")))?;
        match key.trim() {
            "r" => {
                rank = Some(
                    value
                        .trim()
                        .parse()
                        .map_err(|_| CliError::invalid("bad rank"))?,
                )
            }
            "type" => type_label = Some(value.trim().to_uppercase()),
            "mu" => mu = Some(value.trim().to_lowercase()),
            other => {
                return Err(CliError::invalid(format!(
                    "unknown canonical key '{other}'"
                )))
            }
        }
    }
    let rank = rank.ok_or_else(|| CliError::invalid("canonical spec needs r=<rank>"))?;
    let type_label =
        type_label.ok_or_else(|| CliError::invalid("canonical spec needs type=I|II|III"))?;
    match type_label.as_str() {
        "I" => {
            if mu.is_some() {
                return Err(CliError::invalid("type I takes no mu"));
            }
            if rank % 2 != 0 {
                return Err(CliError::invalid("type I needs even rank"));
            }
            Ok(FormClass::even(rank, 1))
        }
        "III" => {
            if mu.is_some() {
                return Err(CliError::invalid("type III takes no mu"));
            }
            if rank % 2 != 0 || rank == 0 {
                return Err(CliError::invalid("type III needs even rank >= 2"));
            }
            Ok(FormClass::even(rank, -1))
        }
        "II" => {
            if rank % 2 != 1 {
                return Err(CliError::invalid("type II needs odd rank"));
            }
            let eta_mu = match mu.as_deref().unwrap_or("1") {
                "1" => 1,
                "gamma" | "g" => -1,
                other => {
                    return Err(CliError::invalid(format!(
                        "mu must be 1 or gamma, got '{other}'"
                    )))
                }
            };
            Ok(FormClass::odd(rank, eta_mu))
        }
        other => Err(CliError::invalid(format!("unknown type '{other}'"))),
    }
}

pub enum LevelSpec {
    One(u32),
    AllNonzero,
}

pub fn parse_level(a: &str, ctx: &FieldContext) -> Result<LevelSpec, CliError> {
    if a == "all-nonzero" {
        return Ok(LevelSpec::AllNonzero);
    }
    let v: u32 = a.parse().map_err(|_| {
        CliError::invalid(format!("bad level value '{a}' (encoding or all-nonzero)"))
    })?;
    if v >= ctx.q() {
        return Err(CliError::invalid(format!(
            "level value {v} out of range for q = {}",
            ctx.q()
        )));
    }
    Ok(LevelSpec::One(v))
}

pub fn level_values(spec: &LevelSpec, ctx: &FieldContext) -> Vec<FieldElement> {
    match spec {
        LevelSpec::One(v) => vec![ctx.element(*v)],
        LevelSpec::AllNonzero => ctx.elements().skip(1).collect(),
    }
}

fn env_u64(name: &str) -> Option<u64> {
    std::env::var(name).ok().and_then(|v| v.parse().ok())
}

/// Flag > environment > default.
pub fn resolve_budget(args: &BudgetArgs) -> EnumBudget {
    let default = EnumBudget::default();
    EnumBudget {
        max_vectors: args
            .max_enum
            .or_else(|| env_u64("QFCODES_MAX_ENUM"))
            .unwrap_or(default.max_vectors),
        max_work: args
            .max_work
            .or_else(|| env_u64("QFCODES_MAX_WORK"))
            .unwrap_or(default.max_work),
        max_pairs: args
            .max_pairs
            .or_else(|| env_u64("QFCODES_MAX_PAIRS"))
            .unwrap_or(default.max_pairs),
    }
}

pub fn resolve_cache_dir(flag: &Option<std::path::PathBuf>) -> Option<std::path::PathBuf> {
    flag.clone()
        .or_else(|| std::env::var("QFCODES_CACHE_DIR").ok().map(Into::into))
}
