//! Subcommand implementations.

use qfcodes::code::{
    self, brute_cwe, exhaustive_minimality, minimality_report, predicted_cwe, predicted_wd,
    CodeError, DefiningSet, VerificationReport,
};
use qfcodes::field::FieldContext;
use qfcodes::forms::{Convention, FormClass, FormError, QuadForm};
use qfcodes::EnumBudget;
use serde_json::{json, Value};

use crate::cache::{Cache, CacheKey};
use crate::config::{self, ConventionPolicy, Format, LevelSpec, Params};
use crate::{BudgetArgs, CliError, FormArgs, OutputArgs, EXIT_MISMATCH, EXIT_OK};

fn map_code_error(err: CodeError) -> CliError {
    match err {
        CodeError::SizeLimit { requested, limit } => CliError::budget(format!(
            "enumeration of size {requested} exceeds the budget {limit}"
        )),
        CodeError::InternalInconsistency(detail) => CliError {
            exit: EXIT_MISMATCH,
            message: format!("internal inconsistency: {detail}"),
        },
        CodeError::Form(e) => map_form_error(e),
        other => CliError::invalid(other.to_string()),
    }
}

fn map_form_error(err: FormError) -> CliError {
    match err {
        FormError::SizeLimit { requested, limit } => CliError::budget(format!(
            "enumeration of size {requested} exceeds the budget {limit}"
        )),
        other => CliError::invalid(other.to_string()),
    }
}

fn params_for(form: &QuadForm, a: u32) -> Params {
    Params {
        p: form.ctx().p(),
        e: form.ctx().e(),
        m: form.m(),
        form: config::form_json(form),
        a,
    }
}

fn print_value(value: &Value) {
    println!("{}", serde_json::to_string(value).expect("serializable"));
}

pub fn classify(args: &FormArgs) -> Result<u8, CliError> {
    let budget = EnumBudget::default();
    let form = config::resolve_form(args, &budget)?;
    let st = form.standardize().map_err(map_form_error)?;
    let transform: Vec<Vec<u32>> = (0..st.transform.rows())
        .map(|i| st.transform.row(i).iter().map(|c| c.encoding()).collect())
        .collect();
    let value = json!({
        "params": {
            "p": form.ctx().p(),
            "e": form.ctx().e(),
            "m": form.m(),
            "form": config::form_json(&form),
        },
        "class": st.class,
        "rank": st.class.rank(),
        "type": st.class.type_label(),
        "transform": transform,
        "standard_form": config::form_json(&st.standard_form),
        "gram_identity": st.gram_identity_holds(&form),
    });
    print_value(&value);
    Ok(EXIT_OK)
}

/// Exit-code gate for one verification report under a convention policy.
fn report_ok(report: &VerificationReport, policy: ConventionPolicy) -> bool {
    let verdict = match policy.gating_convention() {
        Convention::Paper => &report.convention.paper,
        Convention::Reflected => &report.convention.reflected,
    };
    let closed_forms_ok = match verdict {
        code::ConventionVerdict::Match => report.wd_match == Some(true),
        code::ConventionVerdict::NotApplicable => true,
        code::ConventionVerdict::Mismatch(_) => false,
    };
    closed_forms_ok
        && report.length_matches_formula
        && report.mass_checks.brute_total_is_qm
        && report.mass_checks.brute_compositions_sum_to_n
        && report
            .mass_checks
            .predicted_marginal_consistent
            .unwrap_or(true)
}

/// One rendered verification: the output body plus its exit code.
fn run_verify_cell(
    form: &QuadForm,
    a: u32,
    policy: ConventionPolicy,
    budget: &EnumBudget,
    format: Format,
) -> Result<(String, u8), CliError> {
    let ctx = form.ctx();
    let a_el = ctx.element(a);
    let report = code::verify(form, a_el, budget).map_err(map_code_error)?;
    let exit = if report_ok(&report, policy) {
        EXIT_OK
    } else {
        EXIT_MISMATCH
    };
    let body = match format {
        Format::Json => {
            let mut value = serde_json::to_value(&report).expect("serializable");
            let obj = value.as_object_mut().unwrap();
            obj.insert(
                "params".into(),
                serde_json::to_value(params_for(form, a)).unwrap(),
            );
            // ratio-based minimality summary when the closed forms apply
            let minimality = if !a_el.is_zero() && report.class.rank() >= 1 {
                minimality_report(ctx, &report.class, form.m(), a_el)
                    .ok()
                    .map(|r| serde_json::to_value(r).unwrap())
                    .unwrap_or(Value::Null)
            } else {
                Value::Null
            };
            obj.insert("minimality".into(), minimality);
            serde_json::to_string(&value).expect("serializable") + "\n"
        }
        Format::Csv => {
            let mut s = String::from("weight,multiplicity\n");
            for (w, mult) in &report.wd {
                s.push_str(&format!("{w},{mult}\n"));
            }
            s
        }
    };
    Ok((body, exit))
}

pub fn verify(
    args: &FormArgs,
    a_spec: &str,
    policy: ConventionPolicy,
    budget_args: &BudgetArgs,
    output: &OutputArgs,
) -> Result<u8, CliError> {
    let budget = config::resolve_budget(budget_args);
    let form = config::resolve_form(args, &budget)?;
    let levels = config::level_values(&config::parse_level(a_spec, form.ctx())?, form.ctx());
    let cache = config::resolve_cache_dir(&output.cache_dir).map(|d| Cache::new(&d));
    let mut worst = EXIT_OK;
    for a in levels {
        let a = a.encoding();
        let key_material = serde_json::to_string(&json!({
            "command": "verify",
            "params": params_for(&form, a),
            "policy": format!("{policy:?}"),
            "format": format!("{:?}", output.format),
            "budget": [budget.max_vectors, budget.max_work, budget.max_pairs],
        }))
        .unwrap();
        let key = CacheKey::new(&key_material);
        let (body, exit) = if let Some((body, exit)) = cache.as_ref().and_then(|c| c.lookup(&key)) {
            (body, exit)
        } else {
            let (body, exit) = run_verify_cell(&form, a, policy, &budget, output.format)?;
            if let Some(c) = &cache {
                c.store(&key, &body, exit);
            }
            (body, exit)
        };
        print!("{body}");
        worst = worst.max(exit);
    }
    Ok(worst)
}

pub fn sweep(q_list: &str, m_max: usize, budget_args: &BudgetArgs) -> Result<u8, CliError> {
    let budget = config::resolve_budget(budget_args);
    let qs: Vec<u32> = q_list
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<u32>()
                .map_err(|_| CliError::invalid(format!("bad q '{s}'")))
        })
        .collect::<Result<_, _>>()?;
    let mut cells = 0u64;
    let mut failed = 0u64;
    for q in qs {
        let (p, e) = factor_prime_power(q)?;
        let ctx = FieldContext::new(p, e).map_err(|err| CliError::invalid(err.to_string()))?;
        for m in 1..=m_max {
            for class in FormClass::all_nondegenerate(m) {
                let form = class.standard_form(&ctx, m).map_err(map_form_error)?;
                for a in ctx.elements().skip(1) {
                    let report = code::verify(&form, a, &budget).map_err(map_code_error)?;
                    let ok = report.verified();
                    cells += 1;
                    if !ok {
                        failed += 1;
                    }
                    let line = json!({
                        "cell": {
                            "q": q,
                            "p": p,
                            "e": e,
                            "m": m,
                            "class": class,
                            "a": a.encoding(),
                        },
                        "n": report.n,
                        "dimension_actual": report.dimension_actual,
                        "convention": report.convention,
                        "ok": ok,
                    });
                    print_value(&line);
                }
            }
        }
    }
    print_value(&json!({
        "summary": { "cells": cells, "passed": cells - failed, "failed": failed }
    }));
    Ok(if failed == 0 { EXIT_OK } else { EXIT_MISMATCH })
}

fn factor_prime_power(q: u32) -> Result<(u32, u32), CliError> {
    if q < 3 {
        return Err(CliError::invalid(format!(
            "q = {q} is not an odd prime power"
        )));
    }
    let mut p = 0;
    for d in 2..=q {
        if q.is_multiple_of(d) {
            p = d;
            break;
        }
    }
    let mut e = 0;
    let mut rest = q;
    while rest.is_multiple_of(p) {
        rest /= p;
        e += 1;
    }
    if rest != 1 || p == 2 {
        return Err(CliError::invalid(format!(
            "q = {q} is not an odd prime power"
        )));
    }
    Ok((p, e))
}

pub fn minimal(
    args: &FormArgs,
    a_spec: &str,
    seed: u64,
    budget_args: &BudgetArgs,
    output: &OutputArgs,
) -> Result<u8, CliError> {
    let budget = config::resolve_budget(budget_args);
    let form = config::resolve_form(args, &budget)?;
    let ctx = form.ctx().clone();
    let LevelSpec::One(a) = config::parse_level(a_spec, &ctx)? else {
        return Err(CliError::invalid("minimal takes a single level value"));
    };
    let a_el = ctx.element(a);
    let st = form.standardize().map_err(map_form_error)?;
    let mut report = minimality_report(&ctx, &st.class, form.m(), a_el).map_err(map_code_error)?;

    // attach the covering scan when enumeration fits the budget
    let mut scan_note = Value::Null;
    match DefiningSet::new(&form, a_el, &budget) {
        Ok(ds) => match exhaustive_minimality(&ctx, &ds, &budget, seed) {
            Ok(scan) => report.exhaustive = Some(scan),
            Err(CodeError::Undefined(msg)) => return Err(CliError::invalid(msg)),
            Err(e) => return Err(map_code_error(e)),
        },
        Err(CodeError::SizeLimit { requested, limit }) => {
            scan_note = json!(format!(
                "covering scan skipped: enumeration of size {requested} exceeds the budget {limit}"
            ));
        }
        Err(e) => return Err(map_code_error(e)),
    }

    match output.format {
        Format::Json => {
            let value = json!({
                "params": params_for(&form, a),
                "class": st.class,
                "minimality": report,
                "scan_note": scan_note,
            });
            print_value(&value);
        }
        Format::Csv => {
            println!("w_min,w_max,ratio_exceeds,parameter_condition,violations");
            println!(
                "{},{},{},{},{}",
                report.w_min,
                report.w_max,
                report.ratio_exceeds,
                report.parameter_condition,
                report
                    .exhaustive
                    .as_ref()
                    .map_or("skipped".to_string(), |s| s.violations.to_string())
            );
        }
    }
    Ok(EXIT_OK)
}

pub fn enumerate(
    args: &FormArgs,
    a_spec: &str,
    budget_args: &BudgetArgs,
    output: &OutputArgs,
) -> Result<u8, CliError> {
    let budget = config::resolve_budget(budget_args);
    let form = config::resolve_form(args, &budget)?;
    let ctx = form.ctx().clone();
    let levels = config::level_values(&config::parse_level(a_spec, &ctx)?, &ctx);
    for a_el in levels {
        let ds = DefiningSet::new(&form, a_el, &budget).map_err(map_code_error)?;
        let cwe = brute_cwe(&ctx, &ds, &budget).map_err(map_code_error)?;
        let wd = cwe.weight_marginal();
        match output.format {
            Format::Json => {
                let value = json!({
                    "params": params_for(&form, a_el.encoding()),
                    "n": ds.n(),
                    "dimension_actual": ds.dimension_actual(&ctx),
                    "wd": wd.rows(),
                    "cwe": cwe.rows(),
                });
                print_value(&value);
            }
            Format::Csv => {
                println!("weight,multiplicity");
                for (w, mult) in wd.rows() {
                    println!("{w},{mult}");
                }
            }
        }
    }
    Ok(EXIT_OK)
}

pub fn predict(
    args: &FormArgs,
    a_spec: &str,
    policy: ConventionPolicy,
    output: &OutputArgs,
) -> Result<u8, CliError> {
    let budget = EnumBudget::default();
    let form = config::resolve_form(args, &budget)?;
    let ctx = form.ctx().clone();
    let LevelSpec::One(a) = config::parse_level(a_spec, &ctx)? else {
        return Err(CliError::invalid("predict takes a single level value"));
    };
    let a_el = ctx.element(a);
    let class = form.classify();
    let wd = predicted_wd(&ctx, &class, form.m(), a_el).map_err(map_code_error)?;
    let conv = policy.gating_convention();
    let (cwe_value, cwe_error, exit) = match predicted_cwe(&ctx, &class, form.m(), a_el, conv) {
        Ok(cwe) => (
            serde_json::to_value(cwe.rows()).unwrap(),
            Value::Null,
            EXIT_OK,
        ),
        Err(CodeError::InternalInconsistency(detail)) => {
            (Value::Null, json!(detail), EXIT_MISMATCH)
        }
        Err(e) => return Err(map_code_error(e)),
    };
    match output.format {
        Format::Json => {
            let value = json!({
                "params": params_for(&form, a),
                "class": class,
                "n": wd.n,
                "convention": conv,
                "wd": wd.rows(),
                "cwe": cwe_value,
                "cwe_error": cwe_error,
            });
            print_value(&value);
        }
        Format::Csv => {
            println!("weight,multiplicity");
            for (w, mult) in wd.rows() {
                println!("{w},{mult}");
            }
        }
    }
    Ok(exit)
}
