use std::path::{Path, PathBuf};

use rug::Rational;
use serde_json::{json, Value};

use scatter_core::approx::{approximate, certify as recertify, lp_error, ApproxOptions, Grid, TranslateCombination};
use scatter_core::polybasis::classify_basis;
use scatter_core::sequences::{extract_doubling, Sign};
use scatter_core::solvers::{alternant_size, alternant_solve, solve_vandermonde, vandermonde_coeffs, vandermonde_residual};
use scatter_core::Error as CoreError;

use crate::config::{parse_rational, KernelConfig, RunConfig};
use crate::error::CliError;
use crate::report;
use crate::SolveMode;

pub fn expand(config: &Path, k_max: usize, out: Option<&Path>) -> Result<(), CliError> {
    let cfg = RunConfig::load(config)?;
    let spec = cfg.kernel()?;
    let model = classify_basis(&spec)?;
    let a: Vec<Value> = model
        .coefficients(k_max + 1)
        .iter()
        .enumerate()
        .map(|(k, p)| report::poly_entry(k, p))
        .collect();
    let mut doc = json!({
        "kernel": report::kernel(&spec),
        "basis_offset": model.basis_offset,
        "f_exponent": report::rat(&model.f_exponent),
        "f_has_log": model.f_has_log,
        "sign_requirement": model.sign_requirement.as_str(),
        "A": a,
    });
    if let Some(b) = model.companion(k_max + 1) {
        doc["B"] = b.iter().enumerate().map(|(k, p)| report::poly_entry(k, p)).collect();
    }
    report::emit(&doc, out)
}

fn resolve_sign(cfg: &RunConfig, sign: Option<&str>) -> Result<Sign, CliError> {
    if let Some(s) = sign {
        return s.parse().map_err(|e| CliError::Config(format!("--sign: {e}")));
    }
    if cfg.kernel.is_some() {
        return Ok(classify_basis(&cfg.kernel()?)?.sign_requirement.preferred());
    }
    Ok(Sign::Positive)
}

pub fn doubling(
    config: &Path,
    n: usize,
    floor: &Rational,
    sign: Option<&str>,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let cfg = RunConfig::load(config)?;
    let provider = cfg.provider()?;
    let sign = resolve_sign(&cfg, sign)?;
    let y = extract_doubling(&provider, sign, floor, n)?;
    let mut doc = json!({
        "floor": report::rat(floor),
        "delta": report::rat(provider.delta()),
    });
    merge(&mut doc, report::doubling(&y));
    report::emit(&doc, out)
}

fn merge(into: &mut Value, from: Value) {
    if let (Value::Object(a), Value::Object(b)) = (into, from) {
        a.extend(b);
    }
}

#[allow(clippy::too_many_arguments)]
pub fn solve(
    config: &Path,
    mode: SolveMode,
    n: usize,
    floor: &Rational,
    lead: Option<u32>,
    bits: Option<u32>,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let cfg = RunConfig::load(config)?;
    let provider = cfg.provider()?;
    let bits = match bits {
        Some(b) => b,
        None => cfg.precision_bits()?,
    };
    let model = cfg.kernel.as_ref().map(|_| cfg.kernel()).transpose()?.map(|k| classify_basis(&k)).transpose()?;
    let doc = match mode {
        SolveMode::Vandermonde => {
            let sign = resolve_sign(&cfg, None)?;
            let y = extract_doubling(&provider, sign, floor, n)?;
            let c = vandermonde_coeffs(&y, n)?;
            let residual = vandermonde_residual(&y.nodes()[..n], &c);
            let mut doc = json!({"mode": "vandermonde", "n": n, "floor": report::rat(floor)});
            merge(&mut doc, report::doubling(&y));
            doc["coefficients"] = report::rats(&c);
            doc["residual"] = report::rat(&residual);
            if let Some(model) = &model {
                let sol = solve_vandermonde(&y, model, n, bits)?;
                doc["kernel"] = report::kernel(&model.kernel);
                doc["a_tilde"] = sol.a_tilde.iter().map(report::scalar).collect();
                doc["a_tilde_bits"] = json!(bits);
            }
            doc
        }
        SolveMode::LogAlternant => {
            let lead = lead
                .or_else(|| model.as_ref().and_then(|m| m.log_lead()).map(|l| l as u32))
                .unwrap_or(1);
            if lead == 0 {
                return Err(CliError::Config("--lead must be at least 1".into()));
            }
            let target = lead + n as u32 - 1;
            let size = alternant_size(lead, target);
            let y = extract_doubling(&provider, Sign::Positive, floor, size)?;
            let sol = alternant_solve(y.nodes(), lead, target, bits)?;
            let mut doc = json!({
                "mode": "log-alternant",
                "n": n,
                "lead": lead,
                "target": target,
                "floor": report::rat(floor),
            });
            merge(&mut doc, report::doubling(&y));
            doc["precision_bits"] = json!(sol.precision_bits);
            doc["coefficients"] = sol.a_tilde.iter().map(report::decimal).collect();
            doc["residual"] = json!(sol.residual_f64());
            doc["growth_ratios"] = json!(sol.growth_ratios);
            doc["growth_constant"] = json!(sol.growth_constant);
            doc
        }
    };
    report::emit(&doc, out)
}

pub fn approx(config: &Path, certificate: Option<PathBuf>, samples: Option<PathBuf>) -> Result<(), CliError> {
    let cfg = RunConfig::load(config)?;
    let kernel = cfg.kernel()?;
    let provider = cfg.provider()?;
    let target = cfg.target()?;
    let grid = cfg.grid()?;
    let epsilon = cfg.epsilon()?;
    let mut options = ApproxOptions {
        precision_bits: cfg.precision_bits()?,
        ..ApproxOptions::default()
    };
    if let Some(lp) = &cfg.lp {
        if lp.iter().any(|p| !(*p >= 1.0 && p.is_finite())) {
            return Err(CliError::Config("lp: exponents must be finite and >= 1".into()));
        }
        options.lp = lp.clone();
    }
    let outputs = cfg.outputs.clone().unwrap_or_default();
    let cert_path = certificate.or(outputs.certificate);
    let samples_path = samples
        .or(outputs.samples)
        .or_else(|| cert_path.as_ref().map(|p| p.with_extension("csv")));

    let (s, cert) = approximate(&target, &grid, epsilon, &kernel, &provider, &options)?;
    match &samples_path {
        Some(p) => report::write_samples(p, &cert.samples)?,
        None => eprintln!("scatter: no samples path given; CSV not written"),
    }
    report::emit(&report::certificate(&cert, &s, samples_path.as_deref()), cert_path.as_deref())
}

fn mismatch(msg: impl Into<String>) -> CliError {
    CliError::Mismatch(msg.into())
}

fn field<'a>(doc: &'a Value, key: &str) -> Result<&'a Value, CliError> {
    doc.get(key).ok_or_else(|| mismatch(format!("certificate lacks {key:?}")))
}

fn f64_field(doc: &Value, key: &str) -> Result<f64, CliError> {
    field(doc, key)?.as_f64().ok_or_else(|| mismatch(format!("{key} is not a number")))
}

fn rational_field(v: &Value, what: &str) -> Result<Rational, CliError> {
    v.as_str()
        .ok_or_else(|| mismatch(format!("{what} is not a string")))
        .and_then(|s| parse_rational(s).map_err(|e| mismatch(format!("{what}: {e}"))))
}

/// Certificate against samples: grid abscissae, per-row errors, sup and `L^p`
/// norms; with a config, the stored combination is re-evaluated too.
pub fn certify(certificate: &Path, samples: &Path, config: Option<&Path>) -> Result<(), CliError> {
    let text = std::fs::read_to_string(certificate).map_err(|e| CliError::Io(format!("{}: {e}", certificate.display())))?;
    let doc: Value = serde_json::from_str(&text).map_err(|e| mismatch(format!("{}: {e}", certificate.display())))?;
    let rows = report::read_samples(samples)?;

    let interval = field(&doc, "interval")?;
    let a = rational_field(&interval[0], "interval[0]")?;
    let b = rational_field(&interval[1], "interval[1]")?;
    let points = field(&doc, "grid_points")?.as_u64().ok_or_else(|| mismatch("grid_points"))? as usize;
    if rows.len() != points {
        return Err(mismatch(format!("{} sample rows, certificate has {points} grid points", rows.len())));
    }
    let grid = Grid::new(a, b, points).map_err(|e| mismatch(e.to_string()))?;
    for (i, row) in rows.iter().enumerate() {
        let x = grid.node(i).to_f64();
        if row[0] != x {
            return Err(mismatch(format!("row {}: x = {} is not grid node {x}", i + 1, row[0])));
        }
        let [_, f, s, e] = *row;
        let slack = 4.0 * f64::EPSILON * f.abs().max(s.abs()).max(e) + f64::MIN_POSITIVE;
        if ((f - s).abs() - e).abs() > slack {
            return Err(mismatch(format!("row {}: abs_err {e:e} disagrees with |f - s| = {:e}", i + 1, (f - s).abs())));
        }
    }
    let errs: Vec<f64> = rows.iter().map(|r| r[3]).collect();
    let sup = errs.iter().cloned().fold(0.0, f64::max);
    let stated = f64_field(&doc, "sup_error")?;
    if sup != stated {
        return Err(mismatch(format!("sup_error {stated:e} but samples give {sup:e}")));
    }
    let width = grid.width().to_f64();
    for entry in field(&doc, "lp_errors")?.as_array().ok_or_else(|| mismatch("lp_errors"))? {
        let p = f64_field(entry, "p")?;
        let stated = f64_field(entry, "error")?;
        let again = lp_error(&errs, width, sup, p);
        if again != stated {
            return Err(mismatch(format!("L^{p} error {stated:e} but samples give {again:e}")));
        }
    }

    let reevaluated = match config {
        Some(path) => {
            let cfg = RunConfig::load(path)?;
            let target = cfg.target()?;
            let comb = field(&doc, "combination")?;
            let kernel: KernelConfig = serde_json::from_value(field(comb, "kernel")?.clone())
                .map_err(|e| mismatch(format!("combination.kernel: {e}")))?;
            let kernel = kernel.to_spec()?;
            let bits = field(comb, "working_bits")?.as_u64().ok_or_else(|| mismatch("working_bits"))? as u32;
            let terms = report::parse_terms(field(comb, "terms")?, bits).map_err(mismatch)?;
            let s = TranslateCombination::new(kernel, terms, bits);
            let ps: Vec<f64> = doc["lp_errors"].as_array().into_iter().flatten().filter_map(|e| e["p"].as_f64()).collect();
            let again = recertify(&s, &target, &grid, &ps);
            if again.sup_error != stated {
                return Err(mismatch(format!(
                    "re-evaluated sup_error {:e} differs from certified {stated:e}",
                    again.sup_error
                )));
            }
            for (i, (r, row)) in again.samples.iter().zip(&rows).enumerate() {
                if [r.f, r.s, r.abs_err] != [row[1], row[2], row[3]] {
                    return Err(mismatch(format!("row {}: re-evaluation differs from samples", i + 1)));
                }
            }
            true
        }
        None => false,
    };

    let epsilon = doc.get("epsilon").and_then(Value::as_f64);
    let certified = epsilon.map(|e| sup < e);
    report::emit(
        &json!({
            "rows": rows.len(),
            "sup_error": sup,
            "epsilon": epsilon,
            "lp_consistent": true,
            "reevaluated": reevaluated,
            "certified": certified,
        }),
        None,
    )?;
    match (epsilon, certified) {
        (Some(epsilon), Some(false)) => Err(CoreError::NotCertified { sup_error: sup, epsilon }.into()),
        _ => Ok(()),
    }
}
