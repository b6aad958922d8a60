//! JSON and CSV renderings. Exact rationals are always `"p/q"` strings.

use std::io::Write;
use std::path::Path;

use rug::{Float, Rational};
use serde_json::{json, Map, Value};

use scatter_core::approx::{ApproximationCertificate, Sample, Term, TranslateCombination};
use scatter_core::polybasis::{KernelSpec, Polynomial, Scalar};
use scatter_core::sequences::DoublingSequence;

use crate::error::CliError;

pub const CSV_HEADER: [&str; 4] = ["x", "f", "s", "abs_err"];

pub fn rat(q: &Rational) -> Value {
    Value::String(q.to_string())
}

pub fn rats<'a>(qs: impl IntoIterator<Item = &'a Rational>) -> Value {
    Value::Array(qs.into_iter().map(rat).collect())
}

/// Decimal with enough digits to read back exactly at the same precision.
pub fn decimal(f: &Float) -> Value {
    Value::String(f.to_string_radix(10, None))
}

pub fn scalar(s: &Scalar) -> Value {
    match s {
        Scalar::Exact(q) => rat(q),
        Scalar::Approx(f) => decimal(f),
    }
}

pub fn poly_entry(k: usize, p: &Polynomial) -> Value {
    json!({
        "k": k,
        "coeffs": rats(p.coeffs()),
        "degree": p.degree(),
        "leading": p.leading().map(rat),
    })
}

/// The kernel in config form, so it can be read back as a `kernel` section.
pub fn kernel(spec: &KernelSpec) -> Value {
    let mut m = Map::new();
    m.insert("family".into(), json!(spec.family().as_str()));
    match spec {
        KernelSpec::BinomialPower { q, r, c }
        | KernelSpec::ArctanBinomial { q, r, c }
        | KernelSpec::RelatedArctan { q, r, c } => {
            m.insert("q".into(), json!(q));
            m.insert("r".into(), rat(r));
            m.insert("c".into(), rat(c));
        }
        KernelSpec::RelatedLog { l, q } => {
            m.insert("q".into(), json!(q));
            m.insert("L".into(), json!(l));
        }
        KernelSpec::ArctanShifted | KernelSpec::InvXLog => {}
    }
    Value::Object(m)
}

pub fn doubling(y: &DoublingSequence) -> Value {
    json!({
        "sign": y.sign().as_str(),
        "nodes": rats(y.nodes()),
        "gap_products": rats(y.gap_products()),
    })
}

pub fn combination(s: &TranslateCombination) -> Value {
    let terms: Vec<Value> = s
        .terms()
        .iter()
        .map(|t| json!({"node": rat(&t.node), "coefficient": decimal(&t.coefficient)}))
        .collect();
    json!({
        "kernel": kernel(&s.kernel),
        "working_bits": s.working_bits,
        "terms": terms,
    })
}

/// Certificate fields in a fixed order; samples are referenced, not inlined.
pub fn certificate(
    cert: &ApproximationCertificate,
    s: &TranslateCombination,
    samples_path: Option<&Path>,
) -> Value {
    let lp: Vec<Value> = cert.lp_errors.iter().map(|(p, e)| json!({"p": p, "error": e})).collect();
    let indices: Vec<Value> = cert
        .indices
        .iter()
        .map(|r| {
            json!({
                "index": r.index,
                "coefficient": rat(&r.coefficient),
                "y1": rat(&r.y1),
                "terms": r.terms,
                "error": r.error,
                "budget": r.budget,
                "constant": r.constant,
                "solver_residual": r.solver_residual,
                "solver_bits": r.solver_bits,
            })
        })
        .collect();
    json!({
        "interval": [rat(&cert.a), rat(&cert.b)],
        "grid_points": cert.grid_points,
        "epsilon": cert.epsilon,
        "sup_error": cert.sup_error,
        "certified": cert.epsilon.map(|e| cert.sup_error < e),
        "lp_errors": lp,
        "y1_used": cert.y1_used.as_ref().map(rat),
        "precision_bits": cert.precision_bits,
        "working_bits": cert.working_bits,
        "poly_degree": cert.poly_degree,
        "poly_error": cert.poly_error,
        "solver_residuals": cert.solver_residuals,
        "indices": indices,
        "combination": combination(s),
        "samples": {
            "path": samples_path.map(|p| p.display().to_string()),
            "count": cert.samples.len(),
            "columns": CSV_HEADER,
            "format": "shortest round-trip f64",
        },
    })
}

pub fn write_samples(path: &Path, samples: &[Sample]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let io = |e: csv::Error| CliError::Io(format!("{}: {e}", path.display()));
    w.write_record(CSV_HEADER).map_err(io)?;
    for r in samples {
        w.write_record([
            format!("{:e}", r.x.to_f64()),
            format!("{:e}", r.f),
            format!("{:e}", r.s),
            format!("{:e}", r.abs_err),
        ])
        .map_err(io)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_samples(path: &Path) -> Result<Vec<[f64; 4]>, CliError> {
    let io = |e: csv::Error| CliError::Io(format!("{}: {e}", path.display()));
    let mut r = csv::Reader::from_path(path).map_err(io)?;
    let header = r.headers().map_err(io)?.clone();
    if header.iter().ne(CSV_HEADER) {
        return Err(CliError::Mismatch(format!(
            "{}: header {:?}, expected {}",
            path.display(),
            header.iter().collect::<Vec<_>>(),
            CSV_HEADER.join(",")
        )));
    }
    let mut rows = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec.map_err(io)?;
        let mut row = [0.0; 4];
        for (slot, v) in row.iter_mut().zip(rec.iter()) {
            *slot = v
                .parse()
                .map_err(|_| CliError::Mismatch(format!("{} row {}: bad number {v:?}", path.display(), i + 1)))?;
        }
        if rec.len() != 4 {
            return Err(CliError::Mismatch(format!("{} row {}: expected 4 fields", path.display(), i + 1)));
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Rebuilds a combination written by [`combination`].
pub fn parse_terms(v: &Value, prec: u32) -> Result<Vec<Term>, String> {
    let terms = v.as_array().ok_or("combination.terms is not an array")?;
    terms
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let node = t["node"]
                .as_str()
                .and_then(|s| s.parse::<Rational>().ok())
                .ok_or(format!("combination.terms[{i}].node"))?;
            let coefficient = t["coefficient"]
                .as_str()
                .and_then(|s| Float::parse(s).ok())
                .map(|p| Float::with_val(prec, p))
                .ok_or(format!("combination.terms[{i}].coefficient"))?;
            Ok(Term { coefficient, node })
        })
        .collect()
}

pub fn emit(value: &Value, out: Option<&Path>) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).expect("json values serialize");
    match out {
        Some(path) => std::fs::write(path, text + "\n").map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            writeln!(stdout, "{text}")?;
            Ok(())
        }
    }
}
