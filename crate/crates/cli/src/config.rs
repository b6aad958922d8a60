//! The JSON run configuration.

use std::path::{Path, PathBuf};

use rug::{Integer, Rational};
use serde::Deserialize;

use scatter_core::approx::{Builtin, Grid, Target, DEFAULT_GRID_POINTS};
use scatter_core::polybasis::{KernelFamily, KernelSpec, Polynomial};
use scatter_core::sequences::ScatteredProvider;
use scatter_core::solvers::DEFAULT_PRECISION_BITS;

use crate::error::CliError;

pub const PRECISION_ENV: &str = "SCATTER_PRECISION_BITS";

/// A number given either as a JSON number or as a `"p/q"` / decimal string.
/// JSON numbers are read through their shortest decimal form, so `0.2` is `1/5`.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Int(i64),
    Float(f64),
    Str(String),
}

impl Num {
    pub fn to_rational(&self) -> Result<Rational, String> {
        match self {
            Num::Int(i) => Ok(Rational::from(*i)),
            Num::Float(f) if f.is_finite() => parse_rational(&format!("{f:e}")),
            Num::Float(f) => Err(format!("{f} is not finite")),
            Num::Str(s) => parse_rational(s),
        }
    }
}

/// Exact parse of `p/q`, integers and decimals with optional exponent.
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let t = s.trim();
    let bad = || format!("{s:?} is not a rational number");
    if t.contains('/') {
        let r: Rational = t.parse().map_err(|_| bad())?;
        return Ok(r);
    }
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (neg, unsigned) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = unsigned.split_once('.').unwrap_or((unsigned, ""));
    let digits = format!("{int_part}{frac_part}");
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let mut n: Integer = digits.parse().map_err(|_| bad())?;
    if neg {
        n = -n;
    }
    let scale = exp - frac_part.len() as i32;
    let pow10 = |e: u32| Integer::from(Integer::u_pow_u(10, e));
    let out = if scale >= 0 {
        Rational::from(n * pow10(scale as u32))
    } else {
        Rational::from((n, pow10((-scale) as u32)))
    };
    Ok(out)
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelConfig {
    pub family: String,
    pub q: Option<u32>,
    pub r: Option<Num>,
    pub c: Option<Num>,
    #[serde(rename = "L")]
    pub l: Option<u32>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Extension {
    pub period: Num,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProviderConfig {
    pub kind: String,
    pub delta: Option<Num>,
    pub jitter: Option<Num>,
    pub seed: Option<u64>,
    pub list: Option<Vec<Num>>,
    pub extension: Option<Extension>,
    pub step: Option<Num>,
    pub offset: Option<Num>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum TargetConfig {
    Name(String),
    Builtin { builtin: String },
    Polynomial { polynomial: Vec<Num> },
    Sampled { sampled: Vec<[f64; 2]> },
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Outputs {
    pub certificate: Option<PathBuf>,
    pub samples: Option<PathBuf>,
}

/// Every section is optional here; each subcommand demands what it needs.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub kernel: Option<KernelConfig>,
    pub provider: Option<ProviderConfig>,
    pub target: Option<TargetConfig>,
    pub interval: Option<[Num; 2]>,
    pub epsilon: Option<f64>,
    pub grid: Option<usize>,
    pub precision_bits: Option<u32>,
    pub lp: Option<Vec<f64>>,
    pub outputs: Option<Outputs>,
}

fn field(path: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("{path}: {msg}"))
}

fn missing(path: &str) -> CliError {
    field(path, "missing")
}

fn rational(path: &str, n: &Num) -> Result<Rational, CliError> {
    n.to_rational().map_err(|e| field(path, e))
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            CliError::Config(format!("{path}: {inner}"))
        })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Config(m) => CliError::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn kernel(&self) -> Result<KernelSpec, CliError> {
        self.kernel.as_ref().ok_or_else(|| missing("kernel"))?.to_spec()
    }

    pub fn provider(&self) -> Result<ScatteredProvider, CliError> {
        self.provider.as_ref().ok_or_else(|| missing("provider"))?.to_provider()
    }

    pub fn target(&self) -> Result<Target, CliError> {
        match self.target.as_ref().ok_or_else(|| missing("target"))? {
            TargetConfig::Name(name) | TargetConfig::Builtin { builtin: name } => name
                .parse::<Builtin>()
                .map(Target::Builtin)
                .map_err(|e| field("target", e)),
            TargetConfig::Polynomial { polynomial } => {
                let coeffs = polynomial
                    .iter()
                    .enumerate()
                    .map(|(i, n)| rational(&format!("target.polynomial[{i}]"), n))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(Target::Polynomial(Polynomial::new(coeffs)))
            }
            TargetConfig::Sampled { sampled } => {
                Target::sampled(sampled.iter().map(|[x, f]| (*x, *f)).collect())
                    .map_err(|e| field("target.sampled", e))
            }
        }
    }

    pub fn grid(&self) -> Result<Grid, CliError> {
        let [a, b] = self.interval.as_ref().ok_or_else(|| missing("interval"))?;
        let a = rational("interval[0]", a)?;
        let b = rational("interval[1]", b)?;
        Grid::new(a, b, self.grid.unwrap_or(DEFAULT_GRID_POINTS)).map_err(|e| field("grid", e))
    }

    pub fn epsilon(&self) -> Result<f64, CliError> {
        match self.epsilon {
            Some(e) if e > 0.0 && e.is_finite() => Ok(e),
            Some(e) => Err(field("epsilon", format!("{e} must be positive"))),
            None => Err(missing("epsilon")),
        }
    }

    /// Config value, then `SCATTER_PRECISION_BITS`, then the default.
    pub fn precision_bits(&self) -> Result<u32, CliError> {
        let bits = match self.precision_bits {
            Some(b) => b,
            None => match std::env::var(PRECISION_ENV) {
                Ok(v) => v
                    .trim()
                    .parse()
                    .map_err(|_| CliError::Config(format!("{PRECISION_ENV}: {v:?} is not a bit count")))?,
                Err(_) => DEFAULT_PRECISION_BITS,
            },
        };
        if !(16..=1 << 20).contains(&bits) {
            return Err(field("precision_bits", format!("{bits} out of range")));
        }
        Ok(bits)
    }
}

impl KernelConfig {
    pub fn to_spec(&self) -> Result<KernelSpec, CliError> {
        let r = || -> Result<Rational, CliError> {
            rational("kernel.r", self.r.as_ref().ok_or_else(|| missing("kernel.r"))?)
        };
        let c = || -> Result<Rational, CliError> {
            self.c.as_ref().map_or(Ok(Rational::from(1)), |c| rational("kernel.c", c))
        };
        let q = self.q.unwrap_or(2);
        let unused = |name: &str, present: bool| -> Result<(), CliError> {
            if present {
                Err(field(&format!("kernel.{name}"), format!("not a parameter of {}", self.family)))
            } else {
                Ok(())
            }
        };
        let spec = match self.family.as_str() {
            "multiquadric" | "poisson" => {
                unused("q", self.q.is_some())?;
                unused("r", self.r.is_some())?;
                unused("c", self.c.is_some())?;
                unused("L", self.l.is_some())?;
                if self.family == "multiquadric" {
                    KernelSpec::multiquadric()
                } else {
                    KernelSpec::poisson()
                }
            }
            other => {
                let family: KernelFamily = other.parse().map_err(|e| field("kernel.family", e))?;
                match family {
                    KernelFamily::BinomialPower => {
                        unused("L", self.l.is_some())?;
                        KernelSpec::binomial(q, r()?, c()?)
                    }
                    KernelFamily::ArctanBinomial => {
                        unused("L", self.l.is_some())?;
                        KernelSpec::ArctanBinomial { q, r: r()?, c: c()? }
                    }
                    KernelFamily::RelatedArctan => {
                        unused("L", self.l.is_some())?;
                        KernelSpec::RelatedArctan { q, r: r()?, c: c()? }
                    }
                    KernelFamily::ArctanShifted => {
                        unused("q", self.q.is_some())?;
                        unused("r", self.r.is_some())?;
                        unused("c", self.c.is_some())?;
                        unused("L", self.l.is_some())?;
                        KernelSpec::ArctanShifted
                    }
                    KernelFamily::InvXLog => {
                        if self.q.is_some_and(|q| q != 2) {
                            return Err(field("kernel.q", "inv-x-log fixes q = 2"));
                        }
                        if let Some(c) = &self.c {
                            if rational("kernel.c", c)? != 1 {
                                return Err(field("kernel.c", "inv-x-log fixes c = 1"));
                            }
                        }
                        unused("r", self.r.is_some())?;
                        unused("L", self.l.is_some())?;
                        KernelSpec::InvXLog
                    }
                    KernelFamily::RelatedLog => {
                        unused("r", self.r.is_some())?;
                        unused("c", self.c.is_some())?;
                        KernelSpec::RelatedLog {
                            l: self.l.unwrap_or(1),
                            q,
                        }
                    }
                }
            }
        };
        spec.validate().map_err(|e| field("kernel", e))?;
        Ok(spec)
    }
}

impl ProviderConfig {
    pub fn to_provider(&self) -> Result<ScatteredProvider, CliError> {
        let delta = self.delta.as_ref().map(|d| rational("provider.delta", d)).transpose()?;
        let provider = match self.kind.as_str() {
            "integers" => ScatteredProvider::integers(),
            "jittered-integers" => {
                let jitter = self.jitter.as_ref().ok_or_else(|| missing("provider.jitter"))?;
                ScatteredProvider::jittered_integers(rational("provider.jitter", jitter)?, self.seed.unwrap_or(0))
                    .map_err(|e| field("provider.jitter", e))?
            }
            "explicit-list" => {
                let list = self.list.as_ref().ok_or_else(|| missing("provider.list"))?;
                let nodes = list
                    .iter()
                    .enumerate()
                    .map(|(i, n)| rational(&format!("provider.list[{i}]"), n))
                    .collect::<Result<Vec<_>, _>>()?;
                let period = self
                    .extension
                    .as_ref()
                    .map(|e| rational("provider.extension.period", &e.period))
                    .transpose()?;
                return ScatteredProvider::explicit(nodes, delta, period).map_err(|e| field("provider", e));
            }
            "affine-lattice" => {
                let step = rational("provider.step", self.step.as_ref().ok_or_else(|| missing("provider.step"))?)?;
                let offset = self
                    .offset
                    .as_ref()
                    .map_or(Ok(Rational::new()), |o| rational("provider.offset", o))?;
                ScatteredProvider::affine_lattice(step, offset).map_err(|e| field("provider", e))?
            }
            other => {
                return Err(field(
                    "provider.kind",
                    format!("unknown kind {other:?} (integers, jittered-integers, explicit-list, affine-lattice)"),
                ))
            }
        };
        if let Some(d) = delta {
            if d.cmp0().is_le() || d > *provider.delta() {
                return Err(field(
                    "provider.delta",
                    format!("{d} is not a valid separation; the provider guarantees {}", provider.delta()),
                ));
            }
        }
        Ok(provider)
    }
}
