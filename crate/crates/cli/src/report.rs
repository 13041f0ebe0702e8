//! JSON run reports with a canonical, round-trippable encoding.

use std::io::{self, Write};

use rbf_adapt::{AdaptiveConfig, IterationRecord, KernelFamily, RunResult, TargetFunction};
use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub target: TargetFunction,
    pub kernel: KernelFamily,
    pub theta_refine: f64,
    pub theta_coarse: f64,
    pub max_iter: usize,
    pub eps_min: f64,
    pub eps_max: f64,
    pub eps_tol: f64,
    pub eps_max_evals: usize,
    pub n0: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistoryEntry {
    pub k: usize,
    pub n_nodes: usize,
    pub eps_opt: f64,
    pub sigma2_opt: f64,
    pub n_refined: usize,
    pub n_coarsened: usize,
    pub n_skipped: usize,
    #[serde(with = "extended_f64")]
    pub max_residual: f64,
    #[serde(with = "extended_f64")]
    pub cond: f64,
}

impl From<&IterationRecord> for HistoryEntry {
    fn from(r: &IterationRecord) -> Self {
        Self {
            k: r.k,
            n_nodes: r.n_nodes,
            eps_opt: r.eps_opt,
            sigma2_opt: r.sigma2_opt,
            n_refined: r.n_refined,
            n_coarsened: r.n_coarsened,
            n_skipped: r.n_skipped,
            max_residual: r.max_residual,
            cond: r.cond,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FinalSummary {
    pub n_fin: usize,
    pub iter: usize,
    #[serde(with = "extended_f64")]
    pub mae: f64,
    #[serde(with = "extended_f64")]
    pub cond: f64,
    pub eps_opt: f64,
    /// Seconds spent in the adaptive loop, rounded to milliseconds.
    pub wall_time_s: f64,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub config: ConfigEcho,
    pub history: Vec<HistoryEntry>,
    #[serde(rename = "final")]
    pub summary: FinalSummary,
}

impl RunReport {
    pub fn new(
        target: TargetFunction,
        kernel: KernelFamily,
        cfg: &AdaptiveConfig,
        n0: usize,
        run: &RunResult,
        wall_time_s: f64,
    ) -> Self {
        Self {
            config: ConfigEcho {
                target,
                kernel,
                theta_refine: cfg.theta_refine,
                theta_coarse: cfg.theta_coarse,
                max_iter: cfg.max_iter,
                eps_min: cfg.shape.eps_min,
                eps_max: cfg.shape.eps_max,
                eps_tol: cfg.shape.tol,
                eps_max_evals: cfg.shape.max_evals,
                n0,
            },
            history: run.history.iter().map(HistoryEntry::from).collect(),
            summary: FinalSummary {
                n_fin: run.final_nodes.len(),
                iter: run.iterations(),
                mae: run.mae,
                cond: run.cond,
                eps_opt: run.eps_opt(),
                wall_time_s: round_millis(wall_time_s),
                converged: run.converged,
            },
        }
    }

    /// Canonical encoding: fields in declaration order, two-space indent,
    /// every float with 17 significant digits, trailing newline.
    pub fn to_canonical_json(&self) -> serde_json::Result<String> {
        let mut buf = Vec::new();
        let mut ser = serde_json::Serializer::with_formatter(&mut buf, CanonicalFormatter::default());
        self.serialize(&mut ser)?;
        buf.push(b'\n');
        Ok(String::from_utf8(buf).expect("serde_json writes UTF-8"))
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }
}

pub fn round_millis(seconds: f64) -> f64 {
    (seconds * 1000.0).round() / 1000.0
}

/// Pretty printer with fixed scientific float formatting.
#[derive(Default)]
pub struct CanonicalFormatter {
    inner: PrettyFormatter<'static>,
}

macro_rules! delegate {
    ($($name:ident($($arg:ident: $ty:ty),*);)*) => {
        $(
            fn $name<W: ?Sized + Write>(&mut self, w: &mut W $(, $arg: $ty)*) -> io::Result<()> {
                self.inner.$name(w $(, $arg)*)
            }
        )*
    };
}

impl Formatter for CanonicalFormatter {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, f64::from(value))
    }

    delegate! {
        begin_array();
        end_array();
        begin_array_value(first: bool);
        end_array_value();
        begin_object();
        end_object();
        begin_object_key(first: bool);
        begin_object_value();
        end_object_value();
    }
}

/// Floats that may be infinite (e.g. the condition number of a matrix whose
/// eigenvalues could not be resolved). Non-finite values are written as the
/// strings `"inf"`, `"-inf"` and `"nan"`.
mod extended_f64 {
    use serde::de::Error;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else if v.is_nan() {
            s.serialize_str("nan")
        } else if *v > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(v),
            Repr::Text(t) => match t.as_str() {
                "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                "nan" => Ok(f64::NAN),
                _ => Err(D::Error::custom(format!("invalid number {t:?}"))),
            },
        }
    }
}
