//! Machine-readable run reports.

use powergraph::rational::Rational;
use serde::{Serialize, Serializer};

/// JSON schema the reports conform to.
pub const RUN_REPORT_SCHEMA: &str = include_str!("../schema/run_report.schema.json");

/// Integers stay integers; other rationals become floats. The exact value is
/// carried alongside as a string.
fn as_number<S: Serializer>(value: &Rational, s: S) -> Result<S::Ok, S::Error> {
    if value.is_integer() {
        s.serialize_i64(value.to_integer())
    } else {
        s.serialize_f64(*value.numer() as f64 / *value.denom() as f64)
    }
}

fn opt_as_number<S: Serializer>(value: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
    match value {
        Some(v) => as_number(v, s),
        None => s.serialize_none(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub algo: String,
    pub model: String,
    pub n: usize,
    pub m: usize,
    pub eps: Option<String>,
    pub seed: u64,
    pub rounds: u64,
    pub messages: u64,
    pub max_message_bits: u64,
    pub violations: u64,
    #[serde(serialize_with = "as_number")]
    pub value: Rational,
    pub value_exact: String,
    pub feasible: bool,
    #[serde(serialize_with = "opt_as_number")]
    pub opt: Option<Rational>,
    pub ratio: Option<f64>,
    pub wall_ms: Option<f64>,
    pub members: Vec<usize>,
}

impl RunReport {
    pub fn set_opt(&mut self, opt: Rational) {
        self.opt = Some(opt);
        self.ratio = if opt == Rational::from_integer(0) {
            (self.value == opt).then_some(1.0)
        } else {
            let r = self.value / opt;
            Some(*r.numer() as f64 / *r.denom() as f64)
        };
    }
}

/// One CSV line of a sweep: the report without its vertex list, keyed by
/// the instance it ran on.
#[derive(Clone, Debug, Serialize)]
pub struct SweepRow<'a> {
    pub instance: &'a str,
    pub algo: &'a str,
    pub model: &'a str,
    pub n: usize,
    pub m: usize,
    pub eps: Option<&'a str>,
    pub seed: u64,
    pub rounds: u64,
    pub messages: u64,
    pub max_message_bits: u64,
    pub violations: u64,
    pub value: &'a str,
    pub feasible: bool,
    pub opt: Option<String>,
    pub ratio: Option<f64>,
    pub wall_ms: Option<f64>,
}

impl<'a> SweepRow<'a> {
    pub fn new(instance: &'a str, r: &'a RunReport) -> Self {
        Self {
            instance,
            algo: &r.algo,
            model: &r.model,
            n: r.n,
            m: r.m,
            eps: r.eps.as_deref(),
            seed: r.seed,
            rounds: r.rounds,
            messages: r.messages,
            max_message_bits: r.max_message_bits,
            violations: r.violations,
            value: &r.value_exact,
            feasible: r.feasible,
            opt: r.opt.map(|o| o.to_string()),
            ratio: r.ratio,
            wall_ms: r.wall_ms,
        }
    }
}
