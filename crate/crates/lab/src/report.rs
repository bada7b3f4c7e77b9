//! Check reports and their JSON / CSV forms.
//!
//! JSON numbers carry 17 significant digits, so every `f64` survives a round
//! trip exactly. CSV numbers carry 9.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{LabError, Result};

/// Which way the inequality of a check points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// `lhs >= rhs - slack`
    AtLeast,
    /// `lhs <= rhs + slack`
    AtMost,
    /// `|lhs - rhs| <= slack`
    Equal,
}

impl Relation {
    pub fn holds(self, lhs: f64, rhs: f64, slack: f64) -> bool {
        match self {
            Relation::AtLeast => lhs >= rhs - slack,
            Relation::AtMost => lhs <= rhs + slack,
            Relation::Equal => (lhs - rhs).abs() <= slack,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Params {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub function: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check_id: String,
    /// Acceptance criterion this check belongs to, if any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub criterion: Option<u8>,
    pub params: Params,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub stderr: f64,
    pub relation: Relation,
    pub pass: bool,
    /// Wall time. The only field that is not reproducible from the seed.
    pub runtime_ms: f64,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub extra: BTreeMap<String, Value>,
}

impl CheckReport {
    /// A report whose `pass` flag follows from `relation`.
    pub fn new(check_id: impl Into<String>, lhs: f64, relation: Relation, rhs: f64, slack: f64) -> Self {
        let mut r = Self {
            check_id: check_id.into(),
            criterion: None,
            params: Params::default(),
            lhs,
            rhs,
            slack,
            stderr: 0.0,
            relation,
            pass: false,
            runtime_ms: 0.0,
            extra: BTreeMap::new(),
        };
        r.pass = r.evaluate();
        r
    }

    /// Recomputes the pass flag from the stored fields. NaN never passes.
    pub fn evaluate(&self) -> bool {
        self.relation.holds(self.lhs, self.rhs, self.slack)
    }

    /// A failed report carrying an error message, for checks that could not run.
    pub fn errored(check_id: impl Into<String>, message: impl Into<String>) -> Self {
        let mut r = Self::new(check_id, f64::NAN, Relation::Equal, f64::NAN, 0.0);
        r.extra.insert("error".into(), Value::String(message.into()));
        r
    }

    pub fn stderr(mut self, stderr: f64) -> Self {
        self.stderr = stderr;
        self
    }

    pub fn function(mut self, name: impl Into<String>) -> Self {
        self.params.function = Some(name.into());
        self
    }

    pub fn n(mut self, n: usize) -> Self {
        self.params.n = Some(n);
        self
    }

    pub fn t(mut self, t: f64) -> Self {
        self.params.t = Some(t);
        self
    }

    pub fn s(mut self, s: f64) -> Self {
        self.params.s = Some(s);
        self
    }

    pub fn r(mut self, r: f64) -> Self {
        self.params.r = Some(r);
        self
    }

    pub fn mc(mut self, seed: u64, samples: usize) -> Self {
        self.params.seed = Some(seed);
        self.params.samples = Some(samples);
        self
    }

    pub fn extra(mut self, key: &str, value: impl Serialize) -> Self {
        let v = serde_json::to_value(value).unwrap_or(Value::Null);
        self.extra.insert(key.to_string(), v);
        self
    }

    /// Forces a verdict the relation alone cannot express (for example a
    /// vacuous comparison).
    pub fn with_pass(mut self, pass: bool) -> Self {
        self.pass = pass;
        self
    }
}

/// `serde_json` formatter printing every `f64` with 17 significant digits.
#[derive(Debug, Clone, Default)]
pub struct FullPrecision<F = serde_json::ser::PrettyFormatter<'static>> {
    inner: F,
}

macro_rules! delegate {
    ($($name:ident($($arg:ident: $ty:ty),*)),* $(,)?) => {
        $(
            fn $name<W: ?Sized + Write>(&mut self, w: &mut W $(, $arg: $ty)*) -> io::Result<()> {
                self.inner.$name(w $(, $arg)*)
            }
        )*
    };
}

impl<F: serde_json::ser::Formatter> serde_json::ser::Formatter for FullPrecision<F> {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, f64::from(value))
    }

    delegate!(
        begin_array(),
        end_array(),
        begin_array_value(first: bool),
        end_array_value(),
        begin_object(),
        end_object(),
        begin_object_key(first: bool),
        end_object_key(),
        begin_object_value(),
        end_object_value(),
    );
}

/// Pretty-printed JSON with full-precision numbers.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, FullPrecision::<serde_json::ser::PrettyFormatter>::default());
    value.serialize(&mut ser)?;
    Ok(String::from_utf8(buf).expect("serde_json emits UTF-8"))
}

pub fn reports_from_json(text: &str) -> Result<Vec<CheckReport>> {
    Ok(serde_json::from_str(text)?)
}

pub const CSV_HEADER: &str = "check_id,n,t,lhs,rhs,slack,pass";

pub fn to_csv(reports: &[CheckReport]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in reports {
        let n = r.params.n.map(|n| n.to_string()).unwrap_or_default();
        let t = r.params.t.map(csv_num).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            csv_field(&r.check_id),
            n,
            t,
            csv_num(r.lhs),
            csv_num(r.rhs),
            csv_num(r.slack),
            r.pass
        ));
    }
    out
}

fn csv_num(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.8e}")
    } else {
        v.to_string()
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Writes `report.json` and `report.csv` into `dir`, creating it if needed.
pub fn emit(dir: &Path, reports: &[CheckReport]) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| LabError::io(dir, e))?;
    let json = dir.join("report.json");
    fs::write(&json, to_json(reports)?).map_err(|e| LabError::io(&json, e))?;
    let csv = dir.join("report.csv");
    fs::write(&csv, to_csv(reports)).map_err(|e| LabError::io(&csv, e))?;
    Ok(())
}
