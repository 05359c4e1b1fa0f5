//! Report assembly and serialization.

use std::io::Write;

use hermite_cs::C64;
use serde_json::{Map, Number, Value};

/// A number printed with 17 significant digits; non-finite values become null.
pub fn num(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let s = format!("{x:.16e}");
    match s.parse::<Number>() {
        Ok(n) => Value::Number(n),
        Err(_) => Value::Null,
    }
}

pub fn cplx(z: C64) -> Value {
    let mut m = Map::new();
    m.insert("re".into(), num(z.re));
    m.insert("im".into(), num(z.im));
    Value::Object(m)
}

pub fn nums(v: &[f64]) -> Value {
    Value::Array(v.iter().map(|&x| num(x)).collect())
}

pub fn cplxs(v: &[C64]) -> Value {
    Value::Array(v.iter().map(|&z| cplx(z)).collect())
}

/// Same text as [`num`], for CSV cells.
pub fn cell(x: f64) -> String {
    match num(x) {
        Value::Number(n) => n.to_string(),
        _ => String::new(),
    }
}

#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    pub fn at_most(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self { name: name.into(), value, tolerance, pass: value <= tolerance }
    }

    pub fn above(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self { name: name.into(), value, tolerance, pass: value > tolerance }
    }

    /// Boolean outcome; value 1 for true.
    pub fn holds(name: impl Into<String>, ok: bool) -> Self {
        Self { name: name.into(), value: if ok { 1.0 } else { 0.0 }, tolerance: 1.0, pass: ok }
    }
}

/// Tabular data for CSV output.
#[derive(Clone, Debug, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }
}

/// What a subcommand hands back to the driver.
#[derive(Debug, Default)]
pub struct Outcome {
    pub results: Map<String, Value>,
    pub checks: Vec<Check>,
    pub warnings: Vec<String>,
    pub table: Option<Table>,
}

impl Outcome {
    pub fn result(&mut self, key: &str, v: Value) {
        self.results.insert(key.into(), v);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

pub struct Report {
    pub command: String,
    pub parameters: Map<String, Value>,
    pub outcome: Outcome,
    pub wall_time_s: f64,
}

impl Report {
    pub fn to_json(&self) -> Value {
        let checks = self
            .outcome
            .checks
            .iter()
            .map(|c| {
                let mut m = Map::new();
                m.insert("name".into(), Value::from(c.name.clone()));
                m.insert("value".into(), num(c.value));
                m.insert("tolerance".into(), num(c.tolerance));
                m.insert("pass".into(), Value::from(c.pass));
                Value::Object(m)
            })
            .collect();
        let mut m = Map::new();
        m.insert("command".into(), Value::from(self.command.clone()));
        m.insert("parameters".into(), Value::Object(self.parameters.clone()));
        m.insert("results".into(), Value::Object(self.outcome.results.clone()));
        m.insert("checks".into(), Value::Array(checks));
        m.insert("warnings".into(), Value::Array(self.outcome.warnings.iter().cloned().map(Value::from).collect()));
        m.insert("wall_time_s".into(), num(self.wall_time_s));
        Value::Object(m)
    }

    pub fn write_json(&self, out: &mut dyn Write) -> std::io::Result<()> {
        serde_json::to_writer_pretty(&mut *out, &self.to_json())?;
        writeln!(out)
    }

    /// The command's table, or the checks when it has none.
    pub fn write_csv(&self, out: &mut dyn Write) -> std::io::Result<()> {
        let fallback;
        let table = match &self.outcome.table {
            Some(t) => t,
            None => {
                let mut t = Table::new(&["name", "value", "tolerance", "pass"]);
                for c in &self.outcome.checks {
                    t.push(vec![c.name.clone(), cell(c.value), cell(c.tolerance), c.pass.to_string()]);
                }
                fallback = t;
                &fallback
            }
        };
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&table.header)?;
        for r in &table.rows {
            w.write_record(r)?;
        }
        w.flush()
    }
}
