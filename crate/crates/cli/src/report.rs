//! The `{version, config, verdicts, summary}` envelope and its JSON, CSV and
//! text renderings.
//!
//! JSON goes through `serde_json::Value`, whose maps keep keys sorted, so
//! parsing a report and serializing it again reproduces it byte for byte.

use kaudit_core::audit::Verdict;
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::Format;

pub const REPORT_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone)]
pub struct Report {
    pub command: &'static str,
    pub config: Value,
    pub verdicts: Vec<Verdict>,
    pub summary: Value,
    /// Extra lines for text output, already formatted.
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(command: &'static str, config: impl Serialize) -> Self {
        Self { command, config: to_value(&config), verdicts: Vec::new(), summary: Value::Null, notes: Vec::new() }
    }

    pub fn all_passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }

    pub fn to_value(&self) -> Value {
        json!({
            "version": REPORT_VERSION,
            "command": self.command,
            "config": self.config,
            "verdicts": to_value(&self.verdicts),
            "summary": self.summary,
        })
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv(),
            Format::Text => self.to_text(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(&self.to_value()).expect("values always serialize");
        out.push('\n');
        out
    }

    /// One row per verdict.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["check_id", "function", "s", "p", "q", "m", "M", "n", "seed", "index", "regime", "lhs", "rhs", "margin", "passed", "marginal"])
            .expect("in-memory writer");
        for v in &self.verdicts {
            let opt = |x: Option<f64>| x.map(|x| x.to_string()).unwrap_or_default();
            let p = &v.params;
            w.write_record([
                v.check_id.clone(),
                p.function.clone().unwrap_or_default(),
                opt(p.s),
                opt(p.p),
                opt(p.q),
                p.m.to_string(),
                p.upper.to_string(),
                p.n.to_string(),
                p.seed.map(|s| s.to_string()).unwrap_or_default(),
                p.index.map(|i| i.to_string()).unwrap_or_default(),
                v.regime.map(|r| r.to_string()).unwrap_or_default(),
                v.lhs.to_string(),
                v.rhs.to_string(),
                v.margin.to_string(),
                v.passed.to_string(),
                v.marginal.to_string(),
            ])
            .expect("in-memory writer");
        }
        String::from_utf8(w.into_inner().expect("in-memory writer")).expect("csv output is utf-8")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for v in &self.verdicts {
            out.push_str(&verdict_line(v));
            out.push('\n');
        }
        for line in &self.notes {
            out.push_str(line);
            out.push('\n');
        }
        out
    }
}

fn to_value(x: &impl Serialize) -> Value {
    serde_json::to_value(x).expect("report types always serialize")
}

/// Six fractional digits, the precision of the text format.
pub fn fixed(x: f64) -> String {
    format!("{x:.6}")
}

pub fn verdict_line(v: &Verdict) -> String {
    let status = match (v.passed, v.marginal) {
        (true, false) => "PASS",
        (true, true) => "PASS (marginal)",
        (false, true) => "FAIL (marginal)",
        (false, false) => "FAIL",
    };
    let regime = v.regime.map(|r| format!(" [{r}]")).unwrap_or_default();
    format!("{:<22} lhs {} rhs {} margin {}{regime} {status}", v.check_id, fixed(v.lhs), fixed(v.rhs), fixed(v.margin))
}

/// Parses a JSON report and serializes it again in canonical form.
pub fn canonicalize(text: &str) -> serde_json::Result<String> {
    let value: Value = serde_json::from_str(text)?;
    let mut out = serde_json::to_string_pretty(&value)?;
    out.push('\n');
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use kaudit_core::audit::{verify_classical_kantorovich, Operator};
    use kaudit_core::{HermitianMatrix, UnitVector};

    fn sample() -> Report {
        let op = Operator::new(HermitianMatrix::diagonal(&[1.0, 2.0]).unwrap()).unwrap();
        let mut r = Report::new("verify", json!({"check": "classical"}));
        r.verdicts.push(verify_classical_kantorovich(&op, &UnitVector::balanced_pair()).unwrap());
        r.summary = json!({"third": 1.0 / 3.0, "tiny": 1e-300});
        r
    }

    #[test]
    fn json_round_trips() {
        let text = sample().to_json();
        assert_eq!(canonicalize(&text).unwrap(), text);
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["summary"]["third"].as_f64().unwrap(), 1.0 / 3.0);
        for key in ["check_id", "params", "regime", "lhs", "rhs", "margin", "passed"] {
            assert!(v["verdicts"][0].get(key).is_some(), "{key}");
        }
    }

    #[test]
    fn csv_and_text() {
        let r = sample();
        let csv = r.to_csv();
        assert_eq!(csv.lines().count(), 2);
        assert!(csv.lines().nth(1).unwrap().starts_with("classical-kantorovich,"));
        let text = r.to_text();
        assert!(text.contains("lhs 1.125000 rhs 1.125000"));
        assert!(text.contains("PASS"));
    }
}
