//! Reports: a list of named checks plus command-specific data, rendered
//! either as text or as versioned JSON.

use serde::Serialize;
use serde_json::{Map, Value};

pub const REPORT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub report_version: u32,
    pub command: String,
    pub subject: String,
    pub pass: bool,
    pub checks: Vec<Check>,
    /// Computed quantities (central charges, residuals, …), keyed by name.
    pub data: Map<String, Value>,
}

impl Report {
    pub fn new(command: &str, subject: &str) -> Report {
        Report {
            report_version: REPORT_VERSION,
            command: command.to_string(),
            subject: subject.to_string(),
            pass: true,
            checks: Vec::new(),
            data: Map::new(),
        }
    }

    pub fn check(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.pass &= pass;
        self.checks.push(Check { name: name.into(), pass, detail: detail.into() });
    }

    pub fn datum(&mut self, key: &str, value: impl Into<Value>) {
        self.data.insert(key.to_string(), value.into());
    }

    pub fn json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn text(&self) -> String {
        let mut out = format!("{} — {}\n", self.command, self.subject);
        for c in &self.checks {
            let mark = if c.pass { "ok  " } else { "FAIL" };
            out.push_str(&format!("  [{mark}] {}", c.name));
            if !c.detail.is_empty() {
                out.push_str(&format!(": {}", c.detail));
            }
            out.push('\n');
        }
        for (k, v) in &self.data {
            let shown = match v {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            out.push_str(&format!("  {k} = {shown}\n"));
        }
        out.push_str(if self.pass { "PASS\n" } else { "FAIL\n" });
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn failing_check_fails_the_report() {
        let mut r = Report::new("n2", "demo");
        r.check("first", true, "");
        assert!(r.pass);
        r.check("second", false, "residual 1");
        assert!(!r.pass);
        r.datum("c", "6");
        let text = r.text();
        assert!(text.contains("[FAIL] second: residual 1"));
        assert!(text.ends_with("FAIL\n"));
        let v: Value = serde_json::from_str(&r.json()).unwrap();
        assert_eq!(v["report_version"], REPORT_VERSION);
        assert_eq!(v["checks"][0]["name"], "first");
        assert!(v["checks"][0].get("detail").is_none());
        assert_eq!(v["data"]["c"], "6");
    }
}
