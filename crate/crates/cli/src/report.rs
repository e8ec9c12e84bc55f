//! Reports: a pass/fail list, structured data, and two renderings.

use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Markdown,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckLine {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub passed: bool,
    pub checks: Vec<CheckLine>,
    pub data: Value,
    /// Extra markdown lines in the usual notation (θ, α, g̃, ζ).
    #[serde(skip)]
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Report {
            command: command.into(),
            passed: true,
            checks: Vec::new(),
            data: Value::Null,
            notes: Vec::new(),
        }
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.passed &= passed;
        self.checks.push(CheckLine {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }

    pub fn note(&mut self, line: impl Into<String>) {
        self.notes.push(line.into());
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(self).expect("report serialises") + "\n",
            Format::Markdown => self.markdown(),
        }
    }

    fn markdown(&self) -> String {
        let mut out = format!("# tetk {}\n\n", self.command);
        out += &format!("**{}**\n\n", if self.passed { "PASS" } else { "FAIL" });
        for c in &self.checks {
            let mark = if c.passed { "pass" } else { "FAIL" };
            out += &format!("- [{mark}] {}", c.name);
            if !c.detail.is_empty() {
                out += &format!(": {}", c.detail);
            }
            out += "\n";
        }
        if !self.notes.is_empty() {
            out += "\n";
            for n in &self.notes {
                out += "* ";
                out += n;
                out += "\n";
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_failure_fails_the_report() {
        let mut r = Report::new("x");
        r.check("a", true, "");
        assert!(r.passed);
        r.check("b", false, "witness");
        r.check("c", true, "");
        assert!(!r.passed);
        assert_eq!(r.checks.len(), 3);
    }

    #[test]
    fn json_is_stable_and_skips_notes() {
        let mut r = Report::new("x");
        r.check("a", true, "");
        r.note("only in markdown");
        r.data = serde_json::json!({"b": 1, "a": 2});
        let text = r.render(Format::Json);
        assert_eq!(text, r.render(Format::Json));
        assert!(!text.contains("only in markdown"));
        assert!(text.find("\"a\"").unwrap() < text.find("\"b\"").unwrap());
        assert!(r.render(Format::Markdown).contains("* only in markdown"));
    }
}
