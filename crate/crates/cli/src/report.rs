//! Line-oriented `kind key=value ...` records.

use std::fmt::{self, Display};

/// One output line: a record kind followed by ordered fields.
#[derive(Debug, Clone)]
pub struct Record {
    kind: String,
    fields: Vec<(String, String)>,
}

impl Record {
    pub fn new(kind: impl Into<String>) -> Self {
        Self { kind: kind.into(), fields: Vec::new() }
    }

    pub fn field(mut self, key: &str, value: impl Display) -> Self {
        self.fields.push((key.to_owned(), value.to_string()));
        self
    }

    /// `pass=true|false` with the tolerance it was judged against.
    pub fn check(self, pass: bool, tolerance: f64) -> Self {
        self.field("tolerance", format!("{tolerance:e}")).field("pass", pass)
    }
}

fn quote(value: &str) -> String {
    if value.is_empty() || value.chars().any(|c| c.is_whitespace() || c == '"' || c == '=' || c == '\\') {
        format!("{value:?}")
    } else {
        value.to_owned()
    }
}

impl Display for Record {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.kind)?;
        for (k, v) in &self.fields {
            write!(f, " {k}={}", quote(v))?;
        }
        Ok(())
    }
}

/// Records in emission order plus the number of failed checks.
#[derive(Debug, Default)]
pub struct Report {
    records: Vec<Record>,
    failures: usize,
}

impl Report {
    pub fn push(&mut self, record: Record) {
        self.records.push(record);
    }

    /// Pushes a record carrying a check and counts it if it failed.
    pub fn push_check(&mut self, record: Record, pass: bool, tolerance: f64) {
        if !pass {
            self.failures += 1;
        }
        self.records.push(record.check(pass, tolerance));
    }

    pub fn failures(&self) -> usize {
        self.failures
    }

    pub fn records(&self) -> &[Record] {
        &self.records
    }
}

impl Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.records {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quoting() {
        let r = Record::new("x").field("a", 1).field("b", "two words").field("c", "");
        assert_eq!(r.to_string(), r#"x a=1 b="two words" c="""#);
    }

    #[test]
    fn failures_are_counted() {
        let mut rep = Report::default();
        rep.push_check(Record::new("ok"), true, 1e-8);
        rep.push_check(Record::new("bad"), false, 1e-8);
        assert_eq!(rep.failures(), 1);
        assert_eq!(rep.to_string(), "ok tolerance=1e-8 pass=true\nbad tolerance=1e-8 pass=false\n");
    }
}
