//! Line-oriented `key = value` text documents.

use crate::{Error, Result};

#[derive(Debug, Default, Clone, PartialEq)]
pub struct KvDoc {
    entries: Vec<(String, String, usize)>,
}

impl KvDoc {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.entries.push((key.to_string(), value.to_string(), 0));
        self
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut entries: Vec<(String, String, usize)> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::parse(format!("line {line_no}"), "expected `key = value`"))?;
            let (k, v) = (k.trim(), v.trim());
            if k.is_empty() {
                return Err(Error::parse(format!("line {line_no}"), "empty key"));
            }
            if entries.iter().any(|(e, _, _)| e == k) {
                return Err(Error::parse(
                    format!("line {line_no} (field `{k}`)"),
                    "duplicate field",
                ));
            }
            entries.push((k.to_string(), v.to_string(), line_no));
        }
        Ok(Self { entries })
    }

    pub fn render(&self, header: &str) -> String {
        let mut out = format!("# {header}\n");
        for (k, v, _) in &self.entries {
            out.push_str(k);
            out.push_str(" = ");
            out.push_str(v);
            out.push('\n');
        }
        out
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find(|(k, _, _)| k == key).map(|(_, v, _)| v.as_str())
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|(k, _, _)| k.as_str())
    }

    fn location(&self, key: &str) -> String {
        match self.entries.iter().find(|(k, _, _)| k == key) {
            Some((_, _, line)) if *line > 0 => format!("line {line} (field `{key}`)"),
            _ => format!("field `{key}`"),
        }
    }

    pub fn require(&self, key: &str) -> Result<&str> {
        self.get(key)
            .ok_or_else(|| Error::parse(format!("field `{key}`"), "missing required field"))
    }

    pub fn require_parsed<V: std::str::FromStr>(&self, key: &str) -> Result<V>
    where
        V::Err: std::fmt::Display,
    {
        let raw = self.require(key)?;
        raw.parse()
            .map_err(|e| Error::parse(self.location(key), format!("invalid value `{raw}`: {e}")))
    }

    pub fn error_at(&self, key: &str, message: impl Into<String>) -> Error {
        Error::parse(self.location(key), message)
    }
}
