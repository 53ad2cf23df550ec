//! Line-oriented `key = value` text used for domain and experiment files.
//!
//! Blank lines and lines starting with `#` are ignored. Keys are unique.
//! Floats are written with Rust's shortest round-trip formatting, so a value
//! written and re-read is bit-identical.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, Debug, Default)]
pub struct KvDoc {
    entries: BTreeMap<String, (usize, String)>,
}

impl KvDoc {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(Error::Parse { line: i + 1, message: format!("expected `key = value`, got `{line}`") });
            };
            let key = k.trim().to_string();
            if key.is_empty() {
                return Err(Error::Parse { line: i + 1, message: "empty key".into() });
            }
            if entries.insert(key.clone(), (i + 1, v.trim().to_string())).is_some() {
                return Err(Error::Parse { line: i + 1, message: format!("duplicate key `{key}`") });
            }
        }
        Ok(Self { entries })
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|(_, v)| v.as_str())
    }

    pub fn has(&self, key: &str) -> bool {
        self.entries.contains_key(key)
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    fn line(&self, key: &str) -> usize {
        self.entries.get(key).map_or(0, |(l, _)| *l)
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        match self.raw(key) {
            None => Ok(None),
            Some(v) => v.parse::<T>().map(Some).map_err(|_| Error::Parse {
                line: self.line(key),
                message: format!("cannot parse `{v}` for `{key}`"),
            }),
        }
    }

    pub fn require<T: FromStr>(&self, key: &str) -> Result<T> {
        self.get(key)?.ok_or_else(|| Error::Parse { line: 0, message: format!("missing key `{key}`") })
    }

    /// Comma-separated list.
    pub fn list<T: FromStr>(&self, key: &str) -> Result<Option<Vec<T>>> {
        let Some(v) = self.raw(key) else { return Ok(None) };
        if v.is_empty() {
            return Ok(Some(Vec::new()));
        }
        v.split(',')
            .map(|s| {
                s.trim().parse::<T>().map_err(|_| Error::Parse {
                    line: self.line(key),
                    message: format!("cannot parse list item `{}` for `{key}`", s.trim()),
                })
            })
            .collect::<Result<Vec<T>>>()
            .map(Some)
    }

    /// Semicolon-separated triples of whitespace-separated floats.
    pub fn vectors(&self, key: &str) -> Result<Option<Vec<[f64; 3]>>> {
        let Some(v) = self.raw(key) else { return Ok(None) };
        let mut out = Vec::new();
        for item in v.split(';').map(str::trim).filter(|s| !s.is_empty()) {
            let parts: Vec<&str> = item.split_whitespace().collect();
            if parts.len() != 3 {
                return Err(Error::Parse { line: self.line(key), message: format!("expected three coordinates in `{item}`") });
            }
            let mut p = [0.0; 3];
            for (slot, s) in p.iter_mut().zip(parts) {
                *slot = s.parse().map_err(|_| Error::Parse {
                    line: self.line(key),
                    message: format!("bad coordinate `{s}`"),
                })?;
            }
            out.push(p);
        }
        Ok(Some(out))
    }
}

/// Accumulates `key = value` lines in insertion order.
#[derive(Default)]
pub struct KvWriter {
    out: String,
}

impl KvWriter {
    pub fn new(header: &str) -> Self {
        Self { out: format!("# {header}\n") }
    }

    pub fn put(&mut self, key: &str, value: impl std::fmt::Display) -> &mut Self {
        let _ = writeln!(self.out, "{key} = {value}");
        self
    }

    pub fn float(&mut self, key: &str, v: f64) -> &mut Self {
        let _ = writeln!(self.out, "{key} = {v:?}");
        self
    }

    pub fn floats(&mut self, key: &str, vs: &[f64]) -> &mut Self {
        let s: Vec<String> = vs.iter().map(|v| format!("{v:?}")).collect();
        self.put(key, s.join(", "))
    }

    pub fn list<T: std::fmt::Display>(&mut self, key: &str, vs: &[T]) -> &mut Self {
        let s: Vec<String> = vs.iter().map(|v| v.to_string()).collect();
        self.put(key, s.join(", "))
    }

    pub fn vectors(&mut self, key: &str, vs: &[[f64; 3]]) -> &mut Self {
        let s: Vec<String> = vs.iter().map(|p| format!("{:?} {:?} {:?}", p[0], p[1], p[2])).collect();
        self.put(key, s.join("; "))
    }

    pub fn finish(self) -> String {
        self.out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_rejects() {
        let doc = KvDoc::parse("# c\n a = 1.5\nlist = 1, 2,3\nv = 1 0 0; 0 1 0\n").unwrap();
        assert_eq!(doc.require::<f64>("a").unwrap(), 1.5);
        assert_eq!(doc.list::<u32>("list").unwrap().unwrap(), vec![1, 2, 3]);
        assert_eq!(doc.vectors("v").unwrap().unwrap().len(), 2);
        assert!(KvDoc::parse("a = 1\na = 2").is_err());
        assert!(KvDoc::parse("nonsense").is_err());
    }
}
