//! Parameter resolution: command-line flags over a key=value file over defaults.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use hermite_cs::hermite::AlphaParam;
use hermite_cs::C64;
use serde_json::{Map, Value};

use crate::report::{cplx, num};

/// Raised for anything the user has to fix: exit status 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

pub type Usage<T> = Result<T, UsageError>;

pub fn usage<T>(msg: impl Into<String>) -> Usage<T> {
    Err(UsageError(msg.into()))
}

/// Keys are compared with `_` folded into `-`.
pub fn norm_key(k: &str) -> String {
    k.trim().replace('_', "-").to_ascii_lowercase()
}

/// Reads `key = value` lines; `#` starts a comment.
pub fn parse_config(text: &str) -> Usage<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return usage(format!("config line {}: expected key = value, got {raw:?}", i + 1));
        };
        let key = norm_key(k);
        if key.is_empty() {
            return usage(format!("config line {}: empty key", i + 1));
        }
        if out.insert(key.clone(), v.trim().to_string()).is_some() {
            return usage(format!("config line {}: duplicate key {key}", i + 1));
        }
    }
    Ok(out)
}

pub fn read_config(path: &Path) -> Usage<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| UsageError(format!("cannot read config {}: {e}", path.display())))?;
    parse_config(&text)
}

/// Merged raw values plus a record of what each command actually read.
#[derive(Debug, Default)]
pub struct Params {
    raw: BTreeMap<String, String>,
    resolved: Map<String, Value>,
}

impl Params {
    /// `flags` win over `file`.
    pub fn new(file: BTreeMap<String, String>, flags: BTreeMap<String, String>) -> Self {
        let mut raw = file;
        raw.extend(flags);
        Self { raw, resolved: Map::new() }
    }

    pub fn has(&self, key: &str) -> bool {
        self.raw.contains_key(key)
    }

    /// Raw keys no command lookup has touched.
    pub fn unused(&self) -> Vec<String> {
        self.raw.keys().filter(|k| !self.resolved.contains_key(*k)).cloned().collect()
    }

    pub fn into_resolved(self) -> Map<String, Value> {
        self.resolved
    }

    fn get<T>(&mut self, key: &str, parse: impl Fn(&str) -> Option<T>, what: &str) -> Usage<Option<T>> {
        match self.raw.get(key) {
            None => Ok(None),
            Some(s) => match parse(s.trim()) {
                Some(v) => Ok(Some(v)),
                None => usage(format!("--{key}: expected {what}, got {s:?}")),
            },
        }
    }

    pub fn f64_or(&mut self, key: &str, default: f64) -> Usage<f64> {
        let v = self.get(key, |s| s.parse::<f64>().ok().filter(|x| x.is_finite()), "a finite number")?.unwrap_or(default);
        self.resolved.insert(key.into(), num(v));
        Ok(v)
    }

    pub fn positive(&mut self, key: &str, default: f64) -> Usage<f64> {
        let v = self.f64_or(key, default)?;
        if v > 0.0 {
            Ok(v)
        } else {
            usage(format!("--{key} must be positive, got {v}"))
        }
    }

    pub fn usize_in(&mut self, key: &str, default: usize, lo: usize, hi: usize) -> Usage<usize> {
        let v = self.get(key, |s| s.parse::<usize>().ok(), "a non-negative integer")?.unwrap_or(default);
        if v < lo || v > hi {
            return usage(format!("--{key} must lie in [{lo}, {hi}], got {v}"));
        }
        self.resolved.insert(key.into(), Value::from(v));
        Ok(v)
    }

    pub fn complex_or(&mut self, key: &str, default: C64) -> Usage<C64> {
        let v = self.get(key, parse_complex, "a complex number like 0.3-0.4i")?.unwrap_or(default);
        self.resolved.insert(key.into(), cplx(v));
        Ok(v)
    }

    pub fn complex_list(&mut self, key: &str, default: &[C64]) -> Usage<Vec<C64>> {
        let v = self
            .get(key, |s| s.split(',').map(|t| parse_complex(t.trim())).collect::<Option<Vec<_>>>(), "a comma list of complex numbers")?
            .unwrap_or_else(|| default.to_vec());
        if v.is_empty() {
            return usage(format!("--{key} is empty"));
        }
        self.resolved.insert(key.into(), Value::Array(v.iter().map(|&z| cplx(z)).collect()));
        Ok(v)
    }

    pub fn f64_list(&mut self, key: &str, default: &[f64]) -> Usage<Vec<f64>> {
        let v = self
            .get(
                key,
                |s| s.split(',').map(|t| t.trim().parse::<f64>().ok().filter(|x| x.is_finite())).collect::<Option<Vec<_>>>(),
                "a comma list of numbers",
            )?
            .unwrap_or_else(|| default.to_vec());
        if v.is_empty() {
            return usage(format!("--{key} is empty"));
        }
        self.resolved.insert(key.into(), Value::Array(v.iter().map(|&x| num(x)).collect()));
        Ok(v)
    }

    pub fn choice(&mut self, key: &str, default: &str, allowed: &[&str]) -> Usage<String> {
        let v = self.raw.get(key).map(|s| s.trim().to_ascii_lowercase()).unwrap_or_else(|| default.to_string());
        if !allowed.contains(&v.as_str()) {
            return usage(format!("--{key}: expected one of {}, got {v:?}", allowed.join(", ")));
        }
        self.resolved.insert(key.into(), Value::from(v.clone()));
        Ok(v)
    }

    pub fn flag(&mut self, key: &str) -> Usage<bool> {
        let v = self
            .get(
                key,
                |s| match s.to_ascii_lowercase().as_str() {
                    "" | "1" | "true" | "yes" | "on" => Some(true),
                    "0" | "false" | "no" | "off" => Some(false),
                    _ => None,
                },
                "true or false",
            )?
            .unwrap_or(false);
        self.resolved.insert(key.into(), Value::from(v));
        Ok(v)
    }

    pub fn string(&mut self, key: &str) -> Option<String> {
        let v = self.raw.get(key).cloned();
        if let Some(s) = &v {
            self.resolved.insert(key.into(), Value::from(s.clone()));
        }
        v
    }

    pub fn alpha(&mut self, default: f64) -> Usage<AlphaParam> {
        let a = self.f64_or("alpha", default)?;
        AlphaParam::new(a).map_err(|_| UsageError(format!("--alpha must lie in (0, 1), got {a}")))
    }

    pub fn alpha_list(&mut self, key: &str, default: &[f64]) -> Usage<Vec<f64>> {
        let v = self.f64_list(key, default)?;
        if let Some(a) = v.iter().find(|&&a| !(a > 0.0 && a < 1.0)) {
            return usage(format!("--{key}: every alpha must lie in (0, 1), got {a}"));
        }
        Ok(v)
    }
}

/// `0.3`, `-0.2+1.5i`, `2i`, `1e-3-2e-1i`.
pub fn parse_complex(s: &str) -> Option<C64> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    s.replace('j', "i").parse::<C64>().ok().filter(|z| z.is_finite())
}
