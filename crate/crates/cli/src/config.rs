//! Flat scenario files: one `key = value` per line, `#` starts a comment,
//! comma-separated values form a list (only meaningful to `sweep`).

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::error::CliError;

/// Every key a scenario file may contain.
pub const KNOWN_KEYS: &[&str] = &[
    "manifold",
    "n",
    "profile_curvature",
    "beta",
    "profile_file",
    "weight",
    "weight_scale",
    "weight_alpha",
    "weight_file",
    "growth",
    "growth_c",
    "growth_file",
    "growth_tail_power",
    "variant",
    "delta",
    "a",
    "k",
    "H",
    "b",
    "r0",
    "nu",
    "delta1",
    "eps",
    "eps1",
    "C",
    "alpha",
    "t",
    "step",
    "r_max_test",
    "t_probe",
    "c3_convention",
    "known_compact",
    "workflow",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    /// Source line, or `None` for command-line overrides.
    pub line: Option<usize>,
    pub value: String,
}

impl Entry {
    pub fn is_list(&self) -> bool {
        self.value.contains(',') || self.value.trim().is_empty()
    }

    pub fn items(&self) -> Vec<String> {
        if self.value.trim().is_empty() {
            return Vec::new();
        }
        self.value.split(',').map(|s| s.trim().to_string()).collect()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Config {
    entries: BTreeMap<String, Entry>,
    base_dir: Option<PathBuf>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut cfg = Config::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or_else(|| CliError::Config {
                line,
                message: format!("expected `key = value`, found `{content}`"),
            })?;
            let key = key.trim();
            check_key(key).map_err(|message| CliError::Config { line, message })?;
            if let Some(prev) = cfg.entries.get(key) {
                return Err(CliError::Config {
                    line,
                    message: format!("duplicate key `{key}` (first set on line {})", prev.line.unwrap_or(0)),
                });
            }
            cfg.entries.insert(
                key.to_string(),
                Entry {
                    line: Some(line),
                    value: value.trim().to_string(),
                },
            );
        }
        Ok(cfg)
    }

    /// Reads a scenario file; relative data-file paths inside it resolve
    /// against the file's directory.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        let mut cfg = Config::parse(&text).map_err(|e| match e {
            CliError::Config { line, message } => CliError::Config {
                line,
                message: format!("{}: {message}", path.display()),
            },
            other => other,
        })?;
        cfg.base_dir = path.parent().map(Path::to_path_buf);
        Ok(cfg)
    }

    /// Sets or replaces a key from the command line.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        check_key(key).map_err(CliError::Usage)?;
        self.entries.insert(
            key.to_string(),
            Entry {
                line: None,
                value: value.trim().to_string(),
            },
        );
        Ok(())
    }

    /// Parses a `KEY=VALUE` override.
    pub fn apply_override(&mut self, assignment: &str) -> Result<(), CliError> {
        let (key, value) = assignment
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("--set expects KEY=VALUE, got `{assignment}`")))?;
        self.set(key.trim(), value)
    }

    pub fn get(&self, key: &str) -> Option<&Entry> {
        self.entries.get(key)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, &Entry)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn base_dir(&self) -> Option<&Path> {
        self.base_dir.as_deref()
    }

    /// Keys whose values are lists, in sorted order.
    pub fn list_keys(&self) -> Vec<&str> {
        self.entries
            .iter()
            .filter(|(_, e)| e.is_list())
            .map(|(k, _)| k.as_str())
            .collect()
    }

    /// Copy with `key` pinned to a single value, keeping its source line.
    pub fn with_value(&self, key: &str, value: &str) -> Config {
        let mut out = self.clone();
        let line = self.entries.get(key).and_then(|e| e.line);
        out.entries.insert(
            key.to_string(),
            Entry {
                line,
                value: value.to_string(),
            },
        );
        out
    }
}

fn check_key(key: &str) -> Result<(), String> {
    if KNOWN_KEYS.contains(&key) {
        Ok(())
    } else {
        Err(format!("unknown key `{key}`"))
    }
}
