//! Flat `key = value` run files whose keys mirror the long flag names.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{GswError, Result};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    pub path: PathBuf,
    entries: BTreeMap<String, (usize, String)>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| GswError::io(path, e))?;
        Self::parse(&text, path)
    }

    /// Blank lines and `#` comments are skipped. Keys may be written with
    /// `-` or `_`; they are stored with `-`.
    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |reason: String| GswError::Config {
                path: path.to_path_buf(),
                line: line_no,
                reason,
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| bad(format!("expected `key = value`, found `{line}`")))?;
            let key = key.trim().replace('_', "-");
            let value = value.trim();
            if key.is_empty() {
                return Err(bad("empty key".into()));
            }
            if value.is_empty() {
                return Err(bad(format!("`{key}` has no value")));
            }
            if entries.insert(key.clone(), (line_no, value.to_string())).is_some() {
                return Err(bad(format!("`{key}` set twice")));
            }
        }
        Ok(Self {
            path: path.to_path_buf(),
            entries,
        })
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|(_, v)| v.as_str())
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        match self.entries.get(key) {
            None => Ok(None),
            Some((line, v)) => v.parse().map(Some).map_err(|e: T::Err| GswError::Config {
                path: self.path.clone(),
                line: *line,
                reason: format!("`{key}`: {e}"),
            }),
        }
    }

    /// Comma-separated list.
    pub fn get_list<T: FromStr>(&self, key: &str) -> Result<Option<Vec<T>>>
    where
        T::Err: std::fmt::Display,
    {
        match self.entries.get(key) {
            None => Ok(None),
            Some((line, v)) => v
                .split(',')
                .map(|s| s.trim().parse::<T>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map(Some)
                .map_err(|e| GswError::Config {
                    path: self.path.clone(),
                    line: *line,
                    reason: format!("`{key}`: {e}"),
                }),
        }
    }

    /// Keys not in `known`, for rejecting typos.
    pub fn check_keys(&self, known: &[&str]) -> Result<()> {
        match self.entries.iter().find(|(k, _)| !known.contains(&k.as_str())) {
            None => Ok(()),
            Some((k, (line, _))) => Err(GswError::Config {
                path: self.path.clone(),
                line: *line,
                reason: format!("unknown key `{k}`"),
            }),
        }
    }
}
