//! Flat `key = value` run configuration.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use crate::error::CliError;

/// Parsed configuration file. Every key must be consumed by the run that
/// reads it; leftovers are reported as errors.
#[derive(Debug, Clone, Default)]
pub struct RunConfig {
    entries: BTreeMap<String, String>,
    echo: Vec<(String, String)>,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut entries = BTreeMap::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::Config(format!(
                    "line {}: expected key = value, got {raw:?}",
                    no + 1
                )));
            };
            let key = key.trim().to_ascii_lowercase();
            if key.is_empty() {
                return Err(CliError::Config(format!("line {}: empty key", no + 1)));
            }
            if entries
                .insert(key.clone(), value.trim().to_string())
                .is_some()
            {
                return Err(CliError::Config(format!(
                    "line {}: duplicate key {key}",
                    no + 1
                )));
            }
        }
        Ok(RunConfig {
            entries,
            echo: Vec::new(),
        })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Takes `key`, falling back to `default`, and records the value used.
    pub fn take<T>(&mut self, key: &str, default: T) -> Result<T, CliError>
    where
        T: FromStr + ToString,
        T::Err: std::fmt::Display,
    {
        let value = match self.entries.remove(key) {
            Some(raw) => raw
                .parse::<T>()
                .map_err(|e| CliError::Config(format!("{key} = {raw:?}: {e}")))?,
            None => default,
        };
        self.echo.push((key.to_string(), value.to_string()));
        Ok(value)
    }

    /// Comma-separated list.
    pub fn take_list<T>(&mut self, key: &str, default: &[T]) -> Result<Vec<T>, CliError>
    where
        T: FromStr + ToString + Clone,
        T::Err: std::fmt::Display,
    {
        let value = match self.entries.remove(key) {
            Some(raw) => raw
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<T>()
                        .map_err(|e| CliError::Config(format!("{key} = {raw:?}: {e}")))
                })
                .collect::<Result<Vec<T>, _>>()?,
            None => default.to_vec(),
        };
        let shown: Vec<String> = value.iter().map(ToString::to_string).collect();
        self.echo.push((key.to_string(), shown.join(",")));
        Ok(value)
    }

    pub fn contains(&self, key: &str) -> bool {
        self.entries.contains_key(key)
    }

    /// Fails on keys no run consumed.
    pub fn finish(&self) -> Result<(), CliError> {
        if let Some(key) = self.entries.keys().next() {
            return Err(CliError::Config(format!("unknown key {key}")));
        }
        Ok(())
    }

    /// Effective `(key, value)` pairs in the order they were read.
    pub fn echo(&self) -> &[(String, String)] {
        &self.echo
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_defaults() {
        let mut c = RunConfig::parse("# header\nk = 40  # grid\n\nLAMBDA=0.25\n").unwrap();
        assert_eq!(c.take("k", 300usize).unwrap(), 40);
        assert_eq!(c.take("lambda", 0.5f64).unwrap(), 0.25);
        assert_eq!(c.take("alpha", 2.0f64).unwrap(), 2.0);
        c.finish().unwrap();
        assert_eq!(c.echo()[2], ("alpha".to_string(), "2".to_string()));
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(RunConfig::parse("k 40").is_err());
        assert!(RunConfig::parse("k=1\nk=2").is_err());
        let mut c = RunConfig::parse("k = forty").unwrap();
        assert!(c.take("k", 1usize).is_err());
        let c = RunConfig::parse("typo = 1").unwrap();
        assert!(c.finish().is_err());
    }

    #[test]
    fn lists() {
        let mut c = RunConfig::parse("modes = 0, 1,2").unwrap();
        assert_eq!(c.take_list("modes", &[0i64]).unwrap(), vec![0, 1, 2]);
    }
}
