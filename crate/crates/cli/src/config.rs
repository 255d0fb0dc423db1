//! `key = value` run files.
//!
//! Every key is a long option name, so `n = 2, 3` in a file means the same as
//! `--n 2,3` on the command line. Command-line values win. The subcommand may
//! be given as `command = trace`.

use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}:{line}: expected key = value")]
    Syntax { path: String, line: usize },
    #[error("{path}:{line}: duplicate key {key:?}")]
    Duplicate { path: String, line: usize, key: String },
}

#[derive(Debug, Default)]
pub struct RunFile {
    pub command: Option<String>,
    /// Option name and raw value, in file order.
    pub options: Vec<(String, String)>,
}

impl RunFile {
    pub fn parse(text: &str, path: &str) -> Result<Self, ConfigError> {
        let mut out = RunFile::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| ConfigError::Syntax {
                path: path.into(),
                line: i + 1,
            })?;
            let (key, value) = (key.trim().replace('_', "-"), value.trim().to_string());
            if key.is_empty() {
                return Err(ConfigError::Syntax { path: path.into(), line: i + 1 });
            }
            if key == "command" && out.command.is_none() {
                out.command = Some(value);
                continue;
            }
            if key == "command" || out.options.iter().any(|(k, _)| *k == key) {
                return Err(ConfigError::Duplicate { path: path.into(), line: i + 1, key });
            }
            out.options.push((key, value));
        }
        Ok(out)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text, &path.display().to_string())
    }

    /// Options as command-line words. Boolean keys take `true` or `false`.
    pub fn to_args(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (k, v) in &self.options {
            match v.as_str() {
                "true" => out.push(format!("--{k}")),
                "false" => {}
                _ => {
                    out.push(format!("--{k}"));
                    out.push(v.split(',').map(str::trim).collect::<Vec<_>>().join(","));
                }
            }
        }
        out
    }
}
