//! Service configuration: a TOML file with `oracles`, `caf`, `uptake` and `server`
//! tables, then environment overrides.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::caf::CafConfig;
use crate::oracles::{OracleConfig, BACKEND_ENV};
use crate::uptake::UptakeConfig;

pub const PORT_ENV: &str = "RLENS_PORT";
pub const DATA_DIR_ENV: &str = "RLENS_DATA_DIR";

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("invalid config: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("invalid {var}={value:?}: {reason}")]
    Env { var: &'static str, value: String, reason: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ServerConfig {
    pub host: String,
    pub port: u16,
    pub data_dir: PathBuf,
}

impl Default for ServerConfig {
    fn default() -> Self {
        ServerConfig { host: "127.0.0.1".to_string(), port: 8080, data_dir: PathBuf::from("data") }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub oracles: OracleConfig,
    pub caf: CafConfig,
    pub uptake: UptakeConfig,
    pub server: ServerConfig,
}

impl Config {
    pub fn from_toml(text: &str) -> Result<Config, ConfigError> {
        Ok(toml::from_str(text)?)
    }

    /// Reads `path` when given (defaults otherwise) and applies the process environment.
    pub fn load(path: Option<&Path>) -> Result<Config, ConfigError> {
        let mut cfg = match path {
            Some(p) => {
                let text =
                    std::fs::read_to_string(p).map_err(|source| ConfigError::Io { path: p.to_path_buf(), source })?;
                Config::from_toml(&text)?
            }
            None => Config::default(),
        };
        cfg.apply_env(|k| std::env::var(k).ok())?;
        Ok(cfg)
    }

    pub fn apply_env(&mut self, get: impl Fn(&str) -> Option<String>) -> Result<(), ConfigError> {
        if let Some(v) = get(PORT_ENV) {
            self.server.port = v.trim().parse().map_err(|e: std::num::ParseIntError| ConfigError::Env {
                var: PORT_ENV,
                value: v.clone(),
                reason: e.to_string(),
            })?;
        }
        if let Some(v) = get(DATA_DIR_ENV) {
            self.server.data_dir = PathBuf::from(v);
        }
        if let Some(v) = get(BACKEND_ENV) {
            self.oracles.backend = v.parse().map_err(|e: crate::oracles::OracleError| ConfigError::Env {
                var: BACKEND_ENV,
                value: v.clone(),
                reason: e.to_string(),
            })?;
        }
        Ok(())
    }
}
