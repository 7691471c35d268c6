//! Run configuration, read from JSON.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ideals::IdealHandle;
use crate::topology::Bounds;

pub const DEFAULT_SEED: u64 = 42;

/// An ideal given either by name or as `{"name": ...}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum IdealRef {
    Name(String),
    Named { name: String },
}

impl IdealRef {
    pub fn name(&self) -> &str {
        match self {
            IdealRef::Name(n) | IdealRef::Named { name: n } => n,
        }
    }

    pub fn resolve(&self) -> Result<IdealHandle> {
        IdealHandle::parse(self.name())
    }
}

/// `{"ideal": ..., "bounds": {...}, "seed": S, "out": DIR}`. Missing fields
/// take their defaults: no ideal override, per-lemma bounds, seed 42.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ideal: Option<IdealRef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<Bounds>,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

fn default_seed() -> u64 {
    DEFAULT_SEED
}

impl Default for Config {
    fn default() -> Self {
        Config { ideal: None, bounds: None, seed: DEFAULT_SEED, out: None }
    }
}

impl Config {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Config = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(r) = &self.ideal {
            r.resolve().map_err(|e| Error::Config(e.to_string()))?;
        }
        if let Some(b) = &self.bounds {
            if b.probes == 0 || b.index_bound == 0 {
                return Err(Error::Config("probes and index_bound must be positive".into()));
            }
        }
        Ok(())
    }

    pub fn ideal_handle(&self) -> Result<Option<IdealHandle>> {
        self.ideal.as_ref().map(IdealRef::resolve).transpose()
    }
}
