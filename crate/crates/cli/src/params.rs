//! Parameter resolution: command-line flags override config-file values,
//! which override the built-in defaults. The resolved values are echoed into
//! every report so a report alone reproduces its run.

use std::path::Path;

use serde::{Deserialize, Serialize};

use shiftlab_core::{Error, Result};

/// Optional values a JSON config file may provide. Unknown keys are rejected
/// so typos do not silently fall back to defaults.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamOverlay {
    pub n: Option<u32>,
    pub d: Option<u32>,
    pub k: Option<usize>,
    pub epsilon: Option<String>,
    pub seed: Option<u64>,
    pub beta: Option<u64>,
    pub count: Option<u64>,
    pub levels: Option<u32>,
    pub root_children: Option<u64>,
    pub slack: Option<u64>,
    pub trials: Option<u64>,
    pub budget: Option<u64>,
    pub resample_limit: Option<u32>,
    pub samples: Option<u64>,
    pub mode: Option<String>,
}

impl ParamOverlay {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        match path {
            None => Ok(ParamOverlay::default()),
            Some(p) => {
                let text = std::fs::read_to_string(p)?;
                serde_json::from_str(&text)
                    .map_err(|e| Error::Parse(format!("config {}: {e}", p.display())))
            }
        }
    }
}

pub fn resolve<T: Clone>(flag: Option<T>, file: Option<T>, default: T) -> T {
    flag.or(file).unwrap_or(default)
}

pub fn require<T: Clone>(flag: Option<T>, file: Option<T>, what: &str) -> Result<T> {
    flag.or(file)
        .ok_or_else(|| Error::invalid(format!("missing required parameter --{what}")))
}

pub mod defaults {
    pub const SEED: u64 = 0;
    pub const EPSILON: &str = "1/2";
    pub const RESAMPLE_LIMIT: u32 = 8;
    pub const BUDGET: u64 = 20_000_000;
    pub const TRIALS: u64 = 100_000;
    pub const LEVELS: u32 = 3;
    pub const ROOT_CHILDREN: u64 = 1;
    pub const SLACK: u64 = 0;
    pub const K: usize = 2;
    pub const WINDOW_SAMPLES: u64 = 200;
}
