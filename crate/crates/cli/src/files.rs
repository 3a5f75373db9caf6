//! Versioned instance files.
//!
//! Every constructed artifact is a JSON document with `format`, `version` and
//! a `kind` tag; edge lists are additionally exported in the plain-text
//! format next to the JSON. Instance files carry no timestamps: they are pure
//! functions of their parameters, and repeated construction must be
//! byte-identical.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use shiftlab_core::construct::MndInstance;
use shiftlab_core::tree::LabeledTree;
use shiftlab_core::tuple::KTupleSet;
use shiftlab_core::{Error, Result};

pub const FORMAT: &str = "shiftlab-instance";
pub const VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InstancePayload {
    Mnd(MndInstance),
    Tree { tree: LabeledTree },
    RandomSet { seed: u64, tuples: KTupleSet },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InstanceFile {
    pub format: String,
    pub version: u32,
    #[serde(flatten)]
    pub payload: InstancePayload,
}

impl InstanceFile {
    pub fn new(payload: InstancePayload) -> Self {
        InstanceFile {
            format: FORMAT.to_string(),
            version: VERSION,
            payload,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("instance serialization");
        s.push('\n');
        s
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let file: InstanceFile = serde_json::from_str(&text)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        if file.format != FORMAT {
            return Err(Error::Parse(format!(
                "{}: unknown format {:?}",
                path.display(),
                file.format
            )));
        }
        if file.version != VERSION {
            return Err(Error::Parse(format!(
                "{}: unsupported version {}",
                path.display(),
                file.version
            )));
        }
        Ok(file)
    }

    /// The tuple set this instance induces (k=2 instances as pair sets).
    pub fn tuple_set(&self) -> KTupleSet {
        match &self.payload {
            InstancePayload::Mnd(inst) => KTupleSet::from_ordered_graph(&inst.graph),
            InstancePayload::Tree { tree } => KTupleSet::from_ordered_graph(&tree.to_ordered_graph()),
            InstancePayload::RandomSet { tuples, .. } => tuples.clone(),
        }
    }
}

/// `base.json` and `base.edges` paths for an output base.
pub fn artifact_paths(base: &Path) -> (PathBuf, PathBuf) {
    (base.with_extension("json"), base.with_extension("edges"))
}
