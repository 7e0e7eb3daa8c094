//! Resumable state for [`max_clique`](super::max_clique).
//!
//! JSON document, version 1:
//!
//! ```text
//! {
//!   "version": 1,
//!   "k": 9,
//!   "orthomorphisms": 2025,     // size of the second-level candidate list
//!   "next_branch": 128,         // first top-level branch not yet finished
//!   "best_size": 3,             // clique size in G_k
//!   "witness": ["0,0,...", ...],// clique of that size, as function tables
//!   "nodes": 128                // branch-and-bound nodes spent so far
//! }
//! ```
//!
//! Branches are numbered in the search's deterministic top-level order, so a
//! checkpoint is valid for any worker count.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gk::FnVec;
use crate::io::{load_json, save_json};

pub const CHECKPOINT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckpointState {
    pub version: u32,
    pub k: u32,
    pub orthomorphisms: usize,
    pub next_branch: usize,
    pub best_size: usize,
    pub witness: Vec<FnVec>,
    pub nodes: u64,
}

impl CheckpointState {
    pub fn load(path: &Path) -> Result<Option<Self>> {
        if !path.exists() {
            return Ok(None);
        }
        let state: CheckpointState = load_json(path).map_err(|e| Error::Checkpoint {
            path: path.to_path_buf(),
            reason: e.to_string(),
        })?;
        if state.version != CHECKPOINT_VERSION {
            return Err(Error::Checkpoint {
                path: path.to_path_buf(),
                reason: format!("unsupported version {}", state.version),
            });
        }
        Ok(Some(state))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        save_json(path, self)
    }
}
