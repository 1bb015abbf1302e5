//! Append-only ledger of finished trees, one JSON object per line.
//!
//! A run killed mid-write leaves at most one incomplete trailing line; it is
//! dropped (and truncated away) on resume.

use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use super::search::TreeSearch;
use super::ExtremalError;
use crate::canon::CanonicalCode;

pub struct Ledger {
    path: PathBuf,
    file: File,
}

impl Ledger {
    /// Opens (creating if needed) the ledger at `path` and returns it with
    /// every completed tree already recorded for this `(n, k)`.
    pub fn open(
        path: &Path,
        n: usize,
        k: u32,
    ) -> Result<(Ledger, BTreeMap<CanonicalCode, TreeSearch>), ExtremalError> {
        let mut done = BTreeMap::new();
        let mut valid_len = 0u64;
        if path.exists() {
            let mut reader = BufReader::new(File::open(path)?);
            let mut line = String::new();
            let mut line_no = 0;
            loop {
                line.clear();
                let read = reader.read_line(&mut line)?;
                if read == 0 {
                    break;
                }
                line_no += 1;
                if !line.ends_with('\n') {
                    // torn final write
                    break;
                }
                let entry: TreeSearch = serde_json::from_str(line.trim_end()).map_err(|e| {
                    ExtremalError::CorruptCheckpoint { line: line_no, reason: e.to_string() }
                })?;
                if entry.n != n || entry.k != k {
                    return Err(ExtremalError::CheckpointMismatch {
                        expected: (n, k),
                        found: (entry.n, entry.k),
                    });
                }
                valid_len += read as u64;
                done.insert(entry.tree_code.clone(), entry);
            }
        }
        let file = OpenOptions::new().create(true).append(true).open(path)?;
        file.set_len(valid_len)?;
        Ok((Ledger { path: path.to_path_buf(), file }, done))
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// Appends one finished tree with a single unbuffered write.
    pub fn append(&mut self, entry: &TreeSearch) -> Result<(), ExtremalError> {
        let mut line = serde_json::to_string(entry).expect("tree results serialize");
        line.push('\n');
        self.file.write_all(line.as_bytes())?;
        Ok(())
    }
}
