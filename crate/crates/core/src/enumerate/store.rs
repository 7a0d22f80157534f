//! On-disk registry of classification results.
//!
//! Layout under the registry directory:
//!
//! ```text
//! manifest.json   schema version, per-n counts and sha256 of each data file
//! n10.jsonl       one line per complex, ordered by the text of its cycle set
//! ```
//!
//! A complex is addressed as `n:index`. No timings are written, so two runs of the
//! same classification produce byte-identical files.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{ClassifiedComplex, EnumerationResult, SearchStats};
use crate::complex::FVector;
use crate::cycle::CyclicComplex;
use crate::error::{Error, Result};
use crate::invariants::HomologyGroups;

pub const SCHEMA_VERSION: u32 = 1;

/// Environment variable overriding the default registry directory.
pub const REGISTRY_ENV: &str = "DIFFCYC_REGISTRY";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StoredEntry {
    pub index: usize,
    pub cycles: String,
    pub fvector: Vec<usize>,
    pub homology: HomologyGroups,
    pub multiplier_class: usize,
    pub iso_class: usize,
}

impl StoredEntry {
    pub fn complex(&self) -> Result<CyclicComplex> {
        self.cycles.parse()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub complexes: usize,
    pub multiplier_classes: usize,
    pub iso_classes: usize,
    pub sha256: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub schema_version: u32,
    /// Keyed by `n`.
    pub files: BTreeMap<u32, ManifestEntry>,
}

impl Default for Manifest {
    fn default() -> Self {
        Manifest {
            schema_version: SCHEMA_VERSION,
            files: BTreeMap::new(),
        }
    }
}

/// Parses a registry address `n:index`.
pub fn parse_address(s: &str) -> Result<(u32, usize)> {
    let bad = || Error::Parse {
        pos: 0,
        msg: format!("registry address must look like n:index, got {s:?}"),
    };
    let (n, i) = s.trim().split_once(':').ok_or_else(bad)?;
    Ok((n.parse().map_err(|_| bad())?, i.parse().map_err(|_| bad())?))
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let tmp = path.with_extension("tmp");
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

#[derive(Clone, Debug)]
pub struct Registry {
    root: PathBuf,
}

impl Registry {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        Registry { root: root.into() }
    }

    /// `$DIFFCYC_REGISTRY`, or `./registry`.
    pub fn default_path() -> PathBuf {
        std::env::var_os(REGISTRY_ENV)
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from("registry"))
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn data_path(&self, n: u32) -> PathBuf {
        self.root.join(format!("n{n}.jsonl"))
    }

    pub fn manifest_path(&self) -> PathBuf {
        self.root.join("manifest.json")
    }

    pub fn checkpoint_path(&self, n: u32) -> PathBuf {
        self.root.join(format!("n{n}.checkpoint.json"))
    }

    pub fn manifest(&self) -> Result<Manifest> {
        let path = self.manifest_path();
        if !path.exists() {
            return Ok(Manifest::default());
        }
        let m: Manifest = serde_json::from_str(&fs::read_to_string(&path)?)?;
        if m.schema_version != SCHEMA_VERSION {
            return Err(Error::Registry(format!(
                "schema version {} in {}, expected {SCHEMA_VERSION}",
                m.schema_version,
                path.display()
            )));
        }
        Ok(m)
    }

    /// Writes the data file for `result.n` and updates the manifest. Incomplete
    /// results are refused.
    pub fn store(&self, result: &EnumerationResult) -> Result<()> {
        if !result.complete {
            return Err(Error::Refused(format!(
                "classification of n = {} is incomplete; resume it from its checkpoint",
                result.n
            )));
        }
        fs::create_dir_all(&self.root)?;
        let mut text = String::new();
        for (index, e) in result.entries.iter().enumerate() {
            let line = StoredEntry {
                index,
                cycles: e.complex.to_string(),
                fvector: e.fvector.0.clone(),
                homology: e.homology.clone(),
                multiplier_class: e.multiplier_class,
                iso_class: e.iso_class,
            };
            text.push_str(&serde_json::to_string(&line)?);
            text.push('\n');
        }
        write_atomic(&self.data_path(result.n), text.as_bytes())?;
        let mut manifest = self.manifest()?;
        manifest.files.insert(
            result.n,
            ManifestEntry {
                complexes: result.complex_count(),
                multiplier_classes: result.multiplier_class_count(),
                iso_classes: result.iso_class_count(),
                sha256: hex::encode(Sha256::digest(text.as_bytes())),
            },
        );
        let mut body = serde_json::to_string_pretty(&manifest)?;
        body.push('\n');
        write_atomic(&self.manifest_path(), body.as_bytes())
    }

    pub fn has(&self, n: u32) -> bool {
        self.data_path(n).exists()
    }

    /// All stored entries for `n`, checked against the manifest checksum.
    pub fn load(&self, n: u32) -> Result<Vec<StoredEntry>> {
        let path = self.data_path(n);
        if !path.exists() {
            return Err(Error::Registry(format!(
                "no classification for n = {n} in {}",
                self.root.display()
            )));
        }
        let text = fs::read_to_string(&path)?;
        if let Some(entry) = self.manifest()?.files.get(&n) {
            let digest = hex::encode(Sha256::digest(text.as_bytes()));
            if digest != entry.sha256 {
                return Err(Error::Registry(format!(
                    "checksum mismatch for {}",
                    path.display()
                )));
            }
        }
        let mut out = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let e: StoredEntry = serde_json::from_str(line)?;
            if e.index != i {
                return Err(Error::Registry(format!(
                    "{} line {}: index {} out of sequence",
                    path.display(),
                    i + 1,
                    e.index
                )));
            }
            out.push(e);
        }
        Ok(out)
    }

    /// Rebuilds an [`EnumerationResult`] from the store; search statistics are not kept.
    pub fn load_result(&self, n: u32) -> Result<EnumerationResult> {
        let entries = self
            .load(n)?
            .into_iter()
            .map(|e| {
                Ok(ClassifiedComplex {
                    complex: e.complex()?,
                    fvector: FVector(e.fvector),
                    homology: e.homology,
                    multiplier_class: e.multiplier_class,
                    iso_class: e.iso_class,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(EnumerationResult {
            n,
            entries,
            stats: SearchStats::default(),
            elapsed_ms: 0,
            complete: true,
        })
    }

    /// The complex stored at `n:index`.
    pub fn get(&self, n: u32, index: usize) -> Result<CyclicComplex> {
        let entries = self.load(n)?;
        let len = entries.len();
        entries
            .into_iter()
            .nth(index)
            .ok_or_else(|| {
                Error::Registry(format!(
                    "index {index} out of range for n = {n} ({len} complexes)"
                ))
            })?
            .complex()
    }
}

/// Progress of an interrupted classification: only fully searched seeds count.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub n: u32,
    pub universe: usize,
    pub completed_seeds: Vec<usize>,
    pub found: Vec<String>,
    pub stats: SearchStats,
}

impl Checkpoint {
    pub fn read(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir)?;
        }
        write_atomic(path, serde_json::to_string(self)?.as_bytes())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::classify;

    #[test]
    fn addresses() {
        assert_eq!(parse_address("10:3").unwrap(), (10, 3));
        assert!(parse_address("10").is_err());
        assert!(parse_address("a:1").is_err());
    }

    #[test]
    fn store_and_load() {
        let dir = tempfile::tempdir().unwrap();
        let reg = Registry::new(dir.path());
        let r = classify(7).unwrap();
        reg.store(&r).unwrap();
        assert!(reg
            .get(5, 0)
            .unwrap_err()
            .to_string()
            .contains("no classification"));
        let loaded = reg.load_result(7).unwrap();
        assert_eq!(loaded.entries, r.entries);
        assert_eq!(reg.manifest().unwrap().files[&7].iso_classes, 1);
        assert!(reg.get(7, 3).is_err());
        assert_eq!(reg.get(7, 0).unwrap(), r.entries[0].complex);
    }

    #[test]
    fn tampering_is_detected() {
        let dir = tempfile::tempdir().unwrap();
        let reg = Registry::new(dir.path());
        reg.store(&classify(6).unwrap()).unwrap();
        let path = reg.data_path(6);
        let text = fs::read_to_string(&path).unwrap();
        fs::write(&path, text.replace("\"index\":0", "\"index\":0 ")).unwrap();
        assert!(matches!(reg.load(6), Err(Error::Registry(_))));
    }

    #[test]
    fn incomplete_results_are_refused() {
        let dir = tempfile::tempdir().unwrap();
        let mut r = classify(5).unwrap();
        r.complete = false;
        assert!(matches!(
            Registry::new(dir.path()).store(&r),
            Err(Error::Refused(_))
        ));
    }
}
