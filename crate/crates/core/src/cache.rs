//! On-disk cache of subgroup classes and survey results, one
//! newline-delimited JSON file per degree.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::group_ops::Fingerprint;
use crate::subgroups::SubgroupClass;

pub const SCHEMA_VERSION: u32 = 1;

/// One subgroup class. Field order is the on-disk key order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheRecord {
    pub schema_version: u32,
    pub degree: usize,
    pub class_id: usize,
    pub generators: Vec<String>,
    pub order: u64,
    pub class_size: u64,
    pub fingerprint: String,
    pub minemb: Option<bool>,
    pub ind: Option<u64>,
    pub comp_witness: Option<String>,
}

impl CacheRecord {
    pub fn from_class(degree: usize, class: &SubgroupClass) -> Self {
        CacheRecord {
            schema_version: SCHEMA_VERSION,
            degree,
            class_id: class.class_id,
            generators: class.representative.generator_strings(),
            order: class.order as u64,
            class_size: class.class_size as u64,
            fingerprint: class.fingerprint.encode(),
            minemb: None,
            ind: None,
            comp_witness: None,
        }
    }

    /// Rebuilds the class, checking the generators against the stated
    /// order and fingerprint.
    pub fn to_class(&self) -> Result<SubgroupClass> {
        let corrupt = |what: &str| Error::CorruptCache(format!("degree {} class {}: {what}", self.degree, self.class_id));
        let group = PermGroup::from_cycle_strings(self.degree, &self.generators)
            .map_err(|e| corrupt(&format!("generators do not parse ({e})")))?;
        if group.order() != self.order as u128 {
            return Err(corrupt("generators do not match the stated order"));
        }
        let fingerprint = Fingerprint::decode(&self.fingerprint)?;
        if fingerprint.order != self.order as u128 || fingerprint.degree != self.degree {
            return Err(corrupt("fingerprint disagrees with the record"));
        }
        Ok(SubgroupClass {
            class_id: self.class_id,
            representative: group,
            order: self.order as u128,
            class_size: self.class_size as u128,
            fingerprint,
        })
    }
}

pub fn cache_path(dir: &Path, degree: usize) -> PathBuf {
    dir.join(format!("sym{degree}.jsonl"))
}

pub fn save_cache(records: &[CacheRecord], dir: &Path) -> Result<()> {
    let Some(first) = records.first() else {
        return Err(Error::InvalidArgument("no records to save".into()));
    };
    let degree = first.degree;
    if records.iter().any(|r| r.degree != degree) {
        return Err(Error::InvalidArgument("records span several degrees".into()));
    }
    fs::create_dir_all(dir)?;
    let mut text = Vec::new();
    for r in records {
        serde_json::to_writer(&mut text, r)?;
        text.push(b'\n');
    }
    let path = cache_path(dir, degree);
    let tmp = path.with_extension("jsonl.tmp");
    let mut f = fs::File::create(&tmp)?;
    f.write_all(&text)?;
    f.sync_all()?;
    fs::rename(&tmp, &path)?;
    Ok(())
}

/// Records for `degree`, or [`Error::MissingCache`] when there is no file.
pub fn load_cache(dir: &Path, degree: usize) -> Result<Vec<CacheRecord>> {
    let path = cache_path(dir, degree);
    let text = match fs::read_to_string(&path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Err(Error::MissingCache(degree)),
        Err(e) => return Err(e.into()),
    };
    let mut records = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let value: serde_json::Value = serde_json::from_str(line)?;
        let found = value.get("schema_version").and_then(|v| v.as_u64()).unwrap_or(0) as u32;
        if found != SCHEMA_VERSION {
            return Err(Error::SchemaMismatch { found, expected: SCHEMA_VERSION });
        }
        let r: CacheRecord = serde_json::from_value(value)?;
        if r.degree != degree {
            return Err(Error::CorruptCache(format!("line {}: degree {} in the file for {degree}", i + 1, r.degree)));
        }
        if r.class_id != i {
            return Err(Error::CorruptCache(format!("line {}: class ids are not contiguous from 0", i + 1)));
        }
        records.push(r);
    }
    if records.is_empty() {
        return Err(Error::CorruptCache(format!("{} is empty", path.display())));
    }
    Ok(records)
}
