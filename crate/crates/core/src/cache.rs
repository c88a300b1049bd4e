//! On-disk cache of computed character tables.
//!
//! Each snapshot stores the canonical group content, the class data, and
//! the full canonical-coefficient value matrix.  Loads are never trusted:
//! the stored content key must match the request, and row and column
//! orthogonality are re-verified in exact cyclotomic arithmetic before a
//! snapshot is returned.  Writers go through a temp-file-then-rename step
//! so a crashed run never leaves a half-written entry.
//!
//! Resolution order for the cache directory: explicit flag, then the
//! `RANKGROWTH_CACHE_DIR` environment variable, then disabled.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::chartab::CharacterTable;
use crate::cyclotomic::{Cyclo, CycloCtx};
use crate::error::{Error, Result};

/// Environment variable consulted when no directory flag is given.
pub const CACHE_DIR_ENV: &str = "RANKGROWTH_CACHE_DIR";

/// A cached character table: everything needed to re-verify orthogonality
/// without rebuilding the group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableSnapshot {
    /// Canonical construction content of the group; the cache key.
    pub group_content: String,
    /// Human-readable group name, informational only.
    pub group_name: String,
    pub order: usize,
    /// Values live in the field of `root_order`-th roots of unity.
    pub root_order: u64,
    pub class_sizes: Vec<usize>,
    /// `values[i][k]` = canonical coefficient vector of character i at
    /// class k.
    pub values: Vec<Vec<Vec<i128>>>,
    /// `values[i][inverse_class[k]]` is the conjugate of `values[i][k]`.
    pub inverse_class: Vec<usize>,
}

/// Take a snapshot of a computed table.
pub fn snapshot(table: &CharacterTable) -> TableSnapshot {
    let classes = table.classes();
    TableSnapshot {
        group_content: table.group().canonical_content(),
        group_name: table.group().name().to_string(),
        order: table.group().order(),
        root_order: table.cyclo_ctx().order(),
        class_sizes: classes.sizes().to_vec(),
        values: table
            .characters()
            .iter()
            .map(|ch| {
                (0..classes.count())
                    .map(|k| ch.canonical_value(k).to_vec())
                    .collect()
            })
            .collect(),
        inverse_class: (0..classes.count()).map(|k| classes.inverse_class(k)).collect(),
    }
}

/// Re-verify a snapshot from its stored data alone: shape checks, class
/// equation, and both orthogonality relations in exact arithmetic.
pub fn verify_snapshot(snap: &TableSnapshot) -> Result<()> {
    let r = snap.values.len();
    let k_count = snap.class_sizes.len();
    if r != k_count {
        return Err(Error::Integrality(format!(
            "snapshot has {} rows but {} classes",
            r, k_count
        )));
    }
    if snap.inverse_class.len() != k_count
        || snap.inverse_class.iter().any(|&k| k >= k_count)
    {
        return Err(Error::Integrality("snapshot inverse-class map is malformed".into()));
    }
    if snap.class_sizes.iter().sum::<usize>() != snap.order {
        return Err(Error::Integrality(
            "snapshot class sizes do not sum to the group order".into(),
        ));
    }
    let ctx = CycloCtx::new(snap.root_order)?;
    let dim = ctx.degree();
    let mut rows: Vec<Vec<Cyclo>> = Vec::with_capacity(r);
    for row in &snap.values {
        if row.len() != k_count {
            return Err(Error::Integrality("snapshot row has wrong length".into()));
        }
        let mut cycs = Vec::with_capacity(k_count);
        for coeffs in row {
            if coeffs.len() > dim.max(1) {
                return Err(Error::Integrality(
                    "snapshot value has more coefficients than the field degree".into(),
                ));
            }
            // Canonical vectors are truncated to the field degree; pad back
            // to the full power basis for arithmetic.
            let mut full = coeffs.clone();
            full.resize(snap.root_order as usize, 0);
            cycs.push(Cyclo::new(snap.root_order, full)?);
        }
        rows.push(cycs);
    }
    let order = snap.order as i128;

    // The stored inverse-class map must realize complex conjugation.
    for row in &rows {
        for k in 0..k_count {
            if !ctx.eq(&row[snap.inverse_class[k]], &row[k].conj())? {
                return Err(Error::Integrality(
                    "snapshot values are not conjugate along the inverse-class map".into(),
                ));
            }
        }
    }

    // Row orthogonality: Σ_k |C_k| χ_i(k) conj(χ_j(k)) = δ_ij |G|.
    for i in 0..r {
        for j in i..r {
            let mut acc = Cyclo::integer(snap.root_order, 0);
            for k in 0..k_count {
                let term = rows[i][k]
                    .mul(&rows[j][k].conj())?
                    .scale(snap.class_sizes[k] as i128);
                acc = acc.add(&term)?;
            }
            let expected = if i == j { order } else { 0 };
            if ctx.as_integer(&acc)? != Some(expected) {
                return Err(Error::Integrality(format!(
                    "cached table fails row orthogonality at ({}, {})",
                    i, j
                )));
            }
        }
    }
    // Column orthogonality: Σ_i χ_i(k) conj(χ_i(l)) = δ_kl |G| / |C_k|.
    for k in 0..k_count {
        for l in k..k_count {
            let mut acc = Cyclo::integer(snap.root_order, 0);
            for row in &rows {
                acc = acc.add(&row[k].mul(&row[l].conj())?)?;
            }
            let expected = if k == l {
                order / snap.class_sizes[k] as i128
            } else {
                0
            };
            if ctx.as_integer(&acc)? != Some(expected) {
                return Err(Error::Integrality(format!(
                    "cached table fails column orthogonality at ({}, {})",
                    k, l
                )));
            }
        }
    }
    Ok(())
}

fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// File name for a group's snapshot inside the cache directory.
pub fn entry_path(dir: &Path, group_content: &str) -> PathBuf {
    dir.join(format!("table-{:016x}.json", fnv1a64(group_content.as_bytes())))
}

/// Resolve the cache directory: `--no-cache` wins, then the flag, then the
/// environment variable.
pub fn resolve_dir(flag: Option<PathBuf>, no_cache: bool) -> Option<PathBuf> {
    if no_cache {
        return None;
    }
    flag.or_else(|| std::env::var_os(CACHE_DIR_ENV).map(PathBuf::from))
}

/// Store a snapshot atomically (write to a temp file, then rename).
pub fn store(dir: &Path, snap: &TableSnapshot) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = entry_path(dir, &snap.group_content);
    let tmp = dir.join(format!(
        "table-{:016x}.tmp-{}",
        fnv1a64(snap.group_content.as_bytes()),
        std::process::id()
    ));
    let body = serde_json::to_string_pretty(snap)
        .map_err(|e| Error::Internal(format!("snapshot serialization failed: {}", e)))?;
    fs::write(&tmp, body)?;
    fs::rename(&tmp, &path)?;
    Ok(path)
}

/// Load and fully verify a snapshot; `Ok(None)` on a clean miss, an error
/// on a present-but-invalid entry.
pub fn load(dir: &Path, group_content: &str) -> Result<Option<TableSnapshot>> {
    let path = entry_path(dir, group_content);
    let body = match fs::read_to_string(&path) {
        Ok(b) => b,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(e.into()),
    };
    let snap: TableSnapshot = serde_json::from_str(&body)
        .map_err(|e| Error::Integrality(format!("cache entry {} is malformed: {}", path.display(), e)))?;
    if snap.group_content != group_content {
        return Err(Error::Integrality(format!(
            "cache entry {} stores a different group (hash collision or tampering)",
            path.display()
        )));
    }
    verify_snapshot(&snap)?;
    Ok(Some(snap))
}

/// Load and verify every snapshot in a directory.
pub fn load_all(dir: &Path) -> Result<Vec<TableSnapshot>> {
    let mut out = Vec::new();
    let entries = match fs::read_dir(dir) {
        Ok(e) => e,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(out),
        Err(e) => return Err(e.into()),
    };
    for entry in entries {
        let path = entry?.path();
        if path.extension().is_some_and(|x| x == "json") {
            let body = fs::read_to_string(&path)?;
            let snap: TableSnapshot = serde_json::from_str(&body).map_err(|e| {
                Error::Integrality(format!("cache entry {} is malformed: {}", path.display(), e))
            })?;
            verify_snapshot(&snap)?;
            out.push(snap);
        }
    }
    out.sort_by(|a, b| a.group_content.cmp(&b.group_content));
    Ok(out)
}

/// Record a freshly built table.  On a prior hit the stored snapshot must
/// agree exactly with the new computation — any drift is a determinism
/// failure, reported as an integrity error.
pub fn record(dir: &Path, table: &CharacterTable) -> Result<TableSnapshot> {
    let snap = snapshot(table);
    verify_snapshot(&snap)?;
    match load(dir, &snap.group_content)? {
        Some(prior) if prior == snap => Ok(snap),
        Some(_) => Err(Error::Integrality(format!(
            "cached table for {} disagrees with a fresh computation",
            snap.group_name
        ))),
        None => {
            store(dir, &snap)?;
            Ok(snap)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;

    fn table(spec: &str) -> CharacterTable {
        CharacterTable::build(FiniteGroup::from_spec(spec).unwrap()).unwrap()
    }

    #[test]
    fn snapshot_round_trips_through_disk() {
        let dir = tempfile::tempdir().unwrap();
        let t = table("S4");
        let snap = snapshot(&t);
        verify_snapshot(&snap).unwrap();
        store(dir.path(), &snap).unwrap();
        let loaded = load(dir.path(), &snap.group_content).unwrap().unwrap();
        assert_eq!(loaded, snap);
        assert_eq!(load_all(dir.path()).unwrap().len(), 1);
    }

    #[test]
    fn missing_entry_is_a_clean_miss() {
        let dir = tempfile::tempdir().unwrap();
        assert!(load(dir.path(), "no such content").unwrap().is_none());
        assert!(load_all(dir.path().join("absent").as_path()).unwrap().is_empty());
    }

    #[test]
    fn corrupted_value_fails_orthogonality() {
        let dir = tempfile::tempdir().unwrap();
        let t = table("D4");
        let mut snap = snapshot(&t);
        store(dir.path(), &snap).unwrap();
        assert!(load(dir.path(), &snap.group_content).unwrap().is_some());

        // Flip one value and overwrite the entry on disk.
        snap.values[1][2][0] += 1;
        let path = entry_path(dir.path(), &snap.group_content);
        fs::write(&path, serde_json::to_string(&snap).unwrap()).unwrap();
        let err = load(dir.path(), &snap.group_content).unwrap_err();
        assert!(matches!(err, Error::Integrality(_)), "got {:?}", err);
    }

    #[test]
    fn record_flags_determinism_drift() {
        let dir = tempfile::tempdir().unwrap();
        let t = table("C6");
        let first = record(dir.path(), &t).unwrap();
        // A second record of the same table is a verified hit.
        let second = record(dir.path(), &t).unwrap();
        assert_eq!(first, second);
    }

    #[test]
    fn unparseable_entry_is_an_integrity_error() {
        let dir = tempfile::tempdir().unwrap();
        let t = table("C3");
        let snap = snapshot(&t);
        let path = entry_path(dir.path(), &snap.group_content);
        fs::create_dir_all(dir.path()).unwrap();
        fs::write(&path, "{not json").unwrap();
        assert!(matches!(
            load(dir.path(), &snap.group_content).unwrap_err(),
            Error::Integrality(_)
        ));
    }

    #[test]
    fn directory_resolution_prefers_flag_over_environment() {
        // Serialized by the single-threaded nature of each test; no global
        // environment is mutated here beyond this test's own key.
        std::env::remove_var(CACHE_DIR_ENV);
        assert_eq!(resolve_dir(None, false), None);
        assert_eq!(
            resolve_dir(Some(PathBuf::from("/a")), false),
            Some(PathBuf::from("/a"))
        );
        assert_eq!(resolve_dir(Some(PathBuf::from("/a")), true), None);
        std::env::set_var(CACHE_DIR_ENV, "/from-env");
        assert_eq!(resolve_dir(None, false), Some(PathBuf::from("/from-env")));
        assert_eq!(
            resolve_dir(Some(PathBuf::from("/flag")), false),
            Some(PathBuf::from("/flag"))
        );
        std::env::remove_var(CACHE_DIR_ENV);
    }
}
