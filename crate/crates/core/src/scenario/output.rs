//! Result directories: CSV tables plus a manifest, written atomically.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use super::checks::{CheckOutcome, GroupingFactors, RunReport};
use super::table::Tables;
use crate::error::{Error, Result};
use crate::field::DerivativeMode;
use crate::tolerance as tol;

pub const MANIFEST: &str = "manifest.json";
pub const OUT_DIR_ENV: &str = "RELPOWER_OUT_DIR";
pub const DEFAULT_OUT_DIR: &str = "relpower-out";

#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub scenario: String,
    pub config_sha256: String,
    pub version: String,
    pub derivatives: DerivativeMode,
    pub passed: bool,
    pub tolerances: BTreeMap<&'static str, f64>,
    pub checks: Vec<CheckSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grouping_factors: Option<GroupingFactors>,
    pub files: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckSummary {
    pub passed: bool,
    #[serde(flatten)]
    pub outcome: CheckOutcome,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

pub fn tolerances() -> BTreeMap<&'static str, f64> {
    BTreeMap::from([
        ("analytic_rel", tol::ANALYTIC_REL),
        ("fd_rel", tol::FD_REL),
        ("constitutive_rel", tol::CONSTITUTIVE_REL),
        ("eshelby_fixture_abs", tol::ESHELBY_FIXTURE_ABS),
        ("invariance_coefficient_rel", tol::INVARIANCE_COEFFICIENT_REL),
        ("affine_fit_rel", tol::AFFINE_FIT_REL),
        ("convergence_factor", tol::CONVERGENCE_FACTOR),
        ("float_floor_rel", tol::FLOAT_FLOOR_REL),
        ("surface_independence_rel", tol::SURFACE_INDEPENDENCE_REL),
        ("surface_control_rel", tol::SURFACE_CONTROL_REL),
        ("noether_condition_abs", tol::NOETHER_CONDITION_ABS),
        ("noether_divergence_abs", tol::NOETHER_DIVERGENCE_ABS),
        ("noether_graded_abs", tol::NOETHER_GRADED_ABS),
        ("torque_rel", tol::TORQUE_REL),
        ("standard_power_rel", tol::STANDARD_POWER_REL),
        ("grouping_conditioning_min", tol::GROUPING_CONDITIONING_MIN),
    ])
}

pub fn manifest(report: &RunReport, config_text: &[u8]) -> Manifest {
    Manifest {
        scenario: report.name.clone(),
        config_sha256: sha256_hex(config_text),
        version: env!("CARGO_PKG_VERSION").into(),
        derivatives: report.derivatives,
        passed: report.passed(),
        tolerances: tolerances(),
        checks: report
            .outcomes
            .iter()
            .map(|o| CheckSummary {
                passed: o.passed(),
                outcome: o.clone(),
            })
            .collect(),
        grouping_factors: report.grouping.clone(),
        files: report.tables.iter().map(|t| format!("{}.csv", t.name)).collect(),
    }
}

/// Output base: explicit argument, then the environment, then the config,
/// then [`DEFAULT_OUT_DIR`].
pub fn resolve_base(cli: Option<&Path>, config: Option<&str>) -> PathBuf {
    if let Some(p) = cli {
        return p.to_path_buf();
    }
    match std::env::var_os(OUT_DIR_ENV) {
        Some(v) if !v.is_empty() => PathBuf::from(v),
        _ => PathBuf::from(config.unwrap_or(DEFAULT_OUT_DIR)),
    }
}

fn replaceable(dir: &Path) -> Result<bool> {
    if !dir.is_dir() {
        return Ok(false);
    }
    let mut entries = fs::read_dir(dir)?;
    Ok(entries.next().is_none() || dir.join(MANIFEST).is_file())
}

/// Writes every table and `manifest_json` into `<base>/<name>`. Files go to
/// a sibling temporary directory first, which is then renamed into place,
/// so a failed run never leaves a partial result. An existing target is
/// only replaced when it is empty or holds a previous manifest.
pub fn write_result_dir(base: &Path, name: &str, tables: &Tables, manifest_json: &[u8]) -> Result<PathBuf> {
    fs::create_dir_all(base)?;
    let target = base.join(name);
    if target.exists() && !replaceable(&target)? {
        return Err(Error::Io(std::io::Error::new(
            std::io::ErrorKind::AlreadyExists,
            format!("{} exists and is not a previous result directory", target.display()),
        )));
    }
    let tmp = tempfile::Builder::new().prefix(".relpower-").tempdir_in(base)?;
    for t in tables.iter() {
        fs::write(tmp.path().join(format!("{}.csv", t.name)), t.to_csv()?)?;
    }
    fs::write(tmp.path().join(MANIFEST), manifest_json)?;
    if target.exists() {
        fs::remove_dir_all(&target)?;
    }
    let staged = tmp.keep();
    if let Err(e) = fs::rename(&staged, &target) {
        let _ = fs::remove_dir_all(&staged);
        return Err(e.into());
    }
    Ok(target)
}

pub fn manifest_bytes<T: Serialize>(m: &T) -> Result<Vec<u8>> {
    let mut v = serde_json::to_vec_pretty(m).map_err(std::io::Error::from)?;
    v.push(b'\n');
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::table::{Cell, Table};

    fn tables() -> Tables {
        let mut t = Table::new("powers", &["quantity", "value"]);
        t.push(vec![Cell::text("relative"), Cell::Num(1.0)]);
        Tables(vec![t])
    }

    #[test]
    fn writes_and_replaces_previous_results() {
        let dir = tempfile::tempdir().unwrap();
        let p = write_result_dir(dir.path(), "a", &tables(), b"{}\n").unwrap();
        assert!(p.join("powers.csv").is_file());
        write_result_dir(dir.path(), "a", &tables(), b"{}\n").unwrap();
        let leftovers: Vec<_> = fs::read_dir(dir.path()).unwrap().collect();
        assert_eq!(leftovers.len(), 1);
    }

    #[test]
    fn refuses_foreign_directory() {
        let dir = tempfile::tempdir().unwrap();
        fs::create_dir(dir.path().join("a")).unwrap();
        fs::write(dir.path().join("a/notes.txt"), "keep").unwrap();
        let e = write_result_dir(dir.path(), "a", &tables(), b"{}").unwrap_err();
        assert_eq!(e.exit_code(), 3);
        assert!(dir.path().join("a/notes.txt").is_file());
    }

    #[test]
    fn sha_of_empty_input() {
        assert_eq!(
            sha256_hex(b""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
    }
}
