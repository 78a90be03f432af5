//! Certificates on disk. Each group directory holds either
//! `presentation.json` (plain and layered certificates) or `space.json`
//! (tensor certificates, one presentation per leg) next to one JSON file per
//! proved target. [`verify_store`] replays everything without any rewriting.

use std::collections::{BTreeMap, HashSet};
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coaction::{
    check_tensor_certificate, SectionReport, TensorCertificate, TensorCertificateFile, TensorPoly,
    TensorSpace,
};
use crate::lemmas::LemmaReport;
use crate::ncstar::{
    check_layered_certificate, CertificateFile, EngineError, LayeredCertificate, NCPoly,
    Presentation, PresentationDump, ProofCertificate,
};

pub const PRESENTATION_FILE: &str = "presentation.json";
pub const SPACE_FILE: &str = "space.json";

#[derive(Debug, thiserror::Error)]
pub enum StoreError {
    #[error("i/o on {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("json in {path}: {source}")]
    Json {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error("{path}: {source}")]
    Engine { path: PathBuf, source: EngineError },
    #[error("{0} has neither {PRESENTATION_FILE} nor {SPACE_FILE}")]
    MissingPresentation(PathBuf),
}

#[derive(Debug, Serialize, Deserialize)]
struct SpaceDump {
    legs: Vec<PresentationDump>,
}

pub fn slug(label: &str) -> String {
    let s: String = label
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect();
    if s.is_empty() {
        "_".into()
    } else {
        s
    }
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), StoreError> {
    let text = serde_json::to_string(value).map_err(|source| StoreError::Json {
        path: path.to_path_buf(),
        source,
    })?;
    std::fs::write(path, text).map_err(|source| StoreError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, StoreError> {
    let text = std::fs::read_to_string(path).map_err(|source| StoreError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| StoreError::Json {
        path: path.to_path_buf(),
        source,
    })
}

fn create_dir(path: &Path) -> Result<(), StoreError> {
    std::fs::create_dir_all(path).map_err(|source| StoreError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Writes certificates under one root. Safe to share between threads; file
/// names are made unique within a group.
#[derive(Debug)]
pub struct CertificateStore {
    root: PathBuf,
    taken: Mutex<HashSet<PathBuf>>,
    groups: Mutex<HashSet<PathBuf>>,
}

impl CertificateStore {
    pub fn new(root: impl Into<PathBuf>) -> Result<Arc<Self>, StoreError> {
        let root = root.into();
        create_dir(&root)?;
        Ok(Arc::new(CertificateStore {
            root,
            taken: Mutex::new(HashSet::new()),
            groups: Mutex::new(HashSet::new()),
        }))
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    /// `a/b` names nest; each segment is slugged.
    fn dir_for(&self, name: &str) -> PathBuf {
        name.split('/')
            .fold(self.root.clone(), |d, seg| d.join(slug(seg)))
    }

    /// A new group directory. A name used before, in this run or an
    /// earlier one, gets a numeric suffix, so groups never share files.
    fn fresh_group(&self, name: &str) -> Result<PathBuf, StoreError> {
        let base = self.dir_for(name);
        let mut groups = self.groups.lock().expect("store lock");
        let mut k = 1;
        loop {
            let dir = if k == 1 {
                base.clone()
            } else {
                let mut s = base.clone().into_os_string();
                s.push(format!("-{k}"));
                PathBuf::from(s)
            };
            let used = dir.join(PRESENTATION_FILE).exists() || dir.join(SPACE_FILE).exists();
            if !used && groups.insert(dir.clone()) {
                create_dir(&dir)?;
                return Ok(dir);
            }
            k += 1;
        }
    }

    /// Creates a group directory and records the presentation the group's
    /// certificates refer to.
    pub fn group(&self, name: &str, pres: &Presentation) -> Result<PathBuf, StoreError> {
        let dir = self.fresh_group(name)?;
        write_json(&dir.join(PRESENTATION_FILE), &pres.dump())?;
        Ok(dir)
    }

    pub fn tensor_group(&self, name: &str, space: &TensorSpace) -> Result<PathBuf, StoreError> {
        let dir = self.fresh_group(name)?;
        let dump = SpaceDump {
            legs: space.legs.iter().map(|p| p.dump()).collect(),
        };
        write_json(&dir.join(SPACE_FILE), &dump)?;
        Ok(dir)
    }

    fn fresh(&self, dir: &Path, label: &str) -> PathBuf {
        let mut taken = self.taken.lock().expect("store lock");
        let base = slug(label);
        let mut k = 1;
        loop {
            let name = if k == 1 {
                format!("{base}.json")
            } else {
                format!("{base}-{k}.json")
            };
            let path = dir.join(name);
            let reserved = [PRESENTATION_FILE, SPACE_FILE]
                .iter()
                .any(|f| path.file_name() == Some(f.as_ref()));
            if !reserved && taken.insert(path.clone()) {
                return path;
            }
            k += 1;
        }
    }

    /// Matrix witnesses live under `witnesses/`, outside every group.
    pub fn write_witness(
        &self,
        name: &str,
        value: &serde_json::Value,
    ) -> Result<PathBuf, StoreError> {
        let dir = self.root.join("witnesses");
        create_dir(&dir)?;
        let path = self.fresh(&dir, &name.replace('/', " "));
        write_json(&path, value)?;
        Ok(path)
    }

    pub fn write(
        &self,
        dir: &Path,
        label: &str,
        pres: &Presentation,
        target: &NCPoly,
        cert: &ProofCertificate,
    ) -> Result<PathBuf, StoreError> {
        let path = self.fresh(dir, label);
        write_json(&path, &cert.to_file(pres, target))?;
        Ok(path)
    }

    pub fn write_layered(
        &self,
        dir: &Path,
        label: &str,
        pres: &Presentation,
        target: &NCPoly,
        cert: &LayeredCertificate,
    ) -> Result<PathBuf, StoreError> {
        let path = self.fresh(dir, label);
        write_json(&path, &cert.to_file(pres, target))?;
        Ok(path)
    }

    pub fn write_tensor(
        &self,
        dir: &Path,
        label: &str,
        target: &TensorPoly,
        cert: &TensorCertificate,
    ) -> Result<PathBuf, StoreError> {
        let path = self.fresh(dir, label);
        write_json(&path, &cert.to_file(target))?;
        Ok(path)
    }
}

impl CertificateStore {
    /// Writes every proved item, one group per distinct presentation.
    pub fn save_lemma_report(
        &self,
        prefix: &str,
        r: &LemmaReport,
    ) -> Result<Vec<PathBuf>, StoreError> {
        let mut groups: Vec<(Arc<Presentation>, PathBuf)> = Vec::new();
        let mut out = Vec::new();
        for item in &r.items {
            let Some(cert) = item.certificate() else {
                continue;
            };
            let dir = match groups
                .iter()
                .find(|(p, _)| Arc::ptr_eq(p, &item.presentation))
            {
                Some((_, d)) => d.clone(),
                None => {
                    let name = format!("{prefix}/{} {}", groups.len(), item.presentation.name());
                    let d = self.group(&name, &item.presentation)?;
                    groups.push((item.presentation.clone(), d.clone()));
                    d
                }
            };
            out.push(self.write(&dir, &item.label, &item.presentation, &item.target, cert)?);
        }
        Ok(out)
    }

    /// Writes every proved identity of a section, structural ones with an
    /// empty certificate, one group per tensor space.
    pub fn save_section(
        &self,
        prefix: &str,
        r: &SectionReport,
    ) -> Result<Vec<PathBuf>, StoreError> {
        let mut groups: Vec<(Arc<TensorSpace>, PathBuf)> = Vec::new();
        let mut out = Vec::new();
        let empty = TensorCertificate::default();
        for c in r.checks.iter().filter(|c| c.proved) {
            let space = c.target.space();
            let dir = match groups.iter().find(|(s, _)| Arc::ptr_eq(s, space)) {
                Some((_, d)) => d.clone(),
                None => {
                    let name = format!("{prefix}/{} {}", groups.len(), r.section);
                    let d = self.tensor_group(&name, space)?;
                    groups.push((space.clone(), d.clone()));
                    d
                }
            };
            let cert = c.certificate.as_ref().unwrap_or(&empty);
            out.push(self.write_tensor(&dir, &c.label, &c.target, cert)?);
        }
        Ok(out)
    }
}

/// Outcome of replaying a certificate directory.
#[derive(Debug, Clone, Default, Serialize)]
pub struct StoreCheck {
    pub checked: usize,
    pub failures: Vec<PathBuf>,
}

impl StoreCheck {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

fn sorted_entries(dir: &Path) -> Result<Vec<PathBuf>, StoreError> {
    let io = |source| StoreError::Io {
        path: dir.to_path_buf(),
        source,
    };
    let mut out = Vec::new();
    for e in std::fs::read_dir(dir).map_err(io)? {
        out.push(e.map_err(io)?.path());
    }
    out.sort();
    Ok(out)
}

enum Group {
    Plain(Presentation),
    Tensor(Arc<TensorSpace>),
}

fn load_group(dir: &Path) -> Result<Group, StoreError> {
    let engine = |source| StoreError::Engine {
        path: dir.to_path_buf(),
        source,
    };
    if dir.join(PRESENTATION_FILE).exists() {
        let dump: PresentationDump = read_json(&dir.join(PRESENTATION_FILE))?;
        Ok(Group::Plain(
            Presentation::from_dump(&dump).map_err(engine)?,
        ))
    } else if dir.join(SPACE_FILE).exists() {
        let dump: SpaceDump = read_json(&dir.join(SPACE_FILE))?;
        let legs = dump
            .legs
            .iter()
            .map(|d| Presentation::from_dump(d).map(Arc::new))
            .collect::<Result<Vec<_>, _>>()
            .map_err(engine)?;
        Ok(Group::Tensor(TensorSpace::new(legs)))
    } else {
        Err(StoreError::MissingPresentation(dir.to_path_buf()))
    }
}

fn check_in(group: &Group, path: &Path) -> Result<bool, StoreError> {
    let engine = |source| StoreError::Engine {
        path: path.to_path_buf(),
        source,
    };
    match group {
        Group::Plain(pres) => {
            let file: CertificateFile = read_json(path)?;
            let (target, cert) = LayeredCertificate::from_file(&file, pres).map_err(engine)?;
            Ok(check_layered_certificate(pres, &target, &cert))
        }
        Group::Tensor(space) => {
            let file: TensorCertificateFile = read_json(path)?;
            let (target, cert) = TensorCertificate::from_file(&file, space).map_err(engine)?;
            Ok(check_tensor_certificate(&target, &cert))
        }
    }
}

/// Replays one certificate file against the presentation of its group.
pub fn check_file(path: &Path) -> Result<bool, StoreError> {
    let dir = path.parent().unwrap_or(Path::new("."));
    check_in(&load_group(dir)?, path)
}

/// Replays every certificate below `root`, in sorted path order. Each
/// group's presentation is loaded once.
pub fn verify_store(root: &Path) -> Result<StoreCheck, StoreError> {
    let mut groups: BTreeMap<PathBuf, Vec<PathBuf>> = BTreeMap::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        let is_group = dir.join(PRESENTATION_FILE).exists() || dir.join(SPACE_FILE).exists();
        for p in sorted_entries(&dir)? {
            if p.is_dir() {
                stack.push(p);
            } else if is_group
                && p.extension().is_some_and(|e| e == "json")
                && ![PRESENTATION_FILE, SPACE_FILE]
                    .iter()
                    .any(|f| p.file_name() == Some(f.as_ref()))
            {
                groups.entry(dir.clone()).or_default().push(p);
            }
        }
    }
    let mut report = StoreCheck::default();
    for (dir, files) in groups {
        let group = load_group(&dir)?;
        let results = files
            .par_iter()
            .map(|f| check_in(&group, f).map(|ok| (f, ok)))
            .collect::<Result<Vec<_>, _>>()?;
        report.checked += results.len();
        report.failures.extend(
            results
                .into_iter()
                .filter(|(_, ok)| !ok)
                .map(|(f, _)| f.clone()),
        );
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncstar::{prove_zero, CompletionConfig, RewriteSystem, ZeroProof};
    use crate::presentations::{snplus_presentation, u};

    #[test]
    fn written_certificates_replay_and_tampering_is_caught() {
        let tmp = tempfile::tempdir().unwrap();
        let root = tmp.path().join("certs");
        let store = CertificateStore::new(&root).unwrap();
        let pres = Arc::new(snplus_presentation(3));
        let sys = RewriteSystem::complete(pres.clone(), &CompletionConfig::default()).unwrap();
        let dir = store.group("S3+", &pres).unwrap();
        let c = &(&u(3, 1, 1) * &u(3, 2, 2)) - &(&u(3, 2, 2) * &u(3, 1, 1));
        let ZeroProof::Proved(cert) = prove_zero(&sys, &c) else {
            panic!("commutator vanishes");
        };
        let a = store.write(&dir, "c", &pres, &c, &cert).unwrap();
        let b = store.write(&dir, "c", &pres, &c, &cert).unwrap();
        assert_ne!(a, b);
        let check = verify_store(&root).unwrap();
        assert_eq!((check.checked, check.ok()), (2, true));

        let mut file: CertificateFile = read_json(&b).unwrap();
        file.terms[0].coeff = format!("{}1", file.terms[0].coeff.trim_start_matches('-'));
        write_json(&b, &file).unwrap();
        let check = verify_store(&root).unwrap();
        assert_eq!(check.failures, vec![b]);
    }

    #[test]
    fn reused_group_names_get_their_own_directory() {
        let tmp = tempfile::tempdir().unwrap();
        let s3 = snplus_presentation(3);
        let s2 = snplus_presentation(2);
        let store = CertificateStore::new(tmp.path()).unwrap();
        let a = store.group("stage/1 axioms", &s3).unwrap();
        let b = store.group("stage/1 axioms", &s2).unwrap();
        assert_ne!(a, b);
        assert!(b.ends_with("1_axioms-2"));
        let again = CertificateStore::new(tmp.path()).unwrap();
        let c = again.group("stage/1 axioms", &s3).unwrap();
        assert!(c.ends_with("1_axioms-3"));
    }

    #[test]
    fn slugs_are_file_safe() {
        assert_eq!(slug("QA1 row u11 u12"), "QA1_row_u11_u12");
        assert_eq!(slug(""), "_");
    }
}
