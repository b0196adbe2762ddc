//! Covering-number knowledge: closed forms, values stated with the table, and
//! witness-backed upper bounds persisted as design files.
//!
//! The witness directory is `$CCOVER_WITNESS_DIR`, or `./witnesses` when unset.
//! Files are named `c-n-k-r.design` (plain coverings) and `cc-n-k-r.design`
//! (connected ones) and are re-verified on load.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::bounds;
use crate::error::{Error, Result};
use crate::io::{read_design, write_design, DesignFile};
use crate::model::{binom_u64, CoverParams, DesignFamily, DesignParams, TuranParams};
use crate::verify::{dualize, ensure_verified};

pub const WITNESS_DIR_ENV: &str = "CCOVER_WITNESS_DIR";

/// `C(n, k, r)` lower bounds printed in the table with the literature tag.
pub const EMBEDDED_LOWER: [((usize, usize, usize), u64); 7] = [
    ((11, 6, 5), 96),
    ((11, 7, 6), 84),
    ((12, 7, 6), 165),
    ((12, 8, 7), 126),
    ((13, 8, 7), 269),
    ((13, 9, 8), 185),
    ((14, 9, 8), 419),
];

/// Largest `n` for which `T(n,4,3)` is stated to equal the Kostochka formula.
pub const TURAN_VERIFIED_MAX: usize = 13;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Status {
    Exact { value: u64 },
    /// `upper` is absent when no bound is known.
    Interval { lower: u64, upper: Option<u64> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoveringNumberEntry {
    pub n: usize,
    pub k: usize,
    pub r: usize,
    pub status: Status,
    /// Provenance of the lower bound, then of the upper bound.
    pub lower_sources: Vec<String>,
    pub upper_sources: Vec<String>,
}

impl CoveringNumberEntry {
    pub fn lower(&self) -> u64 {
        match self.status {
            Status::Exact { value } => value,
            Status::Interval { lower, .. } => lower,
        }
    }

    pub fn upper(&self) -> Option<u64> {
        match self.status {
            Status::Exact { value } => Some(value),
            Status::Interval { upper, .. } => upper,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.status, Status::Exact { .. })
    }
}

/// Best candidates and every source attaining them.
#[derive(Default)]
struct Best {
    value: Option<u64>,
    sources: Vec<String>,
}

impl Best {
    fn offer(&mut self, value: u64, source: impl Into<String>, better: fn(u64, u64) -> bool) {
        match self.value {
            Some(v) if v == value => self.sources.push(source.into()),
            Some(v) if !better(value, v) => {}
            _ => {
                self.value = Some(value);
                self.sources = vec![source.into()];
            }
        }
    }
}

/// Closed-form `C(n,k,r)` values, with a source tag.
fn closed_form(n: usize, k: usize, r: usize) -> Option<(u64, &'static str)> {
    if r == 0 || k == n {
        return Some((1, "closed-form:single-block"));
    }
    if r == k {
        return Some((binom_u64(n, k as i64), "closed-form:all-subsets"));
    }
    if r == 1 && k == 2 {
        return Some(((n as u64).div_ceil(2), "closed-form:matching"));
    }
    if r == 2 && k == 3 {
        return bounds::fort_hedlund(n).ok().map(|v| (v, "closed-form:fort-hedlund"));
    }
    if k + 1 == n && r + 2 == n {
        return Some((n as u64 - 1, "closed-form:all-but-one"));
    }
    if k + 2 == n && r + 3 == n && n >= 3 {
        return Some((bounds::mantel_turan(n), "closed-form:mantel"));
    }
    None
}

fn key_name(params: CoverParams, connected: bool) -> String {
    format!("{}-{}-{}-{}.design", if connected { "cc" } else { "c" }, params.n(), params.k(), params.r())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub file: DesignFile,
    pub connected: bool,
    pub file_name: String,
}

/// Catalog snapshot: witness registry plus the fixed knowledge above.
#[derive(Clone, Debug, Default)]
pub struct Catalog {
    dir: Option<PathBuf>,
    witnesses: BTreeMap<(usize, usize, usize, bool), Witness>,
    /// Files skipped on load, with the reason.
    rejected: Vec<(String, String)>,
}

pub fn default_witness_dir() -> PathBuf {
    std::env::var_os(WITNESS_DIR_ENV).map_or_else(|| PathBuf::from("witnesses"), PathBuf::from)
}

impl Catalog {
    /// A catalog without persistence.
    pub fn in_memory() -> Self {
        Catalog::default()
    }

    /// Loads and re-verifies every `*.design` file in `dir`; a missing directory is empty.
    pub fn open(dir: impl AsRef<Path>) -> Result<Self> {
        let dir = dir.as_ref().to_path_buf();
        let mut cat = Catalog {
            dir: Some(dir.clone()),
            ..Catalog::default()
        };
        if !dir.exists() {
            return Ok(cat);
        }
        let mut names: Vec<String> = fs::read_dir(&dir)?
            .filter_map(|e| e.ok())
            .map(|e| e.file_name().to_string_lossy().into_owned())
            .filter(|name| name.ends_with(".design"))
            .collect();
        names.sort();
        for name in names {
            let connected = name.starts_with("cc-");
            let loaded = read_design(dir.join(&name)).and_then(|file| {
                let fam = as_covering(&file.family);
                ensure_verified(&fam, connected, &name)?;
                Ok(DesignFile { family: fam, comments: file.comments })
            });
            match loaded {
                Ok(file) => cat.insert(file, connected, name),
                Err(e) => cat.rejected.push((name, e.to_string())),
            }
        }
        Ok(cat)
    }

    /// [`Catalog::open`] on [`default_witness_dir`].
    pub fn open_default() -> Result<Self> {
        Self::open(default_witness_dir())
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    pub fn rejected(&self) -> &[(String, String)] {
        &self.rejected
    }

    pub fn witnesses(&self) -> impl Iterator<Item = &Witness> {
        self.witnesses.values()
    }

    fn insert(&mut self, file: DesignFile, connected: bool, file_name: String) {
        let p = file.family.cover_params().expect("stored witnesses are coverings");
        let key = (p.n(), p.k(), p.r(), connected);
        if self.witnesses.get(&key).is_some_and(|w| w.file.family.len() <= file.family.len()) {
            return;
        }
        self.witnesses.insert(key, Witness { file, connected, file_name });
    }

    /// Smallest stored witness for the parameters; a connected one also serves plain queries.
    pub fn witness(&self, params: CoverParams, connected: bool) -> Option<&Witness> {
        let (n, k, r) = (params.n(), params.k(), params.r());
        let conn = self.witnesses.get(&(n, k, r, true));
        if connected {
            return conn;
        }
        match (self.witnesses.get(&(n, k, r, false)), conn) {
            (Some(a), Some(b)) if b.file.family.len() < a.file.family.len() => Some(b),
            (Some(a), _) => Some(a),
            (None, b) => b,
        }
    }

    /// Registers a verified family (Turán systems are stored as their dual covering).
    /// The stored bound only ever decreases; on any error nothing changes.
    pub fn register_witness(&mut self, fam: &DesignFamily, connected_required: bool) -> Result<CoveringNumberEntry> {
        let cov = as_covering(fam);
        ensure_verified(&cov, connected_required, "registered witness")?;
        let params = cov.cover_params().expect("covering");
        let better = self
            .witness(params, connected_required)
            .filter(|w| w.connected == connected_required)
            .is_none_or(|w| cov.len() < w.file.family.len());
        if better {
            let name = key_name(params, connected_required);
            let file = DesignFile::new(cov).with_comment(" registered witness");
            if let Some(dir) = &self.dir {
                write_design(dir.join(&name), &file)?;
            }
            self.insert(file, connected_required, name);
        }
        self.covering_number(params.n(), params.k(), params.r())
    }

    /// Best known entry for `C(n, k, r)`.
    pub fn covering_number(&self, n: usize, k: usize, r: usize) -> Result<CoveringNumberEntry> {
        let params = CoverParams::new(n, k, r)?;
        let mut lo = Best::default();
        let mut hi = Best::default();
        let greater = |a: u64, b: u64| a > b;
        let smaller = |a: u64, b: u64| a < b;
        lo.offer(bounds::schoenheim(n, k, r)?, "schoenheim", greater);
        if let Some((v, tag)) = closed_form(n, k, r) {
            lo.offer(v, tag, greater);
            hi.offer(v, tag, smaller);
        }
        if let Some(v) = embedded_lower(n, k, r) {
            lo.offer(v, "table-embedded", greater);
        }
        if let Some(v) = stated_lower(n, k, r) {
            lo.offer(v, "paper-stated:turan-verified", greater);
        }
        if k == r + 1 {
            hi.offer(bounds::gordon_c_upper(n, r)?, "construction:recursive-pairs", smaller);
        }
        if k + 3 == n && r + 4 == n && n >= 8 {
            hi.offer(bounds::kostochka_cc_upper(n)?, "construction:kostochka", smaller);
        }
        if (n, k, r) == (9, 6, 5) {
            hi.offer(bounds::kostochka_formula(9), "construction:kostochka-nine", smaller);
        }
        if let Some(w) = self.witness(params, false) {
            hi.offer(w.file.family.len() as u64, format!("witness:{}", w.file_name), smaller);
        }
        let lower = lo.value.expect("schoenheim always offered");
        let status = match hi.value {
            Some(u) if u == lower => Status::Exact { value: u },
            Some(u) if u < lower => {
                return Err(Error::Verification(format!(
                    "C({n},{k},{r}): upper {u} ({:?}) below lower {lower} ({:?})",
                    hi.sources, lo.sources
                )))
            }
            upper => Status::Interval { lower, upper },
        };
        Ok(CoveringNumberEntry {
            n,
            k,
            r,
            status,
            lower_sources: lo.sources,
            upper_sources: hi.sources,
        })
    }

    /// `T(n, m, p)` through the complement duality `T(n,m,p) = C(n, n-p, n-m)`.
    pub fn turan_number(&self, n: usize, m: usize, p: usize) -> Result<CoveringNumberEntry> {
        let d = TuranParams::new(n, m, p)?.dual();
        self.covering_number(d.n(), d.k(), d.r())
    }

    /// Smallest stored connected witness size for `(n, k, r)`, with its file name.
    pub fn connected_upper(&self, params: CoverParams) -> Option<(u64, String)> {
        self.witness(params, true).map(|w| (w.file.family.len() as u64, w.file_name.clone()))
    }
}

fn as_covering(fam: &DesignFamily) -> DesignFamily {
    match fam.params() {
        DesignParams::Covering(_) => fam.clone(),
        DesignParams::Turan(_) => dualize(fam),
    }
}

/// The table's literature lower bounds, each tagged `table-embedded`.
pub fn embedded_table() -> Vec<CoveringNumberEntry> {
    EMBEDDED_LOWER
        .iter()
        .map(|&((n, k, r), v)| CoveringNumberEntry {
            n,
            k,
            r,
            status: Status::Interval { lower: v, upper: None },
            lower_sources: vec!["table-embedded".into()],
            upper_sources: vec![],
        })
        .collect()
}

pub fn embedded_lower(n: usize, k: usize, r: usize) -> Option<u64> {
    EMBEDDED_LOWER.iter().find(|(p, _)| *p == (n, k, r)).map(|&(_, v)| v)
}

/// `C(n, n-3, n-4) = T(n,4,3)` equals the Kostochka formula for `n <= 13`, as stated alongside the table.
pub fn stated_lower(n: usize, k: usize, r: usize) -> Option<u64> {
    ((5..=TURAN_VERIFIED_MAX).contains(&n) && k + 3 == n && r + 4 == n).then(|| bounds::kostochka_formula(n))
}

/// Stated connected lower bounds: at `n = 9` both optimal `(9,4,3)`-Turán systems are
/// disconnected, so `CC(9,5)` exceeds the formula.
pub fn stated_connected_lower(n: usize, r: usize) -> Option<u64> {
    (n == 9 && r == 5).then(|| bounds::kostochka_formula(9) + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Block;

    fn b(v: &[usize]) -> Block {
        Block::new(v).unwrap()
    }

    #[test]
    fn closed_forms() {
        let cat = Catalog::in_memory();
        assert_eq!(cat.covering_number(6, 3, 2).unwrap().status, Status::Exact { value: 6 });
        assert_eq!(cat.covering_number(7, 7, 6).unwrap().status, Status::Exact { value: 1 });
        assert_eq!(cat.covering_number(9, 2, 1).unwrap().status, Status::Exact { value: 5 });
        assert_eq!(cat.covering_number(8, 6, 5).unwrap().status, Status::Exact { value: 12 });
        assert_eq!(cat.covering_number(6, 5, 4).unwrap().status, Status::Exact { value: 5 });
        let e = cat.covering_number(13, 9, 8).unwrap();
        assert_eq!(e.lower(), 185);
        assert!(e.lower_sources.contains(&"table-embedded".to_string()));
        assert_eq!(cat.covering_number(12, 9, 8).unwrap().status, Status::Exact { value: 84 });
    }

    #[test]
    fn embedded_lookup() {
        assert_eq!(embedded_table().len(), 7);
        assert_eq!(embedded_lower(13, 9, 8), Some(185));
        assert_eq!(embedded_lower(12, 8, 7), Some(126));
        assert_eq!(embedded_lower(12, 8, 6), None);
    }

    #[test]
    fn dual_queries_agree() {
        let cat = Catalog::in_memory();
        for (n, k, r) in [(7, 4, 3), (9, 6, 5), (13, 9, 8), (10, 7, 6)] {
            assert_eq!(cat.turan_number(n, n - r, n - k).unwrap(), cat.covering_number(n, k, r).unwrap());
        }
        assert_eq!(cat.turan_number(9, 4, 3).unwrap().status, Status::Exact { value: 30 });
        assert_eq!(crate::construct::kostochka_nine_first().unwrap().len(), 30);
    }

    #[test]
    fn registration_is_monotone_and_persistent() {
        let dir = tempfile::tempdir().unwrap();
        let mut cat = Catalog::open(dir.path()).unwrap();
        let p = CoverParams::new(5, 3, 2).unwrap();
        let bad = DesignFamily::covering(p, [b(&[1, 2, 3])]).unwrap();
        let before = cat.covering_number(5, 3, 2).unwrap();
        assert!(cat.register_witness(&bad, false).is_err());
        assert_eq!(cat.covering_number(5, 3, 2).unwrap(), before);
        assert!(!dir.path().join("c-5-3-2.design").exists());

        let seven = crate::construct::construct_r2(5).unwrap();
        let e = cat.register_witness(&seven, true).unwrap();
        assert_eq!(e.upper(), Some(4));
        assert_eq!(cat.connected_upper(p).unwrap().0, 5);
        let extra = crate::model::k_subsets(5, 3).find(|x| !seven.contains(*x)).unwrap();
        let bigger = DesignFamily::covering(p, seven.blocks().iter().copied().chain([extra])).unwrap();
        cat.register_witness(&bigger, true).unwrap();
        assert_eq!(cat.connected_upper(p).unwrap().0, 5);

        let again = Catalog::open(dir.path()).unwrap();
        assert_eq!(again.connected_upper(p), cat.connected_upper(p));
        assert_eq!(again.covering_number(5, 3, 2).unwrap(), cat.covering_number(5, 3, 2).unwrap());
    }

    #[test]
    fn corrupt_files_are_rejected_on_load() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("c-5-3-2.design"), "5 3 2 covering\n1 2 3\n").unwrap();
        fs::write(dir.path().join("c-4-3-2.design"), "4 3 2 covering\n1 2 3\n1 2 4\n1 3 4\n").unwrap();
        let cat = Catalog::open(dir.path()).unwrap();
        assert_eq!(cat.rejected().len(), 1);
        assert_eq!(cat.witnesses().count(), 1);
    }
}
