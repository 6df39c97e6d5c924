//! Disk cache of exact colored Jones polynomials:
//! `<cache>/jones/<knot label>/n<n>.poly` in canonical text form.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qknot::fusion::{colored_jones, KnotSpec};
use qknot::qarith::LaurentPoly;
use qknot::QResult;

use crate::{CliError, CliResult};

pub struct JonesCache {
    root: Option<PathBuf>,
    hits: Mutex<Vec<(KnotSpec, i64)>>,
}

impl JonesCache {
    pub fn new(root: Option<&Path>) -> Self {
        JonesCache {
            root: root.map(Path::to_path_buf),
            hits: Mutex::new(Vec::new()),
        }
    }

    /// Location of `J_{K,n}` (`None` without a cache directory).
    pub fn path(&self, spec: &KnotSpec, n: i64) -> Option<PathBuf> {
        self.root
            .as_ref()
            .map(|r| r.join("jones").join(spec.label()).join(format!("n{}.poly", n.abs())))
    }

    /// `J_{K,n}`, read from the cache when present and stored after computing.
    pub fn jones(&self, spec: &KnotSpec, n: i64) -> QResult<LaurentPoly> {
        let n = n.abs();
        let Some(path) = self.path(spec, n) else {
            return colored_jones(spec, n);
        };
        if let Ok(text) = fs::read_to_string(&path) {
            let v = LaurentPoly::parse_q_string(text.trim())?;
            self.hits.lock().unwrap().push((*spec, n));
            return Ok(v);
        }
        let v = colored_jones(spec, n)?;
        // best effort: an unwritable cache only costs recomputation
        if let Some(dir) = path.parent() {
            if fs::create_dir_all(dir).is_ok() {
                let tmp = path.with_extension(format!("tmp{}", std::process::id()));
                if fs::write(&tmp, v.to_q_string()? + "\n").is_ok() {
                    let _ = fs::rename(&tmp, &path);
                }
            }
        }
        Ok(v)
    }

    /// Recomputes one randomly chosen cache hit of this run and compares it
    /// with the stored value.  Returns the checked entry, if any.
    pub fn spot_check(&self, seed: u64) -> CliResult<Option<(KnotSpec, i64)>> {
        let mut hits = self.hits.lock().unwrap().clone();
        hits.sort_by_key(|(s, n)| (s.m1, s.m2, *n));
        hits.dedup();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let Some(&(spec, n)) = hits.choose(&mut rng) else {
            return Ok(None);
        };
        let path = self.path(&spec, n).expect("hits imply a cache directory");
        let stored = LaurentPoly::parse_q_string(fs::read_to_string(&path)?.trim())?;
        if stored != colored_jones(&spec, n)? {
            return Err(CliError::Failure(format!(
                "cache entry {} differs from a fresh computation",
                path.display()
            )));
        }
        Ok(Some((spec, n)))
    }
}
