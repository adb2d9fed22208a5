//! Persistence of the Witten–Kontsevich table.
//!
//! ```text
//! PSHODGE-WKCACHE v1
//! g<TAB>n<TAB>d_1,...,d_n<TAB>numerator<TAB>denominator
//! ```
//!
//! Exponents are sorted ascending, values are in lowest terms with a positive
//! denominator, and lines are sorted by key.

use num_bigint::BigInt;
use pshodge::{Engine, Rational, WkKey};
use std::collections::BTreeMap;
use std::io;
use std::path::{Path, PathBuf};
use thiserror::Error;

pub const HEADER: &str = "PSHODGE-WKCACHE v1";
const MAGIC: &str = "PSHODGE-WKCACHE";

/// Default number of entries re-verified when a cache is installed.
pub const DEFAULT_SAMPLE: usize = 8;

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("cannot access {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("line 1: not a cache file (expected header \"{HEADER}\")")]
    BadHeader,
    #[error("line 1: unsupported cache version \"{0}\" (this build reads \"{HEADER}\")")]
    VersionMismatch(String),
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("integrity check failed for g={g}, exponents [{exponents}]: stored {stored}, recomputed {computed}")]
    Integrity {
        g: u32,
        exponents: String,
        stored: String,
        computed: String,
    },
}

/// A versioned table of `⟨τ_{d_1}⋯τ_{d_n}⟩_g` values, keyed by genus and sorted exponents.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CacheFile {
    entries: BTreeMap<(u32, Vec<u32>), Rational>,
}

fn join(exponents: &[u32]) -> String {
    exponents
        .iter()
        .map(|e| e.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

impl CacheFile {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_engine(engine: &Engine) -> Self {
        let mut out = Self::new();
        for (key, value) in engine.wk_cache().snapshot() {
            out.insert(&key, value);
        }
        out
    }

    pub fn insert(&mut self, key: &WkKey, value: Rational) {
        self.entries
            .insert((key.genus(), key.exponents().to_vec()), value);
    }

    pub fn get(&self, key: &WkKey) -> Option<&Rational> {
        self.entries.get(&(key.genus(), key.exponents().to_vec()))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (WkKey, &Rational)> {
        self.entries
            .iter()
            .map(|((g, e), v)| (WkKey::new(*g, e.clone()), v))
    }

    pub fn merge(&mut self, other: &CacheFile) {
        for (k, v) in &other.entries {
            self.entries.insert(k.clone(), v.clone());
        }
    }

    pub fn render(&self) -> String {
        let mut out = String::from(HEADER);
        out.push('\n');
        for ((g, e), v) in &self.entries {
            out.push_str(&format!(
                "{g}\t{}\t{}\t{}\t{}\n",
                e.len(),
                join(e),
                v.numer(),
                v.denom()
            ));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, CacheError> {
        let mut lines = text.lines();
        match lines.next().map(str::trim_end) {
            Some(HEADER) => {}
            Some(h) if h.starts_with(MAGIC) => {
                return Err(CacheError::VersionMismatch(h.to_string()))
            }
            _ => return Err(CacheError::BadHeader),
        }
        let mut out = Self::new();
        for (i, line) in lines.enumerate() {
            let line_no = i + 2;
            let bad = |reason: String| CacheError::Malformed {
                line: line_no,
                reason,
            };
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 5 {
                return Err(bad(format!(
                    "expected 5 tab-separated fields, found {}",
                    fields.len()
                )));
            }
            let g: u32 = fields[0]
                .parse()
                .map_err(|_| bad(format!("invalid genus '{}'", fields[0])))?;
            let n: usize = fields[1]
                .parse()
                .map_err(|_| bad(format!("invalid marking count '{}'", fields[1])))?;
            let exponents: Vec<u32> = if fields[2].is_empty() {
                Vec::new()
            } else {
                fields[2]
                    .split(',')
                    .map(|s| s.parse())
                    .collect::<Result<_, _>>()
                    .map_err(|_| bad(format!("invalid exponent list '{}'", fields[2])))?
            };
            if exponents.len() != n {
                return Err(bad(format!(
                    "{} exponents listed for n={n}",
                    exponents.len()
                )));
            }
            if exponents.windows(2).any(|w| w[0] > w[1]) {
                return Err(bad("exponents are not sorted".into()));
            }
            let num: BigInt = fields[3]
                .parse()
                .map_err(|_| bad(format!("invalid numerator '{}'", fields[3])))?;
            let den: BigInt = fields[4]
                .parse()
                .map_err(|_| bad(format!("invalid denominator '{}'", fields[4])))?;
            if den <= BigInt::from(0) {
                return Err(bad("denominator must be positive".into()));
            }
            let value = Rational::new(num.clone(), den.clone());
            if *value.numer() != num || *value.denom() != den {
                return Err(bad("value is not in lowest terms".into()));
            }
            if out.entries.insert((g, exponents), value).is_some() {
                return Err(bad("duplicate key".into()));
            }
        }
        Ok(out)
    }

    /// Reads `path`; a missing file is an empty cache.
    pub fn load(path: &Path) -> Result<Self, CacheError> {
        match std::fs::read_to_string(path) {
            Ok(text) => Self::parse(&text),
            Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(Self::new()),
            Err(source) => Err(CacheError::Io {
                path: path.to_path_buf(),
                source,
            }),
        }
    }

    pub fn store(&self, path: &Path) -> Result<(), CacheError> {
        std::fs::write(path, self.render()).map_err(|source| CacheError::Io {
            path: path.to_path_buf(),
            source,
        })
    }

    /// Up to `k` entries spread evenly over the sorted table.
    pub fn sample(&self, k: usize) -> Vec<(WkKey, &Rational)> {
        let all: Vec<_> = self.entries().collect();
        if k >= all.len() {
            return all;
        }
        let len = all.len();
        let picks: Vec<usize> = (0..k).map(|i| i * len / k).collect();
        all.into_iter()
            .enumerate()
            .filter(|(i, _)| picks.contains(i))
            .map(|(_, e)| e)
            .collect()
    }

    /// Recomputes a sample of `k` entries with a fresh engine; returns how many were checked.
    pub fn verify(&self, k: usize) -> Result<usize, CacheError> {
        let fresh = Engine::new();
        let sample = self.sample(k);
        for (key, stored) in &sample {
            let computed = fresh.wk_integral(key);
            if computed != **stored {
                return Err(CacheError::Integrity {
                    g: key.genus(),
                    exponents: join(key.exponents()),
                    stored: pshodge::format_rational(stored),
                    computed: pshodge::format_rational(&computed),
                });
            }
        }
        Ok(sample.len())
    }

    /// Seeds the engine's table with every entry.
    pub fn install(&self, engine: &Engine) {
        for (key, value) in self.entries() {
            engine.wk_cache().insert(key, value.clone());
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use pshodge::arith::rat;

    #[test]
    fn genus_one_line() {
        let text = format!("{HEADER}\n1\t1\t1\t1\t24\n");
        let cache = CacheFile::parse(&text).unwrap();
        assert_eq!(cache.get(&WkKey::new(1, vec![1])), Some(&rat(1, 24)));
        assert_eq!(cache.render(), text);
    }

    #[test]
    fn rejects_bad_lines_with_numbers() {
        let cases = [
            ("1\t1\t1\t1", 2, "expected 5"),
            ("1\t1\t1\t2\t48", 2, "lowest terms"),
            ("1\t1\t1\t1\t-24", 2, "positive"),
            ("1\t2\t1\t1\t24", 2, "exponents listed"),
            ("0\t3\t0,0,x\t1\t1", 2, "exponent list"),
            ("0\t4\t1,0,0,0\t1\t1", 2, "not sorted"),
        ];
        for (line, no, needle) in cases {
            let text = format!("{HEADER}\n{line}\n");
            let err = CacheFile::parse(&text).unwrap_err().to_string();
            assert!(err.starts_with(&format!("line {no}:")), "{err}");
            assert!(err.contains(needle), "{err}");
        }
        let text = format!("{HEADER}\n0\t3\t0,0,0\t1\t1\n0\t3\t0,0,0\t1\t1\n");
        let err = CacheFile::parse(&text).unwrap_err().to_string();
        assert_eq!(err, "line 3: duplicate key");
    }

    #[test]
    fn header_checks() {
        assert!(matches!(
            CacheFile::parse("PSHODGE-WKCACHE v2\n"),
            Err(CacheError::VersionMismatch(_))
        ));
        assert!(matches!(
            CacheFile::parse("PSHODGE-WKCAHCE v1\n"),
            Err(CacheError::BadHeader)
        ));
        assert!(matches!(CacheFile::parse(""), Err(CacheError::BadHeader)));
    }

    #[test]
    fn sample_is_spread_and_bounded() {
        let mut cache = CacheFile::new();
        for d in 0..20u32 {
            cache.insert(&WkKey::new(0, vec![0, 0, 0, d]), rat(1, 1));
        }
        assert_eq!(cache.sample(8).len(), 8);
        assert_eq!(cache.sample(100).len(), 20);
        assert_eq!(cache.sample(0).len(), 0);
    }

    #[test]
    fn verify_catches_wrong_values() {
        let mut cache = CacheFile::new();
        cache.insert(&WkKey::new(1, vec![1]), rat(1, 24));
        assert_eq!(cache.verify(8).unwrap(), 1);
        cache.insert(&WkKey::new(1, vec![1]), rat(1, 25));
        assert!(matches!(cache.verify(8), Err(CacheError::Integrity { .. })));
    }
}
