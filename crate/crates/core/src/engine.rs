//! Shared memo tables for all integral evaluations.

use crate::arith::Rational;
use crate::hodge::{ChKey, HodgeKey};
use crate::wk::{KappaKey, WkKey};
use std::collections::HashMap;
use std::hash::Hash;
use std::sync::{OnceLock, RwLock};

/// A memo table with concurrent readers and serialized insertion.
///
/// The lock is only held for the lookup or the insert itself, never across
/// the recursive computation that produces a value.
#[derive(Debug)]
pub struct Memo<K> {
    map: RwLock<HashMap<K, Rational>>,
}

impl<K> Default for Memo<K> {
    fn default() -> Self {
        Self {
            map: RwLock::new(HashMap::new()),
        }
    }
}

impl<K: Eq + Hash + Clone> Memo<K> {
    pub fn new() -> Self {
        Self {
            map: RwLock::new(HashMap::new()),
        }
    }

    pub fn get(&self, key: &K) -> Option<Rational> {
        self.map
            .read()
            .expect("memo lock poisoned")
            .get(key)
            .cloned()
    }

    /// Inserts `value` unless the key is already present; returns the stored value.
    pub fn insert(&self, key: K, value: Rational) -> Rational {
        let mut map = self.map.write().expect("memo lock poisoned");
        map.entry(key).or_insert(value).clone()
    }

    pub fn len(&self) -> usize {
        self.map.read().expect("memo lock poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn snapshot(&self) -> Vec<(K, Rational)> {
        self.map
            .read()
            .expect("memo lock poisoned")
            .iter()
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect()
    }

    pub fn clear(&self) {
        self.map.write().expect("memo lock poisoned").clear();
    }
}

/// Evaluation context: owns the memo tables of every recursion.
///
/// Most callers use [`Engine::global`] through the free functions of the crate;
/// a fresh `Engine` gives an independent cache, e.g. for re-verifying persisted values.
#[derive(Debug, Default)]
pub struct Engine {
    pub(crate) wk: Memo<WkKey>,
    pub(crate) kappa: Memo<KappaKey>,
    pub(crate) ch: Memo<ChKey>,
    pub(crate) hodge: Memo<HodgeKey>,
}

impl Engine {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn global() -> &'static Engine {
        static GLOBAL: OnceLock<Engine> = OnceLock::new();
        GLOBAL.get_or_init(Engine::new)
    }

    /// The Witten–Kontsevich table, the one that gets persisted.
    pub fn wk_cache(&self) -> &Memo<WkKey> {
        &self.wk
    }

    pub fn clear(&self) {
        self.wk.clear();
        self.kappa.clear();
        self.ch.clear();
        self.hodge.clear();
    }
}
