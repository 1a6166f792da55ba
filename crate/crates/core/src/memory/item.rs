use std::collections::HashMap;
use std::fmt;
use std::sync::RwLock;

use crate::hv::{BinaryHv, HvSpace};
use crate::rng;

/// Symbol → random hypervector store.
///
/// A symbol's vector is `space.random_hv(fnv1a(symbol))`, so it depends only
/// on the space and the symbol text. Unseen symbols are generated on first
/// use and cached; the cache is the only mutable state.
pub struct ItemMemory {
    space: HvSpace,
    cache: RwLock<HashMap<String, BinaryHv>>,
}

impl ItemMemory {
    pub fn new(space: HvSpace) -> Self {
        Self {
            space,
            cache: RwLock::new(HashMap::new()),
        }
    }

    /// Pre-populates the cache.
    pub fn with_symbols<'a, I: IntoIterator<Item = &'a str>>(space: HvSpace, symbols: I) -> Self {
        let mem = Self::new(space);
        for s in symbols {
            mem.get(s);
        }
        mem
    }

    pub fn space(&self) -> HvSpace {
        self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn get(&self, symbol: &str) -> BinaryHv {
        if let Some(hv) = self.cache.read().expect("item memory lock poisoned").get(symbol) {
            return hv.clone();
        }
        let hv = self.space.random_hv(rng::fnv1a(symbol.as_bytes()));
        self.cache
            .write()
            .expect("item memory lock poisoned")
            .entry(symbol.to_owned())
            .or_insert(hv)
            .clone()
    }

    /// Number of cached symbols.
    pub fn len(&self) -> usize {
        self.cache.read().expect("item memory lock poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl Clone for ItemMemory {
    fn clone(&self) -> Self {
        Self {
            space: self.space,
            cache: RwLock::new(self.cache.read().expect("item memory lock poisoned").clone()),
        }
    }
}

impl fmt::Debug for ItemMemory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ItemMemory")
            .field("space", &self.space)
            .field("cached", &self.len())
            .finish()
    }
}
