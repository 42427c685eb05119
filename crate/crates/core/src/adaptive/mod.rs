//! Node dictionaries that store only node ids.
//!
//! A dictionary never keeps the keys of its entries. Every comparison goes
//! through a [`KeyExtractor`], which rebuilds the key of a node from the trie
//! at query time.

mod cuckoo;
mod hash;
mod sorted;

pub use cuckoo::CuckooTable;
pub use hash::{HashFamily, FAMILY};
pub use sorted::SortedList;

use std::fmt::Debug;

use rand_chacha::ChaCha8Rng;

use crate::arena::NodeId;
use crate::error::{Error, Result};

/// A key recomputed from a node.
pub trait DictKey: Copy + Eq + Ord + Debug {
    /// 64-bit value fed to the hash family.
    fn fingerprint(&self) -> u64;
}

impl DictKey for u32 {
    #[inline]
    fn fingerprint(&self) -> u64 {
        *self as u64
    }
}

impl DictKey for u64 {
    #[inline]
    fn fingerprint(&self) -> u64 {
        *self
    }
}

/// Rebuilds the key of a stored node.
pub trait KeyExtractor {
    type Key: DictKey;
    fn key(&self, id: NodeId) -> Self::Key;
}

impl<K: DictKey, F: Fn(NodeId) -> K> KeyExtractor for F {
    type Key = K;
    #[inline]
    fn key(&self, id: NodeId) -> K {
        self(id)
    }
}

/// Sorted lists above this size become cuckoo tables when promotion is on.
pub const DEFAULT_PROMOTION_THRESHOLD: usize = 32;

/// Tuning shared by every dictionary of one trie.
#[derive(Debug, Clone, PartialEq)]
pub struct DictConfig {
    /// Hash functions per cuckoo table, 2 or 3.
    pub hash_count: usize,
    /// Eviction steps before a cuckoo table gives up and grows.
    pub max_walk: u32,
    /// Largest allowed size / capacity ratio.
    pub max_load: f64,
    /// Promote sorted lists larger than this to cuckoo tables. `None` keeps
    /// child dictionaries sorted and handle dictionaries hashed.
    pub promotion_threshold: Option<usize>,
    /// Seed of the eviction walk generator.
    pub seed: u64,
}

impl Default for DictConfig {
    fn default() -> Self {
        DictConfig {
            hash_count: 3,
            max_walk: 100,
            max_load: 0.8,
            promotion_threshold: None,
            seed: 0x5eed,
        }
    }
}

impl DictConfig {
    pub fn validate(&self) -> Result<()> {
        if !(2..=HashFamily::MAX).contains(&self.hash_count) {
            return Err(Error::InvalidConfig(format!(
                "hash_count must be 2 or 3, got {}",
                self.hash_count
            )));
        }
        if !(self.max_load > 0.0 && self.max_load < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "max_load must lie in (0, 1), got {}",
                self.max_load
            )));
        }
        if self.max_walk == 0 {
            return Err(Error::InvalidConfig("max_walk must be positive".into()));
        }
        Ok(())
    }
}

/// Mutable state an insertion may need: the config and the walk generator.
pub struct InsertCtx<'a> {
    pub config: &'a DictConfig,
    pub rng: &'a mut ChaCha8Rng,
}

/// What an insertion did.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct InsertReport {
    /// Longest eviction walk performed.
    pub walk_steps: u32,
    /// Number of capacity doublings.
    pub resizes: u32,
}

impl InsertReport {
    fn merge(&mut self, o: InsertReport) {
        self.walk_steps = self.walk_steps.max(o.walk_steps);
        self.resizes += o.resizes;
    }
}

/// Which role a dictionary plays; decides its initial representation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Child,
    Handle,
}

/// A sorted list or a cuckoo table.
#[derive(Debug, Clone)]
pub enum AdaptiveDict {
    Sorted(SortedList),
    Cuckoo(CuckooTable),
}

impl Default for AdaptiveDict {
    fn default() -> Self {
        AdaptiveDict::Sorted(SortedList::new())
    }
}

impl AdaptiveDict {
    pub fn for_role(role: Role, config: &DictConfig) -> Self {
        match (role, config.promotion_threshold) {
            (Role::Handle, None) => AdaptiveDict::Cuckoo(CuckooTable::new()),
            _ => AdaptiveDict::default(),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            AdaptiveDict::Sorted(s) => s.len(),
            AdaptiveDict::Cuckoo(c) => c.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_sorted_list(&self) -> bool {
        matches!(self, AdaptiveDict::Sorted(_))
    }

    pub fn insert<E: KeyExtractor>(
        &mut self,
        id: NodeId,
        ex: &E,
        ctx: &mut InsertCtx<'_>,
    ) -> Result<InsertReport> {
        match self {
            AdaptiveDict::Sorted(s) => {
                s.insert(id, ex)?;
                match ctx.config.promotion_threshold {
                    Some(t) if s.len() > t => self.promote(ex, ctx),
                    _ => Ok(InsertReport::default()),
                }
            }
            AdaptiveDict::Cuckoo(c) => c.insert(id, ex, ctx),
        }
    }

    fn promote<E: KeyExtractor>(&mut self, ex: &E, ctx: &mut InsertCtx<'_>) -> Result<InsertReport> {
        let AdaptiveDict::Sorted(s) = self else {
            return Ok(InsertReport::default());
        };
        let mut table = CuckooTable::new();
        let mut report = InsertReport::default();
        for &id in s.entries() {
            report.merge(table.insert(id, ex, ctx)?);
        }
        *self = AdaptiveDict::Cuckoo(table);
        Ok(report)
    }

    #[inline]
    pub fn lookup<E: KeyExtractor>(&self, key: E::Key, ex: &E, config: &DictConfig) -> Option<NodeId> {
        match self {
            AdaptiveDict::Sorted(s) => s.lookup(key, ex),
            AdaptiveDict::Cuckoo(c) => c.lookup(key, ex, config),
        }
    }

    pub fn remove<E: KeyExtractor>(&mut self, key: E::Key, ex: &E, config: &DictConfig) -> Option<NodeId> {
        match self {
            AdaptiveDict::Sorted(s) => s.remove(key, ex),
            AdaptiveDict::Cuckoo(c) => c.remove(key, ex, config),
        }
    }

    /// Entry with the smallest key strictly greater than `key`.
    pub fn successor<E: KeyExtractor>(&self, key: E::Key, ex: &E) -> Option<NodeId> {
        match self {
            AdaptiveDict::Sorted(s) => s.successor(key, ex),
            AdaptiveDict::Cuckoo(c) => c
                .iter()
                .filter(|&id| ex.key(id) > key)
                .min_by_key(|&id| ex.key(id)),
        }
    }

    /// Entry with the largest key strictly smaller than `key`.
    pub fn predecessor<E: KeyExtractor>(&self, key: E::Key, ex: &E) -> Option<NodeId> {
        match self {
            AdaptiveDict::Sorted(s) => s.predecessor(key, ex),
            AdaptiveDict::Cuckoo(c) => c
                .iter()
                .filter(|&id| ex.key(id) < key)
                .max_by_key(|&id| ex.key(id)),
        }
    }

    pub fn first<E: KeyExtractor>(&self, ex: &E) -> Option<NodeId> {
        match self {
            AdaptiveDict::Sorted(s) => s.entries().first().copied(),
            AdaptiveDict::Cuckoo(c) => c.iter().min_by_key(|&id| ex.key(id)),
        }
    }

    pub fn last<E: KeyExtractor>(&self, ex: &E) -> Option<NodeId> {
        match self {
            AdaptiveDict::Sorted(s) => s.entries().last().copied(),
            AdaptiveDict::Cuckoo(c) => c.iter().max_by_key(|&id| ex.key(id)),
        }
    }

    /// Some entry, used when the only child is wanted.
    pub fn any(&self) -> Option<NodeId> {
        match self {
            AdaptiveDict::Sorted(s) => s.entries().first().copied(),
            AdaptiveDict::Cuckoo(c) => c.iter().next(),
        }
    }

    /// Entries in storage order.
    pub fn iter(&self) -> Box<dyn Iterator<Item = NodeId> + '_> {
        match self {
            AdaptiveDict::Sorted(s) => Box::new(s.entries().iter().copied()),
            AdaptiveDict::Cuckoo(c) => Box::new(c.iter()),
        }
    }

    /// Entries in ascending key order.
    pub fn ordered<E: KeyExtractor>(&self, ex: &E) -> Vec<NodeId> {
        match self {
            AdaptiveDict::Sorted(s) => s.entries().to_vec(),
            AdaptiveDict::Cuckoo(c) => {
                let mut v: Vec<NodeId> = c.iter().collect();
                v.sort_by_key(|&id| ex.key(id));
                v
            }
        }
    }

    /// Slots inspected by a lookup of `key`.
    pub fn probe_count<E: KeyExtractor>(&self, key: E::Key, ex: &E, config: &DictConfig) -> usize {
        match self {
            AdaptiveDict::Sorted(s) => (s.len() + 1).ilog2() as usize + 1,
            AdaptiveDict::Cuckoo(c) => c.probe_count(key, ex, config),
        }
    }

    /// Heap bytes owned by the dictionary.
    pub fn heap_bytes(&self) -> usize {
        match self {
            AdaptiveDict::Sorted(s) => s.heap_bytes(),
            AdaptiveDict::Cuckoo(c) => c.heap_bytes(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use std::collections::BTreeMap;

    fn ctx_parts() -> (DictConfig, ChaCha8Rng) {
        let c = DictConfig::default();
        let r = ChaCha8Rng::seed_from_u64(c.seed);
        (c, r)
    }

    #[test]
    fn sorted_iteration_order() {
        let keys = [b'r' as u32, b'i' as u32, b'z' as u32];
        let ex = |id: NodeId| keys[id.raw() as usize];
        let (cfg, mut rng) = ctx_parts();
        let mut ctx = InsertCtx { config: &cfg, rng: &mut rng };
        let mut d = AdaptiveDict::for_role(Role::Child, &cfg);
        for i in 0..3 {
            d.insert(NodeId::from_raw(i), &ex, &mut ctx).unwrap();
        }
        let got: Vec<u8> = d.iter().map(|id| ex(id) as u8).collect();
        assert_eq!(got, b"irz");
        assert_eq!(d.successor(b'o' as u32, &ex), Some(NodeId::from_raw(0)));
        assert_eq!(d.predecessor(b'o' as u32, &ex), Some(NodeId::from_raw(1)));
        assert_eq!(d.successor(b'z' as u32, &ex), None);
        assert_eq!(d.predecessor(b'i' as u32, &ex), None);
    }

    #[test]
    fn duplicate_key_rejected() {
        let ex = |id: NodeId| id.raw() % 2;
        let (cfg, mut rng) = ctx_parts();
        let mut ctx = InsertCtx { config: &cfg, rng: &mut rng };
        for role in [Role::Child, Role::Handle] {
            let mut d = AdaptiveDict::for_role(role, &cfg);
            d.insert(NodeId::from_raw(0), &ex, &mut ctx).unwrap();
            assert_eq!(
                d.insert(NodeId::from_raw(2), &ex, &mut ctx),
                Err(Error::DuplicateKey)
            );
        }
    }

    #[test]
    fn remove_then_reinsert() {
        let ex = |id: NodeId| id.raw();
        let (cfg, mut rng) = ctx_parts();
        let mut ctx = InsertCtx { config: &cfg, rng: &mut rng };
        for role in [Role::Child, Role::Handle] {
            let mut d = AdaptiveDict::for_role(role, &cfg);
            assert_eq!(d.lookup(5, &ex, &cfg), None);
            assert_eq!(d.remove(5, &ex, &cfg), None);
            d.insert(NodeId::from_raw(5), &ex, &mut ctx).unwrap();
            assert_eq!(d.remove(5, &ex, &cfg), Some(NodeId::from_raw(5)));
            assert_eq!(d.lookup(5, &ex, &cfg), None);
            d.insert(NodeId::from_raw(5), &ex, &mut ctx).unwrap();
            assert_eq!(d.lookup(5, &ex, &cfg), Some(NodeId::from_raw(5)));
        }
    }

    #[test]
    fn promotion_keeps_entries() {
        let ex = |id: NodeId| id.raw().wrapping_mul(2654435761);
        let cfg = DictConfig {
            promotion_threshold: Some(DEFAULT_PROMOTION_THRESHOLD),
            ..DictConfig::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut ctx = InsertCtx { config: &cfg, rng: &mut rng };
        let mut d = AdaptiveDict::for_role(Role::Child, &cfg);
        for i in 0..100 {
            d.insert(NodeId::from_raw(i), &ex, &mut ctx).unwrap();
        }
        assert!(!d.is_sorted_list());
        let ord = d.ordered(&ex);
        assert!(ord.windows(2).all(|w| ex(w[0]) < ex(w[1])));
        assert!((0..100).all(|i| d.lookup(ex(NodeId::from_raw(i)), &ex, &cfg) == Some(NodeId::from_raw(i))));
    }

    #[test]
    fn model_check_against_btreemap() {
        // Keys are drawn from a small range so collisions with live keys are common.
        let table: Vec<u32> = (0..4096u32).map(|i| i.wrapping_mul(0x9e37_79b1) >> 20).collect();
        let ex = |id: NodeId| table[id.raw() as usize];
        for role in [Role::Child, Role::Handle] {
            let (cfg, mut rng) = ctx_parts();
            let mut ops = ChaCha8Rng::seed_from_u64(99);
            let mut d = AdaptiveDict::for_role(role, &cfg);
            let mut model: BTreeMap<u32, NodeId> = BTreeMap::new();
            for _ in 0..10_000 {
                let id = NodeId::from_raw(ops.random_range(0..4096));
                let k = ex(id);
                match ops.random_range(0..3) {
                    0 => {
                        let mut ctx = InsertCtx { config: &cfg, rng: &mut rng };
                        let r = d.insert(id, &ex, &mut ctx);
                        if model.contains_key(&k) {
                            assert_eq!(r, Err(Error::DuplicateKey));
                        } else {
                            r.unwrap();
                            model.insert(k, id);
                        }
                    }
                    1 => assert_eq!(d.remove(k, &ex, &cfg), model.remove(&k)),
                    _ => assert_eq!(d.lookup(k, &ex, &cfg), model.get(&k).copied()),
                }
                assert_eq!(d.len(), model.len());
            }
            let ord: Vec<NodeId> = d.ordered(&ex);
            assert_eq!(ord, model.values().copied().collect::<Vec<_>>());
        }
    }
}
