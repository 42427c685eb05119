use rand::Rng;

use crate::arena::NodeId;
use crate::error::{Error, Result};

use super::{DictConfig, DictKey, InsertCtx, InsertReport, KeyExtractor, FAMILY};

const INITIAL_CAPACITY: usize = 4;
/// Consecutive doublings tolerated while placing one batch of entries.
pub const MAX_RESIZES: u32 = 8;

/// Cuckoo hash table over node ids with random-walk eviction.
///
/// The capacity is a power of two and is allocated on the first insert.
#[derive(Debug, Clone, Default)]
pub struct CuckooTable {
    slots: Box<[NodeId]>,
    len: u32,
}

impl CuckooTable {
    pub fn new() -> Self {
        CuckooTable::default()
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn capacity(&self) -> usize {
        self.slots.len()
    }

    #[inline]
    fn lg_cap(slots: &[NodeId]) -> u32 {
        slots.len().trailing_zeros()
    }

    pub fn iter(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.slots.iter().copied().filter(|id| id.is_some())
    }

    #[inline]
    pub fn lookup<E: KeyExtractor>(&self, key: E::Key, ex: &E, config: &DictConfig) -> Option<NodeId> {
        self.find_slot(key, ex, config).map(|s| self.slots[s])
    }

    #[inline]
    fn find_slot<E: KeyExtractor>(&self, key: E::Key, ex: &E, config: &DictConfig) -> Option<usize> {
        if self.len == 0 {
            return None;
        }
        let lg = Self::lg_cap(&self.slots);
        let fp = key.fingerprint();
        (0..config.hash_count)
            .map(|i| FAMILY.slot(i, fp, lg))
            .find(|&s| {
                let id = self.slots[s];
                id.is_some() && ex.key(id) == key
            })
    }

    /// Slots inspected before the lookup of `key` finishes.
    pub fn probe_count<E: KeyExtractor>(&self, key: E::Key, ex: &E, config: &DictConfig) -> usize {
        if self.slots.is_empty() {
            return 0;
        }
        let lg = Self::lg_cap(&self.slots);
        let fp = key.fingerprint();
        for i in 0..config.hash_count {
            let id = self.slots[FAMILY.slot(i, fp, lg)];
            if id.is_some() && ex.key(id) == key {
                return i + 1;
            }
        }
        config.hash_count
    }

    /// Whether `id` sits at one of its candidate slots.
    pub fn is_placed<E: KeyExtractor>(&self, id: NodeId, ex: &E, config: &DictConfig) -> bool {
        if self.slots.is_empty() {
            return false;
        }
        let lg = Self::lg_cap(&self.slots);
        let fp = ex.key(id).fingerprint();
        (0..config.hash_count).any(|i| self.slots[FAMILY.slot(i, fp, lg)] == id)
    }

    pub fn remove<E: KeyExtractor>(&mut self, key: E::Key, ex: &E, config: &DictConfig) -> Option<NodeId> {
        let s = self.find_slot(key, ex, config)?;
        self.len -= 1;
        Some(std::mem::replace(&mut self.slots[s], NodeId::NONE))
    }

    pub fn insert<E: KeyExtractor>(
        &mut self,
        id: NodeId,
        ex: &E,
        ctx: &mut InsertCtx<'_>,
    ) -> Result<InsertReport> {
        let config = ctx.config;
        if self.lookup(ex.key(id), ex, config).is_some() {
            return Err(Error::DuplicateKey);
        }
        let mut report = InsertReport::default();
        if self.slots.is_empty() {
            self.slots = vec![NodeId::NONE; INITIAL_CAPACITY].into_boxed_slice();
        }
        let over = (self.len + 1) as f64 > config.max_load * self.slots.len() as f64;
        if over {
            self.rebuild(None, self.slots.len() * 2, ex, ctx, &mut report)?;
        }
        let mut steps = 0;
        let homeless = place(&mut self.slots, id, ex, ctx, &mut steps);
        report.walk_steps = report.walk_steps.max(steps);
        if let Some(h) = homeless {
            self.rebuild(Some(h), self.slots.len() * 2, ex, ctx, &mut report)?;
        }
        self.len += 1;
        Ok(report)
    }

    /// Move every entry, plus `extra`, into a table of `cap` slots, doubling
    /// again whenever a walk fails.
    fn rebuild<E: KeyExtractor>(
        &mut self,
        extra: Option<NodeId>,
        mut cap: usize,
        ex: &E,
        ctx: &mut InsertCtx<'_>,
        report: &mut InsertReport,
    ) -> Result<()> {
        let entries: Vec<NodeId> = self.iter().chain(extra).collect();
        let mut attempts = 0;
        'grow: loop {
            attempts += 1;
            if attempts > MAX_RESIZES {
                return Err(Error::SeedFailure(MAX_RESIZES));
            }
            report.resizes += 1;
            let mut fresh = vec![NodeId::NONE; cap].into_boxed_slice();
            for &e in &entries {
                let mut steps = 0;
                let failed = place(&mut fresh, e, ex, ctx, &mut steps).is_some();
                report.walk_steps = report.walk_steps.max(steps);
                if failed {
                    cap *= 2;
                    continue 'grow;
                }
            }
            self.slots = fresh;
            return Ok(());
        }
    }

    pub fn heap_bytes(&self) -> usize {
        std::mem::size_of_val(&*self.slots)
    }
}

/// Put `id` into `slots`, evicting along a random walk. Returns the entry left
/// without a slot when the walk exceeds its limit.
fn place<E: KeyExtractor>(
    slots: &mut [NodeId],
    id: NodeId,
    ex: &E,
    ctx: &mut InsertCtx<'_>,
    steps: &mut u32,
) -> Option<NodeId> {
    let h = ctx.config.hash_count;
    let lg = CuckooTable::lg_cap(slots);
    let free_slot = |slots: &[NodeId], id: NodeId| {
        let fp = ex.key(id).fingerprint();
        (0..h).map(|i| FAMILY.slot(i, fp, lg)).find(|&s| slots[s].is_none())
    };
    let mut cur = id;
    if let Some(s) = free_slot(slots, cur) {
        slots[s] = cur;
        return None;
    }
    while *steps < ctx.config.max_walk {
        let i = ctx.rng.random_range(0..h);
        let s = FAMILY.slot(i, ex.key(cur).fingerprint(), lg);
        std::mem::swap(&mut cur, &mut slots[s]);
        *steps += 1;
        if let Some(s) = free_slot(slots, cur) {
            slots[s] = cur;
            return None;
        }
    }
    Some(cur)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn doubles_past_load_factor() {
        let ex = |id: NodeId| id.raw() as u64;
        let cfg = DictConfig::default();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut ctx = InsertCtx { config: &cfg, rng: &mut rng };
        let mut t = CuckooTable::new();
        for i in 0..3 {
            t.insert(NodeId::from_raw(i), &ex, &mut ctx).unwrap();
        }
        assert_eq!(t.capacity(), 4);
        t.insert(NodeId::from_raw(3), &ex, &mut ctx).unwrap();
        assert!(t.capacity() >= 8);
        for i in 0..4 {
            assert_eq!(t.lookup(i as u64, &ex, &cfg), Some(NodeId::from_raw(i)));
        }
    }

    #[test]
    fn invariants_hold_with_two_functions() {
        let ex = |id: NodeId| (id.raw() as u64).wrapping_mul(0x2545_f491_4f6c_dd1d);
        let cfg = DictConfig {
            hash_count: 2,
            ..DictConfig::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut ctx = InsertCtx { config: &cfg, rng: &mut rng };
        let mut t = CuckooTable::new();
        for i in 0..20_000 {
            let r = t.insert(NodeId::from_raw(i), &ex, &mut ctx).unwrap();
            assert!(r.walk_steps <= cfg.max_walk);
            assert!(t.capacity().is_power_of_two());
            assert!(t.len() as f64 <= cfg.max_load * t.capacity() as f64);
        }
        assert!((0..20_000).all(|i| t.is_placed(NodeId::from_raw(i), &ex, &cfg)));
    }
}
