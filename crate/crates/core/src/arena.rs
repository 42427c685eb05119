//! Node factory: a two-level array addressing every node by a 32-bit index.

use std::fmt;
use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};

/// Nodes per block.
pub const BLOCK_CAPACITY: usize = 1 << 16;
const BLOCK_SHIFT: u32 = 16;
const SLOT_MASK: u32 = (1 << BLOCK_SHIFT) - 1;

/// 32-bit index of an arena slot.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(u32);

impl NodeId {
    pub const NONE: NodeId = NodeId(u32::MAX);

    #[inline]
    pub const fn from_raw(v: u32) -> Self {
        NodeId(v)
    }

    #[inline]
    pub const fn raw(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_none(self) -> bool {
        self == Self::NONE
    }

    #[inline]
    pub fn is_some(self) -> bool {
        self != Self::NONE
    }

    #[inline]
    fn block(self) -> usize {
        (self.0 >> BLOCK_SHIFT) as usize
    }

    #[inline]
    fn slot(self) -> usize {
        (self.0 & SLOT_MASK) as usize
    }
}

impl fmt::Debug for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_none() {
            f.write_str("NodeId(NONE)")
        } else {
            write!(f, "NodeId({})", self.0)
        }
    }
}

#[derive(Debug, Clone)]
enum Slot<T> {
    Live(T),
    Free { next: NodeId },
}

#[derive(Debug, Clone)]
struct Entry<T> {
    slot: Slot<T>,
    // Bumped on every free so tests can observe slot reuse.
    #[cfg(debug_assertions)]
    generation: u32,
}

#[derive(Debug, Clone)]
pub struct Arena<T> {
    blocks: Vec<Vec<Entry<T>>>,
    free_head: NodeId,
    live: u32,
}

impl<T> Default for Arena<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T> Arena<T> {
    pub fn new() -> Self {
        Arena {
            blocks: Vec::new(),
            free_head: NodeId::NONE,
            live: 0,
        }
    }

    pub fn live_count(&self) -> usize {
        self.live as usize
    }

    /// Slots ever handed out, live or free.
    pub fn slot_count(&self) -> usize {
        match self.blocks.last() {
            None => 0,
            Some(b) => (self.blocks.len() - 1) * BLOCK_CAPACITY + b.len(),
        }
    }

    pub fn allocate(&mut self, value: T) -> Result<NodeId> {
        if self.free_head.is_some() {
            let id = self.free_head;
            let e = &mut self.blocks[id.block()][id.slot()];
            let Slot::Free { next } = e.slot else {
                unreachable!("free list points at a live slot")
            };
            self.free_head = next;
            e.slot = Slot::Live(value);
            self.live += 1;
            return Ok(id);
        }
        let n = self.slot_count();
        if n >= NodeId::NONE.0 as usize {
            return Err(Error::ArenaFull);
        }
        if self.blocks.last().is_none_or(|b| b.len() == BLOCK_CAPACITY) {
            self.blocks.push(Vec::new());
        }
        let block = self.blocks.last_mut().unwrap();
        if block.len() == block.capacity() {
            let grow = block.capacity().max(64).min(BLOCK_CAPACITY - block.len());
            block.reserve_exact(grow);
        }
        block.push(Entry {
            slot: Slot::Live(value),
            #[cfg(debug_assertions)]
            generation: 0,
        });
        self.live += 1;
        Ok(NodeId(n as u32))
    }

    fn entry(&self, id: NodeId) -> Result<&Entry<T>> {
        if id.is_none() {
            return Err(Error::NoneId);
        }
        self.blocks
            .get(id.block())
            .and_then(|b| b.get(id.slot()))
            .ok_or(Error::UseAfterFree(id.0))
    }

    pub fn get(&self, id: NodeId) -> Result<&T> {
        match &self.entry(id)?.slot {
            Slot::Live(v) => Ok(v),
            Slot::Free { .. } => Err(Error::UseAfterFree(id.0)),
        }
    }

    pub fn get_mut(&mut self, id: NodeId) -> Result<&mut T> {
        self.entry(id)?;
        match &mut self.blocks[id.block()][id.slot()].slot {
            Slot::Live(v) => Ok(v),
            Slot::Free { .. } => Err(Error::UseAfterFree(id.0)),
        }
    }

    pub fn contains(&self, id: NodeId) -> bool {
        self.get(id).is_ok()
    }

    /// Release a slot and return its payload.
    pub fn free(&mut self, id: NodeId) -> Result<T> {
        self.get(id)?;
        let head = self.free_head;
        let e = &mut self.blocks[id.block()][id.slot()];
        let Slot::Live(v) = std::mem::replace(&mut e.slot, Slot::Free { next: head }) else {
            unreachable!()
        };
        #[cfg(debug_assertions)]
        {
            e.generation = e.generation.wrapping_add(1);
        }
        self.free_head = id;
        self.live -= 1;
        Ok(v)
    }

    /// Number of times the slot behind `id` has been freed.
    #[cfg(debug_assertions)]
    pub fn generation(&self, id: NodeId) -> Option<u32> {
        self.entry(id).ok().map(|e| e.generation)
    }

    pub fn iter(&self) -> impl Iterator<Item = (NodeId, &T)> + '_ {
        self.blocks.iter().enumerate().flat_map(|(b, block)| {
            block.iter().enumerate().filter_map(move |(s, e)| match &e.slot {
                Slot::Live(v) => Some((NodeId(((b as u32) << BLOCK_SHIFT) | s as u32), v)),
                Slot::Free { .. } => None,
            })
        })
    }

    /// Heap bytes held by the slot blocks and the block table.
    pub fn heap_bytes(&self) -> usize {
        self.blocks
            .iter()
            .map(|b| b.capacity() * std::mem::size_of::<Entry<T>>())
            .sum::<usize>()
            + self.blocks.capacity() * std::mem::size_of::<Vec<Entry<T>>>()
    }
}

impl<T> Index<NodeId> for Arena<T> {
    type Output = T;

    #[inline]
    fn index(&self, id: NodeId) -> &T {
        match &self.blocks[id.block()][id.slot()].slot {
            Slot::Live(v) => v,
            Slot::Free { .. } => panic!("{id:?} is not live"),
        }
    }
}

impl<T> IndexMut<NodeId> for Arena<T> {
    #[inline]
    fn index_mut(&mut self, id: NodeId) -> &mut T {
        match &mut self.blocks[id.block()][id.slot()].slot {
            Slot::Live(v) => v,
            Slot::Free { .. } => panic!("{id:?} is not live"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distinct_ids() {
        let mut a = Arena::new();
        let x = a.allocate(1).unwrap();
        let y = a.allocate(2).unwrap();
        assert_ne!(x, y);
        assert_eq!((a[x], a[y]), (1, 2));
    }

    #[test]
    fn free_list_reuse() {
        let mut a = Arena::new();
        let x = a.allocate("a").unwrap();
        a.allocate("b").unwrap();
        assert_eq!(a.free(x).unwrap(), "a");
        let z = a.allocate("c").unwrap();
        assert_eq!(z, x);
        #[cfg(debug_assertions)]
        assert_eq!(a.generation(z), Some(1));
    }

    #[test]
    fn dense_ids() {
        let mut a = Arena::new();
        let n = 100_000;
        let ids: Vec<_> = (0..n).map(|i| a.allocate(i).unwrap()).collect();
        assert!(ids.iter().all(|id| (id.raw() as usize) < n + BLOCK_CAPACITY));
        assert_eq!(a.live_count(), n);
        // two full blocks are in use
        assert_eq!(ids[BLOCK_CAPACITY].raw() >> 16, 1);
        assert_eq!(a[ids[n - 1]], n - 1);
    }

    #[test]
    fn stale_access_is_reported() {
        let mut a = Arena::new();
        let x = a.allocate(7u64).unwrap();
        a.free(x).unwrap();
        assert_eq!(a.get(x), Err(Error::UseAfterFree(x.raw())));
        assert_eq!(a.free(x), Err(Error::UseAfterFree(x.raw())));
        assert_eq!(a.free(NodeId::NONE), Err(Error::NoneId));
        assert_eq!(a.get(NodeId::from_raw(12345)), Err(Error::UseAfterFree(12345)));
    }

    #[test]
    fn conservation() {
        let mut a = Arena::new();
        let mut ids = Vec::new();
        let mut allocs = 0;
        let mut frees = 0;
        for i in 0..1000u32 {
            if i % 3 == 2 {
                let id: NodeId = ids.swap_remove((i as usize * 7) % ids.len());
                a.free(id).unwrap();
                frees += 1;
            } else {
                ids.push(a.allocate(i).unwrap());
                allocs += 1;
            }
            assert_eq!(a.live_count(), allocs - frees);
        }
        for id in ids.drain(..) {
            a.free(id).unwrap();
        }
        assert_eq!(a.live_count(), 0);
        assert_eq!(a.iter().count(), 0);
    }
}
