use crate::arena::NodeId;
use crate::error::{Error, Result};

use super::KeyExtractor;

/// Node ids sorted by key in an exact-fit array.
///
/// Every mutation reallocates to the new size, so capacity always equals
/// length.
#[derive(Debug, Clone, Default)]
pub struct SortedList {
    entries: Box<[NodeId]>,
}

impl SortedList {
    pub fn new() -> Self {
        SortedList::default()
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    #[inline]
    pub fn entries(&self) -> &[NodeId] {
        &self.entries
    }

    #[inline]
    fn search<E: KeyExtractor>(&self, key: E::Key, ex: &E) -> std::result::Result<usize, usize> {
        self.entries.binary_search_by(|&id| ex.key(id).cmp(&key))
    }

    pub fn insert<E: KeyExtractor>(&mut self, id: NodeId, ex: &E) -> Result<()> {
        let pos = match self.search(ex.key(id), ex) {
            Ok(_) => return Err(Error::DuplicateKey),
            Err(p) => p,
        };
        let mut v = Vec::with_capacity(self.entries.len() + 1);
        v.extend_from_slice(&self.entries[..pos]);
        v.push(id);
        v.extend_from_slice(&self.entries[pos..]);
        self.entries = v.into_boxed_slice();
        Ok(())
    }

    #[inline]
    pub fn lookup<E: KeyExtractor>(&self, key: E::Key, ex: &E) -> Option<NodeId> {
        self.search(key, ex).ok().map(|i| self.entries[i])
    }

    pub fn remove<E: KeyExtractor>(&mut self, key: E::Key, ex: &E) -> Option<NodeId> {
        let pos = self.search(key, ex).ok()?;
        let id = self.entries[pos];
        let mut v = Vec::with_capacity(self.entries.len() - 1);
        v.extend_from_slice(&self.entries[..pos]);
        v.extend_from_slice(&self.entries[pos + 1..]);
        self.entries = v.into_boxed_slice();
        Some(id)
    }

    pub fn successor<E: KeyExtractor>(&self, key: E::Key, ex: &E) -> Option<NodeId> {
        let pos = self.entries.partition_point(|&id| ex.key(id) <= key);
        self.entries.get(pos).copied()
    }

    pub fn predecessor<E: KeyExtractor>(&self, key: E::Key, ex: &E) -> Option<NodeId> {
        let pos = self.entries.partition_point(|&id| ex.key(id) < key);
        pos.checked_sub(1).map(|p| self.entries[p])
    }

    pub fn heap_bytes(&self) -> usize {
        std::mem::size_of_val(&*self.entries)
    }
}
