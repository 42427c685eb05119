//! Brute-force reference dictionary over a sorted vector.

use std::collections::HashSet;

use crate::dictionary::OrderMode;
use crate::error::{Error, Result};

/// Sorted `(keyword, id)` pairs with the same id rules as the real dictionary.
#[derive(Debug, Clone, Default)]
pub struct OracleDict {
    items: Vec<(Vec<u8>, u32)>,
    next: u32,
    order: OrderMode,
}

impl OracleDict {
    pub fn new(order: OrderMode) -> Self {
        OracleDict {
            items: Vec::new(),
            next: 1,
            order,
        }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    fn find(&self, s: &[u8]) -> std::result::Result<usize, usize> {
        self.items.binary_search_by(|(k, _)| k.as_slice().cmp(s))
    }

    pub fn insert(&mut self, s: &[u8]) -> u32 {
        match self.find(s) {
            Ok(i) => self.items[i].1,
            Err(i) => {
                let id = self.next;
                self.next += 1;
                self.items.insert(i, (s.to_vec(), id));
                id
            }
        }
    }

    pub fn locate(&self, s: &[u8]) -> Option<u32> {
        self.find(s).ok().map(|i| self.items[i].1)
    }

    pub fn predecessor(&self, s: &[u8]) -> Option<u32> {
        let i = match (self.find(s), self.order) {
            (Ok(i), OrderMode::Weak) => i + 1,
            (Ok(i) | Err(i), _) => i,
        };
        i.checked_sub(1).map(|i| self.items[i].1)
    }

    pub fn successor(&self, s: &[u8]) -> Option<u32> {
        let i = match (self.find(s), self.order) {
            (Ok(i), OrderMode::Strict) => i + 1,
            (Ok(i) | Err(i), _) => i,
        };
        self.items.get(i).map(|x| x.1)
    }

    pub fn delete(&mut self, s: &[u8]) -> Result<u32> {
        let i = self.find(s).map_err(|_| Error::NotFound)?;
        Ok(self.items.remove(i).1)
    }

    /// Ids of all keywords starting with `s`, in keyword order.
    pub fn prefix(&self, s: &[u8]) -> Vec<u32> {
        let start = self.items.partition_point(|(k, _)| k.as_slice() < s);
        self.items[start..]
            .iter()
            .take_while(|(k, _)| k.starts_with(s))
            .map(|x| x.1)
            .collect()
    }

    pub fn keywords(&self) -> impl Iterator<Item = &[u8]> {
        self.items.iter().map(|(k, _)| k.as_slice())
    }
}

/// Number of nodes of the compact trie over `keywords`: the root, one node
/// per non-empty keyword, and one per branching point that is no keyword.
///
/// Branching points are exactly the longest common prefixes of neighbours
/// in sorted order.
pub fn oracle_compact_trie_nodes<K: AsRef<[u8]>>(keywords: &[K]) -> usize {
    let mut sorted: Vec<&[u8]> = keywords.iter().map(|k| k.as_ref()).collect();
    sorted.sort_unstable();
    sorted.dedup();
    let set: HashSet<&[u8]> = sorted.iter().copied().collect();
    let mut branch: HashSet<&[u8]> = HashSet::new();
    for w in sorted.windows(2) {
        let h = w[0].iter().zip(w[1]).take_while(|(a, b)| a == b).count();
        let x = &w[0][..h];
        if h > 0 && !set.contains(x) {
            branch.insert(x);
        }
    }
    1 + sorted.iter().filter(|k| !k.is_empty()).count() + branch.len()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn node_counts() {
        assert_eq!(oracle_compact_trie_nodes(&["a"]), 2);
        assert_eq!(oracle_compact_trie_nodes(&["ab", "ac"]), 4);
        assert_eq!(oracle_compact_trie_nodes::<&str>(&[]), 1);
        assert_eq!(oracle_compact_trie_nodes(&["", "a"]), 2);
        assert_eq!(oracle_compact_trie_nodes(&["a", "ab", "ac"]), 4);
    }

    #[test]
    fn empty_oracle() {
        let o = OracleDict::new(OrderMode::Strict);
        assert_eq!(o.locate(b"x"), None);
        assert_eq!(o.predecessor(b"x"), None);
        assert_eq!(o.successor(b""), None);
        assert!(o.prefix(b"").is_empty());
    }

    #[test]
    fn weak_and_strict() {
        for (mode, pred, succ) in [(OrderMode::Strict, Some(1), Some(3)), (OrderMode::Weak, Some(2), Some(2))] {
            let mut o = OracleDict::new(mode);
            o.insert(b"a");
            o.insert(b"b");
            o.insert(b"c");
            assert_eq!(o.predecessor(b"b"), pred);
            assert_eq!(o.successor(b"b"), succ);
        }
    }
}
