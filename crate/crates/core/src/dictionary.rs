//! The keyword dictionary: insert, locate, predecessor, successor, delete
//! and prefix enumeration over byte strings.

use std::collections::HashSet;
use std::fmt;

use crate::adaptive::{AdaptiveDict, DictConfig, KeyExtractor, DEFAULT_PROMOTION_THRESHOLD};
use crate::arena::NodeId;
use crate::error::{Error, Result};
use crate::micro_trie::{window_of, HandleEx, MacroEx, SearchTrace, Trie};
use crate::packed::{lcp, ExtentRef, PackConfig, PackedQuery, PackedStr};

/// Identifier of a stored keyword. Assigned densely from 1 and never reused.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KeywordId(u32);

impl KeywordId {
    /// `None` for the reserved value 0.
    pub fn new(v: u32) -> Option<Self> {
        (v != 0).then_some(KeywordId(v))
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

impl fmt::Debug for KeywordId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

impl fmt::Display for KeywordId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl From<KeywordId> for u32 {
    fn from(k: KeywordId) -> u32 {
        k.0
    }
}

/// Whether predecessor and successor may return the query itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OrderMode {
    #[default]
    Strict,
    Weak,
}

/// Construction parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    /// Alphabet size; characters are `0..sigma`.
    pub sigma: u32,
    pub dict: DictConfig,
    pub order: OrderMode,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            sigma: 256,
            dict: DictConfig::default(),
            order: OrderMode::Strict,
        }
    }
}

impl Config {
    /// Set one option by name, as given on a command line.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
            v.parse()
                .map_err(|_| Error::InvalidConfig(format!("bad value {v:?} for {key}")))
        }
        match key {
            "sigma" => self.sigma = num(key, value)?,
            "hash_count" => self.dict.hash_count = num(key, value)?,
            "max_walk" => self.dict.max_walk = num(key, value)?,
            "max_load" => self.dict.max_load = num(key, value)?,
            "seed" => self.dict.seed = num(key, value)?,
            "promotion_threshold" | "promotion" => {
                self.dict.promotion_threshold = match value {
                    "off" | "none" => None,
                    "on" => Some(DEFAULT_PROMOTION_THRESHOLD),
                    v => Some(num(key, v)?),
                }
            }
            "order" => {
                self.order = match value {
                    "strict" => OrderMode::Strict,
                    "weak" => OrderMode::Weak,
                    v => return Err(Error::InvalidConfig(format!("bad order {v:?}"))),
                }
            }
            _ => return Err(Error::InvalidConfig(format!("unknown option {key:?}"))),
        }
        Ok(())
    }
}

/// Storage accounting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpaceReport {
    /// Bits of packed keyword characters, including word padding.
    pub text_bits: u64,
    /// Bits of everything else: nodes, dictionaries, micro tries, registry.
    pub aux_bits: u64,
    pub nodes: usize,
    pub micro_tries: usize,
    pub keywords: usize,
}

/// A node as seen from outside.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct NodeView {
    pub extent: Vec<u32>,
    pub keyword: Option<KeywordId>,
    /// Keys of the children in ascending order.
    pub child_keys: Vec<u32>,
}

impl NodeView {
    pub fn extent_bytes(&self) -> Vec<u8> {
        self.extent.iter().map(|&c| c as u8).collect()
    }
}

/// Result of locating the exit of a query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExitView {
    pub exit: NodeView,
    /// `None` when the exit is the root.
    pub parex: Option<NodeView>,
    pub lcp: usize,
}

/// Sizes of all non-empty node dictionaries.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DictSizes {
    pub handles: Vec<usize>,
    pub children: Vec<usize>,
}

#[derive(Debug, Clone, Copy)]
enum Dir {
    Pred,
    Succ,
}

/// Dynamic keyword dictionary over a packed compact trie.
#[derive(Debug, Clone)]
pub struct KeywordDictionary {
    trie: Trie,
    order: OrderMode,
    registry: Vec<Option<ExtentRef>>,
    live: usize,
}

impl Default for KeywordDictionary {
    fn default() -> Self {
        Self::new()
    }
}

impl KeywordDictionary {
    /// Byte alphabet, default tuning.
    pub fn new() -> Self {
        Self::with_config(Config::default()).expect("default config is valid")
    }

    pub fn with_config(config: Config) -> Result<Self> {
        let pack = PackConfig::new(config.sigma)?;
        Ok(KeywordDictionary {
            trie: Trie::new(pack, config.dict)?,
            order: config.order,
            registry: vec![None],
            live: 0,
        })
    }

    pub fn pack_config(&self) -> PackConfig {
        self.trie.pack
    }

    pub fn dict_config(&self) -> &DictConfig {
        &self.trie.dict
    }

    /// Number of stored keywords.
    pub fn len(&self) -> usize {
        self.live
    }

    pub fn is_empty(&self) -> bool {
        self.live == 0
    }

    /// Insert `s`. A keyword that is already present keeps its identifier.
    pub fn insert(&mut self, s: &[u8]) -> Result<KeywordId> {
        let q = PackedQuery::from_bytes(self.trie.pack, s)?;
        self.insert_query(&q)
    }

    /// Insert a keyword given as characters of a wider alphabet.
    pub fn insert_chars<C: Copy + Into<u32>>(&mut self, s: &[C]) -> Result<KeywordId> {
        let q = PackedQuery::from_chars(self.trie.pack, s)?;
        self.insert_query(&q)
    }

    fn insert_query(&mut self, q: &PackedQuery) -> Result<KeywordId> {
        let next = u32::try_from(self.registry.len()).map_err(|_| Error::ArenaFull)?;
        let (v, prev) = self.trie.insert(q, next)?;
        if prev != 0 {
            return Ok(KeywordId(prev));
        }
        let n = &self.trie.nodes[v];
        self.registry.push(Some(ExtentRef::new(n.text, n.len)));
        self.live += 1;
        Ok(KeywordId(next))
    }

    /// Pack a query; `Err(i)` if character `i` lies outside the alphabet.
    fn query(&self, s: &[u8]) -> std::result::Result<PackedQuery, usize> {
        let sigma = self.trie.pack.sigma();
        if sigma < 256 {
            if let Some(i) = s.iter().position(|&b| b as u32 >= sigma) {
                return Err(i);
            }
        }
        Ok(PackedQuery::from_bytes(self.trie.pack, s).expect("checked"))
    }

    fn keyword_at(&self, v: NodeId) -> Option<KeywordId> {
        KeywordId::new(self.trie.nodes[v].keyword)
    }

    pub fn locate(&self, s: &[u8]) -> Option<KeywordId> {
        self.locate_traced(s).0
    }

    /// Locate with search counters.
    pub fn locate_traced(&self, s: &[u8]) -> (Option<KeywordId>, SearchTrace) {
        let mut trace = SearchTrace::default();
        let Ok(q) = self.query(s) else {
            return (None, trace);
        };
        let v = self.trie.find_node(q.as_str(), &mut trace);
        (v.and_then(|v| self.keyword_at(v)), trace)
    }

    /// Largest keyword below `s` (or equal to it in weak mode).
    pub fn predecessor(&self, s: &[u8]) -> Option<KeywordId> {
        self.neighbor(s, Dir::Pred)
    }

    /// Smallest keyword above `s` (or equal to it in weak mode).
    pub fn successor(&self, s: &[u8]) -> Option<KeywordId> {
        self.neighbor(s, Dir::Succ)
    }

    fn neighbor(&self, s: &[u8], dir: Dir) -> Option<KeywordId> {
        match self.query(s) {
            Ok(q) => self.neighbor_of(q.as_str(), dir),
            Err(i) => {
                // s[i] is above every character: s sorts right after all
                // keywords that start with s[..i].
                let q = self.query(&s[..i]).expect("valid prefix");
                let p = q.as_str();
                let e = self.trie.search(p, &mut SearchTrace::default());
                if e.lcp < p.len() {
                    return self.neighbor_of(p, dir);
                }
                match dir {
                    Dir::Pred => self.max_in(e.node),
                    Dir::Succ => self.after(e.node),
                }
            }
        }
    }

    fn neighbor_of(&self, p: PackedStr<'_>, dir: Dir) -> Option<KeywordId> {
        let t = &self.trie;
        let e = t.search(p, &mut SearchTrace::default());
        let v = e.node;
        let (l, lv, m) = (e.lcp, t.nodes[v].len as usize, p.len());
        if l == m {
            if lv == m {
                if self.order == OrderMode::Weak {
                    if let Some(k) = self.keyword_at(v) {
                        return Some(k);
                    }
                }
                return match dir {
                    Dir::Pred => self.before(v),
                    Dir::Succ => match t.nodes[v].children.first(&t.child_ex(v)) {
                        Some(c) => self.min_in(c),
                        None => self.after(v),
                    },
                };
            }
            return match dir {
                Dir::Pred => self.before(v),
                Dir::Succ => self.min_in(v),
            };
        }
        let ch = p.char_at(l);
        if l == lv {
            let ex = t.child_ex(v);
            let kids = &t.nodes[v].children;
            return match dir {
                Dir::Pred => match kids.predecessor(ch, &ex) {
                    Some(c) => self.max_in(c),
                    None => self.keyword_at(v).or_else(|| self.before(v)),
                },
                Dir::Succ => match kids.successor(ch, &ex) {
                    Some(c) => self.min_in(c),
                    None => self.after(v),
                },
            };
        }
        let below = ch < t.extent(v).char_at(l);
        match (dir, below) {
            (Dir::Pred, true) => self.before(v),
            (Dir::Succ, true) => self.min_in(v),
            (Dir::Pred, false) => self.max_in(v),
            (Dir::Succ, false) => self.after(v),
        }
    }

    /// Smallest keyword in the subtree of `v`.
    fn min_in(&self, mut v: NodeId) -> Option<KeywordId> {
        let t = &self.trie;
        loop {
            if let Some(k) = self.keyword_at(v) {
                return Some(k);
            }
            v = t.nodes[v].children.first(&t.child_ex(v))?;
        }
    }

    /// Largest keyword in the subtree of `v`.
    fn max_in(&self, mut v: NodeId) -> Option<KeywordId> {
        let t = &self.trie;
        loop {
            match t.nodes[v].children.last(&t.child_ex(v)) {
                Some(c) => v = c,
                None => return self.keyword_at(v),
            }
        }
    }

    /// Largest keyword smaller than every keyword below `v`.
    fn before(&self, mut v: NodeId) -> Option<KeywordId> {
        let t = &self.trie;
        loop {
            let p = t.nodes[v].parent;
            if p.is_none() {
                return None;
            }
            let ex = t.child_ex(p);
            if let Some(c) = t.nodes[p].children.predecessor(ex.key(v), &ex) {
                return self.max_in(c);
            }
            if let Some(k) = self.keyword_at(p) {
                return Some(k);
            }
            v = p;
        }
    }

    /// Smallest keyword larger than every keyword below `v`.
    fn after(&self, mut v: NodeId) -> Option<KeywordId> {
        let t = &self.trie;
        loop {
            let p = t.nodes[v].parent;
            if p.is_none() {
                return None;
            }
            let ex = t.child_ex(p);
            if let Some(c) = t.nodes[p].children.successor(ex.key(v), &ex) {
                return self.min_in(c);
            }
            v = p;
        }
    }

    /// Remove `s`, returning the identifier it had.
    pub fn delete(&mut self, s: &[u8]) -> Result<KeywordId> {
        let q = self.query(s).map_err(|_| Error::NotFound)?;
        let v = self
            .trie
            .find_node(q.as_str(), &mut SearchTrace::default())
            .ok_or(Error::NotFound)?;
        let id = self.keyword_at(v).ok_or(Error::NotFound)?;
        self.trie.delete(v)?;
        self.registry[id.0 as usize] = None;
        self.live -= 1;
        Ok(id)
    }

    /// Identifiers of all keywords starting with `s`, in lexicographic order.
    pub fn locate_prefix(&self, s: &[u8]) -> PrefixIter<'_> {
        let mut it = PrefixIter {
            trie: &self.trie,
            stack: Vec::new(),
        };
        if let Ok(q) = self.query(s) {
            let e = self.trie.search(q.as_str(), &mut SearchTrace::default());
            if e.lcp == s.len() {
                it.stack.push(e.node);
            }
        }
        it
    }

    /// All identifiers in lexicographic keyword order.
    pub fn iter(&self) -> PrefixIter<'_> {
        PrefixIter {
            trie: &self.trie,
            stack: vec![self.trie.root],
        }
    }

    /// Characters of keyword `id`, if it is live.
    pub fn keyword(&self, id: KeywordId) -> Option<Vec<u32>> {
        let r = (*self.registry.get(id.0 as usize)?)?;
        Some(self.trie.text.extent(r).chars().collect())
    }

    /// Bytes of keyword `id`, if it is live.
    pub fn keyword_bytes(&self, id: KeywordId) -> Option<Vec<u8>> {
        let r = (*self.registry.get(id.0 as usize)?)?;
        Some(self.trie.text.extent(r).to_bytes())
    }

    pub fn node_count(&self) -> usize {
        self.trie.nodes.live_count()
    }

    pub fn micro_trie_count(&self) -> usize {
        self.trie.micros.live_count()
    }

    pub fn space_report(&self) -> SpaceReport {
        let t = &self.trie;
        let mut aux = std::mem::size_of::<Self>()
            + t.nodes.heap_bytes()
            + t.micros.heap_bytes()
            + t.links.heap_bytes()
            + t.text.overhead_bytes()
            + self.registry.capacity() * std::mem::size_of::<Option<ExtentRef>>();
        aux += t.nodes.iter().map(|(_, n)| n.children.heap_bytes()).sum::<usize>();
        aux += t.micros.iter().map(|(_, m)| m.handles.heap_bytes()).sum::<usize>();
        SpaceReport {
            text_bits: t.text.payload_bits(),
            aux_bits: aux as u64 * 8,
            nodes: t.nodes.live_count(),
            micro_tries: t.micros.live_count(),
            keywords: self.live,
        }
    }

    pub fn dict_sizes(&self) -> DictSizes {
        let t = &self.trie;
        DictSizes {
            handles: t
                .micros
                .iter()
                .map(|(_, m)| m.handles.len())
                .filter(|&n| n > 0)
                .collect(),
            children: t
                .nodes
                .iter()
                .map(|(_, n)| n.children.len())
                .filter(|&n| n > 0)
                .collect(),
        }
    }

    fn view(&self, v: NodeId) -> NodeView {
        let t = &self.trie;
        let ex = t.child_ex(v);
        NodeView {
            extent: t.extent(v).chars().collect(),
            keyword: self.keyword_at(v),
            child_keys: t.nodes[v]
                .children
                .ordered(&ex)
                .into_iter()
                .map(|c| ex.key(c))
                .collect(),
        }
    }

    /// The node whose extent is exactly `s`.
    pub fn node(&self, s: &[u8]) -> Option<NodeView> {
        let q = self.query(s).ok()?;
        let v = self.trie.find_node(q.as_str(), &mut SearchTrace::default())?;
        Some(self.view(v))
    }

    /// Child of the node with extent `s` whose edge starts with `c`.
    pub fn child(&self, s: &[u8], c: u32) -> Option<NodeView> {
        let q = self.query(s).ok()?;
        let v = self.trie.find_node(q.as_str(), &mut SearchTrace::default())?;
        self.trie.child(v, c).map(|c| self.view(c))
    }

    /// Exit node, its parent and the matched length for `s`.
    pub fn exit(&self, s: &[u8]) -> Option<ExitView> {
        let q = self.query(s).ok()?;
        let e = self.trie.search(q.as_str(), &mut SearchTrace::default());
        Some(ExitView {
            exit: self.view(e.node),
            parex: e.parex.is_some().then(|| self.view(e.parex)),
            lcp: e.lcp,
        })
    }

    /// Every node, sorted by extent. Two dictionaries over the same keyword
    /// set have equal signatures regardless of insertion order.
    pub fn node_signatures(&self) -> Vec<(Vec<u32>, bool, Vec<u32>)> {
        let mut v: Vec<_> = self
            .trie
            .nodes
            .iter()
            .map(|(id, _)| {
                let n = self.view(id);
                (n.extent, n.keyword.is_some(), n.child_keys)
            })
            .collect();
        v.sort();
        v
    }

    /// Loci of all micro tries, sorted.
    pub fn micro_loci(&self) -> Vec<Vec<u32>> {
        let t = &self.trie;
        let mut v: Vec<Vec<u32>> = t
            .micros
            .iter()
            .map(|(_, m)| t.text.keyword(m.text).prefix(m.depth as usize).chars().collect())
            .collect();
        v.sort();
        v
    }

    /// Check every structural invariant, reporting the first violation.
    pub fn validate(&self) -> std::result::Result<(), String> {
        let t = &self.trie;
        let alpha = t.alpha();
        let cfg = &t.dict;
        let chars = |s: PackedStr<'_>| -> Vec<u32> { s.chars().collect() };
        let mut internal = 0usize;
        let mut keywords = 0usize;
        let mut wanted: HashSet<Vec<u32>> = HashSet::new();
        wanted.insert(Vec::new());
        for (v, n) in t.nodes.iter() {
            let ext = t.extent(v);
            if n.keyword != 0 {
                keywords += 1;
                match self.registry.get(n.keyword as usize).copied().flatten() {
                    Some(r) if chars(t.text.extent(r)) == chars(ext) => {}
                    _ => return Err(format!("{v:?}: registry mismatch for #{}", n.keyword)),
                }
            }
            let ex = t.child_ex(v);
            let kids: Vec<NodeId> = n.children.iter().collect();
            for &c in &kids {
                if t.nodes[c].parent != v {
                    return Err(format!("{c:?}: parent is not {v:?}"));
                }
            }
            if let AdaptiveDict::Sorted(s) = &n.children {
                if !s.entries().windows(2).all(|w| ex.key(w[0]) < ex.key(w[1])) {
                    return Err(format!("{v:?}: child list out of order"));
                }
            }
            if (n.len as usize).is_multiple_of(alpha) && !kids.is_empty() {
                wanted.insert(chars(ext));
            }
            if v == t.root {
                continue;
            }
            let p = n.parent;
            let lp = t.nodes[p].len as usize;
            if lp >= n.len as usize || lcp(t.extent(p), 0, ext, 0) != lp {
                return Err(format!("{v:?}: extent does not extend its parent"));
            }
            let pex = t.child_ex(p);
            if t.nodes[p].children.lookup(pex.key(v), &pex, cfg) != Some(v) {
                return Err(format!("{v:?}: not reachable from its parent"));
            }
            if n.keyword == 0 && kids.len() < 2 {
                return Err(format!("{v:?}: keyword-free node with {} children", kids.len()));
            }
            let d0 = window_of(n.len as usize, alpha);
            wanted.insert(chars(ext.prefix(d0)));
            let Ok(m) = t.micros.get(n.micro) else {
                return Err(format!("{v:?}: dead micro trie"));
            };
            let locus = t.text.keyword(m.text).prefix(m.depth as usize);
            if m.depth as usize != d0 || lcp(locus, 0, ext, 0) != d0 {
                return Err(format!("{v:?}: wrong micro trie"));
            }
            if !kids.is_empty() {
                internal += 1;
                let hex = HandleEx {
                    nodes: &t.nodes,
                    text: &t.text,
                    alpha,
                    depth: d0,
                };
                if m.handles.lookup(hex.key(v), &hex, cfg) != Some(v) {
                    return Err(format!("{v:?}: missing from its handle dictionary"));
                }
            }
        }
        if keywords != self.live || self.registry.iter().flatten().count() != self.live {
            return Err("keyword count mismatch".into());
        }
        let stored: usize = t.micros.iter().map(|(_, m)| m.handles.len()).sum();
        if stored != internal {
            return Err(format!("{stored} handle entries for {internal} internal nodes"));
        }
        if wanted.len() != t.micros.live_count() {
            return Err(format!(
                "{} micro tries, {} expected",
                t.micros.live_count(),
                wanted.len()
            ));
        }
        let mex = MacroEx {
            micros: &t.micros,
            text: &t.text,
            alpha,
        };
        for (m, mt) in t.micros.iter() {
            let depth = mt.depth as usize;
            let locus = t.text.keyword(mt.text).prefix(depth);
            let lc = chars(locus);
            if !wanted.contains(&lc) {
                return Err(format!("{m:?}: micro trie at an unwanted locus"));
            }
            let r = &t.nodes.get(mt.root).map_err(|e| format!("{m:?}: root {e}"))?;
            let above = r.parent.is_none() || (t.nodes[r.parent].len as usize) < depth;
            if (r.len as usize) < depth || lcp(locus, 0, t.extent(mt.root), 0) != depth || !above {
                return Err(format!("{m:?}: wrong root"));
            }
            for h in mt.handles.iter() {
                if t.nodes.get(h).map(|n| n.micro) != Ok(m) {
                    return Err(format!("{m:?}: stale handle entry {h:?}"));
                }
            }
            if m == t.root_micro {
                continue;
            }
            // the parent must be the deepest wanted locus above this one
            let mut d = depth - alpha;
            while !wanted.contains(&lc[..d]) {
                d -= alpha;
            }
            let pm = t.micros.get(mt.parent).map_err(|e| format!("{m:?}: parent {e}"))?;
            if pm.depth as usize != d {
                return Err(format!("{m:?}: parent at depth {}, expected {d}", pm.depth));
            }
            if t.links.lookup(mex.key(m), &mex, cfg) != Some(m) {
                return Err(format!("{m:?}: macro link missing"));
            }
        }
        if t.links.len() + 1 != t.micros.live_count() {
            return Err("stale macro links".into());
        }
        Ok(())
    }
}

/// Depth-first enumeration of the keywords in a subtree.
pub struct PrefixIter<'a> {
    trie: &'a Trie,
    stack: Vec<NodeId>,
}

impl Iterator for PrefixIter<'_> {
    type Item = KeywordId;

    fn next(&mut self) -> Option<KeywordId> {
        while let Some(v) = self.stack.pop() {
            let n = &self.trie.nodes[v];
            match &n.children {
                AdaptiveDict::Sorted(s) => self.stack.extend(s.entries().iter().rev()),
                d => self
                    .stack
                    .extend(d.ordered(&self.trie.child_ex(v)).into_iter().rev()),
            }
            if let Some(k) = KeywordId::new(n.keyword) {
                return Some(k);
            }
        }
        None
    }
}
