//! Micro tries and the macro links between them.
//!
//! The dictionary is one compact trie whose nodes live in an [`Arena`]. Its
//! character depths are cut into windows of `alpha` characters. A window
//! `(d0, d0 + alpha]` below the locus `X` (a string of length `d0`, a
//! multiple of `alpha`) forms a micro trie when the node at or directly
//! below `X` is either an explicit node at depth `d0` with children, or lies
//! inside the window. Every non-root node belongs to the micro trie of its
//! own window, so each micro trie only indexes nodes whose depth lies in its
//! window, and its handle dictionary is searched with one packed word.
//!
//! Micro tries are linked by one global hash table keyed by the parent micro
//! trie and the `alpha` characters that follow its locus.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::adaptive::{AdaptiveDict, CuckooTable, DictConfig, DictKey, InsertCtx, KeyExtractor, Role};
use crate::arena::{Arena, NodeId};
use crate::error::Result;
use crate::packed::{fattest, lcp, PackConfig, PackedQuery, PackedStr, PackedText, TextId};

/// Index of a micro trie record.
pub type MicroId = NodeId;

/// A compact trie node.
#[derive(Debug, Clone)]
pub struct Node {
    pub(crate) text: TextId,
    pub(crate) len: u32,
    pub(crate) parent: NodeId,
    /// Keyword identifier, 0 when the node carries none.
    pub(crate) keyword: u32,
    /// Micro trie owning the window this node's depth falls in.
    pub(crate) micro: MicroId,
    pub(crate) children: AdaptiveDict,
}

impl Node {
    #[inline]
    pub(crate) fn is_internal(&self) -> bool {
        !self.children.is_empty()
    }
}

/// A window of `alpha` character depths below a locus.
#[derive(Debug, Clone)]
pub struct MicroTrie {
    /// The locus is the first `depth` characters of keyword text `text`.
    pub(crate) text: TextId,
    pub(crate) depth: u32,
    /// Node at the locus, or the first node below it.
    pub(crate) root: NodeId,
    pub(crate) parent: MicroId,
    /// Internal nodes of the window, keyed by their handles.
    pub(crate) handles: AdaptiveDict,
}

/// Handle of a node relative to the locus of its micro trie: the first
/// `len` characters after the locus, packed into one word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HandleKey {
    pub word: u64,
    pub len: u8,
}

impl DictKey for HandleKey {
    #[inline]
    fn fingerprint(&self) -> u64 {
        self.word
            .wrapping_add((self.len as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15))
    }
}

/// Macro link key: parent micro trie and the word following its locus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MacroKey {
    pub parent: u32,
    pub word: u64,
}

impl DictKey for MacroKey {
    #[inline]
    fn fingerprint(&self) -> u64 {
        self.word ^ (self.parent as u64).wrapping_mul(0xc2b2_ae3d_27d4_eb4f)
    }
}

pub(crate) struct ChildEx<'a> {
    pub nodes: &'a Arena<Node>,
    pub text: &'a PackedText,
    /// Depth of the owning node.
    pub depth: usize,
}

impl KeyExtractor for ChildEx<'_> {
    type Key = u32;
    #[inline]
    fn key(&self, id: NodeId) -> u32 {
        self.text.keyword(self.nodes[id].text).char_at(self.depth)
    }
}

pub(crate) struct HandleEx<'a> {
    pub nodes: &'a Arena<Node>,
    pub text: &'a PackedText,
    pub alpha: usize,
    /// Depth of the micro trie locus.
    pub depth: usize,
}

impl KeyExtractor for HandleEx<'_> {
    type Key = HandleKey;
    #[inline]
    fn key(&self, id: NodeId) -> HandleKey {
        let n = &self.nodes[id];
        let lo = (self.nodes[n.parent].len as usize).max(self.depth);
        let f = fattest(lo as u64 + 1, n.len as u64) as usize;
        let len = f - self.depth;
        HandleKey {
            word: self.text.keyword(n.text).block(self.depth / self.alpha, len),
            len: len as u8,
        }
    }
}

pub(crate) struct MacroEx<'a> {
    pub micros: &'a Arena<MicroTrie>,
    pub text: &'a PackedText,
    pub alpha: usize,
}

impl KeyExtractor for MacroEx<'_> {
    type Key = MacroKey;
    #[inline]
    fn key(&self, id: MicroId) -> MacroKey {
        let m = &self.micros[id];
        let pd = self.micros[m.parent].depth as usize;
        MacroKey {
            parent: m.parent.raw(),
            word: self.text.keyword(m.text).word(pd / self.alpha),
        }
    }
}

/// Where a search left the trie.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Exit {
    /// Node whose extent shares the longest prefix with the query.
    pub node: NodeId,
    /// Parent of `node`, `NONE` for the root.
    pub parex: NodeId,
    /// Characters of the query matched.
    pub lcp: usize,
    /// Micro trie the search ended in.
    pub micro: MicroId,
}

/// Counters filled in by a search.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchTrace {
    /// Micro tries visited, including the last one.
    pub micro_tries: usize,
    /// Handle dictionary probes of the fat binary search.
    pub handle_probes: usize,
}

/// Window locus of a node at depth `len >= 1`.
#[inline]
pub(crate) fn window_of(len: usize, alpha: usize) -> usize {
    alpha * (len.div_ceil(alpha) - 1)
}

/// The compact trie with its micro trie decomposition.
#[derive(Debug, Clone)]
pub struct Trie {
    pub(crate) pack: PackConfig,
    pub(crate) dict: DictConfig,
    pub(crate) text: PackedText,
    pub(crate) nodes: Arena<Node>,
    pub(crate) micros: Arena<MicroTrie>,
    pub(crate) links: AdaptiveDict,
    pub(crate) root: NodeId,
    pub(crate) root_micro: MicroId,
    rng: ChaCha8Rng,
}

/// A locus whose micro trie may have to be created, updated or removed.
#[derive(Debug, Clone, Copy)]
struct Locus {
    text: TextId,
    depth: usize,
    /// A live node at or below the locus, `NONE` if there is none.
    anchor: NodeId,
}

impl Trie {
    pub fn new(pack: PackConfig, dict: DictConfig) -> Result<Self> {
        dict.validate()?;
        let mut text = PackedText::new(pack);
        let empty = text.append_keyword::<u8>(&[])?;
        let mut nodes = Arena::new();
        let mut micros = Arena::new();
        let root = nodes.allocate(Node {
            text: empty,
            len: 0,
            parent: NodeId::NONE,
            keyword: 0,
            micro: NodeId::NONE,
            children: AdaptiveDict::for_role(Role::Child, &dict),
        })?;
        let root_micro = micros.allocate(MicroTrie {
            text: empty,
            depth: 0,
            root,
            parent: NodeId::NONE,
            handles: AdaptiveDict::for_role(Role::Handle, &dict),
        })?;
        nodes[root].micro = root_micro;
        Ok(Trie {
            pack,
            rng: ChaCha8Rng::seed_from_u64(dict.seed),
            links: AdaptiveDict::Cuckoo(CuckooTable::new()),
            dict,
            text,
            nodes,
            micros,
            root,
            root_micro,
        })
    }

    #[inline]
    pub(crate) fn alpha(&self) -> usize {
        self.pack.alpha()
    }

    #[inline]
    pub(crate) fn extent(&self, v: NodeId) -> PackedStr<'_> {
        let n = &self.nodes[v];
        self.text.keyword(n.text).prefix(n.len as usize)
    }

    #[inline]
    pub(crate) fn child_ex(&self, v: NodeId) -> ChildEx<'_> {
        ChildEx {
            nodes: &self.nodes,
            text: &self.text,
            depth: self.nodes[v].len as usize,
        }
    }

    #[inline]
    fn macro_ex(&self) -> MacroEx<'_> {
        MacroEx {
            micros: &self.micros,
            text: &self.text,
            alpha: self.alpha(),
        }
    }

    /// Child of `v` whose edge starts with `c`.
    #[inline]
    pub(crate) fn child(&self, v: NodeId, c: u32) -> Option<NodeId> {
        self.nodes[v]
            .children
            .lookup(c, &self.child_ex(v), &self.dict)
    }

    // ---- search ----

    /// Locate the exit of `p`: descend macro links a word at a time, then
    /// run the fat binary search inside the last micro trie.
    pub fn search(&self, p: PackedStr<'_>, trace: &mut SearchTrace) -> Exit {
        let alpha = self.alpha();
        let ex = self.macro_ex();
        let mut m = self.root_micro;
        let mut d = 0;
        trace.micro_tries += 1;
        while p.len() >= d + alpha {
            let key = MacroKey {
                parent: m.raw(),
                word: p.word(d / alpha),
            };
            let Some(next) = self.links.lookup(key, &ex, &self.dict) else {
                break;
            };
            let mt = &self.micros[next];
            let nd = mt.depth as usize;
            if nd > p.len() {
                break;
            }
            if nd > d + alpha {
                let locus = self.text.keyword(mt.text).prefix(nd);
                if lcp(p, d + alpha, locus, d + alpha) < nd - d - alpha {
                    break;
                }
            }
            m = next;
            d = nd;
            trace.micro_tries += 1;
        }
        self.search_micro(m, p, trace)
    }

    /// Fat binary search in micro trie `m`, whose locus `p` is known to
    /// extend.
    fn search_micro(&self, m: MicroId, p: PackedStr<'_>, trace: &mut SearchTrace) -> Exit {
        let alpha = self.alpha();
        let mt = &self.micros[m];
        let d0 = mt.depth as usize;
        let top = mt.root;
        let j = d0 / alpha;
        let ex = HandleEx {
            nodes: &self.nodes,
            text: &self.text,
            alpha,
            depth: d0,
        };
        let mut best = if self.nodes[top].len as usize == d0 {
            top
        } else {
            NodeId::NONE
        };
        let mut a = d0;
        let mut b = p.len().min(d0 + alpha);
        while a < b {
            let f = fattest(a as u64 + 1, b as u64) as usize;
            let key = HandleKey {
                word: p.block(j, f - d0),
                len: (f - d0) as u8,
            };
            trace.handle_probes += 1;
            let hit = mt.handles.lookup(key, &ex, &self.dict).filter(|&v| {
                let n = &self.nodes[v];
                let lv = n.len as usize;
                lv <= b && self.text.keyword(n.text).block(j, lv - d0) == p.block(j, lv - d0)
            });
            match hit {
                Some(v) => {
                    a = self.nodes[v].len as usize;
                    best = v;
                }
                None => b = f - 1,
            }
        }
        if best.is_none() {
            let l = d0 + lcp(p, d0, self.extent(top), d0);
            return Exit {
                node: top,
                parex: self.nodes[top].parent,
                lcp: l,
                micro: m,
            };
        }
        let parent = self.nodes[best].parent;
        if a == p.len() {
            return Exit {
                node: best,
                parex: parent,
                lcp: a,
                micro: m,
            };
        }
        match self.child(best, p.char_at(a)) {
            None => Exit {
                node: best,
                parex: parent,
                lcp: a,
                micro: m,
            },
            Some(c) => Exit {
                node: c,
                parex: best,
                lcp: a + lcp(p, a, self.extent(c), a),
                micro: m,
            },
        }
    }

    /// Node whose extent equals `p`.
    pub fn find_node(&self, p: PackedStr<'_>, trace: &mut SearchTrace) -> Option<NodeId> {
        let e = self.search(p, trace);
        (e.lcp == p.len() && self.nodes[e.node].len as usize == p.len()).then_some(e.node)
    }

    // ---- handle maintenance ----

    fn handle_op(&mut self, v: NodeId, insert: bool) -> Result<()> {
        let m = self.nodes[v].micro;
        let depth = self.micros[m].depth as usize;
        let ex = HandleEx {
            nodes: &self.nodes,
            text: &self.text,
            alpha: self.pack.alpha(),
            depth,
        };
        let handles = &mut self.micros[m].handles;
        if insert {
            let mut ctx = InsertCtx {
                config: &self.dict,
                rng: &mut self.rng,
            };
            handles.insert(v, &ex, &mut ctx)?;
        } else {
            let removed = handles.remove(ex.key(v), &ex, &self.dict);
            debug_assert_eq!(removed, Some(v), "stale handle entry");
        }
        Ok(())
    }

    fn insert_handle(&mut self, v: NodeId) -> Result<()> {
        self.handle_op(v, true)
    }

    fn remove_handle(&mut self, v: NodeId) {
        self.handle_op(v, false).expect("removal cannot fail");
    }

    fn add_child(&mut self, u: NodeId, c: NodeId) -> Result<()> {
        let mut dict = std::mem::take(&mut self.nodes[u].children);
        let ex = ChildEx {
            nodes: &self.nodes,
            text: &self.text,
            depth: self.nodes[u].len as usize,
        };
        let mut ctx = InsertCtx {
            config: &self.dict,
            rng: &mut self.rng,
        };
        let r = dict.insert(c, &ex, &mut ctx);
        self.nodes[u].children = dict;
        r.map(|_| ())
    }

    fn remove_child(&mut self, u: NodeId, c: NodeId) {
        let mut dict = std::mem::take(&mut self.nodes[u].children);
        let ex = self.child_ex(u);
        let removed = dict.remove(ex.key(c), &ex, &self.dict);
        debug_assert_eq!(removed, Some(c));
        self.nodes[u].children = dict;
    }

    fn new_node(&mut self, text: TextId, len: usize, parent: NodeId, keyword: u32) -> Result<NodeId> {
        self.nodes.allocate(Node {
            text,
            len: len as u32,
            parent,
            keyword,
            micro: NodeId::NONE,
            children: AdaptiveDict::for_role(Role::Child, &self.dict),
        })
    }

    // ---- insertion ----

    /// Store `q` with keyword id `id`. Returns the node carrying the keyword
    /// and the id it carried before (0 if the keyword is new).
    pub fn insert(&mut self, q: &PackedQuery, id: u32) -> Result<(NodeId, u32)> {
        debug_assert!(id != 0);
        let p = q.as_str();
        let m = p.len();
        let e = self.search(p, &mut SearchTrace::default());
        let le = self.nodes[e.node].len as usize;
        let l = e.lcp;
        if l == m && l == le {
            let n = &mut self.nodes[e.node];
            let prev = n.keyword;
            if prev == 0 {
                n.keyword = id;
            }
            return Ok((e.node, prev));
        }
        let alpha = self.alpha();
        let mut loci: Vec<Locus> = Vec::with_capacity(3);
        // nodes that need a micro trie and a handle once the loci are synced
        let mut fresh_internal = NodeId::NONE;
        let mut grown = NodeId::NONE;
        let target;
        let leaf_parent;
        if l == le {
            let u = e.node;
            if u != self.root && !self.nodes[u].is_internal() {
                grown = u;
                if le.is_multiple_of(alpha) {
                    loci.push(Locus {
                        text: self.nodes[u].text,
                        depth: le,
                        anchor: u,
                    });
                }
            }
            leaf_parent = u;
            target = NodeId::NONE;
        } else {
            let (par, c) = (e.parex, e.node);
            let c_internal = self.nodes[c].is_internal();
            if c_internal {
                self.remove_handle(c);
            }
            self.remove_child(par, c);
            let ct = self.nodes[c].text;
            let s = self.new_node(ct, l, par, 0)?;
            self.add_child(par, s)?;
            self.nodes[c].parent = s;
            self.add_child(s, c)?;
            if c_internal {
                self.insert_handle(c)?;
            }
            fresh_internal = s;
            loci.push(Locus {
                text: ct,
                depth: window_of(l, alpha),
                anchor: s,
            });
            if l.is_multiple_of(alpha) {
                loci.push(Locus {
                    text: ct,
                    depth: l,
                    anchor: s,
                });
            }
            if l == m {
                self.nodes[s].keyword = id;
                leaf_parent = NodeId::NONE;
                target = s;
            } else {
                leaf_parent = s;
                target = NodeId::NONE;
            }
        }
        let target = if leaf_parent.is_some() {
            let t = self.text.append_packed(q);
            let leaf = self.new_node(t, m, leaf_parent, id)?;
            self.add_child(leaf_parent, leaf)?;
            loci.push(Locus {
                text: t,
                depth: window_of(m, alpha),
                anchor: leaf,
            });
            leaf
        } else {
            target
        };
        loci.sort_by_key(|x| x.depth);
        for x in &loci {
            self.sync_locus(*x)?;
        }
        for v in [fresh_internal, target] {
            if v.is_some() && self.nodes[v].micro.is_none() {
                let n = &self.nodes[v];
                let d0 = window_of(n.len as usize, alpha);
                let (found, _) = self.find_micro(n.text, d0);
                self.nodes[v].micro = found.expect("window micro trie exists");
            }
        }
        if fresh_internal.is_some() {
            self.insert_handle(fresh_internal)?;
        }
        if grown.is_some() {
            self.insert_handle(grown)?;
        }
        Ok((target, 0))
    }

    // ---- deletion ----

    /// Clear the keyword of `v` and restore the compact trie shape.
    pub fn delete(&mut self, v: NodeId) -> Result<()> {
        self.nodes[v].keyword = 0;
        if v == self.root || self.nodes[v].children.len() >= 2 {
            return Ok(());
        }
        let mut loci = Vec::with_capacity(4);
        if self.nodes[v].children.len() == 1 {
            self.merge(v, &mut loci)?;
        } else {
            let alpha = self.alpha();
            let p = self.nodes[v].parent;
            let (vt, lv) = (self.nodes[v].text, self.nodes[v].len as usize);
            let lp = self.nodes[p].len as usize;
            self.remove_child(p, v);
            self.nodes.free(v)?;
            let wd = window_of(lv, alpha);
            let mut anchor = if wd <= lp { p } else { NodeId::NONE };
            if p != self.root {
                let deg = self.nodes[p].children.len();
                if deg == 0 {
                    self.remove_handle(p);
                    if lp.is_multiple_of(alpha) {
                        loci.push(Locus {
                            text: self.nodes[p].text,
                            depth: lp,
                            anchor: p,
                        });
                    }
                } else if deg == 1 && self.nodes[p].keyword == 0 {
                    let c = self.merge(p, &mut loci)?;
                    if anchor == p {
                        anchor = c;
                    }
                }
            }
            loci.push(Locus {
                text: vt,
                depth: wd,
                anchor,
            });
        }
        loci.sort_by_key(|x| std::cmp::Reverse(x.depth));
        for x in loci {
            self.sync_locus(x)?;
        }
        Ok(())
    }

    /// Splice out the unary, keyword-free node `v`. Returns its child.
    fn merge(&mut self, v: NodeId, loci: &mut Vec<Locus>) -> Result<NodeId> {
        let alpha = self.alpha();
        let p = self.nodes[v].parent;
        let c = self.nodes[v].children.any().expect("unary node");
        let c_internal = self.nodes[c].is_internal();
        self.remove_handle(v);
        if c_internal {
            self.remove_handle(c);
        }
        self.remove_child(p, v);
        self.nodes[c].parent = p;
        self.add_child(p, c)?;
        if c_internal {
            self.insert_handle(c)?;
        }
        let n = self.nodes.free(v)?;
        let lv = n.len as usize;
        loci.push(Locus {
            text: n.text,
            depth: window_of(lv, alpha),
            anchor: c,
        });
        if lv.is_multiple_of(alpha) {
            loci.push(Locus {
                text: n.text,
                depth: lv,
                anchor: c,
            });
        }
        Ok(c)
    }

    // ---- micro trie maintenance ----

    /// Micro trie at the locus `text[..depth]`, if any, and the deepest
    /// micro trie whose locus is a proper prefix of it.
    pub(crate) fn find_micro(&self, text: TextId, depth: usize) -> (Option<MicroId>, MicroId) {
        let alpha = self.alpha();
        let locus = self.text.keyword(text).prefix(depth);
        let ex = self.macro_ex();
        let mut m = self.root_micro;
        let mut d = 0;
        loop {
            if d == depth {
                return (Some(m), self.micros[m].parent);
            }
            if depth < d + alpha {
                return (None, m);
            }
            let key = MacroKey {
                parent: m.raw(),
                word: locus.word(d / alpha),
            };
            let Some(next) = self.links.lookup(key, &ex, &self.dict) else {
                return (None, m);
            };
            let mt = &self.micros[next];
            let nd = mt.depth as usize;
            if nd > depth {
                return (None, m);
            }
            if nd > d + alpha {
                let other = self.text.keyword(mt.text).prefix(nd);
                if lcp(locus, d + alpha, other, d + alpha) < nd - d - alpha {
                    return (None, m);
                }
            }
            m = next;
            d = nd;
        }
    }

    /// Topmost node at or below the locus of depth `depth` above `anchor`.
    fn top_of(&self, anchor: NodeId, depth: usize) -> NodeId {
        let mut top = anchor;
        loop {
            let p = self.nodes[top].parent;
            if p.is_none() || (self.nodes[p].len as usize) < depth {
                return top;
            }
            top = p;
        }
    }

    /// Whether a micro trie belongs at a locus of depth `depth` whose
    /// topmost node is `top`.
    fn micro_wanted(&self, top: NodeId, depth: usize) -> bool {
        let n = &self.nodes[top];
        let lt = n.len as usize;
        depth == 0 || (lt == depth && n.is_internal()) || (depth < lt && lt <= depth + self.alpha())
    }

    /// Bring the micro trie at one locus in line with the trie shape.
    fn sync_locus(&mut self, x: Locus) -> Result<Option<MicroId>> {
        let top = if x.anchor.is_some() {
            debug_assert!(self.nodes[x.anchor].len as usize >= x.depth);
            let t = self.top_of(x.anchor, x.depth);
            Some(t).filter(|&t| self.micro_wanted(t, x.depth))
        } else {
            None
        };
        let (found, parent) = self.find_micro(x.text, x.depth);
        match (found, top) {
            (Some(m), Some(t)) => {
                self.micros[m].root = t;
                Ok(Some(m))
            }
            (Some(m), None) => {
                let below = x.anchor.is_some().then(|| self.top_of(x.anchor, x.depth));
                self.remove_micro(m, below)?;
                Ok(None)
            }
            (None, Some(t)) => self.create_micro(x.text, x.depth, t, parent).map(Some),
            (None, None) => Ok(None),
        }
    }

    fn create_micro(&mut self, text: TextId, depth: usize, root: NodeId, parent: MicroId) -> Result<MicroId> {
        let alpha = self.alpha();
        let pd = self.micros[parent].depth as usize;
        let key = MacroKey {
            parent: parent.raw(),
            word: self.text.keyword(text).word(pd / alpha),
        };
        let m = self.micros.allocate(MicroTrie {
            text,
            depth: depth as u32,
            root,
            parent,
            handles: AdaptiveDict::for_role(Role::Handle, &self.dict),
        })?;
        let displaced = {
            let ex = MacroEx {
                micros: &self.micros,
                text: &self.text,
                alpha,
            };
            self.links.remove(key, &ex, &self.dict)
        };
        if let Some(y) = displaced {
            debug_assert!({
                let yt = self.text.keyword(self.micros[y].text);
                let xt = self.text.keyword(text);
                lcp(yt, 0, xt.prefix(depth), 0) == depth
            });
            self.micros[y].parent = m;
            self.link(y)?;
        }
        self.link(m)?;
        Ok(m)
    }

    fn link(&mut self, m: MicroId) -> Result<()> {
        let ex = MacroEx {
            micros: &self.micros,
            text: &self.text,
            alpha: self.pack.alpha(),
        };
        let mut ctx = InsertCtx {
            config: &self.dict,
            rng: &mut self.rng,
        };
        self.links.insert(m, &ex, &mut ctx).map(|_| ())
    }

    fn unlink(&mut self, m: MicroId) {
        let ex = MacroEx {
            micros: &self.micros,
            text: &self.text,
            alpha: self.pack.alpha(),
        };
        let removed = self.links.remove(ex.key(m), &ex, &self.dict);
        debug_assert_eq!(removed, Some(m));
    }

    /// Drop micro trie `m`, handing its child (there is at most one, below
    /// `top`) to its parent.
    fn remove_micro(&mut self, m: MicroId, top: Option<NodeId>) -> Result<()> {
        debug_assert!(self.micros[m].handles.is_empty());
        let alpha = self.alpha();
        let depth = self.micros[m].depth as usize;
        let parent = self.micros[m].parent;
        self.unlink(m);
        let child = top
            .filter(|&t| self.nodes[t].len as usize >= depth + alpha)
            .and_then(|t| {
                let key = MacroKey {
                    parent: m.raw(),
                    word: self.extent(t).word(depth / alpha),
                };
                self.links.lookup(key, &self.macro_ex(), &self.dict)
            });
        if let Some(y) = child {
            self.unlink(y);
            self.micros[y].parent = parent;
            self.link(y)?;
        }
        self.micros.free(m)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trie() -> Trie {
        Trie::new(PackConfig::bytes(), DictConfig::default()).unwrap()
    }

    fn q(s: &str) -> PackedQuery {
        PackedQuery::from_bytes(PackConfig::bytes(), s.as_bytes()).unwrap()
    }

    #[test]
    fn window_arithmetic() {
        assert_eq!(window_of(1, 8), 0);
        assert_eq!(window_of(8, 8), 0);
        assert_eq!(window_of(9, 8), 8);
        assert_eq!(window_of(16, 8), 8);
    }

    #[test]
    fn single_leaf_under_root() {
        let mut t = trie();
        let (v, prev) = t.insert(&q("abc"), 1).unwrap();
        assert_eq!(prev, 0);
        assert_eq!(t.nodes[v].parent, t.root);
        assert_eq!(t.nodes.live_count(), 2);
        let e = t.search(q("abd").as_str(), &mut SearchTrace::default());
        assert_eq!((e.node, e.lcp), (v, 2));
    }

    #[test]
    fn degenerate_search_hits_root() {
        let t = trie();
        let e = t.search(q("anything").as_str(), &mut SearchTrace::default());
        assert_eq!((e.node, e.parex, e.lcp), (t.root, NodeId::NONE, 0));
    }

    #[test]
    fn long_keys_spawn_micro_tries() {
        let mut t = trie();
        t.insert(&q("aaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaa"), 1).unwrap();
        t.insert(&q("aaaaaaaaaaaaaaaaaaaaaaaaaaaaaaab"), 2).unwrap();
        // the branching node at depth 31 lives in the window (24, 32]
        assert_eq!(t.micros.live_count(), 2);
        let mut tr = SearchTrace::default();
        let v = t.find_node(q("aaaaaaaaaaaaaaaaaaaaaaaaaaaaaaab").as_str(), &mut tr);
        assert!(v.is_some());
        assert_eq!(tr.micro_tries, 2);
        let (w, _) = t.insert(&q("aaaaaaaaaaaaaaaa"), 3).unwrap();
        assert_eq!(t.nodes[w].len, 16);
        t.delete(v.unwrap()).unwrap();
        t.delete(w).unwrap();
        assert_eq!(t.nodes.live_count(), 2);
        // the remaining leaf still owns the window (24, 32]
        assert_eq!(t.micros.live_count(), 2);
    }
}
