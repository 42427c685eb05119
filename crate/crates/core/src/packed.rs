//! Word-packed character storage.
//!
//! Characters are packed `alpha` per 64-bit word, earliest character in the
//! least significant bits. Every keyword starts on a fresh word and the
//! unused high bits of its last word are zero, so word equality implies
//! character equality and the first mismatch between two packed strings is
//! the lowest set bit of their xor.

use crate::error::{Error, Result};

/// Machine word width in bits.
pub const WORD_BITS: u32 = 64;

/// Index of a keyword stored in a [`PackedText`].
pub type TextId = u32;

/// Alphabet parameters shared by every packed string of a dictionary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PackConfig {
    sigma: u32,
    bits: u32,
    alpha: u32,
}

impl PackConfig {
    pub fn new(sigma: u32) -> Result<Self> {
        if !(2..=1 << 16).contains(&sigma) {
            return Err(Error::InvalidAlphabet(sigma));
        }
        let bits = 32 - (sigma - 1).leading_zeros();
        Ok(PackConfig {
            sigma,
            bits,
            alpha: WORD_BITS / bits,
        })
    }

    /// Byte alphabet: eight characters per word.
    pub fn bytes() -> Self {
        PackConfig {
            sigma: 256,
            bits: 8,
            alpha: 8,
        }
    }

    pub fn sigma(&self) -> u32 {
        self.sigma
    }

    pub fn bits_per_char(&self) -> u32 {
        self.bits
    }

    /// Characters per machine word.
    pub fn alpha(&self) -> usize {
        self.alpha as usize
    }

    /// Mask selecting the first `n` characters of a word (`n <= alpha`).
    #[inline]
    pub fn prefix_mask(&self, n: usize) -> u64 {
        let used = n as u32 * self.bits;
        if used >= WORD_BITS {
            u64::MAX
        } else {
            (1u64 << used) - 1
        }
    }

    #[inline]
    fn char_mask(&self) -> u64 {
        (1u64 << self.bits) - 1
    }

    fn check(&self, c: u32) -> Result<()> {
        if c >= self.sigma {
            Err(Error::InvalidCharacter {
                value: c,
                sigma: self.sigma,
            })
        } else {
            Ok(())
        }
    }

    fn pack_into<C: Copy + Into<u32>>(&self, chars: &[C], out: &mut Vec<u64>) -> Result<()> {
        let alpha = self.alpha();
        let base = out.len();
        out.resize(base + chars.len().div_ceil(alpha), 0);
        for (i, &c) in chars.iter().enumerate() {
            let c = c.into();
            self.check(c)?;
            out[base + i / alpha] |= (c as u64) << ((i % alpha) as u32 * self.bits);
        }
        Ok(())
    }

    fn pack_bytes_into(&self, bytes: &[u8], out: &mut Vec<u64>) -> Result<()> {
        if self.bits != 8 {
            return self.pack_into(bytes, out);
        }
        if self.sigma < 256 {
            if let Some(&b) = bytes.iter().find(|&&b| u32::from(b) >= self.sigma) {
                return Err(Error::InvalidCharacter {
                    value: b.into(),
                    sigma: self.sigma,
                });
            }
        }
        let mut chunks = bytes.chunks_exact(8);
        out.reserve(bytes.len().div_ceil(8));
        for c in &mut chunks {
            out.push(u64::from_le_bytes(c.try_into().unwrap()));
        }
        let rest = chunks.remainder();
        if !rest.is_empty() {
            let mut buf = [0u8; 8];
            buf[..rest.len()].copy_from_slice(rest);
            out.push(u64::from_le_bytes(buf));
        }
        Ok(())
    }
}

/// A borrowed packed string: the words of one keyword, cut at `len` characters.
///
/// The words past `len` may still hold characters of a longer keyword; every
/// comparison masks at `len`.
#[derive(Clone, Copy)]
pub struct PackedStr<'a> {
    words: &'a [u64],
    len: usize,
    cfg: PackConfig,
}

impl<'a> PackedStr<'a> {
    pub fn new(words: &'a [u64], len: usize, cfg: PackConfig) -> Self {
        debug_assert!(len <= words.len() * cfg.alpha());
        PackedStr { words, len, cfg }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn config(&self) -> PackConfig {
        self.cfg
    }

    /// Truncate to the first `len` characters.
    #[inline]
    pub fn prefix(&self, len: usize) -> PackedStr<'a> {
        debug_assert!(len <= self.len);
        PackedStr { len, ..*self }
    }

    /// Raw word `j`, zero past the end of the backing slice.
    #[inline]
    pub fn word(&self, j: usize) -> u64 {
        self.words.get(j).copied().unwrap_or(0)
    }

    /// Word `j` restricted to its first `n` characters.
    #[inline]
    pub fn block(&self, j: usize, n: usize) -> u64 {
        self.word(j) & self.cfg.prefix_mask(n)
    }

    /// Character at 0-based position `i`.
    #[inline]
    pub fn char_at(&self, i: usize) -> u32 {
        debug_assert!(i < self.len);
        let alpha = self.cfg.alpha();
        ((self.word(i / alpha) >> ((i % alpha) as u32 * self.cfg.bits)) & self.cfg.char_mask()) as u32
    }

    /// `alpha` characters starting at character `offset`, unmasked.
    #[inline]
    pub fn chunk(&self, offset: usize) -> u64 {
        let alpha = self.cfg.alpha();
        let (q, r) = (offset / alpha, offset % alpha);
        if r == 0 {
            return self.word(q);
        }
        let bits = self.cfg.bits;
        let lo = self.word(q) >> (r as u32 * bits);
        let hi = self.word(q + 1) << ((alpha - r) as u32 * bits);
        (lo | hi) & self.cfg.prefix_mask(alpha)
    }

    pub fn chars(&self) -> impl Iterator<Item = u32> + '_ {
        (0..self.len).map(move |i| self.char_at(i))
    }

    /// Unpack into bytes; characters above 255 are truncated.
    pub fn to_bytes(&self) -> Vec<u8> {
        self.chars().map(|c| c as u8).collect()
    }
}

impl std::fmt::Debug for PackedStr<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?}", String::from_utf8_lossy(&self.to_bytes()))
    }
}

/// Length of the longest common prefix of `a[a_from..]` and `b[b_from..]`,
/// compared one word at a time.
pub fn lcp(a: PackedStr<'_>, a_from: usize, b: PackedStr<'_>, b_from: usize) -> usize {
    debug_assert_eq!(a.cfg, b.cfg);
    let max = a.len.saturating_sub(a_from).min(b.len.saturating_sub(b_from));
    let alpha = a.cfg.alpha();
    let bits = a.cfg.bits;
    let mut i = 0;
    while i < max {
        let n = alpha.min(max - i);
        let x = (a.chunk(a_from + i) ^ b.chunk(b_from + i)) & a.cfg.prefix_mask(n);
        if x != 0 {
            return i + (x.trailing_zeros() / bits) as usize;
        }
        i += n;
    }
    max
}

/// An owned packed string, used for queries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PackedQuery {
    words: Vec<u64>,
    len: usize,
    cfg: PackConfig,
}

impl PackedQuery {
    pub fn from_bytes(cfg: PackConfig, bytes: &[u8]) -> Result<Self> {
        let mut words = Vec::new();
        cfg.pack_bytes_into(bytes, &mut words)?;
        Ok(PackedQuery {
            words,
            len: bytes.len(),
            cfg,
        })
    }

    pub fn from_chars<C: Copy + Into<u32>>(cfg: PackConfig, chars: &[C]) -> Result<Self> {
        let mut words = Vec::new();
        cfg.pack_into(chars, &mut words)?;
        Ok(PackedQuery {
            words,
            len: chars.len(),
            cfg,
        })
    }

    #[inline]
    pub fn as_str(&self) -> PackedStr<'_> {
        PackedStr::new(&self.words, self.len, self.cfg)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }
}

/// Reference to the first `len` characters of a stored keyword.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ExtentRef {
    pub text: TextId,
    pub len: u32,
}

impl ExtentRef {
    pub const EMPTY: ExtentRef = ExtentRef { text: 0, len: 0 };

    pub fn new(text: TextId, len: u32) -> Self {
        ExtentRef { text, len }
    }
}

#[derive(Debug, Clone, Copy)]
struct Span {
    start: usize,
    len: u32,
}

/// Append-only store of packed keywords.
#[derive(Debug, Clone)]
pub struct PackedText {
    cfg: PackConfig,
    words: Vec<u64>,
    spans: Vec<Span>,
    total_chars: u64,
}

impl PackedText {
    pub fn new(cfg: PackConfig) -> Self {
        PackedText {
            cfg,
            words: Vec::new(),
            spans: Vec::new(),
            total_chars: 0,
        }
    }

    pub fn config(&self) -> PackConfig {
        self.cfg
    }

    /// Store a keyword and return its id.
    pub fn append_keyword<C: Copy + Into<u32>>(&mut self, chars: &[C]) -> Result<TextId> {
        let start = self.words.len();
        if let Err(e) = self.cfg.pack_into(chars, &mut self.words) {
            self.words.truncate(start);
            return Err(e);
        }
        Ok(self.push_span(start, chars.len()))
    }

    /// Store an already packed keyword.
    pub fn append_packed(&mut self, q: &PackedQuery) -> TextId {
        debug_assert_eq!(q.cfg, self.cfg);
        let start = self.words.len();
        self.words.extend_from_slice(&q.words);
        self.push_span(start, q.len)
    }

    fn push_span(&mut self, start: usize, len: usize) -> TextId {
        let id = self.spans.len() as TextId;
        self.spans.push(Span {
            start,
            len: len as u32,
        });
        self.total_chars += len as u64;
        id
    }

    /// Number of stored keywords.
    pub fn len(&self) -> usize {
        self.spans.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spans.is_empty()
    }

    /// Total number of stored characters.
    pub fn total_chars(&self) -> u64 {
        self.total_chars
    }

    /// Bits occupied by the packed words.
    pub fn payload_bits(&self) -> u64 {
        self.words.len() as u64 * WORD_BITS as u64
    }

    /// Heap bytes of the span table and unused word capacity.
    pub fn overhead_bytes(&self) -> usize {
        self.spans.capacity() * std::mem::size_of::<Span>()
            + (self.words.capacity() - self.words.len()) * 8
    }

    pub fn keyword_len(&self, id: TextId) -> usize {
        self.spans[id as usize].len as usize
    }

    /// The whole keyword `id`.
    #[inline]
    pub fn keyword(&self, id: TextId) -> PackedStr<'_> {
        let s = self.spans[id as usize];
        let n = (s.len as usize).div_ceil(self.cfg.alpha());
        PackedStr::new(&self.words[s.start..s.start + n], s.len as usize, self.cfg)
    }

    #[inline]
    pub fn extent(&self, r: ExtentRef) -> PackedStr<'_> {
        let s = self.keyword(r.text);
        debug_assert!(r.len as usize <= s.len());
        s.prefix(r.len as usize)
    }

    /// Character at 1-based position `i` of the extent.
    pub fn char_at(&self, r: ExtentRef, i: usize) -> Result<u32> {
        if i == 0 || i > r.len as usize {
            return Err(Error::IndexError {
                index: i,
                len: r.len as usize,
            });
        }
        Ok(self.extent(r).char_at(i - 1))
    }

    /// Unpack keyword `id`.
    pub fn read(&self, id: TextId) -> Vec<u32> {
        self.keyword(id).chars().collect()
    }
}

/// The integer in `[l..=r]` with the most trailing zeros.
///
/// All bits of `r` below the highest bit where `l - 1` and `r` differ are
/// cleared; every integer in the interval shares the bits above it.
#[inline]
pub fn fattest(l: u64, r: u64) -> u64 {
    debug_assert!(1 <= l && l <= r);
    let top = 63 - ((l - 1) ^ r).leading_zeros();
    r & !((1u64 << top) - 1)
}

/// Checked form of [`fattest`].
pub fn two_fattest(l: u64, r: u64) -> Result<u64> {
    if l < 1 || l > r {
        return Err(Error::InvalidInterval { l, r });
    }
    Ok(fattest(l, r))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_lcp(a: &[u8], b: &[u8]) -> usize {
        a.iter().zip(b).take_while(|(x, y)| x == y).count()
    }

    #[test]
    fn config_alpha() {
        let c = PackConfig::new(256).unwrap();
        assert_eq!((c.bits_per_char(), c.alpha()), (8, 8));
        assert_eq!(c, PackConfig::bytes());
        for sigma in [2u32, 3, 4, 5, 26, 100, 255, 256, 257, 1000, 65536] {
            let c = PackConfig::new(sigma).unwrap();
            let b = c.bits_per_char();
            assert!(1u64 << b >= sigma as u64 && (b == 1 || 1u64 << (b - 1) < sigma as u64));
            assert!(c.alpha() as u32 * b <= 64 && (c.alpha() as u32 + 1) * b > 64);
        }
        assert!(PackConfig::new(1).is_err());
        assert!(PackConfig::new(65537).is_err());
    }

    #[test]
    fn roundtrip_and_empty() {
        let mut t = PackedText::new(PackConfig::bytes());
        let id = t.append_keyword(b"brauen").unwrap();
        assert_eq!(t.keyword(id).to_bytes(), b"brauen");
        let before = t.payload_bits();
        let e = t.append_keyword::<u8>(&[]).unwrap();
        assert_eq!(t.keyword_len(e), 0);
        assert_eq!(t.payload_bits(), before);
    }

    #[test]
    fn out_of_alphabet() {
        let mut t = PackedText::new(PackConfig::new(4).unwrap());
        assert_eq!(
            t.append_keyword(&[1u8, 4]),
            Err(Error::InvalidCharacter { value: 4, sigma: 4 })
        );
        assert!(t.is_empty());
        assert_eq!(t.payload_bits(), 0);
    }

    #[test]
    fn figure_keywords_total_chars() {
        let kws = [
            "brauereibräute",
            "brauen",
            "brauchbares",
            "brausendes",
            "brauereibier",
        ];
        let mut t = PackedText::new(PackConfig::bytes());
        for k in kws {
            t.append_keyword(k.as_bytes()).unwrap();
        }
        let n: usize = kws.iter().map(|k| k.len()).sum();
        assert_eq!(t.total_chars(), n as u64);
    }

    #[test]
    fn lcp_examples() {
        let cfg = PackConfig::bytes();
        let a = PackedQuery::from_bytes(cfg, b"brauen").unwrap();
        let b = PackedQuery::from_bytes(cfg, b"brauchbares").unwrap();
        assert_eq!(lcp(a.as_str(), 0, b.as_str(), 0), naive_lcp(b"brauen", b"brauchbares"));
        assert_eq!(lcp(a.as_str(), 0, b.as_str(), 0), 4);
        assert_eq!(lcp(b.as_str(), 0, b.as_str(), 0), 11);
        let e = PackedQuery::from_bytes(cfg, b"").unwrap();
        assert_eq!(lcp(e.as_str(), 0, b.as_str(), 0), 0);
        assert_eq!(lcp(b.as_str(), 20, b.as_str(), 0), 0);
    }

    #[test]
    fn char_at_extent() {
        let mut t = PackedText::new(PackConfig::bytes());
        let id = t.append_keyword("brauereibier".as_bytes()).unwrap();
        let r = ExtentRef::new(id, 9);
        assert_eq!(t.char_at(r, 9).unwrap(), b'b' as u32);
        assert_eq!(t.char_at(r, 1).unwrap(), b'b' as u32);
        assert_eq!(t.char_at(r, 10), Err(Error::IndexError { index: 10, len: 9 }));
        assert!(t.char_at(r, 0).is_err());
    }

    #[test]
    fn two_fattest_examples() {
        assert_eq!(two_fattest(1, 1).unwrap(), 1);
        assert_eq!(two_fattest(9, 15).unwrap(), 12);
        assert_eq!(two_fattest(1, 4).unwrap(), 4);
        assert_eq!(two_fattest(5, 12).unwrap(), 8);
        assert_eq!(two_fattest(3, 3).unwrap(), 3);
        assert!(two_fattest(0, 3).is_err());
        assert!(two_fattest(5, 4).is_err());
    }

    #[test]
    fn trailing_bits_are_zero() {
        for sigma in [2u32, 3, 26, 256, 1000] {
            let cfg = PackConfig::new(sigma).unwrap();
            let chars: Vec<u16> = (0..37).map(|i| ((i * 7 + 1) % sigma) as u16).collect();
            let q = PackedQuery::from_chars(cfg, &chars).unwrap();
            let last = *q.words().last().unwrap();
            let used = chars.len() - (q.words().len() - 1) * cfg.alpha();
            assert_eq!(last & !cfg.prefix_mask(used), 0);
            let back: Vec<u16> = q.as_str().chars().map(|c| c as u16).collect();
            assert_eq!(back, chars);
        }
    }
}
