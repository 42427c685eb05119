//! Corpus files: one keyword per LF-terminated line, duplicate-free.

use std::collections::HashSet;
use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::BenchError;

/// Where to cut raw input into keywords.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Split {
    /// At `\n`; segments are kept byte for byte.
    Newline,
    /// At `.`; segments are trimmed of ASCII whitespace and inner line
    /// breaks become spaces.
    Fullstop,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    pub keywords: Vec<Vec<u8>>,
    pub source: String,
    pub split: Split,
}

impl Corpus {
    pub fn len(&self) -> usize {
        self.keywords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keywords.is_empty()
    }

    /// Total keyword bytes.
    pub fn total_bytes(&self) -> u64 {
        self.keywords.iter().map(|k| k.len() as u64).sum()
    }
}

/// Split, drop empty segments, keep the first occurrence of each keyword.
pub fn split_bytes(data: &[u8], split: Split) -> Vec<Vec<u8>> {
    let sep = match split {
        Split::Newline => b'\n',
        Split::Fullstop => b'.',
    };
    let mut seen: HashSet<&[u8]> = HashSet::new();
    let mut out = Vec::new();
    for seg in data.split(|&b| b == sep) {
        let seg = match split {
            Split::Newline => seg,
            Split::Fullstop => seg.trim_ascii(),
        };
        if seg.is_empty() || !seen.insert(seg) {
            continue;
        }
        let mut k = seg.to_vec();
        if split == Split::Fullstop {
            k.iter_mut()
                .filter(|b| **b == b'\n' || **b == b'\r')
                .for_each(|b| *b = b' ');
        }
        out.push(k);
    }
    if split == Split::Fullstop {
        // replacing line breaks can create new duplicates
        let mut seen = HashSet::new();
        out.retain(|k| seen.insert(k.clone()));
    }
    out
}

pub fn prepare(input: &Path, split: Split) -> Result<Corpus, BenchError> {
    let data = fs::read(input).map_err(|e| BenchError::io(input, e))?;
    Ok(Corpus {
        keywords: split_bytes(&data, split),
        source: input.display().to_string(),
        split,
    })
}

/// Read a prepared corpus file.
pub fn load(path: &Path) -> Result<Corpus, BenchError> {
    prepare(path, Split::Newline)
}

pub fn write(keywords: &[Vec<u8>], out: &Path) -> Result<(), BenchError> {
    let mut buf = Vec::with_capacity(keywords.iter().map(|k| k.len() + 1).sum());
    for k in keywords {
        buf.extend_from_slice(k);
        buf.push(b'\n');
    }
    fs::File::create(out)
        .and_then(|mut f| f.write_all(&buf))
        .map_err(|e| BenchError::io(out, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn newline_dedup() {
        assert_eq!(split_bytes(b"a\nb\na\n", Split::Newline), vec![b"a".to_vec(), b"b".to_vec()]);
    }

    #[test]
    fn fullstop_dedup() {
        assert_eq!(split_bytes(b"x.y.x.", Split::Fullstop), vec![b"x".to_vec(), b"y".to_vec()]);
        assert_eq!(
            split_bytes(b" Hello world.\nHello\nworld. ", Split::Fullstop),
            vec![b"Hello world".to_vec()]
        );
    }

    #[test]
    fn idempotent() {
        let data = b"one. two\nthree.. one .four\r\n.";
        let once = split_bytes(data, Split::Fullstop);
        let mut file = Vec::new();
        for k in &once {
            file.extend_from_slice(k);
            file.push(b'\n');
        }
        assert_eq!(split_bytes(&file, Split::Newline), once);
    }
}
