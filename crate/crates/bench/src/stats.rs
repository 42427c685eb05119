//! Corpus characteristics and geometric histograms.

use std::fmt;

use ctrie::{oracle_compact_trie_nodes, KeywordDictionary};

use crate::error::BenchError;

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusStats {
    /// Total keyword bytes.
    pub size_bytes: u64,
    /// Distinct byte values.
    pub sigma: usize,
    pub k: usize,
    pub avg_len: f64,
    pub max_len: usize,
    /// Over neighbours in sorted order; 0 for fewer than two keywords.
    pub avg_lcp: f64,
    pub max_lcp: usize,
    pub ctrie_nodes: usize,
}

fn lcp(a: &[u8], b: &[u8]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

pub fn stats(keywords: &[Vec<u8>]) -> Result<CorpusStats, BenchError> {
    if keywords.is_empty() {
        return Err(BenchError::EmptyCorpus);
    }
    let mut seen = [false; 256];
    keywords.iter().flatten().for_each(|&b| seen[b as usize] = true);
    let size: u64 = keywords.iter().map(|k| k.len() as u64).sum();
    let lcps = sorted_lcps(keywords);
    Ok(CorpusStats {
        size_bytes: size,
        sigma: seen.iter().filter(|&&s| s).count(),
        k: keywords.len(),
        avg_len: size as f64 / keywords.len() as f64,
        max_len: keywords.iter().map(|k| k.len()).max().unwrap_or(0),
        avg_lcp: if lcps.is_empty() {
            0.0
        } else {
            lcps.iter().sum::<usize>() as f64 / lcps.len() as f64
        },
        max_lcp: lcps.iter().copied().max().unwrap_or(0),
        ctrie_nodes: oracle_compact_trie_nodes(keywords),
    })
}

/// LCPs of neighbouring keywords in sorted order.
pub fn sorted_lcps(keywords: &[Vec<u8>]) -> Vec<usize> {
    let mut sorted: Vec<&[u8]> = keywords.iter().map(|k| k.as_slice()).collect();
    sorted.sort_unstable();
    sorted.windows(2).map(|w| lcp(w[0], w[1])).collect()
}

impl fmt::Display for CorpusStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n\t{}", self.size_bytes)?;
        writeln!(f, "sigma\t{}", self.sigma)?;
        writeln!(f, "k\t{}", self.k)?;
        writeln!(f, "avg_len\t{:.2}", self.avg_len)?;
        writeln!(f, "max_len\t{}", self.max_len)?;
        writeln!(f, "avg_lcp\t{:.2}", self.avg_lcp)?;
        writeln!(f, "max_lcp\t{}", self.max_lcp)?;
        write!(f, "ctrie_nodes\t{}", self.ctrie_nodes)
    }
}

/// Counts bucketed as 0, 1, 2, then `(2^(i-2), 2^(i-1)]` for row `i`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Histogram {
    pub rows: Vec<u64>,
}

impl Histogram {
    pub fn row_of(v: usize) -> usize {
        if v == 0 {
            0
        } else {
            v.next_power_of_two().trailing_zeros() as usize + 1
        }
    }

    pub fn from_values(values: impl IntoIterator<Item = usize>) -> Self {
        let mut h = Histogram::default();
        for v in values {
            let r = Self::row_of(v);
            if h.rows.len() <= r {
                h.rows.resize(r + 1, 0);
            }
            h.rows[r] += 1;
        }
        h
    }

    pub fn total(&self) -> u64 {
        self.rows.iter().sum()
    }

    pub fn label(row: usize) -> String {
        match row {
            0..=2 => row.to_string(),
            i => format!("({}, {}]", 1u64 << (i - 2), 1u64 << (i - 1)),
        }
    }

    /// Tab-separated rows, skipping a leading empty zero row.
    pub fn render(&self, name: &str) -> String {
        let mut s = String::new();
        for (i, &c) in self.rows.iter().enumerate() {
            if i == 0 && c == 0 {
                continue;
            }
            s.push_str(&format!("{name}\t{}\t{c}\n", Self::label(i)));
        }
        s
    }
}

/// Histograms of keyword lengths, neighbour LCPs, and the sizes of all
/// handle and child dictionaries of a dictionary built over the corpus.
pub struct Histograms {
    pub lengths: Histogram,
    pub lcps: Histogram,
    pub handle_dicts: Histogram,
    pub child_dicts: Histogram,
}

pub fn histograms(keywords: &[Vec<u8>], dict: &KeywordDictionary) -> Histograms {
    let sizes = dict.dict_sizes();
    Histograms {
        lengths: Histogram::from_values(keywords.iter().map(|k| k.len())),
        lcps: Histogram::from_values(sorted_lcps(keywords)),
        handle_dicts: Histogram::from_values(sizes.handles),
        child_dicts: Histogram::from_values(sizes.children),
    }
}

impl fmt::Display for Histograms {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.lengths.render("length"))?;
        write!(f, "{}", self.lcps.render("lcp"))?;
        write!(f, "{}", self.handle_dicts.render("dic_handle"))?;
        write!(f, "{}", self.child_dicts.render("dic_child"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows() {
        let r: Vec<usize> = [0, 1, 2, 3, 4, 5, 8, 9, 16, 17].map(Histogram::row_of).to_vec();
        assert_eq!(r, [0, 1, 2, 3, 3, 4, 4, 5, 5, 6]);
        assert_eq!(Histogram::label(3), "(2, 4]");
        assert_eq!(Histogram::label(6), "(16, 32]");
    }

    #[test]
    fn single_keyword() {
        let s = stats(&[b"abc".to_vec()]).unwrap();
        assert_eq!((s.k, s.max_lcp, s.avg_lcp, s.ctrie_nodes), (1, 0, 0.0, 2));
        assert!(matches!(stats(&[]), Err(BenchError::EmptyCorpus)));
    }
}
