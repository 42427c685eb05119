//! Seeded synthetic corpora with Zipf-distributed shared prefixes.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Zipf};

const ALPHABET: &[u8] = b"abcdefghijklmnopqrstuvwxyz0123456789/.-_:";

#[derive(Debug, Clone, PartialEq)]
pub struct SynthSpec {
    pub keywords: usize,
    pub avg_len: usize,
    /// Number of shared stems.
    pub stems: usize,
    pub seed: u64,
}

impl Default for SynthSpec {
    fn default() -> Self {
        SynthSpec {
            keywords: 100_000,
            avg_len: 100,
            stems: 2_000,
            seed: 1,
        }
    }
}

fn random_str(rng: &mut ChaCha8Rng, len: usize, out: &mut Vec<u8>) {
    out.extend((0..len).map(|_| ALPHABET[rng.random_range(0..ALPHABET.len())]));
}

/// Keywords built as a Zipf-chosen stem plus a random tail. Stems grow
/// from earlier stems, so popular prefixes nest.
pub fn synth(spec: &SynthSpec) -> Vec<Vec<u8>> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let avg = spec.avg_len.max(2);
    let n_stems = spec.stems.max(1);
    let zipf = Zipf::new(n_stems as f64, 1.1).expect("valid Zipf parameters");
    let mut stems: Vec<Vec<u8>> = Vec::with_capacity(n_stems);
    for i in 0..n_stems {
        let mut s = Vec::new();
        if i > 0 && rng.random_bool(0.6) {
            let base = &stems[(zipf.sample(&mut rng) as usize - 1) % i];
            let base = if base.len() > avg / 2 { &base[..avg / 2] } else { base };
            s.extend_from_slice(base);
        }
        let grow = rng.random_range(1..=avg / 4 + 1);
        random_str(&mut rng, grow, &mut s);
        stems.push(s);
    }
    let mut seen = HashSet::with_capacity(spec.keywords);
    let mut out = Vec::with_capacity(spec.keywords);
    while out.len() < spec.keywords {
        let stem = &stems[zipf.sample(&mut rng) as usize - 1];
        let mut k = stem.clone();
        let rest = avg.saturating_sub(stem.len()).max(1);
        let tail = rng.random_range(1..=2 * rest);
        random_str(&mut rng, tail, &mut k);
        if seen.insert(k.clone()) {
            out.push(k);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_duplicate_free() {
        let spec = SynthSpec {
            keywords: 2000,
            avg_len: 40,
            stems: 50,
            seed: 9,
        };
        let a = synth(&spec);
        assert_eq!(a, synth(&spec));
        assert_eq!(a.iter().collect::<HashSet<_>>().len(), 2000);
    }
}
