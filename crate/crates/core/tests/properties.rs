use ctrie::packed::{PackedText, TextId};
use ctrie::{lcp, oracle_compact_trie_nodes, two_fattest, KeywordDictionary, PackConfig, PackedQuery};
use proptest::prelude::*;

fn naive_lcp<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

fn sigma_and_chars() -> impl Strategy<Value = (u32, Vec<u16>, Vec<u16>)> {
    prop_oneof![Just(2u32), Just(4), Just(26), Just(256), Just(1000)].prop_flat_map(|sigma| {
        let c = 0..sigma as u16;
        (
            Just(sigma),
            prop::collection::vec(c.clone(), 0..70),
            prop::collection::vec(c, 0..70),
        )
    })
}

/// Independent compact trie: split the set by first character recursively.
fn recursive_nodes(keys: &[Vec<u8>]) -> usize {
    fn count(keys: Vec<&[u8]>, is_root: bool) -> usize {
        let has_empty = keys.iter().any(|k| k.is_empty());
        let mut groups: std::collections::BTreeMap<u8, Vec<&[u8]>> = Default::default();
        for k in keys.iter().filter(|k| !k.is_empty()) {
            groups.entry(k[0]).or_default().push(k);
        }
        let here = usize::from(is_root || has_empty || groups.len() >= 2);
        let below: usize = groups
            .into_values()
            .map(|g| {
                // strip the first character; a unary chain collapses into one edge
                count(g.iter().map(|k| &k[1..]).collect(), false)
            })
            .sum();
        here + below
    }
    let mut k: Vec<&[u8]> = keys.iter().map(|k| k.as_slice()).collect();
    k.sort();
    k.dedup();
    count(k, true)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn pack_roundtrip((sigma, a, _b) in sigma_and_chars()) {
        let cfg = PackConfig::new(sigma).unwrap();
        let mut t = PackedText::new(cfg);
        let id: TextId = t.append_keyword(&a).unwrap();
        let back: Vec<u16> = t.read(id).into_iter().map(|c| c as u16).collect();
        prop_assert_eq!(back, a.clone());
        // whole characters per word: alpha * bits may fall short of 64
        let bound = a.len().div_ceil(cfg.alpha()) as u64 * 64;
        prop_assert_eq!(t.payload_bits(), bound);
        if 64 % cfg.bits_per_char() == 0 {
            prop_assert!(t.payload_bits() <= a.len() as u64 * cfg.bits_per_char() as u64 + 64);
        }
    }

    #[test]
    fn lcp_matches_naive((sigma, a, mut b) in sigma_and_chars(), share in 0usize..70, off in 0usize..10) {
        let cfg = PackConfig::new(sigma).unwrap();
        let n = share.min(a.len());
        b.splice(0..0, a[..n].iter().copied());
        let qa = PackedQuery::from_chars(cfg, &a).unwrap();
        let qb = PackedQuery::from_chars(cfg, &b).unwrap();
        prop_assert_eq!(lcp(qa.as_str(), 0, qb.as_str(), 0), naive_lcp(&a, &b));
        let (oa, ob) = (off.min(a.len()), (off / 2).min(b.len()));
        prop_assert_eq!(lcp(qa.as_str(), oa, qb.as_str(), ob), naive_lcp(&a[oa..], &b[ob..]));
    }

    #[test]
    fn compact_trie_count_agrees(keys in prop::collection::vec(prop::collection::vec(0u8..3, 0..8), 0..40)) {
        let expected = recursive_nodes(&keys);
        prop_assert_eq!(oracle_compact_trie_nodes(&keys), expected);
        let mut d = KeywordDictionary::new();
        for k in &keys {
            d.insert(k).unwrap();
        }
        prop_assert_eq!(d.space_report().nodes, expected);
    }

    #[test]
    fn exit_is_longest_match(
        keys in prop::collection::vec(prop::collection::vec(b'a'..b'd', 1..40), 1..60),
        queries in prop::collection::vec(prop::collection::vec(b'a'..b'd', 0..45), 1..20),
    ) {
        let mut d = KeywordDictionary::new();
        for k in &keys {
            d.insert(k).unwrap();
        }
        for q in &queries {
            let best = keys.iter().map(|k| naive_lcp(k, q)).max().unwrap();
            let e = d.exit(q).unwrap();
            prop_assert_eq!(e.lcp, best);
            prop_assert_eq!(naive_lcp(&e.exit.extent_bytes(), q), best);
        }
    }

    #[test]
    fn insertion_order_is_invisible(
        keys in prop::collection::vec(prop::collection::vec(b'a'..b'c', 0..30), 1..80),
        seed in any::<u64>(),
    ) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut shuffled = keys.clone();
        shuffled.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        let mut sorted = keys.clone();
        sorted.sort();
        let mut a = KeywordDictionary::new();
        let mut b = KeywordDictionary::new();
        shuffled.iter().for_each(|k| { a.insert(k).unwrap(); });
        sorted.iter().for_each(|k| { b.insert(k).unwrap(); });
        prop_assert_eq!(a.node_signatures(), b.node_signatures());
        prop_assert_eq!(a.micro_loci(), b.micro_loci());
    }
}

#[test]
fn two_fattest_small_exhaustive() {
    for r in 1..=512u64 {
        for l in 1..=r {
            let best = (l..=r).max_by_key(|x| x.trailing_zeros()).unwrap();
            assert_eq!(two_fattest(l, r).unwrap(), best, "[{l}..{r}]");
        }
    }
}

#[test]
fn probe_bound_on_long_keys() {
    let mut d = KeywordDictionary::new();
    let keys: Vec<Vec<u8>> = (0..2000u32)
        .map(|i| format!("{:b}", i.wrapping_mul(2654435761)).repeat(3).into_bytes())
        .collect();
    for k in &keys {
        d.insert(k).unwrap();
    }
    let alpha = d.pack_config().alpha();
    let probe_cap = (alpha as f64 + 1.0).log2().ceil() as usize + 1;
    for k in &keys {
        let (id, t) = d.locate_traced(k);
        assert!(id.is_some());
        assert!(t.handle_probes <= probe_cap);
        assert!(t.micro_tries <= k.len().div_ceil(alpha) + 1);
    }
}
