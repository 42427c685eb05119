//! The five-keyword example trie.

use ctrie::{oracle_compact_trie_nodes, Error, KeywordDictionary, OracleDict, OrderMode};

const K: [&str; 5] = [
    "brauereibräute",
    "brauen",
    "brauchbares",
    "brausendes",
    "brauereibier",
];

fn build() -> KeywordDictionary {
    let mut d = KeywordDictionary::new();
    for (i, k) in K.iter().enumerate() {
        assert_eq!(d.insert(k.as_bytes()).unwrap().get(), i as u32 + 1);
    }
    d.validate().unwrap();
    d
}

fn id(d: &KeywordDictionary, s: &str) -> u32 {
    d.locate(s.as_bytes()).unwrap().get()
}

#[test]
fn ids_and_locate() {
    let d = build();
    assert_eq!(id(&d, "brauen"), 2);
    assert_eq!(d.locate(b"brauereibock"), None);
    assert_eq!(d.locate(b"brau"), None);
    assert_eq!(KeywordDictionary::new().locate(b"brauen"), None);
}

#[test]
fn exit_of_brauereibock() {
    let d = build();
    let e = d.exit(b"brauereibock").unwrap();
    assert_eq!(e.exit.extent_bytes(), b"brauereib");
    assert_eq!(e.parex.unwrap().extent_bytes(), b"braue");
    assert_eq!(e.lcp, 9);
    let v = d.node(b"brauereib").unwrap();
    assert_eq!(v.child_keys, vec![b'i' as u32, b'r' as u32]);
    let w1 = d.child(b"brauereib", b'i' as u32).unwrap();
    assert_eq!(w1.keyword.unwrap().get(), 5);
    let w2 = d.child(b"brauereib", b'r' as u32).unwrap();
    assert_eq!(w2.keyword.unwrap().get(), 1);
}

#[test]
fn exact_extent_exit() {
    let d = build();
    let e = d.exit(b"braue").unwrap();
    assert_eq!(e.exit.extent_bytes(), b"braue");
    assert_eq!(e.lcp, 5);
    let root = KeywordDictionary::new().exit(b"xyz").unwrap();
    assert!(root.parex.is_none());
    assert_eq!((root.exit.extent.len(), root.lcp), (0, 0));
}

#[test]
fn neighbours() {
    let d = build();
    assert_eq!(d.predecessor(b"brauereibock").unwrap().get(), 5);
    assert_eq!(d.successor(b"brauereibock").unwrap().get(), 1);
    assert_eq!(d.successor(b"zzz"), None);
    assert_eq!(d.predecessor(b""), None);
    // strict by default
    assert_eq!(d.successor(b"brauen").unwrap().get(), 5);
    assert_eq!(d.predecessor(b"brauen").unwrap().get(), 3);
    let mut o = OracleDict::new(OrderMode::Strict);
    K.iter().for_each(|k| {
        o.insert(k.as_bytes());
    });
    assert_eq!(o.predecessor(b"brauereibock"), Some(5));
    assert_eq!(o.successor(b"brauereibock"), Some(1));
}

#[test]
fn prefix_enumeration() {
    let d = build();
    let ids: Vec<u32> = d.locate_prefix(b"brauereib").map(|k| k.get()).collect();
    assert_eq!(ids, [5, 1]);
    assert_eq!(d.locate_prefix(b"").count(), 5);
    assert_eq!(d.locate_prefix(b"zzz").count(), 0);
    assert_eq!(d.locate_prefix(b"brauereibx").count(), 0);
    // mid-edge prefix
    assert_eq!(d.locate_prefix(b"brauereibr").count(), 1);
}

#[test]
fn node_and_micro_counts() {
    let d = build();
    // root, brau, braue, brauereib and five leaves
    assert_eq!(d.space_report().nodes, 9);
    assert_eq!(d.space_report().nodes, oracle_compact_trie_nodes(&K));
    // loci: root, "brausend", "brauchba", "brauerei"
    assert_eq!(d.micro_trie_count(), 4);
}

#[test]
fn duplicate_and_prefix_keywords() {
    let mut d = build();
    assert_eq!(d.insert(b"brauen").unwrap().get(), 2);
    assert_eq!(d.len(), 5);
    let brau = d.insert(b"brau").unwrap();
    assert_eq!(brau.get(), 6);
    assert_eq!(d.node(b"brau").unwrap().keyword, Some(brau));
    assert_eq!(d.space_report().nodes, 9);
    d.validate().unwrap();
}

#[test]
fn delete_matches_fresh_build() {
    for victim in 0..5 {
        let mut d = build();
        d.delete(K[victim].as_bytes()).unwrap();
        d.validate().unwrap();
        let mut fresh = KeywordDictionary::new();
        for (i, k) in K.iter().enumerate() {
            if i != victim {
                fresh.insert(k.as_bytes()).unwrap();
            }
        }
        assert_eq!(d.node_signatures(), fresh.node_signatures());
        assert_eq!(d.micro_loci(), fresh.micro_loci());
        assert_eq!(d.delete(K[victim].as_bytes()), Err(Error::NotFound));
    }
}

#[test]
fn delete_everything() {
    let mut d = build();
    for k in K {
        d.delete(k.as_bytes()).unwrap();
        d.validate().unwrap();
    }
    assert!(d.is_empty());
    assert_eq!(d.space_report().nodes, 1);
    assert_eq!(d.micro_trie_count(), 1);
    assert_eq!(d.delete(b"nothing"), Err(Error::NotFound));
    // identifiers are never reused
    assert_eq!(d.insert(b"brauen").unwrap().get(), 6);
}

#[test]
fn empty_dictionary_space() {
    let r = KeywordDictionary::new().space_report();
    assert_eq!((r.text_bits, r.nodes, r.keywords), (0, 1, 0));
}
