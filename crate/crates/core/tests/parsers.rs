//! Replays the fuzz corpus seeds and random strings through every parser.

use std::fs;
use std::path::PathBuf;

use beg_core::polycube::KnownCounts;
use beg_core::{Budget, SiteSet};
use proptest::prelude::*;

fn seeds(target: &str) -> Vec<Vec<u8>> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<_> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|entry| fs::read(entry.unwrap().path()).unwrap())
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

fn site_set(data: &[u8]) -> bool {
    let Ok(text) = std::str::from_utf8(data) else { return false };
    match SiteSet::from_json(text) {
        Ok(s) => {
            assert_eq!(SiteSet::from_json(&s.to_json()).unwrap(), s);
            true
        }
        Err(_) => false,
    }
}

fn box_spec(data: &[u8]) -> bool {
    let Some((&dim, rest)) = data.split_first() else { return false };
    let dim = 1 + usize::from(dim % 4);
    let Ok(spec) = std::str::from_utf8(rest) else { return false };
    match SiteSet::parse_box(spec, dim) {
        Ok(s) => {
            assert_eq!(s.dim(), dim);
            assert!(s.is_connected());
            true
        }
        Err(_) => false,
    }
}

fn budget(data: &[u8]) -> bool {
    let Ok(spec) = std::str::from_utf8(data) else { return false };
    match spec.parse::<Budget>() {
        Ok(b) => {
            assert_eq!(b.to_string().parse::<Budget>().unwrap(), b);
            true
        }
        Err(_) => false,
    }
}

fn known_counts(data: &[u8]) -> bool {
    let Ok(text) = std::str::from_utf8(data) else { return false };
    KnownCounts::from_json(text).is_ok()
}

#[test]
fn corpus_seeds_cover_accept_and_reject() {
    for (target, check) in [
        ("parse_site_set", site_set as fn(&[u8]) -> bool),
        ("parse_box_spec", box_spec),
        ("parse_budget", budget),
        ("parse_known_counts", known_counts),
    ] {
        let results: Vec<bool> = seeds(target).iter().map(|s| check(s)).collect();
        assert!(results.contains(&true), "{target}: no accepted seed");
        assert!(results.contains(&false), "{target}: no rejected seed");
    }
}

#[test]
fn box_seed_parses_to_expected_size() {
    assert_eq!(SiteSet::parse_box("3x2", 2).unwrap().len(), 6);
    assert!(SiteSet::parse_box("300x300", 2).is_err());
}

proptest! {
    #[test]
    fn parsers_never_panic(bytes in prop::collection::vec(any::<u8>(), 0..64), text in "\\PC{0,40}") {
        for input in [bytes.as_slice(), text.as_bytes()] {
            site_set(input);
            box_spec(input);
            budget(input);
            known_counts(input);
        }
    }

    #[test]
    fn structured_budget_strings(key in "(brute-sites|polycube-d2|tree-vertices|nonsense)", value in "[0-9]{0,22}") {
        let spec = format!("{key}={value}");
        let parsed = spec.parse::<Budget>();
        let valid_key = key != "nonsense";
        let valid_value = value.parse::<usize>().is_ok();
        prop_assert_eq!(parsed.is_ok(), valid_key && valid_value);
    }
}
