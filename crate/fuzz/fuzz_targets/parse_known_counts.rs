#![no_main]

use beg_core::polycube::KnownCounts;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(known) = KnownCounts::from_json(text) {
            assert!(known.d >= 1);
            assert!(known.counts.keys().all(|&n| n >= 1));
        }
    }
});
