#![no_main]

use beg_core::SiteSet;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(sites) = SiteSet::from_json(text) {
        let again = SiteSet::from_json(&sites.to_json()).expect("serialized site sets parse");
        assert_eq!(sites, again);
        assert_eq!(sites.canonical_shape().len(), sites.len());
    }
});
