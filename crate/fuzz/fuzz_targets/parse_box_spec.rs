#![no_main]

use beg_core::SiteSet;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Some((&dim, rest)) = data.split_first() else {
        return;
    };
    let dim = 1 + usize::from(dim % 4);
    if let Ok(spec) = std::str::from_utf8(rest) {
        if let Ok(sites) = SiteSet::parse_box(spec, dim) {
            assert_eq!(sites.dim(), dim);
            assert!(sites.is_connected());
        }
    }
});
