#![no_main]

use beg_core::Budget;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(spec) = std::str::from_utf8(data) {
        if let Ok(budget) = spec.parse::<Budget>() {
            // Display output is itself a complete override list
            let again: Budget = budget.to_string().parse().expect("display round-trips");
            assert_eq!(budget, again);
        }
    }
});
