#![no_main]

use libfuzzer_sys::fuzz_target;
use tensorcert::shape::parse_families;

fuzz_target!(|data: &[u8]| {
    let Some((&k, rest)) = data.split_first() else { return };
    let Ok(text) = std::str::from_utf8(rest) else { return };
    if let Ok(families) = parse_families(text, usize::from(k % 12)) {
        assert!(families.iter().all(|f| !f.is_empty()));
    }
});
