#![no_main]

use libfuzzer_sys::fuzz_target;
use tensorcert::{FactorPartition, FactorSubset, MultiShape};

fuzz_target!(|data: &[u8]| {
    let Some((&k, rest)) = data.split_first() else { return };
    let Ok(text) = std::str::from_utf8(rest) else { return };
    let k = usize::from(k % 12);
    if let Ok(p) = FactorPartition::parse(text, k) {
        assert_eq!(FactorPartition::parse(&p.to_string(), k).unwrap(), p);
    }
    let _ = FactorSubset::parse(text, k);
    let _ = text.parse::<MultiShape>();
});
