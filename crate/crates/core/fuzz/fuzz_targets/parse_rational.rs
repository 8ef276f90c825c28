#![no_main]

use libfuzzer_sys::fuzz_target;
use tensorcert::Rational;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(x) = text.parse::<Rational>() {
        let again: Rational = x.to_string().parse().expect("canonical form parses");
        assert_eq!(again, x);
    }
});
