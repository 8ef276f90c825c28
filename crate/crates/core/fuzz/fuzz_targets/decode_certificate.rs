#![no_main]

use libfuzzer_sys::fuzz_target;
use tensorcert::report::{emit_certificate, parse_certificate, Format, TextReport};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(cert) = parse_certificate(text) else { return };
    let json = emit_certificate(&cert, Format::Json);
    assert_eq!(parse_certificate(&json).unwrap(), cert);
    let _ = cert.to_text();
});
