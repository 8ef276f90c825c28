#![no_main]

use libfuzzer_sys::fuzz_target;
use tensorcert::instance::InstanceFile;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(file) = InstanceFile::parse(text) else { return };
    let again = InstanceFile::parse(&file.to_json()).expect("serialized instance parses");
    assert_eq!(again, file);
    let _ = file.decomposition();
    let _ = file.symmetric_instance();
});
