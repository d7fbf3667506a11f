#![no_main]

use libfuzzer_sys::fuzz_target;
use relpos::word::StreamExport;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let Ok(export) = StreamExport::from_json(s) else { return };
    let Ok(frozen) = export.to_frozen() else { return };
    assert_eq!(frozen.len(), export.length);
    let again = StreamExport::from_json(&export.to_json()).expect("encoded export decodes");
    assert_eq!(again.to_frozen().expect("still valid").letters(), frozen.letters());
});
