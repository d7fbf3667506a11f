#![no_main]

use libfuzzer_sys::fuzz_target;
use relpos::expr::WordSpec;

fuzz_target!(|data: &[u8]| {
    relpos::word::set_index_budget(1 << 16);
    let Ok(s) = std::str::from_utf8(data) else { return };
    let Ok(spec) = s.parse::<WordSpec>() else { return };
    let printed = spec.to_string();
    assert_eq!(printed.parse::<WordSpec>().expect("printed spec parses"), spec);
    if let Ok(w) = spec.build() {
        if let Ok(prefix) = w.prefix(32) {
            assert_eq!(prefix.len(), 32);
        }
        let _ = relpos::position::position_rows(&w, 8);
    }
});
