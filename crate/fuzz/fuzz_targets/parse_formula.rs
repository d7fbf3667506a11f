#![no_main]

use libfuzzer_sys::fuzz_target;
use relpos::reconstruct::{reconstruct, RSpec};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if s.trim() == "tm" {
        return;
    }
    let Ok(r) = RSpec::parse_formula(s) else { return };
    let again = RSpec::parse_formula(r.description()).expect("description parses");
    for n in 1..=3 {
        assert_eq!(r.value(n).ok(), again.value(n).ok());
    }
    let _ = reconstruct(&r, 16);
});
