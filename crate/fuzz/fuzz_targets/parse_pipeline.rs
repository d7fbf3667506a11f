#![no_main]

use libfuzzer_sys::fuzz_target;
use relpos::operators::Pipeline;
use relpos::{FiniteWord, WordStream};

fuzz_target!(|data: &[u8]| {
    relpos::word::set_index_budget(1 << 16);
    let Ok(s) = std::str::from_utf8(data) else { return };
    let Ok(p) = s.parse::<Pipeline>() else { return };
    let printed = p.to_string();
    assert_eq!(printed.parse::<Pipeline>().expect("printed pipeline parses"), p);
    let base = WordStream::periodic(&"aab".parse::<FiniteWord>().unwrap()).unwrap();
    if let Ok(w) = p.apply(&base) {
        let _ = w.prefix(32);
    }
});
