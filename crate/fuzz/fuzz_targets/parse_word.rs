#![no_main]

use libfuzzer_sys::fuzz_target;
use relpos::FiniteWord;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let Ok(w) = s.parse::<FiniteWord>() else { return };
    let again: FiniteWord = w.to_string().parse().expect("printed word parses");
    assert_eq!(w, again);
    assert_eq!(w.reflect().reflect(), w);
});
