#![no_main]

use libfuzzer_sys::fuzz_target;
use relpos::BinarySubstitution;

fuzz_target!(|data: &[u8]| {
    relpos::word::set_index_budget(1 << 16);
    let Ok(s) = std::str::from_utf8(data) else { return };
    let Ok(sigma) = s.parse::<BinarySubstitution>() else { return };
    let printed = sigma.to_string();
    let again: BinarySubstitution = printed.parse().expect("printed substitution parses");
    assert_eq!(sigma, again, "{printed}");
    let m = sigma.matrix();
    let _ = m.is_primitive();
    if m.is_primitive() {
        let _ = relpos::spectral::analyze(&sigma);
    }
});
