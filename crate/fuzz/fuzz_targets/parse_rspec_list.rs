#![no_main]

use libfuzzer_sys::fuzz_target;
use relpos::reconstruct::{reconstruct, RSpec, ReconstructionOutcome};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let Ok(r) = RSpec::parse_list(s) else { return };
    let n = r.known_len().unwrap_or(0).min(64);
    let Ok(ReconstructionOutcome::Success(w)) = reconstruct(&r, n) else { return };
    // placed letters reproduce the list
    let (pa, pb) = (w.positions_a(), w.positions_b());
    assert_eq!((pa.len(), pb.len()), (n, n));
    for i in 0..n {
        assert_eq!(pb[i] as i64 - pa[i] as i64, r.value(i + 1).unwrap());
    }
});
