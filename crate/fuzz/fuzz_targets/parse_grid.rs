#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(g) = gqfi_core::parse::parse_grid(s) {
        assert!(!g.is_empty());
        assert!(g.iter().all(|x| x.is_finite()));
        assert!(g.windows(2).all(|w| w[0] <= w[1]));
    }
});
