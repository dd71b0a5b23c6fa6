#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(x) = gqfi_core::parse::parse_angle(s) {
        assert!(x.is_finite());
    }
});
