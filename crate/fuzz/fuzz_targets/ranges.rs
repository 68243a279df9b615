#![no_main]

use libfuzzer_sys::fuzz_target;
use qeuler_cli::literal::{parse_list, parse_range, parse_unsigned_range};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let _ = parse_range(s);
    if let Ok(r) = parse_unsigned_range(s) {
        assert!(i64::from(*r.start()) >= 0);
    }
    let _ = parse_list(s);
});
