#![no_main]

use libfuzzer_sys::fuzz_target;
use qeuler_cli::literal::QLiteral;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        let _ = QLiteral::parse(Some(s));
    }
});
