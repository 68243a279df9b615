#![no_main]

use libfuzzer_sys::fuzz_target;
use qeuler::numeric::PadicNumber;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(x) = PadicNumber::parse(s) {
        let text = x.to_string();
        assert_eq!(PadicNumber::parse(&text).unwrap().to_string(), text);
    }
});
