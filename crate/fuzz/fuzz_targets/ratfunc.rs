#![no_main]

use libfuzzer_sys::fuzz_target;
use qeuler::numeric::RationalFunction;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(f) = RationalFunction::parse(s) {
        // rendering is canonical
        let text = f.to_string();
        assert_eq!(RationalFunction::parse(&text).unwrap().to_string(), text);
    }
});
