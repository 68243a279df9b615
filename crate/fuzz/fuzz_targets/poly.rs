#![no_main]

use libfuzzer_sys::fuzz_target;
use qeuler::numeric::Poly;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(p) = Poly::parse(s) {
        assert_eq!(Poly::parse(&p.to_string()).unwrap(), p);
    }
});
