#![no_main]

use libfuzzer_sys::fuzz_target;
use qeuler_cli::args::{parse_config, ComputeArgs, IntegrateArgs, TableArgs, VerifyArgs};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let _ = parse_config::<ComputeArgs>(s);
    let _ = parse_config::<TableArgs>(s);
    let _ = parse_config::<IntegrateArgs>(s);
    let _ = parse_config::<VerifyArgs>(s);
});
