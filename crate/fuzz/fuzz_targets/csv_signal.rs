//! The CSV parser must reject or accept arbitrary text without panicking.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = arsmooth::io::parse_signal_csv(text);
    }
});
