#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        // Parse errors are expected; only panics are bugs.
        let _ = waymark::io::parse_graph_json(s);
    }
});
