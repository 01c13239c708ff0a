#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        // Exercise graph induction too: it validates transition targets.
        if let Ok(k) = waymark::io::parse_kripke_json(s) {
            let _ = k.induce_graph();
        }
    }
});
