#![no_main]

use fraclab::spec::FunctionSpec;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(spec) = FunctionSpec::parse(text) else { return };
    // Building a vs: spec would read arbitrary paths.
    if !matches!(spec, FunctionSpec::VsFile(_)) && !text.contains("vs:") {
        if let Ok(entry) = spec.build(Some(0.5)) {
            let _ = entry.function.evaluate(0.5);
            let _ = entry.known_norm(2.0);
        }
    }
});
