#![no_main]

use fraclab::funcspace::{vs_lp_norm, VerySimpleFunction};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(f) = VerySimpleFunction::parse(text) else { return };
    let exact = f.lp_norm_exact(2.0).expect("p = 2 is valid");
    assert!(exact >= 0.0);
    if let Ok(v) = vs_lp_norm(&f, 2.0) {
        assert!(v >= 0.0);
    }
    if let Ok(g) = f.to_scalar() {
        let _ = g.evaluate(0.5);
    }
});
