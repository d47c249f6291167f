#![no_main]

use fraclab::spec::{GridSpec, MAX_GRID_POINTS};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(grid) = GridSpec::parse(text) else { return };
    assert!(grid.points().len() <= MAX_GRID_POINTS);
});
