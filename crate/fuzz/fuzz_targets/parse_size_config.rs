#![no_main]
use dkmesh::adapt::SizeField;
use dkmesh::io::{parse_size_config, SizeSpec};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(SizeSpec::Field(field)) = parse_size_config(text) else {
        return;
    };
    for p in [(0.0, 0.0), (1.5, -2.0), (-40.0, 7.25), (1e6, -1e6)] {
        let v = field.eval(p);
        assert!(v > 0.0, "{text:?} gives {v} at {p:?}");
    }
    let q = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)];
    let m = field.min_over_quad(&q);
    assert!(m > 0.0 && m <= field.eval((0.5, 0.5)), "{text:?} gives min {m}");
});
