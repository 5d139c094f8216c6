#![no_main]
use dkmesh::adapt::{Grid, SizeField, DEFAULT_GRID_FLOOR};
use dkmesh::io::parse_grid;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(g) = parse_grid(text) else { return };
    assert_eq!(g.values.len(), g.nx * g.ny);
    assert!(g.values.iter().all(|v| v.is_finite() && *v >= 0.0));
    let grid = Grid {
        origin: (0.0, 0.0),
        spacing: (1.0, 1.0),
        nx: g.nx,
        ny: g.ny,
        values: g.values,
        lipschitz: 1.0,
        floor: DEFAULT_GRID_FLOOR,
    };
    for p in [(0.0, 0.0), (0.5, 0.25), (g.nx as f64, g.ny as f64), (-3.0, 1e9)] {
        assert!(grid.eval(p) >= DEFAULT_GRID_FLOOR);
    }
});
