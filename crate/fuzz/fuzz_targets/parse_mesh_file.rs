#![no_main]
use dkmesh::io::parse_mesh_file;
use dkmesh::Mesh;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(file) = parse_mesh_file(text) else { return };
    let again = parse_mesh_file(&file.to_text()).expect("serialized file parses");
    assert_eq!(again.patch, file.patch);
    assert_eq!(again.keys, file.keys);
    // replay small inputs; every accepted key set must be buildable
    if file.patch.radius() <= 6 && file.keys.len() <= 200 {
        let base = Mesh::initial_patch(file.patch.radius()).unwrap().face_count();
        let mesh = file.replay();
        assert_eq!(mesh.face_count(), base + 6 * file.keys.len());
    }
});
