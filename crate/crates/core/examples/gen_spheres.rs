//! Regenerate the bundled sphere data files.

use stratwitten::spheres::{generate_sphere, BUNDLED_DEPTH};

fn main() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("data/spheres");
    for (k, depth) in BUNDLED_DEPTH.iter().enumerate() {
        let link = generate_sphere(k, *depth).expect("sphere data");
        let text = serde_json::to_string_pretty(&link).expect("json");
        std::fs::write(dir.join(format!("s{k}.json")), text + "\n").expect("write");
    }
}
