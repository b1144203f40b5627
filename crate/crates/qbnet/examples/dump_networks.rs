//! Regenerates the builtin network files shipped under `networks/`.
//!
//! Usage: `cargo run --example dump_networks [OUTPUT_DIR]` (default
//! `networks`). Tests assert the shipped files stay in sync with the
//! builtins.

use qbnet::net::{builtin, serialize_network, BUILTIN_NAMES};
use std::path::PathBuf;

fn main() -> std::io::Result<()> {
    let dir: PathBuf = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "networks".to_string())
        .into();
    std::fs::create_dir_all(&dir)?;
    for name in BUILTIN_NAMES {
        let net = builtin(name).expect("builtin names are valid");
        let path = dir.join(format!("{name}.json"));
        std::fs::write(&path, serialize_network(&net))?;
        println!("wrote {}", path.display());
    }
    Ok(())
}
