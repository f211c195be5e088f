//! Regenerates `fixtures/<version>/` from the in-code corpus.
//!
//! cargo run -p qfw-core --example write_fixtures

use std::path::PathBuf;

use qfw_core::fixtures::{corpus, render, CORPUS_VERSION};

fn main() -> std::io::Result<()> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(CORPUS_VERSION);
    std::fs::create_dir_all(&dir)?;
    let files = render(&corpus());
    for (name, text) in &files {
        std::fs::write(dir.join(name), text)?;
    }
    println!("wrote {} files to {}", files.len(), dir.display());
    Ok(())
}
