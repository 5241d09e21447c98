//! Regenerates the shipped fixture corpus: `cargo run --example write_corpus -- corpus`.

use std::path::PathBuf;

use osc_optimizer::fixtures::{corpus, write_dir};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir: PathBuf = std::env::args().nth(1).unwrap_or_else(|| "corpus".into()).into();
    let fixtures = corpus()?;
    write_dir(&dir, &fixtures)?;
    println!("wrote {} fixtures to {}", fixtures.len(), dir.display());
    Ok(())
}
