//! Regenerates the bundled 23-group library.
//!
//! ```text
//! cargo run --example write_synthetic_library -- data/synthetic_23g.lib
//! ```

use sortmc::transport::build_synthetic_library;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let text = build_synthetic_library(23).to_text();
    match std::env::args().nth(1) {
        Some(path) => std::fs::write(&path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}
