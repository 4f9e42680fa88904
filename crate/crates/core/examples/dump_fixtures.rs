//! Regenerate the JSON fixture files from the in-code builders.
//! Usage: cargo run -p novikov-core --example dump_fixtures [dir]

use novikov_core::fixtures::{fixture, FixtureName};
use novikov_core::io::complex_to_json;

fn main() -> std::io::Result<()> {
    let dir = std::env::args().nth(1).unwrap_or_else(|| "fixtures".to_owned());
    std::fs::create_dir_all(&dir)?;
    for name in FixtureName::ALL {
        let path = format!("{dir}/{}.json", name.as_str());
        let json = complex_to_json(&fixture(name));
        std::fs::write(&path, json + "\n")?;
        println!("wrote {path}");
    }
    Ok(())
}
