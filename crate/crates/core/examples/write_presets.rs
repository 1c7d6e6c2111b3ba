//! Regenerates `configs/<preset>.json` from the built-in presets.

use std::path::PathBuf;

use fishsmoker::{FishPreset, ScenarioConfig};

fn main() -> std::io::Result<()> {
    let dir = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("configs"));
    std::fs::create_dir_all(&dir)?;
    for p in FishPreset::ALL {
        let path = dir.join(format!("{}.json", p.name()));
        std::fs::write(&path, ScenarioConfig::preset(p).to_json_pretty() + "\n")?;
        println!("{}", path.display());
    }
    Ok(())
}
