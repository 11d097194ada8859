//! Writes a small synthetic corpus (activation files, manifest and run
//! config) to the directory given as the first argument, default `data/toy`.
//!
//!     cargo run -p repsep-core --example make_toy -- data/toy

use std::path::PathBuf;

use repsep::data::{manifest_to_json, npy};
use repsep::synth::{synthetic_families, SyntheticConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "data/toy".into()));
    std::fs::create_dir_all(&dir)?;
    let set = synthetic_families(&SyntheticConfig {
        families: 3,
        models_per_family: 3,
        stimuli: 40,
        units: 12,
        noise: 0.5,
        permute_units: true,
        seed: 7,
    });
    for (k, (model, record)) in set.models.iter().zip(&set.records).enumerate() {
        // Drop a few trailing units so that widths differ across models.
        let keep = 12 - 2 * (k % 3);
        let data = model.data().columns(0, keep).into_owned();
        std::fs::write(dir.join(&record.path), npy::write(&data))?;
    }
    std::fs::write(dir.join("manifest.json"), manifest_to_json(&set.records))?;
    std::fs::write(
        dir.join("config.json"),
        r#"{
  "manifest": "manifest.json",
  "metrics": ["rsa", "softmatch", "procrustes", "linpred"],
  "output_dir": "out",
  "jobs": 1,
  "export": { "json": true, "csv": true, "svg": true }
}
"#,
    )?;
    println!("wrote {} models to {}", set.records.len(), dir.display());
    Ok(())
}
