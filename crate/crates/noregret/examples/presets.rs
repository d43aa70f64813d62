//! Runs a preset and writes its CSV files to a temporary directory.

use noregret::harness::{run_preset, ExperimentConfig, PRESETS};

fn main() -> noregret::Result<()> {
    for p in &PRESETS {
        println!("{:<22} {}", p.name, p.summary);
    }
    let dir = std::env::temp_dir().join("noregret-example");
    let mut cfg = ExperimentConfig::new("vanilla-fw-rate");
    cfg.t_list = Some(vec![64, 128, 256, 512]);
    cfg.output_dir = Some(dir.clone());
    let report = run_preset(&cfg)?;
    println!("{report}");
    println!("csv files in {}", dir.display());
    Ok(())
}
