use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use noregret::harness::{run_preset, ExperimentConfig, PRESETS};

#[derive(Parser)]
#[command(
    name = "noregret",
    about = "Run no-regret game and Frank-Wolfe experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one preset.
    Run {
        #[arg(long)]
        preset: Option<String>,
        /// Comma-separated, strictly increasing horizons.
        #[arg(long = "T")]
        t_list: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long = "eta-mult")]
        eta_mult: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        dims: Option<String>,
        /// `key = value` file; flags override it.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// List the available presets.
    ListPresets,
    /// Run every preset at its defaults.
    Verify {
        #[arg(long)]
        all: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn build_config(
    preset: Option<String>,
    t_list: Option<String>,
    seed: Option<u64>,
    eta_mult: Option<String>,
    out: Option<PathBuf>,
    dims: Option<String>,
    config: Option<PathBuf>,
) -> noregret::Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::new("");
    if let Some(path) = config {
        let text = std::fs::read_to_string(&path)
            .map_err(|e| noregret::Error::Io(format!("{}: {e}", path.display())))?;
        cfg.apply_text(&text)?;
    }
    if let Some(p) = preset {
        cfg.preset = p;
    }
    if let Some(t) = t_list {
        cfg.apply("T", &t)?;
    }
    if let Some(s) = seed {
        cfg.seed = s;
    }
    if let Some(e) = eta_mult {
        cfg.apply("eta_mult", &e)?;
    }
    if let Some(d) = dims {
        cfg.apply("dims", &d)?;
    }
    if out.is_some() {
        cfg.output_dir = out;
    }
    if cfg.preset.is_empty() {
        return Err(noregret::Error::Config(
            "no preset given; use --preset or a config file".into(),
        ));
    }
    Ok(cfg)
}

fn run_one(cfg: &ExperimentConfig) -> Result<bool, noregret::Error> {
    let start = Instant::now();
    let report = run_preset(cfg)?;
    println!("{report}");
    println!("  time: {:.2} s", start.elapsed().as_secs_f64());
    if let Some(dir) = &cfg.output_dir {
        println!("  csv written to {}", dir.display());
    }
    Ok(report.passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::ListPresets => {
            for p in &PRESETS {
                println!("{:<22} {}", p.name, p.summary);
            }
            Ok(true)
        }
        Command::Run {
            preset,
            t_list,
            seed,
            eta_mult,
            out,
            dims,
            config,
        } => build_config(preset, t_list, seed, eta_mult, out, dims, config)
            .and_then(|cfg| run_one(&cfg)),
        Command::Verify { all, seed } => {
            if !all {
                eprintln!("error: verify needs --all");
                return ExitCode::from(1);
            }
            let mut ok = true;
            let mut result = Ok(true);
            for p in &PRESETS {
                let mut cfg = ExperimentConfig::new(p.name);
                cfg.seed = seed;
                match run_one(&cfg) {
                    Ok(passed) => ok &= passed,
                    Err(e) => {
                        eprintln!("error in {}: {e}", p.name);
                        result = Err(e);
                    }
                }
            }
            result.map(|_| ok)
        }
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
