use std::path::PathBuf;
use std::process::Command;
use std::sync::Arc;

use noregret::fw::instances::vanilla_l2;
use noregret::fw::{fw_as_game, FwGame};
use noregret::harness::config::{parse_kv, parse_t_list};
use noregret::harness::output::{
    read_rounds, read_summary, write_rounds, write_summary, RoundRow, SummaryRow,
};
use noregret::harness::{
    brute_force_gap, find_preset, fit_rate, run_preset, ExperimentConfig, RateModel, PRESETS,
};
use noregret::payoff::{Bilinear, GamePayoff};
use noregret::{Error, Point};

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("noregret-test-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn csv_round_trip() {
    let rounds: Vec<RoundRow> = (1..=5)
        .map(|t| RoundRow {
            preset: "p".into(),
            seed: 9,
            horizon: 5,
            t,
            alpha: t as f64,
            value: (t as f64).sqrt() / 3.0,
            gap: 1.0 / (t as f64 * 7.0),
            regret_x_partial: -1e-17 * t as f64,
            regret_y_partial: std::f64::consts::PI * t as f64,
        })
        .collect();
    let mut buf = Vec::new();
    write_rounds(&mut buf, &rounds).unwrap();
    let back = read_rounds(buf.as_slice()).unwrap();
    assert_eq!(back.len(), rounds.len());
    for (a, b) in rounds.iter().zip(&back) {
        assert_eq!(
            (&a.preset, a.seed, a.horizon, a.t),
            (&b.preset, b.seed, b.horizon, b.t)
        );
        for (u, v) in [
            (a.alpha, b.alpha),
            (a.value, b.value),
            (a.gap, b.gap),
            (a.regret_y_partial, b.regret_y_partial),
        ] {
            assert!((u - v).abs() <= 1e-12 * u.abs().max(1.0));
        }
    }
    let summary = vec![SummaryRow {
        preset: "p".into(),
        seed: 1,
        horizon: 64,
        final_error: 2.5e-9,
        gap: 1.0 / 3.0,
        regret_sum_over_at: 0.125,
    }];
    let mut buf = Vec::new();
    write_summary(&mut buf, &summary).unwrap();
    let text = String::from_utf8(buf.clone()).unwrap();
    assert!(
        text.starts_with("preset,seed,T,final_error,gap,regret_sum_over_AT"),
        "{text}"
    );
    let back = read_summary(buf.as_slice()).unwrap();
    assert!((back[0].gap - summary[0].gap).abs() <= 1e-12);
    assert!(read_summary("a,b\n1,2\n".as_bytes()).is_err());
}

#[test]
fn preset_output_is_deterministic() {
    let mut files = Vec::new();
    for run in ["a", "b"] {
        let dir = scratch(run);
        let mut cfg = ExperimentConfig::new("vanilla-fw-rate");
        cfg.seed = 4;
        cfg.t_list = Some(vec![16, 32, 64, 128]);
        cfg.output_dir = Some(dir.clone());
        run_preset(&cfg).unwrap();
        let mut names: Vec<_> = std::fs::read_dir(&dir)
            .unwrap()
            .map(|e| e.unwrap().path())
            .collect();
        names.sort();
        assert_eq!(names.len(), 2);
        files.push(
            names
                .iter()
                .map(|p| std::fs::read(p).unwrap())
                .collect::<Vec<_>>(),
        );
        std::fs::remove_dir_all(&dir).unwrap();
    }
    assert_eq!(files[0], files[1]);
}

#[test]
fn fit_examples() {
    let power: Vec<(f64, f64)> = [1.0, 2.0, 4.0, 8.0]
        .iter()
        .map(|t: &f64| (*t, 3.0 / (t * t)))
        .collect();
    let fit = fit_rate(&power, RateModel::PowerLaw).unwrap();
    assert!((fit.slope + 2.0).abs() < 1e-12 && (fit.r_squared - 1.0).abs() < 1e-12);
    assert!((fit.intercept - 3f64.ln()).abs() < 1e-12);
    let expo: Vec<(f64, f64)> = (1..=10).map(|t| (t as f64, 0.5f64.powi(t))).collect();
    let fit = fit_rate(&expo, RateModel::Exponential).unwrap();
    assert!((fit.slope - 0.5f64.ln()).abs() < 1e-12);
    let floored = vec![(1.0, 1e-3), (2.0, 1e-14), (3.0, 0.0), (4.0, 1e-13)];
    assert!(matches!(
        fit_rate(&floored, RateModel::PowerLaw),
        Err(Error::Fit(_))
    ));
}

#[test]
fn grid_gap_examples() {
    let game = Bilinear::scalar_unit();
    let g = brute_force_gap(&game, &Point::of(&[0.5]), &Point::of(&[-0.5]), 2001).unwrap();
    assert!((g - 1.0).abs() < 1e-12);
    let inst = vanilla_l2(2).unwrap();
    let fw = FwGame::new(inst.clone()).unwrap();
    let trace = fw_as_game(&inst, 50).unwrap();
    let g = brute_force_gap(&fw, &trace.x_bar, &trace.y_bar, 2001).unwrap();
    assert!((g - trace.gap).abs() < 5e-3, "{g} vs {}", trace.gap);
    let big: Arc<dyn GamePayoff> = Arc::new(FwGame::new(vanilla_l2(3).unwrap()).unwrap());
    assert!(brute_force_gap(big.as_ref(), &Point::zeros(3), &Point::zeros(3), 11).is_err());
}

#[test]
fn config_parsing() {
    let mut cfg = ExperimentConfig::new("x");
    cfg.apply_text("preset = new-fw-rate  # comment\nT = 64, 128\nseed = 3\neta_mult = 0.5\ndims = 4\ntol.brute_gap = 1e-2\n")
        .unwrap();
    assert_eq!(cfg.preset, "new-fw-rate");
    assert_eq!(cfg.t_list, Some(vec![64, 128]));
    assert_eq!((cfg.seed, cfg.eta_multiplier, cfg.dims), (3, 0.5, Some(4)));
    assert_eq!(cfg.tolerance("brute_gap", 5e-3), 1e-2);
    assert_eq!(cfg.tolerance("other", 5e-3), 5e-3);
    assert!(parse_t_list("64,64").is_err());
    assert!(parse_t_list("0,1").is_err());
    assert!(parse_t_list("8,x").is_err());
    assert!(parse_kv("no equals sign").is_err());
    assert!(cfg.apply("eta_mult", "-1").is_err());
    assert!(cfg.apply("colour", "blue").is_err());
}

#[test]
fn unknown_preset_lists_the_names() {
    let e = find_preset("nope").unwrap_err().to_string();
    for p in &PRESETS {
        assert!(e.contains(p.name), "{e}");
    }
    let mut cfg = ExperimentConfig::new("linear-fw-rate");
    cfg.dims = Some(3);
    assert!(matches!(run_preset(&cfg), Err(Error::Config(_))));
}

fn cli(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_noregret"))
        .args(args)
        .output()
        .unwrap();
    let text =
        String::from_utf8_lossy(&out.stdout).to_string() + &String::from_utf8_lossy(&out.stderr);
    (out.status.code().unwrap(), text)
}

#[test]
fn cli_exit_codes() {
    let (code, text) = cli(&["list-presets"]);
    assert_eq!(code, 0);
    assert_eq!(text.lines().count(), PRESETS.len());

    let (code, text) = cli(&["run", "--preset", "nope"]);
    assert_eq!(code, 1);
    assert!(text.contains("fw-equivalence"), "{text}");

    let (code, text) = cli(&["run", "--preset", "fw-equivalence"]);
    assert_eq!(code, 0, "{text}");
    assert!(text.contains("max deviation <= 1e-9 (box): PASS"), "{text}");

    let (code, _) = cli(&["run", "--preset", "vanilla-fw-rate", "--T", "128,64"]);
    assert_eq!(code, 1);

    let dir = scratch("cli");
    let conf = dir.join("run.conf");
    std::fs::write(&conf, "preset = set-lemmas\nseed = 2\n").unwrap();
    let (code, text) = cli(&[
        "run",
        "--config",
        conf.to_str().unwrap(),
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{text}");
    assert!(dir.join("set-lemmas_seed2_summary.csv").exists());
    std::fs::remove_dir_all(&dir).unwrap();

    // the accelerated preset fails its rate checks at the default settings
    let (code, text) = cli(&["run", "--preset", "new-fw-rate"]);
    assert_eq!(code, 2, "{text}");

    let (code, text) = cli(&["verify", "--all"]);
    assert_eq!(code, 2, "{text}");
    assert_eq!(text.matches("overall: PASS").count(), PRESETS.len() - 1);
}
