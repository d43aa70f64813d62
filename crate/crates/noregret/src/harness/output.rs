//! CSV traces. Floats are written with 17 significant digits so that a
//! parsed file reproduces the in-memory values.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::game::{equilibrium_gap, GameTrace};
use crate::payoff::GamePayoff;

pub const ROUND_HEADER: [&str; 9] = [
    "preset",
    "seed",
    "T",
    "t",
    "alpha",
    "f_or_g_value",
    "gap",
    "regret_x_partial",
    "regret_y_partial",
];

pub const SUMMARY_HEADER: [&str; 6] = [
    "preset",
    "seed",
    "T",
    "final_error",
    "gap",
    "regret_sum_over_AT",
];

#[derive(Debug, Clone, PartialEq)]
pub struct RoundRow {
    pub preset: String,
    pub seed: u64,
    pub horizon: usize,
    pub t: usize,
    pub alpha: f64,
    pub value: f64,
    pub gap: f64,
    pub regret_x_partial: f64,
    pub regret_y_partial: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub preset: String,
    pub seed: u64,
    pub horizon: usize,
    pub final_error: f64,
    pub gap: f64,
    pub regret_sum_over_at: f64,
}

fn float(v: f64) -> String {
    format!("{v:.16e}")
}

fn parse_f(s: &str) -> Result<f64> {
    s.trim()
        .parse()
        .map_err(|_| Error::Config(format!("bad float {s:?} in CSV")))
}

fn parse_u<T: std::str::FromStr>(s: &str) -> Result<T> {
    s.trim()
        .parse()
        .map_err(|_| Error::Config(format!("bad integer {s:?} in CSV")))
}

/// One row per round of `trace`. `values[t]` is the tracked objective after
/// round `t + 1`: `f(ȳ_t)` for Frank-Wolfe runs, `g(x̄_t, ȳ_t)` otherwise.
pub fn round_rows(
    preset: &str,
    seed: u64,
    trace: &GameTrace,
    payoff: &dyn GamePayoff,
    values: &[f64],
) -> Result<Vec<RoundRow>> {
    let regrets = trace.partial_regrets(payoff)?;
    let xb = trace.x_bar_prefixes();
    let yb = trace.y_bar_prefixes();
    let mut rows = Vec::with_capacity(trace.rounds());
    for t in 0..trace.rounds() {
        rows.push(RoundRow {
            preset: preset.to_string(),
            seed,
            horizon: trace.rounds(),
            t: t + 1,
            alpha: trace.alphas[t],
            value: values[t],
            gap: equilibrium_gap(payoff, &xb[t], &yb[t])?,
            regret_x_partial: regrets[t].0,
            regret_y_partial: regrets[t].1,
        });
    }
    Ok(rows)
}

/// `g(x̄_t, ȳ_t)` for every prefix of a trace.
pub fn game_values(trace: &GameTrace, payoff: &dyn GamePayoff) -> Vec<f64> {
    trace
        .x_bar_prefixes()
        .iter()
        .zip(trace.y_bar_prefixes())
        .map(|(x, y)| payoff.value(x, &y))
        .collect()
}

pub fn write_rounds<W: Write>(out: W, rows: &[RoundRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(ROUND_HEADER)?;
    for r in rows {
        w.write_record([
            r.preset.clone(),
            r.seed.to_string(),
            r.horizon.to_string(),
            r.t.to_string(),
            float(r.alpha),
            float(r.value),
            float(r.gap),
            float(r.regret_x_partial),
            float(r.regret_y_partial),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_summary<W: Write>(out: W, rows: &[SummaryRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SUMMARY_HEADER)?;
    for r in rows {
        w.write_record([
            r.preset.clone(),
            r.seed.to_string(),
            r.horizon.to_string(),
            float(r.final_error),
            float(r.gap),
            float(r.regret_sum_over_at),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn check_header(r: &mut csv::Reader<impl Read>, want: &[&str]) -> Result<()> {
    let got = r.headers()?;
    if got.iter().ne(want.iter().copied()) {
        return Err(Error::Config(format!("unexpected CSV header {got:?}")));
    }
    Ok(())
}

pub fn read_rounds<R: Read>(input: R) -> Result<Vec<RoundRow>> {
    let mut r = csv::Reader::from_reader(input);
    check_header(&mut r, &ROUND_HEADER)?;
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        rows.push(RoundRow {
            preset: rec[0].to_string(),
            seed: parse_u(&rec[1])?,
            horizon: parse_u(&rec[2])?,
            t: parse_u(&rec[3])?,
            alpha: parse_f(&rec[4])?,
            value: parse_f(&rec[5])?,
            gap: parse_f(&rec[6])?,
            regret_x_partial: parse_f(&rec[7])?,
            regret_y_partial: parse_f(&rec[8])?,
        });
    }
    Ok(rows)
}

pub fn read_summary<R: Read>(input: R) -> Result<Vec<SummaryRow>> {
    let mut r = csv::Reader::from_reader(input);
    check_header(&mut r, &SUMMARY_HEADER)?;
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        rows.push(SummaryRow {
            preset: rec[0].to_string(),
            seed: parse_u(&rec[1])?,
            horizon: parse_u(&rec[2])?,
            final_error: parse_f(&rec[3])?,
            gap: parse_f(&rec[4])?,
            regret_sum_over_at: parse_f(&rec[5])?,
        });
    }
    Ok(rows)
}

/// Writes `<preset>_seed<seed>_rounds.csv` and `..._summary.csv` into `dir`.
pub fn write_files(
    dir: &Path,
    preset: &str,
    seed: u64,
    rounds: &[RoundRow],
    summary: &[SummaryRow],
) -> Result<(std::path::PathBuf, std::path::PathBuf)> {
    std::fs::create_dir_all(dir)?;
    let rp = dir.join(format!("{preset}_seed{seed}_rounds.csv"));
    let sp = dir.join(format!("{preset}_seed{seed}_summary.csv"));
    write_rounds(File::create(&rp)?, rounds)?;
    write_summary(File::create(&sp)?, summary)?;
    Ok((rp, sp))
}
