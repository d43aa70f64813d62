//! Log-log and log-linear rate fits of an error series.

use noregret::fw::classic_fw;
use noregret::fw::instances::vanilla_l2;
use noregret::harness::{fit_rate, RateModel};

fn main() -> noregret::Result<()> {
    let inst = vanilla_l2(5)?;
    let iters = classic_fw(&inst, 4096);
    let series: Vec<(f64, f64)> = (6..=12)
        .map(|k| 1usize << k)
        .map(|t| Ok((t as f64, inst.error(&iters[t - 1].point)?)))
        .collect::<noregret::Result<_>>()?;
    let fit = fit_rate(&series, RateModel::PowerLaw)?;
    println!(
        "classic FW error ~ T^{:.3} (r2 {:.4})",
        fit.slope, fit.r_squared
    );
    let geometric: Vec<(f64, f64)> = (1..=30).map(|t| (t as f64, 0.8f64.powi(t))).collect();
    let fit = fit_rate(&geometric, RateModel::Exponential)?;
    println!("0.8^t decays at {:.4} per round", fit.slope);
    Ok(())
}
