//! Classic Frank-Wolfe and its game form produce the same iterates.

use noregret::fw::instances::box_quadratic;
use noregret::fw::{classic_fw, fw_as_game};

fn main() -> noregret::Result<()> {
    let inst = box_quadratic(5)?;
    let classic = classic_fw(&inst, 200);
    let trace = fw_as_game(&inst, 200)?;
    let worst = trace
        .y_bar_prefixes()
        .iter()
        .zip(&classic)
        .map(|(y, w)| y.dist(&w.point))
        .fold(0.0, f64::max);
    for t in [1, 10, 100, 200] {
        println!("t = {t:>3}  f = {:.10}", classic[t - 1].value);
    }
    println!("largest distance between the two paths: {worst:.2e}");
    Ok(())
}
