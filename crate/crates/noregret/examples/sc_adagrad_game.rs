//! SC-AdaGrad against best response on a strongly convex-concave game.

use std::sync::Arc;

use noregret::fw::instances::{scenario_one_game, scenario_one_start};
use noregret::fw::{sc_adagrad_game, sc_adagrad_schedule};
use noregret::game::equilibrium_gap;
use noregret::payoff::GamePayoff;

fn main() -> noregret::Result<()> {
    let payoff: Arc<dyn GamePayoff> = Arc::new(scenario_one_game()?);
    let trace = sc_adagrad_game(payoff.clone(), 300, Some(scenario_one_start()))?;
    let xs = trace.x_bar_prefixes();
    let ys = trace.y_bar_prefixes();
    let schedule = sc_adagrad_schedule(&trace, 1.0);
    for t in [1, 10, 50, 100, 200, 300] {
        let gap = equilibrium_gap(payoff.as_ref(), &xs[t - 1], &ys[t - 1])?;
        println!(
            "t = {t:>3}  eta = {:.3e}  gap = {gap:.3e}",
            schedule[t - 1].1
        );
    }
    Ok(())
}
