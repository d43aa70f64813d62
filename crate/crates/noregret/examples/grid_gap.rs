//! The oracle gap next to a grid search over both players' sets.

use noregret::fw::instances::vanilla_l2;
use noregret::fw::{fw_as_game, FwGame};
use noregret::harness::brute_force_gap;

fn main() -> noregret::Result<()> {
    let inst = vanilla_l2(2)?;
    let payoff = FwGame::new(inst.clone())?;
    for t in [5, 20, 80] {
        let trace = fw_as_game(&inst, t)?;
        let grid = brute_force_gap(&payoff, &trace.x_bar, &trace.y_bar, 801)?;
        println!(
            "T = {t:>2}  oracle gap {:.5}  grid gap {grid:.5}",
            trace.gap
        );
    }
    Ok(())
}
