//! The accelerated method against classic Frank-Wolfe on an interior optimum.

use noregret::fw::instances::{interior_l2, touching_l2};
use noregret::fw::{classic_fw, new_fw};

fn main() -> noregret::Result<()> {
    for (name, inst) in [("interior", interior_l2(5)?), ("touching", touching_l2(5)?)] {
        let run = new_fw(&inst, 1024, None)?;
        let classic = classic_fw(&inst, 1024);
        println!(
            "{name}: eta = {}, {} oracle calls",
            run.eta, run.oracle_calls
        );
        for t in [16, 64, 256, 1024] {
            println!(
                "  T = {t:>4}  accelerated {:.3e}  classic {:.3e}",
                inst.error(&run.steps[t - 1].y_bar)?,
                inst.error(&classic[t - 1].point)?
            );
        }
    }
    Ok(())
}
