//! Adaptive weights give a linear rate on a strongly convex set.

use noregret::fw::instances::linear_rate_instance;
use noregret::fw::{fw_values, linear_rate_fw};

fn main() -> noregret::Result<()> {
    let inst = linear_rate_instance()?;
    let trace = linear_rate_fw(&inst, 200)?;
    let f_min = inst.f_min.expect("known optimum");
    for (t, v) in fw_values(&inst, &trace).iter().enumerate().step_by(25) {
        println!(
            "t = {:>3}  alpha = {:.3e}  error = {:.3e}",
            t + 1,
            trace.alphas[t],
            v - f_min
        );
    }
    Ok(())
}
