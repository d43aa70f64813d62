//! Closed-form FTRL with a squared gauge regularizer on an l_p ball.

use noregret::learners::{ftrl_step, gauge_ftrl_step, Regularizer};
use noregret::sets::ConvexSet;
use noregret::Point;

fn main() -> noregret::Result<()> {
    let set = ConvexSet::lp_ball(2, 1.5, 1.0)?;
    for l in [[0.5, 0.0], [1.0, 1.0], [3.0, -1.0]] {
        let l = Point::of(&l);
        let y = gauge_ftrl_step(&set, &l, 1.0)?;
        let z = ftrl_step(&set, &l, Regularizer::SquaredL2, 1.0)?;
        println!(
            "L = {l}  gauge: {y} (gauge {:.4})  euclidean: {z}",
            set.gauge(&y)?
        );
    }
    Ok(())
}
