//! Two no-regret learners on a bilinear game and the certificate they produce.

use std::sync::Arc;

use nalgebra::DMatrix;
use noregret::game::{check_sandwich, run_game, GameConfig};
use noregret::learners::{LearnerSpec, Regularizer};
use noregret::payoff::Bilinear;
use noregret::sets::ConvexSet;
use noregret::weights::WeightSchedule;

fn main() -> noregret::Result<()> {
    let m = DMatrix::from_row_slice(2, 2, &[1.0, -2.0, 0.5, 1.5]);
    let payoff = Arc::new(Bilinear::new(
        m,
        ConvexSet::l2_ball(2, 1.0)?,
        ConvexSet::lp_ball(2, 1.5, 1.0)?,
    )?);
    let specs = [
        (
            "ftrl vs optimistic ftrl",
            LearnerSpec::Ftrl {
                reg: Regularizer::SquaredL2,
                eta: 0.3,
            },
            LearnerSpec::OptimisticFtrl {
                reg: Regularizer::SquaredGauge,
                eta: 0.3,
            },
        ),
        (
            "gauge ftrl vs best response",
            LearnerSpec::GaugeFtrl { eta: 0.5 },
            LearnerSpec::BestResponse,
        ),
        (
            "ftrl vs be the leader",
            LearnerSpec::Ftrl {
                reg: Regularizer::SquaredL2,
                eta: 0.3,
            },
            LearnerSpec::BeTheLeader,
        ),
    ];
    for (name, x, y) in specs {
        let trace = run_game(&GameConfig::new(
            payoff.clone(),
            x,
            y,
            WeightSchedule::linear(),
            400,
        ))?;
        let r = check_sandwich(&trace, payoff.as_ref());
        println!(
            "{name}: regret x {:.3e}, regret y {:.3e}, gap {:.3e} <= eps {:.3e}: {}",
            trace.regret_x,
            trace.regret_y,
            r.gap,
            r.epsilon,
            r.holds()
        );
    }
    Ok(())
}
