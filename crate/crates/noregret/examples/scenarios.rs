//! The three ways of building a game whose envelope is smooth.

use noregret::fw::instances::{boundary_l2, rotation_coupling};
use noregret::fw::{scenario_payoff, ScenarioParams};
use noregret::sets::ConvexSet;
use noregret::Point;

fn main() -> noregret::Result<()> {
    let ball = |r| ConvexSet::l2_ball(2, r);
    let coupled = ScenarioParams::Coupled {
        sigma_x: 1.0,
        a: Point::of(&[0.5, 0.5]),
        m: rotation_coupling(2.0, 0.3),
        sigma_y: 1.0,
        b: Point::zeros(2),
        x_set: ball(5.0)?,
        y_set: ball(5.0)?,
    };
    let interior = ScenarioParams::InteriorResponse {
        l: 1.0,
        sigma_x: 1.0,
        a: Point::zeros(2),
        m: rotation_coupling(0.5, 0.3),
        sigma_y: 2.0,
        b: Point::zeros(2),
        x_set: ball(1.0)?,
        y_set: ball(1.0)?,
    };
    let fw = ScenarioParams::FrankWolfe {
        instance: boundary_l2(2)?,
    };
    for (kind, params) in [(1, coupled), (2, interior), (3, fw)] {
        let s = scenario_payoff(kind, params)?;
        println!("scenario {kind}: envelope smoothness {:.4}", s.s_smoothness);
    }
    Ok(())
}
