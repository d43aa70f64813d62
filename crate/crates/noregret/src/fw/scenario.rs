//! Payoffs whose max-envelope `s(x) = max_y g(x, y)` is smooth, with the
//! smoothness constant each construction guarantees.

use std::sync::Arc;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::payoff::{spectral_norm, GamePayoff, QuadBilinear};
use crate::point::Point;
use crate::sets::{ConvexSet, SetKind};

use super::{max_norm, FwGame, FwInstance};

#[derive(Debug, Clone)]
pub enum ScenarioParams {
    /// `g = ½σ_x‖x − a‖² + xᵀMy − ½σ_y‖y − b‖²`; the x-part is `σ_x`-smooth.
    Coupled {
        sigma_x: f64,
        a: Point,
        m: DMatrix<f64>,
        sigma_y: f64,
        b: Point,
        x_set: ConvexSet,
        y_set: ConvexSet,
    },
    /// The same family with a declared joint smoothness `l` and best responses
    /// in y that never touch the boundary of the y-set.
    InteriorResponse {
        l: f64,
        sigma_x: f64,
        a: Point,
        m: DMatrix<f64>,
        sigma_y: f64,
        b: Point,
        x_set: ConvexSet,
        y_set: ConvexSet,
    },
    /// A Frank-Wolfe game over a strongly convex set with a gradient lower bound.
    FrankWolfe { instance: FwInstance },
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub kind: u8,
    pub payoff: Arc<dyn GamePayoff>,
    /// Smoothness constant of `s` the construction guarantees.
    pub s_smoothness: f64,
}

/// Builds scenario `kind` (1, 2 or 3) from matching parameters.
///
/// The constants are `‖M‖²/σ_y + σ_x` for kind 1, `L(1 + 2L/σ_y)` for kind 2
/// and `1/(λB)` for kind 3.
pub fn scenario_payoff(kind: u8, params: ScenarioParams) -> Result<Scenario> {
    match (kind, params) {
        (
            1,
            ScenarioParams::Coupled {
                sigma_x,
                a,
                m,
                sigma_y,
                b,
                x_set,
                y_set,
            },
        ) => {
            let norm = spectral_norm(&m);
            let game = QuadBilinear::new(sigma_x, a, m, sigma_y, b, x_set, y_set)?;
            Ok(Scenario {
                kind,
                payoff: Arc::new(game),
                s_smoothness: norm * norm / sigma_y + sigma_x,
            })
        }
        (
            2,
            ScenarioParams::InteriorResponse {
                l,
                sigma_x,
                a,
                m,
                sigma_y,
                b,
                x_set,
                y_set,
            },
        ) => {
            let norm = spectral_norm(&m);
            if !(l >= norm.max(sigma_x)) {
                return Err(Error::Config(format!(
                    "declared smoothness {l} is below max(‖M‖, sigma_x) = {}",
                    norm.max(sigma_x)
                )));
            }
            // the unconstrained response b + Mᵀx/σ_y must stay inside the y-set
            let reach = b.norm() + norm * max_norm(&x_set) / sigma_y;
            let room = inner_radius(&y_set);
            if !(reach < room) {
                return Err(Error::Config(format!(
                    "y best responses can reach norm {reach}, but the y-set only contains a ball of radius {room}"
                )));
            }
            let game = QuadBilinear::new(sigma_x, a, m, sigma_y, b, x_set, y_set)?;
            Ok(Scenario {
                kind,
                payoff: Arc::new(game),
                s_smoothness: l * (1.0 + 2.0 * l / sigma_y),
            })
        }
        (3, ScenarioParams::FrankWolfe { instance }) => {
            let lambda = instance.set.lambda();
            let b = instance.constants.b;
            if !(lambda > 0.0) {
                return Err(Error::Config(
                    "scenario 3 needs a strongly convex set".into(),
                ));
            }
            if !(b > 0.0) {
                return Err(Error::Config(
                    "scenario 3 needs a declared gradient lower bound B > 0".into(),
                ));
            }
            let game = FwGame::new(instance)?;
            Ok(Scenario {
                kind,
                payoff: Arc::new(game),
                s_smoothness: 1.0 / (lambda * b),
            })
        }
        (k @ 1..=3, _) => Err(Error::Config(format!(
            "parameters do not match scenario {k}"
        ))),
        (k, _) => Err(Error::Config(format!(
            "unknown scenario {k}; expected 1, 2 or 3"
        ))),
    }
}

// radius of the largest Euclidean ball around the origin inside the set
fn inner_radius(set: &ConvexSet) -> f64 {
    let d = set.dim() as f64;
    match set.kind() {
        SetKind::L2Ball { r } => *r,
        // ‖y‖_p ≤ d^{1/p − 1/2} ‖y‖₂
        SetKind::LpBall { p, r } => r * d.powf(0.5 - 1.0 / p),
        SetKind::Box { lower, upper } => lower
            .iter()
            .zip(upper)
            .map(|(l, u)| (-l).min(*u))
            .fold(f64::INFINITY, f64::min)
            .max(0.0),
    }
}
