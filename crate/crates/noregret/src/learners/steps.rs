//! Single-round update rules, free of any game bookkeeping.

use crate::error::{Error, Result};
use crate::payoff::{GamePayoff, WeightedHistory};
use crate::point::{check_dim, Point};
use crate::sets::{ConvexSet, LinearOracle};
use crate::weights::{emit_weight, WeightSchedule};

use super::Side;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regularizer {
    /// `R(x) = ‖x‖²`
    SquaredL2,
    /// `R(x) = γ_K(x)²`
    SquaredGauge,
}

fn check_eta(eta: f64) -> Result<()> {
    if !(eta > 0.0) || !eta.is_finite() {
        return Err(Error::Domain(format!(
            "learning rate must be positive, got {eta}"
        )));
    }
    Ok(())
}

/// Regularized leader for linear losses with cumulative loss vector `cumulative`:
/// `argmin_{x∈K} η⟨L, x⟩ + R(x)`.
///
/// With `R = ‖x‖²` the objective equals `‖x + ηL/2‖²` up to a constant, so the
/// answer is a projection. With the squared gauge it is [`gauge_ftrl_step`].
pub fn ftrl_step(set: &ConvexSet, cumulative: &Point, reg: Regularizer, eta: f64) -> Result<Point> {
    check_eta(eta)?;
    check_dim("ftrl", cumulative.dim(), set.dim())?;
    match reg {
        Regularizer::SquaredL2 => Ok(set.project(&cumulative.scaled(-0.5 * eta))),
        Regularizer::SquaredGauge => gauge_ftrl_step(set, cumulative, eta),
    }
}

/// `argmin_{x∈K} η⟨L, x⟩ + γ_K(x)²` through one linear minimization.
///
/// Writing `x = ρz` with `z` on the boundary, the problem separates into
/// `z* = lin_opt(L)` and `ρ = clamp(−(η/2)⟨L, z*⟩, 0, 1)`.
pub fn gauge_ftrl_step(set: &ConvexSet, cumulative: &Point, eta: f64) -> Result<Point> {
    check_eta(eta)?;
    check_dim("gauge ftrl", cumulative.dim(), set.dim())?;
    // fails for sets whose gauge is not available
    set.gauge(&Point::zeros(set.dim()))?;
    Ok(gauge_ftrl_with(set, cumulative, eta))
}

/// [`gauge_ftrl_step`] against an arbitrary linear oracle; makes exactly one oracle call.
pub fn gauge_ftrl_with<O: LinearOracle + ?Sized>(
    oracle: &O,
    cumulative: &Point,
    eta: f64,
) -> Point {
    let z = oracle.lin_opt(cumulative);
    let rho = (-0.5 * eta * cumulative.dot(&z)).clamp(0.0, 1.0);
    z.scaled(rho)
}

/// Prescient regularized leader: `cumulative` already includes the current loss.
pub fn btrl_step(set: &ConvexSet, cumulative: &Point, reg: Regularizer, eta: f64) -> Result<Point> {
    ftrl_step(set, cumulative, reg, eta)
}

/// `argmin_{x∈K} ⟨m + L, x⟩ + R(x)/η`.
pub fn optimistic_ftrl_step(
    set: &ConvexSet,
    cumulative: &Point,
    hint: &Point,
    reg: Regularizer,
    eta: f64,
) -> Result<Point> {
    check_dim("optimistic ftrl hint", hint.dim(), cumulative.dim())?;
    ftrl_step(set, &cumulative.add(hint), reg, eta)
}

/// Exact weighted minimizer of the past losses of `side`, or `initial` when
/// there is no past yet.
pub fn ftl_step(
    payoff: &dyn GamePayoff,
    side: Side,
    history: &WeightedHistory,
    initial: &Point,
) -> Result<Point> {
    if history.is_empty() {
        return Ok(initial.clone());
    }
    match side {
        Side::X => payoff.argmin_weighted_x(history),
        Side::Y => payoff.argmax_weighted_y(history),
    }
}

/// Leader over the history plus the hint `hint_weight · ℓ_{t−1}`, where
/// `ℓ_{t−1}` is the loss generated by the opponent's last action.
pub fn optimistic_ftl_step(
    payoff: &dyn GamePayoff,
    side: Side,
    history: &WeightedHistory,
    hint_weight: f64,
    last_opponent: Option<&Point>,
    initial: &Point,
) -> Result<Point> {
    match last_opponent {
        None => ftl_step(payoff, side, history, initial),
        Some(p) => ftl_step(payoff, side, &history.with(hint_weight, p), initial),
    }
}

/// Exact best response to the opponent's current action.
pub fn best_response_step(payoff: &dyn GamePayoff, opponent: &Point, side: Side) -> Point {
    match side {
        Side::X => payoff.best_response_x(opponent),
        Side::Y => payoff.best_response_y(opponent),
    }
}

/// State of strongly convex adaptive gradient descent.
#[derive(Debug, Clone, PartialEq)]
pub struct ScAdaGradState {
    pub current: Point,
    pub theta_sum: f64,
}

impl ScAdaGradState {
    pub fn new(start: Point) -> Self {
        ScAdaGradState {
            current: start,
            theta_sum: 0.0,
        }
    }

    /// One step on a `θ`-strongly convex loss whose gradient at the current
    /// point is `grad`: `η = 1/Σθ`, then `x ← Π_K(x − η grad)`.
    pub fn step(&mut self, grad: &Point, theta: f64, set: &ConvexSet) -> Result<Point> {
        sc_adagrad_step(self, grad, theta, set)
    }

    pub fn eta(&self) -> f64 {
        1.0 / self.theta_sum
    }
}

pub fn sc_adagrad_step(
    state: &mut ScAdaGradState,
    grad: &Point,
    theta: f64,
    set: &ConvexSet,
) -> Result<Point> {
    if !(theta > 0.0) || !theta.is_finite() {
        return Err(Error::Domain(format!(
            "strong convexity weight must be positive, got {theta}"
        )));
    }
    check_dim("sc-adagrad gradient", grad.dim(), state.current.dim())?;
    state.theta_sum += theta;
    let eta = 1.0 / state.theta_sum;
    let mut next = state.current.clone();
    next.axpy(-eta, grad);
    state.current = set.project(&next);
    Ok(state.current.clone())
}

/// State of strongly convex adaptive follow-the-leader on the x side.
#[derive(Debug, Clone)]
pub struct ScAftlState {
    pub history: WeightedHistory,
    pub alphas: Vec<f64>,
    pub schedule: WeightSchedule,
}

impl ScAftlState {
    pub fn new(floor: f64) -> Result<Self> {
        Ok(ScAftlState {
            history: WeightedHistory::new(),
            alphas: Vec::new(),
            schedule: WeightSchedule::adaptive_with_floor(floor)?,
        })
    }
}

/// Records the loss of `opponent` with weight `‖grad‖⁻²` and returns the new leader.
pub fn sc_aftl_step(
    state: &mut ScAftlState,
    payoff: &dyn GamePayoff,
    opponent: &Point,
    grad_for_weight: &Point,
) -> Result<Point> {
    let t = state.alphas.len() + 1;
    let alpha = emit_weight(&state.schedule, t, Some(grad_for_weight))?;
    state.alphas.push(alpha);
    state.history.push(alpha, opponent);
    payoff.argmin_weighted_x(&state.history)
}
