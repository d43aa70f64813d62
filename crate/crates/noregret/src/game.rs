//! The weighted no-regret game loop and the quantities used to certify its output.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::learners::{Learner, LearnerSpec, RoundContext, Side};
use crate::payoff::{GamePayoff, WeightedHistory};
use crate::point::{check_dim, weighted_average, Point};
use crate::weights::{emit_weight, WeightSchedule};

/// Slack below zero tolerated on the equilibrium gap before it is treated as
/// an oracle defect.
pub const GAP_SLACK: f64 = 1e-9;

/// Slack on the inequalities checked by [`check_sandwich`].
pub const SANDWICH_SLACK: f64 = 1e-7;

#[derive(Debug, Clone)]
pub struct GameConfig {
    pub payoff: Arc<dyn GamePayoff>,
    pub learner_x: LearnerSpec,
    pub learner_y: LearnerSpec,
    pub schedule: WeightSchedule,
    pub rounds: usize,
}

impl GameConfig {
    pub fn new(
        payoff: Arc<dyn GamePayoff>,
        learner_x: LearnerSpec,
        learner_y: LearnerSpec,
        schedule: WeightSchedule,
        rounds: usize,
    ) -> Self {
        GameConfig {
            payoff,
            learner_x,
            learner_y,
            schedule,
            rounds,
        }
    }

    fn learners(&self) -> Result<(Box<dyn Learner>, Box<dyn Learner>)> {
        if self.rounds == 0 {
            return Err(Error::Config("a game needs at least one round".into()));
        }
        let p = self.payoff.as_ref();
        Ok((
            self.learner_x.build(Side::X, p, &self.schedule)?,
            self.learner_y.build(Side::Y, p, &self.schedule)?,
        ))
    }
}

/// Everything a run produced.
#[derive(Debug, Clone, PartialEq)]
pub struct GameTrace {
    pub xs: Vec<Point>,
    pub ys: Vec<Point>,
    pub alphas: Vec<f64>,
    /// `A_T = Σ α_t`
    pub a_total: f64,
    pub x_bar: Point,
    pub y_bar: Point,
    /// `ℓ_t(x_t) = g(x_t, y_t)`, unweighted.
    pub losses_x: Vec<f64>,
    /// `h_t(y_t) = −g(x_t, y_t)`, unweighted.
    pub losses_y: Vec<f64>,
    pub regret_x: f64,
    pub regret_y: f64,
    /// Equilibrium gap of `(x̄, ȳ)`.
    pub gap: f64,
}

impl GameTrace {
    /// Builds the trace of a finished run, computing averages, regrets and the gap.
    pub fn from_actions(
        payoff: &dyn GamePayoff,
        xs: Vec<Point>,
        ys: Vec<Point>,
        alphas: Vec<f64>,
    ) -> Result<Self> {
        if xs.is_empty() || xs.len() != ys.len() || xs.len() != alphas.len() {
            return Err(Error::Dimension(format!(
                "trace lengths differ: {} x, {} y, {} weights",
                xs.len(),
                ys.len(),
                alphas.len()
            )));
        }
        let x_bar = weighted_average(&xs, &alphas)?;
        let y_bar = weighted_average(&ys, &alphas)?;
        let a_total = alphas.iter().sum();
        let losses_x: Vec<f64> = xs
            .iter()
            .zip(&ys)
            .map(|(x, y)| payoff.value(x, y))
            .collect();
        let losses_y = losses_x.iter().map(|v| -v).collect();
        let mut trace = GameTrace {
            xs,
            ys,
            alphas,
            a_total,
            x_bar,
            y_bar,
            losses_x,
            losses_y,
            regret_x: 0.0,
            regret_y: 0.0,
            gap: 0.0,
        };
        trace.regret_x = weighted_regret(&trace, payoff, Side::X)?;
        trace.regret_y = weighted_regret(&trace, payoff, Side::Y)?;
        trace.gap = equilibrium_gap(payoff, &trace.x_bar, &trace.y_bar)?;
        Ok(trace)
    }

    /// The trace of the first `t` rounds, as if the run had stopped there.
    pub fn prefix(&self, payoff: &dyn GamePayoff, t: usize) -> Result<GameTrace> {
        if t == 0 || t > self.rounds() {
            return Err(Error::Config(format!(
                "prefix length {t} outside 1..={}",
                self.rounds()
            )));
        }
        GameTrace::from_actions(
            payoff,
            self.xs[..t].to_vec(),
            self.ys[..t].to_vec(),
            self.alphas[..t].to_vec(),
        )
    }

    pub fn rounds(&self) -> usize {
        self.xs.len()
    }

    /// `(Regret_x + Regret_y) / A_T`, the ε certified by the run.
    pub fn average_regret_sum(&self) -> f64 {
        (self.regret_x + self.regret_y) / self.a_total
    }

    /// `x̄_t` for every prefix `1..=t`.
    pub fn x_bar_prefixes(&self) -> Vec<Point> {
        prefix_averages(&self.xs, &self.alphas)
    }

    /// `ȳ_t` for every prefix `1..=t`.
    pub fn y_bar_prefixes(&self) -> Vec<Point> {
        prefix_averages(&self.ys, &self.alphas)
    }

    /// Weighted regret of both players after every prefix `1..=t`. Costs `O(T²)`
    /// payoff evaluations.
    pub fn partial_regrets(&self, payoff: &dyn GamePayoff) -> Result<Vec<(f64, f64)>> {
        let mut out = Vec::with_capacity(self.rounds());
        let mut hist_x = WeightedHistory::new();
        let mut hist_y = WeightedHistory::new();
        let mut played = 0.0;
        for t in 0..self.rounds() {
            let a = self.alphas[t];
            hist_x.push(a, &self.xs[t]);
            hist_y.push(a, &self.ys[t]);
            played += a * self.losses_x[t];
            let xs = payoff.argmin_weighted_x(&hist_y)?;
            let ys = payoff.argmax_weighted_y(&hist_x)?;
            let mut best_x = 0.0;
            let mut best_y = 0.0;
            for s in 0..=t {
                best_x += self.alphas[s] * payoff.value(&xs, &self.ys[s]);
                best_y += self.alphas[s] * payoff.value(&self.xs[s], &ys);
            }
            out.push((played - best_x, best_y - played));
        }
        Ok(out)
    }
}

fn prefix_averages(points: &[Point], alphas: &[f64]) -> Vec<Point> {
    let mut hist = WeightedHistory::new();
    points
        .iter()
        .zip(alphas)
        .map(|(p, a)| {
            hist.push(*a, p);
            hist.mean().expect("history is not empty")
        })
        .collect()
}

/// Runs the game for `config.rounds` rounds.
///
/// Each round the x-player moves first. The y-player is shown `x_t` only when
/// its learner is prescient. The weight `α_t` is fixed after both moves (the
/// adaptive schedule needs `∇ₓg(x_t, y_t)`) and reported to both learners.
pub fn run_game(config: &GameConfig) -> Result<GameTrace> {
    let (mut lx, mut ly) = config.learners()?;
    let payoff = config.payoff.as_ref();
    let n = config.rounds;
    let mut xs = Vec::with_capacity(n);
    let mut ys = Vec::with_capacity(n);
    let mut alphas = Vec::with_capacity(n);
    for t in 1..=n {
        let (x, y, alpha) = play_round(payoff, &config.schedule, lx.as_mut(), ly.as_mut(), t)
            .map_err(|e| e.at_round(t))?;
        xs.push(x);
        ys.push(y);
        alphas.push(alpha);
    }
    GameTrace::from_actions(payoff, xs, ys, alphas)
}

fn play_round(
    payoff: &dyn GamePayoff,
    schedule: &WeightSchedule,
    lx: &mut dyn Learner,
    ly: &mut dyn Learner,
    t: usize,
) -> Result<(Point, Point, f64)> {
    let ahead = schedule.known_ahead(t);
    let x = lx.act(&RoundContext {
        t,
        alpha: ahead,
        payoff,
        opponent_now: None,
    })?;
    check_action(&x, payoff.dim_x(), "x")?;
    let shown = if ly.is_prescient() { Some(&x) } else { None };
    let y = ly.act(&RoundContext {
        t,
        alpha: ahead,
        payoff,
        opponent_now: shown,
    })?;
    check_action(&y, payoff.dim_y(), "y")?;
    let alpha = match ahead {
        Some(a) => a,
        None => emit_weight(schedule, t, Some(&payoff.grad_x(&x, &y)))?,
    };
    let ctx = RoundContext {
        t,
        alpha: Some(alpha),
        payoff,
        opponent_now: Some(&x),
    };
    lx.observe(&ctx, alpha, &x, &y)?;
    ly.observe(&ctx, alpha, &y, &x)?;
    Ok((x, y, alpha))
}

fn check_action(p: &Point, dim: usize, who: &str) -> Result<()> {
    check_dim(who, p.dim(), dim)?;
    if !p.is_finite() {
        return Err(Error::Internal(format!(
            "the {who}-learner produced a non-finite action"
        )));
    }
    Ok(())
}

/// Replays the x-learner of `config` on the first `t − 1` rounds of `trace`
/// and checks that it reproduces `x_t` exactly, for every `t`.
///
/// A fresh learner is built for each `t`, so the x-action can only depend on
/// what the replay feeds it.
pub fn audit_x_isolation(config: &GameConfig, trace: &GameTrace) -> Result<bool> {
    let payoff = config.payoff.as_ref();
    for t in 1..=trace.rounds() {
        let mut lx = config.learner_x.build(Side::X, payoff, &config.schedule)?;
        for s in 1..t {
            let ahead = config.schedule.known_ahead(s);
            lx.act(&RoundContext {
                t: s,
                alpha: ahead,
                payoff,
                opponent_now: None,
            })?;
            let (x, y, a) = (&trace.xs[s - 1], &trace.ys[s - 1], trace.alphas[s - 1]);
            lx.observe(
                &RoundContext {
                    t: s,
                    alpha: Some(a),
                    payoff,
                    opponent_now: Some(x),
                },
                a,
                x,
                y,
            )?;
        }
        let ahead = config.schedule.known_ahead(t);
        let x = lx.act(&RoundContext {
            t,
            alpha: ahead,
            payoff,
            opponent_now: None,
        })?;
        if x != trace.xs[t - 1] {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `sup_y g(x̄, y) − inf_x g(x, ȳ)` through the best-response oracles.
///
/// Values in `[−1e-9, 0]` are reported as zero; anything lower means an oracle
/// returned a non-optimal response and is an error.
pub fn equilibrium_gap(payoff: &dyn GamePayoff, x_bar: &Point, y_bar: &Point) -> Result<f64> {
    let (lower, upper) = gap_sides(payoff, x_bar, y_bar);
    clamp_gap(upper - lower)
}

pub(crate) fn clamp_gap(gap: f64) -> Result<f64> {
    if gap.is_nan() {
        return Err(Error::Internal("equilibrium gap is NaN".into()));
    }
    if gap < -GAP_SLACK {
        return Err(Error::Internal(format!(
            "equilibrium gap {gap:e} is negative; a best-response oracle is not optimal"
        )));
    }
    Ok(gap.max(0.0))
}

// (inf_x g(x, ȳ), sup_y g(x̄, y))
fn gap_sides(payoff: &dyn GamePayoff, x_bar: &Point, y_bar: &Point) -> (f64, f64) {
    let lower = payoff.value(&payoff.best_response_x(y_bar), y_bar);
    let upper = payoff.value(x_bar, &payoff.best_response_y(x_bar));
    (lower, upper)
}

/// `Σ α_t ℓ_t(side_t) − min Σ α_t ℓ_t(·)` for one side of a finished run, with
/// the comparator from the payoff's weighted-argmin oracle.
pub fn weighted_regret(trace: &GameTrace, payoff: &dyn GamePayoff, side: Side) -> Result<f64> {
    let played: f64 = trace
        .alphas
        .iter()
        .zip(&trace.losses_x)
        .map(|(a, l)| a * l)
        .sum();
    match side {
        Side::X => {
            let mut hist = WeightedHistory::new();
            for (a, y) in trace.alphas.iter().zip(&trace.ys) {
                hist.push(*a, y);
            }
            let best = payoff.argmin_weighted_x(&hist)?;
            let comparator: f64 = trace
                .alphas
                .iter()
                .zip(&trace.ys)
                .map(|(a, y)| a * payoff.value(&best, y))
                .sum();
            Ok(played - comparator)
        }
        Side::Y => {
            let mut hist = WeightedHistory::new();
            for (a, x) in trace.alphas.iter().zip(&trace.xs) {
                hist.push(*a, x);
            }
            let best = payoff.argmax_weighted_y(&hist)?;
            let comparator: f64 = trace
                .alphas
                .iter()
                .zip(&trace.xs)
                .map(|(a, x)| a * payoff.value(x, &best))
                .sum();
            Ok(comparator - played)
        }
    }
}

/// The inequalities a finished run must satisfy.
#[derive(Debug, Clone, PartialEq)]
pub struct SandwichReport {
    pub gap: f64,
    /// `(Regret_x + Regret_y) / A_T`
    pub epsilon: f64,
    /// `inf_x g(x, ȳ)`
    pub lower: f64,
    /// `sup_y g(x̄, y)`
    pub upper: f64,
    pub value: Option<f64>,
    /// `gap ≤ ε`
    pub gap_ok: bool,
    /// `V* − ε ≤ lower ≤ V* ≤ upper ≤ V* + ε`, when `V*` is known.
    pub ordering_ok: Option<bool>,
}

impl SandwichReport {
    pub fn holds(&self) -> bool {
        self.gap_ok && self.ordering_ok.unwrap_or(true)
    }
}

/// Checks that `(x̄, ȳ)` is an ε-equilibrium with ε the average regret sum,
/// and that the game value sits between the two best-response values.
pub fn check_sandwich(trace: &GameTrace, payoff: &dyn GamePayoff) -> SandwichReport {
    let (lower, upper) = gap_sides(payoff, &trace.x_bar, &trace.y_bar);
    let epsilon = trace.average_regret_sum();
    let tol = SANDWICH_SLACK;
    let value = payoff.value_of_game();
    let ordering_ok = value.map(|v| {
        v - epsilon - tol <= lower
            && lower <= v + tol
            && v - tol <= upper
            && upper <= v + epsilon + tol
    });
    SandwichReport {
        gap: trace.gap,
        epsilon,
        lower,
        upper,
        value,
        gap_ok: trace.gap <= epsilon + tol,
        ordering_ok,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::learners::Regularizer;
    use crate::payoff::Bilinear;

    fn bilinear() -> Arc<dyn GamePayoff> {
        Arc::new(Bilinear::scalar_unit())
    }

    #[test]
    fn gap_examples() {
        let g = Bilinear::scalar_unit();
        assert_eq!(
            equilibrium_gap(&g, &Point::of(&[0.0]), &Point::of(&[0.0])).unwrap(),
            0.0
        );
        assert_eq!(
            equilibrium_gap(&g, &Point::of(&[1.0]), &Point::of(&[0.0])).unwrap(),
            1.0
        );
        assert!(clamp_gap(-1e-10).unwrap() == 0.0);
        assert!(clamp_gap(-1e-6).is_err());
    }

    #[test]
    fn single_round_averages_are_the_actions() {
        let cfg = GameConfig::new(
            bilinear(),
            LearnerSpec::Ftl {
                initial: Some(Point::of(&[0.3])),
            },
            LearnerSpec::BestResponse,
            WeightSchedule::uniform(),
            1,
        );
        let tr = run_game(&cfg).unwrap();
        assert_eq!(tr.x_bar, tr.xs[0]);
        assert_eq!(tr.y_bar, tr.ys[0]);
        assert_eq!(tr.ys[0], Point::of(&[1.0]));
    }

    #[test]
    fn lengths_match_and_certificate_holds() {
        let cfg = GameConfig::new(
            bilinear(),
            LearnerSpec::Ftrl {
                reg: Regularizer::SquaredL2,
                eta: 0.1,
            },
            LearnerSpec::BestResponse,
            WeightSchedule::linear(),
            57,
        );
        let tr = run_game(&cfg).unwrap();
        assert_eq!(tr.xs.len(), 57);
        assert_eq!(tr.ys.len(), 57);
        assert_eq!(tr.alphas.len(), 57);
        assert!(tr.regret_y <= 1e-9 * tr.a_total);
        assert!(check_sandwich(&tr, cfg.payoff.as_ref()).holds());
        assert!(audit_x_isolation(&cfg, &tr).unwrap());
    }

    #[test]
    fn zero_rounds_is_a_config_error() {
        let cfg = GameConfig::new(
            bilinear(),
            LearnerSpec::Ftl { initial: None },
            LearnerSpec::BestResponse,
            WeightSchedule::uniform(),
            0,
        );
        assert!(matches!(run_game(&cfg), Err(Error::Config(_))));
    }
}
