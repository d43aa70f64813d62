//! Online learners that play one side of a game.
//!
//! The engine asks each learner for an action with [`Learner::act`] and then
//! reports the round's weight and the opponent's action with
//! [`Learner::observe`]. Losses are always derived from the payoff: the
//! x-player's loss is `g(·, y_t)` and the y-player's loss is `−g(x_t, ·)`.

mod steps;

use std::fmt::Debug;

pub use steps::{
    best_response_step, btrl_step, ftl_step, ftrl_step, gauge_ftrl_step, gauge_ftrl_with,
    optimistic_ftl_step, optimistic_ftrl_step, sc_adagrad_step, sc_aftl_step, Regularizer,
    ScAdaGradState, ScAftlState,
};

use crate::error::{Error, Result};
use crate::payoff::{GamePayoff, WeightedHistory};
use crate::point::{check_dim, Point};
use crate::sets::ConvexSet;
use crate::weights::WeightSchedule;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    X,
    Y,
}

impl Side {
    pub fn name(self) -> &'static str {
        match self {
            Side::X => "x",
            Side::Y => "y",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LearnerKind {
    Ftl,
    Ftrl,
    GaugeFtrl,
    OptimisticFtl,
    OptimisticFtrl,
    BestResponse,
    BeTheLeader,
    Btrl,
    ScAdaGrad,
    ScAftl,
}

impl LearnerKind {
    pub fn name(self) -> &'static str {
        match self {
            LearnerKind::Ftl => "FTL",
            LearnerKind::Ftrl => "FTRL",
            LearnerKind::GaugeFtrl => "GaugeFTRL",
            LearnerKind::OptimisticFtl => "OptimisticFTL",
            LearnerKind::OptimisticFtrl => "OptimisticFTRL",
            LearnerKind::BestResponse => "BestResponse",
            LearnerKind::BeTheLeader => "BeTheLeader",
            LearnerKind::Btrl => "BTRL",
            LearnerKind::ScAdaGrad => "SC-AdaGrad",
            LearnerKind::ScAftl => "SC-AFTL",
        }
    }

    /// Whether the learner sees the current round's loss before acting.
    pub fn is_prescient(self) -> bool {
        matches!(
            self,
            LearnerKind::BestResponse | LearnerKind::BeTheLeader | LearnerKind::Btrl
        )
    }
}

/// What a learner may look at when choosing its action for round `t`.
#[derive(Clone, Copy)]
pub struct RoundContext<'a> {
    /// 1-based round index.
    pub t: usize,
    /// `α_t`, when the schedule fixes it before play.
    pub alpha: Option<f64>,
    pub payoff: &'a dyn GamePayoff,
    /// The x-player's current action. Only prescient y-learners receive it.
    pub opponent_now: Option<&'a Point>,
}

pub trait Learner: Debug + Send {
    fn kind(&self) -> LearnerKind;
    fn side(&self) -> Side;

    fn is_prescient(&self) -> bool {
        self.kind().is_prescient()
    }

    fn act(&mut self, ctx: &RoundContext<'_>) -> Result<Point>;

    /// Records round `t`: the learner played `own`, the opponent played
    /// `opponent`, and the round carries weight `alpha`.
    fn observe(
        &mut self,
        ctx: &RoundContext<'_>,
        alpha: f64,
        own: &Point,
        opponent: &Point,
    ) -> Result<()>;
}

/// Declarative description of a learner, turned into a running instance by
/// [`LearnerSpec::build`].
#[derive(Debug, Clone, PartialEq)]
pub enum LearnerSpec {
    /// `initial` replaces the payoff's default round-one action.
    Ftl {
        initial: Option<Point>,
    },
    Ftrl {
        reg: Regularizer,
        eta: f64,
    },
    GaugeFtrl {
        eta: f64,
    },
    /// Hint `m_t = α_t ℓ_{t−1}`.
    OptimisticFtl {
        initial: Option<Point>,
    },
    /// Hint `m_t = α_t l_{t−1}`.
    OptimisticFtrl {
        reg: Regularizer,
        eta: f64,
    },
    BestResponse,
    BeTheLeader,
    Btrl {
        reg: Regularizer,
        eta: f64,
    },
    ScAdaGrad {
        start: Option<Point>,
    },
    ScAftl {
        initial: Option<Point>,
    },
}

impl LearnerSpec {
    pub fn kind(&self) -> LearnerKind {
        match self {
            LearnerSpec::Ftl { .. } => LearnerKind::Ftl,
            LearnerSpec::Ftrl { .. } => LearnerKind::Ftrl,
            LearnerSpec::GaugeFtrl { .. } => LearnerKind::GaugeFtrl,
            LearnerSpec::OptimisticFtl { .. } => LearnerKind::OptimisticFtl,
            LearnerSpec::OptimisticFtrl { .. } => LearnerKind::OptimisticFtrl,
            LearnerSpec::BestResponse => LearnerKind::BestResponse,
            LearnerSpec::BeTheLeader => LearnerKind::BeTheLeader,
            LearnerSpec::Btrl { .. } => LearnerKind::Btrl,
            LearnerSpec::ScAdaGrad { .. } => LearnerKind::ScAdaGrad,
            LearnerSpec::ScAftl { .. } => LearnerKind::ScAftl,
        }
    }

    pub fn is_prescient(&self) -> bool {
        self.kind().is_prescient()
    }

    /// Checks this description against the payoff and schedule and builds the learner.
    pub fn build(
        &self,
        side: Side,
        payoff: &dyn GamePayoff,
        schedule: &WeightSchedule,
    ) -> Result<Box<dyn Learner>> {
        let kind = self.kind();
        if kind.is_prescient() && side == Side::X {
            return Err(Error::Config(format!(
                "{} is prescient and can only play the y side",
                kind.name()
            )));
        }
        let needs_alpha_ahead = matches!(
            kind,
            LearnerKind::BeTheLeader
                | LearnerKind::Btrl
                | LearnerKind::OptimisticFtl
                | LearnerKind::OptimisticFtrl
        );
        if needs_alpha_ahead && schedule.is_adaptive() {
            return Err(Error::Config(format!(
                "{} needs the round weight before play, which the adaptive schedule cannot give",
                kind.name()
            )));
        }
        if kind == LearnerKind::ScAftl && !schedule.is_adaptive() {
            return Err(Error::Config(
                "SC-AFTL runs on the adaptive schedule only".into(),
            ));
        }
        let dim = match side {
            Side::X => payoff.dim_x(),
            Side::Y => payoff.dim_y(),
        };
        let default_start = match side {
            Side::X => payoff.initial_x(),
            Side::Y => payoff.initial_y(),
        };
        let start = |p: &Option<Point>| -> Result<Point> {
            let p = p.clone().unwrap_or_else(|| default_start.clone());
            check_dim("initial action", p.dim(), dim)?;
            Ok(p)
        };

        Ok(match self {
            LearnerSpec::Ftl { initial } => Box::new(LeaderLearner {
                side,
                optimistic: false,
                history: WeightedHistory::new(),
                last_opponent: None,
                initial: start(initial)?,
            }),
            LearnerSpec::OptimisticFtl { initial } => Box::new(LeaderLearner {
                side,
                optimistic: true,
                history: WeightedHistory::new(),
                last_opponent: None,
                initial: start(initial)?,
            }),
            LearnerSpec::ScAftl { initial } => {
                if side != Side::X {
                    return Err(Error::Config("SC-AFTL plays the x side only".into()));
                }
                Box::new(ScAftlLearner {
                    history: WeightedHistory::new(),
                    initial: start(initial)?,
                })
            }
            LearnerSpec::Ftrl { reg, eta } => LinearLearner::boxed(kind, side, payoff, *reg, *eta)?,
            LearnerSpec::GaugeFtrl { eta } => {
                LinearLearner::boxed(kind, side, payoff, Regularizer::SquaredGauge, *eta)?
            }
            LearnerSpec::OptimisticFtrl { reg, eta } => {
                LinearLearner::boxed(kind, side, payoff, *reg, *eta)?
            }
            LearnerSpec::Btrl { reg, eta } => LinearLearner::boxed(kind, side, payoff, *reg, *eta)?,
            LearnerSpec::BestResponse => Box::new(BestResponseLearner),
            LearnerSpec::BeTheLeader => Box::new(BeTheLeaderLearner {
                history: WeightedHistory::new(),
            }),
            LearnerSpec::ScAdaGrad { start: s } => {
                let set = side_set(payoff, side)
                    .ok_or_else(|| Error::Config("SC-AdaGrad needs a bounded decision set".into()))?
                    .clone();
                let sigma = match side {
                    Side::X => payoff.constants().sigma_x,
                    Side::Y => payoff.constants().sigma_y,
                };
                if !(sigma > 0.0) {
                    return Err(Error::Config(format!(
                        "SC-AdaGrad needs strongly convex losses, but sigma_{} = {sigma}",
                        side.name()
                    )));
                }
                let first = set.project(&start(s)?);
                Box::new(ScAdaGradLearner {
                    side,
                    sigma,
                    set,
                    state: ScAdaGradState::new(first),
                })
            }
        })
    }
}

fn side_set(payoff: &dyn GamePayoff, side: Side) -> Option<&ConvexSet> {
    match side {
        Side::X => payoff.x_set(),
        Side::Y => payoff.y_set(),
    }
}

fn loss_vector(payoff: &dyn GamePayoff, side: Side, opponent: &Point) -> Option<Point> {
    match side {
        Side::X => payoff.x_loss_vector(opponent),
        Side::Y => payoff.y_loss_vector(opponent),
    }
}

fn weighted_leader(
    payoff: &dyn GamePayoff,
    side: Side,
    history: &WeightedHistory,
) -> Result<Point> {
    match side {
        Side::X => payoff.argmin_weighted_x(history),
        Side::Y => payoff.argmax_weighted_y(history),
    }
}

fn alpha_now(ctx: &RoundContext<'_>, who: LearnerKind) -> Result<f64> {
    ctx.alpha.ok_or_else(|| {
        Error::Config(format!(
            "{} was not given the round weight before play",
            who.name()
        ))
    })
}

fn current_opponent<'a>(ctx: &RoundContext<'a>, who: LearnerKind) -> Result<&'a Point> {
    ctx.opponent_now.ok_or_else(|| {
        Error::Internal(format!("{} was not shown the current x action", who.name()))
    })
}

/// FTL and optimistic FTL through the payoff's weighted-argmin oracle.
#[derive(Debug)]
struct LeaderLearner {
    side: Side,
    optimistic: bool,
    history: WeightedHistory,
    last_opponent: Option<Point>,
    initial: Point,
}

impl Learner for LeaderLearner {
    fn kind(&self) -> LearnerKind {
        if self.optimistic {
            LearnerKind::OptimisticFtl
        } else {
            LearnerKind::Ftl
        }
    }

    fn side(&self) -> Side {
        self.side
    }

    fn act(&mut self, ctx: &RoundContext<'_>) -> Result<Point> {
        if self.optimistic {
            let hint = if self.last_opponent.is_some() {
                alpha_now(ctx, self.kind())?
            } else {
                0.0
            };
            optimistic_ftl_step(
                ctx.payoff,
                self.side,
                &self.history,
                hint,
                self.last_opponent.as_ref(),
                &self.initial,
            )
        } else {
            ftl_step(ctx.payoff, self.side, &self.history, &self.initial)
        }
    }

    fn observe(
        &mut self,
        _ctx: &RoundContext<'_>,
        alpha: f64,
        _own: &Point,
        opponent: &Point,
    ) -> Result<()> {
        self.history.push(alpha, opponent);
        self.last_opponent = Some(opponent.clone());
        Ok(())
    }
}

/// FTRL, gauge FTRL, optimistic FTRL and BTRL on linear losses.
#[derive(Debug)]
struct LinearLearner {
    kind: LearnerKind,
    side: Side,
    reg: Regularizer,
    eta: f64,
    set: ConvexSet,
    cumulative: Point,
    last_loss: Option<Point>,
}

impl LinearLearner {
    fn boxed(
        kind: LearnerKind,
        side: Side,
        payoff: &dyn GamePayoff,
        reg: Regularizer,
        eta: f64,
    ) -> Result<Box<dyn Learner>> {
        if !(eta > 0.0) || !eta.is_finite() {
            return Err(Error::Config(format!(
                "learning rate must be positive, got {eta}"
            )));
        }
        let set = side_set(payoff, side)
            .ok_or_else(|| Error::Config(format!("{} needs a bounded decision set", kind.name())))?
            .clone();
        let probe = match side {
            Side::X => payoff.initial_y(),
            Side::Y => payoff.initial_x(),
        };
        if loss_vector(payoff, side, &probe).is_none() {
            return Err(Error::Config(format!(
                "{} needs losses that are linear in the {} action",
                kind.name(),
                side.name()
            )));
        }
        if reg == Regularizer::SquaredGauge {
            set.gauge(&Point::zeros(set.dim()))
                .map_err(|e| Error::Config(format!("squared gauge regularizer: {e}")))?;
        }
        let cumulative = Point::zeros(set.dim());
        Ok(Box::new(LinearLearner {
            kind,
            side,
            reg,
            eta,
            set,
            cumulative,
            last_loss: None,
        }))
    }
}

impl Learner for LinearLearner {
    fn kind(&self) -> LearnerKind {
        self.kind
    }

    fn side(&self) -> Side {
        self.side
    }

    fn act(&mut self, ctx: &RoundContext<'_>) -> Result<Point> {
        match self.kind {
            LearnerKind::OptimisticFtrl => {
                let hint = match &self.last_loss {
                    Some(l) => l.scaled(alpha_now(ctx, self.kind)?),
                    None => Point::zeros(self.set.dim()),
                };
                optimistic_ftrl_step(&self.set, &self.cumulative, &hint, self.reg, self.eta)
            }
            LearnerKind::Btrl => {
                let x = current_opponent(ctx, self.kind)?;
                let v = loss_vector(ctx.payoff, self.side, x)
                    .ok_or_else(|| Error::Internal("loss vector vanished".into()))?;
                let mut through_now = self.cumulative.clone();
                through_now.axpy(alpha_now(ctx, self.kind)?, &v);
                btrl_step(&self.set, &through_now, self.reg, self.eta)
            }
            _ => ftrl_step(&self.set, &self.cumulative, self.reg, self.eta),
        }
    }

    fn observe(
        &mut self,
        ctx: &RoundContext<'_>,
        alpha: f64,
        _own: &Point,
        opponent: &Point,
    ) -> Result<()> {
        let v = loss_vector(ctx.payoff, self.side, opponent)
            .ok_or_else(|| Error::Internal("loss vector vanished".into()))?;
        self.cumulative.axpy(alpha, &v);
        self.last_loss = Some(v);
        Ok(())
    }
}

#[derive(Debug)]
struct BestResponseLearner;

impl Learner for BestResponseLearner {
    fn kind(&self) -> LearnerKind {
        LearnerKind::BestResponse
    }

    fn side(&self) -> Side {
        Side::Y
    }

    fn act(&mut self, ctx: &RoundContext<'_>) -> Result<Point> {
        let x = current_opponent(ctx, self.kind())?;
        Ok(best_response_step(ctx.payoff, x, Side::Y))
    }

    fn observe(&mut self, _: &RoundContext<'_>, _: f64, _: &Point, _: &Point) -> Result<()> {
        Ok(())
    }
}

#[derive(Debug)]
struct BeTheLeaderLearner {
    history: WeightedHistory,
}

impl Learner for BeTheLeaderLearner {
    fn kind(&self) -> LearnerKind {
        LearnerKind::BeTheLeader
    }

    fn side(&self) -> Side {
        Side::Y
    }

    fn act(&mut self, ctx: &RoundContext<'_>) -> Result<Point> {
        let x = current_opponent(ctx, self.kind())?;
        let alpha = alpha_now(ctx, self.kind())?;
        ctx.payoff.argmax_weighted_y(&self.history.with(alpha, x))
    }

    fn observe(
        &mut self,
        _: &RoundContext<'_>,
        alpha: f64,
        _: &Point,
        opponent: &Point,
    ) -> Result<()> {
        self.history.push(alpha, opponent);
        Ok(())
    }
}

/// Gradient descent on the weighted losses `α_t ℓ_t`, which are
/// `α_t σ`-strongly convex.
#[derive(Debug)]
struct ScAdaGradLearner {
    side: Side,
    sigma: f64,
    set: ConvexSet,
    state: ScAdaGradState,
}

impl Learner for ScAdaGradLearner {
    fn kind(&self) -> LearnerKind {
        LearnerKind::ScAdaGrad
    }

    fn side(&self) -> Side {
        self.side
    }

    fn act(&mut self, _ctx: &RoundContext<'_>) -> Result<Point> {
        Ok(self.state.current.clone())
    }

    fn observe(
        &mut self,
        ctx: &RoundContext<'_>,
        alpha: f64,
        own: &Point,
        opponent: &Point,
    ) -> Result<()> {
        let grad = match self.side {
            Side::X => ctx.payoff.grad_x(own, opponent),
            Side::Y => ctx.payoff.grad_y(opponent, own).scaled(-1.0),
        };
        sc_adagrad_step(
            &mut self.state,
            &grad.scaled(alpha),
            alpha * self.sigma,
            &self.set,
        )?;
        Ok(())
    }
}

/// FTL whose weights come from the adaptive schedule; the engine supplies
/// `α_t = ‖∇ℓ_t(x_t)‖⁻²` after the round.
#[derive(Debug)]
struct ScAftlLearner {
    history: WeightedHistory,
    initial: Point,
}

impl Learner for ScAftlLearner {
    fn kind(&self) -> LearnerKind {
        LearnerKind::ScAftl
    }

    fn side(&self) -> Side {
        Side::X
    }

    fn act(&mut self, ctx: &RoundContext<'_>) -> Result<Point> {
        if self.history.is_empty() {
            return Ok(self.initial.clone());
        }
        weighted_leader(ctx.payoff, Side::X, &self.history)
    }

    fn observe(
        &mut self,
        _: &RoundContext<'_>,
        alpha: f64,
        _: &Point,
        opponent: &Point,
    ) -> Result<()> {
        self.history.push(alpha, opponent);
        Ok(())
    }
}
