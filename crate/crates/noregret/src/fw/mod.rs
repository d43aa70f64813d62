//! Frank-Wolfe methods obtained as no-regret dynamics on the game
//! `g(x, y) = f*(x) − ⟨x, y⟩`, whose value is `−min_y f(y)`.

pub mod instances;
mod scenario;

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::game::{run_game, GameConfig, GameTrace};
use crate::learners::{gauge_ftrl_with, LearnerSpec, Regularizer};
use crate::objective::SmoothObjective;
use crate::payoff::{GameConstants, GamePayoff, WeightedHistory};
use crate::point::{check_dim, Point};
use crate::sets::{ConvexSet, CountingOracle, SetKind};
use crate::weights::WeightSchedule;

pub use scenario::{scenario_payoff, Scenario, ScenarioParams};

/// An objective, its feasible set and a feasible starting point.
#[derive(Debug, Clone)]
pub struct FwInstance {
    pub f: Arc<dyn SmoothObjective>,
    pub set: ConvexSet,
    pub y0: Point,
    /// `min_{y∈set} f(y)`, when known in closed form.
    pub f_min: Option<f64>,
    /// `l` and `sigma_x` describe `f`; `b` is the declared lower bound on `‖∇f‖` over the set.
    pub constants: GameConstants,
}

impl FwInstance {
    pub fn new(f: Arc<dyn SmoothObjective>, set: ConvexSet, y0: Point) -> Result<Self> {
        check_dim("objective", f.dim(), set.dim())?;
        check_dim("start point", y0.dim(), set.dim())?;
        if !set.contains(&y0, 1e-12) {
            return Err(Error::Domain(format!("start point {y0} is not feasible")));
        }
        let f_min = f.minimizer_over(&set).map(|y| f.value(&y));
        let reach = max_norm(&set);
        let constants = GameConstants {
            l: f.smoothness(),
            sigma_x: f.strong_convexity(),
            sigma_y: 0.0,
            g: (f.gradient(&Point::zeros(set.dim())).norm() + f.smoothness() * reach).max(1e-12),
            b: 0.0,
            d: set.diameter(),
        };
        constants.validate()?;
        Ok(FwInstance {
            f,
            set,
            y0,
            f_min,
            constants,
        })
    }

    /// Declares `‖∇f(y)‖ ≥ b` on the whole set and spot-checks it on a fixed
    /// sample of interior and boundary points.
    pub fn with_gradient_floor(mut self, b: f64) -> Result<Self> {
        if !(b > 0.0) || !b.is_finite() {
            return Err(Error::Config(format!(
                "gradient lower bound must be positive, got {b}"
            )));
        }
        let worst = self.sampled_min_gradient_norm(4000);
        if worst < b * (1.0 - 1e-12) {
            return Err(Error::Config(format!(
                "declared gradient lower bound B = {b} fails: ‖∇f‖ = {worst:e} at a sampled point"
            )));
        }
        self.constants.b = b;
        Ok(self)
    }

    pub fn with_f_min(mut self, f_min: f64) -> Self {
        self.f_min = Some(f_min);
        self
    }

    pub fn dim(&self) -> usize {
        self.set.dim()
    }

    /// `f(y) − f_min`, or an error when the optimum is unknown.
    pub fn error(&self, y: &Point) -> Result<f64> {
        let m = self
            .f_min
            .ok_or_else(|| Error::Unsupported("the instance has no known optimum".into()))?;
        Ok(self.f.value(y) - m)
    }

    /// Smallest `‖∇f‖` over a deterministic sample of the set.
    pub fn sampled_min_gradient_norm(&self, n: usize) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        let d = self.dim();
        let (lo, hi) = self.set.bounding_box();
        let mut worst = f64::INFINITY;
        let mut check = |y: &Point| worst = worst.min(self.f.gradient(y).norm());
        for _ in 0..n {
            let inside: Vec<f64> = (0..d).map(|i| rng.random_range(lo[i]..=hi[i])).collect();
            check(&self.set.project(&Point::raw(inside)));
            let dir: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
            check(&self.set.lin_opt(&Point::raw(dir)));
        }
        if let Some(y) = self.f.minimizer_over(&self.set) {
            check(&y);
        }
        check(&self.y0);
        worst
    }
}

// largest Euclidean norm of a point of the set
fn max_norm(set: &ConvexSet) -> f64 {
    match set.kind() {
        // ‖y‖₂ ≤ ‖y‖_p for p ≤ 2
        SetKind::L2Ball { r } | SetKind::LpBall { r, .. } => *r,
        SetKind::Box { lower, upper } => lower
            .iter()
            .zip(upper)
            .map(|(l, u)| l.abs().max(u.abs()).powi(2))
            .sum::<f64>()
            .sqrt(),
    }
}

/// The game `g(x, y) = f*(x) − ⟨x, y⟩` with `x` free and `y` in the instance's set.
///
/// Needs the conjugate of `f` in closed form. The x-player's weighted argmin
/// is `∇f` of the weighted mean of the y-history, so `f*` is only evaluated
/// when the payoff value itself is requested.
#[derive(Debug, Clone)]
pub struct FwGame {
    inst: FwInstance,
}

impl FwGame {
    pub fn new(inst: FwInstance) -> Result<Self> {
        let probe = Point::zeros(inst.dim());
        if inst.f.conjugate(&probe).is_none() || inst.f.conjugate_gradient(&probe).is_none() {
            return Err(Error::Unsupported(
                "the Frank-Wolfe game needs the conjugate of f in closed form".into(),
            ));
        }
        Ok(FwGame { inst })
    }

    pub fn instance(&self) -> &FwInstance {
        &self.inst
    }

    fn conj(&self, x: &Point) -> f64 {
        self.inst.f.conjugate(x).expect("checked at construction")
    }
}

impl GamePayoff for FwGame {
    fn dim_x(&self) -> usize {
        self.inst.dim()
    }

    fn dim_y(&self) -> usize {
        self.inst.dim()
    }

    fn value(&self, x: &Point, y: &Point) -> f64 {
        self.conj(x) - x.dot(y)
    }

    fn grad_x(&self, x: &Point, y: &Point) -> Point {
        self.inst
            .f
            .conjugate_gradient(x)
            .expect("checked at construction")
            .sub(y)
    }

    fn grad_y(&self, x: &Point, _y: &Point) -> Point {
        x.scaled(-1.0)
    }

    // argmin_x f*(x) − ⟨x, y⟩ = ∇f(y)
    fn best_response_x(&self, y: &Point) -> Point {
        self.inst.f.gradient(y)
    }

    fn best_response_y(&self, x: &Point) -> Point {
        self.inst.set.lin_opt(x)
    }

    fn argmin_weighted_x(&self, ys: &WeightedHistory) -> Result<Point> {
        Ok(self.inst.f.gradient(&ys.require_mean()?))
    }

    fn argmax_weighted_y(&self, xs: &WeightedHistory) -> Result<Point> {
        let sum = xs
            .sum()
            .ok_or_else(|| Error::Domain("weighted argmax over an empty history".into()))?;
        Ok(self.inst.set.lin_opt(sum))
    }

    fn constants(&self) -> &GameConstants {
        &self.inst.constants
    }

    fn x_set(&self) -> Option<&ConvexSet> {
        None
    }

    fn y_set(&self) -> Option<&ConvexSet> {
        Some(&self.inst.set)
    }

    fn y_loss_vector(&self, x: &Point) -> Option<Point> {
        Some(x.clone())
    }

    fn value_of_game(&self) -> Option<f64> {
        self.inst.f_min.map(|m| -m)
    }

    /// Coordinate range of `∇f` over the corners of the set's bounding box,
    /// which contains every x best response when `∇f` is separable and monotone.
    fn x_search_box(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        let (lo, hi) = self.inst.set.bounding_box();
        let d = lo.len();
        if d > 16 {
            return None;
        }
        let mut out_lo = vec![f64::INFINITY; d];
        let mut out_hi = vec![f64::NEG_INFINITY; d];
        for mask in 0..(1usize << d) {
            let corner: Vec<f64> = (0..d)
                .map(|i| if mask >> i & 1 == 1 { hi[i] } else { lo[i] })
                .collect();
            let g = self.inst.f.gradient(&Point::raw(corner));
            for i in 0..d {
                out_lo[i] = out_lo[i].min(g[i]);
                out_hi[i] = out_hi[i].max(g[i]);
            }
        }
        Some((out_lo, out_hi))
    }

    fn initial_x(&self) -> Point {
        self.inst.f.gradient(&self.inst.y0)
    }

    fn initial_y(&self) -> Point {
        self.inst.y0.clone()
    }
}

/// One iterate of a Frank-Wolfe style method.
#[derive(Debug, Clone, PartialEq)]
pub struct FwIterate {
    /// 1-based round.
    pub t: usize,
    pub point: Point,
    /// `f(point)`
    pub value: f64,
}

/// Step size of classic Frank-Wolfe at step `k ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepRule {
    /// `2/(k+1)`: the first step jumps to the first vertex. This is the rule
    /// the FTL-versus-best-response game reproduces exactly.
    GameAligned,
    /// `2/(k+2)`: the first iterate is `y0/3 + 2v₁/3`.
    Shifted,
}

/// Classic Frank-Wolfe from `y0` with the game-aligned step rule.
pub fn classic_fw(inst: &FwInstance, rounds: usize) -> Vec<FwIterate> {
    classic_fw_with(inst, rounds, StepRule::GameAligned)
}

/// `v_k = lin_opt(∇f(w_{k−1}))`, `w_k = (1−η_k) w_{k−1} + η_k v_k`.
pub fn classic_fw_with(inst: &FwInstance, rounds: usize, rule: StepRule) -> Vec<FwIterate> {
    let mut w = inst.y0.clone();
    let mut out = Vec::with_capacity(rounds);
    for k in 1..=rounds {
        let v = inst.set.lin_opt(&inst.f.gradient(&w));
        let eta = match rule {
            StepRule::GameAligned => 2.0 / (k as f64 + 1.0),
            StepRule::Shifted => 2.0 / (k as f64 + 2.0),
        };
        w = w.scaled(1.0 - eta);
        w.axpy(eta, &v);
        out.push(FwIterate {
            t: k,
            value: inst.f.value(&w),
            point: w.clone(),
        });
    }
    out
}

/// Frank-Wolfe as a game: FTL on the x side starting from `∇f(y0)`, best
/// response on the y side, weights `α_t = t`. The running averages `ȳ_t`
/// coincide with [`classic_fw`].
pub fn fw_as_game(inst: &FwInstance, rounds: usize) -> Result<GameTrace> {
    let payoff = Arc::new(FwGame::new(inst.clone())?);
    let cfg = GameConfig::new(
        payoff,
        LearnerSpec::Ftl { initial: None },
        LearnerSpec::BestResponse,
        WeightSchedule::linear(),
        rounds,
    );
    run_game(&cfg)
}

/// One round of the accelerated method.
#[derive(Debug, Clone, PartialEq)]
pub struct NewFwStep {
    pub t: usize,
    /// `y_t = ρ_t ŷ_t`
    pub y: Point,
    /// `ȳ_t`, the `α`-weighted average of `y_1..y_t`.
    pub y_bar: Point,
    /// `f(ȳ_t)`
    pub value: f64,
}

#[derive(Debug, Clone)]
pub struct NewFwRun {
    pub steps: Vec<NewFwStep>,
    pub eta: f64,
    pub oracle_calls: usize,
}

impl NewFwRun {
    pub fn last(&self) -> &NewFwStep {
        self.steps.last().expect("at least one round")
    }
}

/// `η = β/(16 L (1 + L/σ))`, the rate that makes the accelerated bound hold.
pub fn auto_eta(inst: &FwInstance) -> Result<f64> {
    let beta = inst.set.beta();
    if !(beta > 0.0) {
        return Err(Error::Unsupported(
            "the accelerated method needs a set whose squared gauge is strongly convex".into(),
        ));
    }
    let l = inst.f.smoothness();
    let sigma = inst.f.strong_convexity();
    if !(sigma > 0.0) {
        return Err(Error::Unsupported(
            "the accelerated method needs a strongly convex objective".into(),
        ));
    }
    Ok(beta / (16.0 * l * (1.0 + l / sigma)))
}

/// The accelerated projection-free method: optimistic FTL for x with the
/// last weight doubled, squared-gauge BTRL for y. One linear minimization per
/// round. `eta = None` uses [`auto_eta`].
pub fn new_fw(inst: &FwInstance, rounds: usize, eta: Option<f64>) -> Result<NewFwRun> {
    let auto = auto_eta(inst)?;
    let eta = eta.unwrap_or(auto);
    if !(eta > 0.0) || !eta.is_finite() {
        return Err(Error::Config(format!(
            "learning rate must be positive, got {eta}"
        )));
    }
    if rounds == 0 {
        return Err(Error::Config("a run needs at least one round".into()));
    }
    let oracle = CountingOracle::new(&inst.set);
    let d = inst.dim();
    let mut y_sum = Point::zeros(d);
    let mut loss_sum = Point::zeros(d);
    let mut a_total = 0.0;
    let mut prev: Option<Point> = None;
    let mut steps = Vec::with_capacity(rounds);
    for t in 1..=rounds {
        let alpha = t as f64;
        // α′ adds this round's weight to the previous action
        let x = match &prev {
            None => inst.f.gradient(&inst.y0),
            Some(p) => {
                let mut s = y_sum.clone();
                s.axpy(alpha, p);
                inst.f.gradient(&s.scaled(1.0 / (a_total + alpha)))
            }
        };
        loss_sum.axpy(alpha, &x);
        let y = gauge_ftrl_with(&oracle, &loss_sum, eta);
        y_sum.axpy(alpha, &y);
        a_total += alpha;
        let y_bar = y_sum.scaled(1.0 / a_total);
        steps.push(NewFwStep {
            t,
            value: inst.f.value(&y_bar),
            y: y.clone(),
            y_bar,
        });
        prev = Some(y);
    }
    Ok(NewFwRun {
        steps,
        eta,
        oracle_calls: oracle.calls(),
    })
}

/// [`new_fw`] run through the generic game engine, for cross-checking.
pub fn new_fw_game(inst: &FwInstance, rounds: usize, eta: Option<f64>) -> Result<GameTrace> {
    let eta = match eta {
        Some(e) => e,
        None => auto_eta(inst)?,
    };
    let payoff = Arc::new(FwGame::new(inst.clone())?);
    let cfg = GameConfig::new(
        payoff,
        LearnerSpec::OptimisticFtl { initial: None },
        LearnerSpec::Btrl {
            reg: Regularizer::SquaredGauge,
            eta,
        },
        WeightSchedule::linear(),
        rounds,
    );
    run_game(&cfg)
}

/// Linear-rate Frank-Wolfe: SC-AFTL for x with `α_t = ‖∇ℓ_t(x_t)‖⁻²`,
/// best response for y.
///
/// Requires a strongly convex set and a declared gradient lower bound
/// ([`FwInstance::with_gradient_floor`]). The run stops with a
/// degenerate-gradient error when a loss gradient falls below the schedule floor.
pub fn linear_rate_fw(inst: &FwInstance, rounds: usize) -> Result<GameTrace> {
    linear_rate_fw_with(inst, rounds, WeightSchedule::adaptive())
}

pub fn linear_rate_fw_with(
    inst: &FwInstance,
    rounds: usize,
    schedule: WeightSchedule,
) -> Result<GameTrace> {
    if !(inst.set.lambda() > 0.0) {
        return Err(Error::Unsupported(
            "the linear rate needs a strongly convex set".into(),
        ));
    }
    if !(inst.constants.b > 0.0) {
        return Err(Error::Config(
            "the linear rate needs a declared lower bound B > 0 on the gradient norm".into(),
        ));
    }
    let payoff = Arc::new(FwGame::new(inst.clone())?);
    let cfg = GameConfig::new(
        payoff,
        LearnerSpec::ScAftl { initial: None },
        LearnerSpec::BestResponse,
        schedule,
        rounds,
    );
    run_game(&cfg)
}

/// SC-AdaGrad for x against best response for y on the adaptive schedule.
/// `x1 = None` starts from the payoff's default x action.
pub fn sc_adagrad_game(
    payoff: Arc<dyn GamePayoff>,
    rounds: usize,
    x1: Option<Point>,
) -> Result<GameTrace> {
    let cfg = GameConfig::new(
        payoff,
        LearnerSpec::ScAdaGrad { start: x1 },
        LearnerSpec::BestResponse,
        WeightSchedule::adaptive(),
        rounds,
    );
    run_game(&cfg)
}

/// The sequence `θ_t = α_t σ_x` and step sizes `η_t = 1/Σθ` an SC-AdaGrad run used.
pub fn sc_adagrad_schedule(trace: &GameTrace, sigma_x: f64) -> Vec<(f64, f64)> {
    let mut sum = 0.0;
    trace
        .alphas
        .iter()
        .map(|a| {
            let theta = a * sigma_x;
            sum += theta;
            (theta, 1.0 / sum)
        })
        .collect()
}

/// `f(ȳ_t)` for every prefix of a Frank-Wolfe game trace.
pub fn fw_values(inst: &FwInstance, trace: &GameTrace) -> Vec<f64> {
    trace
        .y_bar_prefixes()
        .iter()
        .map(|y| inst.f.value(y))
        .collect()
}
