//! Randomized checks of the regret bounds, the set lemmas and the gauge FTRL
//! closed form. Every suite is driven by one seed.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::fw::instances::random_unit;
use crate::learners::{ftl_step, ftrl_step, sc_adagrad_step, Regularizer, ScAdaGradState, Side};
use crate::payoff::{GamePayoff, QuadBilinear, WeightedHistory};
use crate::point::Point;
use crate::sets::{lp_norm, strongly_convex_br_lipschitz_check, ConvexSet, SetKind};

use super::Check;

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Uniform point in the Euclidean ball of radius `r`.
fn in_ball<R: Rng>(rng: &mut R, d: usize, r: f64) -> Point {
    random_unit(rng, d).scaled(r * rng.random::<f64>().powf(1.0 / d as f64))
}

/// Largest `measured − bound` over a set of streams.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundSlack {
    pub worst_excess: f64,
    pub streams: usize,
}

impl BoundSlack {
    fn new() -> Self {
        BoundSlack {
            worst_excess: f64::NEG_INFINITY,
            streams: 0,
        }
    }

    fn record(&mut self, measured: f64, bound: f64) {
        self.worst_excess = self.worst_excess.max(measured - bound);
        self.streams += 1;
    }

    pub fn holds(&self, tol: f64) -> bool {
        self.worst_excess <= tol
    }
}

/// FTL on `ℓ_t(x) = (σ_t/2)‖x − a_t‖²`. Returns the slack against
/// `½ Σ‖v_t‖²/Σ_{s≤t}σ_s` and against `G²/(2σ) (log T + 1)`.
pub fn ftl_strongly_convex_streams(
    seed: u64,
    streams: usize,
    rounds: usize,
) -> Result<(BoundSlack, BoundSlack)> {
    let mut rng = rng_for(seed, 1);
    let mut sharp = BoundSlack::new();
    let mut loose = BoundSlack::new();
    for _ in 0..streams {
        let d = rng.random_range(2..=5);
        // α_t g(x, a_t) equals ℓ_t(x) up to a constant when α_t = σ_t
        let big = ConvexSet::l2_ball(d, 1e6)?;
        let game = QuadBilinear::new(
            1.0,
            Point::zeros(d),
            -DMatrix::identity(d, d),
            1.0,
            Point::zeros(d),
            big.clone(),
            big,
        )?;
        let mut hist = WeightedHistory::new();
        let mut sigma_sum = 0.0;
        let mut sigma_min = f64::INFINITY;
        let mut g_max: f64 = 0.0;
        let mut bound = 0.0;
        let mut played = 0.0;
        let mut stream = Vec::with_capacity(rounds);
        for _ in 0..rounds {
            let sigma = rng.random_range(0.5..2.0);
            let a = in_ball(&mut rng, d, 1.0);
            let x = ftl_step(&game, Side::X, &hist, &Point::zeros(d))?;
            let v = x.sub(&a).scaled(sigma);
            played += 0.5 * sigma * x.dist(&a).powi(2);
            sigma_sum += sigma;
            sigma_min = sigma_min.min(sigma);
            g_max = g_max.max(v.norm());
            bound += 0.5 * v.dot(&v) / sigma_sum;
            hist.push(sigma, &a);
            stream.push((sigma, a));
        }
        let best = hist.mean().expect("non-empty");
        let comparator: f64 = stream
            .iter()
            .map(|(s, a)| 0.5 * s * best.dist(a).powi(2))
            .sum();
        let regret = played - comparator;
        sharp.record(regret, bound);
        loose.record(
            regret,
            g_max * g_max / (2.0 * sigma_min) * ((rounds as f64).ln() + 1.0),
        );
    }
    Ok((sharp, loose))
}

fn biased_losses<R: Rng>(rng: &mut R, d: usize, rounds: usize, g: f64) -> Vec<Point> {
    let bias = random_unit(rng, d).scaled(rng.random_range(0.0..1.5));
    (0..rounds)
        .map(|_| {
            let v = bias.add(&random_unit(rng, d));
            v.scaled(g * rng.random::<f64>() / v.norm().max(1e-12))
        })
        .collect()
}

/// FTRL with `R = ‖x‖²` on `L2Ball(r)` against `D/η + (η/2)Σ‖θ_t‖²` with `D = r²`.
pub fn ftrl_streams(seed: u64, streams: usize, rounds: usize) -> Result<BoundSlack> {
    let mut rng = rng_for(seed, 2);
    let mut slack = BoundSlack::new();
    for _ in 0..streams {
        let d = rng.random_range(2..=5);
        let r = rng.random_range(0.5..2.0);
        let g = rng.random_range(0.5..3.0);
        let set = ConvexSet::l2_ball(d, r)?;
        let eta = rng.random_range(0.2..5.0) * r / (g * (rounds as f64).sqrt());
        let losses = biased_losses(&mut rng, d, rounds, g);
        let mut cum = Point::zeros(d);
        let mut played = 0.0;
        let mut sq = 0.0;
        for th in &losses {
            let x = ftrl_step(&set, &cum, Regularizer::SquaredL2, eta)?;
            played += th.dot(&x);
            sq += th.dot(th);
            cum = cum.add(th);
        }
        // min over the ball of ⟨L, x⟩ is −r‖L‖
        let regret = played + r * cum.norm();
        slack.record(regret, r * r / eta + 0.5 * eta * sq);
    }
    Ok(slack)
}

/// Optimistic FTRL with noisy hints against `(R(u) − R(0))/η + (η/β)Σ‖θ_t − m_t‖²`,
/// half the streams with `R = ‖x‖²` and half with the squared gauge.
pub fn optimistic_ftrl_streams(seed: u64, streams: usize, rounds: usize) -> Result<BoundSlack> {
    let mut rng = rng_for(seed, 3);
    let mut slack = BoundSlack::new();
    for k in 0..streams {
        let d = rng.random_range(2..=5);
        let r = rng.random_range(0.5..2.0);
        let g = rng.random_range(0.5..3.0);
        let set = ConvexSet::l2_ball(d, r)?;
        let (reg, r_top, beta) = if k % 2 == 0 {
            (Regularizer::SquaredL2, r * r, 2.0)
        } else {
            (Regularizer::SquaredGauge, 1.0, set.beta())
        };
        let eta = rng.random_range(0.2..5.0) * r / (g * (rounds as f64).sqrt());
        let losses = biased_losses(&mut rng, d, rounds, g);
        let noise = rng.random_range(0.0..1.0);
        let mut cum = Point::zeros(d);
        let mut prev = Point::zeros(d);
        let mut played = 0.0;
        let mut sq = 0.0;
        for th in &losses {
            let hint = prev.add(&random_unit(&mut rng, d).scaled(noise * g));
            let x = crate::learners::optimistic_ftrl_step(&set, &cum, &hint, reg, eta)?;
            played += th.dot(&x);
            let diff = th.sub(&hint);
            sq += diff.dot(&diff);
            cum = cum.add(th);
            prev = th.clone();
        }
        let regret = played + r * cum.norm();
        slack.record(regret, r_top / eta + eta / beta * sq);
    }
    Ok(slack)
}

/// SC-AdaGrad on projected `(σ_t/2)‖x − a_t‖²` over `L2Ball(1)` against
/// `½ Σ η_t ‖∇ℓ_t(x_t)‖²`.
pub fn sc_adagrad_streams(seed: u64, streams: usize, rounds: usize) -> Result<BoundSlack> {
    let mut rng = rng_for(seed, 4);
    let mut slack = BoundSlack::new();
    for _ in 0..streams {
        let d = rng.random_range(2..=5);
        let set = ConvexSet::l2_ball(d, 1.0)?;
        let mut state = ScAdaGradState::new(in_ball(&mut rng, d, 1.0));
        let shift = random_unit(&mut rng, d).scaled(rng.random_range(0.0..1.5));
        let mut played = 0.0;
        let mut bound = 0.0;
        let mut hist = WeightedHistory::new();
        let mut stream = Vec::with_capacity(rounds);
        for _ in 0..rounds {
            let sigma = rng.random_range(0.2..2.0);
            let a = shift.add(&in_ball(&mut rng, d, 1.0));
            let x = state.current.clone();
            let grad = x.sub(&a).scaled(sigma);
            played += 0.5 * sigma * x.dist(&a).powi(2);
            sc_adagrad_step(&mut state, &grad, sigma, &set)?;
            bound += 0.5 * state.eta() * grad.dot(&grad);
            hist.push(sigma, &a);
            stream.push((sigma, a));
        }
        let best = set.project(&hist.mean().expect("non-empty"));
        let comparator: f64 = stream
            .iter()
            .map(|(s, a)| 0.5 * s * best.dist(a).powi(2))
            .sum();
        slack.record(played - comparator, bound);
    }
    Ok(slack)
}

/// All four regret-bound families.
pub fn regret_bound_suite(
    seed: u64,
    streams: usize,
    rounds: usize,
    tol: f64,
) -> Result<Vec<Check>> {
    let (sharp, loose) = ftl_strongly_convex_streams(seed, streams, rounds)?;
    let ftrl = ftrl_streams(seed, streams, rounds)?;
    let oftrl = optimistic_ftrl_streams(seed, streams, rounds)?;
    let sc = sc_adagrad_streams(seed, streams, rounds)?;
    let line = |s: &BoundSlack| {
        format!(
            "worst regret - bound = {:.3e} over {} streams",
            s.worst_excess, s.streams
        )
    };
    Ok(vec![
        Check::pass_if(
            "FTL strongly convex bound (sum form)",
            sharp.holds(tol),
            line(&sharp),
        ),
        Check::pass_if(
            "FTL strongly convex bound (log form)",
            loose.holds(tol),
            line(&loose),
        ),
        Check::pass_if("FTRL bound", ftrl.holds(tol), line(&ftrl)),
        Check::pass_if("optimistic FTRL bound", oftrl.holds(tol), line(&oftrl)),
        Check::pass_if("SC-AdaGrad logarithmic bound", sc.holds(tol), line(&sc)),
    ])
}

fn lemma_sets<R: Rng>(rng: &mut R) -> Result<Vec<ConvexSet>> {
    let mut sets = Vec::new();
    for &r in &[0.5, 1.0, 2.0] {
        sets.push(ConvexSet::l2_ball(rng.random_range(2..=4), r)?);
    }
    for &p in &[1.1, 1.25, 1.5, 1.75, 1.9] {
        sets.push(ConvexSet::lp_ball(
            rng.random_range(2..=4),
            p,
            rng.random_range(0.7..1.5),
        )?);
    }
    sets.push(ConvexSet::cube(3, 1.0)?);
    sets.push(ConvexSet::boxed(vec![-0.5, -2.0], vec![2.0, 0.3])?);
    Ok(sets)
}

/// Gauge identities, the squared-gauge strong convexity of `ℓ_p` balls, the
/// Lipschitz best response lemma and the strong convexity of a max-envelope.
pub fn set_lemma_suite(
    seed: u64,
    identity_tol: f64,
    midpoint_tol: f64,
    envelope_tol: f64,
) -> Result<Vec<Check>> {
    let mut rng = rng_for(seed, 5);
    let sets = lemma_sets(&mut rng)?;
    let mut homog: f64 = 0.0;
    let mut boundary: f64 = 0.0;
    let mut member_bad = 0usize;
    let mut member_n = 0usize;
    let mut mid_excess = f64::NEG_INFINITY;
    for set in &sets {
        let d = set.dim();
        let (lo, hi) = set.bounding_box();
        let sample = |rng: &mut ChaCha8Rng, stretch: f64| {
            Point::raw(
                (0..d)
                    .map(|i| stretch * rng.random_range(lo[i]..=hi[i]))
                    .collect(),
            )
        };
        for _ in 0..200 {
            let x = sample(&mut rng, 1.5);
            let rho = rng.random_range(0.0..3.0);
            let gx = set.gauge(&x)?;
            homog = homog.max((set.gauge(&x.scaled(rho))? - rho * gx).abs() / (1.0 + rho * gx));
            let b = set.lin_opt(&random_unit(&mut rng, d));
            boundary = boundary.max((set.gauge(&b)? - 1.0).abs());
            if (gx - 1.0).abs() > 1e-9 {
                member_n += 1;
                if (gx <= 1.0) != set.contains(&x, 0.0) {
                    member_bad += 1;
                }
            }
            if let SetKind::LpBall { .. } | SetKind::L2Ball { .. } = set.kind() {
                let u = sample(&mut rng, 1.2);
                let v = sample(&mut rng, 1.2);
                let m = u.add(&v).scaled(0.5);
                let g2 = |p: &Point| set.gauge(p).map(|g| g * g);
                let lhs = g2(&m)?;
                let rhs = 0.5 * (g2(&u)? + g2(&v)?) - set.beta() / 8.0 * u.dist(&v).powi(2);
                mid_excess = mid_excess.max(lhs - rhs);
            }
        }
    }

    let mut violations = 0usize;
    let mut pairs = 0usize;
    for &p in &[1.1, 1.3, 1.5, 1.7, 2.0] {
        let set = ConvexSet::lp_ball(2, p, rng.random_range(0.5..2.0))?;
        for _ in 0..200 {
            let a = random_unit(&mut rng, 2).scaled(rng.random_range(0.05..3.0));
            // half the pairs are close together, where the lemma is tightest
            let b = if rng.random::<bool>() {
                a.add(&random_unit(&mut rng, 2).scaled(rng.random_range(1e-4..0.1)))
            } else {
                random_unit(&mut rng, 2).scaled(rng.random_range(0.05..3.0))
            };
            pairs += 1;
            if !strongly_convex_br_lipschitz_check(&set, &a, &b)? {
                violations += 1;
            }
        }
    }

    let env_excess = envelope_midpoint_excess(&mut rng)?;

    Ok(vec![
        Check::pass_if(
            "gauge homogeneity",
            homog <= identity_tol,
            format!("max relative error {homog:.2e} over {} sets", sets.len()),
        ),
        Check::pass_if(
            "gauge is 1 on the boundary",
            boundary <= identity_tol,
            format!("max |gauge - 1| = {boundary:.2e}"),
        ),
        Check::pass_if(
            "gauge <= 1 iff member",
            member_bad == 0,
            format!("{member_bad} disagreements in {member_n} points"),
        ),
        Check::pass_if(
            "squared gauge strong convexity of lp balls",
            mid_excess <= midpoint_tol,
            format!("worst midpoint excess {mid_excess:.2e}"),
        ),
        Check::pass_if(
            "Lipschitz best response on strongly convex sets",
            violations == 0,
            format!("{violations} violations in {pairs} pairs"),
        ),
        Check::pass_if(
            "max-envelope keeps the x strong convexity",
            env_excess <= envelope_tol,
            format!("worst midpoint excess {env_excess:.2e}"),
        ),
    ])
}

// s(x) = max over a y-grid of g(x, y) for a quadratic-bilinear payoff; each
// g(·, y) is σ_x-strongly convex, so s must satisfy the midpoint inequality.
fn envelope_midpoint_excess(rng: &mut ChaCha8Rng) -> Result<f64> {
    let m = DMatrix::from_fn(2, 2, |_, _| rng.random_range(-2.0..2.0));
    let sigma_x = rng.random_range(0.5..2.0);
    let game = QuadBilinear::new(
        sigma_x,
        Point::of(&[0.3, -0.2]),
        m,
        0.5,
        Point::of(&[0.1, 0.4]),
        ConvexSet::l2_ball(2, 1.0)?,
        ConvexSet::l2_ball(2, 1.0)?,
    )?;
    let n = 61;
    let grid: Vec<Point> = (0..n * n)
        .map(|k| {
            let (i, j) = (k / n, k % n);
            Point::raw(vec![
                -1.0 + 2.0 * i as f64 / (n - 1) as f64,
                -1.0 + 2.0 * j as f64 / (n - 1) as f64,
            ])
        })
        .filter(|p| p.norm() <= 1.0)
        .collect();
    let s = |x: &Point| {
        grid.iter()
            .map(|y| game.value(x, y))
            .fold(f64::NEG_INFINITY, f64::max)
    };
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..200 {
        let u = in_ball(rng, 2, 1.0);
        let v = in_ball(rng, 2, 1.0);
        let mid = u.add(&v).scaled(0.5);
        let rhs = 0.5 * (s(&u) + s(&v)) - sigma_x / 8.0 * u.dist(&v).powi(2);
        worst = worst.max(s(&mid) - rhs);
    }
    Ok(worst)
}

/// `η⟨L, x⟩ + γ(x)²` minimized over a grid of spacing `h` on a 2-D ball.
///
/// The gauge is evaluated from the norm directly rather than through the set
/// oracle. On each grid column the feasible points form an interval on which
/// the objective is a sampled convex function, so the column minimum is found
/// by bisection on forward differences.
pub fn gauge_objective_grid_min(
    set: &ConvexSet,
    l: &Point,
    eta: f64,
    h: f64,
) -> Option<(f64, Point)> {
    let (p, r) = match set.kind() {
        SetKind::L2Ball { r } => (2.0, *r),
        SetKind::LpBall { p, r } => (*p, *r),
        SetKind::Box { .. } => return None,
    };
    if set.dim() != 2 {
        return None;
    }
    let gauge = |a: f64, b: f64| (a.abs().powf(p) + b.abs().powf(p)).powf(1.0 / p) / r;
    let obj = |a: f64, b: f64| eta * (l[0] * a + l[1] * b) + gauge(a, b).powi(2);
    let n = (2.0 * r / h).round() as i64;
    let coord = |k: i64| -r + 2.0 * r * k as f64 / n as f64;
    let mut best = (f64::INFINITY, Point::zeros(2));
    for i in 0..=n {
        let a = coord(i);
        let room = r.powf(p) - a.abs().powf(p);
        if room < 0.0 {
            continue;
        }
        let b_max = room.powf(1.0 / p);
        let mut lo = (((-b_max + r) / (2.0 * r)) * n as f64).ceil() as i64;
        let mut hi = (((b_max + r) / (2.0 * r)) * n as f64).floor() as i64;
        while lo <= hi && gauge(a, coord(lo)) > 1.0 {
            lo += 1;
        }
        while hi >= lo && gauge(a, coord(hi)) > 1.0 {
            hi -= 1;
        }
        if lo > hi {
            continue;
        }
        // first index whose forward difference is nonnegative
        let (mut left, mut right) = (lo, hi);
        while left < right {
            let mid = (left + right) / 2;
            if obj(a, coord(mid + 1)) - obj(a, coord(mid)) >= 0.0 {
                right = mid;
            } else {
                left = mid + 1;
            }
        }
        let v = obj(a, coord(left));
        if v < best.0 {
            best = (v, Point::raw(vec![a, coord(left)]));
        }
    }
    Some(best)
}

/// Gauge FTRL closed form against the grid minimum on 2-D `L2` and `ℓ_{1.5}`
/// balls, for `count` random loss vectors per ball. Returns the largest
/// objective difference.
pub fn gauge_oracle_gap(seed: u64, count: usize, h: f64) -> Result<f64> {
    let mut rng = rng_for(seed, 6);
    let mut worst: f64 = 0.0;
    for set in [
        ConvexSet::l2_ball(2, 1.0)?,
        ConvexSet::lp_ball(2, 1.5, 1.0)?,
    ] {
        for _ in 0..count {
            let l = random_unit(&mut rng, 2).scaled(rng.random_range(0.05..6.0));
            let eta = rng.random_range(0.2..2.0);
            let x = crate::learners::gauge_ftrl_step(&set, &l, eta)?;
            let closed = eta * l.dot(&x) + set.gauge(&x)?.powi(2);
            let (grid, _) = gauge_objective_grid_min(&set, &l, eta, h).expect("2-D ball");
            worst = worst.max((grid - closed).abs());
        }
    }
    Ok(worst)
}

/// `ℓ_p` norm helper re-exported for suites that build their own oracles.
pub fn norm_p(x: &Point, p: f64) -> f64 {
    lp_norm(x.coords(), p)
}
