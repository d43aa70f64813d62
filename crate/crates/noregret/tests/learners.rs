use std::sync::Arc;

use nalgebra::DMatrix;
use noregret::fw::instances::quadratic_l2;
use noregret::fw::FwGame;
use noregret::game::{run_game, GameConfig};
use noregret::learners::{
    best_response_step, btrl_step, ftl_step, ftrl_step, gauge_ftrl_step, optimistic_ftl_step,
    optimistic_ftrl_step, sc_aftl_step, LearnerSpec, Regularizer, ScAftlState, Side,
};
use noregret::payoff::{Bilinear, GamePayoff, WeightedHistory};
use noregret::sets::ConvexSet;
use noregret::weights::WeightSchedule;
use noregret::{Error, Point};

fn pt(v: &[f64]) -> Point {
    Point::of(v)
}

// minimum of η⟨L, x⟩ + R(x) over the unit disc on a grid of spacing 1e-3
fn disc_grid_min(l: &Point, eta: f64, reg: impl Fn(&Point) -> f64) -> (f64, Point) {
    let n = 2001;
    let mut best = (f64::INFINITY, Point::zeros(2));
    for i in 0..n {
        for j in 0..n {
            let x = pt(&[
                -1.0 + 2.0 * i as f64 / (n - 1) as f64,
                -1.0 + 2.0 * j as f64 / (n - 1) as f64,
            ]);
            if x.norm() > 1.0 {
                continue;
            }
            let v = eta * l.dot(&x) + reg(&x);
            if v < best.0 {
                best = (v, x);
            }
        }
    }
    best
}

// argmin over x of Σ w_s g(x, y_s) by gradient descent on central differences
fn numeric_argmin_x(payoff: &dyn GamePayoff, terms: &[(f64, Point)], start: &Point) -> Point {
    let obj = |x: &Point| {
        terms
            .iter()
            .map(|(w, y)| w * payoff.value(x, y))
            .sum::<f64>()
    };
    let total: f64 = terms.iter().map(|(w, _)| w).sum();
    let mut x = start.clone();
    let h = 1e-6;
    for _ in 0..2000 {
        let g: Vec<f64> = (0..x.dim())
            .map(|i| {
                let mut a = x.clone().into_vec();
                let mut b = a.clone();
                a[i] += h;
                b[i] -= h;
                (obj(&pt(&a)) - obj(&pt(&b))) / (2.0 * h)
            })
            .collect();
        x = x.sub(&pt(&g).scaled(0.5 / total));
    }
    x
}

#[test]
fn ftrl_examples_match_the_grid() {
    let ball = ConvexSet::l2_ball(2, 1.0).unwrap();
    let sq = |x: &Point| x.dot(x);
    for (l, want) in [([4.0, 0.0], [-1.0, 0.0]), ([1.0, 0.0], [-0.5, 0.0])] {
        let l = pt(&l);
        let got = ftrl_step(&ball, &l, Regularizer::SquaredL2, 1.0).unwrap();
        assert!(got.dist(&pt(&want)) < 1e-12);
        let (v, _) = disc_grid_min(&l, 1.0, sq);
        assert!((l.dot(&got) + sq(&got) - v).abs() < 2e-3);
    }
    assert_eq!(
        ftrl_step(&ball, &Point::zeros(2), Regularizer::SquaredL2, 1.0).unwrap(),
        Point::zeros(2)
    );
}

#[test]
fn gauge_ftrl_examples_match_the_grid() {
    let ball = ConvexSet::l2_ball(2, 1.0).unwrap();
    let g2 = |x: &Point| ball.gauge(x).unwrap().powi(2);
    for (l, want) in [([3.0, 0.0], [-1.0, 0.0]), ([1.0, 0.0], [-0.5, 0.0])] {
        let l = pt(&l);
        let got = gauge_ftrl_step(&ball, &l, 1.0).unwrap();
        assert!(got.dist(&pt(&want)) < 1e-12);
        let (v, _) = disc_grid_min(&l, 1.0, g2);
        assert!((l.dot(&got) + g2(&got) - v).abs() < 2e-3);
        // the prescient variant with the same cumulative loss gives the same point
        assert_eq!(
            btrl_step(&ball, &l, Regularizer::SquaredGauge, 1.0).unwrap(),
            got
        );
    }
    assert_eq!(
        gauge_ftrl_step(&ball, &Point::zeros(2), 1.0).unwrap(),
        Point::zeros(2)
    );
    let cube = ConvexSet::boxed(vec![0.0, 0.0], vec![1.0, 1.0]).unwrap();
    assert!(matches!(
        gauge_ftrl_step(&cube, &pt(&[1.0, 0.0]), 1.0),
        Err(Error::Unsupported(_))
    ));
}

#[test]
fn optimistic_ftrl_reductions() {
    let ball = ConvexSet::l2_ball(2, 1.0).unwrap();
    let l = pt(&[1.0, 0.0]);
    for reg in [Regularizer::SquaredL2, Regularizer::SquaredGauge] {
        let plain = ftrl_step(&ball, &l, reg, 0.7).unwrap();
        assert_eq!(
            optimistic_ftrl_step(&ball, &l, &Point::zeros(2), reg, 0.7).unwrap(),
            plain
        );
        let now = pt(&[0.3, -0.4]);
        let prescient = btrl_step(&ball, &l.add(&now), reg, 0.7).unwrap();
        assert_eq!(
            optimistic_ftrl_step(&ball, &l, &now, reg, 0.7).unwrap(),
            prescient
        );
    }
    let got =
        optimistic_ftrl_step(&ball, &l, &pt(&[2.0, 0.0]), Regularizer::SquaredGauge, 1.0).unwrap();
    let g2 = |x: &Point| ball.gauge(x).unwrap().powi(2);
    let (v, _) = disc_grid_min(&pt(&[3.0, 0.0]), 1.0, g2);
    assert!(got.dist(&pt(&[-1.0, 0.0])) < 1e-12);
    assert!((3.0 * got[0] + g2(&got) - v).abs() < 2e-3);
}

fn fw_game(c: &[f64]) -> FwGame {
    FwGame::new(quadratic_l2(c, 1.0, None).unwrap()).unwrap()
}

#[test]
fn ftl_on_the_fw_game_is_the_gradient_at_the_average() {
    let y0 = [0.2, -0.1];
    let game = fw_game(&y0);
    let y1 = pt(&[0.6, 0.8]);
    let mut hist = WeightedHistory::new();
    hist.push(3.0, &y1);
    let x2 = ftl_step(&game, Side::X, &hist, &Point::zeros(2)).unwrap();
    assert!(x2.dist(&y1.sub(&pt(&y0))) < 1e-12);
    let numeric = numeric_argmin_x(&game, &[(3.0, y1)], &Point::zeros(2));
    assert!(x2.dist(&numeric) < 1e-6);
}

#[test]
fn ftl_on_quadratic_losses() {
    // g(x, y) = ½‖x‖² − xᵀy − ½‖y‖², so each loss is ½‖x − y‖² up to a constant
    let big = ConvexSet::l2_ball(2, 100.0).unwrap();
    let game = noregret::payoff::QuadBilinear::new(
        1.0,
        Point::zeros(2),
        -DMatrix::identity(2, 2),
        1.0,
        Point::zeros(2),
        big.clone(),
        big,
    )
    .unwrap();
    let (a, b) = (pt(&[1.0, 2.0]), pt(&[-3.0, 0.5]));
    let mut hist = WeightedHistory::new();
    hist.push(1.0, &a);
    assert!(
        ftl_step(&game, Side::X, &hist, &Point::zeros(2))
            .unwrap()
            .dist(&a)
            < 1e-12
    );
    hist.push(1.0, &b);
    let mean = a.add(&b).scaled(0.5);
    assert!(
        ftl_step(&game, Side::X, &hist, &Point::zeros(2))
            .unwrap()
            .dist(&mean)
            < 1e-12
    );
}

#[test]
fn optimistic_ftl_doubles_the_last_weight() {
    let c = [0.1, 0.3];
    let game = fw_game(&c);
    let (y1, y2) = (pt(&[1.0, 0.0]), pt(&[0.0, -1.0]));
    let mut hist = WeightedHistory::new();
    hist.push(1.0, &y1);
    // round 2: the hint repeats y1, the average of one point is unchanged
    let x2 = optimistic_ftl_step(&game, Side::X, &hist, 2.0, Some(&y1), &Point::zeros(2)).unwrap();
    assert!(x2.dist(&y1.sub(&pt(&c))) < 1e-12);
    hist.push(2.0, &y2);
    let x3 = optimistic_ftl_step(&game, Side::X, &hist, 3.0, Some(&y2), &Point::zeros(2)).unwrap();
    let avg = y1.add(&y2.scaled(5.0)).scaled(1.0 / 6.0);
    assert!(x3.dist(&avg.sub(&pt(&c))) < 1e-12);
    let numeric = numeric_argmin_x(
        &game,
        &[(1.0, y1), (2.0, y2.clone()), (3.0, y2)],
        &Point::zeros(2),
    );
    assert!(x3.dist(&numeric) < 1e-6);
}

#[test]
fn sc_aftl_weights_by_inverse_squared_gradient() {
    let c = [-0.2, 0.4];
    let game = fw_game(&c);
    let (y1, y2) = (pt(&[0.6, 0.8]), pt(&[-1.0, 0.0]));
    let mut state = ScAftlState::new(1e-10).unwrap();
    let x2 = sc_aftl_step(&mut state, &game, &y1, &pt(&[1.0, 0.0])).unwrap();
    assert!(x2.dist(&y1.sub(&pt(&c))) < 1e-12);
    let x3 = sc_aftl_step(&mut state, &game, &y2, &pt(&[0.0, 2.0])).unwrap();
    assert_eq!(state.alphas, vec![1.0, 0.25]);
    let avg = y1.add(&y2.scaled(0.25)).scaled(1.0 / 1.25);
    assert!(x3.dist(&avg.sub(&pt(&c))) < 1e-12);
    let numeric = numeric_argmin_x(&game, &[(1.0, y1), (0.25, y2)], &Point::zeros(2));
    assert!(x3.dist(&numeric) < 1e-6);
    let e = sc_aftl_step(&mut state, &game, &pt(&[0.0, 1.0]), &pt(&[1e-12, 0.0])).unwrap_err();
    assert!(matches!(e, Error::DegenerateGradient { .. }));
}

#[test]
fn best_response_examples() {
    let game = fw_game(&[0.0, 0.0]);
    let y = best_response_step(&game, &pt(&[0.0, 2.0]), Side::Y);
    assert!(y.dist(&pt(&[0.0, -1.0])) < 1e-15);
    let bil = Bilinear::scalar_unit();
    assert_eq!(best_response_step(&bil, &pt(&[1.0]), Side::X), pt(&[-1.0]));
    assert_eq!(best_response_step(&bil, &pt(&[0.0]), Side::Y), pt(&[1.0]));
}

// y-regret of a prescient learner against a 2-D grid comparator
fn grid_y_regret(payoff: &dyn GamePayoff, xs: &[Point], ys: &[Point], alphas: &[f64]) -> f64 {
    let played: f64 = alphas
        .iter()
        .zip(xs.iter().zip(ys))
        .map(|(a, (x, y))| a * payoff.value(x, y))
        .sum();
    let n = 401;
    let mut best = f64::NEG_INFINITY;
    for i in 0..n {
        for j in 0..n {
            let y = pt(&[
                -1.0 + 2.0 * i as f64 / (n - 1) as f64,
                -1.0 + 2.0 * j as f64 / (n - 1) as f64,
            ]);
            if y.norm() > 1.0 {
                continue;
            }
            let v: f64 = alphas
                .iter()
                .zip(xs)
                .map(|(a, x)| a * payoff.value(x, &y))
                .sum();
            best = best.max(v);
        }
    }
    best - played
}

#[test]
fn prescient_learners_have_no_regret() {
    let m = DMatrix::from_row_slice(2, 2, &[1.0, -2.0, 0.5, 1.5]);
    let payoff: Arc<dyn GamePayoff> = Arc::new(
        Bilinear::new(
            m,
            ConvexSet::l2_ball(2, 1.0).unwrap(),
            ConvexSet::l2_ball(2, 1.0).unwrap(),
        )
        .unwrap(),
    );
    for y_spec in [LearnerSpec::BestResponse, LearnerSpec::BeTheLeader] {
        let cfg = GameConfig::new(
            payoff.clone(),
            LearnerSpec::Ftrl {
                reg: Regularizer::SquaredL2,
                eta: 0.3,
            },
            y_spec,
            WeightSchedule::linear(),
            60,
        );
        let trace = run_game(&cfg).unwrap();
        assert!(
            trace.regret_y <= 1e-9 * trace.a_total,
            "oracle comparator {}",
            trace.regret_y
        );
        let grid = grid_y_regret(payoff.as_ref(), &trace.xs, &trace.ys, &trace.alphas);
        assert!(grid <= 1e-9 * trace.a_total, "grid comparator {grid}");
    }
}
