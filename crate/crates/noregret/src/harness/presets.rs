//! The preset catalog. Seed 0 runs the canonical instance of each preset;
//! other seeds draw a random member of the same family.

use std::sync::Arc;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fw::instances::{
    boundary_l2, box_quadratic, interior_l2, linear_rate_instance, quadratic_l2,
    random_box_quadratic, random_quadratic_l2, random_unit, rotation_coupling, scenario_one_start,
    touching_l2, vanilla_l2,
};
use crate::fw::{
    classic_fw, fw_as_game, fw_values, linear_rate_fw, new_fw, new_fw_game, sc_adagrad_game,
    sc_adagrad_schedule, scenario_payoff, FwGame, FwInstance, ScenarioParams,
};
use crate::game::{equilibrium_gap, run_game, GameConfig, GameTrace};
use crate::learners::{LearnerSpec, Regularizer};
use crate::objective::Quadratic;
use crate::payoff::{Bilinear, GamePayoff, QuadBilinear};
use crate::point::Point;
use crate::sets::ConvexSet;
use crate::weights::WeightSchedule;

use super::config::ExperimentConfig;
use super::fit::{fit_rate, RateFit, RateModel};
use super::output::{game_values, round_rows, write_files, SummaryRow};
use super::suites::{gauge_oracle_gap, regret_bound_suite, set_lemma_suite};
use super::{certify, CertRun, Check, PresetReport, BRUTE_RESOLUTION};

/// A named experiment.
#[derive(Debug, Clone, Copy)]
pub struct Preset {
    pub name: &'static str,
    pub summary: &'static str,
    run: fn(&ExperimentConfig) -> Result<Body>,
    certificates: fn(&mut ChaCha8Rng) -> Result<Vec<CertRun>>,
}

// what a preset body hands back to `run_preset`
struct Body {
    checks: Vec<Check>,
    summary: Vec<SummaryRow>,
    runs: Vec<CertRun>,
    // objective values of the first run, one per round
    values: Option<Vec<f64>>,
}

impl Body {
    fn new() -> Self {
        Body {
            checks: Vec::new(),
            summary: Vec::new(),
            runs: Vec::new(),
            values: None,
        }
    }
}

pub const PRESETS: [Preset; 9] = [
    Preset {
        name: "fw-equivalence",
        summary: "FTL against best response reproduces classic Frank-Wolfe iterates",
        run: fw_equivalence,
        certificates: fw_certificates,
    },
    Preset {
        name: "vanilla-fw-rate",
        summary: "O(1/T) equilibrium gap of the Frank-Wolfe game",
        run: vanilla_fw_rate,
        certificates: vanilla_certificates,
    },
    Preset {
        name: "new-fw-rate",
        summary: "O(1/T^2) rate of the accelerated projection-free method",
        run: new_fw_rate,
        certificates: new_fw_certificates,
    },
    Preset {
        name: "linear-fw-rate",
        summary: "linear rate of SC-AFTL against best response on a strongly convex set",
        run: linear_fw_rate,
        certificates: linear_certificates,
    },
    Preset {
        name: "scadagrad-game-rate",
        summary: "linear rate of SC-AdaGrad against best response on a coupled quadratic game",
        run: scadagrad_game_rate,
        certificates: scadagrad_certificates,
    },
    Preset {
        name: "gauge-ftrl-oracle",
        summary: "gauge FTRL closed form against a grid minimum",
        run: gauge_ftrl_oracle,
        certificates: gauge_certificates,
    },
    Preset {
        name: "regret-bounds",
        summary: "FTL, FTRL, optimistic FTRL and SC-AdaGrad regret bounds on random streams",
        run: regret_bounds,
        certificates: regret_certificates,
    },
    Preset {
        name: "set-lemmas",
        summary: "gauge identities, squared-gauge strong convexity and Lipschitz best responses",
        run: set_lemmas,
        certificates: set_certificates,
    },
    Preset {
        name: "strongly-convex-br",
        summary:
            "plain Frank-Wolfe game on a strongly convex set with gradients bounded away from 0",
        run: strongly_convex_br,
        certificates: boundary_certificates,
    },
];

pub fn find_preset(name: &str) -> Result<&'static Preset> {
    PRESETS.iter().find(|p| p.name == name).ok_or_else(|| {
        let names: Vec<&str> = PRESETS.iter().map(|p| p.name).collect();
        Error::Config(format!(
            "unknown preset `{name}`; available presets: {}",
            names.join(", ")
        ))
    })
}

fn preset_rng(name: &str, seed: u64, salt: u64) -> ChaCha8Rng {
    let index = PRESETS
        .iter()
        .position(|p| p.name == name)
        .unwrap_or(PRESETS.len()) as u64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1000 * (index + 1) + salt);
    rng
}

/// The small seeded 2-D games a preset contributes to the certificate sweep.
pub fn certificate_runs(name: &str, seed: u64) -> Result<Vec<CertRun>> {
    let preset = find_preset(name)?;
    (preset.certificates)(&mut preset_rng(name, seed, 1))
}

/// Runs a preset, checks its certificates and writes CSV files when an output
/// directory is configured.
pub fn run_preset(cfg: &ExperimentConfig) -> Result<PresetReport> {
    let preset = find_preset(&cfg.preset)?;
    if let Some(ts) = &cfg.t_list {
        super::config::validate_t_list(ts)?;
    }
    let body = (preset.run)(cfg)?;
    let brute_tol = cfg.tolerance("brute_gap", 5e-3);
    let mut report = PresetReport {
        preset: preset.name.to_string(),
        seed: cfg.seed,
        checks: body.checks,
        certificates: Vec::new(),
        summary: body.summary,
        rounds: Vec::new(),
    };
    let extra = certificate_runs(preset.name, cfg.seed)?;
    for run in body.runs.iter().chain(&extra) {
        let outcome = certify(run, BRUTE_RESOLUTION)?;
        if outcome.brute_gap.is_some() {
            report.checks.push(Check::pass_if(
                &format!("grid gap agrees ({})", run.label),
                outcome.agrees(brute_tol),
                format!(
                    "oracle {:.3e}, grid {:.3e}",
                    outcome.gap,
                    outcome.brute_gap.unwrap_or(f64::NAN)
                ),
            ));
        }
        report.certificates.push(outcome);
    }
    if let Some(dir) = &cfg.output_dir {
        if let Some(first) = body.runs.first() {
            let values = match body.values {
                Some(v) => v,
                None => game_values(&first.trace, first.payoff.as_ref()),
            };
            report.rounds = round_rows(
                preset.name,
                cfg.seed,
                &first.trace,
                first.payoff.as_ref(),
                &values,
            )?;
        }
        write_files(dir, preset.name, cfg.seed, &report.rounds, &report.summary)?;
    }
    Ok(report)
}

fn horizons(cfg: &ExperimentConfig, default: &[usize]) -> Vec<usize> {
    cfg.t_list.clone().unwrap_or_else(|| default.to_vec())
}

fn two_to_the(lo: u32, hi: u32) -> Vec<usize> {
    (lo..=hi).map(|k| 1usize << k).collect()
}

fn fixed_dims(cfg: &ExperimentConfig, name: &str, d: usize) -> Result<usize> {
    match cfg.dims {
        Some(k) if k != d => Err(Error::Config(format!(
            "preset {name} is defined in {d} dimensions only, got dims = {k}"
        ))),
        _ => Ok(d),
    }
}

fn summary_row(
    cfg: &ExperimentConfig,
    preset: &str,
    payoff: &dyn GamePayoff,
    trace: &GameTrace,
    t: usize,
    error: f64,
) -> Result<SummaryRow> {
    let p = trace.prefix(payoff, t)?;
    Ok(SummaryRow {
        preset: preset.to_string(),
        seed: cfg.seed,
        horizon: t,
        final_error: error,
        gap: p.gap,
        regret_sum_over_at: p.average_regret_sum(),
    })
}

fn fit_line(fit: &RateFit) -> String {
    format!(
        "slope {:.4}, r2 {:.4}, {} points",
        fit.slope, fit.r_squared, fit.points_used
    )
}

fn series(ts: &[usize], errors: &[f64]) -> Vec<(f64, f64)> {
    ts.iter()
        .zip(errors)
        .map(|(&t, &e)| (t as f64, e))
        .collect()
}

// A fit that cannot be made (too few errors above the floor) fails the checks
// instead of aborting the preset.
fn power_law_checks(
    ts: &[usize],
    errors: &[f64],
    slope_max: f64,
    r2_min: Option<f64>,
) -> Vec<Check> {
    let slope_name = format!("slope <= {slope_max}");
    match fit_rate(&series(ts, errors), RateModel::PowerLaw) {
        Ok(fit) => {
            let mut out = vec![Check::pass_if(
                &slope_name,
                fit.slope <= slope_max,
                fit_line(&fit),
            )];
            if let Some(r2) = r2_min {
                out.push(Check::pass_if(
                    &format!("fit r2 >= {r2}"),
                    fit.r_squared >= r2,
                    fit_line(&fit),
                ));
            }
            out
        }
        Err(e) => {
            let floor: Vec<String> = ts
                .iter()
                .zip(errors)
                .map(|(t, e)| format!("{t}:{e:.1e}"))
                .collect();
            let detail = format!("{e}; errors {}", floor.join(" "));
            let mut out = vec![Check::pass_if(&slope_name, false, detail.clone())];
            if let Some(r2) = r2_min {
                out.push(Check::pass_if(&format!("fit r2 >= {r2}"), false, detail));
            }
            out
        }
    }
}

fn fw_run(label: &str, inst: &FwInstance, rounds: usize) -> Result<CertRun> {
    let payoff: Arc<dyn GamePayoff> = Arc::new(FwGame::new(inst.clone())?);
    Ok(CertRun {
        label: label.to_string(),
        trace: fw_as_game(inst, rounds)?,
        payoff,
    })
}

/// Rows of a Frank-Wolfe run for every horizon, with `f(ȳ_T) − f_min` as the error.
fn fw_rows(
    cfg: &ExperimentConfig,
    preset: &str,
    inst: &FwInstance,
    run: &CertRun,
    ts: &[usize],
) -> Result<(Vec<SummaryRow>, Vec<f64>)> {
    let ybars = run.trace.y_bar_prefixes();
    let mut rows = Vec::new();
    let mut errors = Vec::new();
    for &t in ts {
        let e = inst.error(&ybars[t - 1])?;
        errors.push(e);
        rows.push(summary_row(
            cfg,
            preset,
            run.payoff.as_ref(),
            &run.trace,
            t,
            e,
        )?);
    }
    Ok((rows, errors))
}

fn fw_equivalence(cfg: &ExperimentConfig) -> Result<Body> {
    let d = cfg.dims.unwrap_or(5);
    let ts = horizons(cfg, &[200]);
    let horizon = *ts.last().expect("validated");
    let tol = cfg.tolerance("equivalence", 1e-9);
    let insts = if cfg.seed == 0 {
        vec![("box", box_quadratic(d)?), ("l2", vanilla_l2(d)?)]
    } else {
        let mut rng = preset_rng("fw-equivalence", cfg.seed, 0);
        vec![
            ("box", random_box_quadratic(&mut rng, d)?),
            ("l2", random_quadratic_l2(&mut rng, d)?),
        ]
    };
    let mut body = Body::new();
    for (label, inst) in insts {
        let run = fw_run(label, &inst, horizon)?;
        let classic = classic_fw(&inst, horizon);
        let dev = run
            .trace
            .y_bar_prefixes()
            .iter()
            .zip(&classic)
            .map(|(y, w)| y.dist(&w.point))
            .fold(0.0, f64::max);
        body.checks.push(Check::pass_if(
            &format!("max deviation <= {tol:e} ({label})"),
            dev <= tol,
            format!("max_t |y_bar_t - w_t| = {dev:.3e} over T = {horizon}"),
        ));
        let (rows, _) = fw_rows(cfg, &format!("fw-equivalence:{label}"), &inst, &run, &ts)?;
        body.summary.extend(rows);
        if body.values.is_none() {
            body.values = Some(fw_values(&inst, &run.trace));
        }
        body.runs.push(run);
    }
    Ok(body)
}

fn fw_certificates(rng: &mut ChaCha8Rng) -> Result<Vec<CertRun>> {
    Ok(vec![
        fw_run("random box quadratic", &random_box_quadratic(rng, 2)?, 40)?,
        fw_run("random ball quadratic", &random_quadratic_l2(rng, 2)?, 40)?,
    ])
}

// interior optimum, start on the boundary
fn random_interior_l2<R: Rng>(rng: &mut R, d: usize, r: f64, max_c: f64) -> Result<FwInstance> {
    let c = random_unit(rng, d).scaled(rng.random_range(0.1..max_c));
    let start = random_unit(rng, d).scaled(r);
    quadratic_l2(c.coords(), r, Some(start.coords()))
}

fn vanilla_fw_rate(cfg: &ExperimentConfig) -> Result<Body> {
    let d = cfg.dims.unwrap_or(5);
    let ts = horizons(cfg, &two_to_the(6, 12));
    let inst = if cfg.seed == 0 {
        vanilla_l2(d)?
    } else {
        random_interior_l2(&mut preset_rng("vanilla-fw-rate", cfg.seed, 0), d, 1.0, 0.8)?
    };
    let run = fw_run("vanilla", &inst, *ts.last().expect("validated"))?;
    let (rows, errors) = fw_rows(cfg, "vanilla-fw-rate", &inst, &run, &ts)?;
    let gaps: Vec<f64> = rows.iter().map(|r| r.gap).collect();
    let mut body = Body::new();

    let gap_fit = fit_rate(&series(&ts, &gaps), RateModel::PowerLaw)?;
    let (lo, hi) = (
        cfg.tolerance("slope_min", -1.3),
        cfg.tolerance("slope_max", -0.85),
    );
    let r2 = cfg.tolerance("r2_min", 0.98);
    body.checks.push(Check::pass_if(
        &format!("gap slope in [{lo}, {hi}]"),
        (lo..=hi).contains(&gap_fit.slope),
        fit_line(&gap_fit),
    ));
    body.checks.push(Check::pass_if(
        &format!("gap fit r2 >= {r2}"),
        gap_fit.r_squared >= r2,
        fit_line(&gap_fit),
    ));
    match fit_rate(&series(&ts, &errors), RateModel::PowerLaw) {
        Ok(f) => body.checks.push(Check::info("f error fit", fit_line(&f))),
        Err(e) => body.checks.push(Check::info("f error fit", e.to_string())),
    }
    let k = &inst.constants;
    let worst = ts
        .iter()
        .zip(&errors)
        .map(|(&t, e)| e * (t as f64 + 1.0) / (2.0 * k.l * k.d * k.d))
        .fold(0.0, f64::max);
    body.checks.push(Check::pass_if(
        "f(y_bar_T) - f_min <= 2LD^2/(T+1)",
        worst <= 1.0 + 1e-9,
        format!("largest error / bound = {worst:.3e}"),
    ));
    body.summary = rows;
    body.values = Some(fw_values(&inst, &run.trace));
    body.runs.push(run);
    Ok(body)
}

fn vanilla_certificates(rng: &mut ChaCha8Rng) -> Result<Vec<CertRun>> {
    Ok(vec![fw_run(
        "random interior quadratic",
        &random_interior_l2(rng, 2, 1.0, 0.8)?,
        64,
    )?])
}

fn new_fw_rate(cfg: &ExperimentConfig) -> Result<Body> {
    let d = cfg.dims.unwrap_or(5);
    let ts = horizons(cfg, &two_to_the(6, 12));
    let horizon = *ts.last().expect("validated");
    let inst = if cfg.seed == 0 {
        interior_l2(d)?
    } else {
        random_interior_l2(&mut preset_rng("new-fw-rate", cfg.seed, 0), d, 2.0, 1.5)?
    };
    let eta = crate::fw::auto_eta(&inst)? * cfg.eta_multiplier;
    let run = new_fw(&inst, horizon, Some(eta))?;
    let errors = ts
        .iter()
        .map(|&t| inst.error(&run.steps[t - 1].y_bar))
        .collect::<Result<Vec<f64>>>()?;
    let slope_max = cfg.tolerance("slope_max", -1.8);
    let r2 = cfg.tolerance("r2_min", 0.98);
    let mut body = Body::new();
    body.checks
        .extend(power_law_checks(&ts, &errors, slope_max, Some(r2)));
    body.checks.push(Check::pass_if(
        "one linear minimization per round",
        run.oracle_calls == horizon,
        format!("{} calls in {horizon} rounds", run.oracle_calls),
    ));
    body.checks
        .push(Check::info("learning rate", format!("eta = {eta:.6e}")));

    // the generic game engine must reproduce the direct loop
    let payoff: Arc<dyn GamePayoff> = Arc::new(FwGame::new(inst.clone())?);
    let trace = new_fw_game(&inst, horizon, Some(eta))?;
    let dev = trace
        .y_bar_prefixes()
        .iter()
        .zip(&run.steps)
        .map(|(y, s)| y.dist(&s.y_bar))
        .fold(0.0, f64::max);
    body.checks.push(Check::pass_if(
        "game engine matches the direct loop",
        dev <= 1e-9,
        format!("max deviation {dev:.3e}"),
    ));

    if cfg.seed == 0 {
        let touching = touching_l2(d)?;
        let t_run = new_fw(
            &touching,
            horizon,
            Some(crate::fw::auto_eta(&touching)? * cfg.eta_multiplier),
        )?;
        let t_err = ts
            .iter()
            .map(|&t| touching.error(&t_run.steps[t - 1].y_bar))
            .collect::<Result<Vec<f64>>>()?;
        match fit_rate(&series(&ts, &t_err), RateModel::PowerLaw) {
            Ok(f) => body.checks.push(Check::info(
                "optimum on the boundary, for comparison",
                fit_line(&f),
            )),
            Err(e) => body.checks.push(Check::info(
                "optimum on the boundary, for comparison",
                e.to_string(),
            )),
        }
    }

    for (&t, &e) in ts.iter().zip(&errors) {
        body.summary.push(summary_row(
            cfg,
            "new-fw-rate",
            payoff.as_ref(),
            &trace,
            t,
            e,
        )?);
    }
    body.values = Some(run.steps.iter().map(|s| s.value).collect());
    body.runs.push(CertRun {
        label: "accelerated".into(),
        payoff,
        trace,
    });
    Ok(body)
}

fn new_fw_certificates(rng: &mut ChaCha8Rng) -> Result<Vec<CertRun>> {
    let inst = random_interior_l2(rng, 2, 2.0, 1.5)?;
    let payoff: Arc<dyn GamePayoff> = Arc::new(FwGame::new(inst.clone())?);
    Ok(vec![CertRun {
        label: "random accelerated run".into(),
        trace: new_fw_game(&inst, 64, None)?,
        payoff,
    }])
}

// anisotropic quadratic whose centre lies outside L2Ball(1); B is declared at
// 90% of the sampled minimum gradient norm
fn random_anisotropic<R: Rng>(rng: &mut R) -> Result<FwInstance> {
    let h = vec![rng.random_range(12.0..25.0), 1.0];
    let c = Point::new(vec![rng.random_range(0.0..0.3), rng.random_range(1.5..2.0)])?;
    let inst = FwInstance::new(
        Arc::new(Quadratic::new(h, c)?),
        ConvexSet::l2_ball(2, 1.0)?,
        Point::zeros(2),
    )?;
    let b = 0.9 * inst.sampled_min_gradient_norm(4000);
    inst.with_gradient_floor(b)
}

fn linear_fw_rate(cfg: &ExperimentConfig) -> Result<Body> {
    fixed_dims(cfg, "linear-fw-rate", 2)?;
    let ts = horizons(cfg, &[200]);
    let horizon = *ts.last().expect("validated");
    let inst = if cfg.seed == 0 {
        linear_rate_instance()?
    } else {
        random_anisotropic(&mut preset_rng("linear-fw-rate", cfg.seed, 0))?
    };
    let payoff: Arc<dyn GamePayoff> = Arc::new(FwGame::new(inst.clone())?);
    let trace = linear_rate_fw(&inst, horizon)?;
    let values = fw_values(&inst, &trace);
    let f_min = inst
        .f_min
        .ok_or_else(|| Error::Config("instance has no known minimum".into()))?;
    let all: Vec<(f64, f64)> = values
        .iter()
        .enumerate()
        .map(|(i, v)| ((i + 1) as f64, v - f_min))
        .collect();
    let fit = fit_rate(&all, RateModel::Exponential)?;
    let r2 = cfg.tolerance("r2_min", 0.98);
    let final_tol = cfg.tolerance("final_error", 1e-8);
    let mut body = Body::new();
    body.checks.push(Check::pass_if(
        "negative decay",
        fit.slope < 0.0,
        fit_line(&fit),
    ));
    body.checks.push(Check::pass_if(
        &format!("fit r2 >= {r2}"),
        fit.r_squared >= r2,
        fit_line(&fit),
    ));
    if horizon >= 200 {
        let e = all[199].1;
        body.checks.push(Check::pass_if(
            &format!("error at T = 200 <= {final_tol:e}"),
            e <= final_tol,
            format!("{e:.3e}"),
        ));
    }
    let worst = trace
        .xs
        .iter()
        .zip(&trace.ys)
        .zip(&trace.alphas)
        .map(|((x, y), a)| {
            let g = payoff.grad_x(x, y);
            (a * g.dot(&g) - 1.0).abs()
        })
        .fold(0.0, f64::max);
    body.checks.push(Check::pass_if(
        "alpha_t = |grad|^-2",
        worst <= 1e-12,
        format!("max |alpha_t |grad_t|^2 - 1| = {worst:.2e}"),
    ));
    body.checks.push(Check::info(
        "declared gradient floor",
        format!("B = {}", inst.constants.b),
    ));
    for &t in &ts {
        body.summary.push(summary_row(
            cfg,
            "linear-fw-rate",
            payoff.as_ref(),
            &trace,
            t,
            all[t - 1].1,
        )?);
    }
    body.values = Some(values);
    body.runs.push(CertRun {
        label: "linear rate".into(),
        payoff,
        trace,
    });
    Ok(body)
}

fn linear_certificates(rng: &mut ChaCha8Rng) -> Result<Vec<CertRun>> {
    let inst = random_anisotropic(rng)?;
    let payoff: Arc<dyn GamePayoff> = Arc::new(FwGame::new(inst.clone())?);
    Ok(vec![CertRun {
        label: "random anisotropic".into(),
        trace: linear_rate_fw(&inst, 30)?,
        payoff,
    }])
}

fn coupled_params(scale: f64, angle: f64, a: Point, b: Point) -> Result<ScenarioParams> {
    Ok(ScenarioParams::Coupled {
        sigma_x: 1.0,
        a,
        m: rotation_coupling(scale, angle),
        sigma_y: 1.0,
        b,
        x_set: ConvexSet::l2_ball(2, 10.0)?,
        y_set: ConvexSet::l2_ball(2, 10.0)?,
    })
}

fn random_coupled<R: Rng>(rng: &mut R) -> Result<(ScenarioParams, Point)> {
    let scale = rng.random_range(4.0..7.0);
    let angle = rng.random_range(0.3..1.2);
    let a = random_unit(rng, 2).scaled(rng.random_range(0.2..0.8));
    let b = random_unit(rng, 2).scaled(rng.random_range(0.2..0.8));
    Ok((coupled_params(scale, angle, a, b)?, random_unit(rng, 2)))
}

fn scadagrad_game_rate(cfg: &ExperimentConfig) -> Result<Body> {
    fixed_dims(cfg, "scadagrad-game-rate", 2)?;
    let ts = horizons(cfg, &[300]);
    let horizon = *ts.last().expect("validated");
    let (params, x1) = if cfg.seed == 0 {
        (
            coupled_params(6.0, 1.0, Point::of(&[0.5, 0.5]), Point::of(&[-0.3, -0.3]))?,
            scenario_one_start(),
        )
    } else {
        random_coupled(&mut preset_rng("scadagrad-game-rate", cfg.seed, 0))?
    };
    let scenario = scenario_payoff(1, params)?;
    let payoff = scenario.payoff.clone();
    let trace = sc_adagrad_game(payoff.clone(), horizon, Some(x1))?;
    let xb = trace.x_bar_prefixes();
    let yb = trace.y_bar_prefixes();
    let gaps = xb
        .iter()
        .zip(&yb)
        .map(|(x, y)| equilibrium_gap(payoff.as_ref(), x, y))
        .collect::<Result<Vec<f64>>>()?;
    let all: Vec<(f64, f64)> = gaps
        .iter()
        .enumerate()
        .map(|(i, g)| ((i + 1) as f64, *g))
        .collect();
    let fit = fit_rate(&all, RateModel::Exponential)?;
    let r2 = cfg.tolerance("r2_min", 0.95);
    let gap_tol = cfg.tolerance("final_gap", 1e-6);
    let mut body = Body::new();
    body.checks.push(Check::pass_if(
        "negative decay",
        fit.slope < 0.0,
        fit_line(&fit),
    ));
    body.checks.push(Check::pass_if(
        &format!("fit r2 >= {r2}"),
        fit.r_squared >= r2,
        fit_line(&fit),
    ));
    if horizon >= 300 {
        let g = gaps[299];
        body.checks.push(Check::pass_if(
            &format!("gap at T = 300 <= {gap_tol:e}"),
            g <= gap_tol,
            format!("{g:.3e}"),
        ));
    }
    let schedule = sc_adagrad_schedule(&trace, payoff.constants().sigma_x);
    let monotone = schedule.windows(2).all(|w| w[1].1 < w[0].1);
    body.checks.push(Check::pass_if(
        "step sizes 1/sum(theta) strictly decrease",
        monotone,
        format!(
            "eta_1 = {:.3e}, eta_T = {:.3e}",
            schedule[0].1,
            schedule[horizon - 1].1
        ),
    ));
    body.checks.push(Check::info(
        "envelope smoothness",
        format!("{:.4}", scenario.s_smoothness),
    ));
    let saddle_note = match scenario.payoff.as_ref().value_of_game() {
        Some(v) => format!("saddle is interior, game value {v:.6}"),
        None => "minimizer of the envelope over R^d is not verified to lie in the x-set".into(),
    };
    body.checks
        .push(Check::info("envelope minimizer", saddle_note));
    for &t in &ts {
        body.summary.push(summary_row(
            cfg,
            "scadagrad-game-rate",
            payoff.as_ref(),
            &trace,
            t,
            gaps[t - 1],
        )?);
    }
    body.runs.push(CertRun {
        label: "SC-AdaGrad".into(),
        payoff,
        trace,
    });
    Ok(body)
}

fn scadagrad_certificates(rng: &mut ChaCha8Rng) -> Result<Vec<CertRun>> {
    let (params, x1) = random_coupled(rng)?;
    let payoff = scenario_payoff(1, params)?.payoff;
    Ok(vec![CertRun {
        label: "random coupled game".into(),
        trace: sc_adagrad_game(payoff.clone(), 60, Some(x1))?,
        payoff,
    }])
}

fn random_matrix<R: Rng>(rng: &mut R) -> DMatrix<f64> {
    DMatrix::from_fn(2, 2, |_, _| rng.random_range(-2.0..2.0))
}

fn game_run(
    label: &str,
    payoff: Arc<dyn GamePayoff>,
    x: LearnerSpec,
    y: LearnerSpec,
    schedule: WeightSchedule,
    rounds: usize,
) -> Result<CertRun> {
    let trace = run_game(&GameConfig::new(payoff.clone(), x, y, schedule, rounds))?;
    Ok(CertRun {
        label: label.to_string(),
        payoff,
        trace,
    })
}

fn gauge_ftrl_oracle(cfg: &ExperimentConfig) -> Result<Body> {
    fixed_dims(cfg, "gauge-ftrl-oracle", 2)?;
    let tol = cfg.tolerance("objective", 2e-3);
    let worst = gauge_oracle_gap(cfg.seed, 50, 1e-3)?;
    let mut body = Body::new();
    body.checks.push(Check::pass_if(
        &format!("closed form within {tol:e} of the grid minimum"),
        worst <= tol,
        format!("largest difference {worst:.3e} over 50 loss vectors on each of two balls"),
    ));
    Ok(body)
}

fn gauge_certificates(rng: &mut ChaCha8Rng) -> Result<Vec<CertRun>> {
    let payoff: Arc<dyn GamePayoff> = Arc::new(Bilinear::new(
        random_matrix(rng),
        ConvexSet::l2_ball(2, 1.0)?,
        ConvexSet::lp_ball(2, 1.5, 1.0)?,
    )?);
    let eta = rng.random_range(0.1..1.0);
    Ok(vec![game_run(
        "gauge FTRL against best response",
        payoff,
        LearnerSpec::GaugeFtrl { eta },
        LearnerSpec::BestResponse,
        WeightSchedule::linear(),
        80,
    )?])
}

fn regret_bounds(cfg: &ExperimentConfig) -> Result<Body> {
    let tol = cfg.tolerance("regret", 1e-6);
    let rounds = cfg
        .t_list
        .as_ref()
        .and_then(|t| t.last().copied())
        .unwrap_or(200);
    let mut body = Body::new();
    body.checks = regret_bound_suite(cfg.seed, 20, rounds, tol)?;
    Ok(body)
}

fn regret_certificates(rng: &mut ChaCha8Rng) -> Result<Vec<CertRun>> {
    let payoff: Arc<dyn GamePayoff> = Arc::new(Bilinear::new(
        random_matrix(rng),
        ConvexSet::l2_ball(2, 1.0)?,
        ConvexSet::l2_ball(2, 1.0)?,
    )?);
    let eta = rng.random_range(0.05..0.5);
    Ok(vec![game_run(
        "FTRL against optimistic FTRL",
        payoff,
        LearnerSpec::Ftrl {
            reg: Regularizer::SquaredL2,
            eta,
        },
        LearnerSpec::OptimisticFtrl {
            reg: Regularizer::SquaredGauge,
            eta,
        },
        WeightSchedule::uniform(),
        80,
    )?])
}

fn set_lemmas(cfg: &ExperimentConfig) -> Result<Body> {
    let mut body = Body::new();
    body.checks = set_lemma_suite(
        cfg.seed,
        cfg.tolerance("identity", 1e-9),
        cfg.tolerance("midpoint", 1e-8),
        cfg.tolerance("envelope", 1e-6),
    )?;
    Ok(body)
}

fn set_certificates(rng: &mut ChaCha8Rng) -> Result<Vec<CertRun>> {
    let payoff: Arc<dyn GamePayoff> = Arc::new(QuadBilinear::new(
        rng.random_range(0.5..2.0),
        random_unit(rng, 2).scaled(rng.random_range(0.0..1.5)),
        random_matrix(rng),
        rng.random_range(0.5..2.0),
        random_unit(rng, 2).scaled(rng.random_range(0.0..1.5)),
        ConvexSet::lp_ball(2, 1.5, 1.0)?,
        ConvexSet::l2_ball(2, 1.0)?,
    )?);
    Ok(vec![game_run(
        "FTL against best response on an lp ball",
        payoff,
        LearnerSpec::Ftl { initial: None },
        LearnerSpec::BestResponse,
        WeightSchedule::linear(),
        50,
    )?])
}

fn random_boundary<R: Rng>(rng: &mut R, d: usize) -> Result<FwInstance> {
    let norm = rng.random_range(1.3..2.5);
    let c = random_unit(rng, d).scaled(norm);
    let start = random_unit(rng, d);
    quadratic_l2(c.coords(), 1.0, Some(start.coords()))?.with_gradient_floor(norm - 1.0)
}

fn strongly_convex_br(cfg: &ExperimentConfig) -> Result<Body> {
    let d = cfg.dims.unwrap_or(5);
    let ts = horizons(cfg, &two_to_the(6, 12));
    let inst = if cfg.seed == 0 {
        boundary_l2(d)?
    } else {
        random_boundary(&mut preset_rng("strongly-convex-br", cfg.seed, 0), d)?
    };
    let run = fw_run("boundary optimum", &inst, *ts.last().expect("validated"))?;
    let (rows, errors) = fw_rows(cfg, "strongly-convex-br", &inst, &run, &ts)?;
    let slope_max = cfg.tolerance("slope_max", -1.7);
    let mut body = Body::new();
    body.checks
        .extend(power_law_checks(&ts, &errors, slope_max, None));
    body.checks.push(Check::info(
        "declared constants",
        format!(
            "lambda = {}, B = {:.4}",
            inst.set.lambda(),
            inst.constants.b
        ),
    ));
    body.summary = rows;
    body.values = Some(fw_values(&inst, &run.trace));
    body.runs.push(run);
    Ok(body)
}

fn boundary_certificates(rng: &mut ChaCha8Rng) -> Result<Vec<CertRun>> {
    Ok(vec![fw_run(
        "random boundary optimum",
        &random_boundary(rng, 2)?,
        64,
    )?])
}
