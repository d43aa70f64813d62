//! One PASS/FAIL line per acceptance criterion, with its runtime budget.
//! Exits nonzero when any criterion fails.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use noregret::fw::instances::{
    boundary_l2, box_quadratic, interior_l2, linear_rate_instance, scenario_one_game,
    scenario_one_start, vanilla_l2,
};
use noregret::fw::{
    classic_fw, fw_as_game, fw_values, linear_rate_fw, new_fw, sc_adagrad_game, FwGame, FwInstance,
};
use noregret::game::equilibrium_gap;
use noregret::harness::suites::{gauge_oracle_gap, regret_bound_suite, set_lemma_suite};
use noregret::harness::{
    certificate_runs, certify, fit_rate, RateModel, BRUTE_RESOLUTION, PRESETS,
};
use noregret::payoff::GamePayoff;

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: String) -> noregret::Result<Outcome> {
    Ok(Outcome { ok, detail })
}

fn pow2(lo: u32, hi: u32) -> Vec<usize> {
    (lo..=hi).map(|k| 1usize << k).collect()
}

fn equivalence() -> noregret::Result<Outcome> {
    let mut worst: f64 = 0.0;
    for inst in [box_quadratic(5)?, vanilla_l2(5)?] {
        let trace = fw_as_game(&inst, 200)?;
        let classic = classic_fw(&inst, 200);
        for (y, w) in trace.y_bar_prefixes().iter().zip(&classic) {
            worst = worst.max(y.dist(&w.point));
        }
    }
    outcome(
        worst <= 1e-9,
        format!("max deviation {worst:.3e} <= 1e-9 on box and ball, T = 200"),
    )
}

fn certificates() -> noregret::Result<Outcome> {
    let mut runs = 0;
    let mut bad = Vec::new();
    let mut worst_brute: f64 = 0.0;
    for p in &PRESETS {
        for seed in 0..50 {
            for run in certificate_runs(p.name, seed)? {
                let c = certify(&run, BRUTE_RESOLUTION)?;
                runs += 1;
                if let Some(b) = c.brute_gap {
                    worst_brute = worst_brute.max((b - c.gap).abs());
                }
                if !c.holds || !c.agrees(5e-3) {
                    bad.push(format!("{}#{seed}", p.name));
                }
            }
        }
    }
    outcome(
        bad.is_empty(),
        format!(
            "{runs} runs, {} failing {:?}, worst |gap - grid gap| {worst_brute:.2e}",
            bad.len(),
            bad
        ),
    )
}

fn vanilla_rate() -> noregret::Result<Outcome> {
    let inst = vanilla_l2(5)?;
    let payoff = FwGame::new(inst.clone())?;
    let ts = pow2(6, 12);
    let trace = fw_as_game(&inst, *ts.last().unwrap())?;
    let xb = trace.x_bar_prefixes();
    let yb = trace.y_bar_prefixes();
    let series = ts
        .iter()
        .map(|&t| Ok((t as f64, equilibrium_gap(&payoff, &xb[t - 1], &yb[t - 1])?)))
        .collect::<noregret::Result<Vec<_>>>()?;
    let fit = fit_rate(&series, RateModel::PowerLaw)?;
    outcome(
        (-1.3..=-0.85).contains(&fit.slope) && fit.r_squared >= 0.98,
        format!(
            "gap slope {:.4} in [-1.3, -0.85], r2 {:.4} >= 0.98",
            fit.slope, fit.r_squared
        ),
    )
}

fn fw_error_series(
    inst: &FwInstance,
    ybars: &[noregret::Point],
    ts: &[usize],
) -> noregret::Result<Vec<(f64, f64)>> {
    ts.iter()
        .map(|&t| Ok((t as f64, inst.error(&ybars[t - 1])?)))
        .collect()
}

fn accelerated_rate() -> noregret::Result<Outcome> {
    let inst = interior_l2(5)?;
    let ts = pow2(6, 12);
    let run = new_fw(&inst, 4096, None)?;
    let ybars: Vec<_> = run.steps.iter().map(|s| s.y_bar.clone()).collect();
    let series = fw_error_series(&inst, &ybars, &ts)?;
    let calls = format!("{} oracle calls for T = 4096", run.oracle_calls);
    match fit_rate(&series, RateModel::PowerLaw) {
        Ok(fit) => outcome(
            fit.slope <= -1.8 && fit.r_squared >= 0.98 && run.oracle_calls == 4096,
            format!(
                "slope {:.4} <= -1.8, r2 {:.4} >= 0.98, {calls}",
                fit.slope, fit.r_squared
            ),
        ),
        Err(e) => {
            let errs: Vec<String> = series.iter().map(|(t, e)| format!("{t}:{e:.1e}")).collect();
            outcome(false, format!("{e}; errors {}; {calls}", errs.join(" ")))
        }
    }
}

fn linear_fw() -> noregret::Result<Outcome> {
    let inst = linear_rate_instance()?;
    let trace = linear_rate_fw(&inst, 200)?;
    let f_min = inst.f_min.expect("closed-form optimum");
    let series: Vec<(f64, f64)> = fw_values(&inst, &trace)
        .iter()
        .enumerate()
        .map(|(i, v)| ((i + 1) as f64, v - f_min))
        .collect();
    let fit = fit_rate(&series, RateModel::Exponential)?;
    let last = series[199].1;
    outcome(
        fit.slope < 0.0 && fit.r_squared >= 0.98 && last <= 1e-8 && inst.constants.b >= 0.5,
        format!(
            "B = {}, decay {:.4} < 0, r2 {:.4} >= 0.98 over {} pre-floor rounds, error at T = 200 {last:.2e} <= 1e-8",
            inst.constants.b, fit.slope, fit.r_squared, fit.points_used
        ),
    )
}

fn game_linear() -> noregret::Result<Outcome> {
    let payoff: Arc<dyn GamePayoff> = Arc::new(scenario_one_game()?);
    let trace = sc_adagrad_game(payoff.clone(), 300, Some(scenario_one_start()))?;
    let series = trace
        .x_bar_prefixes()
        .iter()
        .zip(trace.y_bar_prefixes())
        .enumerate()
        .map(|(i, (x, y))| Ok(((i + 1) as f64, equilibrium_gap(payoff.as_ref(), x, &y)?)))
        .collect::<noregret::Result<Vec<_>>>()?;
    let fit = fit_rate(&series, RateModel::Exponential)?;
    let gap = series[299].1;
    outcome(
        gap <= 1e-6 && fit.r_squared >= 0.95,
        format!(
            "gap at T = 300 {gap:.2e} <= 1e-6, decay {:.4}, r2 {:.4} >= 0.95",
            fit.slope, fit.r_squared
        ),
    )
}

fn suite_outcome(checks: Vec<noregret::harness::Check>) -> noregret::Result<Outcome> {
    let ok = checks.iter().all(|c| c.passed != Some(false));
    let detail = checks
        .iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join("; ");
    outcome(ok, detail)
}

fn regret_bounds() -> noregret::Result<Outcome> {
    suite_outcome(regret_bound_suite(0, 20, 200, 1e-6)?)
}

fn set_lemmas() -> noregret::Result<Outcome> {
    suite_outcome(set_lemma_suite(0, 1e-9, 1e-8, 1e-6)?)
}

fn gauge_grid() -> noregret::Result<Outcome> {
    let worst = gauge_oracle_gap(0, 50, 1e-3)?;
    outcome(
        worst <= 2e-3,
        format!("largest |F(closed form) - grid min| {worst:.3e} <= 2e-3"),
    )
}

fn strongly_convex_set() -> noregret::Result<Outcome> {
    let inst = boundary_l2(5)?;
    let ts = pow2(6, 12);
    let trace = fw_as_game(&inst, 4096)?;
    let series = fw_error_series(&inst, &trace.y_bar_prefixes(), &ts)?;
    let fit = fit_rate(&series, RateModel::PowerLaw)?;
    outcome(
        fit.slope <= -1.7 && inst.set.lambda() > 0.0 && inst.constants.b > 0.0,
        format!(
            "slope {:.4} <= -1.7 (r2 {:.4}), lambda {}, B {:.4}",
            fit.slope,
            fit.r_squared,
            inst.set.lambda(),
            inst.constants.b
        ),
    )
}

type Criterion = (u32, &'static str, f64, fn() -> noregret::Result<Outcome>);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        (1, "FW-as-game equivalence", 1.0, equivalence),
        (
            2,
            "equilibrium certificate, every preset x 50 seeds",
            30.0,
            certificates,
        ),
        (3, "O(1/T) vanilla rate", 10.0, vanilla_rate),
        (4, "O(1/T^2) accelerated rate", 10.0, accelerated_rate),
        (5, "linear rate, Frank-Wolfe variant", 5.0, linear_fw),
        (6, "linear rate, general game", 5.0, game_linear),
        (7, "regret-bound suite", 10.0, regret_bounds),
        (8, "set-lemma suite", 10.0, set_lemmas),
        (9, "gauge FTRL closed form vs grid", 5.0, gauge_grid),
        (
            10,
            "FTL + best response on a strongly convex set",
            10.0,
            strongly_convex_set,
        ),
    ];
    let mut failures = 0;
    for (id, name, budget, check) in criteria {
        let start = Instant::now();
        let result = check();
        let secs = start.elapsed().as_secs_f64();
        let (ok, detail) = match result {
            Ok(o) => (o.ok && secs < budget, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !ok {
            failures += 1;
        }
        println!(
            "criterion {id:>2} {}: {name}: {detail} [{secs:.2} s, budget {budget} s]",
            if ok { "PASS" } else { "FAIL" }
        );
    }
    println!("{} of 10 criteria passed", 10 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
