//! Experiment presets, their pass/fail checks and the CSV files they write.

pub mod brute;
pub mod config;
pub mod fit;
pub mod output;
pub mod presets;
pub mod suites;

use std::fmt;
use std::sync::Arc;

pub use brute::brute_force_gap;
pub use config::ExperimentConfig;
pub use fit::{fit_rate, RateFit, RateModel};
pub use presets::{certificate_runs, find_preset, run_preset, Preset, PRESETS};

use crate::error::Result;
use crate::game::{check_sandwich, GameTrace};
use crate::payoff::GamePayoff;
use output::{RoundRow, SummaryRow};

/// Default grid resolution for brute-force gap estimates.
pub const BRUTE_RESOLUTION: usize = 401;

/// One named criterion of a preset. `passed = None` marks an informational line.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: Option<bool>,
    pub detail: String,
}

impl Check {
    pub fn pass_if(name: &str, ok: bool, detail: String) -> Self {
        Check {
            name: name.to_string(),
            passed: Some(ok),
            detail,
        }
    }

    pub fn info(name: &str, detail: String) -> Self {
        Check {
            name: name.to_string(),
            passed: None,
            detail,
        }
    }

    pub fn failed(&self) -> bool {
        self.passed == Some(false)
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.passed {
            Some(true) => "PASS",
            Some(false) => "FAIL",
            None => "INFO",
        };
        write!(f, "{}: {tag} ({})", self.name, self.detail)
    }
}

/// A finished game kept for its equilibrium certificate.
#[derive(Debug, Clone)]
pub struct CertRun {
    pub label: String,
    pub payoff: Arc<dyn GamePayoff>,
    pub trace: GameTrace,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CertificateOutcome {
    pub label: String,
    pub gap: f64,
    pub epsilon: f64,
    /// `gap ≤ ε` and, when the game value is known, the value sandwich.
    pub holds: bool,
    /// Grid estimate of the gap on 2-D games.
    pub brute_gap: Option<f64>,
}

impl CertificateOutcome {
    /// `|gap − brute_gap| ≤ tol`, vacuous without a grid estimate.
    pub fn agrees(&self, tol: f64) -> bool {
        self.brute_gap.is_none_or(|b| (b - self.gap).abs() <= tol)
    }
}

impl fmt::Display for CertificateOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "certificate {}: gap {:.3e} <= eps {:.3e}: {}",
            self.label,
            self.gap,
            self.epsilon,
            if self.holds { "PASS" } else { "FAIL" }
        )?;
        if let Some(b) = self.brute_gap {
            write!(f, ", grid gap {b:.3e}")?;
        }
        Ok(())
    }
}

/// Checks the certificate of `run`; games with two-dimensional sides also get
/// a grid estimate at `resolution`.
pub fn certify(run: &CertRun, resolution: usize) -> Result<CertificateOutcome> {
    let report = check_sandwich(&run.trace, run.payoff.as_ref());
    let p = run.payoff.as_ref();
    let brute_gap = if p.dim_x() <= 2
        && p.dim_y() <= 2
        && p.x_search_box().is_some()
        && p.y_search_box().is_some()
    {
        Some(brute_force_gap(
            p,
            &run.trace.x_bar,
            &run.trace.y_bar,
            resolution,
        )?)
    } else {
        None
    };
    Ok(CertificateOutcome {
        label: run.label.clone(),
        gap: report.gap,
        epsilon: report.epsilon,
        holds: report.holds(),
        brute_gap,
    })
}

/// Everything a preset run produced.
#[derive(Debug, Clone)]
pub struct PresetReport {
    pub preset: String,
    pub seed: u64,
    pub checks: Vec<Check>,
    pub certificates: Vec<CertificateOutcome>,
    pub summary: Vec<SummaryRow>,
    /// Per-round rows of the preset's main run; filled only when CSV output is requested.
    pub rounds: Vec<RoundRow>,
}

impl PresetReport {
    pub fn passed(&self) -> bool {
        !self.checks.iter().any(Check::failed) && self.certificates.iter().all(|c| c.holds)
    }
}

impl fmt::Display for PresetReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "preset {} (seed {})", self.preset, self.seed)?;
        for c in &self.checks {
            writeln!(f, "  {c}")?;
        }
        for c in &self.certificates {
            writeln!(f, "  {c}")?;
        }
        write!(
            f,
            "  overall: {}",
            if self.passed() { "PASS" } else { "FAIL" }
        )
    }
}
