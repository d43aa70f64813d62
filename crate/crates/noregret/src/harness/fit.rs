use crate::error::{Error, Result};

/// Errors at or below this value are treated as numerical noise and skipped.
pub const FIT_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RateModel {
    /// `log e = slope · log T + intercept`
    PowerLaw,
    /// `log e = slope · T + intercept`
    Exponential,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateFit {
    pub model: RateModel,
    /// Slope for power laws, decay rate for exponentials.
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub points_used: usize,
}

/// Least-squares fit of `log(error)` against `log(T)` or `T`.
pub fn fit_rate(series: &[(f64, f64)], model: RateModel) -> Result<RateFit> {
    let pts: Vec<(f64, f64)> = series
        .iter()
        .filter(|(t, e)| *e > FIT_FLOOR && e.is_finite() && t.is_finite())
        .map(|&(t, e)| {
            let u = match model {
                RateModel::PowerLaw => t.ln(),
                RateModel::Exponential => t,
            };
            (u, e.ln())
        })
        .collect();
    if pts.len() < 3 {
        return Err(Error::Fit(format!(
            "{} of {} points lie above the {FIT_FLOOR:e} floor; at least 3 are needed",
            pts.len(),
            series.len()
        )));
    }
    if model == RateModel::PowerLaw && series.iter().any(|(t, _)| !(*t > 0.0)) {
        return Err(Error::Fit("power-law fits need positive abscissae".into()));
    }
    let n = pts.len() as f64;
    let mu = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let mv = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let suu: f64 = pts.iter().map(|p| (p.0 - mu).powi(2)).sum();
    let suv: f64 = pts.iter().map(|p| (p.0 - mu) * (p.1 - mv)).sum();
    if suu == 0.0 {
        return Err(Error::Fit("all abscissae are equal".into()));
    }
    let slope = suv / suu;
    let intercept = mv - slope * mu;
    let ss_tot: f64 = pts.iter().map(|p| (p.1 - mv).powi(2)).sum();
    let ss_res: f64 = pts
        .iter()
        .map(|p| (p.1 - slope * p.0 - intercept).powi(2))
        .sum();
    let r_squared = if ss_tot == 0.0 {
        1.0
    } else {
        (1.0 - ss_res / ss_tot).clamp(0.0, 1.0)
    };
    Ok(RateFit {
        model,
        slope,
        intercept,
        r_squared,
        points_used: pts.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn synthetic_series() {
        let s: Vec<_> = [10.0, 100.0, 1000.0]
            .iter()
            .map(|&t: &f64| (t, t.powi(-2)))
            .collect();
        let f = fit_rate(&s, RateModel::PowerLaw).unwrap();
        assert!((f.slope + 2.0).abs() < 1e-9 && (f.r_squared - 1.0).abs() < 1e-12);

        let s: Vec<_> = (1..20)
            .map(|t| (t as f64, (-0.1 * t as f64).exp()))
            .collect();
        let f = fit_rate(&s, RateModel::Exponential).unwrap();
        assert!((f.slope + 0.1).abs() < 1e-9);

        let s = [(1.0, 3.0), (2.0, 3.0), (4.0, 3.0)];
        let f = fit_rate(&s, RateModel::PowerLaw).unwrap();
        assert_eq!(f.slope, 0.0);
        assert_eq!(f.r_squared, 1.0);
    }

    #[test]
    fn floor_and_count() {
        let s = [(1.0, 1.0), (2.0, 1e-13), (3.0, 0.5)];
        assert!(matches!(
            fit_rate(&s, RateModel::Exponential),
            Err(Error::Fit(_))
        ));
    }
}
