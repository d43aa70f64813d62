use crate::error::{Error, Result};
use crate::point::Point;

/// Default minimum gradient norm accepted by the adaptive schedule.
pub const DEFAULT_GRADIENT_FLOOR: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightKind {
    /// `α_t = 1`
    Uniform,
    /// `α_t = t`
    Linear,
    /// `α_t = ‖∇ℓ_t(x_t)‖⁻²`
    AdaptiveInvGradSq,
}

/// Rule producing the per-round weights `α_t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightSchedule {
    pub kind: WeightKind,
    /// Smallest gradient norm the adaptive kind accepts. Ignored otherwise.
    pub floor: f64,
}

impl WeightSchedule {
    pub fn uniform() -> Self {
        WeightSchedule {
            kind: WeightKind::Uniform,
            floor: DEFAULT_GRADIENT_FLOOR,
        }
    }

    pub fn linear() -> Self {
        WeightSchedule {
            kind: WeightKind::Linear,
            floor: DEFAULT_GRADIENT_FLOOR,
        }
    }

    pub fn adaptive() -> Self {
        WeightSchedule {
            kind: WeightKind::AdaptiveInvGradSq,
            floor: DEFAULT_GRADIENT_FLOOR,
        }
    }

    pub fn adaptive_with_floor(floor: f64) -> Result<Self> {
        if !(floor > 0.0) || !floor.is_finite() {
            return Err(Error::Config(format!(
                "gradient floor must be positive, got {floor}"
            )));
        }
        Ok(WeightSchedule {
            kind: WeightKind::AdaptiveInvGradSq,
            floor,
        })
    }

    pub fn is_adaptive(&self) -> bool {
        self.kind == WeightKind::AdaptiveInvGradSq
    }

    /// The weight of round `t` when it does not depend on the round's play.
    pub fn known_ahead(&self, t: usize) -> Option<f64> {
        match self.kind {
            WeightKind::Uniform => Some(1.0),
            WeightKind::Linear => Some(t as f64),
            WeightKind::AdaptiveInvGradSq => None,
        }
    }

    pub fn emit(&self, t: usize, grad: Option<&Point>) -> Result<f64> {
        emit_weight(self, t, grad)
    }
}

/// Weight of round `t` (rounds are 1-based).
///
/// The adaptive kind needs the gradient `∇ℓ_t(x_t)` and refuses gradients
/// shorter than the schedule's floor instead of clamping them.
pub fn emit_weight(schedule: &WeightSchedule, t: usize, grad: Option<&Point>) -> Result<f64> {
    if t == 0 {
        return Err(Error::Domain("rounds are numbered from 1".into()));
    }
    match schedule.kind {
        WeightKind::Uniform => Ok(1.0),
        WeightKind::Linear => Ok(t as f64),
        WeightKind::AdaptiveInvGradSq => {
            let g = grad.ok_or_else(|| {
                Error::Config("the adaptive schedule needs the round's loss gradient".into())
            })?;
            let norm = g.norm();
            if !(norm >= schedule.floor) {
                return Err(Error::DegenerateGradient {
                    norm,
                    floor: schedule.floor,
                });
            }
            Ok(1.0 / (norm * norm))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(
            emit_weight(&WeightSchedule::linear(), 7, None).unwrap(),
            7.0
        );
        let g = Point::of(&[3.0, 4.0]);
        let a = emit_weight(&WeightSchedule::adaptive(), 1, Some(&g)).unwrap();
        assert!((a - 0.04).abs() < 1e-15);
        assert_eq!(
            emit_weight(&WeightSchedule::uniform(), 100, None).unwrap(),
            1.0
        );
    }

    #[test]
    fn adaptive_floor_is_enforced() {
        let g = Point::of(&[1e-12, 0.0]);
        let err = emit_weight(&WeightSchedule::adaptive(), 4, Some(&g)).unwrap_err();
        assert!(matches!(err, Error::DegenerateGradient { .. }));
        assert!(emit_weight(&WeightSchedule::adaptive(), 4, None).is_err());
        assert!(WeightSchedule::adaptive_with_floor(0.0).is_err());
    }

    #[test]
    fn round_zero_is_rejected() {
        assert!(emit_weight(&WeightSchedule::uniform(), 0, None).is_err());
    }
}
