use std::fmt;
use std::ops::Deref;

use crate::error::{Error, Result};

/// Dense real vector with at least one coordinate, all finite.
///
/// Used for player actions, gradients, cumulative loss vectors and hints alike.
#[derive(Debug, Clone, PartialEq)]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::Dimension(
                "a point needs at least one coordinate".into(),
            ));
        }
        if let Some(i) = coords.iter().position(|v| !v.is_finite()) {
            return Err(Error::Domain(format!(
                "coordinate {i} is not finite ({})",
                coords[i]
            )));
        }
        Ok(Point(coords))
    }

    /// Builds a point from a literal, panicking on empty or non-finite input.
    /// Meant for examples and tests.
    pub fn of(coords: &[f64]) -> Self {
        Point::new(coords.to_vec()).expect("invalid point literal")
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "a point needs at least one coordinate");
        Point(vec![0.0; dim])
    }

    /// `scale` times the `i`-th standard basis vector.
    pub fn basis(dim: usize, i: usize, scale: f64) -> Self {
        let mut p = Point::zeros(dim);
        p.0[i] = scale;
        p
    }

    /// Internal constructor for results of arithmetic on valid points.
    pub(crate) fn raw(coords: Vec<f64>) -> Self {
        debug_assert!(!coords.is_empty());
        Point(coords)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }

    pub fn dot(&self, other: &Point) -> f64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn dist(&self, other: &Point) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    pub fn scaled(&self, a: f64) -> Point {
        Point(self.0.iter().map(|v| a * v).collect())
    }

    pub fn add(&self, other: &Point) -> Point {
        debug_assert_eq!(self.dim(), other.dim());
        Point(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Point) -> Point {
        debug_assert_eq!(self.dim(), other.dim());
        Point(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    /// `self += a * other`
    pub fn axpy(&mut self, a: f64, other: &Point) {
        debug_assert_eq!(self.dim(), other.dim());
        for (s, o) in self.0.iter_mut().zip(&other.0) {
            *s += a * o;
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }
}

impl Deref for Point {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

pub(crate) fn check_dim(what: &str, got: usize, want: usize) -> Result<()> {
    if got != want {
        return Err(Error::Dimension(format!(
            "{what}: expected dimension {want}, got {got}"
        )));
    }
    Ok(())
}

/// `Σ α_s p_s / Σ α_s`.
pub fn weighted_average(points: &[Point], weights: &[f64]) -> Result<Point> {
    if points.is_empty() {
        return Err(Error::Dimension("no points to average".into()));
    }
    if points.len() != weights.len() {
        return Err(Error::Dimension(format!(
            "{} points but {} weights",
            points.len(),
            weights.len()
        )));
    }
    let d = points[0].dim();
    let mut sum = Point::zeros(d);
    let mut total = 0.0;
    for (p, &w) in points.iter().zip(weights) {
        check_dim("weighted_average", p.dim(), d)?;
        if !(w > 0.0) || !w.is_finite() {
            return Err(Error::Domain(format!(
                "weights must be positive and finite, got {w}"
            )));
        }
        sum.axpy(w, p);
        total += w;
    }
    Ok(sum.scaled(1.0 / total))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_empty_and_non_finite() {
        assert!(matches!(Point::new(vec![]), Err(Error::Dimension(_))));
        assert!(matches!(
            Point::new(vec![1.0, f64::NAN]),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            Point::new(vec![f64::INFINITY]),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn weighted_average_examples() {
        let pts = [Point::of(&[0.0]), Point::of(&[3.0]), Point::of(&[6.0])];
        assert_eq!(
            weighted_average(&pts, &[1.0, 2.0, 3.0]).unwrap(),
            Point::of(&[4.0])
        );

        let p = Point::of(&[1.5, -2.0]);
        assert_eq!(weighted_average(std::slice::from_ref(&p), &[0.3]).unwrap(), p);

        let pts = [Point::of(&[1.0, 0.0]), Point::of(&[0.0, 1.0])];
        assert_eq!(
            weighted_average(&pts, &[1.0, 1.0]).unwrap(),
            Point::of(&[0.5, 0.5])
        );
    }

    #[test]
    fn weighted_average_errors() {
        let pts = [Point::of(&[1.0]), Point::of(&[1.0, 2.0])];
        assert!(matches!(
            weighted_average(&pts, &[1.0, 1.0]),
            Err(Error::Dimension(_))
        ));
        assert!(matches!(
            weighted_average(&pts[..1], &[1.0, 1.0]),
            Err(Error::Dimension(_))
        ));
        assert!(matches!(
            weighted_average(&pts[..1], &[0.0]),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            weighted_average(&pts[..1], &[-1.0]),
            Err(Error::Domain(_))
        ));
    }
}
