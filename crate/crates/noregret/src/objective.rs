use std::fmt::Debug;

use crate::error::{Error, Result};
use crate::point::{check_dim, Point};
use crate::sets::{ConvexSet, SetKind};

/// A differentiable convex objective with known curvature bounds.
pub trait SmoothObjective: Debug + Send + Sync {
    fn dim(&self) -> usize;
    fn value(&self, y: &Point) -> f64;
    fn gradient(&self, y: &Point) -> Point;
    /// Smoothness constant `L`.
    fn smoothness(&self) -> f64;
    /// Strong convexity constant `σ`; zero for merely convex objectives.
    fn strong_convexity(&self) -> f64;

    /// Fenchel conjugate `f*(x) = sup_y ⟨x,y⟩ − f(y)`, when it has a closed form.
    fn conjugate(&self, _x: &Point) -> Option<f64> {
        None
    }

    /// `∇f*(x)`, the point at which the supremum defining `f*(x)` is attained.
    fn conjugate_gradient(&self, _x: &Point) -> Option<Point> {
        None
    }

    /// Exact minimizer over `set`, when one is available in closed form.
    fn minimizer_over(&self, _set: &ConvexSet) -> Option<Point> {
        None
    }
}

/// `f(y) = ½ Σ h_i (y_i − c_i)²` with every `h_i > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Quadratic {
    h: Vec<f64>,
    c: Point,
}

impl Quadratic {
    pub fn new(h: Vec<f64>, c: Point) -> Result<Self> {
        check_dim("quadratic curvature", h.len(), c.dim())?;
        if let Some(v) = h.iter().find(|v| !(**v > 0.0) || !v.is_finite()) {
            return Err(Error::Domain(format!(
                "curvatures must be positive, got {v}"
            )));
        }
        Ok(Quadratic { h, c })
    }

    /// `½‖y − c‖²`
    pub fn isotropic(c: Point) -> Self {
        Quadratic {
            h: vec![1.0; c.dim()],
            c,
        }
    }

    pub fn centre(&self) -> &Point {
        &self.c
    }

    pub fn curvature(&self) -> &[f64] {
        &self.h
    }
}

impl SmoothObjective for Quadratic {
    fn dim(&self) -> usize {
        self.c.dim()
    }

    fn value(&self, y: &Point) -> f64 {
        0.5 * y
            .iter()
            .zip(self.c.iter())
            .zip(&self.h)
            .map(|((yi, ci), hi)| hi * (yi - ci) * (yi - ci))
            .sum::<f64>()
    }

    fn gradient(&self, y: &Point) -> Point {
        Point::raw(
            y.iter()
                .zip(self.c.iter())
                .zip(&self.h)
                .map(|((yi, ci), hi)| hi * (yi - ci))
                .collect(),
        )
    }

    fn smoothness(&self) -> f64 {
        self.h.iter().cloned().fold(f64::MIN, f64::max)
    }

    fn strong_convexity(&self) -> f64 {
        self.h.iter().cloned().fold(f64::MAX, f64::min)
    }

    // f*(x) = ½ xᵀH⁻¹x + ⟨x, c⟩
    fn conjugate(&self, x: &Point) -> Option<f64> {
        Some(
            x.iter()
                .zip(self.c.iter())
                .zip(&self.h)
                .map(|((xi, ci), hi)| 0.5 * xi * xi / hi + xi * ci)
                .sum(),
        )
    }

    fn conjugate_gradient(&self, x: &Point) -> Option<Point> {
        Some(Point::raw(
            x.iter()
                .zip(self.c.iter())
                .zip(&self.h)
                .map(|((xi, ci), hi)| xi / hi + ci)
                .collect(),
        ))
    }

    fn minimizer_over(&self, set: &ConvexSet) -> Option<Point> {
        match set.kind() {
            // separable, so clipping each coordinate is exact
            SetKind::Box { .. } => Some(set.project(&self.c)),
            SetKind::L2Ball { r } => Some(diagonal_quadratic_over_ball(&self.h, &self.c, *r)),
            SetKind::LpBall { .. } => {
                if set.contains(&self.c, 0.0) {
                    Some(self.c.clone())
                } else {
                    None
                }
            }
        }
    }
}

// KKT: y(μ) = H c / (H + μ) with ‖y(μ)‖ = r; ‖y(μ)‖ decreases in μ.
fn diagonal_quadratic_over_ball(h: &[f64], c: &Point, r: f64) -> Point {
    if c.norm() <= r {
        return c.clone();
    }
    let y_of = |mu: f64| -> Point {
        Point::raw(
            h.iter()
                .zip(c.iter())
                .map(|(hi, ci)| hi * ci / (hi + mu))
                .collect(),
        )
    };
    let mut hi = 1.0;
    while y_of(hi).norm() > r {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if y_of(mid).norm() > r {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    y_of(hi)
}

/// Central finite-difference gradient with step `1e-6 (1 + ‖x‖)`.
pub fn finite_difference_gradient(f: &dyn SmoothObjective, x: &Point) -> Point {
    let h = 1e-6 * (1.0 + x.norm());
    let mut g = Vec::with_capacity(x.dim());
    let mut probe = x.clone().into_vec();
    for i in 0..x.dim() {
        let orig = probe[i];
        probe[i] = orig + h;
        let up = f.value(&Point::raw(probe.clone()));
        probe[i] = orig - h;
        let down = f.value(&Point::raw(probe.clone()));
        probe[i] = orig;
        g.push((up - down) / (2.0 * h));
    }
    Point::raw(g)
}

/// `‖∇f(x) − FD(f, x)‖ / (1 + ‖∇f(x)‖)`.
pub fn gradient_check(f: &dyn SmoothObjective, x: &Point) -> f64 {
    let g = f.gradient(x);
    g.dist(&finite_difference_gradient(f, x)) / (1.0 + g.norm())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quad() -> Quadratic {
        Quadratic::new(vec![2.0, 0.5, 1.0], Point::of(&[1.0, -2.0, 0.25])).unwrap()
    }

    #[test]
    fn constants_and_validation() {
        let q = quad();
        assert_eq!(q.smoothness(), 2.0);
        assert_eq!(q.strong_convexity(), 0.5);
        assert!(Quadratic::new(vec![1.0, 0.0], Point::of(&[0.0, 0.0])).is_err());
        assert!(Quadratic::new(vec![1.0], Point::of(&[0.0, 0.0])).is_err());
    }

    #[test]
    fn conjugate_inverts_gradient() {
        let q = quad();
        let y = Point::of(&[0.3, 0.7, -1.1]);
        let x = q.gradient(&y);
        let back = q.conjugate_gradient(&x).unwrap();
        assert!(back.dist(&y) < 1e-14);
        // Fenchel-Young holds with equality at x = ∇f(y)
        let fy = q.value(&y) + q.conjugate(&x).unwrap();
        assert!((fy - x.dot(&y)).abs() < 1e-13);
    }

    #[test]
    fn ball_minimizer_satisfies_kkt() {
        let q = Quadratic::new(vec![4.0, 1.0], Point::of(&[2.0, 1.0])).unwrap();
        let set = ConvexSet::l2_ball(2, 1.0).unwrap();
        let y = q.minimizer_over(&set).unwrap();
        assert!((y.norm() - 1.0).abs() < 1e-12);
        // gradient points inward along the normal: ∇f(y) = −μ y
        let g = q.gradient(&y);
        let cross = g[0] * y[1] - g[1] * y[0];
        assert!(cross.abs() < 1e-10 && g.dot(&y) < 0.0);
    }
}
