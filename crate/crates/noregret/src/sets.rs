//! Origin-centred constraint sets: ℓp balls with `p ∈ (1, 2]`, Euclidean balls
//! and boxes.
//!
//! Each set answers membership, gauge, linear optimization and Euclidean
//! projection queries, and reports the two curvature constants the rate
//! results consume: `λ` (strong convexity of the set) and `β` (strong
//! convexity of the squared gauge).

use std::cell::Cell;

use crate::error::{Error, Result};
use crate::point::{check_dim, Point};

#[derive(Debug, Clone, PartialEq)]
pub enum SetKind {
    LpBall { p: f64, r: f64 },
    L2Ball { r: f64 },
    Box { lower: Vec<f64>, upper: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvexSet {
    kind: SetKind,
    dim: usize,
}

fn check_radius(r: f64) -> Result<()> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::Config(format!("radius must be positive, got {r}")));
    }
    Ok(())
}

impl ConvexSet {
    pub fn l2_ball(dim: usize, r: f64) -> Result<Self> {
        check_radius(r)?;
        if dim == 0 {
            return Err(Error::Dimension("sets need dimension at least 1".into()));
        }
        Ok(ConvexSet {
            kind: SetKind::L2Ball { r },
            dim,
        })
    }

    /// `{x : ‖x‖_p ≤ r}`. `p = 2` yields the Euclidean ball; `p` outside
    /// `(1, 2]` is rejected because the curvature constants are only known there.
    pub fn lp_ball(dim: usize, p: f64, r: f64) -> Result<Self> {
        if !(p > 1.0 && p <= 2.0) {
            return Err(Error::Config(format!("ℓp balls need p in (1, 2], got {p}")));
        }
        if p == 2.0 {
            return ConvexSet::l2_ball(dim, r);
        }
        check_radius(r)?;
        if dim == 0 {
            return Err(Error::Dimension("sets need dimension at least 1".into()));
        }
        Ok(ConvexSet {
            kind: SetKind::LpBall { p, r },
            dim,
        })
    }

    pub fn boxed(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        check_dim("box bounds", upper.len(), lower.len())?;
        if lower.is_empty() {
            return Err(Error::Dimension("sets need dimension at least 1".into()));
        }
        for (l, u) in lower.iter().zip(&upper) {
            if !(l <= u) || !l.is_finite() || !u.is_finite() {
                return Err(Error::Config(format!("invalid box side [{l}, {u}]")));
            }
        }
        let dim = lower.len();
        Ok(ConvexSet {
            kind: SetKind::Box { lower, upper },
            dim,
        })
    }

    /// `[-1, 1]^dim` scaled by `half_width`.
    pub fn cube(dim: usize, half_width: f64) -> Result<Self> {
        ConvexSet::boxed(vec![-half_width; dim], vec![half_width; dim])
    }

    pub fn kind(&self) -> &SetKind {
        &self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn radius(&self) -> Option<f64> {
        match self.kind {
            SetKind::LpBall { r, .. } | SetKind::L2Ball { r } => Some(r),
            SetKind::Box { .. } => None,
        }
    }

    /// Strong convexity of the set: `(p − 1)/r` for ℓp balls, zero for boxes.
    pub fn lambda(&self) -> f64 {
        match self.kind {
            SetKind::LpBall { p, r } => (p - 1.0) / r,
            SetKind::L2Ball { r } => 1.0 / r,
            SetKind::Box { .. } => 0.0,
        }
    }

    /// Strong convexity of the squared gauge: `2(p − 1)/r²`, zero for boxes.
    pub fn beta(&self) -> f64 {
        match self.kind {
            SetKind::LpBall { p, r } => 2.0 * (p - 1.0) / (r * r),
            SetKind::L2Ball { r } => 2.0 / (r * r),
            SetKind::Box { .. } => 0.0,
        }
    }

    pub fn contains_origin(&self) -> bool {
        match &self.kind {
            SetKind::Box { lower, upper } => {
                lower.iter().zip(upper).all(|(l, u)| *l <= 0.0 && 0.0 <= *u)
            }
            _ => true,
        }
    }

    fn origin_interior(&self) -> bool {
        match &self.kind {
            SetKind::Box { lower, upper } => {
                lower.iter().zip(upper).all(|(l, u)| *l < 0.0 && 0.0 < *u)
            }
            _ => true,
        }
    }

    /// Membership with absolute slack `tol`.
    pub fn contains(&self, x: &Point, tol: f64) -> bool {
        if x.dim() != self.dim {
            return false;
        }
        match &self.kind {
            SetKind::L2Ball { r } => x.norm() <= r + tol,
            SetKind::LpBall { p, r } => lp_norm(x, *p) <= r + tol,
            SetKind::Box { lower, upper } => x
                .iter()
                .zip(lower.iter().zip(upper))
                .all(|(v, (l, u))| *v >= l - tol && *v <= u + tol),
        }
    }

    /// Gauge `inf{c ≥ 0 : x/c ∈ K}`.
    ///
    /// Boxes only support this when the origin is interior; otherwise the
    /// gauge can be infinite and the call is rejected.
    pub fn gauge(&self, x: &Point) -> Result<f64> {
        check_dim("gauge", x.dim(), self.dim)?;
        match &self.kind {
            SetKind::L2Ball { r } => Ok(x.norm() / r),
            SetKind::LpBall { p, r } => Ok(lp_norm(x, *p) / r),
            SetKind::Box { lower, upper } => {
                if !self.origin_interior() {
                    return Err(Error::Unsupported(
                        "the gauge of a box is only defined here when the origin is interior"
                            .into(),
                    ));
                }
                Ok(x.iter()
                    .zip(lower.iter().zip(upper))
                    .map(|(v, (l, u))| if *v > 0.0 { v / u } else { v / l })
                    .fold(0.0, f64::max))
            }
        }
    }

    /// `argmin_{x ∈ K} ⟨c, x⟩`.
    ///
    /// At `c = 0` balls return `r e₁` and boxes their lower corner; boxes also
    /// take the lower bound on coordinates where `c_i = 0`.
    ///
    /// # Panics
    /// If `c` has the wrong dimension.
    pub fn lin_opt(&self, c: &Point) -> Point {
        assert_eq!(c.dim(), self.dim, "lin_opt: dimension mismatch");
        match &self.kind {
            SetKind::L2Ball { r } => {
                let n = c.norm();
                if n == 0.0 {
                    return Point::basis(self.dim, 0, *r);
                }
                c.scaled(-r / n)
            }
            SetKind::LpBall { p, r } => lp_lin_opt(c, *p, *r),
            SetKind::Box { lower, upper } => Point::raw(
                c.iter()
                    .zip(lower.iter().zip(upper))
                    .map(|(ci, (l, u))| if *ci < 0.0 { *u } else { *l })
                    .collect(),
            ),
        }
    }

    /// Euclidean projection onto the set.
    ///
    /// # Panics
    /// If `x` has the wrong dimension.
    pub fn project(&self, x: &Point) -> Point {
        assert_eq!(x.dim(), self.dim, "project: dimension mismatch");
        match &self.kind {
            SetKind::L2Ball { r } => {
                let n = x.norm();
                if n <= *r {
                    x.clone()
                } else {
                    x.scaled(r / n)
                }
            }
            SetKind::LpBall { p, r } => lp_project(x, *p, *r),
            SetKind::Box { lower, upper } => Point::raw(
                x.iter()
                    .zip(lower.iter().zip(upper))
                    .map(|(v, (l, u))| v.clamp(*l, *u))
                    .collect(),
            ),
        }
    }

    /// Euclidean diameter.
    pub fn diameter(&self) -> f64 {
        match &self.kind {
            // for p ≤ 2 the ball sits inside the ℓ2 ball of radius r and holds ±r e_i
            SetKind::L2Ball { r } | SetKind::LpBall { r, .. } => 2.0 * r,
            SetKind::Box { lower, upper } => lower
                .iter()
                .zip(upper)
                .map(|(l, u)| (u - l) * (u - l))
                .sum::<f64>()
                .sqrt(),
        }
    }

    /// Smallest axis-aligned box containing the set.
    pub fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        match &self.kind {
            SetKind::L2Ball { r } | SetKind::LpBall { r, .. } => {
                (vec![-r; self.dim], vec![*r; self.dim])
            }
            SetKind::Box { lower, upper } => (lower.clone(), upper.clone()),
        }
    }

    /// Maximizer of `⟨c, x⟩` with ties broken towards the largest point: the
    /// upper bound for box coordinates with `c_i = 0`, `r e₁` for balls at `c = 0`.
    pub fn argmax_linear(&self, c: &Point) -> Point {
        match &self.kind {
            SetKind::Box { lower, upper } => Point::raw(
                c.iter()
                    .zip(lower.iter().zip(upper))
                    .map(|(ci, (l, u))| if *ci < 0.0 { *l } else { *u })
                    .collect(),
            ),
            _ => self.lin_opt(&c.scaled(-1.0)),
        }
    }
}

/// `‖x‖_p`, computed on `x / max|x_i|` to avoid overflow and underflow.
pub fn lp_norm(x: &[f64], p: f64) -> f64 {
    let m = x.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if m == 0.0 {
        return 0.0;
    }
    if p == 2.0 {
        return m * x.iter().map(|v| (v / m) * (v / m)).sum::<f64>().sqrt();
    }
    m * x
        .iter()
        .map(|v| (v.abs() / m).powf(p))
        .sum::<f64>()
        .powf(1.0 / p)
}

// x_i = −r sign(c_i) |c_i|^{q−1} / ‖c‖_q^{q−1}, q the dual exponent
fn lp_lin_opt(c: &Point, p: f64, r: f64) -> Point {
    let m = c.max_abs();
    if m == 0.0 {
        return Point::basis(c.dim(), 0, r);
    }
    let q = p / (p - 1.0);
    let s: f64 = c.iter().map(|v| (v.abs() / m).powf(q)).sum();
    let denom = s.powf((q - 1.0) / q);
    Point::raw(
        c.iter()
            .map(|v| -r * v.signum() * (v.abs() / m).powf(q - 1.0) / denom)
            .collect(),
    )
}

// Root of u + μ p u^{p−1} = a on [0, a]; the left side is increasing in u.
fn lp_scalar_root(a: f64, mu: f64, p: f64) -> f64 {
    if a == 0.0 || mu == 0.0 {
        return a;
    }
    let (mut lo, mut hi) = (0.0_f64, a);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if mid + mu * p * mid.powf(p - 1.0) > a {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    lo
}

// Lagrangian bisection on μ ≥ 0: z_i = sign(x_i) u_i(μ), choose μ with Σ u_i^p = r^p.
fn lp_project(x: &Point, p: f64, r: f64) -> Point {
    if lp_norm(x, p) <= r {
        return x.clone();
    }
    let target = r.powf(p);
    let mass = |mu: f64| -> f64 {
        x.iter()
            .map(|v| lp_scalar_root(v.abs(), mu, p).powf(p))
            .sum()
    };
    let mut hi = 1.0;
    while mass(hi) > target {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo <= 1e-15 * hi {
            break;
        }
        if mass(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // the upper end of the bracket is always feasible
    Point::raw(
        x.iter()
            .map(|v| v.signum() * lp_scalar_root(v.abs(), hi, p))
            .collect(),
    )
}

/// The bound on best-response movement over a `λ`-strongly convex set:
/// `‖x_p − x_q‖ ≤ 2‖p − q‖ / (λ(‖p‖ + ‖q‖))` where `x_v = argmax_{x∈K} ⟨v, x⟩`.
///
/// Returns whether the inequality holds with `1e-9` slack.
pub fn strongly_convex_br_lipschitz_check(set: &ConvexSet, p: &Point, q: &Point) -> Result<bool> {
    let lambda = set.lambda();
    if !(lambda > 0.0) {
        return Err(Error::Unsupported("the set is not strongly convex".into()));
    }
    check_dim("lipschitz check", p.dim(), set.dim())?;
    check_dim("lipschitz check", q.dim(), set.dim())?;
    if p.norm() == 0.0 || q.norm() == 0.0 {
        return Err(Error::Domain(
            "the best-response bound needs nonzero vectors".into(),
        ));
    }
    let xp = set.lin_opt(&p.scaled(-1.0));
    let xq = set.lin_opt(&q.scaled(-1.0));
    let lhs = xp.dist(&xq);
    let rhs = 2.0 * p.dist(q) / (lambda * (p.norm() + q.norm()));
    Ok(lhs <= rhs + 1e-9)
}

/// Anything that can answer linear minimization queries.
pub trait LinearOracle {
    fn lin_opt(&self, c: &Point) -> Point;
}

impl LinearOracle for ConvexSet {
    fn lin_opt(&self, c: &Point) -> Point {
        ConvexSet::lin_opt(self, c)
    }
}

/// Wraps a set and counts the linear minimization calls made through it.
#[derive(Debug)]
pub struct CountingOracle<'a> {
    set: &'a ConvexSet,
    calls: Cell<usize>,
}

impl<'a> CountingOracle<'a> {
    pub fn new(set: &'a ConvexSet) -> Self {
        CountingOracle {
            set,
            calls: Cell::new(0),
        }
    }

    pub fn calls(&self) -> usize {
        self.calls.get()
    }
}

impl LinearOracle for CountingOracle<'_> {
    fn lin_opt(&self, c: &Point) -> Point {
        self.calls.set(self.calls.get() + 1);
        self.set.lin_opt(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants() {
        let b = ConvexSet::lp_ball(3, 1.5, 2.0).unwrap();
        assert!((b.lambda() - 0.25).abs() < 1e-15);
        assert!((b.beta() - 0.25).abs() < 1e-15);
        let e = ConvexSet::lp_ball(3, 2.0, 2.0).unwrap();
        assert!(matches!(e.kind(), SetKind::L2Ball { .. }));
        assert_eq!(e.lambda(), 0.5);
        assert_eq!(e.beta(), 0.5);
        let c = ConvexSet::cube(2, 1.0).unwrap();
        assert_eq!((c.lambda(), c.beta()), (0.0, 0.0));
        assert!(ConvexSet::lp_ball(2, 2.5, 1.0).is_err());
        assert!(ConvexSet::lp_ball(2, 1.0, 1.0).is_err());
        assert!(ConvexSet::l2_ball(2, 0.0).is_err());
    }

    #[test]
    fn gauge_examples() {
        let b = ConvexSet::l2_ball(2, 2.0).unwrap();
        assert!((b.gauge(&Point::of(&[1.0, 1.0])).unwrap() - 0.5_f64.sqrt()).abs() < 1e-15);
        assert_eq!(b.gauge(&Point::zeros(2)).unwrap(), 0.0);
        let lp = ConvexSet::lp_ball(2, 1.5, 1.0).unwrap();
        let g = lp.gauge(&Point::of(&[1.0, 1.0])).unwrap();
        assert!((g - 2f64.powf(2.0 / 3.0)).abs() < 1e-12);
    }

    #[test]
    fn box_gauge_needs_interior_origin() {
        let b = ConvexSet::boxed(vec![0.0, -1.0], vec![1.0, 1.0]).unwrap();
        assert!(matches!(
            b.gauge(&Point::of(&[0.5, 0.5])),
            Err(Error::Unsupported(_))
        ));
        let b = ConvexSet::boxed(vec![-2.0, -1.0], vec![1.0, 4.0]).unwrap();
        assert_eq!(b.gauge(&Point::of(&[-1.0, 2.0])).unwrap(), 0.5);
    }

    #[test]
    fn lin_opt_examples() {
        let b = ConvexSet::l2_ball(2, 1.0).unwrap();
        assert_eq!(b.lin_opt(&Point::of(&[3.0, 0.0])), Point::of(&[-1.0, 0.0]));
        assert_eq!(b.lin_opt(&Point::zeros(2)), Point::of(&[1.0, 0.0]));
        let c = ConvexSet::cube(2, 1.0).unwrap();
        assert_eq!(c.lin_opt(&Point::of(&[2.0, -5.0])), Point::of(&[-1.0, 1.0]));
        assert_eq!(c.lin_opt(&Point::zeros(2)), Point::of(&[-1.0, -1.0]));
        let lp = ConvexSet::lp_ball(2, 1.5, 1.0).unwrap();
        let x = lp.lin_opt(&Point::of(&[1.0, 1.0]));
        let want = -(2f64.powf(-2.0 / 3.0));
        assert!((x[0] - want).abs() < 1e-12 && (x[1] - want).abs() < 1e-12);
    }

    #[test]
    fn project_examples() {
        let b = ConvexSet::l2_ball(2, 1.0).unwrap();
        let p = b.project(&Point::of(&[3.0, 4.0]));
        assert!(p.dist(&Point::of(&[0.6, 0.8])) < 1e-15);
        let c = ConvexSet::boxed(vec![0.0, 0.0], vec![1.0, 1.0]).unwrap();
        assert_eq!(c.project(&Point::of(&[-2.0, 0.5])), Point::of(&[0.0, 0.5]));
        let b2 = ConvexSet::l2_ball(2, 2.0).unwrap();
        assert_eq!(b2.project(&Point::of(&[1.0, 0.0])), Point::of(&[1.0, 0.0]));
    }

    #[test]
    fn lp_projection_satisfies_kkt() {
        let lp = ConvexSet::lp_ball(3, 1.5, 1.0).unwrap();
        let x = Point::of(&[2.0, -0.5, 0.1]);
        let z = lp.project(&x);
        assert!((lp_norm(&z, 1.5) - 1.0).abs() < 1e-10);
        // x − z is parallel to the gradient of ‖·‖_p^p at z
        let g: Vec<f64> = z.iter().map(|v| v.signum() * v.abs().sqrt()).collect();
        let d = x.sub(&z);
        let mu = d[0] / g[0];
        for i in 0..3 {
            assert!((d[i] - mu * g[i]).abs() < 1e-8, "coordinate {i}");
        }
    }

    #[test]
    fn br_lipschitz_examples() {
        let b = ConvexSet::l2_ball(2, 1.0).unwrap();
        let p = Point::of(&[1.0, 0.0]);
        let q = Point::of(&[0.0, 1.0]);
        assert!(strongly_convex_br_lipschitz_check(&b, &p, &q).unwrap());
        let p = Point::of(&[1.0, 1.0]);
        assert!(strongly_convex_br_lipschitz_check(&b, &p, &p).unwrap());
        assert!(strongly_convex_br_lipschitz_check(&b, &Point::zeros(2), &p).is_err());
        let c = ConvexSet::cube(2, 1.0).unwrap();
        assert!(strongly_convex_br_lipschitz_check(&c, &p, &p).is_err());
    }

    #[test]
    fn counting_oracle_counts() {
        let b = ConvexSet::l2_ball(2, 1.0).unwrap();
        let o = CountingOracle::new(&b);
        for _ in 0..5 {
            o.lin_opt(&Point::of(&[1.0, 2.0]));
        }
        assert_eq!(o.calls(), 5);
    }
}
