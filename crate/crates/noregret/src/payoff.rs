//! Convex-concave payoffs `g(x, y)`: the x-player minimizes, the y-player
//! maximizes.

use std::fmt::Debug;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::point::{check_dim, Point};
use crate::sets::ConvexSet;

/// Curvature and size constants of a game.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GameConstants {
    /// Smoothness of `g` in `x`.
    pub l: f64,
    pub sigma_x: f64,
    pub sigma_y: f64,
    /// Upper bound on the loss gradients `‖∇ℓ_t‖`.
    pub g: f64,
    /// Lower bound on `‖∇f‖` over the y-set (Frank-Wolfe games), zero if none.
    pub b: f64,
    /// Size of the regularizer or of the decision set.
    pub d: f64,
}

impl GameConstants {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("L", self.l), ("G", self.g), ("D", self.d)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::Config(format!("{name} must be positive, got {v}")));
            }
        }
        for (name, v) in [
            ("sigma_x", self.sigma_x),
            ("sigma_y", self.sigma_y),
            ("B", self.b),
        ] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::Config(format!(
                    "{name} must be nonnegative, got {v}"
                )));
            }
        }
        if self.sigma_x > self.l * (1.0 + 1e-12) {
            return Err(Error::Config(format!(
                "sigma_x = {} exceeds the smoothness L = {}",
                self.sigma_x, self.l
            )));
        }
        Ok(())
    }
}

/// Running `α`-weighted sum of one player's past actions.
///
/// Every payoff in this crate couples the two players through a term that is
/// linear in the opponent, so `argmin_x Σ α_s g(x, y_s)` only depends on the
/// weighted mean of the `y_s`. Keeping the sum makes each oracle call `O(d)`.
#[derive(Debug, Clone, Default)]
pub struct WeightedHistory {
    sum: Option<Point>,
    total: f64,
    len: usize,
}

impl WeightedHistory {
    pub fn new() -> Self {
        WeightedHistory::default()
    }

    pub fn push(&mut self, alpha: f64, p: &Point) {
        match &mut self.sum {
            Some(s) => s.axpy(alpha, p),
            None => self.sum = Some(p.scaled(alpha)),
        }
        self.total += alpha;
        self.len += 1;
    }

    /// A copy with one extra weighted entry.
    pub fn with(&self, alpha: f64, p: &Point) -> Self {
        let mut h = self.clone();
        h.push(alpha, p);
        h
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn total(&self) -> f64 {
        self.total
    }

    pub fn sum(&self) -> Option<&Point> {
        self.sum.as_ref()
    }

    pub fn mean(&self) -> Option<Point> {
        self.sum.as_ref().map(|s| s.scaled(1.0 / self.total))
    }

    pub(crate) fn require_mean(&self) -> Result<Point> {
        self.mean()
            .ok_or_else(|| Error::Domain("weighted argmin over an empty history".into()))
    }
}

/// A convex-concave game.
pub trait GamePayoff: Debug + Send + Sync {
    fn dim_x(&self) -> usize;
    fn dim_y(&self) -> usize;
    fn value(&self, x: &Point, y: &Point) -> f64;
    fn grad_x(&self, x: &Point, y: &Point) -> Point;
    fn grad_y(&self, x: &Point, y: &Point) -> Point;

    /// Exact minimizer of `g(·, y)` over the x-set.
    fn best_response_x(&self, y: &Point) -> Point;
    /// Exact maximizer of `g(x, ·)` over the y-set.
    fn best_response_y(&self, x: &Point) -> Point;

    /// `argmin_x Σ α_s g(x, y_s)` for the y-actions recorded in `ys`.
    fn argmin_weighted_x(&self, ys: &WeightedHistory) -> Result<Point>;
    /// `argmax_y Σ α_s g(x_s, y)` for the x-actions recorded in `xs`.
    fn argmax_weighted_y(&self, xs: &WeightedHistory) -> Result<Point>;

    fn constants(&self) -> &GameConstants;

    /// The x-player's decision set; `None` means all of `ℝ^d`.
    fn x_set(&self) -> Option<&ConvexSet>;
    fn y_set(&self) -> Option<&ConvexSet>;

    /// `v` with `g(x, y) = ⟨v, x⟩ + const(y)`, when `g` is linear in `x`.
    fn x_loss_vector(&self, _y: &Point) -> Option<Point> {
        None
    }

    /// `v` with `−g(x, y) = ⟨v, y⟩ + const(x)`, when `g` is linear in `y`.
    fn y_loss_vector(&self, _x: &Point) -> Option<Point> {
        None
    }

    /// The value `V*` of the game, when known in closed form.
    fn value_of_game(&self) -> Option<f64> {
        None
    }

    /// A box containing every x that can be a best response; used by grid oracles.
    fn x_search_box(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        self.x_set().map(|s| s.bounding_box())
    }

    fn y_search_box(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        self.y_set().map(|s| s.bounding_box())
    }

    /// Round-one action of learners that have nothing to follow yet.
    fn initial_x(&self) -> Point;
    fn initial_y(&self) -> Point;

    /// `s(x) = max_y g(x, y)`.
    fn envelope(&self, x: &Point) -> f64 {
        self.value(x, &self.best_response_y(x))
    }
}

pub(crate) fn to_dvec(p: &Point) -> DVector<f64> {
    DVector::from_column_slice(p.coords())
}

pub(crate) fn from_dvec(v: DVector<f64>) -> Point {
    Point::raw(v.as_slice().to_vec())
}

pub(crate) fn spectral_norm(m: &DMatrix<f64>) -> f64 {
    m.clone()
        .singular_values()
        .iter()
        .cloned()
        .fold(0.0, f64::max)
}

fn set_reach(set: &ConvexSet) -> f64 {
    0.5 * set.diameter() + {
        let (lo, hi) = set.bounding_box();
        lo.iter()
            .zip(&hi)
            .map(|(l, h)| (0.5 * (l + h)).powi(2))
            .sum::<f64>()
            .sqrt()
    }
}

/// `g(x, y) = xᵀ M y` over two sets.
#[derive(Debug, Clone)]
pub struct Bilinear {
    m: DMatrix<f64>,
    x_set: ConvexSet,
    y_set: ConvexSet,
    constants: GameConstants,
}

impl Bilinear {
    pub fn new(m: DMatrix<f64>, x_set: ConvexSet, y_set: ConvexSet) -> Result<Self> {
        check_dim("bilinear rows", m.nrows(), x_set.dim())?;
        check_dim("bilinear columns", m.ncols(), y_set.dim())?;
        let norm = spectral_norm(&m).max(1e-12);
        let constants = GameConstants {
            l: norm,
            sigma_x: 0.0,
            sigma_y: 0.0,
            g: norm * set_reach(&y_set),
            b: 0.0,
            d: x_set.diameter().max(1e-12),
        };
        Ok(Bilinear {
            m,
            x_set,
            y_set,
            constants,
        })
    }

    /// `g(x, y) = x y` on `[−1, 1] × [−1, 1]`.
    pub fn scalar_unit() -> Self {
        Bilinear::new(
            DMatrix::from_element(1, 1, 1.0),
            ConvexSet::cube(1, 1.0).unwrap(),
            ConvexSet::cube(1, 1.0).unwrap(),
        )
        .unwrap()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    fn my(&self, y: &Point) -> Point {
        from_dvec(&self.m * to_dvec(y))
    }

    fn mtx(&self, x: &Point) -> Point {
        from_dvec(self.m.tr_mul(&to_dvec(x)))
    }
}

impl GamePayoff for Bilinear {
    fn dim_x(&self) -> usize {
        self.x_set.dim()
    }

    fn dim_y(&self) -> usize {
        self.y_set.dim()
    }

    fn value(&self, x: &Point, y: &Point) -> f64 {
        x.dot(&self.my(y))
    }

    fn grad_x(&self, _x: &Point, y: &Point) -> Point {
        self.my(y)
    }

    fn grad_y(&self, x: &Point, _y: &Point) -> Point {
        self.mtx(x)
    }

    fn best_response_x(&self, y: &Point) -> Point {
        self.x_set.argmax_linear(&self.my(y).scaled(-1.0))
    }

    fn best_response_y(&self, x: &Point) -> Point {
        self.y_set.argmax_linear(&self.mtx(x))
    }

    fn argmin_weighted_x(&self, ys: &WeightedHistory) -> Result<Point> {
        Ok(self.best_response_x(&ys.require_mean()?))
    }

    fn argmax_weighted_y(&self, xs: &WeightedHistory) -> Result<Point> {
        Ok(self.best_response_y(&xs.require_mean()?))
    }

    fn constants(&self) -> &GameConstants {
        &self.constants
    }

    fn x_set(&self) -> Option<&ConvexSet> {
        Some(&self.x_set)
    }

    fn y_set(&self) -> Option<&ConvexSet> {
        Some(&self.y_set)
    }

    fn x_loss_vector(&self, y: &Point) -> Option<Point> {
        Some(self.my(y))
    }

    fn y_loss_vector(&self, x: &Point) -> Option<Point> {
        Some(self.mtx(x).scaled(-1.0))
    }

    // x = 0 makes g vanish for every y and y = 0 for every x
    fn value_of_game(&self) -> Option<f64> {
        if self.x_set.contains_origin() && self.y_set.contains_origin() {
            Some(0.0)
        } else {
            None
        }
    }

    fn initial_x(&self) -> Point {
        self.x_set.project(&Point::zeros(self.dim_x()))
    }

    fn initial_y(&self) -> Point {
        self.y_set.project(&Point::zeros(self.dim_y()))
    }
}

/// `g(x, y) = ½σ_x‖x − a‖² + xᵀMy − ½σ_y‖y − b‖²`.
#[derive(Debug, Clone)]
pub struct QuadBilinear {
    sigma_x: f64,
    sigma_y: f64,
    a: Point,
    b: Point,
    m: DMatrix<f64>,
    x_set: ConvexSet,
    y_set: ConvexSet,
    constants: GameConstants,
    saddle: Option<(Point, Point)>,
}

impl QuadBilinear {
    pub fn new(
        sigma_x: f64,
        a: Point,
        m: DMatrix<f64>,
        sigma_y: f64,
        b: Point,
        x_set: ConvexSet,
        y_set: ConvexSet,
    ) -> Result<Self> {
        if !(sigma_x > 0.0) || !(sigma_y > 0.0) {
            return Err(Error::Config(format!(
                "both curvatures must be positive, got sigma_x = {sigma_x}, sigma_y = {sigma_y}"
            )));
        }
        check_dim("x centre", a.dim(), x_set.dim())?;
        check_dim("y centre", b.dim(), y_set.dim())?;
        check_dim("coupling rows", m.nrows(), x_set.dim())?;
        check_dim("coupling columns", m.ncols(), y_set.dim())?;
        let norm = spectral_norm(&m);
        let constants = GameConstants {
            l: sigma_x,
            sigma_x,
            sigma_y,
            g: sigma_x * (set_reach(&x_set) + a.norm()) + norm * set_reach(&y_set),
            b: 0.0,
            d: x_set.diameter(),
        };
        let mut game = QuadBilinear {
            sigma_x,
            sigma_y,
            a,
            b,
            m,
            x_set,
            y_set,
            constants,
            saddle: None,
        };
        game.saddle = game.unconstrained_saddle();
        Ok(game)
    }

    pub fn coupling(&self) -> &DMatrix<f64> {
        &self.m
    }

    pub fn coupling_norm(&self) -> f64 {
        spectral_norm(&self.m)
    }

    pub fn sigma_x(&self) -> f64 {
        self.sigma_x
    }

    pub fn sigma_y(&self) -> f64 {
        self.sigma_y
    }

    /// The saddle point, when it lies inside both sets.
    pub fn saddle(&self) -> Option<&(Point, Point)> {
        self.saddle.as_ref()
    }

    // x = a − M y/σ_x and y = b + Mᵀx/σ_y give (I + MMᵀ/(σ_xσ_y)) x = a − M b/σ_x
    fn unconstrained_saddle(&self) -> Option<(Point, Point)> {
        let n = self.m.nrows();
        let lhs =
            DMatrix::identity(n, n) + &self.m * self.m.transpose() / (self.sigma_x * self.sigma_y);
        let rhs = to_dvec(&self.a) - &self.m * to_dvec(&self.b) / self.sigma_x;
        let x = from_dvec(lhs.lu().solve(&rhs)?);
        let y = self.b.add(&self.mtx(&x).scaled(1.0 / self.sigma_y));
        if self.x_set.contains(&x, 0.0) && self.y_set.contains(&y, 0.0) {
            Some((x, y))
        } else {
            None
        }
    }

    fn my(&self, y: &Point) -> Point {
        from_dvec(&self.m * to_dvec(y))
    }

    fn mtx(&self, x: &Point) -> Point {
        from_dvec(self.m.tr_mul(&to_dvec(x)))
    }
}

impl GamePayoff for QuadBilinear {
    fn dim_x(&self) -> usize {
        self.x_set.dim()
    }

    fn dim_y(&self) -> usize {
        self.y_set.dim()
    }

    fn value(&self, x: &Point, y: &Point) -> f64 {
        let dx = x.sub(&self.a);
        let dy = y.sub(&self.b);
        0.5 * self.sigma_x * dx.dot(&dx) + x.dot(&self.my(y)) - 0.5 * self.sigma_y * dy.dot(&dy)
    }

    fn grad_x(&self, x: &Point, y: &Point) -> Point {
        let mut g = self.my(y);
        g.axpy(self.sigma_x, &x.sub(&self.a));
        g
    }

    fn grad_y(&self, x: &Point, y: &Point) -> Point {
        let mut g = self.mtx(x);
        g.axpy(-self.sigma_y, &y.sub(&self.b));
        g
    }

    // both players face isotropic quadratics, so the constrained optimum is a projection
    fn best_response_x(&self, y: &Point) -> Point {
        let mut u = self.a.clone();
        u.axpy(-1.0 / self.sigma_x, &self.my(y));
        self.x_set.project(&u)
    }

    fn best_response_y(&self, x: &Point) -> Point {
        let mut u = self.b.clone();
        u.axpy(1.0 / self.sigma_y, &self.mtx(x));
        self.y_set.project(&u)
    }

    fn argmin_weighted_x(&self, ys: &WeightedHistory) -> Result<Point> {
        Ok(self.best_response_x(&ys.require_mean()?))
    }

    fn argmax_weighted_y(&self, xs: &WeightedHistory) -> Result<Point> {
        Ok(self.best_response_y(&xs.require_mean()?))
    }

    fn constants(&self) -> &GameConstants {
        &self.constants
    }

    fn x_set(&self) -> Option<&ConvexSet> {
        Some(&self.x_set)
    }

    fn y_set(&self) -> Option<&ConvexSet> {
        Some(&self.y_set)
    }

    fn value_of_game(&self) -> Option<f64> {
        self.saddle.as_ref().map(|(x, y)| self.value(x, y))
    }

    fn initial_x(&self) -> Point {
        self.x_set.project(&Point::zeros(self.dim_x()))
    }

    fn initial_y(&self) -> Point {
        self.y_set.project(&Point::zeros(self.dim_y()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn history_mean() {
        let mut h = WeightedHistory::new();
        assert!(h.mean().is_none());
        h.push(1.0, &Point::of(&[0.0]));
        h.push(3.0, &Point::of(&[4.0]));
        assert_eq!(h.mean().unwrap(), Point::of(&[3.0]));
        assert_eq!(
            h.with(4.0, &Point::of(&[-3.0])).mean().unwrap(),
            Point::of(&[0.0])
        );
        assert_eq!(h.len(), 2);
    }

    #[test]
    fn scalar_bilinear_best_responses() {
        let g = Bilinear::scalar_unit();
        assert_eq!(g.best_response_x(&Point::of(&[1.0])), Point::of(&[-1.0]));
        assert_eq!(g.best_response_y(&Point::of(&[0.0])), Point::of(&[1.0]));
        assert_eq!(g.value_of_game(), Some(0.0));
    }

    #[test]
    fn quad_bilinear_saddle_is_stationary() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, -0.5, 1.0]);
        let g = QuadBilinear::new(
            1.0,
            Point::of(&[0.5, 0.5]),
            m,
            2.0,
            Point::of(&[-0.3, 0.1]),
            ConvexSet::l2_ball(2, 10.0).unwrap(),
            ConvexSet::l2_ball(2, 10.0).unwrap(),
        )
        .unwrap();
        let (x, y) = g.saddle().unwrap().clone();
        assert!(g.grad_x(&x, &y).norm() < 1e-12);
        assert!(g.grad_y(&x, &y).norm() < 1e-12);
        assert!(g.best_response_y(&x).dist(&y) < 1e-12);
        assert!(g.best_response_x(&y).dist(&x) < 1e-12);
    }

    #[test]
    fn constants_validation() {
        let ok = GameConstants {
            l: 1.0,
            sigma_x: 0.5,
            sigma_y: 0.0,
            g: 1.0,
            b: 0.0,
            d: 1.0,
        };
        assert!(ok.validate().is_ok());
        assert!(GameConstants { l: 0.0, ..ok }.validate().is_err());
        assert!(GameConstants { sigma_x: 2.0, ..ok }.validate().is_err());
        assert!(GameConstants { b: -1.0, ..ok }.validate().is_err());
    }
}
