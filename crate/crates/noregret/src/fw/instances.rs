//! Ready-made instances with known optima.

use std::sync::Arc;

use nalgebra::DMatrix;
use rand::Rng;

use crate::error::{Error, Result};
use crate::objective::Quadratic;
use crate::payoff::QuadBilinear;
use crate::point::Point;
use crate::sets::ConvexSet;

use super::FwInstance;

/// `½‖y − c‖²` over `L2Ball(r)` starting at `y0` (origin when `None`).
pub fn quadratic_l2(c: &[f64], r: f64, y0: Option<&[f64]>) -> Result<FwInstance> {
    let set = ConvexSet::l2_ball(c.len(), r)?;
    let start = y0
        .map(|v| Point::new(v.to_vec()))
        .transpose()?
        .unwrap_or_else(|| Point::zeros(c.len()));
    FwInstance::new(
        Arc::new(Quadratic::isotropic(Point::new(c.to_vec())?)),
        set,
        start,
    )
}

fn first_axis(d: usize, v: f64) -> Vec<f64> {
    let mut c = vec![0.0; d];
    c[0] = v;
    c
}

/// `L = σ = 1`, `L2Ball(2)`, optimum `e₁` strictly inside.
pub fn interior_l2(d: usize) -> Result<FwInstance> {
    quadratic_l2(&first_axis(d, 1.0), 2.0, None)
}

/// Optimum exactly on the boundary of `L2Ball(2)`: `c = 2e₁`, so `∇f(y*) = 0`.
pub fn touching_l2(d: usize) -> Result<FwInstance> {
    quadratic_l2(&first_axis(d, 2.0), 2.0, None)
}

/// `c = (1.5, 1, 0, …)` outside `L2Ball(1)`; `‖∇f‖ ≥ ‖c‖ − 1` on the ball.
/// The start `−e₂` is off the ray through `c`; from the origin the first
/// vertex would already be the optimum.
pub fn boundary_l2(d: usize) -> Result<FwInstance> {
    if d < 2 {
        return Err(Error::Dimension(format!(
            "this instance needs d >= 2, got {d}"
        )));
    }
    let mut c = vec![0.0; d];
    c[0] = 1.5;
    c[1] = 1.0;
    let norm = (1.5f64 * 1.5 + 1.0).sqrt();
    let mut y0 = vec![0.0; d];
    y0[1] = -1.0;
    quadratic_l2(&c, 1.0, Some(&y0))?.with_gradient_floor(norm - 1.0)
}

/// `c = (0.3, −0.2, 0.1, …)` inside `L2Ball(1)`, starting on the boundary.
pub fn vanilla_l2(d: usize) -> Result<FwInstance> {
    let c: Vec<f64> = (0..d)
        .map(|i| [0.3, -0.2, 0.1][i % 3] / (1 + i / 3) as f64)
        .collect();
    quadratic_l2(&c, 1.0, Some(&first_axis(d, 1.0)))
}

/// Anisotropic quadratic over the cube `[−1, 1]^d` with some coordinates of
/// the centre outside the cube.
///
/// The centre is irrational so that no gradient coordinate is ever exactly
/// zero along the Frank-Wolfe path; a zero there makes the vertex choice a tie.
pub fn box_quadratic(d: usize) -> Result<FwInstance> {
    let h: Vec<f64> = (0..d).map(|i| 1.0 + i as f64 * 0.5).collect();
    let c: Vec<f64> = (0..d)
        .map(|i| [1.4, -0.3, 0.6, -2.0, 0.2][i % 5] + 0.01 * ((i + 2) as f64).sqrt())
        .collect();
    let set = ConvexSet::cube(d, 1.0)?;
    FwInstance::new(
        Arc::new(Quadratic::new(h, Point::new(c)?)?),
        set,
        Point::zeros(d),
    )
}

/// `½‖y − c‖²` over the `ℓ_{1.5}` unit ball with an interior optimum.
pub fn lp_quadratic(d: usize) -> Result<FwInstance> {
    let set = ConvexSet::lp_ball(d, 1.5, 1.0)?;
    let c: Vec<f64> = (0..d)
        .map(|i| if i % 2 == 0 { 0.2 } else { -0.1 })
        .collect();
    FwInstance::new(
        Arc::new(Quadratic::isotropic(Point::new(c)?)),
        set,
        Point::zeros(d),
    )
}

/// `H = diag(20, 1)`, `c = (0.1, 2)` over `L2Ball(1)`, with `‖∇f‖ ≥ 1` on the ball.
///
/// The strong anisotropy keeps successive best responses apart, so the
/// adaptive weights `‖∇ℓ_t‖⁻²` stay finite long enough to see the linear rate.
pub fn linear_rate_instance() -> Result<FwInstance> {
    let f = Quadratic::new(vec![20.0, 1.0], Point::new(vec![0.1, 2.0])?)?;
    FwInstance::new(Arc::new(f), ConvexSet::l2_ball(2, 1.0)?, Point::zeros(2))?
        .with_gradient_floor(1.0)
}

/// `scale · R(angle)` with `R` the plane rotation.
pub fn rotation_coupling(scale: f64, angle: f64) -> DMatrix<f64> {
    let (s, c) = angle.sin_cos();
    DMatrix::from_row_slice(2, 2, &[scale * c, -scale * s, scale * s, scale * c])
}

/// `g = ½‖x − a‖² + xᵀMy − ½‖y − b‖²` with `M = 6·R(1)`, `a = (½, ½)`,
/// `b = (−0.3, −0.3)` over two radius-10 balls; its saddle is interior.
pub fn scenario_one_game() -> Result<QuadBilinear> {
    QuadBilinear::new(
        1.0,
        Point::new(vec![0.5, 0.5])?,
        rotation_coupling(6.0, 1.0),
        1.0,
        Point::new(vec![-0.3, -0.3])?,
        ConvexSet::l2_ball(2, 10.0)?,
        ConvexSet::l2_ball(2, 10.0)?,
    )
}

/// Starting point of the x-player in [`scenario_one_game`] runs.
pub fn scenario_one_start() -> Point {
    Point::of(&[1.0, 0.0])
}

/// A random isotropic quadratic over `L2Ball(1)`: centre drawn with norm in
/// `[0, 1.6]`, start on the boundary.
pub fn random_quadratic_l2<R: Rng>(rng: &mut R, d: usize) -> Result<FwInstance> {
    let dir = random_unit(rng, d);
    let c = dir.scaled(rng.random_range(0.0..1.6));
    let start = random_unit(rng, d);
    quadratic_l2(c.coords(), 1.0, Some(start.coords()))
}

/// A random anisotropic quadratic over `[−1, 1]^d`.
pub fn random_box_quadratic<R: Rng>(rng: &mut R, d: usize) -> Result<FwInstance> {
    let h: Vec<f64> = (0..d).map(|_| rng.random_range(0.5..3.0)).collect();
    let c: Vec<f64> = (0..d).map(|_| rng.random_range(-1.8..1.8)).collect();
    let y0: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
    FwInstance::new(
        Arc::new(Quadratic::new(h, Point::new(c)?)?),
        ConvexSet::cube(d, 1.0)?,
        Point::new(y0)?,
    )
}

/// A uniformly random direction.
pub fn random_unit<R: Rng>(rng: &mut R, d: usize) -> Point {
    loop {
        let v: Vec<f64> = (0..d)
            .map(|_| rng.sample(rand_distr::StandardNormal))
            .collect();
        let p = Point::raw(v);
        let n = p.norm();
        if n > 1e-8 {
            return p.scaled(1.0 / n);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn optima_are_known() {
        for inst in [
            interior_l2(5),
            touching_l2(5),
            boundary_l2(5),
            vanilla_l2(5),
            box_quadratic(5),
            lp_quadratic(5),
        ] {
            let inst = inst.unwrap();
            assert!(inst.f_min.is_some());
        }
        let i = linear_rate_instance().unwrap();
        assert_eq!(i.constants.b, 1.0);
        assert!(i.f.smoothness() == 20.0);
    }

    #[test]
    fn scenario_one_saddle_is_interior() {
        let g = scenario_one_game().unwrap();
        assert!(g.saddle().is_some());
    }
}
