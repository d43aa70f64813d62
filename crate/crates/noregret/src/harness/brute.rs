use crate::error::{Error, Result};
use crate::payoff::GamePayoff;
use crate::point::Point;
use crate::sets::{ConvexSet, SetKind};

pub const MAX_RESOLUTION: usize = 2001;

/// Grid estimate of `sup_y g(x̄, y) − inf_x g(x, ȳ)`, independent of the
/// best-response oracles.
///
/// Each side is searched on a `resolution`-per-axis grid over its search box,
/// keeping the grid points inside the side's set. Curved 2-D sets also get
/// `8 · resolution` boundary points at evenly spaced angles. Only one- and
/// two-dimensional sides are supported.
pub fn brute_force_gap(
    payoff: &dyn GamePayoff,
    x_bar: &Point,
    y_bar: &Point,
    resolution: usize,
) -> Result<f64> {
    if !(2..=MAX_RESOLUTION).contains(&resolution) {
        return Err(Error::Config(format!(
            "grid resolution must lie in 2..={MAX_RESOLUTION}, got {resolution}"
        )));
    }
    let xbox = payoff
        .x_search_box()
        .ok_or_else(|| Error::Unsupported("the payoff has no x search box".into()))?;
    let ybox = payoff
        .y_search_box()
        .ok_or_else(|| Error::Unsupported("the payoff has no y search box".into()))?;
    let upper = grid_extreme(
        &ybox,
        payoff.y_set(),
        resolution,
        |y| payoff.value(x_bar, y),
        true,
    )?;
    let lower = grid_extreme(
        &xbox,
        payoff.x_set(),
        resolution,
        |x| payoff.value(x, y_bar),
        false,
    )?;
    Ok((upper - lower).max(0.0))
}

fn grid_extreme(
    bx: &(Vec<f64>, Vec<f64>),
    set: Option<&ConvexSet>,
    n: usize,
    f: impl Fn(&Point) -> f64,
    maximize: bool,
) -> Result<f64> {
    let (lo, hi) = bx;
    let d = lo.len();
    if d == 0 || d > 2 {
        return Err(Error::Unsupported(format!(
            "grid search supports 1 or 2 dimensions, got {d}"
        )));
    }
    let axis = |i: usize, k: usize| lo[i] + (hi[i] - lo[i]) * k as f64 / (n - 1) as f64;
    let mut best = if maximize {
        f64::NEG_INFINITY
    } else {
        f64::INFINITY
    };
    let mut visit = |p: &Point| {
        let v = f(p);
        best = if maximize { best.max(v) } else { best.min(v) };
    };
    // grid points outside the set are dropped; the boundary of a curved set
    // is sampled separately below
    let keep = |p: &Point| set.is_none_or(|s| s.contains(p, 0.0));
    if d == 1 {
        for k in 0..n {
            let p = Point::raw(vec![axis(0, k)]);
            if keep(&p) {
                visit(&p);
            }
        }
    } else {
        for i in 0..n {
            for j in 0..n {
                let p = Point::raw(vec![axis(0, i), axis(1, j)]);
                if keep(&p) {
                    visit(&p);
                }
            }
        }
        if let Some(s) = set.filter(|s| !matches!(s.kind(), SetKind::Box { .. })) {
            let m = 8 * n;
            for k in 0..m {
                let a = std::f64::consts::TAU * k as f64 / m as f64;
                visit(&s.lin_opt(&Point::raw(vec![a.cos(), a.sin()])));
            }
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::payoff::Bilinear;

    #[test]
    fn bilinear_examples() {
        let g = Bilinear::scalar_unit();
        let o = Point::of(&[0.0]);
        assert_eq!(brute_force_gap(&g, &o, &o, 101).unwrap(), 0.0);
        let v = brute_force_gap(&g, &Point::of(&[1.0]), &o, 101).unwrap();
        assert!((v - 1.0).abs() < 0.02);
        assert!(brute_force_gap(&g, &o, &o, 1).is_err());
        assert!(brute_force_gap(&g, &o, &o, 2002).is_err());
    }
}
