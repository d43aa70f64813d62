//! Gauges, linear minimization and projection on the supported sets.

use noregret::sets::ConvexSet;
use noregret::Point;

fn main() -> noregret::Result<()> {
    let sets = [
        ("l2 ball", ConvexSet::l2_ball(2, 1.0)?),
        ("l1.5 ball", ConvexSet::lp_ball(2, 1.5, 1.0)?),
        ("cube", ConvexSet::cube(2, 1.0)?),
    ];
    let x = Point::of(&[1.0, 1.0]);
    for (name, s) in &sets {
        println!(
            "{name:<9} lambda {:.3} beta {:.3}  gauge(x) {:.4}  lin_opt(x) {}  project(2x) {}",
            s.lambda(),
            s.beta(),
            s.gauge(&x)?,
            s.lin_opt(&x),
            s.project(&x.scaled(2.0))
        );
    }
    Ok(())
}
