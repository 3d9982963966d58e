//! Gradient of the smooth robustness with respect to every trace position,
//! checked against central differences, then used for a few ascent steps
//! that pull a single waypoint into a goal box.

use stlplan::robustness::{smooth_robustness, smooth_robustness_gradient, Temperature, Trace};
use stlplan::stl::{parse_formula, Aabb};
use stlplan::Vec3;

fn main() -> stlplan::Result<()> {
    let goal = Aabb::cube(Vec3::new(2.0, 1.0, 1.0), 0.5)?;
    let formula = parse_formula("F[0,1] in(d1,goal)")?.resolve(&["d1"], |n| (n == "goal").then_some(goal))?;
    let k = Temperature::new(10.0)?;
    let mut positions = vec![vec![Vec3::zeros(), Vec3::new(0.5, 0.0, 0.5), Vec3::new(1.0, 0.5, 0.5)]];

    let trace = Trace::from_positions(0.5, positions.clone())?;
    let g = smooth_robustness_gradient(&formula, &trace, 0, k)?;
    println!("smooth robustness {:.5}", g.value);
    let h = 1e-5;
    for (n, grad) in g.positions[0].iter().enumerate() {
        let mut fd = Vec3::zeros();
        for axis in 0..3 {
            let shifted = |d: f64| {
                let mut p = positions.clone();
                p[0][n][axis] += d;
                smooth_robustness(&formula, &Trace::from_positions(0.5, p).unwrap(), 0, k).unwrap()
            };
            fd[axis] = (shifted(h) - shifted(-h)) / (2.0 * h);
        }
        println!("sample {n}: analytic {:+.6?}  finite-diff {:+.6?}", grad.as_slice(), fd.as_slice());
    }

    for step in 0..40 {
        let trace = Trace::from_positions(0.5, positions.clone())?;
        let g = smooth_robustness_gradient(&formula, &trace, 0, k)?;
        if step % 10 == 0 {
            println!("step {step:>2}: smooth robustness {:+.4}", g.value);
        }
        for (p, d) in positions[0].iter_mut().zip(&g.positions[0]).skip(1) {
            *p += 0.1 * d;
        }
    }
    let trace = Trace::from_positions(0.5, positions)?;
    println!("final smooth robustness {:+.4}", smooth_robustness(&formula, &trace, 0, k)?);
    Ok(())
}
