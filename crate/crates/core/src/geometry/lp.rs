//! Low-dimensional linear feasibility, backed by `minilp`.

use minilp::{ComparisonOp, OptimizationDirection, Problem};

/// One constraint `normal · c >= lower`.
pub struct HalfSpace<'a> {
    pub normal: &'a [f64],
    pub lower: f64,
}

/// Finds `c` minimising the largest violation `t` of `normal · c + t >= lower`
/// over all rows. Returns `(c, t)`; the system is feasible iff `t <= 0`.
/// `None` if the solver fails (unbounded rows, numerical breakdown).
pub fn min_violation(dim: usize, rows: &[HalfSpace<'_>]) -> Option<(Vec<f64>, f64)> {
    let mut problem = Problem::new(OptimizationDirection::Minimize);
    let c: Vec<_> = (0..dim)
        .map(|_| problem.add_var(0.0, (f64::NEG_INFINITY, f64::INFINITY)))
        .collect();
    let t = problem.add_var(1.0, (f64::NEG_INFINITY, f64::INFINITY));
    for row in rows {
        let mut expr: Vec<_> = c.iter().copied().zip(row.normal.iter().copied()).collect();
        expr.push((t, 1.0));
        problem.add_constraint(expr.as_slice(), ComparisonOp::Ge, row.lower);
    }
    let sol = problem.solve().ok()?;
    Some((c.iter().map(|&v| sol[v]).collect(), sol[t]))
}
