//! Euclidean k-center (radius cost) on small point sets: exact
//! branch-and-bound and a farthest-point heuristic.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{meb, Ball, Point};

/// Default largest input for [`k_center_exact`].
pub const KCENTER_EXACT_CAP: usize = 16;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KCenterSolution {
    pub centers: Vec<Point>,
    pub radii: Vec<f64>,
    /// Group label per input point.
    pub assignment: Vec<usize>,
}

impl KCenterSolution {
    pub fn max_radius(&self) -> f64 {
        self.radii.iter().cloned().fold(0.0, f64::max)
    }
}

fn check_input(points: &[Point], k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::OutOfRange { name: "k", value: 0.0 });
    }
    crate::geometry::common_dim(points)?;
    Ok(())
}

/// Balls for each label; unused labels get a radius-0 ball at the first point.
fn solution_from_assignment(points: &[Point], k: usize, assignment: Vec<usize>) -> KCenterSolution {
    let (centers, radii) = (0..k)
        .map(|g| {
            let members: Vec<Point> = points
                .iter()
                .zip(&assignment)
                .filter(|(_, &a)| a == g)
                .map(|(p, _)| p.clone())
                .collect();
            match meb(&members) {
                Ok(b) => (b.center, b.radius),
                Err(_) => (points[0].clone(), 0.0),
            }
        })
        .unzip();
    KCenterSolution {
        centers,
        radii,
        assignment,
    }
}

/// Globally minimal max-radius cover by `k` balls, capped at
/// [`KCENTER_EXACT_CAP`] points.
pub fn k_center_exact(points: &[Point], k: usize) -> Result<KCenterSolution> {
    k_center_exact_with_cap(points, k, KCENTER_EXACT_CAP)
}

/// Among optimal assignments the lexicographically smallest label vector
/// (labels in order of first appearance) is returned.
pub fn k_center_exact_with_cap(points: &[Point], k: usize, cap: usize) -> Result<KCenterSolution> {
    check_input(points, k)?;
    let n = points.len();
    if n > cap {
        return Err(Error::CapExceeded {
            what: "exact k-center",
            size: n,
            cap,
        });
    }
    if n <= k {
        return Ok(solution_from_assignment(points, k, (0..n).collect()));
    }

    // Phase 1: optimal radius, searching in farthest-first order so the
    // incumbent tightens early.
    let seed = gonzalez(points, k)?;
    let order = farthest_first_order(points);
    let permuted: Vec<Point> = order.iter().map(|&i| points[i].clone()).collect();
    let mut search = Search {
        points: &permuted,
        k,
        bound: seed.max_radius() * (1.0 + 1e-12) + 1e-15,
        strict: true,
        found: None,
    };
    search.descend(0, &mut Vec::new(), &mut Vec::new());
    let best = search.bound;

    // Phase 2: lexicographically smallest assignment within the optimum, in input order.
    let tol = 1e-9 * (1.0 + best);
    let mut search = Search {
        points,
        k,
        bound: best + tol,
        strict: false,
        found: None,
    };
    search.descend(0, &mut Vec::new(), &mut Vec::new());
    let assignment = search
        .found
        .expect("the optimal radius admits at least one assignment");
    Ok(solution_from_assignment(points, k, assignment))
}

struct Group {
    members: Vec<Point>,
    ball: Ball,
}

struct Search<'a> {
    points: &'a [Point],
    k: usize,
    /// Strict mode: best radius so far, lowered on improvement.
    /// Feasibility mode: fixed radius limit, stop at the first hit.
    bound: f64,
    strict: bool,
    found: Option<Vec<usize>>,
}

impl Search<'_> {
    fn descend(&mut self, next: usize, groups: &mut Vec<Group>, labels: &mut Vec<usize>) {
        if !self.strict && self.found.is_some() {
            return;
        }
        let current = groups.iter().map(|g| g.ball.radius).fold(0.0, f64::max);
        if next == self.points.len() {
            if self.strict {
                if current < self.bound {
                    self.bound = current;
                }
            } else {
                self.found = Some(labels.clone());
            }
            return;
        }
        let p = &self.points[next];
        for g in 0..groups.len() {
            let grown = if groups[g].ball.contains(p, 1e-12 * (1.0 + groups[g].ball.radius)) {
                None
            } else {
                let mut m = groups[g].members.clone();
                m.push(p.clone());
                Some(meb(&m).expect("non-empty"))
            };
            let radius = grown.as_ref().map_or(groups[g].ball.radius, |b| b.radius);
            let admissible = if self.strict {
                radius < self.bound
            } else {
                radius <= self.bound
            };
            if !admissible {
                continue;
            }
            let old = grown.map(|b| std::mem::replace(&mut groups[g].ball, b));
            groups[g].members.push(p.clone());
            labels.push(g);
            self.descend(next + 1, groups, labels);
            labels.pop();
            groups[g].members.pop();
            if let Some(old) = old {
                groups[g].ball = old;
            }
            if !self.strict && self.found.is_some() {
                return;
            }
        }
        if groups.len() < self.k {
            groups.push(Group {
                members: vec![p.clone()],
                ball: Ball {
                    center: p.clone(),
                    radius: 0.0,
                },
            });
            labels.push(groups.len() - 1);
            self.descend(next + 1, groups, labels);
            labels.pop();
            groups.pop();
        }
    }
}

/// Visiting order of farthest-point traversal starting from index 0.
fn farthest_first_order(points: &[Point]) -> Vec<usize> {
    let n = points.len();
    let mut order = vec![0];
    let mut dist: Vec<f64> = points.iter().map(|p| p.dist(&points[0])).collect();
    let mut used = vec![false; n];
    used[0] = true;
    while order.len() < n {
        let next = (0..n)
            .filter(|&i| !used[i])
            .max_by(|&a, &b| dist[a].total_cmp(&dist[b]).then(b.cmp(&a)))
            .unwrap();
        used[next] = true;
        order.push(next);
        for i in 0..n {
            dist[i] = dist[i].min(points[i].dist(&points[next]));
        }
    }
    order
}

/// Farthest-point seeding, nearest-seed assignment and per-group enclosing
/// balls, followed by one sweep reassigning points to the nearest ball centre.
pub fn gonzalez(points: &[Point], k: usize) -> Result<KCenterSolution> {
    check_input(points, k)?;
    let n = points.len();
    if n <= k {
        return Ok(solution_from_assignment(points, k, (0..n).collect()));
    }
    let seeds: Vec<usize> = farthest_first_order(points).into_iter().take(k).collect();
    let nearest = |p: &Point, centers: &[&Point]| -> usize {
        (0..centers.len())
            .min_by(|&a, &b| p.dist_sq(centers[a]).total_cmp(&p.dist_sq(centers[b])))
            .unwrap()
    };
    let seed_pts: Vec<&Point> = seeds.iter().map(|&i| &points[i]).collect();
    let assignment: Vec<usize> = points.iter().map(|p| nearest(p, &seed_pts)).collect();
    let first = solution_from_assignment(points, k, assignment);

    let centers: Vec<&Point> = first.centers.iter().collect();
    let reassigned: Vec<usize> = points.iter().map(|p| nearest(p, &centers)).collect();
    let second = solution_from_assignment(points, k, reassigned);
    Ok(if second.max_radius() < first.max_radius() {
        second
    } else {
        first
    })
}
