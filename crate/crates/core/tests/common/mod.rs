//! Slow reference implementations, written independently of the library.
#![allow(dead_code)]

use clustertest_core::Point;

fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Gauss-Jordan with full pivot search; `None` when (near) singular.
fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    let scale = a.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-300);
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-10 * scale {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in 0..n {
            if row != col {
                let f = a[row][col] / a[col][col];
                for c in col..n {
                    a[row][c] -= f * a[col][c];
                }
                b[row] -= f * b[col];
            }
        }
    }
    Some((0..n).map(|i| b[i] / a[i][i]).collect())
}

/// Centre and radius of the smallest sphere through `pts` within their affine hull.
pub fn circumsphere(pts: &[&[f64]]) -> Option<(Vec<f64>, f64)> {
    let p0 = pts[0];
    let m = pts.len() - 1;
    if m == 0 {
        return Some((p0.to_vec(), 0.0));
    }
    let v: Vec<Vec<f64>> = pts[1..].iter().map(|p| sub(p, p0)).collect();
    let a: Vec<Vec<f64>> = (0..m).map(|i| (0..m).map(|j| 2.0 * dot(&v[i], &v[j])).collect()).collect();
    let b: Vec<f64> = (0..m).map(|i| dot(&v[i], &v[i])).collect();
    let lam = solve(a, b)?;
    let mut c = p0.to_vec();
    for (l, vi) in lam.iter().zip(&v) {
        for (cj, vij) in c.iter_mut().zip(vi) {
            *cj += l * vij;
        }
    }
    let r = pts.iter().map(|p| dot(&sub(p, &c), &sub(p, &c)).sqrt()).fold(0.0, f64::max);
    Some((c, r))
}

fn subsets_upto(n: usize, max: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(start: usize, n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        if cur.len() == max {
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, max, cur, out);
            cur.pop();
        }
    }
    go(0, n, max, &mut cur, &mut out);
    out
}

/// Smallest enclosing ball radius by trying every support set of size <= d+1.
pub fn brute_meb(points: &[Point]) -> f64 {
    let d = points[0].dim();
    let mut best = f64::INFINITY;
    for s in subsets_upto(points.len(), d + 1) {
        let sp: Vec<&[f64]> = s.iter().map(|&i| points[i].coords()).collect();
        if let Some((c, r)) = circumsphere(&sp) {
            if r < best && points.iter().all(|p| dot(&sub(p.coords(), &c), &sub(p.coords(), &c)).sqrt() <= r * (1.0 + 1e-9) + 1e-12) {
                best = r;
            }
        }
    }
    best
}

/// Optimal k-center radius and the lexicographically first optimal label
/// vector, over all restricted-growth label strings.
pub fn partition_k_center(points: &[Point], k: usize) -> (f64, Vec<usize>) {
    let n = points.len();
    let mut radius = vec![0.0; 1 << n];
    for mask in 1..(1usize << n) {
        let group: Vec<Point> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| points[i].clone()).collect();
        radius[mask] = brute_meb(&group);
    }
    let mut all = Vec::new();
    let mut labels = vec![0usize; n];
    fn go(i: usize, used: usize, k: usize, labels: &mut Vec<usize>, all: &mut Vec<Vec<usize>>) {
        if i == labels.len() {
            all.push(labels.clone());
            return;
        }
        for g in 0..(used + 1).min(k) {
            labels[i] = g;
            go(i + 1, used.max(g + 1), k, labels, all);
        }
    }
    go(0, 0, k, &mut labels, &mut all);
    let cost = |l: &Vec<usize>| -> f64 {
        (0..k)
            .map(|g| {
                let mask = (0..n).filter(|&i| l[i] == g).fold(0usize, |m, i| m | 1 << i);
                radius[mask]
            })
            .fold(0.0, f64::max)
    };
    let best = all.iter().map(cost).fold(f64::INFINITY, f64::min);
    let first = all.into_iter().find(|l| cost(l) <= best + 1e-9 * (1.0 + best)).unwrap();
    (best, first)
}

/// Most points in one closed disc of radius `r`, by enumerating discs through
/// every point and through every pair of points.
pub fn naive_disc_coverage(points: &[Point], r: f64) -> usize {
    let r = r + 0.5e-9;
    let count = |c: &[f64]| points.iter().filter(|p| {
        let dx = p[0] - c[0];
        let dy = p[1] - c[1];
        (dx * dx + dy * dy).sqrt() <= r + 0.5e-9
    }).count();
    let mut best = 0;
    for (i, p) in points.iter().enumerate() {
        best = best.max(count(p.coords()));
        for q in &points[i + 1..] {
            let (mx, my) = ((p[0] + q[0]) / 2.0, (p[1] + q[1]) / 2.0);
            let (dx, dy) = (q[0] - p[0], q[1] - p[1]);
            let half = (dx * dx + dy * dy).sqrt() / 2.0;
            if half > r || half == 0.0 {
                continue;
            }
            let h = (r * r - half * half).max(0.0).sqrt();
            let (ux, uy) = (-dy / (2.0 * half), dx / (2.0 * half));
            best = best.max(count(&[mx + h * ux, my + h * uy]));
            best = best.max(count(&[mx - h * ux, my - h * uy]));
        }
    }
    best
}

/// Whether a grid of candidate centres (spacing `step`) over the points'
/// bounding box contains one whose translate of `contains` holds every point.
pub fn grid_fit(points: &[Point], step: f64, contains: impl Fn(&[f64]) -> bool) -> bool {
    let lo: Vec<f64> = (0..2).map(|j| points.iter().map(|p| p[j]).fold(f64::INFINITY, f64::min)).collect();
    let hi: Vec<f64> = (0..2).map(|j| points.iter().map(|p| p[j]).fold(f64::NEG_INFINITY, f64::max)).collect();
    let nx = ((hi[0] - lo[0]) / step) as usize + 1;
    let ny = ((hi[1] - lo[1]) / step) as usize + 1;
    (0..=nx).any(|i| {
        (0..=ny).any(|j| {
            let c = [lo[0] + i as f64 * step, lo[1] + j as f64 * step];
            points.iter().all(|p| contains(&[p[0] - c[0], p[1] - c[1]]))
        })
    })
}
