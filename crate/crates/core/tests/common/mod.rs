//! Test-only oracles, written directly from the metric definitions without
//! going through the assignment solver.

#![allow(dead_code)]

use gospa::TargetSet;
use rand::Rng;

pub fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(u, v)| (u - v).powi(2)).sum::<f64>().sqrt()
}

/// Minimum over every partial assignment set of
/// `sum d^p + c^p / 2 * (|X| + |Y| - 2 |gamma|)`, raised to `1/p`.
pub fn gospa_over_assignment_sets(x: &TargetSet<f64>, y: &TargetSet<f64>, c: f64, p: f64) -> f64 {
    struct Search<'a> {
        x: &'a TargetSet<f64>,
        y: &'a TargetSet<f64>,
        p: f64,
        half: f64,
        used: Vec<bool>,
        best: f64,
    }

    impl Search<'_> {
        fn descend(&mut self, row: usize, cost: f64, pairs: usize) {
            if row == self.x.len() {
                let total = cost + self.half * (self.x.len() + self.y.len() - 2 * pairs) as f64;
                self.best = self.best.min(total);
                return;
            }
            self.descend(row + 1, cost, pairs);
            for j in 0..self.y.len() {
                if !self.used[j] {
                    self.used[j] = true;
                    let d = euclid(self.x.point(row), self.y.point(j)).powf(self.p);
                    self.descend(row + 1, cost + d, pairs + 1);
                    self.used[j] = false;
                }
            }
        }
    }

    let mut search = Search { x, y, p, half: c.powf(p) / 2.0, used: vec![false; y.len()], best: f64::INFINITY };
    search.descend(0, 0.0, 0);
    search.best.powf(1.0 / p)
}

/// Literal permutation formula: for `|X| <= |Y|`, minimum over permutations
/// of `{0..|Y|}` of the first `|X|` cut-off costs, plus the cardinality term.
pub fn gospa_over_permutations(x: &TargetSet<f64>, y: &TargetSet<f64>, c: f64, alpha: f64, p: f64) -> f64 {
    let (small, large) = if x.len() <= y.len() { (x, y) } else { (y, x) };
    let n = large.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best = f64::INFINITY;
    permute(&mut perm, 0, &mut |pi| {
        let s: f64 = (0..small.len())
            .map(|i| euclid(small.point(i), large.point(pi[i])).min(c).powf(p))
            .sum();
        best = best.min(s);
    });
    if n == 0 {
        best = 0.0;
    }
    (best + c.powf(p) / alpha * (n - small.len()) as f64).powf(1.0 / p)
}

fn permute(v: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == v.len() {
        f(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permute(v, k + 1, f);
        v.swap(k, i);
    }
}

pub fn random_set<R: Rng>(rng: &mut R, dim: usize, max_len: usize, span: f64) -> TargetSet<f64> {
    let n = rng.random_range(0..=max_len);
    let points: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..dim).map(|_| rng.random_range(-span..=span)).collect())
        .collect();
    TargetSet::new(dim, &points).unwrap()
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}
