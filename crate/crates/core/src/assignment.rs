//! Rectangular minimum-cost linear assignment.
//!
//! [`solve_full_assignment`] assigns every row of an `m x n` matrix (`m <= n`)
//! to a distinct column with minimum total cost. It runs a shortest augmenting
//! path search with row/column potentials (Jonker-Volgenant style, `O(m^2 n)`)
//! and then walks the equality subgraph of the final potentials to select the
//! lexicographically smallest optimal pair set, so ties resolve the same way on
//! every run.
//!
//! [`brute_force_assignment`] enumerates every injection of rows into columns
//! and is kept as an oracle for small matrices.

use std::collections::VecDeque;

use crate::error::{GospaError, Result};
use crate::scalar::Scalar;

/// Largest row count accepted by [`brute_force_assignment`].
pub const BRUTE_FORCE_MAX_ROWS: usize = 7;
/// Largest column count accepted by [`brute_force_assignment`].
pub const BRUTE_FORCE_MAX_COLS: usize = 8;

/// Dense, row-major matrix of finite non-negative costs.
#[derive(Debug, Clone, PartialEq)]
pub struct CostMatrix<T> {
    rows: usize,
    cols: usize,
    entries: Vec<T>,
}

impl<T: Scalar> CostMatrix<T> {
    pub fn new(rows: usize, cols: usize, entries: Vec<T>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(GospaError::InvalidInput(format!(
                "cost matrix must be at least 1x1, got {rows}x{cols}"
            )));
        }
        if entries.len() != rows * cols {
            return Err(GospaError::InvalidInput(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                entries.len()
            )));
        }
        if let Some(pos) = entries
            .iter()
            .position(|e| !e.is_finite() || *e < T::zero())
        {
            return Err(GospaError::InvalidInput(format!(
                "entry ({}, {}) = {} is not a finite non-negative cost",
                pos / cols,
                pos % cols,
                entries[pos]
            )));
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().position(|r| r.len() != cols) {
            return Err(GospaError::InvalidInput(format!(
                "ragged cost matrix: row {bad} has {} entries, expected {cols}",
                rows[bad].len()
            )));
        }
        Self::new(rows.len(), cols, rows.iter().flatten().copied().collect())
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Result<Self> {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Self::new(rows, cols, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> T {
        self.entries[row * self.cols + col]
    }

    pub fn row(&self, row: usize) -> &[T] {
        &self.entries[row * self.cols..(row + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.get(i, j));
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    fn max_entry(&self) -> T {
        self.entries.iter().copied().fold(T::zero(), T::max)
    }
}

/// A partial one-to-one pairing of row indices with column indices.
///
/// Pairs are kept sorted by row, then column.
#[derive(Debug, Clone, PartialEq)]
pub struct AssignmentSet<T> {
    pairs: Vec<(usize, usize)>,
    total_cost: T,
}

impl<T: Scalar> AssignmentSet<T> {
    /// Builds an assignment over `costs`, checking index ranges and the
    /// one-to-one property, and summing the selected entries in row order.
    pub fn from_pairs(mut pairs: Vec<(usize, usize)>, costs: &CostMatrix<T>) -> Result<Self> {
        pairs.sort_unstable();
        let mut row_seen = vec![false; costs.rows()];
        let mut col_seen = vec![false; costs.cols()];
        for &(i, j) in &pairs {
            if i >= costs.rows() || j >= costs.cols() {
                return Err(GospaError::InvalidInput(format!(
                    "pair ({i}, {j}) out of range for {}x{} matrix",
                    costs.rows(),
                    costs.cols()
                )));
            }
            if std::mem::replace(&mut row_seen[i], true) || std::mem::replace(&mut col_seen[j], true) {
                return Err(GospaError::InvalidInput(format!(
                    "pair ({i}, {j}) reuses a row or column"
                )));
            }
        }
        let total_cost = pairs.iter().map(|&(i, j)| costs.get(i, j)).sum();
        Ok(Self { pairs, total_cost })
    }

    pub(crate) fn from_parts(pairs: Vec<(usize, usize)>, total_cost: T) -> Self {
        debug_assert!(pairs.windows(2).all(|w| w[0] < w[1]));
        Self { pairs, total_cost }
    }

    pub fn empty() -> Self {
        Self {
            pairs: Vec::new(),
            total_cost: T::zero(),
        }
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn total_cost(&self) -> T {
        self.total_cost
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn column_of(&self, row: usize) -> Option<usize> {
        self.pairs.iter().find(|p| p.0 == row).map(|p| p.1)
    }

    pub fn row_of(&self, col: usize) -> Option<usize> {
        self.pairs.iter().find(|p| p.1 == col).map(|p| p.0)
    }

    /// Swaps the roles of rows and columns.
    pub fn transposed(&self) -> Self {
        let mut pairs: Vec<_> = self.pairs.iter().map(|&(i, j)| (j, i)).collect();
        pairs.sort_unstable();
        Self {
            pairs,
            total_cost: self.total_cost,
        }
    }

    /// Structural check against `costs`: indices in range, each row and
    /// column used at most once, and `total_cost` equal to the sum of the
    /// selected entries within `rel_tol`.
    pub fn is_consistent_with(&self, costs: &CostMatrix<T>, rel_tol: T) -> bool {
        match Self::from_pairs(self.pairs.clone(), costs) {
            Ok(rebuilt) => {
                crate::scalar::approx_eq_rel(rebuilt.total_cost, self.total_cost, rel_tol)
            }
            Err(_) => false,
        }
    }
}

/// Minimum-cost assignment of every row to a distinct column.
///
/// Requires `rows <= cols`. Among optimal solutions the lexicographically
/// smallest pair set is returned.
pub fn solve_full_assignment<T: Scalar>(costs: &CostMatrix<T>) -> Result<AssignmentSet<T>> {
    check_orientation(costs)?;
    let (row_col, dual) = augmenting_paths(costs);
    let row_col = lexicographic_refinement(costs, &dual, row_col);
    let pairs: Vec<_> = row_col.into_iter().enumerate().collect();
    let total = pairs.iter().map(|&(i, j)| costs.get(i, j)).sum();
    Ok(AssignmentSet::from_parts(pairs, total))
}

/// Exhaustive enumeration of all injections of rows into columns.
///
/// Same contract as [`solve_full_assignment`], limited to
/// [`BRUTE_FORCE_MAX_ROWS`] x [`BRUTE_FORCE_MAX_COLS`].
pub fn brute_force_assignment<T: Scalar>(costs: &CostMatrix<T>) -> Result<AssignmentSet<T>> {
    check_orientation(costs)?;
    if costs.rows() > BRUTE_FORCE_MAX_ROWS || costs.cols() > BRUTE_FORCE_MAX_COLS {
        return Err(GospaError::OracleLimit {
            rows: costs.rows(),
            cols: costs.cols(),
            max_rows: BRUTE_FORCE_MAX_ROWS,
            max_cols: BRUTE_FORCE_MAX_COLS,
        });
    }

    struct Search<'a, T> {
        costs: &'a CostMatrix<T>,
        used: Vec<bool>,
        current: Vec<usize>,
        best: Option<(T, Vec<usize>)>,
    }

    impl<T: Scalar> Search<'_, T> {
        fn descend(&mut self, row: usize) {
            if row == self.costs.rows() {
                let total: T = self
                    .current
                    .iter()
                    .enumerate()
                    .map(|(i, &j)| self.costs.get(i, j))
                    .sum();
                // Strict comparison keeps the first optimum met in lexicographic order.
                if self.best.as_ref().is_none_or(|(b, _)| total < *b) {
                    self.best = Some((total, self.current.clone()));
                }
                return;
            }
            for col in 0..self.costs.cols() {
                if self.used[col] {
                    continue;
                }
                self.used[col] = true;
                self.current.push(col);
                self.descend(row + 1);
                self.current.pop();
                self.used[col] = false;
            }
        }
    }

    let mut search = Search {
        costs,
        used: vec![false; costs.cols()],
        current: Vec::with_capacity(costs.rows()),
        best: None,
    };
    search.descend(0);
    let (total, cols) = search.best.expect("rows <= cols admits at least one injection");
    Ok(AssignmentSet::from_parts(
        cols.into_iter().enumerate().collect(),
        total,
    ))
}

fn check_orientation<T: Scalar>(costs: &CostMatrix<T>) -> Result<()> {
    if costs.rows() > costs.cols() {
        return Err(GospaError::InvalidInput(format!(
            "full assignment needs rows <= cols, got {}x{} (transpose first)",
            costs.rows(),
            costs.cols()
        )));
    }
    Ok(())
}

/// Row and column potentials with `cost(i, j) - row[i] - col[j] >= 0`,
/// equality on assigned pairs and `col[j] <= 0`, zero on unassigned columns.
struct Dual<T> {
    row: Vec<T>,
    col: Vec<T>,
}

fn augmenting_paths<T: Scalar>(costs: &CostMatrix<T>) -> (Vec<usize>, Dual<T>) {
    let (m, n) = (costs.rows(), costs.cols());
    let inf = T::infinity();
    // 1-based with index 0 as the virtual source column.
    let mut u = vec![T::zero(); m + 1];
    let mut v = vec![T::zero(); n + 1];
    let mut owner = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    let mut min_slack = vec![inf; n + 1];
    let mut used = vec![false; n + 1];

    for i in 1..=m {
        owner[0] = i;
        let mut j0 = 0usize;
        min_slack.fill(inf);
        used.fill(false);
        loop {
            used[j0] = true;
            let i0 = owner[j0];
            let mut delta = inf;
            let mut j1 = 0usize;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let slack = costs.get(i0 - 1, j - 1) - u[i0] - v[j];
                if slack < min_slack[j] {
                    min_slack[j] = slack;
                    way[j] = j0;
                }
                if min_slack[j] < delta {
                    delta = min_slack[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[owner[j]] = u[owner[j]] + delta;
                    v[j] = v[j] - delta;
                } else {
                    min_slack[j] = min_slack[j] - delta;
                }
            }
            j0 = j1;
            if owner[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut row_col = vec![0usize; m];
    for j in 1..=n {
        if owner[j] > 0 {
            row_col[owner[j] - 1] = j - 1;
        }
    }
    let dual = Dual {
        row: u[1..].to_vec(),
        col: v[1..].to_vec(),
    };
    (row_col, dual)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Node {
    Row(usize),
    /// Any of the `n - m` padding rows; they are interchangeable.
    Padding,
}

/// Moves to the lexicographically smallest optimal assignment.
///
/// The problem is viewed as square by padding `n - m` zero-cost rows. With
/// optimal potentials, every perfect matching that uses only tight edges is
/// optimal. Rows are fixed in order: row `i` takes the smallest tight column
/// for which the remaining rows can still be completed, checked by one
/// alternating-path search.
fn lexicographic_refinement<T: Scalar>(
    costs: &CostMatrix<T>,
    dual: &Dual<T>,
    mut row_col: Vec<usize>,
) -> Vec<usize> {
    let (m, n) = (costs.rows(), costs.cols());
    let tol = T::epsilon() * costs.max_entry() * T::of_usize(4 * (m + n));
    let tight = |i: usize, j: usize| costs.get(i, j) - dual.row[i] - dual.col[j] <= tol;
    let padding_tight = |j: usize| -dual.col[j] <= tol;

    let mut owner: Vec<Option<usize>> = vec![None; n];
    for (i, &j) in row_col.iter().enumerate() {
        owner[j] = Some(i);
    }
    let mut locked = vec![false; n];
    let mut parent: Vec<Option<Node>> = vec![None; n];
    let mut queue = VecDeque::new();

    for i in 0..m {
        let freed = row_col[i];
        for target in 0..freed {
            if locked[target] || !tight(i, target) {
                continue;
            }
            // Give `target` to row i. Its displaced holder must reach `freed`
            // through tight edges on columns not yet locked.
            let start = owner[target].map_or(Node::Padding, Node::Row);
            parent.fill(None);
            queue.clear();
            queue.push_back(start);
            let mut padding_seen = start == Node::Padding;
            let mut padding_entry = target;
            let mut found = false;

            'bfs: while let Some(node) = queue.pop_front() {
                for k in 0..n {
                    if k == target || locked[k] || parent[k].is_some() {
                        continue;
                    }
                    let reachable = match node {
                        Node::Row(r) => k != row_col[r] && tight(r, k),
                        Node::Padding => owner[k].is_some() && padding_tight(k),
                    };
                    if !reachable {
                        continue;
                    }
                    parent[k] = Some(node);
                    if k == freed {
                        found = true;
                        break 'bfs;
                    }
                    match owner[k] {
                        Some(r) => queue.push_back(Node::Row(r)),
                        None if !padding_seen => {
                            padding_seen = true;
                            padding_entry = k;
                            queue.push_back(Node::Padding);
                        }
                        None => {}
                    }
                }
            }

            if !found {
                continue;
            }
            let mut k = freed;
            loop {
                let node = parent[k].expect("column on the augmenting path has a parent");
                let came_from = match node {
                    Node::Row(r) => {
                        let prev = row_col[r];
                        row_col[r] = k;
                        owner[k] = Some(r);
                        prev
                    }
                    Node::Padding => {
                        owner[k] = None;
                        padding_entry
                    }
                };
                if came_from == target {
                    break;
                }
                k = came_from;
            }
            row_col[i] = target;
            owner[target] = Some(i);
            break;
        }
        locked[row_col[i]] = true;
    }
    row_col
}
