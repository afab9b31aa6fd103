//! GOSPA, OSPA and unnormalized OSPA between finite sets of target states.
//!
//! For `|X| <= |Y|` the GOSPA distance is
//!
//! ```text
//! d(X, Y) = ( min_pi sum_i min(d(x_i, y_pi(i)), c)^p + c^p / alpha * (|Y| - |X|) )^(1/p)
//! ```
//!
//! and it is symmetric. With `alpha = 2` the same value is a minimum over
//! partial assignments, where each assigned pair costs `d^p` and every
//! unassigned (missed or false) target costs `c^p / 2`. [`gospa`] reports that
//! split; [`gospa_permutation_form`] evaluates the permutation formula on a
//! padded square matrix and serves as a second route to the same number.

use std::fmt;
use std::sync::Arc;

use crate::assignment::{solve_full_assignment, AssignmentSet, CostMatrix};
use crate::error::{GospaError, Result};
use crate::scalar::Scalar;

/// A finite multiset of points in `R^N`, stored row-major.
///
/// Point order is storage only. Duplicate points are allowed.
#[derive(Debug, Clone, PartialEq)]
pub struct TargetSet<T> {
    dimension: usize,
    coords: Vec<T>,
}

impl<T: Scalar> TargetSet<T> {
    pub fn empty(dimension: usize) -> Self {
        Self {
            dimension,
            coords: Vec::new(),
        }
    }

    pub fn new(dimension: usize, points: &[Vec<T>]) -> Result<Self> {
        let mut set = Self::empty(dimension);
        for point in points {
            set.push(point)?;
        }
        Ok(set)
    }

    /// Infers the dimension from the first point. An empty input gives an
    /// empty set of dimension 0.
    pub fn from_points(points: &[Vec<T>]) -> Result<Self> {
        Self::new(points.first().map_or(0, Vec::len), points)
    }

    pub fn push(&mut self, point: &[T]) -> Result<()> {
        if self.dimension == 0 {
            return Err(GospaError::InvalidInput(
                "points need at least one coordinate".into(),
            ));
        }
        if point.len() != self.dimension {
            return Err(GospaError::DimensionMismatch {
                expected: self.dimension,
                found: point.len(),
            });
        }
        if point.iter().any(|v| !v.is_finite()) {
            return Err(GospaError::InvalidInput(format!(
                "point {:?} has a non-finite coordinate",
                point
            )));
        }
        self.coords.extend_from_slice(point);
        Ok(())
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn len(&self) -> usize {
        self.coords.len().checked_div(self.dimension).unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, index: usize) -> &[T] {
        &self.coords[index * self.dimension..(index + 1) * self.dimension]
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &[T]> + '_ {
        // chunks_exact panics on 0; an empty set yields nothing either way.
        self.coords.chunks_exact(self.dimension.max(1))
    }

    pub fn to_points(&self) -> Vec<Vec<T>> {
        self.iter().map(<[T]>::to_vec).collect()
    }

    /// Multiset equality: same points with the same multiplicities.
    pub fn same_multiset(&self, other: &Self) -> bool {
        if self.len() != other.len() {
            return false;
        }
        if self.is_empty() {
            return true;
        }
        if self.dimension != other.dimension {
            return false;
        }
        fn sorted<T: Scalar>(s: &TargetSet<T>) -> Vec<&[T]> {
            let mut pts: Vec<&[T]> = s.iter().collect();
            pts.sort_by(|a, b| {
                a.iter()
                    .zip(b.iter())
                    .map(|(u, v)| u.partial_cmp(v).expect("coordinates are finite"))
                    .find(|o| o.is_ne())
                    .unwrap_or(std::cmp::Ordering::Equal)
            });
            pts
        }
        sorted(self) == sorted(other)
    }
}

/// Signature of a user-supplied base metric.
pub type DistanceFn<T> = dyn Fn(&[T], &[T]) -> T + Send + Sync;

/// Metric on single target states. Custom functions must themselves be
/// metrics for the set distances to be metrics.
#[derive(Clone, Default)]
pub enum BaseDistance<T> {
    #[default]
    Euclidean,
    Manhattan,
    Custom(Arc<DistanceFn<T>>),
}

impl<T: Scalar> BaseDistance<T> {
    pub fn custom(f: impl Fn(&[T], &[T]) -> T + Send + Sync + 'static) -> Self {
        Self::Custom(Arc::new(f))
    }

    pub fn eval(&self, x: &[T], y: &[T]) -> T {
        match self {
            Self::Euclidean => x
                .iter()
                .zip(y)
                .map(|(a, b)| (*a - *b) * (*a - *b))
                .sum::<T>()
                .sqrt(),
            Self::Manhattan => x.iter().zip(y).map(|(a, b)| (*a - *b).abs()).sum(),
            Self::Custom(f) => f(x, y),
        }
    }
}

impl<T> fmt::Debug for BaseDistance<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Euclidean => f.write_str("Euclidean"),
            Self::Manhattan => f.write_str("Manhattan"),
            Self::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

/// Cut-off `c > 0`, cardinality weight `0 < alpha <= 2`, exponent `1 <= p < inf`
/// and the base metric.
#[derive(Debug, Clone)]
pub struct GospaParams<T> {
    c: T,
    alpha: T,
    p: T,
    base: BaseDistance<T>,
}

impl<T: Scalar> GospaParams<T> {
    pub fn new(c: T, alpha: T, p: T) -> Result<Self> {
        let params = Self {
            c,
            alpha,
            p,
            base: BaseDistance::Euclidean,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn with_base(mut self, base: BaseDistance<T>) -> Self {
        self.base = base;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.c.is_finite() && self.c > T::zero()) {
            return Err(GospaError::InvalidParams(format!(
                "cut-off c must be finite and > 0, got {}",
                self.c
            )));
        }
        if !(self.alpha > T::zero() && self.alpha <= T::of(2.0)) {
            return Err(GospaError::InvalidParams(format!(
                "alpha must lie in (0, 2], got {}",
                self.alpha
            )));
        }
        if !(self.p.is_finite() && self.p >= T::one()) {
            return Err(GospaError::InvalidParams(format!(
                "exponent p must lie in [1, inf), got {}",
                self.p
            )));
        }
        Ok(())
    }

    pub fn c(&self) -> T {
        self.c
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    pub fn p(&self) -> T {
        self.p
    }

    pub fn base(&self) -> &BaseDistance<T> {
        &self.base
    }

    pub fn has_decomposition(&self) -> bool {
        self.alpha == T::of(2.0)
    }

    /// Cost `c^p / alpha` of one target left without a partner.
    fn cardinality_penalty(&self) -> T {
        self.c.powf(self.p) / self.alpha
    }
}

/// Split of `total^p` into localization, missed and false costs (`alpha = 2`).
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition<T> {
    /// Sum of `d(x_i, y_j)^p` over assigned pairs.
    pub localization_cost_p: T,
    pub missed_count: usize,
    pub false_count: usize,
    /// `c^p / 2 * missed_count`
    pub missed_cost_p: T,
    /// `c^p / 2 * false_count`
    pub false_cost_p: T,
    /// Pairs of (truth index, estimate index); every pair has `d < c`.
    pub assignment: AssignmentSet<T>,
}

/// GOSPA value, with its decomposition when `alpha = 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct GospaBreakdown<T> {
    pub total: T,
    /// `None` when `alpha != 2`: no partial-assignment form exists there.
    pub decomposition: Option<Decomposition<T>>,
}

/// `min(d(x, y), c)`.
pub fn cutoff_distance<T: Scalar>(x: &[T], y: &[T], c: T, base: &BaseDistance<T>) -> Result<T> {
    if x.len() != y.len() {
        return Err(GospaError::DimensionMismatch {
            expected: x.len(),
            found: y.len(),
        });
    }
    if !(c.is_finite() && c > T::zero()) {
        return Err(GospaError::InvalidParams(format!("cut-off must be > 0, got {c}")));
    }
    Ok(base.eval(x, y).min(c))
}

fn check_dimensions<T: Scalar>(x: &TargetSet<T>, y: &TargetSet<T>) -> Result<()> {
    if !x.is_empty() && !y.is_empty() && x.dimension() != y.dimension() {
        return Err(GospaError::DimensionMismatch {
            expected: x.dimension(),
            found: y.dimension(),
        });
    }
    Ok(())
}

/// GOSPA distance between `truth` and `estimate`.
///
/// Assignment indices in the decomposition are (truth, estimate). A pair at
/// distance exactly `c` is reported as one missed plus one false target.
pub fn gospa<T: Scalar>(
    truth: &TargetSet<T>,
    estimate: &TargetSet<T>,
    params: &GospaParams<T>,
) -> Result<GospaBreakdown<T>> {
    params.validate()?;
    check_dimensions(truth, estimate)?;
    let (c, p) = (params.c, params.p);
    let half_cp = c.powf(p) / T::of(2.0);
    let decompose = params.has_decomposition();

    if truth.is_empty() || estimate.is_empty() {
        let unpaired = T::of_usize(truth.len() + estimate.len());
        let total = (params.cardinality_penalty() * unpaired).powf(p.recip());
        let decomposition = decompose.then(|| Decomposition {
            localization_cost_p: T::zero(),
            missed_count: truth.len(),
            false_count: estimate.len(),
            missed_cost_p: half_cp * T::of_usize(truth.len()),
            false_cost_p: half_cp * T::of_usize(estimate.len()),
            assignment: AssignmentSet::empty(),
        });
        return Ok(GospaBreakdown {
            total,
            decomposition,
        });
    }

    // Rows index the smaller set.
    let flipped = truth.len() > estimate.len();
    let (small, large) = if flipped {
        (estimate, truth)
    } else {
        (truth, estimate)
    };
    let mut distances = Vec::with_capacity(small.len() * large.len());
    for s in small.iter() {
        for l in large.iter() {
            distances.push(params.base.eval(s, l));
        }
    }
    let costs = CostMatrix::from_fn(small.len(), large.len(), |i, j| {
        // Cap before raising to p so far outliers cannot overflow.
        distances[i * large.len() + j].min(c).powf(p)
    })?;
    let solution = solve_full_assignment(&costs)?;
    let surplus = T::of_usize(large.len() - small.len());
    let total_p = solution.total_cost() + params.cardinality_penalty() * surplus;
    let total = total_p.powf(p.recip());

    let decomposition = decompose.then(|| {
        let mut pairs = Vec::new();
        let mut localization = T::zero();
        for &(i, j) in solution.pairs() {
            let d = distances[i * large.len() + j];
            if d < c {
                localization = localization + d.powf(p);
                pairs.push(if flipped { (j, i) } else { (i, j) });
            }
        }
        pairs.sort_unstable();
        let assigned = pairs.len();
        let missed_count = truth.len() - assigned;
        let false_count = estimate.len() - assigned;
        Decomposition {
            localization_cost_p: localization,
            missed_count,
            false_count,
            missed_cost_p: half_cp * T::of_usize(missed_count),
            false_cost_p: half_cp * T::of_usize(false_count),
            assignment: AssignmentSet::from_parts(pairs, localization),
        }
    });

    Ok(GospaBreakdown {
        total,
        decomposition,
    })
}

/// GOSPA by minimizing over complete assignments of a square matrix, with the
/// missing rows of the smaller set padded at cost `c^p / alpha`.
pub fn gospa_permutation_form<T: Scalar>(
    x: &TargetSet<T>,
    y: &TargetSet<T>,
    params: &GospaParams<T>,
) -> Result<T> {
    params.validate()?;
    check_dimensions(x, y)?;
    let (small, large) = if x.len() <= y.len() { (x, y) } else { (y, x) };
    let size = large.len();
    if size == 0 {
        return Ok(T::zero());
    }
    let padding = params.cardinality_penalty();
    let costs = CostMatrix::from_fn(size, size, |i, j| {
        if i < small.len() {
            params
                .base
                .eval(small.point(i), large.point(j))
                .min(params.c)
                .powf(params.p)
        } else {
            padding
        }
    })?;
    let best = solve_full_assignment(&costs)?;
    Ok(best.total_cost().powf(params.p.recip()))
}

/// GOSPA with `alpha = 1`.
pub fn unnormalized_ospa<T: Scalar>(
    x: &TargetSet<T>,
    y: &TargetSet<T>,
    c: T,
    p: T,
    base: &BaseDistance<T>,
) -> Result<T> {
    let params = GospaParams::new(c, T::one(), p)?.with_base(base.clone());
    Ok(gospa(x, y, &params)?.total)
}

/// OSPA with the Euclidean base metric.
pub fn ospa<T: Scalar>(x: &TargetSet<T>, y: &TargetSet<T>, c: T, p: T) -> Result<T> {
    ospa_with_base(x, y, c, p, &BaseDistance::Euclidean)
}

/// OSPA: unnormalized OSPA divided by `max(|X|, |Y|)^(1/p)`; `c` when exactly
/// one set is empty and `0` when both are.
pub fn ospa_with_base<T: Scalar>(
    x: &TargetSet<T>,
    y: &TargetSet<T>,
    c: T,
    p: T,
    base: &BaseDistance<T>,
) -> Result<T> {
    let unnormalized = unnormalized_ospa(x, y, c, p, base)?;
    let largest = x.len().max(y.len());
    if largest == 0 {
        return Ok(T::zero());
    }
    if x.is_empty() || y.is_empty() {
        return Ok(c);
    }
    Ok(unnormalized / T::of_usize(largest).powf(p.recip()))
}

/// Unnormalized OSPA for two true targets, `n_missed` of them undetected,
/// detected ones at cut-off distances `d1` (first target) and `d2` (second
/// target), and `n_false` false targets beyond `c` from everything.
///
/// ```text
///          n >= 2                 n = 1                     n = 0
/// m = 2    (n c^p)^(1/p)          (2 c^p)^(1/p)             (2 c^p)^(1/p)
/// m = 1    (d1^p + n c^p)^(1/p)   (d1^p + c^p)^(1/p)        (d1^p + c^p)^(1/p)
/// m = 0    (d1^p+d2^p+n c^p)^(1/p) (d1^p + d2^p + c^p)^(1/p) (d1^p + d2^p)^(1/p)
/// ```
///
/// Only the first detected target's distance counts when `m = 1`.
pub fn unnormalized_ospa_closed_form<T: Scalar>(
    n_false: usize,
    n_missed: usize,
    d1: T,
    d2: T,
    c: T,
    p: T,
) -> Result<T> {
    GospaParams::new(c, T::one(), p)?;
    if n_missed > 2 {
        return Err(GospaError::InvalidInput(format!(
            "two true targets allow at most 2 misses, got {n_missed}"
        )));
    }
    for d in [d1, d2] {
        if !(d >= T::zero() && d <= c) {
            return Err(GospaError::InvalidInput(format!(
                "cut-off distance {d} outside [0, {c}]"
            )));
        }
    }
    let cp = c.powf(p);
    let n = T::of_usize(n_false);
    let value_p = match (n_missed, n_false) {
        (2, 0 | 1) => cp + cp,
        (2, _) => n * cp,
        (1, 0 | 1) => d1.powf(p) + cp,
        (1, _) => d1.powf(p) + n * cp,
        (_, _) => d1.powf(p) + d2.powf(p) + n * cp,
    };
    Ok(value_p.powf(p.recip()))
}
