//! Partial sums of `‖Wx‖²` and `‖W P_M x‖²` and their growth classification.
//!
//! Classification, applied to the partial sums at the grid points:
//! a log-log slope of at least [`DIVERGENT_SLOPE`] over the last half of the
//! grid means DIVERGENT; otherwise an increment below [`CAUCHY_TAIL`] between
//! the last two grid points means CONVERGENT; anything else is INCONCLUSIVE.

use serde::{Serialize, Serializer};

use super::fastq::{Accumulator, Q128};
use super::index_set::IndexSet;
use super::operator::{BandedOperator, DenselyDefinedOperator};
use super::sequence::SequenceRecipe;
use crate::error::SeqError;
use crate::scalar::Rational;

pub const DIVERGENT_SLOPE: f64 = 0.5;
pub const CAUCHY_TAIL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Growth {
    Convergent,
    Divergent,
    Inconclusive,
}

fn serialize_exact<S: Serializer>(v: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(r) => s.serialize_str(&r.to_string()),
        None => s.serialize_none(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SumPoint {
    /// Rows (or witness terms) summed so far.
    pub count: u64,
    pub value: f64,
    /// The partial sum as an exact rational, while it is still carried
    /// exactly.
    #[serde(serialize_with = "serialize_exact")]
    pub exact: Option<Rational>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeriesReport {
    pub points: Vec<SumPoint>,
    pub slope: f64,
    pub tail: f64,
    pub growth: Growth,
}

impl SeriesReport {
    pub(crate) fn from_points(points: Vec<SumPoint>) -> Self {
        let counts: Vec<u64> = points.iter().map(|p| p.count).collect();
        let values: Vec<f64> = points.iter().map(|p| p.value).collect();
        let (slope, tail, growth) = classify(&counts, &values);
        Self {
            points,
            slope,
            tail,
            growth,
        }
    }

    pub fn last_value(&self) -> f64 {
        self.points.last().map_or(0.0, |p| p.value)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthReport {
    /// `‖Wx‖²` partial sums: finite limit means `x ∈ D(T)`.
    pub domain: SeriesReport,
    /// `‖W P_M x‖²` partial sums.
    pub projected: SeriesReport,
}

/// Least-squares slope of `ln value` against `ln count` over the last half
/// of the points (at least two). Nonpositive sums give slope 0.
pub fn loglog_slope(counts: &[u64], values: &[f64]) -> f64 {
    let n = counts.len();
    if n < 2 {
        return 0.0;
    }
    let take = n.div_ceil(2).max(2);
    let start = n - take;
    if values[start..].iter().any(|&v| v <= 0.0) {
        return 0.0;
    }
    let xs: Vec<f64> = counts[start..].iter().map(|&c| (c as f64).ln()).collect();
    let ys: Vec<f64> = values[start..].iter().map(|v| v.ln()).collect();
    let mx = xs.iter().sum::<f64>() / take as f64;
    let my = ys.iter().sum::<f64>() / take as f64;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}

pub fn classify(counts: &[u64], values: &[f64]) -> (f64, f64, Growth) {
    let slope = loglog_slope(counts, values);
    let tail = match values {
        [.., a, b] => (b - a).abs(),
        _ => f64::INFINITY,
    };
    let growth = if slope >= DIVERGENT_SLOPE {
        Growth::Divergent
    } else if tail < CAUCHY_TAIL {
        Growth::Convergent
    } else {
        Growth::Inconclusive
    };
    (slope, tail, growth)
}

pub(crate) fn check_grid(grid: &[u64]) -> Result<(), SeqError> {
    if grid.is_empty() || grid[0] == 0 || grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(SeqError::BadGrid);
    }
    Ok(())
}

fn row_fast(
    bands: &[(i64, super::operator::FastCoefficient)],
    x: &super::sequence::FastSequence<'_>,
    m: &IndexSet,
    i: i64,
) -> Option<(Q128, Q128)> {
    let mut full = Q128::ZERO;
    let mut projected = Q128::ZERO;
    for (d, coeff) in bands {
        let j = i + d;
        if j < 1 {
            continue;
        }
        let c = coeff.eval(i)?;
        if c.is_zero() {
            continue;
        }
        let term = c.mul(x.value(j)?)?;
        full = full.add(term)?;
        if m.contains(j) {
            projected = projected.add(term)?;
        }
    }
    Some((full.mul(full)?, projected.mul(projected)?))
}

fn row_exact(w: &BandedOperator, x: &SequenceRecipe, m: &IndexSet, i: i64) -> (Rational, Rational) {
    let mut full = Rational::from_integer(0.into());
    let mut projected = full.clone();
    for b in w.bands() {
        let j = i + b.offset;
        if j < 1 {
            continue;
        }
        let term = b.coeff.eval(i) * x.value(j);
        if m.contains(j) {
            projected += &term;
        }
        full += term;
    }
    (&full * &full, &projected * &projected)
}

/// Row values in `f64`, each product formed exactly first. Used once both
/// sums have left exact arithmetic and the row overflows `Q128`.
fn row_float(
    bands: &[(i64, super::operator::FastCoefficient)],
    w: &BandedOperator,
    x: &super::sequence::FastSequence<'_>,
    recipe: &SequenceRecipe,
    m: &IndexSet,
    i: i64,
) -> (f64, f64) {
    let mut full = 0.0;
    let mut projected = 0.0;
    for ((d, coeff), band) in bands.iter().zip(w.bands()) {
        let j = i + d;
        if j < 1 {
            continue;
        }
        let term = match (coeff.eval(i), x.value(j)) {
            (Some(c), Some(v)) => c.mul(v).map(|t| t.to_f64()),
            _ => None,
        }
        .unwrap_or_else(|| crate::scalar::to_f64(&(band.coeff.eval(i) * recipe.value(j))));
        full += term;
        if m.contains(j) {
            projected += term;
        }
    }
    (full * full, projected * projected)
}

fn point(count: u64, acc: &Accumulator) -> SumPoint {
    SumPoint {
        count,
        value: acc.value(),
        exact: acc.exact(),
    }
}

/// Partial sums over rows `1..=g` for each `g` in `grid`.
pub fn divergence_probe(
    t: &DenselyDefinedOperator,
    m: &IndexSet,
    x: &SequenceRecipe,
    grid: &[u64],
) -> Result<GrowthReport, SeqError> {
    check_grid(grid)?;
    let w = t.domain_operator();
    let fast_bands = w.to_fast();
    let fast_x = x.to_fast();
    let mut full = Accumulator::default();
    let mut projected = Accumulator::default();
    let mut domain_points = Vec::with_capacity(grid.len());
    let mut projected_points = Vec::with_capacity(grid.len());
    let mut row: u64 = 0;
    for &g in grid {
        while row < g {
            row += 1;
            let i = row as i64;
            match row_fast(&fast_bands, &fast_x, m, i) {
                Some((a, b)) => {
                    full.add_small(a);
                    projected.add_small(b);
                }
                None if full.is_float() && projected.is_float() => {
                    let (a, b) = row_float(&fast_bands, w, &fast_x, x, m, i);
                    full.add_rounded(a);
                    projected.add_rounded(b);
                }
                None => {
                    let (a, b) = row_exact(w, x, m, i);
                    full.add_big(&a);
                    projected.add_big(&b);
                }
            }
        }
        domain_points.push(point(g, &full));
        projected_points.push(point(g, &projected));
    }
    Ok(GrowthReport {
        domain: SeriesReport::from_points(domain_points),
        projected: SeriesReport::from_points(projected_points),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    #[test]
    fn pairing_example_sums() {
        let t = DenselyDefinedOperator::pairing_example();
        let r = divergence_probe(
            &t,
            &IndexSet::odds(),
            &SequenceRecipe::harmonic(),
            &[20, 200, 2000, 20000],
        )
        .unwrap();
        // Σ_{k≤K} 1/(4k²) against the oracle computed directly
        let oracle: f64 = (1..=10000).map(|k| 1.0 / (4.0 * (k as f64).powi(2))).sum();
        assert!((r.domain.last_value() - oracle).abs() < 1e-12);
        assert_eq!(r.domain.growth, Growth::Inconclusive);
        assert_eq!(r.projected.points[3].exact, Some(int(10000)));
        assert!((r.projected.slope - 1.0).abs() < 1e-9);
        assert_eq!(r.projected.growth, Growth::Divergent);
    }

    #[test]
    fn finite_support_is_constant() {
        let t = DenselyDefinedOperator::pairing_example();
        let r = divergence_probe(&t, &IndexSet::odds(), &SequenceRecipe::unit(1), &[4, 8, 16]).unwrap();
        assert!(r.domain.points.iter().all(|p| p.exact == Some(int(1))));
        assert_eq!(r.domain.growth, Growth::Convergent);
        assert_eq!(r.projected.growth, Growth::Convergent);
    }

    #[test]
    fn bad_grids() {
        let t = DenselyDefinedOperator::pairing_example();
        let x = SequenceRecipe::harmonic();
        assert_eq!(divergence_probe(&t, &IndexSet::odds(), &x, &[]), Err(SeqError::BadGrid));
        assert_eq!(
            divergence_probe(&t, &IndexSet::odds(), &x, &[4, 4]),
            Err(SeqError::BadGrid)
        );
    }

    #[test]
    fn classification_thresholds() {
        assert_eq!(classify(&[1, 2, 4, 8], &[1.0, 2.0, 4.0, 8.0]).2, Growth::Divergent);
        assert_eq!(classify(&[1, 2, 4, 8], &[1.0, 1.0, 1.0, 1.0]).2, Growth::Convergent);
        assert_eq!(classify(&[1, 2, 4, 8], &[0.0, 0.0, 0.0, 0.0]).2, Growth::Convergent);
        assert_eq!(classify(&[1, 2, 4, 8], &[1.0, 1.1, 1.2, 1.3]).2, Growth::Inconclusive);
    }
}
