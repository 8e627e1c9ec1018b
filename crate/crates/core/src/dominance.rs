//! Pareto dominance relations and the tie-breaking order used for
//! inputs that are not in general position.

use std::cmp::Ordering;

use crate::error::{Error, Result};

/// A point of the objective space together with its processing index.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    pub coords: Vec<f64>,
    pub id: usize,
}

impl Point {
    pub fn new(coords: Vec<f64>, id: usize) -> Self {
        Self { coords, id }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }
}

fn check_dims(a: &[f64], b: &[f64]) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    Ok(())
}

/// `a_j <= b_j` for every component.
pub fn weakly_dominates(a: &[f64], b: &[f64]) -> Result<bool> {
    check_dims(a, b)?;
    Ok(weakly(a, b))
}

/// Weak dominance with `a != b`.
pub fn dominates(a: &[f64], b: &[f64]) -> Result<bool> {
    check_dims(a, b)?;
    Ok(weakly(a, b) && a != b)
}

/// `a_j < b_j` for every component.
pub fn strictly_dominates(a: &[f64], b: &[f64]) -> Result<bool> {
    check_dims(a, b)?;
    Ok(strictly(a, b))
}

#[inline]
pub(crate) fn weakly(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

#[inline]
pub(crate) fn strictly(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x < y)
}

/// Per-dimension total order on `(value, id)` pairs: smaller value first,
/// and on equal values the pair with the larger id is the smaller one.
pub fn perturbed_less(a: (f64, usize), b: (f64, usize)) -> bool {
    a.0 < b.0 || (a.0 == b.0 && a.1 > b.1)
}

/// Returns the points of `points` that are not dominated by any other,
/// in their original relative order. Duplicates keep their first copy.
pub fn filter_nondominated(points: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    Ok(nondominated_indices(points)?
        .into_iter()
        .map(|i| points[i].clone())
        .collect())
}

/// Index form of [`filter_nondominated`]; indices are ascending.
pub fn nondominated_indices(points: &[Vec<f64>]) -> Result<Vec<usize>> {
    let Some(first) = points.first() else {
        return Ok(Vec::new());
    };
    for pt in points {
        check_dims(first, pt)?;
    }
    // A point can only be weakly dominated by a lexicographically
    // smaller-or-equal one, so a single pass over the sorted order suffices.
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| lex_cmp(&points[a], &points[b]).then(a.cmp(&b)));
    let mut kept: Vec<usize> = Vec::new();
    for &i in &order {
        if !kept.iter().any(|&k| weakly(&points[k], &points[i])) {
            kept.push(i);
        }
    }
    kept.sort_unstable();
    Ok(kept)
}

pub(crate) fn lex_cmp(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
}

/// Finds a pair `(i, j)` with `points[i]` weakly dominating `points[j]`, `i != j`.
pub(crate) fn find_unstable_pair(points: &[Vec<f64>]) -> Option<(usize, usize)> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| lex_cmp(&points[a], &points[b]));
    for (pos, &i) in order.iter().enumerate() {
        for &k in &order[..pos] {
            if weakly(&points[k], &points[i]) {
                return Some((k, i));
            }
        }
    }
    None
}
