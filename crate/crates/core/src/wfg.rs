//! Instrumented WFG baselines.
//!
//! The hypervolume of `N + {z}` is `V(N) + V({z}) - V(N')`, where the
//! limit set `N'` is the nondominated part of `{pmax(z, y) : y in N}`.
//! [`wfg_basic`] recurses on `N'` in the same dimension. [`wfg_sliced`]
//! processes points in nondecreasing order of the last component, so every
//! `N'` lies in the hyperplane `x_d = z_d` and its volume is a
//! `(d-1)`-dimensional one times `r_d - z_d`; two-dimensional subproblems
//! are solved by a sweep. [`wfg_incremental`] takes points in arrival
//! order and evaluates each `N'` with the sliced recursion.
//!
//! These functions accept any points weakly below the reference; they do
//! not require the open-box normalization the box decomposition needs.

use std::collections::BTreeMap;

use crate::dominance::nondominated_indices;
use crate::error::{Error, Result};
use crate::sum::CompensatedSum;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct WfgCounters {
    /// Calls on a nonempty set, keyed by the dimension of that set.
    pub recursive_calls_by_dim: BTreeMap<usize, u64>,
    /// Raw `pmax` projections, counted before dominance filtering.
    pub limitset_points_generated: u64,
    /// Two-dimensional base cases, keyed by their number of points.
    pub base2d_calls_by_size: BTreeMap<usize, u64>,
}

impl WfgCounters {
    pub fn calls_at(&self, dim: usize) -> u64 {
        self.recursive_calls_by_dim.get(&dim).copied().unwrap_or(0)
    }

    pub fn calls_total(&self) -> u64 {
        self.recursive_calls_by_dim.values().sum()
    }

    fn enter(&mut self, dim: usize) {
        *self.recursive_calls_by_dim.entry(dim).or_default() += 1;
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WfgOutcome {
    pub volume: f64,
    pub counters: WfgCounters,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WfgIncrementalOutcome {
    pub volume: f64,
    /// Hypervolume of the first `k + 1` arrivals at index `k`.
    pub prefix_volumes: Vec<f64>,
    pub counters: WfgCounters,
}

/// Componentwise maximum.
pub fn pmax(a: &[f64], b: &[f64]) -> Result<Vec<f64>> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    Ok(a.iter().zip(b).map(|(x, y)| x.max(*y)).collect())
}

/// Nondominated subset of `{pmax(z, y) : y in points}`.
pub fn limit_set(points: &[Vec<f64>], z: &[f64], counters: &mut WfgCounters) -> Vec<Vec<f64>> {
    counters.limitset_points_generated += points.len() as u64;
    let mut raw: Vec<Vec<f64>> = points
        .iter()
        .map(|y| y.iter().zip(z).map(|(a, b)| a.max(*b)).collect())
        .collect();
    let keep = nondominated_indices(&raw).expect("uniform dimension");
    keep.into_iter()
        .map(|i| std::mem::take(&mut raw[i]))
        .collect()
}

#[inline]
fn inclusive(z: &[f64], reference: &[f64]) -> f64 {
    z.iter().zip(reference).map(|(v, r)| r - v).product()
}

fn check(points: &[Vec<f64>], reference: &[f64]) -> Result<()> {
    if reference.len() < 2 {
        return Err(Error::DimensionTooSmall(reference.len()));
    }
    for z in points {
        if z.len() != reference.len() {
            return Err(Error::DimensionMismatch {
                expected: reference.len(),
                found: z.len(),
            });
        }
    }
    Ok(())
}

/// WFG without slicing: every limit set is solved in full dimension.
pub fn wfg_basic(points: &[Vec<f64>], reference: &[f64]) -> Result<WfgOutcome> {
    check(points, reference)?;
    let mut counters = WfgCounters::default();
    let volume = basic_rec(points, reference, &mut counters);
    Ok(WfgOutcome { volume, counters })
}

fn basic_rec(points: &[Vec<f64>], reference: &[f64], c: &mut WfgCounters) -> f64 {
    if points.is_empty() {
        return 0.0;
    }
    c.enter(reference.len());
    let mut total = CompensatedSum::new();
    for (i, z) in points.iter().enumerate() {
        let mut excl = inclusive(z, reference);
        if i > 0 {
            let ls = limit_set(&points[..i], z, c);
            excl -= basic_rec(&ls, reference, c);
        }
        total.add(excl);
    }
    total.value()
}

/// WFG with the last component imposed as the sorted (sliced) one at
/// every recursion level, and a sweep for two dimensions.
pub fn wfg_sliced(points: &[Vec<f64>], reference: &[f64]) -> Result<WfgOutcome> {
    check(points, reference)?;
    let mut counters = WfgCounters::default();
    let volume = sliced_rec(points.to_vec(), reference, &mut counters);
    Ok(WfgOutcome { volume, counters })
}

fn sliced_rec(mut points: Vec<Vec<f64>>, reference: &[f64], c: &mut WfgCounters) -> f64 {
    let d = reference.len();
    if points.is_empty() {
        return 0.0;
    }
    c.enter(d);
    if d == 2 {
        *c.base2d_calls_by_size.entry(points.len()).or_default() += 1;
        return sweep_2d(points, reference);
    }
    // stable: on ties the later point is processed later
    points.sort_by(|a, b| a[d - 1].total_cmp(&b[d - 1]));
    let mut total = CompensatedSum::new();
    for i in 0..points.len() {
        let z = &points[i];
        let mut excl = inclusive(z, reference);
        if i > 0 {
            let thickness = reference[d - 1] - z[d - 1];
            let mut ls = limit_set(&points[..i], z, c);
            for y in &mut ls {
                y.pop();
            }
            if thickness > 0.0 {
                excl -= thickness * sliced_rec(ls, &reference[..d - 1], c);
            }
        }
        total.add(excl);
    }
    total.value()
}

/// Area dominated by `points` in the plane; tolerates dominated inputs.
fn sweep_2d(mut points: Vec<Vec<f64>>, reference: &[f64]) -> f64 {
    points.sort_by(|a, b| a[1].total_cmp(&b[1]).then(a[0].total_cmp(&b[0])));
    let mut left = reference[0];
    let mut area = CompensatedSum::new();
    for z in &points {
        if z[0] < left {
            area.add((left - z[0]) * (reference[1] - z[1]));
            left = z[0];
        }
    }
    area.value()
}

/// WFG over points in arrival order; each limit set is already ordered by
/// arrival, and is evaluated with the sliced recursion.
pub fn wfg_incremental(points: &[Vec<f64>], reference: &[f64]) -> Result<WfgIncrementalOutcome> {
    check(points, reference)?;
    let mut counters = WfgCounters::default();
    let mut total = CompensatedSum::new();
    let mut prefix_volumes = Vec::with_capacity(points.len());
    for (i, z) in points.iter().enumerate() {
        let mut excl = inclusive(z, reference);
        if i > 0 {
            let ls = limit_set(&points[..i], z, &mut counters);
            excl -= sliced_rec(ls, reference, &mut counters);
        }
        total.add(excl);
        prefix_volumes.push(total.value());
    }
    Ok(WfgIncrementalOutcome {
        volume: total.value(),
        prefix_volumes,
        counters,
    })
}
