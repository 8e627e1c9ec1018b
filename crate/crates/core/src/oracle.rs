//! Ground-truth hypervolume computations for small instances, independent
//! of the box decomposition and of WFG.

use crate::decomp::PartitionBox;
use crate::dominance::weakly;
use crate::error::{Error, Result};
use crate::rng::Stream;
use crate::sum::CompensatedSum;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleBudget {
    /// Inclusion-exclusion enumerates `2^n - 1` subsets.
    pub max_points_ie: usize,
    /// Cap on the number of grid cells over the first `p - 1` axes.
    pub max_grid_cells: u64,
    pub mc_samples: usize,
    pub rng_seed: u64,
}

impl Default for OracleBudget {
    fn default() -> Self {
        Self {
            max_points_ie: 20,
            max_grid_cells: 1 << 26,
            mc_samples: 100_000,
            rng_seed: 0x05ee_d0f0_ac1e,
        }
    }
}

/// `sum over nonempty S of (-1)^(|S|+1) prod_j (r_j - max_{z in S} z_j)^+`.
pub fn volume_inclusion_exclusion(
    points: &[Vec<f64>],
    reference: &[f64],
    budget: &OracleBudget,
) -> Result<f64> {
    if points.len() > budget.max_points_ie {
        return Err(Error::Budget(format!(
            "inclusion-exclusion limited to {} points, got {}",
            budget.max_points_ie,
            points.len()
        )));
    }
    check_dims(points, reference)?;
    let mut acc = CompensatedSum::new();
    let mut corner = Vec::with_capacity(points.len() + 1);
    corner.push(vec![f64::NEG_INFINITY; reference.len()]);
    ie_rec(points, reference, 0, 1.0, &mut corner, &mut acc);
    Ok(acc.value())
}

fn ie_rec(
    points: &[Vec<f64>],
    reference: &[f64],
    start: usize,
    sign: f64,
    corner: &mut Vec<Vec<f64>>,
    acc: &mut CompensatedSum,
) {
    for i in start..points.len() {
        let top = corner.last().unwrap();
        let next: Vec<f64> = top.iter().zip(&points[i]).map(|(a, b)| a.max(*b)).collect();
        let vol: f64 = next
            .iter()
            .zip(reference)
            .map(|(c, r)| (r - c).max(0.0))
            .product();
        if vol == 0.0 {
            // corners only grow, so every superset is empty too
            continue;
        }
        acc.add(sign * vol);
        corner.push(next);
        ie_rec(points, reference, i + 1, -sign, corner, acc);
        corner.pop();
    }
}

/// Coordinate-compression oracle: the axes are cut at every point value
/// and at the reference; a cell is dominated iff its lower corner is
/// weakly dominated by some point. The last axis is summed in closed form.
pub fn volume_grid_sweep(
    points: &[Vec<f64>],
    reference: &[f64],
    budget: &OracleBudget,
) -> Result<f64> {
    check_dims(points, reference)?;
    if points.is_empty() {
        return Ok(0.0);
    }
    if points.len() > 128 {
        return Err(Error::Budget(format!(
            "grid oracle limited to 128 points, got {}",
            points.len()
        )));
    }
    let p = reference.len();
    let mut axes = Vec::with_capacity(p - 1);
    let mut cells: u64 = 1;
    for j in 0..p - 1 {
        let mut cuts: Vec<f64> = points.iter().map(|z| z[j]).collect();
        cuts.push(reference[j]);
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        cells = cells.saturating_mul(cuts.len() as u64 - 1);
        // masks[k]: points with z_j <= cuts[k]
        let masks: Vec<u128> = cuts[..cuts.len() - 1]
            .iter()
            .map(|&c| {
                points
                    .iter()
                    .enumerate()
                    .filter(|(_, z)| z[j] <= c)
                    .fold(0u128, |m, (i, _)| m | 1 << i)
            })
            .collect();
        axes.push((cuts, masks));
    }
    if cells > budget.max_grid_cells {
        return Err(Error::Budget(format!(
            "grid oracle needs {cells} cells, budget is {}",
            budget.max_grid_cells
        )));
    }
    let last: Vec<f64> = points.iter().map(|z| z[p - 1]).collect();
    let all = if points.len() == 128 {
        u128::MAX
    } else {
        (1u128 << points.len()) - 1
    };
    let mut acc = CompensatedSum::new();
    grid_rec(&axes, &last, reference[p - 1], 0, all, 1.0, &mut acc);
    Ok(acc.value())
}

fn grid_rec(
    axes: &[(Vec<f64>, Vec<u128>)],
    last: &[f64],
    last_ref: f64,
    j: usize,
    mask: u128,
    width: f64,
    acc: &mut CompensatedSum,
) {
    if j == axes.len() {
        let mut lo = f64::INFINITY;
        let mut m = mask;
        while m != 0 {
            let i = m.trailing_zeros() as usize;
            lo = lo.min(last[i]);
            m &= m - 1;
        }
        acc.add(width * (last_ref - lo));
        return;
    }
    let (cuts, masks) = &axes[j];
    for (k, &dom) in masks.iter().enumerate() {
        let m = mask & dom;
        if m != 0 {
            grid_rec(
                axes,
                last,
                last_ref,
                j + 1,
                m,
                width * (cuts[k + 1] - cuts[k]),
                acc,
            );
        }
    }
}

fn check_dims(points: &[Vec<f64>], reference: &[f64]) -> Result<()> {
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

#[derive(Debug, Clone, PartialEq)]
pub struct McReport {
    pub samples: usize,
    pub in_d_count: usize,
    pub exactly_one_box_violations: usize,
    pub first_violation: Option<Vec<f64>>,
}

/// Draws uniform samples in `[0, r]` and checks that each lies in the
/// dominated region iff it lies in exactly one box.
pub fn mc_partition_check(
    points: &[Vec<f64>],
    reference: &[f64],
    boxes: &[PartitionBox],
    samples: usize,
    seed: u64,
) -> McReport {
    let mut rng = Stream::new(seed);
    let mut report = McReport {
        samples,
        in_d_count: 0,
        exactly_one_box_violations: 0,
        first_violation: None,
    };
    let mut x = vec![0.0; reference.len()];
    for _ in 0..samples {
        for (xj, rj) in x.iter_mut().zip(reference) {
            *xj = rj * rng.open01();
        }
        let in_d = points.iter().any(|z| weakly(z, &x));
        let mut hits = 0;
        for b in boxes {
            if b.contains(&x) {
                hits += 1;
                if hits > 1 {
                    break;
                }
            }
        }
        if in_d {
            report.in_d_count += 1;
        }
        if in_d != (hits == 1) {
            report.exactly_one_box_violations += 1;
            report.first_violation.get_or_insert_with(|| x.clone());
        }
    }
    report
}

/// First pair of boxes that intersect, if any.
pub fn find_overlapping_boxes(boxes: &[PartitionBox]) -> Option<(usize, usize)> {
    for (i, a) in boxes.iter().enumerate() {
        for (j, b) in boxes.iter().enumerate().skip(i + 1) {
            if a.intersects(b) {
                return Some((i, j));
            }
        }
    }
    None
}
