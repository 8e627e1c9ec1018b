//! Box decomposition of the dominated region and the two hypervolume
//! drivers built on it.
//!
//! Each local upper bound `u` owns the box
//!
//! ```text
//! [z^1_1(u), r_1] x prod_{j>=2} [max_{k<j} z^k_j(u), u_j)
//! ```
//!
//! and the boxes of all bounds tile the dominated region, so the
//! hypervolume is the sum of their volumes.

use crate::error::Result;
use crate::frame::StableSet;
use crate::lub::{
    Change, LocalUpperBound, LubCounters, LubView, Mode, PointArena, UpperBoundState,
};
use crate::spatial::{KdCellIndex, LubIndex, SumSortedList};
use crate::sum::CompensatedSum;

/// Axis-parallel box, closed in the first dimension and half-open
/// (`[lower, upper)`) in all others.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionBox {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl PartitionBox {
    pub fn volume(&self) -> f64 {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(lo, hi)| hi - lo)
            .product()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        let (lo, hi) = (self.lower[0], self.upper[0]);
        if !(lo <= x[0] && x[0] <= hi) {
            return false;
        }
        (1..x.len()).all(|j| self.lower[j] <= x[j] && x[j] < self.upper[j])
    }

    /// True when the box contains no point at all.
    pub fn is_empty(&self) -> bool {
        self.lower[0] > self.upper[0]
            || (1..self.lower.len()).any(|j| self.lower[j] >= self.upper[j])
    }

    /// Interval test honoring the closed/half-open convention.
    pub fn intersects(&self, other: &PartitionBox) -> bool {
        if self.is_empty() || other.is_empty() {
            return false;
        }
        if self.lower[0].max(other.lower[0]) > self.upper[0].min(other.upper[0]) {
            return false;
        }
        (1..self.lower.len())
            .all(|j| self.lower[j].max(other.lower[j]) < self.upper[j].min(other.upper[j]))
    }
}

#[inline]
fn lower_corner(l: LubView<'_>, arena: &PointArena, j: usize) -> f64 {
    if j == 0 {
        arena.coords(l.defining[0])[0]
    } else {
        l.defining[..j]
            .iter()
            .map(|&d| arena.coords(d)[j])
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

pub fn box_of(l: LubView<'_>, arena: &PointArena) -> PartitionBox {
    let p = arena.dim();
    let lower: Vec<f64> = (0..p).map(|j| lower_corner(l, arena, j)).collect();
    let mut upper = l.u.to_vec();
    upper[0] = arena.reference()[0];
    let b = PartitionBox { lower, upper };
    debug_assert!(
        b.lower.iter().zip(&b.upper).all(|(lo, hi)| lo <= hi),
        "negative box extent {b:?}: corrupted defining points"
    );
    b
}

/// Volume of [`box_of`] without materializing the box.
#[inline]
pub fn box_volume(l: LubView<'_>, arena: &PointArena) -> f64 {
    let p = arena.dim();
    let mut v = arena.reference()[0] - arena.coords(l.defining[0])[0];
    for j in 1..p {
        let extent = l.u[j] - lower_corner(l, arena, j);
        debug_assert!(extent >= 0.0, "negative box extent in dimension {j}");
        v *= extent;
    }
    v
}

#[derive(Debug, Clone, PartialEq)]
pub struct HbdaOutcome {
    pub volume: f64,
    pub counters: LubCounters,
}

fn sorted_by_last(set: &StableSet) -> Vec<Vec<f64>> {
    let p = set.dim();
    let mut pts = set.points().to_vec();
    // stable: equal keys keep input order and receive increasing ids
    pts.sort_by(|a, b| a[p - 1].total_cmp(&b[p - 1]));
    pts
}

/// Nonincremental box decomposition with the kd-tree cell index.
pub fn hbda_ni(set: &StableSet) -> Result<HbdaOutcome> {
    let sorted = sorted_by_last(set);
    let index = KdCellIndex::build(&sorted, set.dim() - 1);
    run_ni(&sorted, set.reference(), index, |_, _| {})
}

/// Nonincremental driver over any index; `on_box` sees every bound of
/// `U(N)` exactly once.
pub fn hbda_ni_with<I: LubIndex>(
    set: &StableSet,
    index: I,
    on_box: impl FnMut(LubView<'_>, &PointArena),
) -> Result<HbdaOutcome> {
    run_ni(&sorted_by_last(set), set.reference(), index, on_box)
}

fn run_ni<I: LubIndex>(
    sorted: &[Vec<f64>],
    reference: &[f64],
    index: I,
    mut on_box: impl FnMut(LubView<'_>, &PointArena),
) -> Result<HbdaOutcome> {
    let mut state = UpperBoundState::new(reference, Mode::Nonincremental, index)?.trust_stability();
    let mut vol = |l: LubView<'_>, a: &PointArena| {
        on_box(l, a);
        box_volume(l, a)
    };
    for z in sorted {
        state.insert_nonincremental(z, &mut vol)?;
    }
    let (volume, counters) = state.finalize_nonincremental(&mut vol);
    Ok(HbdaOutcome { volume, counters })
}

/// Boxes of every bound of `U(N)`, produced by the nonincremental driver.
pub fn ni_boxes(set: &StableSet) -> Result<Vec<PartitionBox>> {
    let sorted = sorted_by_last(set);
    let index = KdCellIndex::build(&sorted, set.dim() - 1);
    let mut boxes = Vec::new();
    run_ni(&sorted, set.reference(), index, |l, a| {
        boxes.push(box_of(l, a))
    })?;
    Ok(boxes)
}

/// Incremental box decomposition: the hypervolume is kept up to date as
/// points arrive in arbitrary order.
#[derive(Debug, Clone)]
pub struct IncrementalHypervolume {
    state: UpperBoundState<SumSortedList>,
    volume: CompensatedSum,
    history: Vec<f64>,
}

impl IncrementalHypervolume {
    pub fn new(reference: &[f64]) -> Result<Self> {
        Ok(Self {
            state: UpperBoundState::new(reference, Mode::Incremental, SumSortedList::new())?,
            volume: CompensatedSum::new(),
            history: Vec::new(),
        })
    }

    fn trusted(reference: &[f64]) -> Result<Self> {
        let mut h = Self::new(reference)?;
        h.state = h.state.trust_stability();
        Ok(h)
    }

    /// Adds `z` and returns the updated hypervolume.
    pub fn insert(&mut self, z: &[f64]) -> Result<f64> {
        let volume = &mut self.volume;
        self.state.insert_incremental_with(z, |change, l, arena| {
            let v = box_volume(l, arena);
            match change {
                Change::Removed => volume.add(-v),
                Change::Added => volume.add(v),
            }
        })?;
        let v = self.volume.value();
        self.history.push(v);
        Ok(v)
    }

    pub fn volume(&self) -> f64 {
        self.volume.value()
    }

    /// Hypervolume after each insertion so far.
    pub fn history(&self) -> &[f64] {
        &self.history
    }

    /// Sum of all current box volumes, computed from scratch.
    pub fn recompute(&self) -> f64 {
        let arena = self.state.arena();
        self.state
            .active()
            .map(|l| box_volume(l, arena))
            .collect::<CompensatedSum>()
            .value()
    }

    pub fn upper_bounds(&self) -> Vec<LocalUpperBound> {
        self.state.active().map(|l| l.to_owned()).collect()
    }

    pub fn boxes(&self) -> Vec<PartitionBox> {
        let arena = self.state.arena();
        self.state.active().map(|l| box_of(l, arena)).collect()
    }

    pub fn state(&self) -> &UpperBoundState<SumSortedList> {
        &self.state
    }

    pub fn counters(&self) -> &LubCounters {
        self.state.counters()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HbdaIncrementalOutcome {
    pub volume: f64,
    pub counters: LubCounters,
    pub history: Vec<f64>,
}

/// Incremental box decomposition over the points of `set`, in set order.
pub fn hbda_i(set: &StableSet) -> Result<HbdaIncrementalOutcome> {
    let mut h = IncrementalHypervolume::trusted(set.reference())?;
    for z in set.points() {
        h.insert(z)?;
    }
    Ok(HbdaIncrementalOutcome {
        volume: h.volume(),
        counters: h.counters().clone(),
        history: h.history,
    })
}
