//! Upper bound sets with defining points.
//!
//! An [`UpperBoundState`] maintains the local upper bounds of the points
//! inserted so far. In [`Mode::Incremental`] points may arrive in any order
//! and the full set `U(N)` is kept. In [`Mode::Nonincremental`] points must
//! arrive sorted by their last component; only bounds whose last component
//! still equals the reference are kept, every other bound is handed to a
//! volume callback as soon as it is created and then dropped.
//!
//! Ties are resolved by processing order: the point being inserted always
//! carries the largest index, which lets the candidate test use plain `>=`
//! and the affected-set test use plain `<`.

use crate::dominance::weakly;
use crate::error::{Error, Result};
use crate::frame::check_inside;
use crate::spatial::{LubCoords, LubId, LubIndex};
use crate::sum::CompensatedSum;

/// Index of a point in a [`PointArena`]. Values `0..p` are the dummy points.
pub type PointRef = u32;

/// Input points in processing order, preceded by the `p` dummy points
/// `d^j = (r_j, 0_{-j})`.
#[derive(Debug, Clone)]
pub struct PointArena {
    p: usize,
    reference: Vec<f64>,
    coords: Vec<f64>,
}

impl PointArena {
    pub fn new(reference: &[f64]) -> Self {
        let p = reference.len();
        let mut coords = vec![0.0; p * p];
        for j in 0..p {
            coords[j * p + j] = reference[j];
        }
        Self {
            p,
            reference: reference.to_vec(),
            coords,
        }
    }

    pub fn dim(&self) -> usize {
        self.p
    }

    pub fn reference(&self) -> &[f64] {
        &self.reference
    }

    #[inline]
    pub fn coords(&self, at: PointRef) -> &[f64] {
        let s = at as usize * self.p;
        &self.coords[s..s + self.p]
    }

    pub fn is_dummy(&self, at: PointRef) -> bool {
        (at as usize) < self.p
    }

    /// Processing index of a real point, `None` for dummies.
    pub fn point_id(&self, at: PointRef) -> Option<usize> {
        (at as usize).checked_sub(self.p)
    }

    /// Number of real points.
    pub fn len(&self) -> usize {
        self.coords.len() / self.p - self.p
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn points(&self) -> impl Iterator<Item = &[f64]> {
        self.coords[self.p * self.p..].chunks_exact(self.p)
    }

    fn push(&mut self, z: &[f64]) -> PointRef {
        let at = (self.coords.len() / self.p) as PointRef;
        self.coords.extend_from_slice(z);
        at
    }
}

/// Borrowed view of a local upper bound.
#[derive(Debug, Clone, Copy)]
pub struct LubView<'a> {
    pub u: &'a [f64],
    /// `defining[j]` is the point fixing `u[j]`.
    pub defining: &'a [PointRef],
}

impl LubView<'_> {
    pub fn to_owned(&self) -> LocalUpperBound {
        LocalUpperBound {
            u: self.u.to_vec(),
            defining: self.defining.to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocalUpperBound {
    pub u: Vec<f64>,
    pub defining: Vec<PointRef>,
}

impl LocalUpperBound {
    pub fn view(&self) -> LubView<'_> {
        LubView {
            u: &self.u,
            defining: &self.defining,
        }
    }
}

/// Slab of local upper bounds; ids of released entries are reused.
#[derive(Debug, Clone)]
pub struct LubStore {
    p: usize,
    u: Vec<f64>,
    def: Vec<PointRef>,
    alive: Vec<bool>,
    free: Vec<LubId>,
    live: usize,
}

impl LubStore {
    fn new(p: usize) -> Self {
        Self {
            p,
            u: Vec::new(),
            def: Vec::new(),
            alive: Vec::new(),
            free: Vec::new(),
            live: 0,
        }
    }

    fn alloc(&mut self, u: &[f64], def: &[PointRef]) -> LubId {
        self.live += 1;
        if let Some(id) = self.free.pop() {
            let s = id as usize * self.p;
            self.u[s..s + self.p].copy_from_slice(u);
            self.def[s..s + self.p].copy_from_slice(def);
            self.alive[id as usize] = true;
            return id;
        }
        let id = self.alive.len() as LubId;
        self.u.extend_from_slice(u);
        self.def.extend_from_slice(def);
        self.alive.push(true);
        id
    }

    fn release(&mut self, id: LubId) {
        debug_assert!(self.alive[id as usize]);
        self.alive[id as usize] = false;
        self.free.push(id);
        self.live -= 1;
    }

    #[inline]
    pub fn view(&self, id: LubId) -> LubView<'_> {
        let s = id as usize * self.p;
        LubView {
            u: &self.u[s..s + self.p],
            defining: &self.def[s..s + self.p],
        }
    }

    pub fn len(&self) -> usize {
        self.live
    }

    pub fn is_empty(&self) -> bool {
        self.live == 0
    }

    pub fn ids(&self) -> impl Iterator<Item = LubId> + '_ {
        self.alive
            .iter()
            .enumerate()
            .filter(|(_, &a)| a)
            .map(|(i, _)| i as LubId)
    }
}

impl LubCoords for LubStore {
    #[inline]
    fn coords(&self, id: LubId) -> &[f64] {
        let s = id as usize * self.p;
        &self.u[s..s + self.p]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Incremental,
    Nonincremental,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LubCounters {
    pub insertions: u64,
    /// Every bound ever constructed, including the initial `r`.
    pub lubs_created: u64,
    /// Bounds that left (or, once finalized, never entered) the active set.
    pub lubs_retired: u64,
    /// Bounds whose box volume was handed to the volume callback.
    pub lubs_finalized: u64,
    pub dominance_tests: u64,
    pub max_active: u64,
}

/// Whether a bound left or joined the active set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Change {
    Removed,
    Added,
}

/// The bounds an incremental insertion removed and created.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Delta {
    pub removed: Vec<LocalUpperBound>,
    pub added: Vec<LocalUpperBound>,
}

#[derive(Debug, Clone)]
pub struct UpperBoundState<I> {
    mode: Mode,
    arena: PointArena,
    store: LubStore,
    index: I,
    accumulated: CompensatedSum,
    counters: LubCounters,
    last_key: f64,
    check_stability: bool,
    hits: Vec<LubId>,
    new_u: Vec<f64>,
    new_def: Vec<PointRef>,
    maxes: Vec<f64>,
}

impl<I: LubIndex> UpperBoundState<I> {
    /// Starts from `U(∅) = {r}` whose defining points are the dummies.
    pub fn new(reference: &[f64], mode: Mode, index: I) -> Result<Self> {
        let p = reference.len();
        if p < 2 {
            return Err(Error::DimensionTooSmall(p));
        }
        if let Some(component) = reference.iter().position(|v| !v.is_finite() || *v <= 0.0) {
            return Err(Error::OutsideBox {
                index: 0,
                point: reference.to_vec(),
                component,
                value: reference[component],
                bound: 0.0,
            });
        }
        let mut state = Self {
            mode,
            arena: PointArena::new(reference),
            store: LubStore::new(p),
            index,
            accumulated: CompensatedSum::new(),
            counters: LubCounters::default(),
            last_key: f64::NEG_INFINITY,
            check_stability: true,
            hits: Vec::new(),
            new_u: Vec::new(),
            new_def: Vec::new(),
            maxes: vec![0.0; p],
        };
        let dummies: Vec<PointRef> = (0..p as PointRef).collect();
        let id = state.store.alloc(reference, &dummies);
        state.index.insert(id, reference);
        state.counters.lubs_created = 1;
        state.counters.max_active = 1;
        Ok(state)
    }

    /// Disables the O(n) per-insertion stability check, for callers that
    /// already validated the whole set.
    pub fn trust_stability(mut self) -> Self {
        self.check_stability = false;
        self
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn dim(&self) -> usize {
        self.arena.dim()
    }

    pub fn arena(&self) -> &PointArena {
        &self.arena
    }

    pub fn index(&self) -> &I {
        &self.index
    }

    pub fn counters(&self) -> &LubCounters {
        &self.counters
    }

    pub fn active_len(&self) -> usize {
        self.store.len()
    }

    pub fn active(&self) -> impl Iterator<Item = LubView<'_>> {
        self.store.ids().map(|id| self.store.view(id))
    }

    /// Volume already handed over by the nonincremental mode.
    pub fn accumulated_volume(&self) -> f64 {
        self.accumulated.value()
    }

    fn admit(&mut self, z: &[f64]) -> Result<PointRef> {
        let p = self.dim();
        check_inside(self.arena.len(), z, self.arena.reference())?;
        if self.mode == Mode::Nonincremental {
            let key = z[p - 1];
            if key < self.last_key {
                return Err(Error::OutOfOrder {
                    point: z.to_vec(),
                    component: p - 1,
                    value: key,
                    previous: self.last_key,
                });
            }
        }
        if self.check_stability {
            if let Some(q) = self.arena.points().find(|q| weakly(q, z) || weakly(z, q)) {
                return Err(Error::StabilityViolation {
                    first: q.to_vec(),
                    second: z.to_vec(),
                });
            }
        }
        if self.mode == Mode::Nonincremental {
            self.last_key = z[p - 1];
        }
        self.counters.insertions += 1;
        Ok(self.arena.push(z))
    }

    /// Fills `self.maxes[j] = max_{k != j} z^k_j(u)`.
    fn candidate_thresholds(&mut self, id: LubId) {
        let p = self.dim();
        let view = self.store.view(id);
        for j in 0..p {
            let mut m = f64::NEG_INFINITY;
            for (k, &d) in view.defining.iter().enumerate() {
                if k != j {
                    m = m.max(self.arena.coords(d)[j]);
                }
            }
            self.maxes[j] = m;
        }
    }

    fn stage(&mut self, id: LubId, j: usize, value: f64, zref: PointRef) {
        let view = self.store.view(id);
        let base = self.new_u.len();
        self.new_u.extend_from_slice(view.u);
        self.new_def.extend_from_slice(view.defining);
        self.new_u[base + j] = value;
        self.new_def[base + j] = zref;
    }

    fn collect_hits(&mut self, key: &[f64]) {
        self.hits.clear();
        let tests = self
            .index
            .collect_dominated(key, &self.store, &mut self.hits);
        self.counters.dominance_tests += tests;
        // process in storage order so counters do not depend on the index
        self.hits.sort_unstable();
    }

    fn retire_hits(&mut self) {
        for &id in &self.hits {
            let u = self.store.coords(id);
            self.index.remove(id, u);
            self.store.release(id);
        }
        self.counters.lubs_retired += self.hits.len() as u64;
    }

    fn commit_staged(&mut self, mut on_added: impl FnMut(LubView<'_>, &PointArena)) {
        let p = self.dim();
        let staged = self.new_u.len() / p;
        for c in 0..staged {
            let u = &self.new_u[c * p..(c + 1) * p];
            let def = &self.new_def[c * p..(c + 1) * p];
            let id = self.store.alloc(u, def);
            self.index.insert(id, u);
            on_added(self.store.view(id), &self.arena);
        }
        self.counters.lubs_created += staged as u64;
        self.counters.max_active = self.counters.max_active.max(self.store.len() as u64);
        self.new_u.clear();
        self.new_def.clear();
    }

    /// Inserts `z` and reports every bound leaving or joining `U(N)`
    /// through `on_change`. Removals are reported before additions.
    pub fn insert_incremental_with(
        &mut self,
        z: &[f64],
        mut on_change: impl FnMut(Change, LubView<'_>, &PointArena),
    ) -> Result<()> {
        assert_eq!(self.mode, Mode::Incremental, "state is nonincremental");
        let zref = self.admit(z)?;
        self.collect_hits(z);
        let hits = std::mem::take(&mut self.hits);
        for &id in &hits {
            self.candidate_thresholds(id);
            for (j, &zj) in z.iter().enumerate() {
                if zj >= self.maxes[j] {
                    self.stage(id, j, zj, zref);
                }
            }
            on_change(Change::Removed, self.store.view(id), &self.arena);
        }
        self.hits = hits;
        self.retire_hits();
        self.commit_staged(|v, a| on_change(Change::Added, v, a));
        Ok(())
    }

    pub fn insert_incremental(&mut self, z: &[f64]) -> Result<Delta> {
        let mut delta = Delta::default();
        self.insert_incremental_with(z, |change, view, _| match change {
            Change::Removed => delta.removed.push(view.to_owned()),
            Change::Added => delta.added.push(view.to_owned()),
        })?;
        Ok(delta)
    }

    /// Inserts `z`, which must not precede any earlier point in the last
    /// component. Bounds `(z_p, u_{-p})` are finalized at once: their
    /// volume, as computed by `box_volume`, is accumulated and they are
    /// dropped.
    pub fn insert_nonincremental(
        &mut self,
        z: &[f64],
        mut box_volume: impl FnMut(LubView<'_>, &PointArena) -> f64,
    ) -> Result<()> {
        assert_eq!(self.mode, Mode::Nonincremental, "state is incremental");
        let zref = self.admit(z)?;
        let p = self.dim();
        // active bounds all have u_p = r_p > z_p
        self.collect_hits(&z[..p - 1]);
        let hits = std::mem::take(&mut self.hits);
        let mut fin_u = vec![0.0; p];
        let mut fin_def = vec![0; p];
        for &id in &hits {
            {
                let view = self.store.view(id);
                fin_u.copy_from_slice(view.u);
                fin_def.copy_from_slice(view.defining);
            }
            fin_u[p - 1] = z[p - 1];
            fin_def[p - 1] = zref;
            let v = box_volume(
                LubView {
                    u: &fin_u,
                    defining: &fin_def,
                },
                &self.arena,
            );
            self.accumulated.add(v);

            self.candidate_thresholds(id);
            for (j, &zj) in z[..p - 1].iter().enumerate() {
                if zj >= self.maxes[j] {
                    self.stage(id, j, zj, zref);
                }
            }
        }
        let finalized = hits.len() as u64;
        self.counters.lubs_created += finalized;
        self.counters.lubs_retired += finalized;
        self.counters.lubs_finalized += finalized;
        self.hits = hits;
        self.retire_hits();
        self.commit_staged(|_, _| {});
        Ok(())
    }

    /// Adds the boxes of the still-active bounds and returns the total.
    pub fn finalize_nonincremental(
        mut self,
        mut box_volume: impl FnMut(LubView<'_>, &PointArena) -> f64,
    ) -> (f64, LubCounters) {
        assert_eq!(self.mode, Mode::Nonincremental, "state is incremental");
        for id in self.store.ids() {
            self.accumulated
                .add(box_volume(self.store.view(id), &self.arena));
            self.counters.lubs_finalized += 1;
        }
        (self.accumulated.value(), self.counters)
    }
}
