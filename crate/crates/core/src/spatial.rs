//! Indexes over the active local upper bounds that answer
//! "which `u` satisfy `z < u` componentwise?".
//!
//! Three implementations share the [`LubIndex`] trait:
//! [`LinearScan`] tests everything, [`SumSortedList`] skips bounds whose
//! coordinate sum cannot exceed the query's, and [`KdCellIndex`] routes
//! bounds into cells of a kd-tree built once from the input points.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use crate::dominance::strictly;

pub type LubId = u32;

/// Read access to the coordinates of a stored local upper bound.
pub trait LubCoords {
    fn coords(&self, id: LubId) -> &[f64];
}

impl LubCoords for Vec<Vec<f64>> {
    fn coords(&self, id: LubId) -> &[f64] {
        &self[id as usize]
    }
}

pub trait LubIndex {
    fn insert(&mut self, id: LubId, u: &[f64]);
    fn remove(&mut self, id: LubId, u: &[f64]);

    /// Appends to `out` every resident `u` with `key[j] < u[j]` for
    /// `j < key.len()`, and returns the number of strict tests performed.
    fn collect_dominated<S: LubCoords + ?Sized>(
        &self,
        key: &[f64],
        store: &S,
        out: &mut Vec<LubId>,
    ) -> u64;

    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[inline]
fn key_below(key: &[f64], u: &[f64]) -> bool {
    strictly(key, &u[..key.len()])
}

/// Slot table giving O(1) removal from a vector of ids.
#[derive(Debug, Default, Clone)]
struct Slots {
    pos: Vec<(u32, u32)>,
}

const VACANT: (u32, u32) = (u32::MAX, u32::MAX);

impl Slots {
    fn set(&mut self, id: LubId, at: (u32, u32)) {
        let i = id as usize;
        if i >= self.pos.len() {
            self.pos.resize(i + 1, VACANT);
        }
        self.pos[i] = at;
    }

    fn take(&mut self, id: LubId) -> (u32, u32) {
        let at = self.pos.get(id as usize).copied().unwrap_or(VACANT);
        assert!(at != VACANT, "local upper bound {id} is not resident");
        self.pos[id as usize] = VACANT;
        at
    }
}

/// Unordered list; every query tests every resident bound.
#[derive(Debug, Default, Clone)]
pub struct LinearScan {
    ids: Vec<LubId>,
    slots: Slots,
}

impl LinearScan {
    pub fn new() -> Self {
        Self::default()
    }
}

impl LubIndex for LinearScan {
    fn insert(&mut self, id: LubId, _u: &[f64]) {
        self.slots.set(id, (0, self.ids.len() as u32));
        self.ids.push(id);
    }

    fn remove(&mut self, id: LubId, _u: &[f64]) {
        let (_, at) = self.slots.take(id);
        self.ids.swap_remove(at as usize);
        if let Some(&moved) = self.ids.get(at as usize) {
            self.slots.set(moved, (0, at));
        }
    }

    fn collect_dominated<S: LubCoords + ?Sized>(
        &self,
        key: &[f64],
        store: &S,
        out: &mut Vec<LubId>,
    ) -> u64 {
        for &id in &self.ids {
            if key_below(key, store.coords(id)) {
                out.push(id);
            }
        }
        self.ids.len() as u64
    }

    fn len(&self) -> usize {
        self.ids.len()
    }
}

#[derive(Debug, Clone, Copy)]
struct SumKey(f64);

impl PartialEq for SumKey {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for SumKey {}

impl PartialOrd for SumKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SumKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// Bounds kept in nondecreasing order of their coordinate sum.
///
/// `z < u` implies `sum(z) < sum(u)`; with identical summation order the
/// rounded sums still satisfy `fl(sum z) <= fl(sum u)`, so only bounds
/// with a strictly smaller rounded sum are skipped.
#[derive(Debug, Default, Clone)]
pub struct SumSortedList {
    entries: BTreeSet<(SumKey, LubId)>,
    dim: usize,
}

impl SumSortedList {
    pub fn new() -> Self {
        Self::default()
    }

    /// Ids in list order.
    pub fn iter(&self) -> impl Iterator<Item = LubId> + '_ {
        self.entries.iter().map(|&(_, id)| id)
    }
}

fn coord_sum(u: &[f64]) -> f64 {
    u.iter().sum()
}

impl LubIndex for SumSortedList {
    fn insert(&mut self, id: LubId, u: &[f64]) {
        self.dim = u.len();
        let fresh = self.entries.insert((SumKey(coord_sum(u)), id));
        debug_assert!(fresh, "local upper bound {id} inserted twice");
    }

    fn remove(&mut self, id: LubId, u: &[f64]) {
        let found = self.entries.remove(&(SumKey(coord_sum(u)), id));
        assert!(found, "local upper bound {id} is not resident");
    }

    fn collect_dominated<S: LubCoords + ?Sized>(
        &self,
        key: &[f64],
        store: &S,
        out: &mut Vec<LubId>,
    ) -> u64 {
        let floor = if key.len() == self.dim {
            coord_sum(key)
        } else {
            // partial keys give no usable sum bound
            f64::NEG_INFINITY
        };
        let mut tests = 0;
        for &(_, id) in self.entries.range((SumKey(floor), 0)..) {
            tests += 1;
            if key_below(key, store.coords(id)) {
                out.push(id);
            }
        }
        tests
    }

    fn len(&self) -> usize {
        self.entries.len()
    }
}

#[derive(Debug, Clone, Copy)]
enum Child {
    Node(u32),
    Bucket(u32),
}

#[derive(Debug, Clone)]
struct KdNode {
    dim: usize,
    split: f64,
    left: Child,
    right: Child,
}

/// Balanced kd-tree over the first `k` components of the input points,
/// with a bucket of resident bounds at every external (null-child)
/// position. The tree never changes after [`KdCellIndex::build`].
#[derive(Debug, Clone)]
pub struct KdCellIndex {
    k: usize,
    nodes: Vec<KdNode>,
    root: Child,
    buckets: Vec<Vec<LubId>>,
    slots: Slots,
    len: usize,
}

impl KdCellIndex {
    /// Builds the tree from `points`, using components `0..k`, splitting
    /// at the median and cycling the split dimension with depth.
    pub fn build(points: &[Vec<f64>], k: usize) -> Self {
        assert!(k >= 1, "kd-tree needs at least one dimension");
        let mut index = Self {
            k,
            nodes: Vec::with_capacity(points.len()),
            root: Child::Bucket(0),
            buckets: Vec::with_capacity(points.len() + 1),
            slots: Slots::default(),
            len: 0,
        };
        let mut order: Vec<usize> = (0..points.len()).collect();
        index.root = index.build_rec(points, &mut order, 0);
        index
    }

    fn build_rec(&mut self, points: &[Vec<f64>], order: &mut [usize], depth: usize) -> Child {
        if order.is_empty() {
            self.buckets.push(Vec::new());
            return Child::Bucket(self.buckets.len() as u32 - 1);
        }
        let dim = depth % self.k;
        let mid = order.len() / 2;
        order.select_nth_unstable_by(mid, |&a, &b| {
            points[a][dim].total_cmp(&points[b][dim]).then(a.cmp(&b))
        });
        let split = points[order[mid]][dim];
        let slot = self.nodes.len();
        self.nodes.push(KdNode {
            dim,
            split,
            left: Child::Bucket(u32::MAX),
            right: Child::Bucket(u32::MAX),
        });
        let (lo, rest) = order.split_at_mut(mid);
        let left = self.build_rec(points, lo, depth + 1);
        let right = self.build_rec(points, &mut rest[1..], depth + 1);
        self.nodes[slot].left = left;
        self.nodes[slot].right = right;
        Child::Node(slot as u32)
    }

    pub fn key_dims(&self) -> usize {
        self.k
    }

    pub fn bucket_count(&self) -> usize {
        self.buckets.len()
    }

    pub fn depth(&self) -> usize {
        fn rec(nodes: &[KdNode], c: Child) -> usize {
            match c {
                Child::Bucket(_) => 0,
                Child::Node(i) => {
                    let n = &nodes[i as usize];
                    1 + rec(nodes, n.left).max(rec(nodes, n.right))
                }
            }
        }
        rec(&self.nodes, self.root)
    }

    /// Sizes of all buckets, in creation order.
    pub fn bucket_sizes(&self) -> Vec<usize> {
        self.buckets.iter().map(Vec::len).collect()
    }

    fn locate(&self, u: &[f64]) -> u32 {
        let mut at = self.root;
        loop {
            match at {
                Child::Bucket(b) => return b,
                Child::Node(i) => {
                    let node = &self.nodes[i as usize];
                    // ties go right
                    at = if u[node.dim] >= node.split {
                        node.right
                    } else {
                        node.left
                    };
                }
            }
        }
    }

    /// Resident bounds `u` with `z[j] < u[j]` for `j < k`.
    pub fn query<S: LubCoords + ?Sized>(&self, z: &[f64], store: &S) -> Vec<LubId> {
        let mut out = Vec::new();
        self.collect_dominated(&z[..self.k], store, &mut out);
        out
    }
}

impl LubIndex for KdCellIndex {
    fn insert(&mut self, id: LubId, u: &[f64]) {
        let b = self.locate(u);
        let bucket = &mut self.buckets[b as usize];
        self.slots.set(id, (b, bucket.len() as u32));
        bucket.push(id);
        self.len += 1;
    }

    fn remove(&mut self, id: LubId, _u: &[f64]) {
        let (b, at) = self.slots.take(id);
        let bucket = &mut self.buckets[b as usize];
        bucket.swap_remove(at as usize);
        if let Some(&moved) = bucket.get(at as usize) {
            self.slots.set(moved, (b, at));
        }
        self.len -= 1;
    }

    fn collect_dominated<S: LubCoords + ?Sized>(
        &self,
        key: &[f64],
        store: &S,
        out: &mut Vec<LubId>,
    ) -> u64 {
        debug_assert_eq!(key.len(), self.k);
        let mut tests = 0;
        let mut stack = vec![self.root];
        while let Some(c) = stack.pop() {
            match c {
                Child::Bucket(b) => {
                    for &id in &self.buckets[b as usize] {
                        tests += 1;
                        if key_below(key, store.coords(id)) {
                            out.push(id);
                        }
                    }
                }
                Child::Node(i) => {
                    let node = &self.nodes[i as usize];
                    stack.push(node.right);
                    // the left cell holds u[dim] < split; it can meet
                    // the open query interval only if key[dim] < split
                    if key[node.dim] < node.split {
                        stack.push(node.left);
                    }
                }
            }
        }
        tests
    }

    fn len(&self) -> usize {
        self.len
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn staircase_lubs() -> Vec<Vec<f64>> {
        vec![vec![1.0, 7.0], vec![2.0, 5.0], vec![7.0, 3.0]]
    }

    fn fill<I: LubIndex>(index: &mut I, store: &[Vec<f64>]) {
        for (i, u) in store.iter().enumerate() {
            index.insert(i as LubId, u);
        }
    }

    fn sorted(mut v: Vec<LubId>) -> Vec<LubId> {
        v.sort_unstable();
        v
    }

    #[test]
    fn sum_sorted_example() {
        let store = staircase_lubs();
        let mut ssl = SumSortedList::new();
        fill(&mut ssl, &store);
        assert_eq!(ssl.iter().collect::<Vec<_>>(), vec![1, 0, 2]);
        let mut out = Vec::new();
        let tests = ssl.collect_dominated(&[1.0, 4.0], &store, &mut out);
        assert_eq!(out, vec![1]);
        assert_eq!(tests, 3);
    }

    #[test]
    fn sum_sorted_prunes_without_tests() {
        let store = staircase_lubs();
        let mut ssl = SumSortedList::new();
        fill(&mut ssl, &store);
        let mut out = Vec::new();
        assert_eq!(ssl.collect_dominated(&[6.0, 5.0], &store, &mut out), 0);
        assert!(out.is_empty());
    }

    #[test]
    fn tiny_query_hits_everything_above_it() {
        let store = staircase_lubs();
        let mut ssl = SumSortedList::new();
        fill(&mut ssl, &store);
        let mut out = Vec::new();
        ssl.collect_dominated(&[0.1, 0.1], &store, &mut out);
        assert_eq!(sorted(out), vec![0, 1, 2]);
    }

    #[test]
    fn one_point_tree_matches_linear_scan() {
        let store = vec![
            vec![0.5, 0.9, 1.0],
            vec![0.9, 0.5, 1.0],
            vec![0.2, 0.95, 1.0],
        ];
        let mut kd = KdCellIndex::build(&[vec![0.4, 0.4, 0.4]], 2);
        let mut lin = LinearScan::new();
        fill(&mut kd, &store);
        fill(&mut lin, &store);
        for z in [[0.3, 0.3], [0.6, 0.1], [0.1, 0.92], [0.99, 0.99]] {
            let mut a = Vec::new();
            let mut b = Vec::new();
            kd.collect_dominated(&z, &store, &mut a);
            lin.collect_dominated(&z, &store, &mut b);
            assert_eq!(sorted(a), sorted(b));
        }
    }

    #[test]
    fn near_reference_query_is_empty() {
        let pts = vec![vec![0.2, 0.7], vec![0.5, 0.5], vec![0.7, 0.2]];
        let mut kd = KdCellIndex::build(&pts, 1);
        let store = vec![vec![0.2, 1.0], vec![0.5, 1.0], vec![1.0, 1.0]];
        fill(&mut kd, &store);
        assert!(kd.query(&[1.0 - 1e-9, 0.0], &store) == vec![2]);
        assert!(kd.query(&[1.0, 0.0], &store).is_empty());
    }

    #[test]
    fn kd_tree_is_balanced() {
        let pts: Vec<Vec<f64>> = (0..100)
            .map(|i| vec![(i * 37 % 100) as f64, (i * 11 % 100) as f64])
            .collect();
        let kd = KdCellIndex::build(&pts, 2);
        assert_eq!(kd.bucket_count(), 101);
        assert_eq!(kd.depth(), 7); // ceil(log2(101))
    }

    #[test]
    fn removal_keeps_buckets_consistent() {
        let pts: Vec<Vec<f64>> = (1..20)
            .map(|i| vec![i as f64 / 20.0, 1.0 - i as f64 / 20.0])
            .collect();
        let store: Vec<Vec<f64>> = (0..40)
            .map(|i| vec![(i % 7) as f64 / 7.0 + 0.01, (i % 5) as f64 / 5.0 + 0.01])
            .collect();
        let mut kd = KdCellIndex::build(&pts, 2);
        fill(&mut kd, &store);
        for id in (0..40).step_by(3) {
            kd.remove(id, &store[id as usize]);
        }
        assert_eq!(kd.len(), 40 - 14);
        assert_eq!(kd.bucket_sizes().iter().sum::<usize>(), kd.len());
        let got = sorted(kd.query(&[0.0, 0.0], &store));
        let want: Vec<LubId> = (0..40).filter(|i| i % 3 != 0).collect();
        assert_eq!(got, want);
    }

    #[test]
    #[should_panic(expected = "not resident")]
    fn removing_absent_bound_panics() {
        let mut kd = KdCellIndex::build(&[vec![0.5, 0.5]], 1);
        kd.remove(3, &[0.1, 0.1]);
    }

    #[test]
    fn linear_scan_removal() {
        let store = staircase_lubs();
        let mut lin = LinearScan::new();
        fill(&mut lin, &store);
        lin.remove(0, &store[0]);
        let mut out = Vec::new();
        lin.collect_dominated(&[0.5, 0.5], &store, &mut out);
        assert_eq!(sorted(out), vec![1, 2]);
        assert_eq!(lin.len(), 2);
    }
}
