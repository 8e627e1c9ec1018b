mod common;

use common::{random_set, RANDOM_TYPES};
use hvbox::rng::Stream;
use hvbox::spatial::{KdCellIndex, LinearScan, LubId, LubIndex, SumSortedList};

fn sorted(mut v: Vec<LubId>) -> Vec<LubId> {
    v.sort_unstable();
    v
}

fn linear_hits(store: &[Vec<f64>], key: &[f64]) -> Vec<LubId> {
    store
        .iter()
        .enumerate()
        .filter(|(_, u)| key.iter().zip(u.iter()).all(|(a, b)| a < b))
        .map(|(i, _)| i as LubId)
        .collect()
}

#[test]
fn indexes_agree_with_a_linear_scan() {
    let mut rng = Stream::new(31);
    for (s, kind) in RANDOM_TYPES.into_iter().enumerate() {
        for p in 2..=6 {
            let set = random_set(kind, p, 60, s as u64 * 10 + p as u64);
            // resident vectors: the points themselves and random vectors in the box
            let mut store: Vec<Vec<f64>> = set.points().to_vec();
            for _ in 0..60 {
                store.push((0..p).map(|_| rng.open01()).collect());
            }
            let mut ssl = SumSortedList::new();
            let mut lin = LinearScan::new();
            let mut kd = KdCellIndex::build(set.points(), p);
            for (i, u) in store.iter().enumerate() {
                ssl.insert(i as LubId, u);
                lin.insert(i as LubId, u);
                kd.insert(i as LubId, u);
            }
            for q in 0..100 {
                let key: Vec<f64> = if q % 2 == 0 {
                    (0..p).map(|_| rng.open01()).collect()
                } else {
                    set.points()[q % set.len()].clone()
                };
                let want = linear_hits(&store, &key);
                for (name, got) in [
                    ("ssl", {
                        let mut out = Vec::new();
                        ssl.collect_dominated(&key, &store, &mut out);
                        out
                    }),
                    ("linear", {
                        let mut out = Vec::new();
                        lin.collect_dominated(&key, &store, &mut out);
                        out
                    }),
                    ("kd", kd.query(&key, &store)),
                ] {
                    assert_eq!(sorted(got), want, "{name} {kind} p={p}");
                }
            }
            // remove half and query again
            for i in (0..store.len()).step_by(2) {
                ssl.remove(i as LubId, &store[i]);
                kd.remove(i as LubId, &store[i]);
            }
            let key: Vec<f64> = (0..p).map(|_| 0.3 * rng.open01()).collect();
            let want: Vec<LubId> = linear_hits(&store, &key)
                .into_iter()
                .filter(|i| i % 2 == 1)
                .collect();
            let mut out = Vec::new();
            ssl.collect_dominated(&key, &store, &mut out);
            assert_eq!(sorted(out), want);
            assert_eq!(sorted(kd.query(&key, &store)), want);
        }
    }
}

#[test]
fn short_keys_test_leading_components() {
    let set = random_set(hvbox::instances::InstanceType::Concave, 4, 50, 3);
    let store: Vec<Vec<f64>> = set.points().to_vec();
    let mut kd = KdCellIndex::build(set.points(), 3);
    let mut ssl = SumSortedList::new();
    for (i, u) in store.iter().enumerate() {
        kd.insert(i as LubId, u);
        ssl.insert(i as LubId, u);
    }
    let key = &store[7][..3];
    let want = linear_hits(&store, key);
    assert_eq!(sorted(kd.query(key, &store)), want);
    let mut out = Vec::new();
    ssl.collect_dominated(key, &store, &mut out);
    assert_eq!(sorted(out), want);
}
