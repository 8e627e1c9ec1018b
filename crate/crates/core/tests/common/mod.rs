#![allow(dead_code)]

use hvbox::instances::{generate, InstanceSpec, InstanceType};
use hvbox::StableSet;

pub const RANDOM_TYPES: [InstanceType; 3] = [
    InstanceType::Concave,
    InstanceType::Convex,
    InstanceType::Linear,
];

pub fn random_set(kind: InstanceType, p: usize, n: usize, seed: u64) -> StableSet {
    generate(&InstanceSpec::random(kind, p, n, seed))
        .unwrap()
        .to_stable_set()
        .unwrap()
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

pub fn sorted_rows(mut rows: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    rows.sort_by(|a, b| {
        a.iter()
            .zip(b)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    rows
}
