//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if
//! any criterion fails.

use std::process::{Command, ExitCode};
use std::time::Instant;

use hvbox::decomp::{ni_boxes, IncrementalHypervolume, PartitionBox};
use hvbox::dominance::filter_nondominated;
use hvbox::instances::{generate, matrix_rows, InstanceSpec, InstanceType};
use hvbox::lub::{Mode, UpperBoundState};
use hvbox::oracle::{
    find_overlapping_boxes, mc_partition_check, volume_grid_sweep, volume_inclusion_exclusion,
    OracleBudget,
};
use hvbox::rng::Stream;
use hvbox::spatial::{KdCellIndex, LinearScan, LubId, LubIndex, SumSortedList};
use hvbox::{hbda_i, hbda_ni, wfg_basic, wfg_incremental, wfg_sliced, StableSet};

const KINDS: [InstanceType; 3] = [
    InstanceType::Concave,
    InstanceType::Convex,
    InstanceType::Linear,
];

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn rel_err(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

fn random_set(kind: InstanceType, p: usize, n: usize, seed: u64) -> StableSet {
    generate(&InstanceSpec::random(kind, p, n, seed))
        .unwrap()
        .to_stable_set()
        .unwrap()
}

fn six_volumes(set: &StableSet) -> [(&'static str, f64); 6] {
    let (pts, r) = (set.points(), set.reference());
    [
        ("hbda-ni", hbda_ni(set).unwrap().volume),
        ("hbda-i", hbda_i(set).unwrap().volume),
        ("wfg", wfg_basic(pts, r).unwrap().volume),
        ("wfg-sliced", wfg_sliced(pts, r).unwrap().volume),
        ("wfg-incr", wfg_incremental(pts, r).unwrap().volume),
        (
            "oracle-grid",
            volume_grid_sweep(pts, r, &OracleBudget::default()).unwrap(),
        ),
    ]
}

fn ie(set: &StableSet) -> f64 {
    volume_inclusion_exclusion(set.points(), set.reference(), &OracleBudget::default()).unwrap()
}

fn sorted_rows(mut rows: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    rows.sort_by(|a, b| {
        a.iter()
            .zip(b)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    rows
}

fn incremental(set: &StableSet) -> IncrementalHypervolume {
    let mut hv = IncrementalHypervolume::new(set.reference()).unwrap();
    for z in set.points() {
        hv.insert(z).unwrap();
    }
    hv
}

fn oracle_equivalence() -> Outcome {
    let mut rng = Stream::new(1);
    let mut worst = 0.0f64;
    let mut count = 0;
    for kind in KINDS {
        for _ in 0..200 {
            let p = 2 + rng.below(5) as usize;
            let n = 1 + rng.below(12) as usize;
            let seed = rng.next_u64();
            let set = random_set(kind, p, n, seed);
            let want = ie(&set);
            for (name, got) in six_volumes(&set) {
                let e = rel_err(got, want);
                if e > 1e-10 {
                    return Err(format!(
                        "{kind} p={p} n={n} seed={seed}: {name} {got} vs {want}"
                    ));
                }
                worst = worst.max(e);
            }
            count += 1;
        }
    }
    Ok(format!("{count} instances, max relative error {worst:.1e}"))
}

fn check_boxes(set: &StableSet, boxes: &[PartitionBox], seed: u64) -> Result<usize, String> {
    if let Some((a, b)) = find_overlapping_boxes(boxes) {
        return Err(format!("boxes {a} and {b} overlap"));
    }
    let r = mc_partition_check(set.points(), set.reference(), boxes, 100_000, seed);
    if r.exactly_one_box_violations > 0 {
        return Err(format!(
            "{} violations, first at {:?}",
            r.exactly_one_box_violations, r.first_violation
        ));
    }
    Ok(r.samples)
}

fn partition_property() -> Outcome {
    let mut rng = Stream::new(2);
    let mut samples = 0;
    for i in 0..50 {
        let kind = KINDS[i % 3];
        let p = 2 + rng.below(4) as usize;
        let n = 1 + rng.below(8) as usize;
        let seed = rng.next_u64();
        let set = random_set(kind, p, n, seed);
        for (label, boxes) in [
            ("hbda-ni", ni_boxes(&set).unwrap()),
            ("hbda-i", incremental(&set).boxes()),
        ] {
            samples += check_boxes(&set, &boxes, seed)
                .map_err(|e| format!("{kind} p={p} n={n} seed={seed} {label}: {e}"))?;
        }
    }
    Ok(format!(
        "50 instances, both drivers, {samples} samples, 0 violations"
    ))
}

fn worked_example() -> Outcome {
    let set = StableSet::new(
        vec![
            vec![1.0, 5.0],
            vec![2.0, 3.0],
            vec![4.0, 2.0],
            vec![6.0, 1.0],
        ],
        vec![7.0, 7.0],
    )
    .unwrap();
    for (name, v) in six_volumes(&set) {
        if v != 26.0 {
            return Err(format!("{name} gave {v}"));
        }
    }
    let bounds = incremental(&set).upper_bounds().len();
    if bounds != 5 {
        return Err(format!("|U(N)| = {bounds}"));
    }
    let mut hv = IncrementalHypervolume::new(&[7.0, 7.0]).unwrap();
    hv.insert(&[2.0, 3.0]).unwrap();
    hv.insert(&[1.0, 5.0]).unwrap();
    let u = sorted_rows(hv.upper_bounds().into_iter().map(|l| l.u).collect());
    let want = vec![vec![1.0, 7.0], vec![2.0, 5.0], vec![7.0, 3.0]];
    if u != want {
        return Err(format!("worked insertion gave {u:?}"));
    }
    Ok("volume 26, |U(N)| = 5, U = {(1,7),(2,5),(7,3)}".into())
}

fn order_invariance() -> Outcome {
    let mut rng = Stream::new(4);
    for i in 0..50 {
        let kind = KINDS[i % 3];
        let p = 2 + rng.below(4) as usize;
        let n = 1 + rng.below(10) as usize;
        let seed = rng.next_u64();
        let set = random_set(kind, p, n, seed);
        let base = incremental(&set);
        let base_u = sorted_rows(base.upper_bounds().into_iter().map(|l| l.u).collect());
        for _ in 0..10 {
            let mut order: Vec<usize> = (0..n).collect();
            rng.shuffle(&mut order);
            let hv = incremental(&set.permuted(&order));
            let u = sorted_rows(hv.upper_bounds().into_iter().map(|l| l.u).collect());
            if u != base_u {
                return Err(format!(
                    "{kind} p={p} n={n} seed={seed} order {order:?}: bound sets differ"
                ));
            }
            if rel_err(hv.volume(), base.volume()) > 1e-12 {
                return Err(format!(
                    "{kind} p={p} n={n} seed={seed}: {} vs {}",
                    hv.volume(),
                    base.volume()
                ));
            }
        }
    }
    Ok("50 instances x 10 permutations, identical bound sets".into())
}

fn non_general_position() -> Outcome {
    let tied =
        StableSet::new(vec![vec![1.0, 2.0, 3.0], vec![2.0, 1.0, 3.0]], vec![4.0; 3]).unwrap();
    for (name, v) in six_volumes(&tied) {
        if v != 8.0 {
            return Err(format!("tied pair: {name} gave {v}"));
        }
    }
    let mut cases = 1;
    let mut rng = Stream::new(5);
    // copied columns
    for i in 0..60 {
        let p = 2 + rng.below(3) as usize;
        let n = 1 + rng.below(10) as usize;
        let base = random_set(KINDS[i % 3], p, n, rng.next_u64());
        let src = rng.below(p as u64) as usize;
        let pts: Vec<Vec<f64>> = base
            .points()
            .iter()
            .map(|z| {
                let mut w = z.clone();
                w.push(z[src]);
                w
            })
            .collect();
        let set = StableSet::new(pts, vec![1.0; p + 1]).unwrap();
        compare_tied(&set, &format!("copied column {src}, p={}", p + 1))?;
        cases += 1;
    }
    // coordinates on a coarse grid
    for _ in 0..60 {
        let p = 2 + rng.below(4) as usize;
        let raw: Vec<Vec<f64>> = (0..12)
            .map(|_| (0..p).map(|_| (1 + rng.below(4)) as f64).collect())
            .collect();
        let pts = filter_nondominated(&raw).unwrap();
        let set = StableSet::new(pts, vec![5.0; p]).unwrap();
        compare_tied(&set, &format!("grid values, p={p}"))?;
        cases += 1;
    }
    Ok(format!("{cases} tied instances match the oracle"))
}

fn compare_tied(set: &StableSet, label: &str) -> Result<(), String> {
    let want = ie(set);
    for (name, got) in six_volumes(set) {
        if rel_err(got, want) > 1e-10 {
            return Err(format!(
                "{label}: {name} {got} vs {want} on {:?}",
                set.points()
            ));
        }
    }
    Ok(())
}

fn adversarial_counter() -> Outcome {
    let mut prev = 0;
    let mut report = Vec::new();
    for k in [4usize, 8, 16, 32] {
        let rows = matrix_rows(k, 4).unwrap();
        let counters = wfg_sliced(&rows, &[(k + 1) as f64; 4]).unwrap().counters;
        let calls = counters.calls_at(2);
        if calls < k as u64 || calls <= prev {
            return Err(format!(
                "k={k}: {calls} two-dimensional calls (previous {prev})"
            ));
        }
        // insertions from the last block recurse on copies of the first block
        let large: u64 = counters
            .base2d_calls_by_size
            .range(k - 1..)
            .map(|(_, c)| c)
            .sum();
        if large < k as u64 - 1 {
            return Err(format!(
                "k={k}: only {large} two-dimensional calls with >= {} points",
                k - 1
            ));
        }
        report.push(format!("k={k}: {calls}"));
        prev = calls;
    }
    Ok(format!("two-dimensional calls {}", report.join(", ")))
}

fn streaming_memory() -> Outcome {
    let mut peak3 = 0;
    for (i, kind) in KINDS.into_iter().enumerate() {
        for p in [2, 3] {
            let set = random_set(kind, p, 200, 70 + i as u64);
            let mut pts = set.points().to_vec();
            pts.sort_by(|a, b| a[p - 1].total_cmp(&b[p - 1]));
            let mut state =
                UpperBoundState::new(set.reference(), Mode::Nonincremental, LinearScan::new())
                    .unwrap();
            for (t, z) in pts.iter().enumerate() {
                state.insert_nonincremental(z, |_, _| 0.0).unwrap();
                let active = state.active_len();
                let ok = if p == 2 { active == 1 } else { active <= t + 2 };
                if !ok {
                    return Err(format!(
                        "{kind} p={p}: {active} active after {} insertions",
                        t + 1
                    ));
                }
            }
            let max_active = state.counters().max_active as usize;
            if p == 2 && max_active != 1 || p == 3 && max_active > pts.len() + 1 {
                return Err(format!("{kind} p={p}: peak of {max_active} active bounds"));
            }
            if p == 3 {
                peak3 = peak3.max(max_active);
            }
        }
    }
    Ok(format!(
        "p=2 always 1 active, p=3 peak {peak3} <= n+1 = 201"
    ))
}

fn spatial_equivalence() -> Outcome {
    let mut rng = Stream::new(8);
    let mut queries = 0;
    for i in 0..50 {
        let p = 2 + (i % 5);
        let set = random_set(KINDS[i % 3], p, 40, 800 + i as u64);
        let store: Vec<Vec<f64>> = incremental(&set)
            .upper_bounds()
            .into_iter()
            .map(|l| l.u)
            .collect();
        let mut ssl = SumSortedList::new();
        let mut kd_full = KdCellIndex::build(set.points(), p);
        let mut kd_lead = KdCellIndex::build(set.points(), p - 1);
        for (id, u) in store.iter().enumerate() {
            ssl.insert(id as LubId, u);
            kd_full.insert(id as LubId, u);
            kd_lead.insert(id as LubId, u);
        }
        for q in 0..1000 {
            let key: Vec<f64> = if q % 4 == 0 {
                set.points()[q / 4 % set.len()].clone()
            } else {
                set.reference().iter().map(|r| r * rng.open01()).collect()
            };
            let scan = |key: &[f64]| -> Vec<LubId> {
                (0..store.len() as LubId)
                    .filter(|&id| key.iter().zip(&store[id as usize]).all(|(a, b)| a < b))
                    .collect()
            };
            let mut from_ssl = Vec::new();
            ssl.collect_dominated(&key, &store, &mut from_ssl);
            from_ssl.sort_unstable();
            let mut from_kd = kd_full.query(&key, &store);
            from_kd.sort_unstable();
            let mut from_lead = kd_lead.query(&key[..p - 1], &store);
            from_lead.sort_unstable();
            if from_ssl != scan(&key) || from_kd != scan(&key) || from_lead != scan(&key[..p - 1]) {
                return Err(format!("instance {i} query {key:?}"));
            }
            queries += 1;
        }
    }
    Ok(format!(
        "{queries} queries over 50 instances, exact agreement"
    ))
}

fn desk_performance() -> Outcome {
    let set = random_set(InstanceType::Concave, 6, 1000, 9);
    let start = Instant::now();
    let ni = hbda_ni(&set).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let sliced = wfg_sliced(set.points(), set.reference()).unwrap();
    let (tests, limit) = (
        ni.counters.dominance_tests,
        sliced.counters.limitset_points_generated,
    );
    if rel_err(ni.volume, sliced.volume) > 1e-10 {
        return Err(format!(
            "volumes differ: {} vs {}",
            ni.volume, sliced.volume
        ));
    }
    if secs >= 60.0 || tests >= limit {
        return Err(format!(
            "{secs:.2}s, dominance_tests {tests}, limitset_points {limit}"
        ));
    }
    Ok(format!(
        "hbda-ni {secs:.2}s, dominance_tests {tests} < limitset_points {limit}"
    ))
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let bin = env!("CARGO_BIN_EXE_hvbox");
    let hvbox = |args: &[&str]| -> Result<Vec<u8>, String> {
        let o = Command::new(bin)
            .args(args)
            .output()
            .map_err(|e| e.to_string())?;
        if !o.status.success() {
            return Err(format!("{args:?}: {}", String::from_utf8_lossy(&o.stderr)));
        }
        Ok(o.stdout)
    };
    let mut files = Vec::new();
    for (kind, size) in [("C", "--n"), ("X", "--n"), ("L", "--n"), ("H", "--k")] {
        let mut texts = Vec::new();
        for run in 0..2 {
            let path = dir.path().join(format!("{kind}{run}.txt"));
            let out = path.to_str().unwrap().to_owned();
            hvbox(&[
                "gen", "--type", kind, "--p", "4", size, "30", "--seed", "17", "--out", &out,
            ])?;
            texts.push(std::fs::read(&path).map_err(|e| e.to_string())?);
            files.push(out);
        }
        if texts[0] != texts[1] {
            return Err(format!("gen --type {kind} differs between runs"));
        }
    }
    for file in files.iter().step_by(2) {
        for alg in ["hbda-ni", "hbda-i", "wfg", "wfg-sliced", "wfg-incr"] {
            let args = [
                "run",
                "--algorithm",
                alg,
                "--ref",
                "1",
                "1",
                "1",
                "1",
                "--input",
                file,
            ];
            if hvbox(&args)? != hvbox(&args)? {
                return Err(format!(
                    "run --algorithm {alg} differs between runs on {file}"
                ));
            }
        }
    }
    Ok("gen output and run output bit-identical across runs".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("oracle equivalence", oracle_equivalence),
        ("partition property", partition_property),
        ("worked micro-example", worked_example),
        ("order invariance", order_invariance),
        ("non-general position", non_general_position),
        ("WFG adversarial counter", adversarial_counter),
        ("NI streaming memory", streaming_memory),
        ("spatial-structure equivalence", spatial_equivalence),
        ("desk-scale performance", desk_performance),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail} ({secs:.1}s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {detail} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
