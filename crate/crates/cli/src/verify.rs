use std::process::ExitCode;

use anyhow::Result;
use clap::Args;
use hvbox::decomp::{ni_boxes, IncrementalHypervolume, PartitionBox};
use hvbox::instances::{generate, InstanceSpec, InstanceType};
use hvbox::oracle::{
    find_overlapping_boxes, mc_partition_check, volume_inclusion_exclusion, OracleBudget,
};
use hvbox::rng::Stream;
use hvbox::StableSet;

use crate::algo::{compute, Algorithm};

const KINDS: [InstanceType; 3] = [
    InstanceType::Concave,
    InstanceType::Convex,
    InstanceType::Linear,
];
const MC_SAMPLES: usize = 2_000;

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 5)]
    pub p_max: usize,
    #[arg(long, default_value_t = 10)]
    pub n_max: usize,
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Corrupts one partition box per trial, to check that the checks bite.
    #[arg(long, hide = true)]
    pub inject_fault: bool,
}

pub fn verify(args: &VerifyArgs) -> Result<ExitCode> {
    if args.p_max < 2 || args.n_max < 1 {
        anyhow::bail!("--p-max must be at least 2 and --n-max at least 1");
    }
    if args.n_max > OracleBudget::default().max_points_ie {
        anyhow::bail!(
            "--n-max {} exceeds the inclusion-exclusion budget of {} points",
            args.n_max,
            OracleBudget::default().max_points_ie
        );
    }
    let mut rng = Stream::new(args.seed);
    for trial in 0..args.trials {
        let kind = KINDS[rng.below(3) as usize];
        let p = 2 + rng.below(args.p_max as u64 - 1) as usize;
        let n = 1 + rng.below(args.n_max as u64) as usize;
        let spec = InstanceSpec::random(kind, p, n, rng.next_u64());
        if let Err(reason) = check_instance(&spec, args.inject_fault)? {
            println!(
                "FAIL trial {trial}: type={kind} p={p} n={n} seed={}: {reason}",
                spec.seed
            );
            let r = vec!["1"; p].join(" ");
            println!(
                "reproduce: hvbox gen --type {kind} --p {p} --n {n} --seed {} --out failing.txt \
                 && hvbox run --algorithm hbda-ni --ref {r} --input failing.txt",
                spec.seed
            );
            return Ok(ExitCode::from(1));
        }
    }
    println!("verify: {} trials passed", args.trials);
    Ok(ExitCode::SUCCESS)
}

/// `Ok(Err(reason))` is a verification failure; `Err` is an input error.
fn check_instance(
    spec: &InstanceSpec,
    inject_fault: bool,
) -> Result<std::result::Result<(), String>> {
    let set = generate(spec)?.to_stable_set()?;
    let budget = OracleBudget::default();
    let want = volume_inclusion_exclusion(set.points(), set.reference(), &budget)?;
    let mut algorithms = Algorithm::EXACT.to_vec();
    algorithms.push(Algorithm::OracleGrid);
    for alg in algorithms {
        let got = compute(alg, &set)?.volume;
        if rel_err(got, want) > 1e-10 {
            return Ok(Err(format!("{alg} gave {got}, inclusion-exclusion {want}")));
        }
    }

    let mut incr = IncrementalHypervolume::new(set.reference())?;
    for z in set.points() {
        incr.insert(z)?;
    }
    for (label, mut boxes) in [("hbda-ni", ni_boxes(&set)?), ("hbda-i", incr.boxes())] {
        if inject_fault {
            corrupt(&mut boxes);
        }
        if let Err(reason) = check_partition(&set, &boxes, want, spec.seed) {
            return Ok(Err(format!("{label} boxes: {reason}")));
        }
    }
    Ok(Ok(()))
}

fn check_partition(
    set: &StableSet,
    boxes: &[PartitionBox],
    want: f64,
    seed: u64,
) -> std::result::Result<(), String> {
    if let Some((a, b)) = find_overlapping_boxes(boxes) {
        return Err(format!("boxes {a} and {b} overlap"));
    }
    let total: f64 = boxes.iter().map(PartitionBox::volume).sum();
    if rel_err(total, want) > 1e-10 {
        return Err(format!("box volumes sum to {total}, expected {want}"));
    }
    let report = mc_partition_check(set.points(), set.reference(), boxes, MC_SAMPLES, seed);
    if report.exactly_one_box_violations > 0 {
        return Err(format!(
            "{} of {} samples not covered exactly once, first at {:?}",
            report.exactly_one_box_violations, report.samples, report.first_violation
        ));
    }
    Ok(())
}

/// Collapses the largest box onto its lower bound in the last axis.
fn corrupt(boxes: &mut [PartitionBox]) {
    if let Some(b) = boxes
        .iter_mut()
        .max_by(|a, b| a.volume().total_cmp(&b.volume()))
    {
        let last = b.upper.len() - 1;
        b.upper[last] = b.lower[last];
    }
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}
