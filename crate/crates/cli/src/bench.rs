use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Args, ValueEnum};
use hvbox::instances::{generate, InstanceSpec, InstanceType};
use serde::Serialize;

use crate::algo::{compute, Algorithm};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    /// Types C, X and L over a grid of p and n.
    Cxl,
    /// Types H and M for p in {4, 6, 8, 10}.
    Hard,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_enum)]
    pub suite: Suite,
    #[arg(long, value_enum, value_delimiter = ',', default_values = ["hbda-ni", "hbda-i", "wfg-sliced", "wfg-incr"])]
    pub algorithms: Vec<Algorithm>,
    #[arg(long, default_value_t = 10)]
    pub reps: usize,
    #[arg(long)]
    pub out: PathBuf,
    /// Multiplies every instance size; 1 is the full grid.
    #[arg(long, default_value_t = 1.0)]
    pub scale: f64,
    /// Random instances per (type, p, n).
    #[arg(long, default_value_t = 10)]
    pub instances: u64,
    #[arg(long, default_value_t = 4)]
    pub p_min: usize,
    #[arg(long, default_value_t = 10)]
    pub p_max: usize,
    /// Base seed for the random suite.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRecord {
    pub algorithm: String,
    #[serde(rename = "type")]
    pub kind: String,
    pub p: usize,
    pub n: usize,
    pub seed: u64,
    pub k: usize,
    pub rep: usize,
    pub hypervolume: f64,
    pub wall_time_ns: u128,
    pub lubs_created: u64,
    pub lubs_retired: u64,
    pub dominance_tests: u64,
    pub wfg_calls_dim2: u64,
    pub wfg_calls_total: u64,
    pub limitset_points: u64,
}

/// Point caps per dimension for the hard suite.
const HARD_CAPS: [(usize, usize); 4] = [(4, 1000), (6, 900), (8, 300), (10, 150)];

fn scaled(v: usize, scale: f64) -> usize {
    ((v as f64 * scale).round() as usize).max(1)
}

pub fn specs(args: &BenchArgs) -> Vec<InstanceSpec> {
    let mut out = Vec::new();
    match args.suite {
        Suite::Cxl => {
            for kind in [
                InstanceType::Concave,
                InstanceType::Convex,
                InstanceType::Linear,
            ] {
                for p in args.p_min.max(2)..=args.p_max {
                    for step in 1..=10 {
                        let n = scaled(100 * step, args.scale);
                        for i in 0..args.instances {
                            let seed = args.seed.wrapping_add(i);
                            out.push(InstanceSpec::random(kind, p, n, seed));
                        }
                    }
                }
            }
        }
        Suite::Hard => {
            for kind in [InstanceType::Hard, InstanceType::Matrix] {
                for (p, cap) in HARD_CAPS {
                    if p < args.p_min || p > args.p_max {
                        continue;
                    }
                    let k_max = scaled(cap / (p / 2), args.scale);
                    let mut ks: Vec<usize> = (1..=10).map(|i| (k_max * i / 10).max(1)).collect();
                    ks.dedup();
                    for k in ks {
                        out.push(InstanceSpec::hard(kind, p, k));
                    }
                }
            }
        }
    }
    out
}

pub fn bench(args: &BenchArgs) -> Result<()> {
    let mut wtr = csv::Writer::from_path(&args.out)
        .with_context(|| format!("cannot write {}", args.out.display()))?;
    for spec in specs(args) {
        let set = generate(&spec)?.to_stable_set()?;
        for &alg in &args.algorithms {
            for rep in 0..args.reps {
                let start = Instant::now();
                let m = compute(alg, &set)?;
                let elapsed = start.elapsed().as_nanos();
                wtr.serialize(BenchRecord {
                    algorithm: alg.to_string(),
                    kind: spec.kind.to_string(),
                    p: spec.p,
                    n: set.len(),
                    seed: spec.seed,
                    k: spec.k,
                    rep,
                    hypervolume: m.volume,
                    wall_time_ns: elapsed,
                    lubs_created: m.lubs_created,
                    lubs_retired: m.lubs_retired,
                    dominance_tests: m.dominance_tests,
                    wfg_calls_dim2: m.wfg_calls_dim2,
                    wfg_calls_total: m.wfg_calls_total,
                    limitset_points: m.limitset_points,
                })?;
            }
        }
        wtr.flush()?;
    }
    wtr.flush()?;
    let script = plot_script_path(&args.out);
    std::fs::write(&script, plot_script(args))?;
    eprintln!("wrote {} and {}", args.out.display(), script.display());
    Ok(())
}

pub fn plot_script_path(csv: &Path) -> PathBuf {
    csv.with_extension("gp")
}

/// Gnuplot script: mean wall time against n, one panel per (type, p),
/// one line per algorithm.
pub fn plot_script(args: &BenchArgs) -> String {
    let csv = args.out.display();
    let mut panels: Vec<(String, usize)> = specs(args)
        .iter()
        .map(|s| (s.kind.to_string(), s.p))
        .collect();
    panels.dedup();
    let mut s = String::new();
    let _ = writeln!(s, "# gnuplot script for {csv}");
    let _ = writeln!(s, "set datafile separator ','");
    let _ = writeln!(s, "set terminal pdfcairo size 6in,4in");
    let _ = writeln!(
        s,
        "set output '{}'",
        args.out.with_extension("pdf").display()
    );
    let _ = writeln!(s, "set key top left");
    let _ = writeln!(s, "set logscale y");
    let _ = writeln!(s, "set xlabel 'n'");
    let _ = writeln!(s, "set ylabel 'mean wall time (s)'");
    for (kind, p) in panels {
        let _ = writeln!(s, "set title 'type {kind}, p = {p}'");
        let lines: Vec<String> = args
            .algorithms
            .iter()
            .map(|a| {
                format!(
                    "'{csv}' skip 1 using (strcol(2) eq '{kind}' && $3 == {p} && strcol(1) eq '{a}' ? $4 : 1/0):($9/1e9) smooth unique with linespoints title '{a}'"
                )
            })
            .collect();
        let _ = writeln!(s, "plot {}", lines.join(", \\\n     "));
    }
    s
}
