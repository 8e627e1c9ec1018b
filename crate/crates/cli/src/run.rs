use std::path::PathBuf;

use anyhow::Result;
use clap::Args;
use hvbox::dominance::filter_nondominated;
use hvbox::instances::load_points;
use hvbox::{canonicalize, Direction, ReferenceFrame, StableSet};

use crate::algo::{compute, format_g17, Algorithm};

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long, value_enum, default_value = "hbda-ni")]
    pub algorithm: Algorithm,
    /// Reference point, one value per objective.
    #[arg(long = "ref", required = true, num_args = 1.., allow_negative_numbers = true)]
    pub reference: Vec<f64>,
    #[arg(long, default_value = "min")]
    pub direction: Direction,
    #[arg(long)]
    pub input: PathBuf,
}

pub fn run(args: &RunArgs) -> Result<()> {
    let frame = ReferenceFrame::new(args.reference.clone(), args.direction)?;
    let fronts = load_points(&args.input)?;
    for (i, front) in fronts.iter().enumerate() {
        let canon = canonicalize(front, &frame)?;
        let kept = filter_nondominated(&canon.points)?;
        let dropped = canon.points.len() - kept.len();
        if dropped > 0 {
            eprintln!(
                "warning: front {}: dropped {dropped} dominated or duplicate points",
                i + 1
            );
        }
        let set = StableSet::new(kept, canon.reference)?;
        println!("{}", format_g17(compute(args.algorithm, &set)?.volume));
    }
    Ok(())
}
