use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::Result;
use clap::Args;
use hvbox::instances::{generate, render_points, Instance, InstanceSpec, InstanceType};
use hvbox::Direction;

#[derive(Debug, Args)]
pub struct GenArgs {
    /// C, X, L, H or M.
    #[arg(long = "type")]
    pub kind: InstanceType,
    #[arg(long)]
    pub p: usize,
    /// Number of points for C, X and L.
    #[arg(long, default_value_t = 0)]
    pub n: usize,
    /// Block size for H and M.
    #[arg(long, default_value_t = 0)]
    pub k: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write the maximization twin `1 - z` here.
    #[arg(long)]
    pub maximize_twin: Option<PathBuf>,
}

impl GenArgs {
    pub fn spec(&self, direction: Direction) -> InstanceSpec {
        InstanceSpec {
            kind: self.kind,
            p: self.p,
            n: self.n,
            k: self.k,
            seed: self.seed,
            direction,
        }
    }
}

pub fn render(inst: &Instance) -> String {
    format!(
        "{}{}",
        inst.metadata(),
        render_points(std::slice::from_ref(&inst.points))
    )
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

pub fn gen(args: &GenArgs) -> Result<()> {
    let inst = generate(&args.spec(Direction::Minimize))?;
    // build the twin before writing anything so a bad request leaves no files
    let twin = match &args.maximize_twin {
        Some(path) => Some((generate(&args.spec(Direction::Maximize))?, path)),
        None => None,
    };
    emit(&render(&inst), args.out.as_deref())?;
    if let Some((twin, path)) = twin {
        emit(&render(&twin), Some(path))?;
    }
    Ok(())
}
