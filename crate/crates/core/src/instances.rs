//! Instance generators and the point-set text format.
//!
//! Types C, X and L start from points drawn uniformly in `(0, 1)^p` from
//! [`Stream`](crate::rng::Stream) seeded with the spec seed, one coordinate
//! at a time. A drawn point is rejected and redrawn if, after the
//! transform, a coordinate leaves `(0, 1)` or the point weakly dominates
//! or is weakly dominated by an accepted point.
//!
//! Type M is the raw block-diagonal matrix of `A_k` blocks, where row `i`
//! of `A_k` is `(k - i, i + 1)`. Type H shifts block `A_k` by `l * k` in
//! block row `r`, block column `c` with `l = (m - 1 - c + r) mod m`,
//! `m = p / 2`, then divides by `m * k + 1`.

use std::fmt;
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use crate::dominance::weakly;
use crate::error::{Error, Result};
use crate::frame::{canonicalize, Direction, ReferenceFrame, StableSet};
use crate::rng::Stream;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InstanceType {
    Concave,
    Convex,
    Linear,
    Hard,
    Matrix,
}

impl InstanceType {
    pub fn letter(self) -> char {
        match self {
            InstanceType::Concave => 'C',
            InstanceType::Convex => 'X',
            InstanceType::Linear => 'L',
            InstanceType::Hard => 'H',
            InstanceType::Matrix => 'M',
        }
    }

    pub fn is_random(self) -> bool {
        matches!(
            self,
            InstanceType::Concave | InstanceType::Convex | InstanceType::Linear
        )
    }
}

impl FromStr for InstanceType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "C" | "c" => Ok(InstanceType::Concave),
            "X" | "x" => Ok(InstanceType::Convex),
            "L" | "l" => Ok(InstanceType::Linear),
            "H" | "h" => Ok(InstanceType::Hard),
            "M" | "m" => Ok(InstanceType::Matrix),
            _ => Err(Error::InvalidSpec(format!("unknown instance type {s:?}"))),
        }
    }
}

impl fmt::Display for InstanceType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceSpec {
    pub kind: InstanceType,
    pub p: usize,
    /// Point count for C, X and L; ignored for H and M.
    pub n: usize,
    /// Block size for H and M; ignored for C, X and L.
    pub k: usize,
    pub seed: u64,
    pub direction: Direction,
}

impl InstanceSpec {
    pub fn random(kind: InstanceType, p: usize, n: usize, seed: u64) -> Self {
        Self {
            kind,
            p,
            n,
            k: 0,
            seed,
            direction: Direction::Minimize,
        }
    }

    pub fn hard(kind: InstanceType, p: usize, k: usize) -> Self {
        Self {
            kind,
            p,
            n: p / 2 * k,
            k,
            seed: 0,
            direction: Direction::Minimize,
        }
    }

    /// Number of points the spec produces.
    pub fn size(&self) -> usize {
        if self.kind.is_random() {
            self.n
        } else {
            self.p / 2 * self.k
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub spec: InstanceSpec,
    /// In the requested direction.
    pub points: Vec<Vec<f64>>,
    /// All ones for minimization, all zeros for maximization; `k + 1` on
    /// every axis for the raw matrix.
    pub reference: Vec<f64>,
    /// Divisor applied to the H entries.
    pub normalization: Option<f64>,
}

impl Instance {
    pub fn frame(&self) -> ReferenceFrame {
        ReferenceFrame::new(self.reference.clone(), self.spec.direction)
            .expect("generated reference has p >= 2")
    }

    /// The instance in the internal minimization frame.
    pub fn to_stable_set(&self) -> Result<StableSet> {
        StableSet::from_canonical(canonicalize(&self.points, &self.frame())?)
    }

    /// `% key=value` lines describing the instance.
    pub fn metadata(&self) -> String {
        let s = &self.spec;
        let mut out = format!(
            "% type={} p={} n={} seed={} k={} direction={}\n",
            s.kind,
            s.p,
            self.points.len(),
            s.seed,
            s.k,
            s.direction
        );
        let r: Vec<String> = self.reference.iter().map(|v| v.to_string()).collect();
        let _ = writeln!(out, "% reference={}", r.join(" "));
        if let Some(d) = self.normalization {
            let _ = writeln!(out, "% normalization={d}");
        }
        out
    }
}

pub fn generate(spec: &InstanceSpec) -> Result<Instance> {
    if spec.kind.is_random() {
        gen_cxl(spec)
    } else {
        gen_hard(spec)
    }
}

/// Applies the C, X or L transform to a raw draw.
pub fn transform(kind: InstanceType, raw: &[f64]) -> Vec<f64> {
    match kind {
        InstanceType::Concave => {
            let norm = l2(raw);
            raw.iter().map(|v| v / norm).collect()
        }
        InstanceType::Convex => {
            let norm = l2(raw);
            raw.iter().map(|v| 1.0 - v / norm).collect()
        }
        InstanceType::Linear => {
            let sum: f64 = raw.iter().sum();
            raw.iter().map(|v| v / sum).collect()
        }
        InstanceType::Hard | InstanceType::Matrix => {
            panic!("no pointwise transform for type {kind}")
        }
    }
}

fn l2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn gen_cxl(spec: &InstanceSpec) -> Result<Instance> {
    if !spec.kind.is_random() {
        return Err(Error::InvalidSpec(format!(
            "type {} is not a random type",
            spec.kind
        )));
    }
    if spec.p < 2 {
        return Err(Error::DimensionTooSmall(spec.p));
    }
    if spec.n == 0 {
        return Err(Error::InvalidSpec("n must be at least 1".into()));
    }
    let mut rng = Stream::new(spec.seed);
    let mut raw = vec![0.0; spec.p];
    let mut points: Vec<Vec<f64>> = Vec::with_capacity(spec.n);
    while points.len() < spec.n {
        for v in &mut raw {
            *v = rng.open01();
        }
        let z = transform(spec.kind, &raw);
        let inside = z.iter().all(|&v| v > 0.0 && v < 1.0);
        if inside && !points.iter().any(|y| weakly(y, &z) || weakly(&z, y)) {
            points.push(z);
        }
    }
    Ok(finish(spec, points, vec![1.0; spec.p], None))
}

/// Rows of `A_{k,l}`: row `i` is `(k - i + l*k, i + 1 + l*k)`.
pub fn block(k: usize, l: usize) -> Vec<[f64; 2]> {
    (0..k)
        .map(|i| [(k - i + l * k) as f64, (i + 1 + l * k) as f64])
        .collect()
}

fn check_hard(spec: &InstanceSpec) -> Result<usize> {
    if spec.p < 2 || !spec.p.is_multiple_of(2) {
        return Err(Error::InvalidSpec(format!(
            "type {} needs an even p >= 2, got {}",
            spec.kind, spec.p
        )));
    }
    if spec.k == 0 {
        return Err(Error::InvalidSpec("k must be at least 1".into()));
    }
    Ok(spec.p / 2)
}

/// Rows of the block-diagonal matrix with `A_k` blocks, in order.
pub fn matrix_rows(k: usize, p: usize) -> Result<Vec<Vec<f64>>> {
    let spec = InstanceSpec::hard(InstanceType::Matrix, p, k);
    let m = check_hard(&spec)?;
    let a = block(k, 0);
    let mut rows = Vec::with_capacity(m * k);
    for r in 0..m {
        for pair in &a {
            let mut row = vec![0.0; p];
            row[2 * r..2 * r + 2].copy_from_slice(pair);
            rows.push(row);
        }
    }
    Ok(rows)
}

/// Unnormalized rows of the shifted block matrix, in order.
pub fn hard_rows(k: usize, p: usize) -> Result<Vec<Vec<f64>>> {
    let spec = InstanceSpec::hard(InstanceType::Hard, p, k);
    let m = check_hard(&spec)?;
    let blocks: Vec<Vec<[f64; 2]>> = (0..m).map(|l| block(k, l)).collect();
    let mut rows = Vec::with_capacity(m * k);
    for r in 0..m {
        rows.extend((0..k).map(|i| {
            (0..m)
                .flat_map(|c| blocks[(m - 1 - c + r) % m][i])
                .collect::<Vec<f64>>()
        }));
    }
    Ok(rows)
}

pub fn gen_hard(spec: &InstanceSpec) -> Result<Instance> {
    let m = check_hard(spec)?;
    match spec.kind {
        InstanceType::Matrix => {
            if spec.direction == Direction::Maximize {
                return Err(Error::InvalidSpec(
                    "the raw matrix has no maximization twin".into(),
                ));
            }
            let rows = matrix_rows(spec.k, spec.p)?;
            Ok(finish(spec, rows, vec![(spec.k + 1) as f64; spec.p], None))
        }
        InstanceType::Hard => {
            let d = (m * spec.k + 1) as f64;
            let rows = hard_rows(spec.k, spec.p)?
                .into_iter()
                .map(|row| row.into_iter().map(|v| v / d).collect())
                .collect();
            Ok(finish(spec, rows, vec![1.0; spec.p], Some(d)))
        }
        _ => Err(Error::InvalidSpec(format!(
            "type {} is not a structured type",
            spec.kind
        ))),
    }
}

fn finish(
    spec: &InstanceSpec,
    points: Vec<Vec<f64>>,
    reference: Vec<f64>,
    normalization: Option<f64>,
) -> Instance {
    let (points, reference) = match spec.direction {
        Direction::Minimize => (points, reference),
        Direction::Maximize => (maximize_twin(&points), vec![0.0; spec.p]),
    };
    Instance {
        spec: spec.clone(),
        points,
        reference,
        normalization,
    }
}

/// `1 - z_j` on every coordinate.
pub fn maximize_twin(points: &[Vec<f64>]) -> Vec<Vec<f64>> {
    points
        .iter()
        .map(|z| z.iter().map(|v| 1.0 - v).collect())
        .collect()
}

/// Parses the text format into fronts. Comment lines start with `%`, a
/// line holding only `#` ends a front, blank lines are skipped.
pub fn parse_points(text: &str) -> Result<Vec<Vec<Vec<f64>>>> {
    let mut fronts = Vec::new();
    let mut current: Vec<Vec<f64>> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let t = line.trim();
        if t.is_empty() || t.starts_with('%') {
            continue;
        }
        if t == "#" {
            fronts.push(std::mem::take(&mut current));
            continue;
        }
        let point = t
            .split_whitespace()
            .map(|tok| {
                tok.parse::<f64>().map_err(|_| Error::Parse {
                    line: line_no,
                    message: format!("not a number: {tok:?}"),
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        if let Some(first) = current.first() {
            if first.len() != point.len() {
                return Err(Error::Arity {
                    line: line_no,
                    expected: first.len(),
                    found: point.len(),
                });
            }
        }
        current.push(point);
    }
    if !current.is_empty() {
        fronts.push(current);
    }
    Ok(fronts)
}

/// Renders fronts with shortest round-trip decimals, each front
/// terminated by `#`.
pub fn render_points(fronts: &[Vec<Vec<f64>>]) -> String {
    let mut out = String::new();
    for front in fronts {
        for z in front {
            let cells: Vec<String> = z.iter().map(|v| v.to_string()).collect();
            out.push_str(&cells.join(" "));
            out.push('\n');
        }
        out.push_str("#\n");
    }
    out
}

pub fn load_points(path: &Path) -> Result<Vec<Vec<Vec<f64>>>> {
    parse_points(&std::fs::read_to_string(path)?)
}

pub fn save_points(path: &Path, fronts: &[Vec<Vec<f64>>]) -> Result<()> {
    std::fs::write(path, render_points(fronts))?;
    Ok(())
}
