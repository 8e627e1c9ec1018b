//! Reference frames, orientation handling and validated stable sets.
//!
//! Every algorithm in this crate works on minimization data living in the
//! open box `(0, r)`. [`canonicalize`] maps arbitrary minimization or
//! maximization input into that form without changing the hypervolume.

use std::fmt;
use std::str::FromStr;

use crate::dominance::find_unstable_pair;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Direction {
    #[default]
    Minimize,
    Maximize,
}

impl FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "min" | "minimize" => Ok(Direction::Minimize),
            "max" | "maximize" => Ok(Direction::Maximize),
            other => Err(Error::InvalidSpec(format!("unknown direction `{other}`"))),
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Minimize => "min",
            Direction::Maximize => "max",
        })
    }
}

/// The user-facing reference point and optimization direction.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceFrame {
    pub ref_point: Vec<f64>,
    pub direction: Direction,
}

impl ReferenceFrame {
    pub fn new(ref_point: Vec<f64>, direction: Direction) -> Result<Self> {
        if ref_point.len() < 2 {
            return Err(Error::DimensionTooSmall(ref_point.len()));
        }
        Ok(Self {
            ref_point,
            direction,
        })
    }

    pub fn minimize(ref_point: Vec<f64>) -> Result<Self> {
        Self::new(ref_point, Direction::Minimize)
    }

    pub fn dim(&self) -> usize {
        self.ref_point.len()
    }
}

/// Points expressed in internal minimization form, all inside `(0, reference)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Canonical {
    pub points: Vec<Vec<f64>>,
    pub reference: Vec<f64>,
}

/// Maps `points` into internal minimization form.
///
/// Minimization data passes through unchanged when every coordinate is
/// positive; otherwise the offending axes are shifted up by an integer.
/// Maximization data is reflected: with `d = z - r`, each axis uses the
/// smallest power of two `s >= 1` exceeding every `d_j`, and maps
/// `z_j -> s - d_j` with internal reference `s`. For points in `(0, 1)`
/// with reference 0 this is the complement `1 - z_j` against reference 1.
pub fn canonicalize(points: &[Vec<f64>], frame: &ReferenceFrame) -> Result<Canonical> {
    let p = frame.dim();
    for (index, pt) in points.iter().enumerate() {
        if pt.len() != p {
            return Err(Error::DimensionMismatch {
                expected: p,
                found: pt.len(),
            });
        }
        if let Some(component) = pt.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index, component });
        }
        for (component, (&value, &bound)) in pt.iter().zip(&frame.ref_point).enumerate() {
            let outside = match frame.direction {
                Direction::Minimize => value >= bound,
                Direction::Maximize => value <= bound,
            };
            if outside {
                return Err(Error::OutsideBox {
                    index,
                    point: pt.clone(),
                    component,
                    value,
                    bound,
                });
            }
        }
    }

    match frame.direction {
        Direction::Minimize => {
            let mut shift = vec![0.0; p];
            for (j, s) in shift.iter_mut().enumerate() {
                let lo = points.iter().map(|z| z[j]).fold(f64::INFINITY, f64::min);
                if lo <= 0.0 {
                    *s = 1.0 - lo.floor();
                }
            }
            if shift.iter().all(|&s| s == 0.0) {
                return Ok(Canonical {
                    points: points.to_vec(),
                    reference: frame.ref_point.clone(),
                });
            }
            Ok(Canonical {
                points: points
                    .iter()
                    .map(|z| z.iter().zip(&shift).map(|(v, s)| v + s).collect())
                    .collect(),
                reference: frame
                    .ref_point
                    .iter()
                    .zip(&shift)
                    .map(|(v, s)| v + s)
                    .collect(),
            })
        }
        Direction::Maximize => {
            let mut span = vec![1.0f64; p];
            for (j, s) in span.iter_mut().enumerate() {
                let hi = points
                    .iter()
                    .map(|z| z[j] - frame.ref_point[j])
                    .fold(0.0, f64::max);
                while *s <= hi {
                    *s *= 2.0;
                }
            }
            Ok(Canonical {
                points: points
                    .iter()
                    .map(|z| {
                        (0..p)
                            .map(|j| span[j] - (z[j] - frame.ref_point[j]))
                            .collect()
                    })
                    .collect(),
                reference: span,
            })
        }
    }
}

/// A validated, mutually nondominated point set in internal minimization
/// form with every point inside the open box `(0, reference)`.
#[derive(Debug, Clone, PartialEq)]
pub struct StableSet {
    points: Vec<Vec<f64>>,
    reference: Vec<f64>,
}

impl StableSet {
    pub fn new(points: Vec<Vec<f64>>, reference: Vec<f64>) -> Result<Self> {
        let set = Self::new_unchecked_stability(points, reference)?;
        if let Some((a, b)) = find_unstable_pair(&set.points) {
            return Err(Error::StabilityViolation {
                first: set.points[a].clone(),
                second: set.points[b].clone(),
            });
        }
        Ok(set)
    }

    /// Validates dimensions and box membership only; the caller vouches
    /// for mutual nondominance.
    pub fn new_unchecked_stability(points: Vec<Vec<f64>>, reference: Vec<f64>) -> Result<Self> {
        let p = reference.len();
        if p < 2 {
            return Err(Error::DimensionTooSmall(p));
        }
        for (index, pt) in points.iter().enumerate() {
            check_inside(index, pt, &reference)?;
        }
        Ok(Self { points, reference })
    }

    pub fn from_canonical(c: Canonical) -> Result<Self> {
        Self::new(c.points, c.reference)
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn reference(&self) -> &[f64] {
        &self.reference
    }

    pub fn dim(&self) -> usize {
        self.reference.len()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Same set, points reordered by `order` (a permutation of indices).
    pub fn permuted(&self, order: &[usize]) -> Self {
        assert_eq!(order.len(), self.points.len());
        Self {
            points: order.iter().map(|&i| self.points[i].clone()).collect(),
            reference: self.reference.clone(),
        }
    }
}

pub(crate) fn check_inside(index: usize, pt: &[f64], reference: &[f64]) -> Result<()> {
    if pt.len() != reference.len() {
        return Err(Error::DimensionMismatch {
            expected: reference.len(),
            found: pt.len(),
        });
    }
    for (component, (&value, &bound)) in pt.iter().zip(reference).enumerate() {
        if !value.is_finite() {
            return Err(Error::NonFinite { index, component });
        }
        if value <= 0.0 || value >= bound {
            return Err(Error::OutsideBox {
                index,
                point: pt.to_vec(),
                component,
                value,
                bound: if value <= 0.0 { 0.0 } else { bound },
            });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimize_passthrough() {
        let frame = ReferenceFrame::minimize(vec![1.0, 1.0]).unwrap();
        let c = canonicalize(&[vec![0.3, 0.4]], &frame).unwrap();
        assert_eq!(c.points, vec![vec![0.3, 0.4]]);
        assert_eq!(c.reference, vec![1.0, 1.0]);
    }

    #[test]
    fn maximize_unit_box_complement() {
        let frame = ReferenceFrame::new(vec![0.0, 0.0, 0.0], Direction::Maximize).unwrap();
        let pts = vec![vec![0.3, 0.4, 0.75]];
        let c = canonicalize(&pts, &frame).unwrap();
        assert_eq!(c.reference, vec![1.0, 1.0, 1.0]);
        assert_eq!(c.points, vec![vec![1.0 - 0.3, 1.0 - 0.4, 1.0 - 0.75]]);
    }

    #[test]
    fn maximize_reflects_against_the_reference() {
        // complement against the upper corner r = (1, 1) of a reference at 0
        let frame = ReferenceFrame::new(vec![0.0, 0.0], Direction::Maximize).unwrap();
        let c = canonicalize(&[vec![0.3, 0.4]], &frame).unwrap();
        assert_eq!(c.points, vec![vec![0.7, 0.6]]);
        assert_eq!(c.reference, vec![1.0, 1.0]);
    }

    #[test]
    fn maximize_wide_span_uses_power_of_two() {
        let frame = ReferenceFrame::new(vec![-1.0, 2.0], Direction::Maximize).unwrap();
        let c = canonicalize(&[vec![2.5, 3.0], vec![0.0, 9.0]], &frame).unwrap();
        assert_eq!(c.reference, vec![4.0, 8.0]);
        assert_eq!(c.points, vec![vec![0.5, 7.0], vec![3.0, 1.0]]);
    }

    #[test]
    fn minimize_shifts_nonpositive_axes() {
        let frame = ReferenceFrame::minimize(vec![3.0, 3.0]).unwrap();
        let c = canonicalize(&[vec![0.0, 2.0], vec![2.0, 1.0]], &frame).unwrap();
        assert_eq!(c.points, vec![vec![1.0, 2.0], vec![3.0, 1.0]]);
        assert_eq!(c.reference, vec![4.0, 3.0]);
    }

    #[test]
    fn boundary_points_are_rejected() {
        let frame = ReferenceFrame::minimize(vec![1.0, 1.0]).unwrap();
        let err = canonicalize(&[vec![0.5, 0.5], vec![1.0, 0.2]], &frame).unwrap_err();
        match err {
            Error::OutsideBox {
                index, component, ..
            } => {
                assert_eq!(index, 1);
                assert_eq!(component, 0);
            }
            other => panic!("unexpected {other:?}"),
        }
        let frame = ReferenceFrame::new(vec![0.0, 0.0], Direction::Maximize).unwrap();
        assert!(canonicalize(&[vec![0.0, 0.5]], &frame).is_err());
    }

    #[test]
    fn arity_and_nan_rejected() {
        let frame = ReferenceFrame::minimize(vec![1.0, 1.0]).unwrap();
        assert!(matches!(
            canonicalize(&[vec![0.5]], &frame),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            canonicalize(&[vec![0.5, f64::NAN]], &frame),
            Err(Error::NonFinite { .. })
        ));
        assert!(ReferenceFrame::minimize(vec![1.0]).is_err());
    }

    #[test]
    fn stable_set_validation() {
        assert!(StableSet::new(vec![vec![0.5, 0.5]], vec![1.0, 1.0]).is_ok());
        assert!(matches!(
            StableSet::new(vec![vec![0.5, 0.5], vec![0.6, 0.6]], vec![1.0, 1.0]),
            Err(Error::StabilityViolation { .. })
        ));
        assert!(matches!(
            StableSet::new(vec![vec![0.5, 0.0]], vec![1.0, 1.0]),
            Err(Error::OutsideBox { .. })
        ));
        assert!(StableSet::new(vec![], vec![1.0, 1.0]).unwrap().is_empty());
    }

    #[test]
    fn direction_parsing() {
        assert_eq!("min".parse::<Direction>().unwrap(), Direction::Minimize);
        assert_eq!("max".parse::<Direction>().unwrap(), Direction::Maximize);
        assert!("up".parse::<Direction>().is_err());
    }
}
