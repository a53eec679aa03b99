//! Poincaré sections of sampled orbits.

use serde::{Deserialize, Serialize};

use super::OrbitRecord;
use crate::error::{Error, Result};

pub const MIN_CROSSINGS: usize = 50;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Upward,
    Downward,
    Both,
}

/// The hyperplane `z[coordinate] = value`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SectionPlane {
    pub coordinate: usize,
    pub value: f64,
    pub direction: Direction,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Crossing {
    pub t: f64,
    pub z: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Section {
    pub plane: SectionPlane,
    pub crossings: Vec<Crossing>,
}

impl Section {
    /// Projection of the crossings onto coordinates (a, b).
    pub fn project(&self, a: usize, b: usize) -> Vec<(f64, f64)> {
        self.crossings.iter().map(|c| (c.z[a], c.z[b])).collect()
    }

    /// Number of crossings no closer than `tol` (max-norm) to an earlier one.
    pub fn distinct_points(&self, tol: f64) -> usize {
        let mut reps: Vec<&[f64]> = Vec::new();
        for c in &self.crossings {
            let close = reps.iter().any(|r| r.iter().zip(&c.z).all(|(x, y)| (x - y).abs() <= tol));
            if !close {
                reps.push(&c.z);
            }
        }
        reps.len()
    }
}

/// Linearly interpolated crossings of `plane` by the sampled orbit; fewer
/// than [`MIN_CROSSINGS`] is `Inconclusive`.
pub fn poincare_section(orbit: &OrbitRecord, plane: SectionPlane) -> Result<Section> {
    let dim = orbit.points.first().map_or(0, Vec::len);
    if plane.coordinate >= dim {
        return Err(Error::InvalidArgument(format!("coordinate {} outside a {dim}-dimensional phase space", plane.coordinate)));
    }
    let mut crossings = Vec::new();
    for w in 0..orbit.points.len().saturating_sub(1) {
        let (a, b) = (&orbit.points[w], &orbit.points[w + 1]);
        let fa = a[plane.coordinate] - plane.value;
        let fb = b[plane.coordinate] - plane.value;
        let up = fa < 0.0 && fb >= 0.0;
        let down = fa > 0.0 && fb <= 0.0;
        let take = match plane.direction {
            Direction::Upward => up,
            Direction::Downward => down,
            Direction::Both => up || down,
        };
        if !take {
            continue;
        }
        let s = fa / (fa - fb);
        let (ta, tb) = (orbit.times[w], orbit.times[w + 1]);
        let mut z: Vec<f64> = a.iter().zip(b).map(|(x, y)| x + s * (y - x)).collect();
        z[plane.coordinate] = plane.value;
        crossings.push(Crossing { t: ta + s * (tb - ta), z });
    }
    if crossings.len() < MIN_CROSSINGS {
        return Err(Error::Inconclusive(format!("{} section crossings, need {MIN_CROSSINGS}", crossings.len())));
    }
    Ok(Section { plane, crossings })
}
