//! Sample points on the torus and max-residual sweeps over them.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

/// Default seed for the pseudo-random part of the sample set.
pub const DEFAULT_SEED: u64 = 0x6C5D;
/// Grid points per axis.
pub const GRID_PER_AXIS: usize = 3;
/// Seeded pseudo-random points added to the grid.
pub const RANDOM_POINTS: usize = 20;

/// A deterministic set of sample points: a regular grid at the cell centres
/// `(2m+1)π/3` plus seeded uniform random points.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleSet {
    dim: usize,
    seed: u64,
    points: Vec<Vec<f64>>,
}

impl SampleSet {
    pub fn standard(dim: usize, seed: u64) -> Self {
        let axis: Vec<f64> = (0..GRID_PER_AXIS)
            .map(|m| (2 * m + 1) as f64 * PI / GRID_PER_AXIS as f64)
            .collect();
        let mut points = vec![Vec::new()];
        for _ in 0..dim {
            points = points
                .into_iter()
                .flat_map(|p| {
                    axis.iter().map(move |&x| {
                        let mut q = p.clone();
                        q.push(x);
                        q
                    })
                })
                .collect();
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..RANDOM_POINTS {
            points.push((0..dim).map(|_| rng.random_range(0.0..2.0 * PI)).collect());
        }
        SampleSet { dim, seed, points }
    }

    /// A sample set with explicit points (used by targeted tests).
    pub fn from_points(dim: usize, points: Vec<Vec<f64>>) -> Self {
        assert!(points.iter().all(|p| p.len() == dim));
        SampleSet {
            dim,
            seed: 0,
            points,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Maximum of `f` over the sample points, evaluated in parallel.
    /// Ties resolve to the lowest point index so the result is deterministic.
    pub fn max_over<F>(&self, f: F) -> Residual
    where
        F: Fn(&[f64]) -> f64 + Sync,
    {
        let best = self
            .points
            .par_iter()
            .enumerate()
            .map(|(i, p)| {
                let v = f(p);
                (if v.is_nan() { f64::INFINITY } else { v }, i)
            })
            .reduce(|| (f64::NEG_INFINITY, usize::MAX), pick_worse);
        if best.1 == usize::MAX {
            return Residual::zero();
        }
        Residual {
            value: best.0.max(0.0),
            worst_point: Some(self.points[best.1].clone()),
        }
    }

    /// Like [`SampleSet::max_over`] but `f` may fail; the first error (by
    /// point index) is returned.
    pub fn try_max_over<F, E>(&self, f: F) -> Result<Residual, E>
    where
        F: Fn(&[f64]) -> Result<f64, E> + Sync,
        E: Send,
    {
        let values: Vec<Result<f64, E>> = self.points.par_iter().map(|p| f(p)).collect();
        let mut out = Residual::zero();
        for (i, v) in values.into_iter().enumerate() {
            let v = v?;
            let v = if v.is_nan() { f64::INFINITY } else { v };
            if out.worst_point.is_none() || v > out.value {
                out = Residual {
                    value: v,
                    worst_point: Some(self.points[i].clone()),
                };
            }
        }
        Ok(out)
    }
}

fn pick_worse(a: (f64, usize), b: (f64, usize)) -> (f64, usize) {
    if a.0 > b.0 || (a.0 == b.0 && a.1 < b.1) {
        a
    } else {
        b
    }
}

/// A residual value together with the sample point attaining it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Residual {
    pub value: f64,
    pub worst_point: Option<Vec<f64>>,
}

impl Residual {
    pub fn zero() -> Self {
        Residual {
            value: 0.0,
            worst_point: None,
        }
    }

    /// Larger of the two; on ties keeps `self`.
    pub fn max(self, other: Residual) -> Residual {
        if other.value > self.value {
            other
        } else {
            self
        }
    }
}

impl std::iter::FromIterator<Residual> for Residual {
    fn from_iter<I: IntoIterator<Item = Residual>>(iter: I) -> Self {
        iter.into_iter().fold(Residual::zero(), Residual::max)
    }
}
