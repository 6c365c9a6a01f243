//! Ball geometry and uniform sampling for binomial point processes.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::specfun::unit_ball_volume_unchecked;

/// A binomial network: `nodes` points uniform in the `dim`-ball of `radius`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NetworkSpec {
    dim: u32,
    radius: f64,
    nodes: u32,
}

impl NetworkSpec {
    pub fn new(dim: u32, radius: f64, nodes: u32) -> Result<Self> {
        if dim < 1 {
            return domain("dimension must be at least 1");
        }
        if !(radius > 0.0) || !radius.is_finite() {
            return domain(format!("radius must be positive and finite, got {radius}"));
        }
        if nodes < 1 {
            return domain("node count must be at least 1");
        }
        Ok(Self { dim, radius, nodes })
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn nodes(&self) -> u32 {
        self.nodes
    }

    pub fn volume(&self) -> f64 {
        unit_ball_volume_unchecked(self.dim) * self.radius.powi(self.dim as i32)
    }

    /// `p = (r/R)^d`, the fraction of the window's volume within distance `r`.
    pub fn volume_fraction(&self, r: f64) -> f64 {
        (r / self.radius).powi(self.dim as i32)
    }
}

/// A point in `R^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct Point(pub Vec<f64>);

impl Point {
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

/// Volume `c_d = π^(d/2)/Γ(1 + d/2)` of the unit ball in `d` dimensions.
pub fn unit_ball_volume(d: u32) -> Result<f64> {
    if d < 1 {
        return domain("unit_ball_volume requires d >= 1");
    }
    Ok(unit_ball_volume_unchecked(d))
}

/// Node density `N / (c_d R^d)`.
pub fn density(spec: &NetworkSpec) -> f64 {
    spec.nodes as f64 / spec.volume()
}

/// Draws a point uniformly from the `d`-ball of radius `radius`.
///
/// The direction is a normalized Gaussian vector and the radius is
/// `radius · U^(1/d)`.
pub fn sample_uniform_in_ball<R: Rng + ?Sized>(d: u32, radius: f64, rng: &mut R) -> Point {
    let mut coords: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
    let mut norm = coords.iter().map(|x| x * x).sum::<f64>().sqrt();
    while norm == 0.0 {
        coords.iter_mut().for_each(|x| *x = rng.sample(StandardNormal));
        norm = coords.iter().map(|x| x * x).sum::<f64>().sqrt();
    }
    let r = radius * sample_unit_radius(d, rng);
    coords.iter_mut().for_each(|x| *x *= r / norm);
    Point(coords)
}

/// Distance from the centre of a uniform point in the unit `d`-ball.
pub(crate) fn sample_unit_radius<R: Rng + ?Sized>(d: u32, rng: &mut R) -> f64 {
    let u: f64 = rng.random();
    match d {
        1 => u,
        2 => u.sqrt(),
        _ => u.powf(1.0 / d as f64),
    }
}
