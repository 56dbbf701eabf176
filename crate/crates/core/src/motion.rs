//! Smooth motions between configurations with evaluable positions and
//! pairwise-distance derivatives: the monotone trigonometric lift into E^{2d}
//! and the straight-line motion in the original space.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::config::{contraction_witness, BallConfiguration, Point, Tolerances};
use crate::error::{Error, Result};
use crate::linalg;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MotionKind {
    /// x_i(t) = (cos(pi t / 2) p_i, sin(pi t / 2) q_i) in E^{2d}; pairwise
    /// distances are nondecreasing whenever q expands p.
    LiftedTrigonometric,
    /// x_i(t) = (1 - t) p_i + t q_i in E^d; no monotonicity guarantee.
    Linear,
}

/// A smooth path t in [0, 1] from configuration `p` to configuration `q`.
#[derive(Debug, Clone, PartialEq)]
pub struct Motion {
    kind: MotionKind,
    start: BallConfiguration,
    end: BallConfiguration,
    ambient_dim: usize,
}

impl Motion {
    pub fn kind(&self) -> MotionKind {
        self.kind
    }

    /// Dimension of the space the moving points live in.
    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn n_points(&self) -> usize {
        self.start.len()
    }

    pub fn start(&self) -> &BallConfiguration {
        &self.start
    }

    pub fn end(&self) -> &BallConfiguration {
        &self.end
    }

    /// Position of point i at time t, in the ambient dimension.
    pub fn position(&self, t: f64, i: usize) -> Point {
        let p = self.start.center(i).coords();
        let q = self.end.center(i).coords();
        match self.kind {
            MotionKind::LiftedTrigonometric => {
                let c = (FRAC_PI_2 * t).cos();
                let s = (FRAC_PI_2 * t).sin();
                let mut coords = Vec::with_capacity(2 * p.len());
                coords.extend(p.iter().map(|x| c * x));
                coords.extend(q.iter().map(|x| s * x));
                Point::new(coords)
            }
            MotionKind::Linear => Point::new(
                p.iter()
                    .zip(q)
                    .map(|(a, b)| (1.0 - t) * a + t * b)
                    .collect(),
            ),
        }
    }

    /// The moving centers at time t assembled into a configuration with the
    /// given radii.
    pub fn config_at(&self, t: f64, radii: &[f64]) -> Result<BallConfiguration> {
        if radii.len() != self.n_points() {
            return Err(Error::Mismatch {
                what: "radius count",
                left: radii.len(),
                right: self.n_points(),
            });
        }
        let centers = (0..self.n_points()).map(|i| self.position(t, i)).collect();
        BallConfiguration::new(self.ambient_dim, centers, radii.to_vec())
    }

    pub fn distance_sq(&self, t: f64, i: usize, j: usize) -> f64 {
        match self.kind {
            MotionKind::LiftedTrigonometric => {
                let a =
                    linalg::dist_sq(self.start.center(i).coords(), self.start.center(j).coords());
                let b = linalg::dist_sq(self.end.center(i).coords(), self.end.center(j).coords());
                let c = (FRAC_PI_2 * t).cos();
                let s = (FRAC_PI_2 * t).sin();
                c * c * a + s * s * b
            }
            MotionKind::Linear => {
                linalg::dist_sq(self.position(t, i).coords(), self.position(t, j).coords())
            }
        }
    }

    pub fn distance(&self, t: f64, i: usize, j: usize) -> f64 {
        self.distance_sq(t, i, j).sqrt()
    }

    /// Closed-form t-derivative of |x_i(t) - x_j(t)|; zero when the points
    /// coincide (the derivative is undefined there and callers exclude it).
    pub fn distance_derivative(&self, t: f64, i: usize, j: usize) -> f64 {
        match self.kind {
            MotionKind::LiftedTrigonometric => {
                let a =
                    linalg::dist_sq(self.start.center(i).coords(), self.start.center(j).coords());
                let b = linalg::dist_sq(self.end.center(i).coords(), self.end.center(j).coords());
                let f = self.distance_sq(t, i, j);
                if f <= 0.0 {
                    return 0.0;
                }
                let fprime = FRAC_PI_2 * (PI * t).sin() * (b - a);
                fprime / (2.0 * f.sqrt())
            }
            MotionKind::Linear => {
                let u = linalg::sub(self.start.center(i).coords(), self.start.center(j).coords());
                let qdiff = linalg::sub(self.end.center(i).coords(), self.end.center(j).coords());
                let w = linalg::sub(&qdiff, &u);
                let cur = linalg::axpy(&u, t, &w);
                let d = linalg::norm(&cur);
                if d <= 0.0 {
                    return 0.0;
                }
                linalg::dot(&cur, &w) / d
            }
        }
    }

    /// Smallest pairwise distance at time t.
    pub fn min_pair_distance(&self, t: f64) -> f64 {
        let n = self.n_points();
        let mut best = f64::INFINITY;
        for i in 0..n {
            for j in i + 1..n {
                best = best.min(self.distance(t, i, j));
            }
        }
        best
    }
}

/// The explicit monotone motion from `p` to `q` in E^{2d}; requires `q` to be
/// an expansion of `p`.
pub fn lifted_monotone_motion(
    p: &BallConfiguration,
    q: &BallConfiguration,
    tol: &Tolerances,
) -> Result<Motion> {
    if let Some((i, j, before, after)) = contraction_witness(p, q, tol)? {
        return Err(Error::NotAnExpansion {
            i,
            j,
            before,
            after,
        });
    }
    Ok(Motion {
        kind: MotionKind::LiftedTrigonometric,
        ambient_dim: 2 * p.dim(),
        start: p.clone(),
        end: q.clone(),
    })
}

/// Straight-line interpolation in the original space; distances need not be
/// monotone.
pub fn linear_motion(p: &BallConfiguration, q: &BallConfiguration) -> Result<Motion> {
    if p.len() != q.len() {
        return Err(Error::Mismatch {
            what: "point counts",
            left: p.len(),
            right: q.len(),
        });
    }
    if p.dim() != q.dim() {
        return Err(Error::Mismatch {
            what: "dimensions",
            left: p.dim(),
            right: q.dim(),
        });
    }
    Ok(Motion {
        kind: MotionKind::Linear,
        ambient_dim: p.dim(),
        start: p.clone(),
        end: q.clone(),
    })
}
