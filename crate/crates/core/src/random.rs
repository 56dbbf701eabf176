//! Seeded random instance generators for verification campaigns: boxed ball
//! configurations, expansion pairs (rejection and scaling families), lifting
//! instances, and rigid motions for invariance checks.

use rand::Rng;

use crate::archimedes::ArchimedesInstance;
use crate::config::{is_expansion, BallConfiguration, Point, Tolerances};
use crate::diagram::Halfspace;
use crate::error::Result;
use crate::linalg;

/// Box side and radius range for generated instances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InstanceBox {
    pub side: f64,
    pub radius_min: f64,
    pub radius_max: f64,
}

impl Default for InstanceBox {
    fn default() -> Self {
        InstanceBox {
            side: 4.0,
            radius_min: 0.5,
            radius_max: 1.5,
        }
    }
}

/// Uniform configuration: centers in [0, side]^dim, radii in the given range.
pub fn random_config<R: Rng>(
    rng: &mut R,
    dim: usize,
    n: usize,
    spec: &InstanceBox,
) -> BallConfiguration {
    let centers: Vec<Point> = (0..n)
        .map(|_| Point::new((0..dim).map(|_| rng.gen::<f64>() * spec.side).collect()))
        .collect();
    let radii: Vec<f64> = (0..n)
        .map(|_| spec.radius_min + rng.gen::<f64>() * (spec.radius_max - spec.radius_min))
        .collect();
    BallConfiguration::new(dim, centers, radii).expect("generated configuration is valid")
}

/// One independent draw of a pair (p, q) with shared radii, no expansion
/// filter; a single rejection-sampling attempt.
pub fn independent_pair<R: Rng>(
    rng: &mut R,
    dim: usize,
    n: usize,
    spec: &InstanceBox,
) -> (BallConfiguration, BallConfiguration) {
    let p = random_config(rng, dim, n, spec);
    let q_centers: Vec<Point> = (0..n)
        .map(|_| Point::new((0..dim).map(|_| rng.gen::<f64>() * spec.side).collect()))
        .collect();
    let q = BallConfiguration::new(dim, q_centers, p.radii().to_vec())
        .expect("generated configuration is valid");
    (p, q)
}

/// Independent draws of p and q (same radii) kept only when q expands p.
/// Returns the number of attempts spent alongside the pair.
pub fn random_expansion_pair<R: Rng>(
    rng: &mut R,
    dim: usize,
    n: usize,
    spec: &InstanceBox,
    max_tries: u64,
    tol: &Tolerances,
) -> Option<(BallConfiguration, BallConfiguration, u64)> {
    for tries in 1..=max_tries {
        let (p, q) = independent_pair(rng, dim, n, spec);
        if is_expansion(&p, &q, tol).expect("matched dimensions") {
            return Some((p, q, tries));
        }
    }
    None
}

/// Scaling family: q has the same radii with centers scaled by a factor in
/// [1, lambda_max], always an expansion.
pub fn scaling_pair<R: Rng>(
    rng: &mut R,
    dim: usize,
    n: usize,
    spec: &InstanceBox,
    lambda_max: f64,
) -> (BallConfiguration, BallConfiguration, f64) {
    let p = random_config(rng, dim, n, spec);
    let lambda = 1.0 + rng.gen::<f64>() * (lambda_max - 1.0).max(0.0);
    let q_centers: Vec<Point> = p
        .centers()
        .iter()
        .map(|c| Point::new(linalg::scale(c.coords(), lambda)))
        .collect();
    let q = BallConfiguration::new(dim, q_centers, p.radii().to_vec())
        .expect("scaled configuration is valid");
    (p, q, lambda)
}

/// Random lifting instance: unit-ish ball about a random center with `m`
/// halfspaces whose normals lie in the distinguished n-subspace and whose
/// offsets keep the center strictly inside.
pub fn random_archimedes_instance<R: Rng>(
    rng: &mut R,
    n: usize,
    k: usize,
    m: usize,
    base_radius: f64,
) -> Result<ArchimedesInstance> {
    let ambient = n + 2 * k;
    let center = Point::new((0..ambient).map(|_| rng.gen::<f64>() - 0.5).collect());
    let mut halfspaces = Vec::with_capacity(m);
    for _ in 0..m {
        let mut normal = vec![0.0; ambient];
        loop {
            let g: Vec<f64> = (0..n)
                .map(|_| rng.sample::<f64, _>(rand_distr::StandardNormal))
                .collect();
            if let Some(u) = linalg::unit(&g) {
                normal[..n].copy_from_slice(&u);
                break;
            }
        }
        let beta = base_radius * (0.2 + 0.7 * rng.gen::<f64>());
        let offset = linalg::dot(&normal, center.coords()) + beta;
        halfspaces.push(Halfspace::new(normal, offset)?);
    }
    ArchimedesInstance::new(n, k, center, base_radius, halfspaces)
}

/// Random orthogonal matrix (rows orthonormal) via Gram-Schmidt of Gaussian
/// vectors; used for rigid-invariance checks.
pub fn random_rotation<R: Rng>(rng: &mut R, dim: usize) -> Vec<Vec<f64>> {
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(dim);
    while rows.len() < dim {
        let g: Vec<f64> = (0..dim)
            .map(|_| rng.sample::<f64, _>(rand_distr::StandardNormal))
            .collect();
        let mut v = g;
        for r in &rows {
            v = linalg::axpy(&v, -linalg::dot(&v, r), r);
        }
        if let Some(u) = linalg::unit(&v) {
            rows.push(u);
        }
    }
    rows
}

/// Applies `x -> R x + shift` to every center, keeping the radii.
pub fn rigid_transform(
    config: &BallConfiguration,
    rotation: &[Vec<f64>],
    shift: &[f64],
) -> BallConfiguration {
    let centers: Vec<Point> = config
        .centers()
        .iter()
        .map(|c| {
            let rotated: Vec<f64> = rotation
                .iter()
                .map(|row| linalg::dot(row, c.coords()))
                .collect();
            Point::new(linalg::add(&rotated, shift))
        })
        .collect();
    BallConfiguration::new(config.dim(), centers, config.radii().to_vec())
        .expect("rigid image is valid")
}
