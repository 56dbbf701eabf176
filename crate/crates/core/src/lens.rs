//! Predicates on lenses (pairwise ball intersections): emptiness, exact
//! closest-point computation, lens-vs-ball incidence, and the bounded
//! interaction-count hypothesis over a whole configuration.

use crate::config::{BallConfiguration, Point, Tolerances};
use crate::error::{Error, Result};
use crate::linalg;

/// Closed vs interior flavor of the incidence predicates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntersectionMode {
    /// Any shared point of the closed sets counts.
    Closed,
    /// Requires penetration by at least `strict_margin`.
    Interior,
}

/// Whether the closed balls `i` and `j` intersect (tangency and containment
/// both count).
pub fn lens_nonempty(config: &BallConfiguration, i: usize, j: usize) -> bool {
    assert_ne!(i, j, "lens is defined for distinct balls");
    let d = config.center(i).distance(config.center(j));
    d <= config.radius(i) + config.radius(j)
}

fn project_onto_ball(x: &[f64], center: &[f64], radius: f64) -> Vec<f64> {
    let v = linalg::sub(x, center);
    let n = linalg::norm(&v);
    if n <= radius {
        x.to_vec()
    } else {
        linalg::axpy(center, radius / n, &v)
    }
}

/// The point of B_i ∩ B_j closest to `x`.
///
/// Case analysis: `x` inside both balls; the radial projection onto one
/// sphere landing inside the other ball; otherwise the minimizer lies on the
/// radical sphere (the boundary-sphere intersection), where it is the
/// in-plane radial projection. When `x` projects onto the radical-sphere
/// center itself every sphere point is equidistant and the first in-plane
/// frame axis picks the representative. A 50-step projected-gradient descent
/// backs up the closed forms if a candidate fails the membership check at a
/// case boundary.
pub fn closest_point_in_lens(
    x: &Point,
    config: &BallConfiguration,
    i: usize,
    j: usize,
    tol: &Tolerances,
) -> Result<Point> {
    config.check_index(i)?;
    config.check_index(j)?;
    assert_ne!(i, j, "lens is defined for distinct balls");
    if x.dim() != config.dim() {
        return Err(Error::Mismatch {
            what: "point dimension",
            left: x.dim(),
            right: config.dim(),
        });
    }
    if !lens_nonempty(config, i, j) {
        return Err(Error::EmptyLens { i, j });
    }

    let (pi, ri) = (config.center(i).coords(), config.radius(i));
    let (pj, rj) = (config.center(j).coords(), config.radius(j));
    let xc = x.coords();
    let eps = tol.geometric_eps;

    let in_i = linalg::dist_sq(xc, pi) <= ri * ri;
    let in_j = linalg::dist_sq(xc, pj) <= rj * rj;
    if in_i && in_j {
        return Ok(x.clone());
    }

    let slack_j = eps * (1.0 + rj * rj);
    let slack_i = eps * (1.0 + ri * ri);
    if !in_i {
        let z = project_onto_ball(xc, pi, ri);
        if linalg::dist_sq(&z, pj) <= rj * rj + slack_j {
            return Ok(Point::new(z));
        }
    }
    if !in_j {
        let z = project_onto_ball(xc, pj, rj);
        if linalg::dist_sq(&z, pi) <= ri * ri + slack_i {
            return Ok(Point::new(z));
        }
    }

    // Minimizer on the radical sphere S(foot, rho) inside the plane where
    // both boundary spheres meet.
    let candidate = radical_sphere_projection(xc, pi, ri, pj, rj);
    let z = match candidate {
        Some(z)
            if linalg::dist_sq(&z, pi) <= ri * ri + slack_i
                && linalg::dist_sq(&z, pj) <= rj * rj + slack_j =>
        {
            z
        }
        // Numerically ambiguous case split: refine by projected gradient.
        other => {
            let start = other.unwrap_or_else(|| linalg::scale(&linalg::add(pi, pj), 0.5));
            projected_gradient_refine(xc, pi, ri, pj, rj, start)
        }
    };
    Ok(Point::new(z))
}

fn radical_sphere_projection(
    x: &[f64],
    pi: &[f64],
    ri: f64,
    pj: &[f64],
    rj: f64,
) -> Option<Vec<f64>> {
    let dij = linalg::dist(pi, pj);
    if dij <= 1e-300 {
        return None; // containment already handled by the ball projections
    }
    let n = linalg::scale(&linalg::sub(pj, pi), 1.0 / dij);
    let h = (dij * dij + ri * ri - rj * rj) / (2.0 * dij);
    let rho_sq = ri * ri - h * h;
    if rho_sq < 0.0 {
        return None;
    }
    let rho = rho_sq.sqrt();
    let foot = linalg::axpy(pi, h, &n);
    let rel = linalg::sub(x, &foot);
    let mut in_plane = linalg::axpy(&rel, -linalg::dot(&rel, &n), &n);
    if linalg::norm(&in_plane) <= 1e-14 * (1.0 + linalg::norm(&rel)) {
        // Equidistant degenerate case: deterministic representative along the
        // first in-plane frame axis.
        in_plane = linalg::orthonormal_frame(&n)
            .into_iter()
            .next()
            .unwrap_or(n.clone());
    }
    let u = linalg::unit(&in_plane)?;
    Some(linalg::axpy(&foot, rho, &u))
}

fn projected_gradient_refine(
    x: &[f64],
    pi: &[f64],
    ri: f64,
    pj: &[f64],
    rj: f64,
    start: Vec<f64>,
) -> Vec<f64> {
    let mut z = start;
    for _ in 0..50 {
        // Half-step toward x, then alternate the two ball projections.
        let stepped: Vec<f64> = z
            .iter()
            .zip(x)
            .map(|(zi, xi)| zi + 0.5 * (xi - zi))
            .collect();
        let zi = project_onto_ball(&stepped, pi, ri);
        z = project_onto_ball(&zi, pj, rj);
    }
    z
}

/// Whether the lens B_i ∩ B_j has a point in common with ball `k`
/// (closed mode) or penetrates it by at least `strict_margin` (interior mode).
pub fn lens_meets_ball(
    config: &BallConfiguration,
    i: usize,
    j: usize,
    k: usize,
    mode: IntersectionMode,
    tol: &Tolerances,
) -> Result<bool> {
    assert!(
        i != j && j != k && i != k,
        "indices must be pairwise distinct"
    );
    config.check_index(k)?;
    let z = closest_point_in_lens(config.center(k), config, i, j, tol)?;
    let dist = z.distance(config.center(k));
    let rk = config.radius(k);
    Ok(match mode {
        IntersectionMode::Closed => dist <= rk + tol.geometric_eps,
        IntersectionMode::Interior => dist <= rk - tol.strict_margin,
    })
}

/// Number of balls k ∉ {i, j} meeting the lens of the pair (i, j); zero when
/// the lens is empty.
pub fn pair_interaction_count(
    config: &BallConfiguration,
    i: usize,
    j: usize,
    mode: IntersectionMode,
    tol: &Tolerances,
) -> Result<usize> {
    config.check_index(i)?;
    config.check_index(j)?;
    assert_ne!(i, j, "lens is defined for distinct balls");
    if !lens_nonempty(config, i, j) {
        return Ok(0);
    }
    let mut count = 0;
    for k in 0..config.len() {
        if k == i || k == j {
            continue;
        }
        if lens_meets_ball(config, i, j, k, mode, tol)? {
            count += 1;
        }
    }
    Ok(count)
}

/// Per-pair interaction counts and the verdict on the bounded-intersection
/// hypothesis (max count at most d + 1).
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionReport {
    pub holds: bool,
    /// The bound d + 1 the counts are compared against.
    pub bound: usize,
    pub max_count: usize,
    /// Rows (i, j, count) for every pair i < j.
    pub pair_counts: Vec<(usize, usize, usize)>,
}

/// Checks the hypothesis "every lens has common points with at most d + 1
/// other balls" and returns the full count table for reporting.
pub fn theorem_condition_holds(
    config: &BallConfiguration,
    mode: IntersectionMode,
    tol: &Tolerances,
) -> Result<ConditionReport> {
    let bound = config.dim() + 1;
    let mut pair_counts = Vec::new();
    let mut max_count = 0;
    for i in 0..config.len() {
        for j in i + 1..config.len() {
            let c = pair_interaction_count(config, i, j, mode, tol)?;
            max_count = max_count.max(c);
            pair_counts.push((i, j, c));
        }
    }
    Ok(ConditionReport {
        holds: max_count <= bound,
        bound,
        max_count,
        pair_counts,
    })
}
