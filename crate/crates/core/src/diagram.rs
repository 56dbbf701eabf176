//! Power (Laguerre-Voronoi) cells, radical hyperplanes, truncated cells, and
//! walls, all as explicit halfspace-bounded objects.
//!
//! Cell constraints are computed from the base radii only, never from the
//! family parameter s, so a cell is the same object (bit for bit) for every s.

use crate::config::{BallConfiguration, Point, RadiusFamily, Tolerances};
use crate::error::{Error, Result};
use crate::linalg;

/// The set {x : normal . x <= offset} with |normal| = 1.
#[derive(Debug, Clone, PartialEq)]
pub struct Halfspace {
    normal: Vec<f64>,
    offset: f64,
}

impl Halfspace {
    pub fn new(normal: Vec<f64>, offset: f64) -> Result<Self> {
        let n = linalg::norm(&normal);
        if n <= 1e-300 || !n.is_finite() {
            return Err(Error::Invalid {
                what: "halfspace",
                why: "normal must be nonzero and finite".into(),
            });
        }
        Ok(Halfspace {
            normal: linalg::scale(&normal, 1.0 / n),
            offset: offset / n,
        })
    }

    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    pub fn normal(&self) -> &[f64] {
        &self.normal
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    /// normal . x - offset; nonpositive inside.
    pub fn signed_excess(&self, x: &[f64]) -> f64 {
        linalg::dot(&self.normal, x) - self.offset
    }

    pub fn contains(&self, x: &[f64], eps: f64) -> bool {
        self.signed_excess(x) <= eps * (1.0 + self.offset.abs())
    }
}

/// The set {x : normal . x = offset} together with a deterministic
/// orthonormal in-plane frame of d - 1 basis vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct Hyperplane {
    normal: Vec<f64>,
    offset: f64,
    frame: Vec<Vec<f64>>,
}

impl Hyperplane {
    fn from_unit_normal(normal: Vec<f64>, offset: f64) -> Self {
        let frame = linalg::orthonormal_frame(&normal);
        Hyperplane {
            normal,
            offset,
            frame,
        }
    }

    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    pub fn normal(&self) -> &[f64] {
        &self.normal
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    /// Orthonormal in-plane basis (d - 1 vectors orthogonal to the normal).
    pub fn frame(&self) -> &[Vec<f64>] {
        &self.frame
    }

    pub fn signed_distance(&self, x: &[f64]) -> f64 {
        linalg::dot(&self.normal, x) - self.offset
    }
}

/// Extended nearest-point Voronoi region of ball `index`: one power-bisector
/// halfspace per other ball, no redundancy pruning.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerCell {
    index: usize,
    halfspaces: Vec<Halfspace>,
}

impl PowerCell {
    pub fn index(&self) -> usize {
        self.index
    }

    pub fn halfspaces(&self) -> &[Halfspace] {
        &self.halfspaces
    }
}

/// A power cell intersected with its own ball of radius sqrt(r^2 + s).
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedCell {
    cell: PowerCell,
    center: Point,
    base_radius: f64,
    s: f64,
}

impl TruncatedCell {
    pub fn cell(&self) -> &PowerCell {
        &self.cell
    }

    pub fn center(&self) -> &Point {
        &self.center
    }

    pub fn base_radius(&self) -> f64 {
        self.base_radius
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn radius_sq(&self) -> f64 {
        self.base_radius * self.base_radius + self.s
    }

    pub fn contains(&self, x: &Point, tol: &Tolerances) -> bool {
        let rsq = self.radius_sq();
        let slack = tol.geometric_eps * (1.0 + rsq.abs());
        linalg::dist_sq(x.coords(), self.center.coords()) <= rsq + slack
            && cell_contains(&self.cell, x, tol)
    }
}

/// The wall between truncated cells i and j: a (d-1)-dimensional truncated
/// polytope living in the radical hyperplane L_ij.
///
/// In-plane halfspaces are expressed in frame coordinates with the foot
/// point as origin, so the truncating disk is centered at the in-plane
/// origin with squared radius `radius_squared_base + s`.
#[derive(Debug, Clone, PartialEq)]
pub struct Wall {
    pair: (usize, usize),
    plane: Hyperplane,
    foot: Point,
    /// Signed distance from p_i to the plane, measured along the normal
    /// pointing from p_i toward p_j.
    h: f64,
    /// r_i^2 - h^2; the in-plane disk radius at parameter s is
    /// sqrt(radius_squared_base + s).
    radius_squared_base: f64,
    in_plane_halfspaces: Vec<Halfspace>,
    /// False when some constraint plane parallel to L_ij excludes the whole
    /// hyperplane; the wall is then empty at every s.
    feasible: bool,
}

impl Wall {
    pub fn pair(&self) -> (usize, usize) {
        self.pair
    }

    pub fn plane(&self) -> &Hyperplane {
        &self.plane
    }

    pub fn foot(&self) -> &Point {
        &self.foot
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn radius_squared_base(&self) -> f64 {
        self.radius_squared_base
    }

    pub fn in_plane_halfspaces(&self) -> &[Halfspace] {
        &self.in_plane_halfspaces
    }

    pub fn feasible(&self) -> bool {
        self.feasible
    }

    /// In-plane dimension of the wall (ambient d - 1).
    pub fn in_plane_dim(&self) -> usize {
        self.plane.dim() - 1
    }

    /// Squared disk radius at parameter s; negative means the wall is empty.
    pub fn radius_sq(&self, s: f64) -> f64 {
        self.radius_squared_base + s
    }

    /// Map in-plane frame coordinates (origin at the foot) to ambient space.
    pub fn embed(&self, u: &[f64]) -> Point {
        let mut x = self.foot.coords().to_vec();
        for (ua, f) in u.iter().zip(self.plane.frame()) {
            x = linalg::axpy(&x, *ua, f);
        }
        Point::new(x)
    }

    /// In-plane frame coordinates of an ambient point (its projection).
    pub fn project(&self, x: &Point) -> Vec<f64> {
        let rel = linalg::sub(x.coords(), self.foot.coords());
        self.plane
            .frame()
            .iter()
            .map(|f| linalg::dot(f, &rel))
            .collect()
    }

    /// Membership of in-plane coordinates in the wall at parameter s.
    pub fn contains_in_plane(&self, u: &[f64], s: f64, tol: &Tolerances) -> bool {
        if !self.feasible {
            return false;
        }
        let rsq = self.radius_sq(s);
        if rsq < 0.0 {
            return false;
        }
        let slack = tol.geometric_eps * (1.0 + rsq.abs());
        linalg::norm_sq(u) <= rsq + slack
            && self
                .in_plane_halfspaces
                .iter()
                .all(|hs| hs.contains(u, tol.geometric_eps))
    }

    /// Membership of an ambient point: on the plane and inside the wall.
    pub fn contains(&self, x: &Point, s: f64, tol: &Tolerances) -> bool {
        let off_plane = self.plane.signed_distance(x.coords()).abs();
        if off_plane > tol.geometric_eps * (1.0 + self.plane.offset().abs()) {
            return false;
        }
        self.contains_in_plane(&self.project(x), s, tol)
    }
}

/// Foot offset of the power bisector from p_i along the unit vector toward
/// p_j. Uses base radii only; the family parameter cancels.
fn bisector_foot_offset(dij: f64, ri: f64, rj: f64) -> f64 {
    (dij * dij + ri * ri - rj * rj) / (2.0 * dij)
}

fn bisector(config: &BallConfiguration, i: usize, j: usize) -> Result<(Vec<f64>, f64, f64)> {
    let pi = config.center(i).coords();
    let pj = config.center(j).coords();
    let diff = linalg::sub(pj, pi);
    let dij = linalg::norm(&diff);
    if dij <= 1e-300 {
        return Err(Error::CoincidentCenters {
            i: i.min(j),
            j: i.max(j),
        });
    }
    let n = linalg::scale(&diff, 1.0 / dij);
    let h = bisector_foot_offset(dij, config.radius(i), config.radius(j));
    let offset = linalg::dot(&n, pi) + h;
    Ok((n, offset, h))
}

/// The radical hyperplane L_ij: the locus of equal power with respect to
/// balls i and j, oriented from p_i toward p_j. Independent of s.
pub fn radical_hyperplane(fam: &RadiusFamily, i: usize, j: usize) -> Result<Hyperplane> {
    let config = fam.config();
    config.check_index(i)?;
    config.check_index(j)?;
    assert_ne!(i, j, "radical hyperplane needs two distinct balls");
    let (n, offset, _) = bisector(config, i, j)?;
    Ok(Hyperplane::from_unit_normal(n, offset))
}

/// The power cell of ball `i`: all N - 1 bisector halfspaces, unpruned.
pub fn power_cell(fam: &RadiusFamily, i: usize) -> Result<PowerCell> {
    let config = fam.config();
    config.check_index(i)?;
    config.require_distinct_centers()?;
    let mut halfspaces = Vec::with_capacity(config.len().saturating_sub(1));
    for j in 0..config.len() {
        if j == i {
            continue;
        }
        let (n, offset, _) = bisector(config, i, j)?;
        halfspaces.push(Halfspace { normal: n, offset });
    }
    Ok(PowerCell {
        index: i,
        halfspaces,
    })
}

/// All halfspace constraints satisfied within `geometric_eps`.
pub fn cell_contains(cell: &PowerCell, x: &Point, tol: &Tolerances) -> bool {
    cell.halfspaces
        .iter()
        .all(|hs| hs.contains(x.coords(), tol.geometric_eps))
}

/// The truncated Voronoi region C_i(p, s): cell i cut by its own ball.
pub fn truncated_cell(fam: &RadiusFamily, i: usize) -> Result<TruncatedCell> {
    let cell = power_cell(fam, i)?;
    Ok(TruncatedCell {
        cell,
        center: fam.config().center(i).clone(),
        base_radius: fam.config().radius(i),
        s: fam.s(),
    })
}

/// The wall W_ij: the radical hyperplane carrying the in-plane disk of
/// squared radius r_i^2 - h_ij^2 + s, restricted by the other balls' power
/// constraints expressed in in-plane coordinates.
pub fn wall(fam: &RadiusFamily, i: usize, j: usize) -> Result<Wall> {
    let config = fam.config();
    config.check_index(i)?;
    config.check_index(j)?;
    assert_ne!(i, j, "wall needs two distinct balls");
    config.require_distinct_centers()?;

    let (n, offset, h) = bisector(config, i, j)?;
    let plane = Hyperplane::from_unit_normal(n, offset);
    let foot = Point::new(linalg::axpy(config.center(i).coords(), h, plane.normal()));
    let ri = config.radius(i);
    let radius_squared_base = ri * ri - h * h;

    let mut in_plane = Vec::new();
    let mut feasible = true;
    for k in 0..config.len() {
        if k == i || k == j {
            continue;
        }
        let (nk, ck, _) = bisector(config, i, k)?;
        let g: Vec<f64> = plane.frame().iter().map(|f| linalg::dot(f, &nk)).collect();
        let b = ck - linalg::dot(&nk, foot.coords());
        let glen = linalg::norm(&g);
        if glen <= 1e-12 {
            // Constraint plane parallel to L_ij: vacuous or annihilating.
            if b < -1e-12 * (1.0 + ck.abs()) {
                feasible = false;
            }
            continue;
        }
        in_plane.push(Halfspace {
            normal: linalg::scale(&g, 1.0 / glen),
            offset: b / glen,
        });
    }

    Ok(Wall {
        pair: (i, j),
        plane,
        foot,
        h,
        radius_squared_base,
        in_plane_halfspaces: in_plane,
        feasible,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::power;

    fn fam(dim: usize, rows: &[&[f64]], radii: &[f64], s: f64) -> RadiusFamily {
        let c = BallConfiguration::from_rows(
            dim,
            rows.iter().map(|r| r.to_vec()).collect(),
            radii.to_vec(),
        )
        .unwrap();
        RadiusFamily::new(c, s).unwrap()
    }

    #[test]
    fn radical_hyperplane_equal_radii_is_bisector() {
        let f = fam(2, &[&[0.0, 0.0], &[2.0, 0.0]], &[1.0, 1.0], 0.0);
        let hp = radical_hyperplane(&f, 0, 1).unwrap();
        assert_eq!(hp.normal(), &[1.0, 0.0]);
        assert!((hp.offset() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn radical_hyperplane_1d_offset_radii() {
        // x^2 - r0^2 = (x-2)^2 - r1^2 with r0^2 - r1^2 = 2 puts the plane at 1.5.
        let f = fam(1, &[&[0.0], &[2.0]], &[2.0_f64.sqrt(), 0.0], 0.0);
        let hp = radical_hyperplane(&f, 0, 1).unwrap();
        assert!((hp.offset() - 1.5).abs() < 1e-15);
    }

    #[test]
    fn radical_hyperplane_ignores_s() {
        let f0 = fam(3, &[&[0.1, 0.2, 0.3], &[1.0, -0.4, 0.8]], &[0.7, 1.3], 0.0);
        let f1 = f0.at(1.0).unwrap();
        assert_eq!(
            radical_hyperplane(&f0, 0, 1).unwrap(),
            radical_hyperplane(&f1, 0, 1).unwrap()
        );
    }

    #[test]
    fn power_cell_shapes() {
        let single = fam(2, &[&[0.0, 0.0]], &[1.0], 0.0);
        assert!(power_cell(&single, 0).unwrap().halfspaces().is_empty());

        let two = fam(2, &[&[0.0, 0.0], &[2.0, 0.0]], &[1.0, 1.0], 0.0);
        let cell = power_cell(&two, 0).unwrap();
        assert_eq!(cell.halfspaces().len(), 1);
        let hs = &cell.halfspaces()[0];
        assert_eq!(hs.normal(), &[1.0, 0.0]);
        assert!((hs.offset() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn bisector_points_belong_to_both_closed_cells() {
        let f = fam(2, &[&[0.0, 0.0], &[2.0, 0.0]], &[1.0, 1.0], 0.0);
        let tol = Tolerances::default();
        let cells: Vec<_> = (0..2).map(|i| power_cell(&f, i).unwrap()).collect();
        let on_bisector = Point::new(vec![1.0, -0.7]);
        assert!(cell_contains(&cells[0], &on_bisector, &tol));
        assert!(cell_contains(&cells[1], &on_bisector, &tol));
    }

    #[test]
    fn power_cell_rejects_coincident_centers() {
        let f = fam(2, &[&[0.0, 0.0], &[0.0, 0.0]], &[1.0, 2.0], 0.0);
        assert!(matches!(
            power_cell(&f, 0),
            Err(Error::CoincidentCenters { .. })
        ));
    }

    #[test]
    fn cell_membership_matches_power_comparison() {
        // Deterministic lattice of probe points over a 3-ball instance.
        let f = fam(
            2,
            &[&[0.0, 0.0], &[1.3, 0.2], &[0.4, 1.1]],
            &[1.0, 0.8, 1.2],
            0.0,
        );
        let tol = Tolerances::default();
        let cells: Vec<_> = (0..3).map(|i| power_cell(&f, i).unwrap()).collect();
        for ix in -8..=8 {
            for iy in -8..=8 {
                let x = Point::new(vec![ix as f64 * 0.31 + 0.013, iy as f64 * 0.29 - 0.007]);
                let powers: Vec<f64> = (0..3).map(|i| power(&x, i, &f).unwrap()).collect();
                for i in 0..3 {
                    let direct = (0..3).all(|j| powers[i] <= powers[j] + 1e-12);
                    assert_eq!(
                        cell_contains(&cells[i], &x, &tol),
                        direct,
                        "point {:?} cell {}",
                        x,
                        i
                    );
                }
            }
        }
    }

    #[test]
    fn wall_two_unit_balls() {
        let f = fam(2, &[&[0.0, 0.0], &[1.0, 0.0]], &[1.0, 1.0], 0.0);
        let w = wall(&f, 0, 1).unwrap();
        assert!((w.h() - 0.5).abs() < 1e-15);
        assert!((w.radius_squared_base() - 0.75).abs() < 1e-15);
        assert_eq!(w.foot().coords(), &[0.5, 0.0]);
        assert!(w.in_plane_halfspaces().is_empty());
        assert!(w.feasible());
    }

    #[test]
    fn wall_empty_when_balls_far_apart() {
        let f = fam(2, &[&[0.0, 0.0], &[10.0, 0.0]], &[1.0, 1.0], 0.0);
        let w = wall(&f, 0, 1).unwrap();
        assert!(w.radius_sq(0.0) < 0.0);
        assert!(!w.contains_in_plane(&[0.0], 0.0, &Tolerances::default()));
    }

    #[test]
    fn wall_sides_agree() {
        let f = fam(
            2,
            &[&[0.0, 0.0], &[1.0, 0.1], &[0.4, 0.9]],
            &[1.0, 0.9, 1.1],
            0.0,
        );
        let tol = Tolerances::default();
        let wij = wall(&f, 0, 1).unwrap();
        let wji = wall(&f, 1, 0).unwrap();
        // Sample ambient points on the shared plane through wij's frame.
        for k in -40..=40 {
            let u = [k as f64 * 0.05];
            let x = wij.embed(&u);
            assert_eq!(
                wij.contains(&x, 0.0, &tol),
                wji.contains(&x, 0.0, &tol),
                "disagreement at u = {:?}",
                u
            );
        }
    }

    #[test]
    fn wall_pythagoras() {
        let f = fam(3, &[&[0.0, 0.0, 0.0], &[1.0, 0.3, -0.2]], &[1.0, 0.8], 0.25);
        let w = wall(&f, 0, 1).unwrap();
        let s = f.s();
        if w.radius_sq(s) >= 0.0 {
            let lhs = w.h() * w.h() + w.radius_sq(s);
            let rhs = f.radius_sq(0);
            assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + rhs.abs()));
        }
    }

    #[test]
    fn wall_points_have_equal_power() {
        let f = fam(
            2,
            &[&[0.0, 0.0], &[1.0, 0.4], &[-0.3, 0.8]],
            &[1.0, 1.1, 0.7],
            0.0,
        );
        let w = wall(&f, 0, 1).unwrap();
        let tol = Tolerances::default();
        for k in -20..=20 {
            let u = [k as f64 * 0.04];
            if !w.contains_in_plane(&u, 0.0, &tol) {
                continue;
            }
            let x = w.embed(&u);
            let p0 = power(&x, 0, &f).unwrap();
            let p1 = power(&x, 1, &f).unwrap();
            assert!((p0 - p1).abs() <= 1e-9 * (1.0 + p0.abs()));
        }
    }
}
