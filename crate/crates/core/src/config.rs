//! Ball configurations, the one-parameter radius family r_i(s) = sqrt(r_i^2 + s),
//! and the basic metric operations on configurations.

use crate::error::{Error, Result};
use crate::linalg;

/// A point of Euclidean space E^d, d >= 1.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    coords: Vec<f64>,
}

impl Point {
    pub fn new(coords: Vec<f64>) -> Self {
        Point { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// Distance to another point of the same dimension.
    pub fn distance(&self, other: &Point) -> f64 {
        linalg::dist(&self.coords, &other.coords)
    }
}

impl From<Vec<f64>> for Point {
    fn from(coords: Vec<f64>) -> Self {
        Point::new(coords)
    }
}

/// N closed balls in E^d given by centers and nonnegative radii.
#[derive(Debug, Clone, PartialEq)]
pub struct BallConfiguration {
    dim: usize,
    centers: Vec<Point>,
    radii: Vec<f64>,
}

impl BallConfiguration {
    /// Validates dimensions, finiteness, and radius signs. Coincident centers
    /// are allowed here; diagram operations reject them at their own entry.
    pub fn new(dim: usize, centers: Vec<Point>, radii: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Invalid {
                what: "configuration",
                why: "dimension must be at least 1".into(),
            });
        }
        if centers.is_empty() {
            return Err(Error::Invalid {
                what: "configuration",
                why: "need at least one ball".into(),
            });
        }
        if centers.len() != radii.len() {
            return Err(Error::Mismatch {
                what: "center/radius counts",
                left: centers.len(),
                right: radii.len(),
            });
        }
        for (i, c) in centers.iter().enumerate() {
            if c.dim() != dim {
                return Err(Error::Mismatch {
                    what: "center dimension",
                    left: c.dim(),
                    right: dim,
                });
            }
            if c.coords().iter().any(|x| !x.is_finite()) {
                return Err(Error::Invalid {
                    what: "configuration",
                    why: format!("center {i} has a non-finite coordinate"),
                });
            }
        }
        for (i, &r) in radii.iter().enumerate() {
            if !r.is_finite() || r < 0.0 {
                return Err(Error::Invalid {
                    what: "configuration",
                    why: format!("radius {i} is {r}; radii must be finite and nonnegative"),
                });
            }
        }
        Ok(BallConfiguration {
            dim,
            centers,
            radii,
        })
    }

    /// Convenience constructor from raw coordinate rows.
    pub fn from_rows(dim: usize, rows: Vec<Vec<f64>>, radii: Vec<f64>) -> Result<Self> {
        let centers = rows.into_iter().map(Point::new).collect();
        BallConfiguration::new(dim, centers, radii)
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        false // N >= 1 by construction
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn center(&self, i: usize) -> &Point {
        &self.centers[i]
    }

    pub fn centers(&self) -> &[Point] {
        &self.centers
    }

    pub fn radius(&self, i: usize) -> f64 {
        self.radii[i]
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn check_index(&self, i: usize) -> Result<()> {
        if i < self.len() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index: i,
                count: self.len(),
            })
        }
    }

    /// Smallest pairwise center distance (infinity for N = 1).
    pub fn min_center_distance(&self) -> f64 {
        let mut best = f64::INFINITY;
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                best = best.min(self.centers[i].distance(&self.centers[j]));
            }
        }
        best
    }

    /// Errors when any two centers coincide exactly; diagram operations call
    /// this before constructing radical hyperplanes.
    pub fn require_distinct_centers(&self) -> Result<()> {
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                if linalg::dist_sq(self.centers[i].coords(), self.centers[j].coords()) == 0.0 {
                    return Err(Error::CoincidentCenters { i, j });
                }
            }
        }
        Ok(())
    }

    /// The same balls regarded in E^dim by zero-padding the centers.
    pub fn embedded(&self, dim: usize) -> Result<BallConfiguration> {
        if dim < self.dim {
            return Err(Error::Mismatch {
                what: "embedding dimension",
                left: dim,
                right: self.dim,
            });
        }
        let centers = self
            .centers
            .iter()
            .map(|c| {
                let mut coords = c.coords().to_vec();
                coords.resize(dim, 0.0);
                Point::new(coords)
            })
            .collect();
        BallConfiguration::new(dim, centers, self.radii.clone())
    }

    /// Centers and radii scaled by `k > 0`.
    pub fn scaled(&self, k: f64) -> Result<BallConfiguration> {
        if !(k.is_finite() && k > 0.0) {
            return Err(Error::Invalid {
                what: "scale factor",
                why: format!("{k} must be finite and positive"),
            });
        }
        let centers = self
            .centers
            .iter()
            .map(|c| Point::new(linalg::scale(c.coords(), k)))
            .collect();
        let radii = self.radii.iter().map(|r| r * k).collect();
        BallConfiguration::new(self.dim, centers, radii)
    }
}

/// The configuration together with the perturbation parameter `s` of the
/// simultaneous radius family r_i(s) = sqrt(r_i^2 + s).
#[derive(Debug, Clone, PartialEq)]
pub struct RadiusFamily {
    config: BallConfiguration,
    s: f64,
}

impl RadiusFamily {
    /// Requires r_i^2 + s >= 0 for every ball, so each perturbed radius is real.
    pub fn new(config: BallConfiguration, s: f64) -> Result<Self> {
        if !s.is_finite() {
            return Err(Error::Invalid {
                what: "radius family",
                why: format!("s = {s} is not finite"),
            });
        }
        for (i, &r) in config.radii().iter().enumerate() {
            if r * r + s < 0.0 {
                return Err(Error::Invalid {
                    what: "radius family",
                    why: format!("r_{i}^2 + s = {} is negative", r * r + s),
                });
            }
        }
        Ok(RadiusFamily { config, s })
    }

    pub fn config(&self) -> &BallConfiguration {
        &self.config
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    /// r_i(s)^2 = r_i^2 + s.
    pub fn radius_sq(&self, i: usize) -> f64 {
        let r = self.config.radius(i);
        r * r + self.s
    }

    pub fn radius(&self, i: usize) -> f64 {
        self.radius_sq(i).max(0.0).sqrt()
    }

    /// Same configuration at a different parameter value.
    pub fn at(&self, s: f64) -> Result<RadiusFamily> {
        RadiusFamily::new(self.config.clone(), s)
    }
}

/// Tolerance policy for the floating-point predicates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Relative slack for geometric comparisons.
    pub geometric_eps: f64,
    /// Margin separating "interior" from "boundary" in strict-mode predicates.
    pub strict_margin: f64,
}

impl Tolerances {
    pub fn new(geometric_eps: f64, strict_margin: f64) -> Result<Self> {
        for (name, v) in [
            ("geometric_eps", geometric_eps),
            ("strict_margin", strict_margin),
        ] {
            if !(v > 0.0 && v < 1e-3) {
                return Err(Error::Invalid {
                    what: "tolerances",
                    why: format!("{name} = {v} must lie in (0, 1e-3)"),
                });
            }
        }
        Ok(Tolerances {
            geometric_eps,
            strict_margin,
        })
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            geometric_eps: 1e-9,
            strict_margin: 1e-7,
        }
    }
}

/// Symmetric N x N matrix of pairwise center distances, zero diagonal.
#[allow(clippy::needless_range_loop)] // both triangles are written per pair
pub fn distance_matrix(config: &BallConfiguration) -> Vec<Vec<f64>> {
    let n = config.len();
    let mut m = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let d = config.center(i).distance(config.center(j));
            m[i][j] = d;
            m[j][i] = d;
        }
    }
    m
}

/// Whether `q` expands `p`: every pairwise distance of `q` is at least the
/// matching distance of `p`, up to relative slack `geometric_eps`.
pub fn is_expansion(
    p: &BallConfiguration,
    q: &BallConfiguration,
    tol: &Tolerances,
) -> Result<bool> {
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
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            let dp = p.center(i).distance(p.center(j));
            let dq = q.center(i).distance(q.center(j));
            if dq < dp - tol.geometric_eps * (1.0 + dp) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Finds a witness pair that shrinks, if any; used for error reporting.
pub fn contraction_witness(
    p: &BallConfiguration,
    q: &BallConfiguration,
    tol: &Tolerances,
) -> Result<Option<(usize, usize, f64, f64)>> {
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
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            let dp = p.center(i).distance(p.center(j));
            let dq = q.center(i).distance(q.center(j));
            if dq < dp - tol.geometric_eps * (1.0 + dp) {
                return Ok(Some((i, j, dp, dq)));
            }
        }
    }
    Ok(None)
}

/// Power of the point `x` with respect to ball `i` of the family:
/// |x - p_i|^2 - r_i^2 - s.
pub fn power(x: &Point, i: usize, fam: &RadiusFamily) -> Result<f64> {
    fam.config().check_index(i)?;
    if x.dim() != fam.config().dim() {
        return Err(Error::Mismatch {
            what: "point dimension",
            left: x.dim(),
            right: fam.config().dim(),
        });
    }
    let d2 = linalg::dist_sq(x.coords(), fam.config().center(i).coords());
    Ok(d2 - fam.radius_sq(i))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(dim: usize, rows: &[&[f64]], radii: &[f64]) -> BallConfiguration {
        BallConfiguration::from_rows(
            dim,
            rows.iter().map(|r| r.to_vec()).collect(),
            radii.to_vec(),
        )
        .unwrap()
    }

    #[test]
    fn distance_matrix_345() {
        let c = cfg(2, &[&[0.0, 0.0], &[3.0, 4.0]], &[1.0, 1.0]);
        let m = distance_matrix(&c);
        assert_eq!(m[0][1], 5.0);
        assert_eq!(m[1][0], 5.0);
        assert_eq!(m[0][0], 0.0);
    }

    #[test]
    fn distance_matrix_single_center() {
        let c = cfg(3, &[&[1.0, 2.0, 3.0]], &[0.5]);
        assert_eq!(distance_matrix(&c), vec![vec![0.0]]);
    }

    #[test]
    fn distance_matrix_1d() {
        let c = cfg(1, &[&[0.0], &[1.0], &[2.5]], &[1.0, 1.0, 1.0]);
        let m = distance_matrix(&c);
        assert_eq!(m[0][1], 1.0);
        assert_eq!(m[0][2], 2.5);
        assert_eq!(m[1][2], 1.5);
    }

    #[test]
    fn expansion_allows_equality() {
        let p = cfg(1, &[&[0.0], &[1.0], &[2.0]], &[1.0; 3]);
        let tol = Tolerances::default();
        assert!(is_expansion(&p, &p, &tol).unwrap());
    }

    #[test]
    fn expansion_detects_growth_and_shrink() {
        let tol = Tolerances::default();
        let p = cfg(1, &[&[0.0], &[1.0], &[2.0]], &[1.0; 3]);
        let q = cfg(1, &[&[0.0], &[1.0], &[2.5]], &[1.0; 3]);
        assert!(is_expansion(&p, &q, &tol).unwrap());
        let p2 = cfg(1, &[&[0.0], &[2.0]], &[1.0; 2]);
        let q2 = cfg(1, &[&[0.0], &[1.0]], &[1.0; 2]);
        assert!(!is_expansion(&p2, &q2, &tol).unwrap());
    }

    #[test]
    fn expansion_rejects_mismatch() {
        let tol = Tolerances::default();
        let p = cfg(1, &[&[0.0], &[1.0]], &[1.0; 2]);
        let q = cfg(2, &[&[0.0, 0.0], &[1.0, 0.0]], &[1.0; 2]);
        assert!(is_expansion(&p, &q, &tol).is_err());
        let q3 = cfg(1, &[&[0.0], &[1.0], &[2.0]], &[1.0; 3]);
        assert!(is_expansion(&p, &q3, &tol).is_err());
    }

    #[test]
    fn power_values() {
        let c = cfg(2, &[&[0.0, 0.0]], &[1.0]);
        let fam = RadiusFamily::new(c.clone(), 0.0).unwrap();
        assert_eq!(power(&Point::new(vec![0.0, 0.0]), 0, &fam).unwrap(), -1.0);
        assert_eq!(power(&Point::new(vec![1.0, 0.0]), 0, &fam).unwrap(), 0.0);
        let fam_half = RadiusFamily::new(c, 0.5).unwrap();
        assert_eq!(
            power(&Point::new(vec![0.0, 0.0]), 0, &fam_half).unwrap(),
            -1.5
        );
    }

    #[test]
    fn power_index_out_of_range() {
        let c = cfg(2, &[&[0.0, 0.0]], &[1.0]);
        let fam = RadiusFamily::new(c, 0.0).unwrap();
        assert!(matches!(
            power(&Point::new(vec![0.0, 0.0]), 1, &fam),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn radius_family_domain() {
        let c = cfg(1, &[&[0.0]], &[1.0]);
        assert!(RadiusFamily::new(c.clone(), -1.0 - 1e-9).is_err());
        let fam = RadiusFamily::new(c, -0.75).unwrap();
        assert!((fam.radius(0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn tolerances_bounds() {
        assert!(Tolerances::new(1e-9, 1e-7).is_ok());
        assert!(Tolerances::new(0.0, 1e-7).is_err());
        assert!(Tolerances::new(1e-9, 1e-2).is_err());
    }

    #[test]
    fn embedding_pads_with_zeros() {
        let c = cfg(1, &[&[2.0]], &[1.0]);
        let e = c.embedded(3).unwrap();
        assert_eq!(e.center(0).coords(), &[2.0, 0.0, 0.0]);
        assert!(c.embedded(0).is_err());
    }
}
