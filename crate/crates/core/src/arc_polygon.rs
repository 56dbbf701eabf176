//! Exact intersection of a disk with halfplanes, kept as a convex region
//! bounded by line segments and arcs of the single truncating circle.
//!
//! Clipping is sequential: each halfplane splits existing arcs at the chord
//! endpoints of its boundary line with the circle, keeps the inside pieces,
//! and closes the boundary with a chord segment. Areas are then exact:
//! shoelace over the vertices plus a circular-segment correction per arc.

use std::f64::consts::TAU;

use crate::diagram::Halfspace;

const TIE_ANGLE: f64 = 1e-12; // radians; split points closer than this to an endpoint are dropped

/// Convex region `disk ∩ halfplanes`, possibly empty or the full disk.
#[derive(Debug, Clone, PartialEq)]
pub struct ArcPolygon {
    center: [f64; 2],
    radius: f64,
    boundary: Boundary,
}

#[derive(Debug, Clone, PartialEq)]
enum Boundary {
    Empty,
    Full,
    /// Counterclockwise vertex cycle; `arcs[k]` tells whether the edge from
    /// vertex k to vertex k+1 runs along the circle (true) or a chord (false).
    Chain {
        verts: Vec<[f64; 2]>,
        arcs: Vec<bool>,
    },
}

/// One boundary edge, with explicit arc parameters for inspection.
#[derive(Debug, Clone, PartialEq)]
pub enum ArcEdge {
    Segment {
        from: [f64; 2],
        to: [f64; 2],
    },
    Arc {
        center: [f64; 2],
        radius: f64,
        start_angle: f64,
        end_angle: f64,
        /// Always counterclockwise for a convex region.
        ccw: bool,
    },
}

impl ArcPolygon {
    pub fn circle_center(&self) -> [f64; 2] {
        self.center
    }

    pub fn circle_radius(&self) -> f64 {
        self.radius
    }

    pub fn is_empty(&self) -> bool {
        matches!(self.boundary, Boundary::Empty)
    }

    pub fn is_full_disk(&self) -> bool {
        matches!(self.boundary, Boundary::Full)
    }

    pub fn vertices(&self) -> &[[f64; 2]] {
        match &self.boundary {
            Boundary::Chain { verts, .. } => verts,
            _ => &[],
        }
    }

    /// Boundary edges in counterclockwise order.
    pub fn edges(&self) -> Vec<ArcEdge> {
        match &self.boundary {
            Boundary::Empty => Vec::new(),
            Boundary::Full => vec![ArcEdge::Arc {
                center: self.center,
                radius: self.radius,
                start_angle: 0.0,
                end_angle: TAU,
                ccw: true,
            }],
            Boundary::Chain { verts, arcs } => {
                let m = verts.len();
                (0..m)
                    .map(|k| {
                        let from = verts[k];
                        let to = verts[(k + 1) % m];
                        if arcs[k] {
                            let a0 = self.angle_of(from);
                            let a1 = self.angle_of(to);
                            ArcEdge::Arc {
                                center: self.center,
                                radius: self.radius,
                                start_angle: a0,
                                end_angle: a0 + ccw_delta(a0, a1),
                                ccw: true,
                            }
                        } else {
                            ArcEdge::Segment { from, to }
                        }
                    })
                    .collect()
            }
        }
    }

    pub fn area(&self) -> f64 {
        arc_polygon_area(self)
    }

    fn angle_of(&self, p: [f64; 2]) -> f64 {
        (p[1] - self.center[1]).atan2(p[0] - self.center[0])
    }
}

fn ccw_delta(a0: f64, a1: f64) -> f64 {
    let mut d = (a1 - a0) % TAU;
    if d < 0.0 {
        d += TAU;
    }
    d
}

/// Intersection of the disk B(center, radius) with all given halfplanes.
pub fn clip_disk_by_halfplanes(
    center: [f64; 2],
    radius: f64,
    halfplanes: &[Halfspace],
) -> ArcPolygon {
    let mut region = ArcPolygon {
        center,
        radius,
        boundary: if radius > 0.0 {
            Boundary::Full
        } else {
            Boundary::Empty
        },
    };
    for hs in halfplanes {
        assert_eq!(hs.dim(), 2, "halfplane clipping is two-dimensional");
        region = clip_once(region, hs);
        if region.is_empty() {
            break;
        }
    }
    region
}

fn clip_once(region: ArcPolygon, hs: &Halfspace) -> ArcPolygon {
    let center = region.center;
    let radius = region.radius;
    let n = [hs.normal()[0], hs.normal()[1]];
    let tie = 1e-12 * (1.0 + hs.offset().abs());

    // Chord of the clip line with the circle, shared by all edges.
    let t = n[0] * center[0] + n[1] * center[1] - hs.offset();
    let disc = radius * radius - t * t;
    let chord = if disc > 0.0 {
        let w = disc.sqrt();
        let foot = [center[0] - t * n[0], center[1] - t * n[1]];
        let e = [-n[1], n[0]];
        // Along +e the kept side lies to the left, so the closing chord of the
        // clipped region runs from `a` to `b`.
        let a = [foot[0] - w * e[0], foot[1] - w * e[1]];
        let b = [foot[0] + w * e[0], foot[1] + w * e[1]];
        Some((a, b))
    } else {
        None
    };

    let boundary = match region.boundary {
        Boundary::Empty => Boundary::Empty,
        Boundary::Full => {
            if t <= -radius {
                Boundary::Full
            } else if let Some((a, b)) = chord {
                Boundary::Chain {
                    verts: vec![a, b],
                    arcs: vec![false, true],
                }
            } else {
                Boundary::Empty
            }
        }
        Boundary::Chain { verts, arcs } => {
            clip_chain(&verts, &arcs, center, radius, n, hs.offset(), tie, chord)
        }
    };

    ArcPolygon {
        center,
        radius,
        boundary: dedupe(boundary, radius),
    }
}

#[allow(clippy::too_many_arguments)]
fn clip_chain(
    verts: &[[f64; 2]],
    arcs: &[bool],
    center: [f64; 2],
    radius: f64,
    n: [f64; 2],
    offset: f64,
    tie: f64,
    chord: Option<([f64; 2], [f64; 2])>,
) -> Boundary {
    let m = verts.len();
    let signed = |p: [f64; 2]| n[0] * p[0] + n[1] * p[1] - offset;
    let angle_of = |p: [f64; 2]| (p[1] - center[1]).atan2(p[0] - center[0]);

    let mut out_v: Vec<[f64; 2]> = Vec::with_capacity(m + 2);
    let mut out_a: Vec<bool> = Vec::with_capacity(m + 2);
    let mut push = |p: [f64; 2], arc: bool| {
        out_v.push(p);
        out_a.push(arc);
    };

    for k in 0..m {
        let u = verts[k];
        let v = verts[(k + 1) % m];
        if arcs[k] {
            // Split the ccw arc u -> v at the chord endpoints that fall on it.
            let a0 = angle_of(u);
            let span = ccw_delta(a0, angle_of(v));
            let mut splits: Vec<(f64, [f64; 2])> = Vec::new();
            if let Some((ca, cb)) = chord {
                for p in [ca, cb] {
                    let d = ccw_delta(a0, angle_of(p));
                    if d > TIE_ANGLE && d < span - TIE_ANGLE {
                        splits.push((d, p));
                    }
                }
                splits.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
            }
            let mut prev_inside = false;
            for g in 0..=splits.len() {
                let d_start = if g == 0 { 0.0 } else { splits[g - 1].0 };
                let d_end = if g < splits.len() { splits[g].0 } else { span };
                let mid = a0 + 0.5 * (d_start + d_end);
                let midpt = [
                    center[0] + radius * mid.cos(),
                    center[1] + radius * mid.sin(),
                ];
                let inside = signed(midpt) <= 0.0;
                if g == 0 {
                    if inside {
                        push(u, true);
                    }
                } else {
                    let p = splits[g - 1].1;
                    if inside && !prev_inside {
                        push(p, true); // re-entry: arc resumes
                    } else if !inside && prev_inside {
                        push(p, false); // exit: closing chord starts here
                    }
                }
                prev_inside = inside;
            }
        } else {
            let su = signed(u);
            let sv = signed(v);
            if su <= tie {
                push(u, false);
            }
            if (su > tie && sv < -tie) || (su < -tie && sv > tie) {
                let tau = su / (su - sv);
                push(
                    [u[0] + tau * (v[0] - u[0]), u[1] + tau * (v[1] - u[1])],
                    false,
                );
            }
        }
    }

    if out_v.len() < 2 {
        Boundary::Empty
    } else {
        Boundary::Chain {
            verts: out_v,
            arcs: out_a,
        }
    }
}

/// Remove zero-length edges produced by crossings landing on vertices.
fn dedupe(boundary: Boundary, radius: f64) -> Boundary {
    let Boundary::Chain { verts, arcs } = boundary else {
        return boundary;
    };
    let m = verts.len();
    let tol = 1e-13 * (1.0 + radius);
    let mut keep_v = Vec::with_capacity(m);
    let mut keep_a = Vec::with_capacity(m);
    for k in 0..m {
        let next = verts[(k + 1) % m];
        let d = ((verts[k][0] - next[0]).powi(2) + (verts[k][1] - next[1]).powi(2)).sqrt();
        // A zero-length arc edge from p to p would read as a full circle;
        // drop the vertex whose outgoing edge is degenerate.
        if d < tol {
            continue;
        }
        keep_v.push(verts[k]);
        keep_a.push(arcs[k]);
    }
    if keep_v.len() < 2 {
        Boundary::Empty
    } else {
        Boundary::Chain {
            verts: keep_v,
            arcs: keep_a,
        }
    }
}

/// Exact area: shoelace over the vertex cycle plus one circular-segment
/// correction (R^2/2)(theta - sin theta) per arc edge.
pub fn arc_polygon_area(region: &ArcPolygon) -> f64 {
    match &region.boundary {
        Boundary::Empty => 0.0,
        Boundary::Full => std::f64::consts::PI * region.radius * region.radius,
        Boundary::Chain { verts, arcs } => {
            let m = verts.len();
            let mut area = 0.0;
            for k in 0..m {
                let p = verts[k];
                let q = verts[(k + 1) % m];
                area += 0.5 * (p[0] * q[1] - q[0] * p[1]);
                if arcs[k] {
                    let a0 = region.angle_of(p);
                    let theta = ccw_delta(a0, region.angle_of(q));
                    area += 0.5 * region.radius * region.radius * (theta - theta.sin());
                }
            }
            area
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn hp(nx: f64, ny: f64, c: f64) -> Halfspace {
        Halfspace::new(vec![nx, ny], c).unwrap()
    }

    #[test]
    fn full_disk_area() {
        let r = clip_disk_by_halfplanes([0.3, -0.2], 1.5, &[]);
        assert!(r.is_full_disk());
        assert!((r.area() - PI * 2.25).abs() < 1e-12);
    }

    #[test]
    fn half_disk_area() {
        let r = clip_disk_by_halfplanes([0.0, 0.0], 1.0, &[hp(1.0, 0.0, 0.0)]);
        assert!((r.area() - PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn offset_clip_matches_segment_formula() {
        // Unit disk cut at x <= 1/2 keeps pi - (pi/3 - sqrt(3)/4).
        let r = clip_disk_by_halfplanes([0.0, 0.0], 1.0, &[hp(1.0, 0.0, 0.5)]);
        let expected = PI - (PI / 3.0 - 3.0_f64.sqrt() / 4.0);
        assert!((r.area() - expected).abs() < 1e-12);
    }

    #[test]
    fn clip_away_everything() {
        let r = clip_disk_by_halfplanes([0.0, 0.0], 1.0, &[hp(1.0, 0.0, -2.0)]);
        assert!(r.is_empty());
        assert_eq!(r.area(), 0.0);
    }

    #[test]
    fn vertical_band() {
        // |x| <= 0.3 inside the unit disk: 2a*sqrt(1-a^2) + 2*asin(a).
        let r = clip_disk_by_halfplanes([0.0, 0.0], 1.0, &[hp(1.0, 0.0, 0.3), hp(-1.0, 0.0, 0.3)]);
        let a: f64 = 0.3;
        let expected = 2.0 * a * (1.0 - a * a).sqrt() + 2.0 * a.asin();
        assert!((r.area() - expected).abs() < 1e-12);
    }

    #[test]
    fn inscribed_square_loses_all_arcs() {
        let r = clip_disk_by_halfplanes(
            [0.0, 0.0],
            1.0,
            &[
                hp(1.0, 0.0, 0.5),
                hp(-1.0, 0.0, 0.5),
                hp(0.0, 1.0, 0.5),
                hp(0.0, -1.0, 0.5),
            ],
        );
        assert!((r.area() - 1.0).abs() < 1e-12);
        assert!(r
            .edges()
            .iter()
            .all(|e| matches!(e, ArcEdge::Segment { .. })));
    }

    #[test]
    fn quarter_disk() {
        let r = clip_disk_by_halfplanes([0.0, 0.0], 2.0, &[hp(1.0, 0.0, 0.0), hp(0.0, 1.0, 0.0)]);
        assert!((r.area() - PI).abs() < 1e-12);
    }

    #[test]
    fn tangent_line_keeps_or_kills() {
        let keep = clip_disk_by_halfplanes([0.0, 0.0], 1.0, &[hp(1.0, 0.0, 1.0)]);
        assert!((keep.area() - PI).abs() < 1e-12);
        let kill = clip_disk_by_halfplanes([0.0, 0.0], 1.0, &[hp(-1.0, 0.0, -1.0)]);
        assert!(kill.area().abs() < 1e-9);
    }

    #[test]
    fn zero_radius_disk_is_empty() {
        let r = clip_disk_by_halfplanes([1.0, 1.0], 0.0, &[]);
        assert_eq!(r.area(), 0.0);
    }

    #[test]
    fn order_of_clips_does_not_matter() {
        let hs = [hp(1.0, 0.2, 0.4), hp(-0.3, 1.0, 0.5), hp(0.1, -1.0, 0.7)];
        let a = clip_disk_by_halfplanes([0.1, -0.2], 1.3, &hs);
        let mut rev = hs.to_vec();
        rev.reverse();
        let b = clip_disk_by_halfplanes([0.1, -0.2], 1.3, &rev);
        assert!((a.area() - b.area()).abs() < 1e-12);
    }
}
