//! Exact measures in low dimension: interval unions in 1D, disk/cell/wall
//! measures in 2D via arc-polygon clipping, and the closed-form ball volume.

use crate::arc_polygon::{clip_disk_by_halfplanes, ArcPolygon};
use crate::config::RadiusFamily;
use crate::diagram::{power_cell, wall, Wall};
use crate::error::{Error, Result};

/// Volume of the d-dimensional ball of radius r, via the two-step recurrence
/// V_d = V_{d-2} * (2 pi / d) r^2 seeded with V_1 = 2r and V_2 = pi r^2.
pub fn ball_volume(dim: usize, radius: f64) -> f64 {
    assert!(dim >= 1, "ball volume needs dimension >= 1");
    assert!(radius >= 0.0, "ball volume needs a nonnegative radius");
    let mut unit = if dim % 2 == 1 {
        2.0
    } else {
        std::f64::consts::PI
    };
    let mut d = if dim % 2 == 1 { 1 } else { 2 };
    while d < dim {
        d += 2;
        unit *= std::f64::consts::TAU / d as f64;
    }
    unit * radius.powi(dim as i32)
}

/// The truncated cell of ball `i` as an explicit 2D arc polygon.
pub fn truncated_cell_region_2d(fam: &RadiusFamily, i: usize) -> Result<ArcPolygon> {
    if fam.config().dim() != 2 {
        return Err(Error::Unsupported(format!(
            "exact cell regions need dimension 2, got {}",
            fam.config().dim()
        )));
    }
    let cell = power_cell(fam, i)?;
    let c = fam.config().center(i).coords();
    Ok(clip_disk_by_halfplanes(
        [c[0], c[1]],
        fam.radius(i),
        cell.halfspaces(),
    ))
}

/// Exact area of the truncated cell of ball `i` (d = 2).
pub fn cell_area_2d(fam: &RadiusFamily, i: usize) -> Result<f64> {
    Ok(truncated_cell_region_2d(fam, i)?.area())
}

/// Exact area of the union of disks at parameter s, as the sum of truncated
/// power-cell areas (d = 2).
pub fn union_area_2d(fam: &RadiusFamily) -> Result<f64> {
    if fam.config().dim() != 2 {
        return Err(Error::Unsupported(format!(
            "union_area_2d needs dimension 2, got {}",
            fam.config().dim()
        )));
    }
    let mut total = 0.0;
    for i in 0..fam.config().len() {
        total += cell_area_2d(fam, i)?;
    }
    Ok(total)
}

/// Total length of the union of intervals [p_i - r_i(s), p_i + r_i(s)]
/// by endpoint sweep (d = 1). Coincident centers are fine here.
pub fn union_length_1d(fam: &RadiusFamily) -> Result<f64> {
    if fam.config().dim() != 1 {
        return Err(Error::Unsupported(format!(
            "union_length_1d needs dimension 1, got {}",
            fam.config().dim()
        )));
    }
    let mut intervals: Vec<(f64, f64)> = (0..fam.config().len())
        .map(|i| {
            let c = fam.config().center(i).coords()[0];
            let r = fam.radius(i);
            (c - r, c + r)
        })
        .collect();
    intervals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut total = 0.0;
    let mut cur: Option<(f64, f64)> = None;
    for (lo, hi) in intervals {
        match cur {
            Some((clo, chi)) if lo <= chi => cur = Some((clo, chi.max(hi))),
            Some((clo, chi)) => {
                total += chi - clo;
                cur = Some((lo, hi));
            }
            None => cur = Some((lo, hi)),
        }
    }
    if let Some((clo, chi)) = cur {
        total += chi - clo;
    }
    Ok(total)
}

/// Measure of a wall at parameter s when its in-plane dimension is 1:
/// the chord interval [-r_ij(s), r_ij(s)] cut by the in-plane constraints.
pub fn wall_measure_exact(w: &Wall, s: f64) -> Result<f64> {
    if w.in_plane_dim() != 1 {
        return Err(Error::Unsupported(format!(
            "exact wall measure needs in-plane dimension 1, got {}",
            w.in_plane_dim()
        )));
    }
    if !w.feasible() {
        return Ok(0.0);
    }
    let rsq = w.radius_sq(s);
    if rsq <= 0.0 {
        return Ok(0.0);
    }
    let r = rsq.sqrt();
    let mut lo = -r;
    let mut hi = r;
    for hs in w.in_plane_halfspaces() {
        let g = hs.normal()[0]; // unit scalar: +1 or -1
        if g > 0.0 {
            hi = hi.min(hs.offset() / g);
        } else {
            lo = lo.max(hs.offset() / g);
        }
    }
    Ok((hi - lo).max(0.0))
}

/// Exact wall length between balls i and j at the family's parameter (d = 2).
pub fn wall_length_2d(fam: &RadiusFamily, i: usize, j: usize) -> Result<f64> {
    if fam.config().dim() != 2 {
        return Err(Error::Unsupported(format!(
            "wall_length_2d needs dimension 2, got {}",
            fam.config().dim()
        )));
    }
    let w = wall(fam, i, j)?;
    wall_measure_exact(&w, fam.s())
}
