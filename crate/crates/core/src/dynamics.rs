//! Volume derivatives along motions: the wall-sum derivative formula, its
//! finite-difference oracle, s-derivatives of wall measures, interaction
//! traces along motions, and the expansion volume defect.

use rand::Rng;

use crate::config::{BallConfiguration, RadiusFamily, Tolerances};
use crate::diagram::{wall, Wall};
use crate::error::{Error, Result};
use crate::lens::{pair_interaction_count, IntersectionMode};
use crate::mc::{
    run_mc, sample_unit_ball, union_volume_diff_mc, wall_volume_mc, Measured, UnionSampler,
};
use crate::measure::{ball_volume, union_area_2d, union_length_1d, wall_measure_exact};
use crate::motion::Motion;

/// How a set is measured: closed forms (low dimension) or seeded Monte Carlo.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasureMode {
    Exact,
    MonteCarlo { samples: u64, seed: u64 },
}

const SEED_MIX: u64 = 0x9E37_79B9_7F4A_7C15;

/// Minimum pairwise distance below which a motion time is treated as a
/// coincidence and rejected.
const COINCIDENCE_EPS: f64 = 1e-9;

fn check_pairwise_distinct(motion: &Motion, t: f64) -> Result<()> {
    let n = motion.n_points();
    for i in 0..n {
        for j in i + 1..n {
            if motion.distance(t, i, j) < COINCIDENCE_EPS {
                return Err(Error::CoincidentCenters { i, j });
            }
        }
    }
    Ok(())
}

/// The wall-sum derivative of the union volume along the motion at time t:
/// sum over pairs of d_ij'(t) times the wall measure at (t, s).
///
/// Exact mode needs ambient dimension 2; Monte Carlo mode works in any
/// dimension and derives one sub-seed per pair from `seed`.
pub fn csikos_derivative(
    motion: &Motion,
    radii: &[f64],
    t: f64,
    s: f64,
    mode: MeasureMode,
) -> Result<Measured> {
    let dim = motion.ambient_dim();
    if dim < 2 {
        return Err(Error::Unsupported(format!(
            "wall-sum derivative needs ambient dimension >= 2, got {dim}"
        )));
    }
    check_pairwise_distinct(motion, t)?;
    let config = motion.config_at(t, radii)?;
    let fam = RadiusFamily::new(config, s)?;
    let n = motion.n_points();

    let mut value = 0.0;
    let mut variance = 0.0;
    let mut pair_rank = 0u64;
    for i in 0..n {
        for j in i + 1..n {
            let derivative = motion.distance_derivative(t, i, j);
            match mode {
                MeasureMode::Exact => {
                    if dim != 2 {
                        return Err(Error::Unsupported(format!(
                            "exact wall measures need ambient dimension 2, got {dim}"
                        )));
                    }
                    let w = wall(&fam, i, j)?;
                    value += derivative * wall_measure_exact(&w, s)?;
                }
                MeasureMode::MonteCarlo { samples, seed } => {
                    let w = wall(&fam, i, j)?;
                    let sub_seed = seed ^ pair_rank.wrapping_mul(SEED_MIX);
                    let est = wall_volume_mc(&w, s, samples, sub_seed)?;
                    value += derivative * est.value;
                    variance += (derivative * est.std_error).powi(2);
                }
            }
            pair_rank += 1;
        }
    }
    Ok(Measured {
        value,
        std_error: variance.sqrt(),
    })
}

/// Central finite difference (V(t+h) - V(t-h)) / 2h of the union measure
/// along the motion; the independent oracle for the wall-sum formula.
///
/// Monte Carlo mode evaluates both endpoints on common random numbers, so the
/// quoted standard error is that of the paired difference.
pub fn total_volume_derivative_fd(
    motion: &Motion,
    radii: &[f64],
    t: f64,
    s: f64,
    h: f64,
    mode: MeasureMode,
) -> Result<Measured> {
    if !h.is_finite() || h <= 0.0 {
        return Err(Error::StencilOutOfRange {
            what: format!("step h = {h} must be positive"),
        });
    }
    if t - h < 0.0 || t + h > 1.0 {
        return Err(Error::StencilOutOfRange {
            what: format!("t +- h = {} .. {} leaves [0, 1]", t - h, t + h),
        });
    }
    let plus = RadiusFamily::new(motion.config_at(t + h, radii)?, s)?;
    let minus = RadiusFamily::new(motion.config_at(t - h, radii)?, s)?;
    match mode {
        MeasureMode::Exact => {
            let dim = motion.ambient_dim();
            let (vp, vm) = match dim {
                1 => (union_length_1d(&plus)?, union_length_1d(&minus)?),
                2 => (union_area_2d(&plus)?, union_area_2d(&minus)?),
                _ => {
                    return Err(Error::Unsupported(format!(
                        "exact union measures need dimension <= 2, got {dim}"
                    )))
                }
            };
            Ok(Measured::exact((vp - vm) / (2.0 * h)))
        }
        MeasureMode::MonteCarlo { samples, seed } => {
            let diff = union_volume_diff_mc(&plus, &minus, samples, seed)?;
            Ok(Measured {
                value: diff.value / (2.0 * h),
                std_error: diff.std_error / (2.0 * h),
            })
        }
    }
}

/// l-th central finite difference in s of the wall measure (l = 0, 1, 2).
///
/// The stencil must keep the parent ball radius real
/// (radius_squared_base + h_ij^2 + s >= 0); an empty in-plane disk inside
/// that range is a legitimate zero measure, not a domain violation. Monte
/// Carlo mode shares one draw across the stencil points.
pub fn wall_s_derivative_fd(
    w: &Wall,
    s: f64,
    order: usize,
    step: f64,
    mode: MeasureMode,
) -> Result<Measured> {
    if order > 2 {
        return Err(Error::Unsupported(format!(
            "s-derivative order {order} not supported (max 2)"
        )));
    }
    if order > 0 && (!step.is_finite() || step <= 0.0) {
        return Err(Error::StencilOutOfRange {
            what: format!("step h = {step} must be positive"),
        });
    }
    let stencil: Vec<(f64, f64)> = match order {
        0 => vec![(s, 1.0)],
        1 => vec![(s + step, 0.5 / step), (s - step, -0.5 / step)],
        _ => {
            let w2 = 1.0 / (step * step);
            vec![(s + step, w2), (s, -2.0 * w2), (s - step, w2)]
        }
    };
    let ball_rsq_base = w.radius_squared_base() + w.h() * w.h(); // r_i^2
    for (point, _) in &stencil {
        if ball_rsq_base + point < 0.0 {
            return Err(Error::StencilOutOfRange {
                what: format!(
                    "s = {point} makes the parent ball radius imaginary (r^2 = {})",
                    ball_rsq_base + point
                ),
            });
        }
    }

    match mode {
        MeasureMode::Exact => {
            let mut value = 0.0;
            for (point, weight) in &stencil {
                value += weight * wall_measure_exact(w, *point)?;
            }
            Ok(Measured::exact(value))
        }
        MeasureMode::MonteCarlo { samples, seed } => {
            let in_dim = w.in_plane_dim();
            if in_dim == 0 {
                return Err(Error::Unsupported(
                    "wall measure needs ambient dimension >= 2".into(),
                ));
            }
            let constraints = w.in_plane_halfspaces().to_vec();
            let feasible = w.feasible();
            let radii_sq: Vec<f64> = stencil.iter().map(|(p, _)| w.radius_sq(*p)).collect();
            let (value, std_error) = run_mc(samples, seed, |rng| {
                let z = sample_unit_ball(rng, in_dim);
                let mut acc = 0.0;
                for ((_, weight), rsq) in stencil.iter().zip(&radii_sq) {
                    if !feasible || *rsq <= 0.0 {
                        continue;
                    }
                    let r = rsq.sqrt();
                    let u: Vec<f64> = z.iter().map(|zi| zi * r).collect();
                    if constraints.iter().all(|hs| hs.signed_excess(&u) <= 0.0) {
                        acc += weight * ball_volume(in_dim, r);
                    }
                }
                acc
            })?;
            Ok(Measured { value, std_error })
        }
    }
}

/// One row of the interaction trace along a motion.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub t: f64,
    pub max_pair_count: usize,
    /// Sum of the per-pair counts; each nonempty triple intersection
    /// contributes once per pair it involves.
    pub total_count: usize,
    pub pair_counts: Vec<(usize, usize, usize)>,
}

/// Pair interaction counts at each grid time, computed in the motion's
/// ambient dimension with the given base radii.
pub fn triple_count_trace(
    motion: &Motion,
    radii: &[f64],
    t_grid: &[f64],
    mode: IntersectionMode,
    tol: &Tolerances,
) -> Result<Vec<TraceRow>> {
    if t_grid.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::Invalid {
            what: "t grid",
            why: "must be sorted ascending".into(),
        });
    }
    let n = motion.n_points();
    let mut rows = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let config = motion.config_at(t, radii)?;
        let mut pair_counts = Vec::new();
        let mut max_count = 0;
        let mut total = 0;
        for i in 0..n {
            for j in i + 1..n {
                let c = pair_interaction_count(&config, i, j, mode, tol)?;
                max_count = max_count.max(c);
                total += c;
                pair_counts.push((i, j, c));
            }
        }
        rows.push(TraceRow {
            t,
            max_pair_count: max_count,
            total_count: total,
            pair_counts,
        });
    }
    Ok(rows)
}

/// The volume defect V(q, s) - V(p, s) of a rearrangement with shared radii;
/// nonnegative defects are what the expansion inequality predicts.
pub fn kp_defect(
    p: &BallConfiguration,
    q: &BallConfiguration,
    s: f64,
    mode: MeasureMode,
) -> Result<Measured> {
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
    if p.radii() != q.radii() {
        return Err(Error::Invalid {
            what: "defect inputs",
            why: "both configurations must carry the same radii".into(),
        });
    }
    let fam_p = RadiusFamily::new(p.clone(), s)?;
    let fam_q = RadiusFamily::new(q.clone(), s)?;
    match mode {
        MeasureMode::Exact => {
            let (vq, vp) = match p.dim() {
                1 => (union_length_1d(&fam_q)?, union_length_1d(&fam_p)?),
                2 => (union_area_2d(&fam_q)?, union_area_2d(&fam_p)?),
                d => {
                    return Err(Error::Unsupported(format!(
                        "exact union measures need dimension <= 2, got {d}"
                    )))
                }
            };
            Ok(Measured::exact(vq - vp))
        }
        MeasureMode::MonteCarlo { samples, seed } => {
            Ok(union_volume_diff_mc(&fam_q, &fam_p, samples, seed)?.to_measured())
        }
    }
}

/// Shared-draw estimator of the s-derivative (central, step h) of
/// V(q, .) - V(p, .) for configurations already embedded where they should be
/// measured. Used by the cross-dimension identity check.
pub(crate) fn volume_diff_s_derivative_mc(
    p: &BallConfiguration,
    q: &BallConfiguration,
    s: f64,
    h: f64,
    samples: u64,
    seed: u64,
) -> Result<Measured> {
    let make = |cfg: &BallConfiguration, at: f64| RadiusFamily::new(cfg.clone(), at);
    let qp = UnionSampler::new(&make(q, s + h)?);
    let qm = UnionSampler::new(&make(q, s - h)?);
    let pp = UnionSampler::new(&make(p, s + h)?);
    let pm = UnionSampler::new(&make(p, s - h)?);
    let dim = p.dim();
    let (value, std_error) = run_mc(samples, seed, |rng| {
        let u: f64 = rng.gen();
        let z = sample_unit_ball(rng, dim);
        (qp.value(u, &z) - qm.value(u, &z) - pp.value(u, &z) + pm.value(u, &z)) / (2.0 * h)
    })?;
    Ok(Measured { value, std_error })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::motion::{lifted_monotone_motion, linear_motion};

    fn cfg(dim: usize, rows: &[&[f64]], radii: &[f64]) -> BallConfiguration {
        BallConfiguration::from_rows(
            dim,
            rows.iter().map(|r| r.to_vec()).collect(),
            radii.to_vec(),
        )
        .unwrap()
    }

    #[test]
    fn two_disk_separation_matches_closed_form() {
        // Disks at distance t with unit derivative: dV/dt = sqrt(4 - t^2),
        // the wall chord length.
        let p = cfg(2, &[&[0.0, 0.0], &[0.0, 0.0]], &[1.0, 1.0]);
        let q = cfg(2, &[&[0.0, 0.0], &[1.0, 0.0]], &[1.0, 1.0]);
        let m = linear_motion(&p, &q).unwrap();
        let got = csikos_derivative(&m, &[1.0, 1.0], 1.0, 0.0, MeasureMode::Exact).unwrap();
        assert!((got.value - 3.0_f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn fd_oracle_reproduces_chord_length_at_unit_distance() {
        // Center distance 0.5 + t with unit speed: at t = 0.5 the disks sit
        // one apart and the derivative is the chord length sqrt(3).
        let p = cfg(2, &[&[0.0, 0.0], &[0.5, 0.0]], &[1.0, 1.0]);
        let q = cfg(2, &[&[0.0, 0.0], &[1.5, 0.0]], &[1.0, 1.0]);
        let m = linear_motion(&p, &q).unwrap();
        let fd = total_volume_derivative_fd(&m, &[1.0, 1.0], 0.5, 0.0, 1e-5, MeasureMode::Exact)
            .unwrap();
        let expected = 3.0_f64.sqrt();
        assert!((fd.value - expected).abs() <= 1e-6 * expected, "fd {}", fd.value);
    }

    #[test]
    fn static_motion_has_zero_derivative() {
        let p = cfg(2, &[&[0.0, 0.0], &[0.9, 0.1]], &[1.0, 1.0]);
        let m = linear_motion(&p, &p).unwrap();
        let got = csikos_derivative(&m, &[1.0, 1.0], 0.5, 0.0, MeasureMode::Exact).unwrap();
        assert_eq!(got.value, 0.0);
        let fd = total_volume_derivative_fd(&m, &[1.0, 1.0], 0.5, 0.0, 1e-5, MeasureMode::Exact)
            .unwrap();
        assert!(fd.value.abs() < 1e-9);
    }

    #[test]
    fn formula_matches_fd_for_lifted_1d_pair() {
        let p = cfg(1, &[&[0.0], &[0.8]], &[1.0, 0.7]);
        let q = cfg(1, &[&[0.0], &[1.5]], &[1.0, 0.7]);
        let m = lifted_monotone_motion(&p, &q, &Tolerances::default()).unwrap();
        let radii = [1.0, 0.7];
        for &t in &[0.3, 0.5, 0.7] {
            let formula = csikos_derivative(&m, &radii, t, 0.0, MeasureMode::Exact).unwrap();
            let fd =
                total_volume_derivative_fd(&m, &radii, t, 0.0, 1e-5, MeasureMode::Exact).unwrap();
            assert!(
                (formula.value - fd.value).abs() <= 1e-5 * (1.0 + formula.value.abs()),
                "t = {t}: formula {} vs fd {}",
                formula.value,
                fd.value
            );
        }
    }

    #[test]
    fn coincident_points_rejected() {
        let p = cfg(2, &[&[0.0, 0.0], &[0.0, 0.0]], &[1.0, 1.0]);
        let m = linear_motion(&p, &p).unwrap();
        assert!(matches!(
            csikos_derivative(&m, &[1.0, 1.0], 0.5, 0.0, MeasureMode::Exact),
            Err(Error::CoincidentCenters { .. })
        ));
    }

    #[test]
    fn fd_step_must_stay_inside() {
        let p = cfg(2, &[&[0.0, 0.0], &[1.0, 0.0]], &[1.0, 1.0]);
        let q = cfg(2, &[&[0.0, 0.0], &[2.0, 0.0]], &[1.0, 1.0]);
        let m = linear_motion(&p, &q).unwrap();
        assert!(matches!(
            total_volume_derivative_fd(&m, &[1.0, 1.0], 0.0, 0.0, 1e-3, MeasureMode::Exact),
            Err(Error::StencilOutOfRange { .. })
        ));
    }

    #[test]
    fn wall_s_derivative_closed_form() {
        // Two unit disks at distance 1: L(s) = 2 sqrt(3/4 + s), so
        // L'(0) = 1/sqrt(3/4) = 2/sqrt(3).
        let f = RadiusFamily::new(cfg(2, &[&[0.0, 0.0], &[1.0, 0.0]], &[1.0, 1.0]), 0.0).unwrap();
        let w = wall(&f, 0, 1).unwrap();
        let l0 = wall_s_derivative_fd(&w, 0.0, 0, 1e-5, MeasureMode::Exact).unwrap();
        assert!((l0.value - 3.0_f64.sqrt()).abs() < 1e-12);
        let l1 = wall_s_derivative_fd(&w, 0.0, 1, 1e-5, MeasureMode::Exact).unwrap();
        assert!(
            (l1.value - 2.0 / 3.0_f64.sqrt()).abs() < 1e-6,
            "got {}",
            l1.value
        );
        let l2 = wall_s_derivative_fd(&w, 0.0, 2, 1e-4, MeasureMode::Exact).unwrap();
        // L''(s) = -(3/4 + s)^(-3/2) / 2.
        assert!((l2.value + 0.5 * (0.75_f64).powf(-1.5)).abs() < 1e-4);
    }

    #[test]
    fn wall_s_derivative_domain_check() {
        let f = RadiusFamily::new(cfg(2, &[&[0.0, 0.0], &[1.0, 0.0]], &[1.0, 1.0]), 0.0).unwrap();
        let w = wall(&f, 0, 1).unwrap();
        // Parent ball has r^2 = 1; stencil point below -1 is out of range.
        assert!(matches!(
            wall_s_derivative_fd(&w, -1.0, 1, 0.5, MeasureMode::Exact),
            Err(Error::StencilOutOfRange { .. })
        ));
        // Near the empty-disk edge the derivative is large but valid.
        let near = wall_s_derivative_fd(&w, -0.74, 1, 1e-3, MeasureMode::Exact).unwrap();
        assert!(near.value > 0.0);
    }

    #[test]
    fn kp_defect_two_disk_values() {
        let p = cfg(2, &[&[0.0, 0.0], &[1.0, 0.0]], &[1.0, 1.0]);
        let q = cfg(2, &[&[0.0, 0.0], &[2.0, 0.0]], &[1.0, 1.0]);
        let d = kp_defect(&p, &q, 0.0, MeasureMode::Exact).unwrap();
        let lens = 2.0 * std::f64::consts::PI / 3.0 - 3.0_f64.sqrt() / 2.0;
        assert!((d.value - lens).abs() < 1e-12);
        let zero = kp_defect(&p, &p, 0.0, MeasureMode::Exact).unwrap();
        assert_eq!(zero.value, 0.0);
    }

    #[test]
    fn kp_defect_rejects_mismatch() {
        let p = cfg(2, &[&[0.0, 0.0], &[1.0, 0.0]], &[1.0, 1.0]);
        let q = cfg(2, &[&[0.0, 0.0], &[2.0, 0.0]], &[1.0, 0.5]);
        assert!(kp_defect(&p, &q, 0.0, MeasureMode::Exact).is_err());
    }

    #[test]
    fn trace_is_constant_for_static_motion() {
        let p = cfg(
            2,
            &[&[0.0, 0.0], &[0.9, 0.0], &[0.45, 0.8]],
            &[1.0, 1.0, 1.0],
        );
        let m = linear_motion(&p, &p).unwrap();
        let rows = triple_count_trace(
            &m,
            &[1.0, 1.0, 1.0],
            &[0.0, 0.5, 1.0],
            IntersectionMode::Closed,
            &Tolerances::default(),
        )
        .unwrap();
        assert_eq!(rows.len(), 3);
        assert!(rows
            .windows(2)
            .all(|w| w[0].total_count == w[1].total_count));
    }

    #[test]
    fn trace_zero_for_disjoint_configuration() {
        let p = cfg(2, &[&[0.0, 0.0], &[5.0, 0.0], &[0.0, 5.0]], &[1.0; 3]);
        let q = cfg(2, &[&[0.0, 0.0], &[6.0, 0.0], &[0.0, 6.0]], &[1.0; 3]);
        let m = lifted_monotone_motion(&p, &q, &Tolerances::default()).unwrap();
        let rows = triple_count_trace(
            &m,
            &[1.0; 3],
            &[0.0, 0.5, 1.0],
            IntersectionMode::Closed,
            &Tolerances::default(),
        )
        .unwrap();
        assert!(rows.iter().all(|r| r.total_count == 0));
    }
}
