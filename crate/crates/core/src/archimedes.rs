//! The Archimedes-type lifting identity for truncated polytopes and the
//! cross-dimension identity that chains it with the wall-sum derivative:
//! the k-th s-derivative of the lifted volume equals pi^k times the measure
//! of the section by the distinguished subspace.

use crate::arc_polygon::clip_disk_by_halfplanes;
use crate::config::{BallConfiguration, Point, RadiusFamily};
use crate::diagram::Halfspace;
use crate::dynamics::volume_diff_s_derivative_mc;
use crate::error::{Error, Result};
use crate::linalg;
use crate::mc::{run_mc, sample_unit_ball, Measured};
use crate::measure::{ball_volume, union_length_1d};

/// A truncated polytope in E^{n+2k}: a ball about `center` cut by halfspaces
/// whose boundaries are all orthogonal to the n-dimensional subspace
/// S = center + span(e_1, ..., e_n).
#[derive(Debug, Clone, PartialEq)]
pub struct ArchimedesInstance {
    n: usize,
    k: usize,
    center: Point,
    base_radius: f64,
    halfspaces: Vec<Halfspace>,
}

impl ArchimedesInstance {
    /// Validates the orthogonality structure: every halfspace normal must lie
    /// in the span of the first n coordinates.
    pub fn new(
        n: usize,
        k: usize,
        center: Point,
        base_radius: f64,
        halfspaces: Vec<Halfspace>,
    ) -> Result<Self> {
        if n < 1 || k < 1 {
            return Err(Error::Invalid {
                what: "lifting instance",
                why: format!("need n >= 1 and k >= 1, got n = {n}, k = {k}"),
            });
        }
        let ambient = n + 2 * k;
        if center.dim() != ambient {
            return Err(Error::Mismatch {
                what: "center dimension",
                left: center.dim(),
                right: ambient,
            });
        }
        if !(base_radius > 0.0 && base_radius.is_finite()) {
            return Err(Error::Invalid {
                what: "lifting instance",
                why: format!("base radius {base_radius} must be positive"),
            });
        }
        for (idx, hs) in halfspaces.iter().enumerate() {
            if hs.dim() != ambient {
                return Err(Error::Mismatch {
                    what: "halfspace dimension",
                    left: hs.dim(),
                    right: ambient,
                });
            }
            let off_span: f64 = hs.normal()[n..].iter().map(|x| x * x).sum();
            if off_span.sqrt() > 1e-12 {
                return Err(Error::Invalid {
                    what: "lifting instance",
                    why: format!(
                        "halfspace {idx} normal leaves the distinguished subspace \
                         (off-span norm {:.3e})",
                        off_span.sqrt()
                    ),
                });
            }
        }
        Ok(ArchimedesInstance {
            n,
            k,
            center,
            base_radius,
            halfspaces,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn ambient_dim(&self) -> usize {
        self.n + 2 * self.k
    }

    pub fn center(&self) -> &Point {
        &self.center
    }

    pub fn base_radius(&self) -> f64 {
        self.base_radius
    }

    pub fn halfspaces(&self) -> &[Halfspace] {
        &self.halfspaces
    }

    fn radius_sq(&self, s: f64) -> f64 {
        self.base_radius * self.base_radius + s
    }

    /// The halfspaces restricted to S in its own coordinates (origin at the
    /// center); normals stay unit because they already lie in S.
    fn section_halfspaces(&self) -> Vec<Halfspace> {
        self.halfspaces
            .iter()
            .map(|hs| {
                let g = hs.normal()[..self.n].to_vec();
                let b = hs.offset() - linalg::dot(hs.normal(), self.center.coords());
                Halfspace::new(g, b).expect("normal in span is unit")
            })
            .collect()
    }
}

/// Verdict of one lifting-identity check: the finite-difference derivative of
/// the lifted volume against pi^k times the section measure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArchimedesReport {
    pub lhs: Measured,
    pub rhs: Measured,
    pub pass: bool,
}

/// Tolerance floor used when both sides of a comparison are exact.
pub const EXACT_PAIR_TOL: f64 = 1e-6;

fn pass_with_floor(lhs: &Measured, rhs: &Measured) -> bool {
    let sigma = (lhs.std_error * lhs.std_error + rhs.std_error * rhs.std_error).sqrt();
    let bound = (3.0 * sigma).max(EXACT_PAIR_TOL * (1.0 + rhs.value.abs()));
    (lhs.value - rhs.value).abs() <= bound
}

/// Checks d^k/ds^k Vol(P(s)) = pi^k Vol_n(S ∩ P(s)) on one instance.
///
/// The derivative side uses a central stencil of step `h`; with no halfspaces
/// it differentiates the closed-form ball volume, otherwise it runs Monte
/// Carlo with one shared draw per sample across the stencil points. The
/// section side is exact for n <= 2 and Monte Carlo above.
pub fn archimedes_check(
    inst: &ArchimedesInstance,
    s: f64,
    h: f64,
    samples: u64,
    seed: u64,
) -> Result<ArchimedesReport> {
    if !(inst.k == 1 || inst.k == 2) {
        return Err(Error::Unsupported(format!(
            "lifting check supports k in {{1, 2}}, got {}",
            inst.k
        )));
    }
    if !h.is_finite() || h <= 0.0 {
        return Err(Error::StencilOutOfRange {
            what: format!("step h = {h} must be positive"),
        });
    }
    let stencil: Vec<(f64, f64)> = if inst.k == 1 {
        vec![(s + h, 0.5 / h), (s - h, -0.5 / h)]
    } else {
        let w2 = 1.0 / (h * h);
        vec![(s + h, w2), (s, -2.0 * w2), (s - h, w2)]
    };
    for (point, _) in &stencil {
        if inst.radius_sq(*point) <= 0.0 {
            return Err(Error::StencilOutOfRange {
                what: format!("s = {point} makes the lifted ball radius nonpositive"),
            });
        }
    }

    let ambient = inst.ambient_dim();
    let lhs = if inst.halfspaces.is_empty() {
        let mut value = 0.0;
        for (point, weight) in &stencil {
            value += weight * ball_volume(ambient, inst.radius_sq(*point).sqrt());
        }
        Measured::exact(value)
    } else {
        let center = inst.center.coords().to_vec();
        let halfspaces = inst.halfspaces.clone();
        let radii: Vec<f64> = stencil
            .iter()
            .map(|(p, _)| inst.radius_sq(*p).sqrt())
            .collect();
        let (value, std_error) = run_mc(samples, seed, |rng| {
            let z = sample_unit_ball(rng, ambient);
            let mut acc = 0.0;
            for ((_, weight), r) in stencil.iter().zip(&radii) {
                let x = linalg::axpy(&center, *r, &z);
                if halfspaces.iter().all(|hs| hs.signed_excess(&x) <= 0.0) {
                    acc += weight * ball_volume(ambient, *r);
                }
            }
            acc
        })?;
        Measured { value, std_error }
    };

    let rhs_measure = section_measure(inst, s, samples, seed ^ 0xA5A5_A5A5_A5A5_A5A5)?;
    let pi_k = std::f64::consts::PI.powi(inst.k as i32);
    let rhs = Measured {
        value: pi_k * rhs_measure.value,
        std_error: pi_k * rhs_measure.std_error,
    };

    Ok(ArchimedesReport {
        lhs,
        rhs,
        pass: pass_with_floor(&lhs, &rhs),
    })
}

/// Vol_n of the section S ∩ P(s) in section coordinates.
fn section_measure(inst: &ArchimedesInstance, s: f64, samples: u64, seed: u64) -> Result<Measured> {
    let rsq = inst.radius_sq(s);
    if rsq <= 0.0 {
        return Ok(Measured::exact(0.0));
    }
    let r = rsq.sqrt();
    let constraints = inst.section_halfspaces();
    match inst.n {
        1 => {
            let mut lo = -r;
            let mut hi = r;
            for hs in &constraints {
                let g = hs.normal()[0];
                if g > 0.0 {
                    hi = hi.min(hs.offset() / g);
                } else {
                    lo = lo.max(hs.offset() / g);
                }
            }
            Ok(Measured::exact((hi - lo).max(0.0)))
        }
        2 => {
            let region = clip_disk_by_halfplanes([0.0, 0.0], r, &constraints);
            Ok(Measured::exact(region.area()))
        }
        n => {
            let vol = ball_volume(n, r);
            let (value, std_error) = run_mc(samples, seed, |rng| {
                let z = sample_unit_ball(rng, n);
                let u = linalg::scale(&z, r);
                if constraints.iter().all(|hs| hs.signed_excess(&u) <= 0.0) {
                    vol
                } else {
                    0.0
                }
            })?;
            Ok(Measured { value, std_error })
        }
    }
}

/// Verdict of the cross-dimension identity check at (d, k) = (1, 1):
/// pi (V_1(q, s) - V_1(p, s)) against the s-derivative of the E^3 volume
/// difference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProofChainReport {
    pub lhs: Measured,
    pub rhs: Measured,
    pub pass: bool,
}

/// Checks pi^k (V_d(q, s) - V_d(p, s)) = d^k/ds^k (V_{d+2k}(q, s) - V_{d+2k}(p, s))
/// at desk scale d = 1, k = 1: exact interval unions on the left, a paired
/// common-random-numbers finite difference of Monte Carlo E^3 volumes on the
/// right.
#[allow(clippy::too_many_arguments)]
pub fn proof_chain_check(
    p: &BallConfiguration,
    q: &BallConfiguration,
    s: f64,
    k: usize,
    h: f64,
    samples: u64,
    seed: u64,
) -> Result<ProofChainReport> {
    if p.dim() != 1 || q.dim() != 1 || k != 1 {
        return Err(Error::Unsupported(format!(
            "cross-dimension identity is implemented for d = 1, k = 1 \
             (got d = {}, k = {k})",
            p.dim()
        )));
    }
    if p.len() != q.len() {
        return Err(Error::Mismatch {
            what: "point counts",
            left: p.len(),
            right: q.len(),
        });
    }
    if p.radii() != q.radii() {
        return Err(Error::Invalid {
            what: "identity inputs",
            why: "both configurations must carry the same radii".into(),
        });
    }
    if !h.is_finite() || h <= 0.0 {
        return Err(Error::StencilOutOfRange {
            what: format!("step h = {h} must be positive"),
        });
    }
    // The stencil at s - h must keep every radius real.
    for cfg in [p, q] {
        for &r in cfg.radii() {
            if r * r + s - h < 0.0 {
                return Err(Error::StencilOutOfRange {
                    what: format!("s - h = {} makes radius {r} imaginary", s - h),
                });
            }
        }
    }

    let vq = union_length_1d(&RadiusFamily::new(q.clone(), s)?)?;
    let vp = union_length_1d(&RadiusFamily::new(p.clone(), s)?)?;
    let lhs = Measured::exact(std::f64::consts::PI * (vq - vp));

    let lifted_p = p.embedded(3)?;
    let lifted_q = q.embedded(3)?;
    let rhs = volume_diff_s_derivative_mc(&lifted_p, &lifted_q, s, h, samples, seed)?;

    let sigma = rhs.std_error.max(1e-12);
    Ok(ProofChainReport {
        lhs,
        rhs,
        pass: (lhs.value - rhs.value).abs() <= 3.0 * sigma,
    })
}
