//! Seeded Monte Carlo measures with standard errors.
//!
//! Reproducibility contract: every sample index k draws from its own ChaCha8
//! stream keyed by (seed, k), and chunk partial sums are reduced in chunk
//! order, so results are bit-identical for any worker-thread count.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::config::{RadiusFamily, Tolerances};
use crate::diagram::{cell_contains, TruncatedCell, Wall};
use crate::error::{Error, Result};
use crate::linalg;
use crate::measure::ball_volume;

/// Samples per work chunk; fixed so the reduction order never depends on the
/// thread count.
const MC_CHUNK: u64 = 8192;

/// A Monte Carlo value with its standard error and provenance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MCEstimate {
    pub value: f64,
    pub std_error: f64,
    pub samples: u64,
    pub seed: u64,
}

impl MCEstimate {
    pub fn to_measured(self) -> Measured {
        Measured {
            value: self.value,
            std_error: self.std_error,
        }
    }
}

/// A numeric result paired with its error bound; exact routes carry zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Measured {
    pub value: f64,
    pub std_error: f64,
}

impl Measured {
    pub fn exact(value: f64) -> Self {
        Measured {
            value,
            std_error: 0.0,
        }
    }
}

/// Runs `f` once per sample index with a per-index generator and returns
/// (mean, standard error of the mean).
pub(crate) fn run_mc<F>(samples: u64, seed: u64, f: F) -> Result<(f64, f64)>
where
    F: Fn(&mut ChaCha8Rng) -> f64 + Sync,
{
    if samples == 0 {
        return Err(Error::ZeroSamples);
    }
    let chunks = samples.div_ceil(MC_CHUNK);
    let partials: Vec<(f64, f64)> = (0..chunks)
        .into_par_iter()
        .map(|ci| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let lo = ci * MC_CHUNK;
            let hi = (lo + MC_CHUNK).min(samples);
            let mut sum = 0.0;
            let mut sumsq = 0.0;
            for k in lo..hi {
                rng.set_stream(k);
                rng.set_word_pos(0);
                let y = f(&mut rng);
                sum += y;
                sumsq += y * y;
            }
            (sum, sumsq)
        })
        .collect();
    let mut sum = 0.0;
    let mut sumsq = 0.0;
    for (a, b) in partials {
        sum += a;
        sumsq += b;
    }
    let n = samples as f64;
    let mean = sum / n;
    let std_error = if samples > 1 {
        let var = ((sumsq - sum * sum / n) / (n - 1.0)).max(0.0);
        (var / n).sqrt()
    } else {
        0.0
    };
    Ok((mean, std_error))
}

/// Uniform point of the unit ball in R^dim: Gaussian direction scaled by
/// U^(1/dim). Rejection-free and dimension-generic.
pub(crate) fn sample_unit_ball(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    loop {
        let g: Vec<f64> = (0..dim)
            .map(|_| rng.sample::<f64, _>(StandardNormal))
            .collect();
        let n = linalg::norm(&g);
        if n > 1e-12 {
            let u: f64 = rng.gen::<f64>();
            let r = u.powf(1.0 / dim as f64);
            return linalg::scale(&g, r / n);
        }
    }
}

/// Precomputed tables for the union-of-balls estimator: pick a ball with
/// probability proportional to its volume, sample inside it, and weight by
/// the reciprocal of the multiplicity.
pub(crate) struct UnionSampler {
    dim: usize,
    centers: Vec<Vec<f64>>,
    radii: Vec<f64>,
    radius_sq: Vec<f64>,
    cumulative: Vec<f64>,
    total_weight: f64,
}

impl UnionSampler {
    pub(crate) fn new(fam: &RadiusFamily) -> Self {
        let config = fam.config();
        let dim = config.dim();
        let n = config.len();
        let mut cumulative = Vec::with_capacity(n);
        let mut acc = 0.0;
        for i in 0..n {
            acc += ball_volume(dim, fam.radius(i));
            cumulative.push(acc);
        }
        UnionSampler {
            dim,
            centers: (0..n).map(|i| config.center(i).coords().to_vec()).collect(),
            radii: (0..n).map(|i| fam.radius(i)).collect(),
            radius_sq: (0..n).map(|i| fam.radius_sq(i)).collect(),
            cumulative,
            total_weight: acc,
        }
    }

    pub(crate) fn dim(&self) -> usize {
        self.dim
    }

    /// Per-sample estimator value for a shared draw (u_pick, unit-ball point).
    pub(crate) fn value(&self, u_pick: f64, z: &[f64]) -> f64 {
        if self.total_weight <= 0.0 {
            return 0.0; // all radii zero: the union has measure zero
        }
        let target = u_pick * self.total_weight;
        let mut b = self.cumulative.len() - 1;
        for (i, c) in self.cumulative.iter().enumerate() {
            if target < *c {
                b = i;
                break;
            }
        }
        let x = linalg::axpy(&self.centers[b], self.radii[b], z);
        let mut multiplicity = 0usize;
        for (c, rsq) in self.centers.iter().zip(&self.radius_sq) {
            if linalg::dist_sq(&x, c) <= *rsq {
                multiplicity += 1;
            }
        }
        // The generating ball contains x up to rounding at its boundary.
        self.total_weight / multiplicity.max(1) as f64
    }
}

/// Monte Carlo volume of the union of balls at the family's parameter.
pub fn union_volume_mc(fam: &RadiusFamily, samples: u64, seed: u64) -> Result<MCEstimate> {
    let sampler = UnionSampler::new(fam);
    let dim = sampler.dim();
    let (value, std_error) = run_mc(samples, seed, |rng| {
        let u: f64 = rng.gen();
        let z = sample_unit_ball(rng, dim);
        sampler.value(u, &z)
    })?;
    Ok(MCEstimate {
        value,
        std_error,
        samples,
        seed,
    })
}

/// Paired estimate of V(a) - V(b) under common random numbers: both unions
/// are evaluated on the same draws, which cancels most of the variance when
/// the configurations are close.
pub fn union_volume_diff_mc(
    fam_a: &RadiusFamily,
    fam_b: &RadiusFamily,
    samples: u64,
    seed: u64,
) -> Result<MCEstimate> {
    if fam_a.config().dim() != fam_b.config().dim() {
        return Err(Error::Mismatch {
            what: "dimensions",
            left: fam_a.config().dim(),
            right: fam_b.config().dim(),
        });
    }
    let sa = UnionSampler::new(fam_a);
    let sb = UnionSampler::new(fam_b);
    let dim = sa.dim();
    let (value, std_error) = run_mc(samples, seed, |rng| {
        let u: f64 = rng.gen();
        let z = sample_unit_ball(rng, dim);
        sa.value(u, &z) - sb.value(u, &z)
    })?;
    Ok(MCEstimate {
        value,
        std_error,
        samples,
        seed,
    })
}

/// Monte Carlo wall measure at parameter s: uniform samples of the in-plane
/// disk accepted by the in-plane constraints. An empty disk yields an exact
/// zero estimate rather than an error.
pub fn wall_volume_mc(w: &Wall, s: f64, samples: u64, seed: u64) -> Result<MCEstimate> {
    if samples == 0 {
        return Err(Error::ZeroSamples);
    }
    let in_dim = w.in_plane_dim();
    if in_dim == 0 {
        return Err(Error::Unsupported(
            "wall measure needs ambient dimension >= 2".into(),
        ));
    }
    let rsq = w.radius_sq(s);
    if !w.feasible() || rsq <= 0.0 {
        return Ok(MCEstimate {
            value: 0.0,
            std_error: 0.0,
            samples,
            seed,
        });
    }
    let r = rsq.sqrt();
    let disk_volume = ball_volume(in_dim, r);
    let constraints = w.in_plane_halfspaces().to_vec();
    let (value, std_error) = run_mc(samples, seed, |rng| {
        let z = sample_unit_ball(rng, in_dim);
        let u = linalg::scale(&z, r);
        if constraints.iter().all(|hs| hs.signed_excess(&u) <= 0.0) {
            disk_volume
        } else {
            0.0
        }
    })?;
    Ok(MCEstimate {
        value,
        std_error,
        samples,
        seed,
    })
}

/// Monte Carlo volume of a truncated cell: uniform samples of the ball
/// accepted by the cell's halfspaces.
pub fn truncated_cell_volume_mc(
    cell: &TruncatedCell,
    samples: u64,
    seed: u64,
) -> Result<MCEstimate> {
    if samples == 0 {
        return Err(Error::ZeroSamples);
    }
    let rsq = cell.radius_sq();
    if rsq <= 0.0 {
        return Ok(MCEstimate {
            value: 0.0,
            std_error: 0.0,
            samples,
            seed,
        });
    }
    let dim = cell.center().dim();
    let r = rsq.sqrt();
    let vol = ball_volume(dim, r);
    let center = cell.center().coords().to_vec();
    let tol = Tolerances::default();
    let (value, std_error) = run_mc(samples, seed, |rng| {
        let z = sample_unit_ball(rng, dim);
        let x = crate::config::Point::new(linalg::axpy(&center, r, &z));
        if cell_contains(cell.cell(), &x, &tol) {
            vol
        } else {
            0.0
        }
    })?;
    Ok(MCEstimate {
        value,
        std_error,
        samples,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::BallConfiguration;
    use crate::diagram::{truncated_cell, wall};
    use crate::measure::union_area_2d;
    use std::f64::consts::PI;

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
    fn single_ball_is_exact() {
        let f = fam(3, &[&[0.2, -0.1, 0.4]], &[1.0], 0.0);
        let est = union_volume_mc(&f, 2000, 7).unwrap();
        assert!((est.value - 4.0 * PI / 3.0).abs() < 1e-12);
        assert!(est.std_error < 1e-9);
    }

    #[test]
    fn duplicated_ball_matches_single() {
        let f = fam(3, &[&[0.2, -0.1, 0.4], &[0.2, -0.1, 0.4]], &[1.0, 1.0], 0.0);
        let est = union_volume_mc(&f, 2000, 7).unwrap();
        assert!((est.value - 4.0 * PI / 3.0).abs() < 1e-12);
    }

    #[test]
    fn two_disks_match_exact_area() {
        let f = fam(2, &[&[0.0, 0.0], &[1.0, 0.0]], &[1.0, 1.0], 0.0);
        let exact = union_area_2d(&f).unwrap();
        let est = union_volume_mc(&f, 200_000, 42).unwrap();
        assert!(
            (est.value - exact).abs() <= 3.0 * est.std_error,
            "mc {} vs exact {} (3 sigma = {})",
            est.value,
            exact,
            3.0 * est.std_error
        );
    }

    #[test]
    fn zero_samples_rejected() {
        let f = fam(2, &[&[0.0, 0.0]], &[1.0], 0.0);
        assert!(matches!(union_volume_mc(&f, 0, 0), Err(Error::ZeroSamples)));
    }

    #[test]
    fn wall_of_two_unit_balls_in_3d() {
        let f = fam(3, &[&[0.0; 3], &[1.0, 0.0, 0.0]], &[1.0, 1.0], 0.0);
        let w = wall(&f, 0, 1).unwrap();
        let est = wall_volume_mc(&w, 0.0, 5000, 3).unwrap();
        // No other constraints: every sample accepted, exact disk area up to
        // summation rounding.
        assert!((est.value - PI * 0.75).abs() < 1e-12);
        assert!(est.std_error < 1e-6);
    }

    #[test]
    fn empty_wall_estimates_zero() {
        let f = fam(3, &[&[0.0; 3], &[9.0, 0.0, 0.0]], &[1.0, 1.0], 0.0);
        let w = wall(&f, 0, 1).unwrap();
        let est = wall_volume_mc(&w, 0.0, 100, 3).unwrap();
        assert_eq!(est.value, 0.0);
        assert_eq!(est.std_error, 0.0);
    }

    #[test]
    fn wall_mc_matches_exact_length_2d() {
        let f = fam(
            2,
            &[&[0.0, 0.0], &[1.0, 0.0], &[0.5, 0.9]],
            &[1.0, 1.0, 1.0],
            0.0,
        );
        let w = wall(&f, 0, 1).unwrap();
        let exact = crate::measure::wall_measure_exact(&w, 0.0).unwrap();
        let est = wall_volume_mc(&w, 0.0, 200_000, 11).unwrap();
        assert!((est.value - exact).abs() <= 3.0 * est.std_error.max(1e-12));
    }

    #[test]
    fn lone_cell_is_whole_ball() {
        let f = fam(3, &[&[0.0; 3]], &[1.2], 0.0);
        let cell = truncated_cell(&f, 0).unwrap();
        let est = truncated_cell_volume_mc(&cell, 4000, 5).unwrap();
        assert!((est.value - ball_volume(3, 1.2)).abs() < 1e-12);
    }

    #[test]
    fn dominated_cell_is_empty() {
        // A tiny ball deep inside a much larger one never attains minimal power.
        let f = fam(2, &[&[0.0, 0.0], &[0.1, 0.0]], &[4.0, 0.2], 0.0);
        let cell = truncated_cell(&f, 1).unwrap();
        let est = truncated_cell_volume_mc(&cell, 50_000, 9).unwrap();
        assert!(est.value.abs() <= 3.0 * est.std_error.max(1e-12));
    }

    #[test]
    fn cells_sum_to_union() {
        let f = fam(2, &[&[0.0, 0.0], &[1.0, 0.0]], &[1.0, 1.0], 0.0);
        let exact = union_area_2d(&f).unwrap();
        let mut total = 0.0;
        let mut var = 0.0;
        for i in 0..2 {
            let cell = truncated_cell(&f, i).unwrap();
            let est = truncated_cell_volume_mc(&cell, 200_000, 100 + i as u64).unwrap();
            total += est.value;
            var += est.std_error * est.std_error;
        }
        assert!((total - exact).abs() <= 3.0 * var.sqrt());
    }

    #[test]
    fn determinism_across_thread_counts() {
        let f = fam(
            3,
            &[&[0.0; 3], &[0.9, 0.2, -0.1], &[0.1, 1.0, 0.3]],
            &[1.0, 0.8, 1.1],
            0.1,
        );
        let run = |threads: usize| {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap();
            pool.install(|| union_volume_mc(&f, 100_000, 12345).unwrap())
        };
        let one = run(1);
        let two = run(2);
        let eight = run(8);
        assert_eq!(one.value.to_bits(), two.value.to_bits());
        assert_eq!(one.std_error.to_bits(), two.std_error.to_bits());
        assert_eq!(one.value.to_bits(), eight.value.to_bits());
        assert_eq!(one.std_error.to_bits(), eight.std_error.to_bits());
    }

    #[test]
    fn paired_difference_is_tight_for_nearby_configs() {
        let a = fam(2, &[&[0.0, 0.0], &[1.0, 0.0]], &[1.0, 1.0], 0.0);
        let b = fam(2, &[&[0.0, 0.0], &[1.001, 0.0]], &[1.0, 1.0], 0.0);
        let d = union_volume_diff_mc(&a, &b, 100_000, 4).unwrap();
        let exact = union_area_2d(&a).unwrap() - union_area_2d(&b).unwrap();
        assert!((d.value - exact).abs() <= 3.0 * d.std_error.max(1e-9));
        // Pairing should beat the independent-difference error by a wide margin.
        let ua = union_volume_mc(&a, 100_000, 4).unwrap();
        assert!(d.std_error < ua.std_error);
    }
}
