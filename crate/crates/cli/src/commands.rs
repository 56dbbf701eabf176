//! One function per subcommand. Each returns a report, an optional CSV
//! artifact, and the exit code mandated by the contract: 0 pass, 1 finding,
//! with parse/domain/precondition failures surfacing as `CliError`.

use std::result::Result;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use kp_core::random::{independent_pair, random_archimedes_instance, scaling_pair, InstanceBox};
use kp_core::*;

use crate::instance::{render_instance_toml, sha256_hex, LoadedInstance};
use crate::report::{num_cell, CheckRecord, CsvArtifact, VerificationReport};
use crate::CliError;

pub struct CommandOutcome {
    pub report: VerificationReport,
    pub artifact: Option<CsvArtifact>,
    pub exit_code: u8,
}

const SEED_MIX: u64 = 0x9E37_79B9_7F4A_7C15;

fn sub_seed(seed: u64, lane: u64) -> u64 {
    seed ^ lane.wrapping_mul(SEED_MIX)
}

/// Exact union measure in dimension 1 or 2.
fn exact_union_measure(fam: &RadiusFamily) -> Result<f64, CliError> {
    match fam.config().dim() {
        1 => Ok(union_length_1d(fam)?),
        2 => Ok(union_area_2d(fam)?),
        d => Err(CliError::Domain(format!(
            "exact mode supports dimension 1 and 2, got {d}"
        ))),
    }
}

pub fn cmd_volume(
    inst: &LoadedInstance,
    exact: bool,
    s: f64,
    samples: u64,
    seed: u64,
) -> Result<CommandOutcome, CliError> {
    let fam = RadiusFamily::new(inst.p.clone(), s)?;
    let mut report = VerificationReport::new("volume", inst.digest.clone(), seed);
    if exact {
        let v = exact_union_measure(&fam)?;
        report.push(CheckRecord::value_with_error("union_measure", v, 0.0));
    } else {
        let est = union_volume_mc(&fam, samples, seed)?;
        report.push(CheckRecord::value_with_error(
            "union_measure",
            est.value,
            est.std_error,
        ));
        report.push(CheckRecord::info("samples", est.samples as f64));
    }
    Ok(CommandOutcome {
        report,
        artifact: None,
        exit_code: 0,
    })
}

pub fn cmd_check_condition(
    inst: &LoadedInstance,
    mode: IntersectionMode,
    seed: u64,
) -> Result<CommandOutcome, CliError> {
    let tol = Tolerances::default();
    let rep = theorem_condition_holds(&inst.p, mode, &tol)?;
    let mut report = VerificationReport::new("check-condition", inst.digest.clone(), seed);
    report.push(CheckRecord::compare(
        "max_pair_count",
        rep.max_count as f64,
        rep.bound as f64,
        0.0,
        rep.holds,
    ));
    for (i, j, count) in &rep.pair_counts {
        report.push(CheckRecord::compare(
            format!("pair_{i}_{j}"),
            *count as f64,
            rep.bound as f64,
            0.0,
            *count <= rep.bound,
        ));
    }
    let exit_code = if rep.holds { 0 } else { 1 };
    Ok(CommandOutcome {
        report,
        artifact: None,
        exit_code,
    })
}

pub fn cmd_verify_kp(
    inst: &LoadedInstance,
    exact: bool,
    s: f64,
    samples: u64,
    seed: u64,
) -> Result<CommandOutcome, CliError> {
    let q = inst.require_pair()?;
    let tol = Tolerances::default();
    if let Some((i, j, before, after)) = contraction_witness(&inst.p, q, &tol)? {
        return Err(CliError::Precondition(format!(
            "not an expansion: pair ({i},{j}) contracts from {before} to {after}"
        )));
    }
    let mut report = VerificationReport::new("verify-kp", inst.digest.clone(), seed);
    report.push(CheckRecord::info("expansion_holds", 1.0));

    // The bounded-interaction hypothesis on the start configuration is
    // reported for context; the verdict is the defect sign alone.
    let cond = theorem_condition_holds(&inst.p, IntersectionMode::Closed, &tol)?;
    report.push(CheckRecord {
        name: "hypothesis_max_count".into(),
        lhs: cond.max_count as f64,
        rhs: Some(cond.bound as f64),
        error_bound: 0.0,
        pass: true,
    });

    let (defect, bound) = if exact {
        let d = kp_defect(&inst.p, q, s, MeasureMode::Exact)?;
        (d, 1e-9)
    } else {
        let d = kp_defect(&inst.p, q, s, MeasureMode::MonteCarlo { samples, seed })?;
        let b = 3.0 * d.std_error;
        (d, b)
    };
    let pass = defect.value >= -bound;
    report.push(CheckRecord::compare(
        "kp_defect_nonnegative",
        defect.value,
        0.0,
        bound,
        pass,
    ));
    Ok(CommandOutcome {
        report,
        artifact: None,
        exit_code: if pass { 0 } else { 1 },
    })
}

pub enum MotionChoice {
    Lifted,
    Linear,
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_csikos_check(
    inst: &LoadedInstance,
    motion_choice: MotionChoice,
    exact: bool,
    t_grid: usize,
    s: f64,
    h: f64,
    samples: u64,
    seed: u64,
) -> Result<CommandOutcome, CliError> {
    let q = inst.require_pair()?;
    let tol = Tolerances::default();
    let motion = match motion_choice {
        MotionChoice::Lifted => lifted_monotone_motion(&inst.p, q, &tol)?,
        MotionChoice::Linear => linear_motion(&inst.p, q)?,
    };
    let dim = motion.ambient_dim();
    if exact && dim != 2 {
        return Err(CliError::Domain(format!(
            "exact mode needs ambient dimension 2 (lift a 1D pair or use --motion linear \
             on a 2D pair); motion lives in dimension {dim}"
        )));
    }
    if t_grid == 0 {
        return Err(CliError::Domain("--t-grid must be at least 1".into()));
    }
    let radii = inst.p.radii().to_vec();
    let grid: Vec<f64> = if t_grid == 1 {
        vec![0.5]
    } else {
        (0..t_grid)
            .map(|j| h + (1.0 - 2.0 * h) * j as f64 / (t_grid - 1) as f64)
            .collect()
    };

    let mut report = VerificationReport::new("csikos-check", inst.digest.clone(), seed);
    let mut artifact = CsvArtifact::new(vec!["t", "volume", "dvdt_formula", "dvdt_fd", "abs_diff"]);
    for (row, &t) in grid.iter().enumerate() {
        let lane = row as u64;
        let (volume, formula, fd) = if exact {
            let fam = RadiusFamily::new(motion.config_at(t, &radii)?, s)?;
            let v = union_area_2d(&fam)?;
            let formula = csikos_derivative(&motion, &radii, t, s, MeasureMode::Exact)?;
            let fd = total_volume_derivative_fd(&motion, &radii, t, s, h, MeasureMode::Exact)?;
            (Measured::exact(v), formula, fd)
        } else {
            let fam = RadiusFamily::new(motion.config_at(t, &radii)?, s)?;
            let v = union_volume_mc(&fam, samples, sub_seed(seed, 3 * lane))?;
            let formula = csikos_derivative(
                &motion,
                &radii,
                t,
                s,
                MeasureMode::MonteCarlo {
                    samples,
                    seed: sub_seed(seed, 3 * lane + 1),
                },
            )?;
            let fd = total_volume_derivative_fd(
                &motion,
                &radii,
                t,
                s,
                h,
                MeasureMode::MonteCarlo {
                    samples,
                    seed: sub_seed(seed, 3 * lane + 2),
                },
            )?;
            (v.to_measured(), formula, fd)
        };
        let diff = (formula.value - fd.value).abs();
        let bound = if exact {
            1e-5 * (1.0 + formula.value.abs())
        } else {
            3.0 * (formula.std_error.powi(2) + fd.std_error.powi(2)).sqrt()
        };
        report.push(CheckRecord::compare(
            format!("dvdt_at_t={t:.6}"),
            formula.value,
            fd.value,
            bound,
            diff <= bound,
        ));
        artifact.push_row(vec![
            num_cell(t),
            num_cell(volume.value),
            num_cell(formula.value),
            num_cell(fd.value),
            num_cell(diff),
        ]);
    }
    let exit_code = if report.overall_pass() { 0 } else { 1 };
    Ok(CommandOutcome {
        report,
        artifact: Some(artifact),
        exit_code,
    })
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_archimedes(
    n: usize,
    k: usize,
    m: usize,
    r0: f64,
    s: f64,
    h: f64,
    samples: u64,
    seed: u64,
) -> Result<CommandOutcome, CliError> {
    if !(1..=2).contains(&n) || !(1..=2).contains(&k) {
        return Err(CliError::Domain(format!(
            "supported ranges are n in {{1,2}} and k in {{1,2}}; got n = {n}, k = {k}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inst = random_archimedes_instance(&mut rng, n, k, m, r0)?;
    let check = archimedes_check(&inst, s, h, samples, seed)?;
    let digest = sha256_hex(
        format!("archimedes n={n} k={k} m={m} r0={r0} s={s} h={h} samples={samples} seed={seed}")
            .as_bytes(),
    );
    let mut report = VerificationReport::new("archimedes", digest, seed);
    let sigma = (check.lhs.std_error.powi(2) + check.rhs.std_error.powi(2)).sqrt();
    let bound = (3.0 * sigma).max(EXACT_PAIR_TOL * (1.0 + check.rhs.value.abs()));
    report.push(CheckRecord::compare(
        "lifting_identity",
        check.lhs.value,
        check.rhs.value,
        bound,
        check.pass,
    ));
    report.push(CheckRecord::info("halfspaces", m as f64));
    Ok(CommandOutcome {
        report,
        artifact: None,
        exit_code: if check.pass { 0 } else { 1 },
    })
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_search(
    d: usize,
    n_balls: usize,
    trials: u64,
    condition_filter: bool,
    box_side: f64,
    exact: bool,
    samples: u64,
    seed: u64,
) -> Result<CommandOutcome, CliError> {
    if exact && d > 2 {
        return Err(CliError::Domain(format!(
            "exact mode supports dimension 1 and 2, got {d}"
        )));
    }
    let tol = Tolerances::default();
    let spec = InstanceBox {
        side: box_side,
        ..InstanceBox::default()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut artifact = CsvArtifact::new(vec![
        "trial",
        "generator",
        "accepted",
        "defect",
        "std_error",
    ]);
    let mut accepted = 0u64;
    let mut min_defect = f64::INFINITY;
    let mut min_error = 0.0f64;
    let mut worst: Option<(BallConfiguration, BallConfiguration)> = None;

    for trial in 0..trials {
        // Alternate the two generators; rejection attempts count as trials.
        let (pair, generator) = if trial % 2 == 0 {
            let (p, q) = independent_pair(&mut rng, d, n_balls, &spec);
            if is_expansion(&p, &q, &tol)? {
                (Some((p, q)), "rejection")
            } else {
                (None, "rejection")
            }
        } else {
            let (p, q, _) = scaling_pair(&mut rng, d, n_balls, &spec, 1.6);
            (Some((p, q)), "scaling")
        };

        let Some((p, q)) = pair else {
            artifact.push_row(vec![
                trial.to_string(),
                generator.into(),
                "0".into(),
                String::new(),
                String::new(),
            ]);
            continue;
        };
        if condition_filter && !theorem_condition_holds(&p, IntersectionMode::Closed, &tol)?.holds {
            artifact.push_row(vec![
                trial.to_string(),
                generator.into(),
                "0".into(),
                String::new(),
                String::new(),
            ]);
            continue;
        }
        let defect = if exact {
            kp_defect(&p, &q, 0.0, MeasureMode::Exact)?
        } else {
            kp_defect(
                &p,
                &q,
                0.0,
                MeasureMode::MonteCarlo {
                    samples,
                    seed: sub_seed(seed, trial),
                },
            )?
        };
        accepted += 1;
        if defect.value < min_defect {
            min_defect = defect.value;
            min_error = defect.std_error;
            worst = Some((p, q));
        }
        artifact.push_row(vec![
            trial.to_string(),
            generator.into(),
            "1".into(),
            num_cell(defect.value),
            num_cell(defect.std_error),
        ]);
    }

    if accepted == 0 {
        return Err(CliError::Domain(
            "no expansion pair accepted; loosen the sampling box (--box) or lower --n-balls".into(),
        ));
    }

    let digest = sha256_hex(
        format!(
            "search d={d} n={n_balls} trials={trials} condition={condition_filter} \
             box={box_side} exact={exact} samples={samples} seed={seed}"
        )
        .as_bytes(),
    );
    let mut report = VerificationReport::new("search", digest, seed);
    report.push(CheckRecord::info("trials", trials as f64));
    report.push(CheckRecord::info("accepted", accepted as f64));
    let bound = if exact { 1e-9 } else { 3.0 * min_error };
    let pass = min_defect >= -bound;
    report.push(CheckRecord::compare(
        "min_defect_nonnegative",
        min_defect,
        0.0,
        bound,
        pass,
    ));
    if let Some((p, q)) = &worst {
        report.appendix.push((
            "minimum-defect instance".into(),
            render_instance_toml(p, Some(q), 0.0),
        ));
    }
    Ok(CommandOutcome {
        report,
        artifact: Some(artifact),
        exit_code: if pass { 0 } else { 1 },
    })
}

pub fn cmd_trace_motion(
    inst: &LoadedInstance,
    t_grid: usize,
    s: f64,
    samples: u64,
    seed: u64,
) -> Result<CommandOutcome, CliError> {
    let q = inst.require_pair()?;
    let tol = Tolerances::default();
    let motion = lifted_monotone_motion(&inst.p, q, &tol)?;
    let dim = motion.ambient_dim();
    let exact = dim == 2;
    if t_grid < 2 {
        return Err(CliError::Domain("--t-grid must be at least 2".into()));
    }
    let radii = inst.p.radii().to_vec();
    let grid: Vec<f64> = (0..t_grid)
        .map(|j| j as f64 / (t_grid - 1) as f64)
        .collect();
    let n = motion.n_points();

    let counts = triple_count_trace(&motion, &radii, &grid, IntersectionMode::Closed, &tol)?;

    let mut header: Vec<String> = vec![
        "t".into(),
        "min_distance_derivative".into(),
        "union_measure".into(),
        "union_std_error".into(),
        "max_pair_count".into(),
        "total_count".into(),
    ];
    for i in 0..n {
        for j in i + 1..n {
            header.push(format!("wall_{i}_{j}"));
        }
    }
    let mut artifact = CsvArtifact::new(header);

    let mut measures: Vec<Measured> = Vec::with_capacity(grid.len());
    for (row, &t) in grid.iter().enumerate() {
        let lane = row as u64;
        let fam = RadiusFamily::new(motion.config_at(t, &radii)?, s)?;
        let union = if exact {
            Measured::exact(union_area_2d(&fam)?)
        } else {
            union_volume_mc(&fam, samples, sub_seed(seed, 2 * lane))?.to_measured()
        };
        measures.push(union);
        let mut min_derivative = f64::INFINITY;
        for i in 0..n {
            for j in i + 1..n {
                min_derivative = min_derivative.min(motion.distance_derivative(t, i, j));
            }
        }
        let mut row_cells = vec![
            num_cell(t),
            num_cell(min_derivative),
            num_cell(union.value),
            num_cell(union.std_error),
            counts[row].max_pair_count.to_string(),
            counts[row].total_count.to_string(),
        ];
        let mut pair_lane = 0u64;
        for i in 0..n {
            for j in i + 1..n {
                let value = if exact {
                    wall_length_2d(&fam, i, j)?
                } else {
                    let w = wall(&fam, i, j)?;
                    wall_volume_mc(&w, s, samples, sub_seed(seed, 2 * lane + 1) ^ pair_lane)?.value
                };
                row_cells.push(num_cell(value));
                pair_lane += 1;
            }
        }
        artifact.push_row(row_cells);
    }

    let mut report = VerificationReport::new("trace-motion", inst.digest.clone(), seed);
    report.push(CheckRecord::info("grid_points", grid.len() as f64));
    let first = measures.first().unwrap();
    let last = measures.last().unwrap();
    report.push(CheckRecord::value_with_error(
        "union_measure_start",
        first.value,
        first.std_error,
    ));
    report.push(CheckRecord::value_with_error(
        "union_measure_end",
        last.value,
        last.std_error,
    ));
    Ok(CommandOutcome {
        report,
        artifact: Some(artifact),
        exit_code: 0,
    })
}
