//! Deterministic (r x initial-condition) sweeps of the reduced map, with
//! period detection, omega-limit clustering and CSV/JSON-lines emission.
//!
//! Work is partitioned per trajectory and may run on any number of worker
//! threads; results are merged back in (r, trajectory) order, so the output
//! bytes do not depend on the schedule.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::dynamics::{CollisionType, Restitution, SingularityKind};
use crate::spherical::{iterate, OrbitTermination, SphericalConfig};

/// Identifier of the generator behind `rng_seed`; random-init sweeps are
/// replayable given (algorithm, seed).
pub const RNG_ALGORITHM: &str = "chacha8";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepMode {
    /// theta0 at the interior fractions (i+1)/(grid_theta+1) of (0, pi/2),
    /// phi0 at (j+1)/(grid_phi+1) of (0, pi).
    Grid,
    /// `count` seeded random interior configurations per r.
    Random { count: usize },
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct SweepConfig {
    pub r_min: f64,
    pub r_max: f64,
    pub r_step: f64,
    pub grid_theta: usize,
    pub grid_phi: usize,
    pub contact0: CollisionType,
    pub max_collisions: usize,
    pub keep_last_b: usize,
    pub rng_seed: Option<u64>,
    pub mode: SweepMode,
}

impl SweepConfig {
    /// Grid-mode sweep with the usual recording depths.
    pub fn grid(r_min: f64, r_max: f64, r_step: f64, grid_theta: usize, grid_phi: usize) -> Self {
        Self {
            r_min,
            r_max,
            r_step,
            grid_theta,
            grid_phi,
            contact0: CollisionType::B,
            max_collisions: 10_000,
            keep_last_b: 500,
            rng_seed: None,
            mode: SweepMode::Grid,
        }
    }

    pub fn validate(&self) -> Result<(), SweepError> {
        if !(self.r_min > 0.0 && self.r_max < 1.0 && self.r_min <= self.r_max) {
            return Err(SweepError::BadRange {
                r_min: self.r_min,
                r_max: self.r_max,
            });
        }
        if self.r_step <= 0.0 || self.r_step.is_nan() {
            return Err(SweepError::BadStep(self.r_step));
        }
        match self.mode {
            SweepMode::Grid if self.grid_theta == 0 || self.grid_phi == 0 => {
                Err(SweepError::EmptyGrid)
            }
            SweepMode::Random { count: 0 } => Err(SweepError::EmptyGrid),
            SweepMode::Random { .. } if self.rng_seed.is_none() => Err(SweepError::MissingSeed),
            _ => Ok(()),
        }
    }

    /// Inclusive arithmetic grid r_min, r_min + r_step, ...; values are
    /// generated by multiplication so long sweeps do not accumulate error.
    pub fn r_values(&self) -> Vec<f64> {
        let n = ((self.r_max - self.r_min) / self.r_step + 1e-9).floor() as usize;
        (0..=n)
            .map(|i| self.r_min + i as f64 * self.r_step)
            .collect()
    }

    /// Initial (theta0, phi0) pairs, identical for every r.
    pub fn initial_configs(&self) -> Vec<(f64, f64)> {
        use std::f64::consts::{FRAC_PI_2, PI};
        match self.mode {
            SweepMode::Grid => {
                let mut out = Vec::with_capacity(self.grid_theta * self.grid_phi);
                for i in 0..self.grid_theta {
                    let theta0 = FRAC_PI_2 * (i + 1) as f64 / (self.grid_theta + 1) as f64;
                    for j in 0..self.grid_phi {
                        let phi0 = PI * (j + 1) as f64 / (self.grid_phi + 1) as f64;
                        out.push((theta0, phi0));
                    }
                }
                out
            }
            SweepMode::Random { count } => {
                let mut rng = ChaCha8Rng::seed_from_u64(self.rng_seed.unwrap_or(0));
                (0..count)
                    .map(|_| {
                        (
                            FRAC_PI_2 * rng.random_range(0.001..0.999),
                            PI * rng.random_range(0.001..0.999),
                        )
                    })
                    .collect()
            }
        }
    }
}

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("--r-min/--r-max: need 0 < r_min <= r_max < 1, got [{r_min}, {r_max}]")]
    BadRange { r_min: f64, r_max: f64 },
    #[error("--r-step: must be > 0, got {0}")]
    BadStep(f64),
    #[error("grid dimensions and random counts must be >= 1")]
    EmptyGrid,
    #[error("random mode needs --seed for replayability")]
    MissingSeed,
}

/// One retained contact-b sample of one trajectory.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SweepRecord {
    pub r: f64,
    pub traj_id: usize,
    pub theta0: f64,
    pub phi0: f64,
    pub sample_index: usize,
    pub theta: f64,
    pub phi: f64,
}

/// A trajectory that hit a numerical break before completing.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SingularityLog {
    pub r: f64,
    pub traj_id: usize,
    pub kind: SingularityKind,
    pub at_step: usize,
}

/// Runs the sweep. Completed trajectories contribute their trailing
/// contact-b (theta, phi) samples; trajectories that hit a singularity
/// contribute a log entry instead. Output order is (r, traj_id,
/// sample_index) regardless of the execution schedule.
pub fn run_sweep(cfg: &SweepConfig) -> Result<(Vec<SweepRecord>, Vec<SingularityLog>), SweepError> {
    cfg.validate()?;
    let r_values = cfg.r_values();
    let inits = cfg.initial_configs();

    let mut jobs = Vec::with_capacity(r_values.len() * inits.len());
    for &r in &r_values {
        for (traj_id, &(theta0, phi0)) in inits.iter().enumerate() {
            jobs.push((r, traj_id, theta0, phi0));
        }
    }

    enum JobOut {
        Samples(Vec<(usize, f64, f64)>),
        Singular(SingularityKind, usize),
    }

    // Indexed parallel map; collect preserves job order, which carries the
    // determinism guarantee.
    let outcomes: Vec<JobOut> = jobs
        .par_iter()
        .map(|&(r, _traj_id, theta0, phi0)| {
            let rest = Restitution::new(r).expect("validated range");
            let c0 = SphericalConfig {
                contact: cfg.contact0,
                theta: theta0,
                phi: phi0,
            };
            let orbit = iterate(&c0, rest, cfg.max_collisions, cfg.keep_last_b);
            match orbit.termination {
                OrbitTermination::Completed => {
                    let n_b = orbit
                        .steps
                        .iter()
                        .filter(|s| s.contact == CollisionType::B)
                        .count();
                    let first_kept = n_b - orbit.b_phi_samples.len();
                    let thetas: Vec<f64> = orbit
                        .steps
                        .iter()
                        .filter(|s| s.contact == CollisionType::B)
                        .skip(first_kept)
                        .map(|s| s.theta)
                        .collect();
                    JobOut::Samples(
                        orbit
                            .b_phi_samples
                            .iter()
                            .zip(thetas)
                            .enumerate()
                            .map(|(i, (&phi, theta))| (i, theta, phi))
                            .collect(),
                    )
                }
                OrbitTermination::NumericalSingularity { kind, at_step } => {
                    JobOut::Singular(kind, at_step)
                }
            }
        })
        .collect();

    let mut records = Vec::new();
    let mut singularities = Vec::new();
    for ((r, traj_id, theta0, phi0), out) in jobs.into_iter().zip(outcomes) {
        match out {
            JobOut::Samples(samples) => {
                for (sample_index, theta, phi) in samples {
                    records.push(SweepRecord {
                        r,
                        traj_id,
                        theta0,
                        phi0,
                        sample_index,
                        theta,
                        phi,
                    });
                }
            }
            JobOut::Singular(kind, at_step) => singularities.push(SingularityLog {
                r,
                traj_id,
                kind,
                at_step,
            }),
        }
    }
    Ok((records, singularities))
}

/// Smallest period length L <= max_period such that the trailing 3L letters
/// of the word repeat with period L; returns (L, start index of the verified
/// tail). The caller provides at least 4 * max_period letters.
pub fn detect_period(word: &[CollisionType], max_period: usize) -> Option<(usize, usize)> {
    for period in 1..=max_period {
        let window = 3 * period;
        if window > word.len() {
            break;
        }
        let tail = &word[word.len() - window..];
        if tail.iter().zip(&tail[period..]).all(|(a, b)| a == b) {
            return Some((period, word.len() - window));
        }
    }
    None
}

/// Sorts the samples and splits them at gaps larger than `gap`; returns
/// (mean, count) per cluster, largest cluster first (ties by center).
pub fn cluster_phis(samples: &[f64], gap: f64) -> Vec<(f64, usize)> {
    if samples.is_empty() {
        return Vec::new();
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut clusters: Vec<Vec<f64>> = vec![vec![sorted[0]]];
    for pair in sorted.windows(2) {
        if pair[1] - pair[0] > gap {
            clusters.push(Vec::new());
        }
        clusters.last_mut().unwrap().push(pair[1]);
    }
    let mut out: Vec<(f64, usize)> = clusters
        .into_iter()
        .map(|c| (c.iter().sum::<f64>() / c.len() as f64, c.len()))
        .collect();
    out.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.partial_cmp(&b.0).unwrap()));
    out
}

/// Write failure, carrying how many records made it out.
#[derive(Debug, Error)]
#[error("write failed after {written} records: {source}")]
pub struct EmitError {
    pub written: usize,
    #[source]
    pub source: std::io::Error,
}

/// 17 significant digits, enough to reproduce the binary64 value exactly.
fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

/// CSV with header `r,traj_id,theta0,phi0,sample_index,theta,phi`, one line
/// per record, `\n` endings. Byte-identical for identical inputs.
pub fn write_records_csv<W: Write>(records: &[SweepRecord], mut out: W) -> Result<(), EmitError> {
    let mut written = 0usize;
    let mut emit = |line: String, written: &mut usize| {
        out.write_all(line.as_bytes()).map_err(|source| EmitError {
            written: *written,
            source,
        })
    };
    emit(
        "r,traj_id,theta0,phi0,sample_index,theta,phi\n".into(),
        &mut written,
    )?;
    for rec in records {
        let line = format!(
            "{},{},{},{},{},{},{}\n",
            fmt_real(rec.r),
            rec.traj_id,
            fmt_real(rec.theta0),
            fmt_real(rec.phi0),
            rec.sample_index,
            fmt_real(rec.theta),
            fmt_real(rec.phi),
        );
        emit(line, &mut written)?;
        written += 1;
    }
    Ok(())
}

/// Sibling stream for the numerical-break log: `r,traj_id,kind,at_step`.
pub fn write_singularities_csv<W: Write>(
    logs: &[SingularityLog],
    mut out: W,
) -> Result<(), EmitError> {
    let mut written = 0usize;
    let mut emit = |line: String, written: &mut usize| {
        out.write_all(line.as_bytes()).map_err(|source| EmitError {
            written: *written,
            source,
        })
    };
    emit("r,traj_id,kind,at_step\n".into(), &mut written)?;
    for log in logs {
        let line = format!(
            "{},{},{},{}\n",
            fmt_real(log.r),
            log.traj_id,
            log.kind.name(),
            log.at_step
        );
        emit(line, &mut written)?;
        written += 1;
    }
    Ok(())
}

/// JSON-lines alternative with the same fields as the CSV.
pub fn write_records_jsonl<W: Write>(records: &[SweepRecord], mut out: W) -> Result<(), EmitError> {
    for (written, rec) in records.iter().enumerate() {
        let line = serde_json::to_string(rec).expect("plain struct serializes");
        out.write_all(line.as_bytes())
            .and_then(|_| out.write_all(b"\n"))
            .map_err(|source| EmitError { written, source })?;
    }
    Ok(())
}

pub fn write_singularities_jsonl<W: Write>(
    logs: &[SingularityLog],
    mut out: W,
) -> Result<(), EmitError> {
    for (written, log) in logs.iter().enumerate() {
        let line = serde_json::to_string(log).expect("plain struct serializes");
        out.write_all(line.as_bytes())
            .and_then(|_| out.write_all(b"\n"))
            .map_err(|source| EmitError { written, source })?;
    }
    Ok(())
}
