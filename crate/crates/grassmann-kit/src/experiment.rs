//! Accuracy experiment for the logarithm near the cut locus, plus the
//! classical inverse-free baseline it is compared against.
//!
//! For each trial a random base `U ∈ St(n,p)` and a random horizontal
//! tangent with largest singular value exactly π/2 are drawn, so the
//! geodesic hits the cut locus at `t = 1`. For every `τ` in a log-spaced
//! grid the point `U₁(τ) = Exp_U((1−τ)Δ)` is computed, the selected
//! logarithm is evaluated, re-exponentiated, and the subspace error between
//! `U₁(τ)` and the reconstruction is recorded together with the wall time
//! of the log call.
//!
//! Trials run concurrently (capped by `GRASSMANN_KIT_THREADS`); per-trial
//! RNG streams are derived from `(seed, trial)`, so the records never
//! depend on the schedule.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grassmann::{self, GrassmannPoint};
use crate::matcore::{svd_compact, Matrix, SvdOrder};
use crate::stiefel::{self, StiefelMatrix};

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "GRASSMANN_KIT_THREADS";

/// Which logarithm implementation to benchmark.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LogMethod {
    /// Inverse-free extended logarithm.
    #[serde(rename = "extended-log")]
    Extended,
    /// Classical `(UᵀY)⁻¹`-based logarithm, result used as-is.
    #[serde(rename = "standard-log")]
    Standard,
    /// Classical logarithm followed by projection onto the horizontal space.
    #[serde(rename = "standard-log-projected")]
    StandardProjected,
}

impl LogMethod {
    pub const ALL: [LogMethod; 3] = [
        LogMethod::Extended,
        LogMethod::Standard,
        LogMethod::StandardProjected,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            LogMethod::Extended => "extended-log",
            LogMethod::Standard => "standard-log",
            LogMethod::StandardProjected => "standard-log-projected",
        }
    }
}

/// Classical Grassmann logarithm: with `T = (I − UUᵀ)·Y·(UᵀY)⁻¹` and the
/// compact SVD `T = Q̂ŜVᵀ`, the result is `Q̂·arctan(Ŝ)·Vᵀ`.
///
/// Kept solely as the comparison baseline: the matrix inverse makes it fail
/// on exact cut pairs and lose accuracy near them. `project` applies the
/// horizontal projection `(I − UUᵀ)` to the result.
pub fn log_standard_rep(u: &Matrix, y: &Matrix, project: bool) -> Result<Matrix> {
    let overlap = u.transpose() * y;
    let inv = overlap
        .lu()
        .try_inverse()
        .ok_or_else(|| Error::Domain("UᵀY is singular: target lies in the cut locus".into()))?;
    let t = (y - u * (u.transpose() * y)) * inv;
    let f = svd_compact(&t, SvdOrder::Descending)?;
    let p = f.s.len();
    let atan = Matrix::from_fn(p, p, |i, j| if i == j { f.s[i].atan() } else { 0.0 });
    let mut h = &f.u * atan * f.v.transpose();
    if project {
        h = &h - u * (u.transpose() * &h);
    }
    Ok(h)
}

/// Evaluates the geodesic-endpoint formula on raw matrices without
/// horizontality checks, mirroring how a possibly contaminated logarithm
/// output would be re-exponentiated in practice.
pub fn exp_rep_raw(u: &Matrix, h: &Matrix, t: f64) -> Result<Matrix> {
    let f = svd_compact(h, SvdOrder::Descending)?;
    let sigma_max = f.sigma_max();
    let r =
        f.s.iter()
            .take_while(|&&s| s > 1e-14 * sigma_max && s > 0.0)
            .count();
    if r == 0 {
        return Ok(u.clone());
    }
    let v = f.v.columns(0, r);
    let q = f.u.columns(0, r);
    let cos_m1 = Matrix::from_fn(r, r, |i, j| {
        if i == j {
            (t * f.s[i]).cos() - 1.0
        } else {
            0.0
        }
    });
    let sin = Matrix::from_fn(r, r, |i, j| if i == j { (t * f.s[i]).sin() } else { 0.0 });
    Ok(u + (u * v) * cos_m1 * v.transpose() + q * sin * v.transpose())
}

/// Subspace error in radians between two representatives, computed exactly
/// as in the reference procedure: `‖ℜ(arccos(S))‖₂` for the singular values
/// of `U₁ᵀŨ₁`, with the real part realized by clamping to `[−1, 1]`.
pub fn subspace_error_rad(a: &Matrix, b: &Matrix) -> Result<f64> {
    let f = svd_compact(&(a.transpose() * b), SvdOrder::Descending)?;
    Ok(f.s
        .iter()
        .map(|s| s.clamp(-1.0, 1.0).acos().powi(2))
        .sum::<f64>()
        .sqrt())
}

/// Experiment configuration.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentConfig {
    pub n: usize,
    pub p: usize,
    pub tau_grid: Vec<f64>,
    pub trials: u32,
    pub seed: u64,
    pub methods: Vec<LogMethod>,
}

impl ExperimentConfig {
    /// Log-spaced grid of `steps` values covering `[min, max]`.
    pub fn log_grid(min: f64, max: f64, steps: usize) -> Vec<f64> {
        assert!(min > 0.0 && max > min && steps >= 2, "ill-formed τ grid");
        let (lo, hi) = (min.log10(), max.log10());
        (0..steps)
            .map(|k| 10f64.powf(lo + (hi - lo) * k as f64 / (steps - 1) as f64))
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.p > self.n {
            return Err(Error::shape(
                "p ≤ n",
                format!("n = {}, p = {}", self.n, self.p),
            ));
        }
        if self.trials == 0 || self.tau_grid.is_empty() || self.methods.is_empty() {
            return Err(Error::Domain(
                "experiment needs at least one trial, one τ and one method".into(),
            ));
        }
        if self.tau_grid.iter().any(|t| !(t.is_finite() && *t > 0.0)) {
            return Err(Error::Domain("τ grid entries must be positive".into()));
        }
        Ok(())
    }
}

/// One measurement: trial id, τ, method, subspace error, log wall time.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentRecord {
    pub trial: u32,
    pub tau: f64,
    pub method: LogMethod,
    pub error_rad: f64,
    pub ms: f64,
}

/// Builds the rayon pool with the thread cap from `GRASSMANN_KIT_THREADS`.
fn thread_pool() -> Result<rayon::ThreadPool> {
    let threads = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .unwrap_or(0);
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Numerical(format!("thread pool: {e}")))
}

/// Random horizontal tangent at `u` with its largest singular value rescaled
/// to exactly π/2, drawn from the given RNG.
fn cut_locus_tangent(u: &StiefelMatrix, rng: &mut ChaCha8Rng) -> Result<Matrix> {
    let (n, p) = (u.nrows(), u.ncols());
    let g = Matrix::from_fn(n, p, |_, _| rng.sample(StandardNormal));
    let h = &g - u.as_matrix() * (u.as_matrix().transpose() * &g);
    let f = svd_compact(&h, SvdOrder::Descending)?;
    let scale = std::f64::consts::FRAC_PI_2 / f.sigma_max();
    Ok(h * scale)
}

fn run_trial(config: &ExperimentConfig, trial: u32) -> Result<Vec<ExperimentRecord>> {
    let u = stiefel::random_stiefel_stream(config.n, config.p, config.seed, 2 * trial as u64)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(2 * trial as u64 + 1);
    let delta = cut_locus_tangent(&u, &mut rng)?;

    let point = GrassmannPoint::new(u.clone())?;
    let lift = grassmann::HorizontalTangent::new(point.clone(), delta)?;
    let factors = grassmann::geodesic_factors(&lift)?;

    let mut records = Vec::with_capacity(config.tau_grid.len() * config.methods.len());
    for &tau in &config.tau_grid {
        let u1 = factors.exp_rep(1.0 - tau);
        for &method in &config.methods {
            let started = Instant::now();
            let log = match method {
                LogMethod::Extended => {
                    let y = StiefelMatrix::new(u1.clone())?;
                    grassmann::log_extended(&point, &y).map(|(d, _)| d.matrix().clone())
                }
                LogMethod::Standard => log_standard_rep(u.as_matrix(), &u1, false),
                LogMethod::StandardProjected => log_standard_rep(u.as_matrix(), &u1, true),
            };
            let ms = started.elapsed().as_secs_f64() * 1e3;
            let error_rad = match log {
                Ok(h) => {
                    let redone = exp_rep_raw(u.as_matrix(), &h, 1.0)?;
                    subspace_error_rad(&u1, &redone)?
                }
                // The baseline may legitimately fail on (numerically) exact
                // cut pairs; record the worst possible error rather than
                // aborting the sweep.
                Err(Error::Domain(_)) => f64::NAN,
                Err(e) => return Err(e),
            };
            records.push(ExperimentRecord {
                trial,
                tau,
                method,
                error_rad,
                ms,
            });
        }
    }
    Ok(records)
}

/// Runs the experiment; records are ordered by (trial, τ index, method
/// index) regardless of scheduling.
pub fn run(config: &ExperimentConfig) -> Result<Vec<ExperimentRecord>> {
    use rayon::prelude::*;
    config.validate()?;
    let pool = thread_pool()?;
    let per_trial: Vec<Result<Vec<ExperimentRecord>>> = pool.install(|| {
        (0..config.trials)
            .into_par_iter()
            .map(|trial| run_trial(config, trial))
            .collect()
    });
    let mut records = Vec::new();
    for r in per_trial {
        records.extend(r?);
    }
    Ok(records)
}

/// CSV with the fixed column set `trial,tau,method,error_rad,ms`.
pub fn to_csv(records: &[ExperimentRecord]) -> String {
    let mut out = String::from("trial,tau,method,error_rad,ms\n");
    for r in records {
        out.push_str(&format!(
            "{},{:e},{},{:e},{:.3}\n",
            r.trial,
            r.tau,
            r.method.name(),
            r.error_rad,
            r.ms
        ));
    }
    out
}

pub fn to_json(records: &[ExperimentRecord]) -> String {
    serde_json::to_string_pretty(records).expect("records serialize") + "\n"
}
