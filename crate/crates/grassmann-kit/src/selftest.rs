//! Built-in invariant suites, runnable from the CLI.
//!
//! Each suite replays the core contracts of one module over seeded random
//! instances and reports per-suite pass/fail counts; any failure carries
//! the seed and the observed value so it can be replayed.

use std::f64::consts::FRAC_PI_2;
use std::fmt::Write as _;

use crate::grassmann::{self, GrassmannPoint, HorizontalTangent};
use crate::jacobi;
use crate::matcore::{self, svd_compact, Matrix, SvdOrder};
use crate::projector::{self, ProjectorTangent};
use crate::stiefel;
use crate::{charts, experiment};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    /// Small sizes, few repetitions; finishes in seconds.
    Quick,
    /// Acceptance-grade counts; a few minutes.
    Full,
}

#[derive(Debug)]
pub struct SuiteResult {
    pub module: &'static str,
    pub name: &'static str,
    pub passed: usize,
    pub failures: Vec<String>,
}

#[derive(Debug)]
pub struct Report {
    pub level: Level,
    pub suites: Vec<SuiteResult>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.suites.iter().all(|s| s.failures.is_empty())
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for s in &self.suites {
            if s.failures.is_empty() {
                let _ = writeln!(out, "[PASS] {}::{} ({} checks)", s.module, s.name, s.passed);
            } else {
                let _ = writeln!(
                    out,
                    "[FAIL] {}::{} ({} passed, {} failed)",
                    s.module,
                    s.name,
                    s.passed,
                    s.failures.len()
                );
                for f in &s.failures {
                    let _ = writeln!(out, "       {f}");
                }
            }
        }
        let total: usize = self.suites.iter().map(|s| s.passed).sum();
        let failed: usize = self.suites.iter().map(|s| s.failures.len()).sum();
        let _ = writeln!(
            out,
            "{} suites, {} checks passed, {} failed",
            self.suites.len(),
            total,
            failed
        );
        out
    }
}

struct Suite {
    module: &'static str,
    name: &'static str,
    passed: usize,
    failures: Vec<String>,
}

impl Suite {
    fn new(module: &'static str, name: &'static str) -> Self {
        Self {
            module,
            name,
            passed: 0,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, seed: u64, what: &str, observed: f64, tol: f64) {
        if observed.is_finite() && observed <= tol {
            self.passed += 1;
        } else {
            self.failures.push(format!(
                "seed={seed} {what}: observed {observed:e} > {tol:e}"
            ));
        }
    }

    fn finish(self) -> SuiteResult {
        SuiteResult {
            module: self.module,
            name: self.name,
            passed: self.passed,
            failures: self.failures,
        }
    }
}

fn sizes(level: Level) -> Vec<(usize, usize)> {
    match level {
        Level::Quick => vec![(6, 2), (8, 3)],
        Level::Full => vec![(6, 2), (8, 3), (20, 5), (100, 20)],
    }
}

fn reps(level: Level) -> u64 {
    match level {
        Level::Quick => 5,
        Level::Full => 40,
    }
}

fn matcore_suite(level: Level) -> SuiteResult {
    let mut s = Suite::new("matcore", "kernels");
    for seed in 0..reps(level) {
        let m = {
            use rand::{Rng, SeedableRng};
            let mut r = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            Matrix::from_fn(7, 4, |_, _| r.sample(rand_distr::StandardNormal))
        };
        let f = svd_compact(&m, SvdOrder::Descending).unwrap();
        s.check(
            seed,
            "svd reconstruction",
            (f.reconstruct() - &m).norm() / m.norm(),
            1e-12,
        );

        let q = matcore::qr_thin(&m).unwrap();
        s.check(
            seed,
            "qr reconstruction",
            (q.reconstruct() - &m).norm() / m.norm(),
            1e-12,
        );

        let skew = {
            use rand::{Rng, SeedableRng};
            let mut r = rand_chacha::ChaCha8Rng::seed_from_u64(seed + 1000);
            let a = Matrix::from_fn(5, 5, |_, _| r.sample::<f64, _>(rand_distr::StandardNormal));
            (&a - a.transpose()) * 0.4
        };
        let e = matcore::expm(&skew);
        s.check(
            seed,
            "expm orthogonality on skew",
            (e.transpose() * &e - Matrix::identity(5, 5)).norm(),
            1e-12,
        );
        let back = matcore::logm_principal(&e).unwrap();
        s.check(seed, "logm∘expm roundtrip", (back - &skew).norm(), 1e-11);
    }
    s.finish()
}

fn stiefel_suite(level: Level) -> SuiteResult {
    let mut s = Suite::new("stiefel", "projections");
    for (n, p) in sizes(level) {
        for seed in 0..reps(level) {
            let u = stiefel::random_stiefel(n, p, seed).unwrap();
            let z = {
                use rand::{Rng, SeedableRng};
                let mut r = rand_chacha::ChaCha8Rng::seed_from_u64(seed + 7);
                Matrix::from_fn(n, p, |_, _| r.sample(rand_distr::StandardNormal))
            };
            let h = stiefel::project_horizontal(&u, &z).unwrap();
            s.check(
                seed,
                "horizontality",
                (u.as_matrix().transpose() * &h).norm(),
                1e-11,
            );
            let h2 = stiefel::project_horizontal(&u, &h).unwrap();
            s.check(seed, "idempotence", (h2 - &h).norm(), 1e-11);
            let uperp = stiefel::orthogonal_complement(&u);
            let full = u.as_matrix() * u.as_matrix().transpose() + &uperp * uperp.transpose();
            s.check(
                seed,
                "completion",
                (full - Matrix::identity(n, n)).norm(),
                1e-9,
            );
        }
    }
    s.finish()
}

fn grassmann_suite(level: Level) -> SuiteResult {
    let mut s = Suite::new("grassmann", "exp/log/transport");
    for (n, p) in sizes(level) {
        for seed in 0..reps(level) {
            let point = GrassmannPoint::random(n, p, seed).unwrap();
            let d = HorizontalTangent::random(point.clone(), seed + 31);
            let d = {
                let f = grassmann::geodesic_factors(&d).unwrap();
                d.scaled((FRAC_PI_2 - 0.1) / f.sigma_max())
            };
            let target = grassmann::exp(&d, 1.0).unwrap();
            let (back, y_star) = grassmann::log_extended(&point, target.rep()).unwrap();
            s.check(
                seed,
                "log∘exp tangent recovery",
                (back.matrix() - d.matrix()).norm() / d.norm().max(1.0),
                1e-9,
            );
            let redone = grassmann::exp(&back, 1.0).unwrap();
            s.check(
                seed,
                "representative retention",
                (redone.rep().as_matrix() - y_star.as_matrix()).norm(),
                1e-10,
            );
            s.check(
                seed,
                "distance equals log norm",
                (grassmann::distance(&point, &target) - back.norm()).abs(),
                1e-10,
            );

            let gamma = HorizontalTangent::random(point.clone(), seed + 57);
            let moved = grassmann::parallel_transport(&gamma, &d, 0.8).unwrap();
            s.check(
                seed,
                "transport isometry",
                (moved.norm() - d.norm()).abs() / d.norm().max(1.0),
                1e-10,
            );
        }
    }
    s.finish()
}

fn curvature_suite(level: Level) -> SuiteResult {
    let mut s = Suite::new("grassmann", "curvature bounds");
    let planes = match level {
        Level::Quick => 50,
        Level::Full => 2000,
    };
    for (n, p) in sizes(level) {
        if p.min(n - p) < 2 {
            continue;
        }
        for seed in 0..planes {
            let point = GrassmannPoint::random(n, p, seed).unwrap();
            let d1 = HorizontalTangent::random(point.clone(), seed + 100_000);
            let d2 = HorizontalTangent::random(point, seed + 200_000);
            match grassmann::sectional_curvature(&d1, &d2) {
                Ok(k) => {
                    s.check(seed, "K lower bound", -k, 1e-12);
                    s.check(seed, "K upper bound", k - 2.0, 1e-12);
                }
                Err(_) => s.check(seed, "degenerate random plane", 1.0, 0.0),
            }
        }
    }
    s.finish()
}

fn projector_suite(level: Level) -> SuiteResult {
    let mut s = Suite::new("projector", "cross-perspective");
    for seed in 0..reps(level) {
        let point = GrassmannPoint::random(8, 3, seed).unwrap();
        let h = HorizontalTangent::random(point.clone(), seed + 400);
        let h = h.scaled(1.0 / h.norm());
        let p = projector::from_onb(point.rep()).unwrap();
        let delta = ProjectorTangent::new(p.clone(), grassmann::ambient(&h)).unwrap();

        let fast = grassmann::exp(&h, 1.0).unwrap();
        let slow = projector::exp_projector(&p, &delta, 1.0).unwrap();
        let fast_proj = projector::from_onb(fast.rep()).unwrap();
        s.check(
            seed,
            "exp agreement",
            (fast_proj.matrix() - slow.matrix()).norm(),
            1e-9,
        );

        let back = projector::log_projector(&p, &slow).unwrap();
        let lifted = back.matrix() * point.rep().as_matrix();
        let (onb_log, _) = grassmann::log_extended(&point, fast.rep()).unwrap();
        s.check(
            seed,
            "log agreement",
            (lifted - onb_log.matrix()).norm(),
            1e-9,
        );

        let gamma = HorizontalTangent::random(point.clone(), seed + 500);
        let gamma_p = ProjectorTangent::new(p.clone(), grassmann::ambient(&gamma)).unwrap();
        let onb_move = grassmann::parallel_transport(&gamma, &h, 0.7).unwrap();
        let proj_move = projector::parallel_transport_projector(&delta, &gamma_p, 0.7).unwrap();
        let relift = proj_move.matrix() * onb_move.base().rep().as_matrix();
        s.check(
            seed,
            "transport agreement",
            (relift - onb_move.matrix()).norm(),
            1e-9,
        );
    }
    s.finish()
}

fn jacobi_suite(level: Level) -> SuiteResult {
    let mut s = Suite::new("jacobi", "differential routes");
    for seed in 0..reps(level) {
        let point = GrassmannPoint::random(7, 2, seed).unwrap();
        let d1 = HorizontalTangent::random(point.clone(), seed + 600);
        let d2 = HorizontalTangent::random(point.clone(), seed + 700);
        let qr = jacobi::dexp_qr(&d1, &d2);
        let svd = jacobi::dexp_svd(&d1, &d2);
        if let (Ok(a), Ok(b)) = (&qr, &svd) {
            s.check(
                seed,
                "svd/qr agreement",
                (a.ambient() - b.ambient()).norm() / d2.norm().max(1.0),
                1e-8,
            );
        }
        let base = projector::from_onb(point.rep()).unwrap();
        let p1 = ProjectorTangent::new(base.clone(), grassmann::ambient(&d1)).unwrap();
        let p2 = ProjectorTangent::new(base, grassmann::ambient(&d2)).unwrap();
        let proj = jacobi::dexp_projector(&p1, &p2).unwrap();
        if let Ok(a) = &qr {
            s.check(
                seed,
                "qr/projector agreement",
                (a.ambient() - proj.matrix()).norm() / d2.norm().max(1.0),
                1e-8,
            );
        }
        let j0 = jacobi::jacobi_field(&d1, &d2, 0.0).unwrap();
        s.check(seed, "J(0) = 0", j0.norm(), 0.0);
    }
    s.finish()
}

fn charts_suite(level: Level) -> SuiteResult {
    let mut s = Suite::new("charts", "round trips");
    for seed in 0..reps(level) {
        let chart = charts::ChartBall::standard(7, 3, 1.0).unwrap();
        let b = {
            use rand::{Rng, SeedableRng};
            let mut r = rand_chacha::ChaCha8Rng::seed_from_u64(seed + 800);
            let raw = Matrix::from_fn(4, 3, |_, _| r.sample::<f64, _>(rand_distr::StandardNormal));
            let smax = svd_compact(&raw, SvdOrder::Descending).unwrap().s[0];
            raw / smax
        };
        let back = charts::psi(&charts::phi(&b, &chart).unwrap(), &chart).unwrap();
        s.check(seed, "ψ∘φ identity", (back - &b).norm(), 1e-10);
    }
    s.finish()
}

fn cut_locus_suite(level: Level) -> SuiteResult {
    let mut s = Suite::new("grassmann", "cut locus families");
    for seed in 0..reps(level) {
        let point = GrassmannPoint::random(6, 2, seed).unwrap();
        let raw = HorizontalTangent::random(point.clone(), seed + 900);
        let f = svd_compact(raw.matrix(), SvdOrder::Descending).unwrap();
        let sig = Matrix::from_fn(2, 2, |i, j| {
            if i == j {
                if i == 0 {
                    FRAC_PI_2
                } else {
                    0.4
                }
            } else {
                0.0
            }
        });
        let h = f.u.columns(0, 2) * sig * f.v.columns(0, 2).transpose();
        let d = HorizontalTangent::new(point.clone(), h).unwrap();
        let target = grassmann::exp(&d, 1.0).unwrap();
        let fam = grassmann::cut_solutions(&point, &target).unwrap();
        if fam.multiplicity() != 1 {
            s.check(seed, "multiplicity detection", 1.0, 0.0);
            continue;
        }
        let dist = grassmann::distance(&point, &target);
        for (i, w) in [1.0f64, -1.0].iter().enumerate() {
            let dw = fam.materialize(&Matrix::from_element(1, 1, *w)).unwrap();
            let end = grassmann::exp(&dw, 1.0).unwrap();
            s.check(
                seed * 10 + i as u64,
                "family endpoint",
                grassmann::distance(&end, &target),
                1e-9,
            );
            s.check(
                seed * 10 + i as u64,
                "family length",
                (dw.norm() - dist).abs(),
                1e-10,
            );
        }
    }
    s.finish()
}

fn experiment_suite(level: Level) -> SuiteResult {
    let mut s = Suite::new("experiment", "log accuracy");
    let (n, p, trials) = match level {
        Level::Quick => (12, 3, 1),
        Level::Full => (100, 20, 3),
    };
    let config = experiment::ExperimentConfig {
        n,
        p,
        tau_grid: experiment::ExperimentConfig::log_grid(1e-16, 1.0, 12),
        trials,
        seed: 1,
        methods: vec![experiment::LogMethod::Extended],
    };
    match experiment::run(&config) {
        Ok(records) => {
            for r in records {
                s.check(r.trial as u64, "extended log error", r.error_rad, 1e-6);
            }
        }
        Err(e) => s.failures.push(format!("experiment failed: {e}")),
    }
    s.finish()
}

/// Runs all suites at the requested level.
pub fn run(level: Level) -> Report {
    let suites = vec![
        matcore_suite(level),
        stiefel_suite(level),
        grassmann_suite(level),
        curvature_suite(level),
        cut_locus_suite(level),
        projector_suite(level),
        jacobi_suite(level),
        charts_suite(level),
        experiment_suite(level),
    ];
    Report { level, suites }
}
