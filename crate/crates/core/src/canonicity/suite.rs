use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::checks::{
    lagrange_relation_check, oneform_check_with, symplectic_jacobian_check_with, virtual_coefficients_fd,
};
use super::{AndoyerChart, CanonicalChart, CheckReport, PhasePoint};
use crate::body::{random_body_with, PointMass, PointMassBody};
use crate::charts::{euler_attitude, EulerAngles, EulerVelocityState};
use crate::error::{Error, Result};
use crate::geometry::Vec3;
use crate::scalar::Real;

/// Fixtures with `|L|` or `|Θ|` above `(1 − SINGULAR_MARGIN)·G` are redrawn.
const SINGULAR_MARGIN: f64 = 1e-3;
const MAX_DRAWS_PER_TRIAL: usize = 64;
const MAX_SINGULAR_FRACTION: f64 = 0.9;

pub const CHECK_NAMES: [&str; 4] = ["virtual_coefficients", "oneform_identity", "symplectic_jacobian", "lagrange_relation"];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub coefficients: f64,
    pub oneform: f64,
    pub symplectic: f64,
    pub lagrange: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { coefficients: 1e-6, oneform: 1e-6, symplectic: 1e-4, lagrange: 1e-6 }
    }
}

/// Finite-difference steps for each check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Steps {
    pub coefficients: f64,
    pub oneform: f64,
    pub symplectic: f64,
    pub lagrange: f64,
}

impl Default for Steps {
    fn default() -> Self {
        Self { coefficients: 1e-5, oneform: 1e-5, symplectic: 1e-6, lagrange: 1e-5 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum BodySource<T> {
    /// Fresh [`random_body_with`] body per trial.
    Random { n: usize, scale: T },
    /// The same body for every trial.
    Fixed(PointMassBody<T>),
    /// Three mass pairs on the body axes, so the body frame is principal. With `rotated`, the
    /// mass distribution is turned by a random rotation, making the inertia non-diagonal.
    Principal { scale: T, rotated: bool },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig<T> {
    pub seed: u64,
    pub trials: usize,
    /// Random tangents per fixture for the one-form check.
    pub directions: usize,
    pub tolerances: Tolerances,
    pub steps: Steps,
    pub body: BodySource<T>,
    pub parallel: bool,
}

impl<T: Real> Default for SuiteConfig<T> {
    fn default() -> Self {
        Self {
            seed: 0,
            trials: 100,
            directions: 100,
            tolerances: Tolerances::default(),
            steps: Steps::default(),
            body: BodySource::Random { n: 5, scale: T::one() },
            parallel: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fixture<T> {
    pub body: PointMassBody<T>,
    pub velocity: EulerVelocityState<T>,
    pub point: PhasePoint<T>,
}

fn principal_body<T: Real, R: Rng + ?Sized>(rng: &mut R, scale: T, rotated: bool) -> Result<PointMassBody<T>> {
    let s = scale.to_f64_lossy();
    let mut entries = Vec::with_capacity(6);
    for k in 1..=3 {
        let mass = T::lit(rng.gen_range(0.5..=2.0));
        let offset = Vec3::<T>::basis(k) * T::lit(rng.gen_range(0.3..=1.0) * s);
        entries.push(PointMass { mass, position: offset });
        entries.push(PointMass { mass, position: -offset });
    }
    // Drawn unconditionally to keep the two streams aligned.
    let q = EulerAngles::new(
        T::lit(rng.gen_range(0.0..std::f64::consts::TAU)),
        T::lit(rng.gen_range(0.3..2.8)),
        T::lit(rng.gen_range(0.0..std::f64::consts::TAU)),
    );
    let body = PointMassBody::new(entries)?;
    Ok(if rotated { body.rotated(&euler_attitude(&q)) } else { body })
}

/// Draws a body and a nonsingular phase point; returns the fixture and the number of rejected
/// singular draws.
pub fn draw_fixture<T: Real, R: Rng + ?Sized>(rng: &mut R, source: &BodySource<T>) -> Result<(Fixture<T>, usize)> {
    let margin = T::lit(SINGULAR_MARGIN);
    for rejected in 0..MAX_DRAWS_PER_TRIAL {
        let body = match source {
            BodySource::Random { n, scale } => random_body_with(rng, *n, *scale)?,
            BodySource::Fixed(b) => b.clone(),
            BodySource::Principal { scale, rotated } => principal_body(rng, *scale, *rotated)?,
        };
        let q = EulerAngles::new(
            T::lit(rng.gen_range(0.0..std::f64::consts::TAU)),
            T::lit(rng.gen_range(0.2..std::f64::consts::PI - 0.2)),
            T::lit(rng.gen_range(0.0..std::f64::consts::TAU)),
        );
        let qdot = Vec3::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0));
        let velocity = EulerVelocityState::new(q, qdot.cast());
        match PhasePoint::from_velocities(&body, &velocity) {
            Ok(point) if point.within_margin(margin) => {
                return Ok((Fixture { body, velocity, point }, rejected));
            }
            Ok(_) | Err(Error::ChartSingular { .. }) | Err(Error::ZeroMomentum) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::Fixture(format!("{MAX_DRAWS_PER_TRIAL} consecutive singular draws")))
}

struct TrialOutcome {
    residuals: [f64; 4],
    rejected: usize,
}

fn run_trial<T: Real, C: CanonicalChart<T> + ?Sized>(cfg: &SuiteConfig<T>, chart: &C, trial: usize) -> Result<TrialOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(trial as u64);
    let (fx, rejected) = draw_fixture(&mut rng, &cfg.body)?;
    let check_seed: u64 = rng.gen();
    let (tol, steps) = (&cfg.tolerances, &cfg.steps);

    let coefficients = virtual_coefficients_fd(&fx.body, &fx.point, T::lit(steps.coefficients))?
        .residual(fx.point.andoyer())
        .to_f64_lossy();
    let oneform = oneform_check_with(chart, &fx.point, cfg.directions, T::lit(steps.oneform), tol.oneform, check_seed)?;
    let symplectic = symplectic_jacobian_check_with(chart, &fx.point, T::lit(steps.symplectic), tol.symplectic, check_seed)?;
    let lagrange = lagrange_relation_check(&fx.body, &fx.velocity, T::lit(steps.lagrange), tol.lagrange, check_seed)?;
    Ok(TrialOutcome {
        residuals: [coefficients, oneform.max_residual, symplectic.max_residual, lagrange.max_residual],
        rejected,
    })
}

/// Runs the four checks on the Andoyer chart.
pub fn run_suite<T: Real>(cfg: &SuiteConfig<T>) -> Result<Vec<CheckReport>> {
    run_suite_with(cfg, &AndoyerChart)
}

/// Runs the four checks over `cfg.trials` fixtures. Trial `i` draws from stream `i` of a
/// ChaCha generator seeded with `cfg.seed`, so serial and parallel runs agree exactly.
pub fn run_suite_with<T: Real, C: CanonicalChart<T> + Sync + ?Sized>(cfg: &SuiteConfig<T>, chart: &C) -> Result<Vec<CheckReport>> {
    if cfg.trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    if cfg.directions == 0 {
        return Err(Error::InvalidArgument("directions must be at least 1".into()));
    }
    let outcomes: Vec<TrialOutcome> = if cfg.parallel {
        (0..cfg.trials).into_par_iter().map(|t| run_trial(cfg, chart, t)).collect::<Result<_>>()?
    } else {
        (0..cfg.trials).map(|t| run_trial(cfg, chart, t)).collect::<Result<_>>()?
    };

    let rejected: usize = outcomes.iter().map(|o| o.rejected).sum();
    let draws = rejected + outcomes.len();
    log::debug!("canonicity suite: {rejected} singular draws resampled out of {draws}");
    if rejected as f64 > MAX_SINGULAR_FRACTION * draws as f64 {
        return Err(Error::Fixture(format!(
            "{rejected} of {draws} draws were singular; the chart convention is likely broken"
        )));
    }

    let tol = &cfg.tolerances;
    let tolerances = [tol.coefficients, tol.oneform, tol.symplectic, tol.lagrange];
    Ok(CHECK_NAMES
        .iter()
        .zip(tolerances)
        .enumerate()
        .map(|(k, (name, t))| {
            let details = outcomes.iter().map(|o| o.residuals[k]).collect();
            CheckReport::new(*name, details, t, cfg.seed)
        })
        .collect())
}
