//! Torque-free rigid-body rotation in Andoyer variables.
//!
//! The inertia tensor is any symmetric positive-definite matrix in the body frame; nothing
//! assumes principal axes. With `M = (√(G²−L²) sin l, √(G²−L²) cos l, L)` the body-frame
//! angular momentum, the Hamiltonian is `H = ½ M·I⁻¹M`. It does not depend on `g`, `ϑ` or `Θ`,
//! so `G`, `Θ` and `ϑ` are constants of motion and only `(l, g, L)` are integrated.
//!
//! [`euler_oracle`] integrates `Ṁ = M × I⁻¹M` directly as an independent reference.

use thiserror::Error;

use crate::body::{inertia_tensor, InertiaTensor, PointMassBody};
use crate::charts::{momentum_vector_body, AndoyerState};
use crate::error::Error;
use crate::geometry::{Mat3, Vec3};
use crate::scalar::Real;

/// Largest accepted inertia condition number.
pub const MAX_CONDITION: f64 = 1e12;
/// Integration stops once `|L|` exceeds this fraction of `G`.
pub const SINGULAR_BAND: f64 = 0.999;

#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianSpec<T> {
    inertia: InertiaTensor<T>,
    inverse: Mat3<T>,
}

impl<T: Real> HamiltonianSpec<T> {
    pub fn new(inertia: InertiaTensor<T>) -> Result<Self, Error> {
        let condition = inertia.condition_number();
        if !(condition <= T::lit(MAX_CONDITION)) {
            return Err(Error::SingularInertia { condition: condition.to_f64_lossy() });
        }
        let inverse = inertia
            .matrix()
            .inverse()
            .ok_or(Error::SingularInertia { condition: condition.to_f64_lossy() })?;
        let inverse = Mat3::from_fn(|i, j| (inverse.m[i][j] + inverse.m[j][i]) * T::half());
        Ok(Self { inertia, inverse })
    }

    pub fn from_body(body: &PointMassBody<T>) -> Result<Self, Error> {
        Self::new(inertia_tensor(body))
    }

    pub fn inertia(&self) -> &InertiaTensor<T> {
        &self.inertia
    }

    pub fn inverse_inertia(&self) -> &Mat3<T> {
        &self.inverse
    }

    /// Body angular velocity `I⁻¹M`.
    pub fn omega_body(&self, momentum_body: Vec3<T>) -> Vec3<T> {
        self.inverse * momentum_body
    }

    pub fn energy_of(&self, momentum_body: Vec3<T>) -> T {
        T::half() * momentum_body.dot(self.omega_body(momentum_body))
    }
}

/// `H = ½ M·I⁻¹M`.
pub fn hamiltonian<T: Real>(spec: &HamiltonianSpec<T>, a: &AndoyerState<T>) -> T {
    spec.energy_of(momentum_vector_body(a))
}

/// Analytic partials `(∂H/∂l, ∂H/∂L, ∂H/∂G)`. Undefined at `|L| = G`.
pub fn hamiltonian_gradient<T: Real>(spec: &HamiltonianSpec<T>, a: &AndoyerState<T>) -> (T, T, T) {
    let m = momentum_vector_body(a);
    let u = spec.omega_body(m);
    let s = (a.big_g * a.big_g - a.big_l * a.big_l).sqrt();
    let (sl, cl) = a.l.sin_cos();
    let dl = u.dot(Vec3::new(s * cl, -s * sl, T::zero()));
    let d_big_l = u.dot(Vec3::new(-a.big_l / s * sl, -a.big_l / s * cl, T::one()));
    let d_big_g = u.dot(Vec3::new(a.big_g / s * sl, a.big_g / s * cl, T::zero()));
    (dl, d_big_l, d_big_g)
}

/// Time derivatives of the Andoyer variables.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AndoyerRates<T> {
    pub l: T,
    pub g: T,
    pub theta: T,
    pub big_l: T,
    pub big_g: T,
    pub big_theta: T,
}

/// Hamilton's equations: `l̇ = ∂H/∂L`, `ġ = ∂H/∂G`, `L̇ = −∂H/∂l`; the rest vanish.
pub fn hamilton_rhs<T: Real>(spec: &HamiltonianSpec<T>, a: &AndoyerState<T>) -> AndoyerRates<T> {
    let (dl, d_big_l, d_big_g) = hamiltonian_gradient(spec, a);
    AndoyerRates {
        l: d_big_l,
        g: d_big_g,
        theta: T::zero(),
        big_l: -dl,
        big_g: T::zero(),
        big_theta: T::zero(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Rk4,
    /// Implicit midpoint, solved by fixed-point iteration.
    Midpoint,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample<T> {
    pub t: T,
    /// Angles reduced to `[0, 2π)`.
    pub state: AndoyerState<T>,
    pub momentum_body: Vec3<T>,
    pub energy: T,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct AndoyerTrajectory<T> {
    pub samples: Vec<Sample<T>>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DynamicsError<T: Real> {
    /// `|L|` entered the singular band; `trajectory` holds every sample before it.
    #[error("|L| entered the singular band at t = {t}")]
    SingularBandReached { t: T, trajectory: AndoyerTrajectory<T> },
    #[error(transparent)]
    Core(#[from] Error),
}

/// Integrated part of the state: `(l, g, L)`, angles unwrapped.
type Reduced<T> = [T; 3];

fn reduced_rate<T: Real>(spec: &HamiltonianSpec<T>, template: &AndoyerState<T>, y: &Reduced<T>) -> Reduced<T> {
    let a = AndoyerState { l: y[0], g: y[1], big_l: y[2], ..*template };
    let r = hamilton_rhs(spec, &a);
    [r.l, r.g, r.big_l]
}

fn axpy<T: Real>(y: &Reduced<T>, k: &Reduced<T>, s: T) -> Reduced<T> {
    [y[0] + s * k[0], y[1] + s * k[1], y[2] + s * k[2]]
}

fn rk4_step<T: Real>(spec: &HamiltonianSpec<T>, template: &AndoyerState<T>, y: &Reduced<T>, dt: T) -> Reduced<T> {
    let half = dt * T::half();
    let k1 = reduced_rate(spec, template, y);
    let k2 = reduced_rate(spec, template, &axpy(y, &k1, half));
    let k3 = reduced_rate(spec, template, &axpy(y, &k2, half));
    let k4 = reduced_rate(spec, template, &axpy(y, &k3, dt));
    let six = T::lit(6.0);
    let mut out = *y;
    for i in 0..3 {
        out[i] = y[i] + dt / six * (k1[i] + T::two() * (k2[i] + k3[i]) + k4[i]);
    }
    out
}

fn midpoint_step<T: Real>(spec: &HamiltonianSpec<T>, template: &AndoyerState<T>, y: &Reduced<T>, dt: T) -> Reduced<T> {
    let mut next = rk4_step(spec, template, y, dt);
    let tol = T::epsilon() * T::lit(4.0) * (T::one() + template.big_g);
    for _ in 0..100 {
        let mid = [(y[0] + next[0]) * T::half(), (y[1] + next[1]) * T::half(), (y[2] + next[2]) * T::half()];
        let candidate = axpy(y, &reduced_rate(spec, template, &mid), dt);
        let change = (0..3).fold(T::zero(), |m, i| m.max((candidate[i] - next[i]).abs()));
        next = candidate;
        if change <= tol {
            break;
        }
    }
    next
}

fn in_band<T: Real>(big_l: T, big_g: T) -> bool {
    big_l.abs() > T::lit(SINGULAR_BAND) * big_g
}

fn sample<T: Real>(spec: &HamiltonianSpec<T>, t: T, state: AndoyerState<T>) -> Sample<T> {
    let momentum_body = momentum_vector_body(&state);
    Sample { t, state: state.normalized(), momentum_body, energy: spec.energy_of(momentum_body) }
}

/// Number of steps and the time of step `k`; the final step is shortened to land on `t_end`.
fn time_grid<T: Real>(t_end: T, dt: T) -> (usize, impl Fn(usize) -> T) {
    let ratio = (t_end / dt).to_f64_lossy();
    let mut n = ratio.round().max(0.0) as usize;
    if (n as f64) < ratio - 1e-9 * ratio.max(1.0) {
        n += 1;
    }
    (n, move |k: usize| if k >= n { t_end } else { (T::lit(k as f64) * dt).min(t_end) })
}

fn check_step_args<T: Real>(t_end: T, dt: T) -> Result<(), Error> {
    if !(dt > T::zero()) || !dt.is_finite() {
        return Err(Error::InvalidArgument(format!("dt = {dt} must be positive")));
    }
    if !(t_end >= T::zero()) || !t_end.is_finite() {
        return Err(Error::InvalidArgument(format!("t_end = {t_end} must be non-negative")));
    }
    Ok(())
}

/// Fixed-step integration of Hamilton's equations from `a0` to `t_end`, one sample per step.
///
/// `G`, `Θ` and `ϑ` are copied from `a0` unchanged.
pub fn integrate<T: Real>(
    spec: &HamiltonianSpec<T>,
    a0: &AndoyerState<T>,
    t_end: T,
    dt: T,
    method: Method,
) -> Result<AndoyerTrajectory<T>, DynamicsError<T>> {
    check_step_args(t_end, dt)?;
    a0.validate()?;
    if in_band(a0.big_l, a0.big_g) {
        return Err(Error::InvalidState(format!("initial |L|/G = {} is inside the singular band", (a0.big_l / a0.big_g).abs())).into());
    }
    let (n, time) = time_grid(t_end, dt);
    let mut samples = Vec::with_capacity(n + 1);
    samples.push(sample(spec, T::zero(), *a0));
    let mut y: Reduced<T> = [a0.l, a0.g, a0.big_l];
    for k in 1..=n {
        let h = time(k) - time(k - 1);
        y = match method {
            Method::Rk4 => rk4_step(spec, a0, &y, h),
            Method::Midpoint => midpoint_step(spec, a0, &y, h),
        };
        if !y.iter().all(|v| v.is_finite()) || in_band(y[2], a0.big_g) {
            return Err(DynamicsError::SingularBandReached { t: time(k), trajectory: AndoyerTrajectory { samples } });
        }
        let state = AndoyerState { l: y[0], g: y[1], big_l: y[2], ..*a0 };
        samples.push(sample(spec, time(k), state));
    }
    Ok(AndoyerTrajectory { samples })
}

/// RK4 integration of `Ṁ = M × I⁻¹M` in the body frame. `M` is never renormalised.
pub fn euler_oracle<T: Real>(spec: &HamiltonianSpec<T>, m0: Vec3<T>, t_end: T, dt: T) -> Result<Vec<(T, Vec3<T>)>, Error> {
    check_step_args(t_end, dt)?;
    if !(m0.norm() > T::zero()) {
        return Err(Error::ZeroMomentum);
    }
    let f = |m: Vec3<T>| m.cross(spec.omega_body(m));
    let (n, time) = time_grid(t_end, dt);
    let mut out = Vec::with_capacity(n + 1);
    let mut m = m0;
    out.push((T::zero(), m));
    for k in 1..=n {
        let h = time(k) - time(k - 1);
        let half = h * T::half();
        let k1 = f(m);
        let k2 = f(m + k1 * half);
        let k3 = f(m + k2 * half);
        let k4 = f(m + k3 * h);
        m += (k1 + (k2 + k3) * T::two() + k4) * (h / T::lit(6.0));
        out.push((time(k), m));
    }
    Ok(out)
}
