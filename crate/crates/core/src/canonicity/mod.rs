//! Numerical verification that the Andoyer chart is canonical.
//!
//! Four checks, each reducing to a residual compared against a fixed tolerance:
//!
//! * virtual-rotation coefficients: turning the body about each chart axis at unit rate and
//!   pairing the point displacements with the true point velocities gives `(L, G, Θ, 0, 0)`;
//! * one-form identity: `p·dq = L dl + G dg + Θ dϑ` along random phase-space tangents;
//! * symplectic Jacobian: `J·Ω·Jᵀ = Ω` for the Jacobian of `(q, p) ↦ (l, g, ϑ, L, G, Θ)`;
//! * Lagrange relation: `∂rᵢ/∂qⱼ = ∂ṙᵢ/∂q̇ⱼ` for the Euler chart.
//!
//! Derivatives are central finite differences. Where a check differentiates a map it is
//! re-evaluated at `h/2`, and disagreement beyond the tolerance is reported as
//! [`Error::StepTooSmall`] rather than a pass.

mod checks;
pub mod fd;
mod suite;

use serde::{Deserialize, Serialize};

use crate::body::{angular_momentum, euler_momenta, inertia_tensor, PointMassBody};
use crate::charts::{
    andoyer_from_euler, andoyer_from_state, euler_attitude, kinematic_matrix, momentum_body_from_euler, AndoyerState,
    EulerMomentumState, EulerVelocityState,
};
use crate::error::{Error, Result};
use crate::geometry::{Rot3, Vec3};
use crate::scalar::Real;

pub use checks::{
    lagrange_relation_check, oneform_check, oneform_check_with, oneform_residual, poisson_matrix,
    symplectic_jacobian_check, symplectic_jacobian_check_with, symplectic_unit, virtual_coefficients_analytic,
    virtual_coefficients_fd,
};
pub use suite::{draw_fixture, run_suite, run_suite_with, BodySource, Fixture, Steps, SuiteConfig, Tolerances};

/// A phase-space point in Euler coordinates with the derived body state.
#[derive(Debug, Clone, PartialEq)]
pub struct PhasePoint<T> {
    euler: EulerMomentumState<T>,
    attitude: Rot3<T>,
    omega_abs: Vec3<T>,
    momentum_abs: Vec3<T>,
    andoyer: AndoyerState<T>,
}

impl<T: Real> PhasePoint<T> {
    /// Point reached by moving `body` with Euler rates `state.qdot`.
    pub fn from_velocities(body: &PointMassBody<T>, state: &EulerVelocityState<T>) -> Result<Self> {
        let attitude = euler_attitude(&state.q);
        let omega_abs = attitude.transpose_mul(kinematic_matrix(&state.q) * state.qdot);
        let momentum_abs = angular_momentum(body, &attitude, omega_abs);
        let andoyer = andoyer_from_state(&attitude, momentum_abs)?;
        Ok(Self { euler: euler_momenta(body, state), attitude, omega_abs, momentum_abs, andoyer })
    }

    /// Point with the given Euler momenta; needs positive-definite inertia to recover `ω`.
    pub fn from_momenta(body: &PointMassBody<T>, state: &EulerMomentumState<T>) -> Result<Self> {
        let attitude = euler_attitude(&state.q);
        let m_body = momentum_body_from_euler(state)?;
        let inertia = inertia_tensor(body);
        let inv = if inertia.is_positive_definite() { inertia.matrix().inverse() } else { None };
        let inv = inv.ok_or(Error::SingularInertia { condition: inertia.condition_number().to_f64_lossy() })?;
        let omega_abs = attitude.transpose_mul(inv * m_body);
        let momentum_abs = attitude.transpose_mul(m_body);
        let andoyer = andoyer_from_euler(state)?;
        Ok(Self { euler: *state, attitude, omega_abs, momentum_abs, andoyer })
    }

    pub fn euler(&self) -> &EulerMomentumState<T> {
        &self.euler
    }

    pub fn attitude(&self) -> &Rot3<T> {
        &self.attitude
    }

    pub fn omega_abs(&self) -> Vec3<T> {
        self.omega_abs
    }

    pub fn momentum_abs(&self) -> Vec3<T> {
        self.momentum_abs
    }

    pub fn andoyer(&self) -> &AndoyerState<T> {
        &self.andoyer
    }

    /// Both `|L|` and `|Θ|` at most `(1 − margin)·G`.
    pub fn within_margin(&self, margin: T) -> bool {
        let a = &self.andoyer;
        let bound = (T::one() - margin) * a.big_g;
        a.big_l.abs() <= bound && a.big_theta.abs() <= bound
    }
}

/// Coefficients of `dl, dg, dϑ, dχ, dρ` in `Σ mᵢ ṙᵢ·drᵢ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoefficientSet<T> {
    pub k_l: T,
    pub k_g: T,
    pub k_theta: T,
    pub k_chi: T,
    pub k_rho: T,
}

impl<T: Real> CoefficientSet<T> {
    pub fn from_array(k: [T; 5]) -> Self {
        Self { k_l: k[0], k_g: k[1], k_theta: k[2], k_chi: k[3], k_rho: k[4] }
    }

    pub fn to_array(&self) -> [T; 5] {
        [self.k_l, self.k_g, self.k_theta, self.k_chi, self.k_rho]
    }

    /// Values the coefficients must take for a canonical chart: `(L, G, Θ, 0, 0)`.
    pub fn expected(a: &AndoyerState<T>) -> Self {
        Self::from_array([a.big_l, a.big_g, a.big_theta, T::zero(), T::zero()])
    }

    /// `max |kᵥ − expectedᵥ| / G`.
    pub fn residual(&self, a: &AndoyerState<T>) -> T {
        self.to_array()
            .iter()
            .zip(Self::expected(a).to_array())
            .fold(T::zero(), |m, (&k, e)| m.max((k - e).abs()))
            / a.big_g
    }
}

/// Outcome of one named check.
///
/// Serialises to exactly `check_name, max_residual, tolerance, trials, seed, passed`; the
/// per-trial residuals stay in memory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check_name: String,
    pub max_residual: f64,
    pub tolerance: f64,
    pub trials: usize,
    pub seed: u64,
    pub passed: bool,
    #[serde(skip)]
    pub details: Vec<f64>,
}

impl CheckReport {
    /// A NaN residual makes the maximum NaN and the check fail.
    pub fn new(check_name: impl Into<String>, details: Vec<f64>, tolerance: f64, seed: u64) -> Self {
        let max_residual = details.iter().fold(0.0_f64, |m, &r| if r.is_nan() || m.is_nan() { f64::NAN } else { m.max(r) });
        Self {
            check_name: check_name.into(),
            max_residual,
            tolerance,
            trials: details.len(),
            seed,
            passed: max_residual <= tolerance,
            details,
        }
    }
}

/// A map from Euler phase space `(φ, θ, ψ, p_φ, p_θ, p_ψ)` to candidate canonical variables
/// `(q'₁, q'₂, q'₃, p'₁, p'₂, p'₃)`.
pub trait CanonicalChart<T: Real> {
    fn name(&self) -> &str;

    fn coordinates(&self, x: &EulerMomentumState<T>) -> Result<[T; 6]>;

    /// Outputs that are angles and must be differenced modulo `2π`.
    fn periodic(&self) -> [bool; 6];
}

/// `(q, p) ↦ (l, g, ϑ, L, G, Θ)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct AndoyerChart;

impl<T: Real> CanonicalChart<T> for AndoyerChart {
    fn name(&self) -> &str {
        "andoyer"
    }

    fn coordinates(&self, x: &EulerMomentumState<T>) -> Result<[T; 6]> {
        Ok(andoyer_from_euler(x)?.to_array())
    }

    fn periodic(&self) -> [bool; 6] {
        [true, true, true, false, false, false]
    }
}

/// `(q, p) ↦ (q, p)`; calibrates the checkers themselves.
#[derive(Debug, Clone, Copy, Default)]
pub struct IdentityChart;

impl<T: Real> CanonicalChart<T> for IdentityChart {
    fn name(&self) -> &str {
        "identity"
    }

    fn coordinates(&self, x: &EulerMomentumState<T>) -> Result<[T; 6]> {
        Ok(x.to_array())
    }

    fn periodic(&self) -> [bool; 6] {
        [false; 6]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::body::random_body;
    use crate::charts::EulerAngles;

    #[test]
    fn report_pass_flag() {
        let r = CheckReport::new("x", vec![1e-9, 3e-7, 2e-8], 1e-6, 4);
        assert!(r.passed);
        assert_eq!(r.max_residual, 3e-7);
        assert_eq!(r.trials, 3);
        assert!(!CheckReport::new("x", vec![1e-9, f64::NAN], 1e-6, 4).passed);
        assert!(!CheckReport::new("x", vec![2e-6], 1e-6, 4).passed);
        let json = serde_json::to_string(&r).unwrap();
        assert_eq!(
            json,
            r#"{"check_name":"x","max_residual":3e-7,"tolerance":1e-6,"trials":3,"seed":4,"passed":true}"#
        );
    }

    #[test]
    fn phase_point_constructors_agree() {
        let body = random_body::<f64>(11, 5, 1.0).unwrap();
        let v = EulerVelocityState::new(EulerAngles::new(0.4, 1.3, 2.2), Vec3::new(0.3, -0.8, 0.5));
        let a = PhasePoint::from_velocities(&body, &v).unwrap();
        let b = PhasePoint::from_momenta(&body, a.euler()).unwrap();
        assert!((a.omega_abs() - b.omega_abs()).max_abs() < 1e-10);
        assert!((a.momentum_abs() - b.momentum_abs()).max_abs() < 1e-10);
        for (x, y) in a.andoyer().to_array().iter().zip(b.andoyer().to_array()) {
            assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn aligned_spin_is_singular() {
        let body = random_body::<f64>(3, 5, 1.0).unwrap();
        // θ = 0 and pure spin: ω, e_z and e_Z all coincide only for an axisymmetric body, so
        // use a body symmetric about z.
        let sym = PointMassBody::from_parts(
            &[1.0, 1.0, 1.0, 1.0],
            &[Vec3::new(1.0, 0.0, 0.2), Vec3::new(-1.0, 0.0, 0.2), Vec3::new(0.0, 1.0, -0.2), Vec3::new(0.0, -1.0, -0.2)],
        )
        .unwrap();
        let v = EulerVelocityState::new(EulerAngles::new(0.0, 0.0, 0.0), Vec3::new(0.0, 0.0, 1.0));
        assert!(matches!(PhasePoint::from_velocities(&sym, &v), Err(Error::ChartSingular { .. })));
        let deg = PointMassBody::from_parts(&[1.0, 1.0], &[Vec3::basis(3), -Vec3::basis(3)]).unwrap();
        let p = EulerMomentumState::new(EulerAngles::new(0.1, 1.0, 0.2), Vec3::new(1.0, 0.0, 0.5));
        assert!(matches!(PhasePoint::from_momenta(&deg, &p), Err(Error::SingularInertia { .. })));
        assert!(PhasePoint::from_momenta(&body, &p).is_ok());
    }
}
