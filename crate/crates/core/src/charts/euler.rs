//! 3-1-3 Euler angles `(φ, θ, ψ)` as generalised coordinates of the body.

use crate::error::{Error, Result};
use crate::geometry::{elem_rot, Mat3, Rot3, Vec3};
use crate::scalar::{normalize_angle, Real};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerAngles<T> {
    pub phi: T,
    pub theta: T,
    pub psi: T,
}

impl<T: Real> EulerAngles<T> {
    pub fn new(phi: T, theta: T, psi: T) -> Self {
        Self { phi, theta, psi }
    }

    pub fn from_vec(v: Vec3<T>) -> Self {
        Self::new(v.x, v.y, v.z)
    }

    pub fn to_vec(self) -> Vec3<T> {
        Vec3::new(self.phi, self.theta, self.psi)
    }

    /// `φ` and `ψ` in `[0, 2π)`; `θ` is left as is.
    pub fn normalized(self) -> Self {
        Self::new(normalize_angle(self.phi), self.theta, normalize_angle(self.psi))
    }
}

/// Coordinates with their velocities `q̇ = (φ̇, θ̇, ψ̇)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerVelocityState<T> {
    pub q: EulerAngles<T>,
    pub qdot: Vec3<T>,
}

/// Coordinates with their conjugate momenta `p = (p_φ, p_θ, p_ψ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerMomentumState<T> {
    pub q: EulerAngles<T>,
    pub p: Vec3<T>,
}

impl<T: Real> EulerVelocityState<T> {
    pub fn new(q: EulerAngles<T>, qdot: Vec3<T>) -> Self {
        Self { q, qdot }
    }
}

impl<T: Real> EulerMomentumState<T> {
    pub fn new(q: EulerAngles<T>, p: Vec3<T>) -> Self {
        Self { q, p }
    }

    /// Phase-space coordinates `(φ, θ, ψ, p_φ, p_θ, p_ψ)`.
    pub fn to_array(&self) -> [T; 6] {
        [self.q.phi, self.q.theta, self.q.psi, self.p.x, self.p.y, self.p.z]
    }

    pub fn from_array(x: [T; 6]) -> Self {
        Self::new(EulerAngles::new(x[0], x[1], x[2]), Vec3::new(x[3], x[4], x[5]))
    }
}

/// Passive attitude `R₃(ψ)·R₁(θ)·R₃(φ)`.
pub fn euler_attitude<T: Real>(q: &EulerAngles<T>) -> Rot3<T> {
    elem_rot(3, q.psi) * elem_rot(1, q.theta) * elem_rot(3, q.phi)
}

/// Kinematic matrix `B(q)` with `ω_body = B·q̇`.
///
/// Columns are the body coordinates of the absolute `Z` axis, the line of nodes and the body
/// `z` axis, in that order.
pub fn kinematic_matrix<T: Real>(q: &EulerAngles<T>) -> Mat3<T> {
    let (st, ct) = q.theta.sin_cos();
    let (sp, cp) = q.psi.sin_cos();
    let (z, o) = (T::zero(), T::one());
    Mat3::from_rows([[st * sp, cp, z], [st * cp, -sp, z], [ct, z, o]])
}

/// Body-frame angular velocity.
pub fn euler_kinematics<T: Real>(state: &EulerVelocityState<T>) -> Vec3<T> {
    kinematic_matrix(&state.q) * state.qdot
}

fn check_nutation<T: Real>(q: &EulerAngles<T>) -> Result<()> {
    let s = q.theta.sin();
    if s.abs() <= T::CHART_TOL {
        return Err(Error::ChartSingular {
            projection: "sin θ = 0: Euler precession and spin axes coincide",
            ratio: s.to_f64_lossy(),
        });
    }
    Ok(())
}

/// Body-frame angular momentum `M` from the conjugate momenta, solving `Bᵀ·M = p`.
///
/// Needs no inertia: `p_j = M·(∂ω/∂q̇_j)` holds for any rigid body.
pub fn momentum_body_from_euler<T: Real>(state: &EulerMomentumState<T>) -> Result<Vec3<T>> {
    check_nutation(&state.q)?;
    let bt = kinematic_matrix(&state.q).transpose();
    let inv = bt.inverse().ok_or(Error::ChartSingular {
        projection: "sin θ = 0: Euler precession and spin axes coincide",
        ratio: 0.0,
    })?;
    Ok(inv * state.p)
}

/// Conjugate momenta `p = Bᵀ·M` of a body-frame angular momentum.
pub fn euler_momenta_from_body<T: Real>(q: &EulerAngles<T>, momentum_body: Vec3<T>) -> Vec3<T> {
    kinematic_matrix(q).transpose() * momentum_body
}

/// Recovers `(φ, θ, ψ)` from a passive attitude; `φ, ψ ∈ [0, 2π)`, `θ ∈ [0, π]`.
pub fn euler_angles_from_attitude<T: Real>(a: &Rot3<T>) -> Result<EulerAngles<T>> {
    let m = a.matrix().m;
    let theta = m[2][2].max(-T::one()).min(T::one()).acos();
    let q = EulerAngles::new(T::zero(), theta, T::zero());
    check_nutation(&q)?;
    let phi = m[2][0].atan2(-m[2][1]);
    let psi = m[0][2].atan2(m[1][2]);
    Ok(EulerAngles::new(phi, theta, psi).normalized())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::TAU;

    type V = Vec3<f64>;

    fn close(a: V, b: V, tol: f64) -> bool {
        (a - b).max_abs() <= tol
    }

    // ω_body from dA/dt·Aᵀ = −[ω_body]×, central differences of the attitude along q̇.
    fn fd_omega_body(s: &EulerVelocityState<f64>, h: f64) -> V {
        let at = |t: f64| euler_attitude(&EulerAngles::from_vec(s.q.to_vec() + s.qdot * t));
        let d = (*at(h).matrix() - *at(-h).matrix()).scale(0.5 / h);
        let w = d * at(0.0).matrix().transpose();
        V::new(0.5 * (w.m[1][2] - w.m[2][1]), 0.5 * (w.m[2][0] - w.m[0][2]), 0.5 * (w.m[0][1] - w.m[1][0]))
    }

    #[test]
    fn pure_spin() {
        let s = EulerVelocityState::new(EulerAngles::new(0.3, 1.1, 2.0), V::new(0.0, 0.0, 2.5));
        assert!(close(euler_kinematics(&s), V::new(0.0, 0.0, 2.5), 1e-16));
    }

    #[test]
    fn pure_precession() {
        let (th, ps, c) = (0.7, 1.9, 1.3);
        let s = EulerVelocityState::new(EulerAngles::new(0.4, th, ps), V::new(c, 0.0, 0.0));
        let expected = V::new(th.sin() * ps.sin(), th.sin() * ps.cos(), th.cos()) * c;
        assert!(close(euler_kinematics(&s), expected, 1e-15));
        assert!(close(fd_omega_body(&s, 1e-5), expected, 1e-9));
    }

    #[test]
    fn singular_nutation() {
        let q = EulerAngles::new(0.1, 0.0, 0.2);
        let st = EulerMomentumState::new(q, V::new(1.0, 0.0, 1.0));
        assert!(matches!(momentum_body_from_euler(&st), Err(Error::ChartSingular { .. })));
        assert!(euler_angles_from_attitude(&Rot3::<f64>::identity()).is_err());
    }

    fn angles() -> impl Strategy<Value = EulerAngles<f64>> {
        (0.0..TAU, 0.05..3.09f64, 0.0..TAU).prop_map(|(a, b, c)| EulerAngles::new(a, b, c))
    }

    fn vec3() -> impl Strategy<Value = V> {
        (-3.0..3.0f64, -3.0..3.0f64, -3.0..3.0f64).prop_map(|(x, y, z)| V::new(x, y, z))
    }

    proptest! {
        #[test]
        fn kinematics_match_attitude_derivative(q in angles(), qd in vec3()) {
            let s = EulerVelocityState::new(q, qd);
            let w = euler_kinematics(&s);
            prop_assert!(close(fd_omega_body(&s, 1e-5), w, 1e-8 * (1.0 + qd.norm())));
        }

        #[test]
        fn attitude_round_trip(q in angles()) {
            let back = euler_angles_from_attitude(&euler_attitude(&q)).unwrap();
            prop_assert!(close(back.to_vec(), q.to_vec(), 1e-9));
        }

        #[test]
        fn momenta_round_trip(q in angles(), m in vec3()) {
            let p = euler_momenta_from_body(&q, m);
            let back = momentum_body_from_euler(&EulerMomentumState::new(q, p)).unwrap();
            prop_assert!(close(back, m, 1e-9 * (1.0 + m.norm()) / q.theta.sin()));
        }
    }
}
