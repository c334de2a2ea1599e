//! Coordinate charts on the rigid-body phase space.
//!
//! [`andoyer`] is the Andoyer chart: the frame chain `OXYZ → Oξηζ → Oxyz`, the forward and
//! inverse maps, and the five virtual-rotation axes. [`euler`] is a 3-1-3 Euler-angle chart used
//! as the reference set of generalised coordinates.

pub mod andoyer;
pub mod euler;

pub use andoyer::{
    andoyer_attitude, andoyer_from_state, angle_axis, body_attitude, frame_vectors, momentum_vector_abs,
    momentum_vector_body, rates_to_omega, virtual_rotation_axis, AndoyerAngles, AndoyerState, ChartAngle,
    FrameBasis,
};
pub use euler::{
    euler_angles_from_attitude, euler_attitude, euler_kinematics, euler_momenta_from_body, kinematic_matrix,
    momentum_body_from_euler, EulerAngles, EulerMomentumState, EulerVelocityState,
};

use crate::error::Result;
use crate::scalar::Real;

/// Andoyer variables of a point given in Euler coordinates and momenta.
///
/// Inertia-free: the absolute angular momentum is `Aᵀ·B⁻ᵀ·p`.
pub fn andoyer_from_euler<T: Real>(state: &EulerMomentumState<T>) -> Result<AndoyerState<T>> {
    let attitude = euler_attitude(&state.q);
    let m_body = momentum_body_from_euler(state)?;
    andoyer_from_state(&attitude, attitude.transpose_mul(m_body))
}

/// Euler coordinates and momenta of an Andoyer state.
pub fn euler_from_andoyer<T: Real>(a: &AndoyerState<T>) -> Result<EulerMomentumState<T>> {
    let q = euler_angles_from_attitude(&body_attitude(a))?;
    let p = euler_momenta_from_body(&q, momentum_vector_body(a));
    Ok(EulerMomentumState::new(q, p))
}
