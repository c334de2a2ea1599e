//! Andoyer variables for rigid-body rotation about a fixed point.
//!
//! The crate provides the Andoyer chart and a 3-1-3 Euler chart ([`charts`]), a point-mass
//! body model ([`body`]), a finite-difference verification suite showing that the Andoyer
//! chart is canonical ([`canonicity`]), and free-rotation dynamics in Andoyer variables for a
//! general, non-principal body frame ([`dynamics`]).
//!
//! All numerics are generic over [`Real`] (`f32` or `f64`); the aliases below fix `f64`,
//! which is what the verification tolerances are calibrated for.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod body;
pub mod canonicity;
pub mod charts;
pub mod dynamics;
pub mod error;
pub mod geometry;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Vec3d = geometry::Vec3<f64>;
pub type Vec3f = geometry::Vec3<f32>;
pub type Mat3d = geometry::Mat3<f64>;
pub type Rot3d = geometry::Rot3<f64>;
pub type Rot3f = geometry::Rot3<f32>;
pub type AndoyerStated = charts::AndoyerState<f64>;
pub type AndoyerStatef = charts::AndoyerState<f32>;
pub type EulerAnglesd = charts::EulerAngles<f64>;
pub type PointMassBodyd = body::PointMassBody<f64>;
pub type InertiaTensord = body::InertiaTensor<f64>;
pub type PhasePointd = canonicity::PhasePoint<f64>;
pub type HamiltonianSpecd = dynamics::HamiltonianSpec<f64>;
pub type AndoyerTrajectoryd = dynamics::AndoyerTrajectory<f64>;
