//! Rigid body as a finite system of point masses.
//!
//! Angular momentum and kinetic energy are evaluated as explicit sums over the points; the
//! inertia tensor is only a derived quantity for the dynamics layer.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::charts::euler::{kinematic_matrix, EulerMomentumState, EulerVelocityState};
use crate::error::{Error, Result};
use crate::geometry::{Mat3, Rot3, Vec3};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointMass<T> {
    pub mass: T,
    /// Position in the body frame.
    pub position: Vec3<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointMassBody<T> {
    entries: Vec<PointMass<T>>,
}

impl<T: Real> PointMassBody<T> {
    pub fn new(entries: Vec<PointMass<T>>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidBody("at least one point mass is required".into()));
        }
        for (i, e) in entries.iter().enumerate() {
            if !(e.mass > T::zero()) || !e.mass.is_finite() {
                return Err(Error::InvalidBody(format!("mass #{i} = {} must be positive", e.mass)));
            }
            if !e.position.is_finite() {
                return Err(Error::InvalidBody(format!("position #{i} is not finite")));
            }
        }
        Ok(Self { entries })
    }

    pub fn from_parts(masses: &[T], positions: &[Vec3<T>]) -> Result<Self> {
        if masses.len() != positions.len() {
            return Err(Error::InvalidBody(format!(
                "{} masses but {} positions",
                masses.len(),
                positions.len()
            )));
        }
        Self::new(
            masses
                .iter()
                .zip(positions)
                .map(|(&mass, &position)| PointMass { mass, position })
                .collect(),
        )
    }

    pub fn entries(&self) -> &[PointMass<T>] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total_mass(&self) -> T {
        self.entries.iter().fold(T::zero(), |s, e| s + e.mass)
    }

    /// Positive-definite inertia; required by the dynamics layer only.
    pub fn is_nondegenerate(&self) -> bool {
        inertia_tensor(self).is_positive_definite()
    }

    /// Same body with its mass distribution rotated by `r` in the body frame (`b ↦ r·b`).
    pub fn rotated(&self, r: &Rot3<T>) -> Self {
        Self {
            entries: self
                .entries
                .iter()
                .map(|e| PointMass { mass: e.mass, position: *r * e.position })
                .collect(),
        }
    }

    pub fn with_scaled_masses(&self, s: T) -> Result<Self> {
        Self::new(self.entries.iter().map(|e| PointMass { mass: e.mass * s, ..*e }).collect())
    }

    pub fn cast<U: Real>(&self) -> PointMassBody<U> {
        PointMassBody {
            entries: self
                .entries
                .iter()
                .map(|e| PointMass { mass: U::lit(e.mass.to_f64_lossy()), position: e.position.cast() })
                .collect(),
        }
    }
}

/// On-disk body description: `{"masses": [..], "positions": [[x, y, z], ..]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BodyFile {
    pub masses: Vec<f64>,
    pub positions: Vec<[f64; 3]>,
}

impl BodyFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidBody(e.to_string()))
    }

    pub fn to_body<T: Real>(&self) -> Result<PointMassBody<T>> {
        let masses: Vec<T> = self.masses.iter().map(|&m| T::lit(m)).collect();
        let positions: Vec<Vec3<T>> = self
            .positions
            .iter()
            .map(|p| Vec3::from_array(*p).cast())
            .collect();
        PointMassBody::from_parts(&masses, &positions)
    }

    pub fn from_body<T: Real>(body: &PointMassBody<T>) -> Self {
        Self {
            masses: body.entries.iter().map(|e| e.mass.to_f64_lossy()).collect(),
            positions: body.entries.iter().map(|e| e.position.cast::<f64>().to_array()).collect(),
        }
    }
}

/// Symmetric body-frame inertia tensor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InertiaTensor<T> {
    m: Mat3<T>,
}

impl<T: Real> InertiaTensor<T> {
    /// Checks symmetry and the triangle inequalities of the principal moments.
    pub fn new(m: Mat3<T>) -> Result<Self> {
        let scale = m.max_abs().max(T::one());
        if !m.is_symmetric(T::ORTHO_TOL * scale) {
            return Err(Error::InvalidInertia("matrix is not symmetric".into()));
        }
        let t = Self { m };
        let [a, b, c] = t.eigenvalues();
        if a < -T::lit(1e-9) * scale {
            return Err(Error::InvalidInertia(format!("negative principal moment {a}")));
        }
        // Sorted ascending, so only a + b ≥ c can fail.
        if a + b < c - T::lit(1e-9) * c.abs().max(T::min_positive_value()) {
            return Err(Error::InvalidInertia(format!(
                "principal moments ({a}, {b}, {c}) violate the triangle inequality"
            )));
        }
        Ok(t)
    }

    pub fn diagonal(i1: T, i2: T, i3: T) -> Result<Self> {
        Self::new(Mat3::diagonal(Vec3::new(i1, i2, i3)))
    }

    /// `Rᵀ·I·R`: the tensor seen from a frame rotated by `r`.
    pub fn conjugated(&self, r: &Rot3<T>) -> Result<Self> {
        let rm = *r.matrix();
        let mut m = rm.transpose() * self.m * rm;
        // Restore exact symmetry lost to rounding.
        m = Mat3::from_fn(|i, j| (m.m[i][j] + m.m[j][i]) * T::half());
        Self::new(m)
    }

    pub fn matrix(&self) -> &Mat3<T> {
        &self.m
    }

    /// Principal moments, ascending.
    pub fn eigenvalues(&self) -> [T; 3] {
        self.m.symmetric_eigenvalues()
    }

    pub fn is_positive_definite(&self) -> bool {
        self.eigenvalues()[0] > T::zero()
    }

    /// Ratio of the largest to the smallest principal moment; infinite if not positive definite.
    pub fn condition_number(&self) -> T {
        let [a, _, c] = self.eigenvalues();
        if a > T::zero() {
            c / a
        } else {
            T::infinity()
        }
    }
}

/// Absolute positions `rᵢ = Aᵀ·bᵢ`.
pub fn positions_abs<T: Real>(body: &PointMassBody<T>, attitude: &Rot3<T>) -> Vec<Vec3<T>> {
    body.entries.iter().map(|e| attitude.transpose_mul(e.position)).collect()
}

/// Rigid-motion velocities `ṙᵢ = ω × rᵢ`.
pub fn velocities<T: Real>(body: &PointMassBody<T>, attitude: &Rot3<T>, omega_abs: Vec3<T>) -> Vec<Vec3<T>> {
    positions_abs(body, attitude)
        .into_iter()
        .map(|r| omega_abs.cross(r))
        .collect()
}

/// `Σ mᵢ (rᵢ × ṙᵢ)`, absolute coordinates.
pub fn angular_momentum<T: Real>(body: &PointMassBody<T>, attitude: &Rot3<T>, omega_abs: Vec3<T>) -> Vec3<T> {
    body.entries.iter().fold(Vec3::zero(), |acc, e| {
        let r = attitude.transpose_mul(e.position);
        acc + r.cross(omega_abs.cross(r)) * e.mass
    })
}

/// `½ Σ mᵢ (ṙᵢ · ṙᵢ)`.
pub fn kinetic_energy<T: Real>(body: &PointMassBody<T>, attitude: &Rot3<T>, omega_abs: Vec3<T>) -> T {
    let twice = body.entries.iter().fold(T::zero(), |acc, e| {
        let v = omega_abs.cross(attitude.transpose_mul(e.position));
        acc + e.mass * v.norm_squared()
    });
    twice * T::half()
}

/// `Σ mᵢ (‖bᵢ‖²·Id − bᵢbᵢᵀ)` in the body frame.
pub fn inertia_tensor<T: Real>(body: &PointMassBody<T>) -> InertiaTensor<T> {
    let m = body.entries.iter().fold(Mat3::zeros(), |acc, e| {
        let b = e.position;
        acc + (Mat3::identity().scale(b.norm_squared()) - b.outer(b)).scale(e.mass)
    });
    InertiaTensor { m }
}

/// Mass matrix `M(q) = Bᵀ·I·B` of the Euler chart.
pub fn mass_matrix<T: Real>(body: &PointMassBody<T>, q: &crate::charts::EulerAngles<T>) -> Mat3<T> {
    let b = kinematic_matrix(q);
    b.transpose() * *inertia_tensor(body).matrix() * b
}

/// Conjugate momenta `p = M(q)·q̇`.
pub fn euler_momenta<T: Real>(body: &PointMassBody<T>, state: &EulerVelocityState<T>) -> EulerMomentumState<T> {
    EulerMomentumState::new(state.q, mass_matrix(body, &state.q) * state.qdot)
}

const MAX_FIXTURE_RESAMPLES: usize = 100;

/// Deterministic random body: masses in `[0.5, 2]`, positions uniform in a ball of radius
/// `scale`, smallest principal moment at least `0.05` of the largest.
pub fn random_body<T: Real>(seed: u64, n: usize, scale: T) -> Result<PointMassBody<T>> {
    random_body_with(&mut ChaCha8Rng::seed_from_u64(seed), n, scale)
}

pub fn random_body_with<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize, scale: T) -> Result<PointMassBody<T>> {
    if n < 4 {
        return Err(Error::Fixture(format!("need at least 4 point masses, got {n}")));
    }
    if !(scale > T::zero()) {
        return Err(Error::Fixture(format!("scale {scale} must be positive")));
    }
    let radius = scale.to_f64_lossy();
    for _ in 0..MAX_FIXTURE_RESAMPLES {
        let entries = (0..n)
            .map(|_| {
                let mass = T::lit(rng.gen_range(0.5..=2.0));
                let position = loop {
                    let p = Vec3::new(
                        rng.gen_range(-1.0..=1.0),
                        rng.gen_range(-1.0..=1.0),
                        rng.gen_range(-1.0..=1.0),
                    );
                    if p.norm_squared() <= 1.0 {
                        break (p * radius).cast();
                    }
                };
                PointMass { mass, position }
            })
            .collect();
        let body = PointMassBody { entries };
        let [lo, _, hi] = inertia_tensor(&body).eigenvalues();
        if lo >= T::lit(0.05) * hi {
            return Ok(body);
        }
    }
    Err(Error::Fixture(format!(
        "no well-conditioned body after {MAX_FIXTURE_RESAMPLES} draws"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charts::EulerAngles;
    use crate::geometry::{elem_rot, rot_about_axis};
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_2;

    type V = Vec3<f64>;

    fn unit_mass(b: V) -> PointMassBody<f64> {
        PointMassBody::from_parts(&[1.0], &[b]).unwrap()
    }

    fn tetrahedron() -> PointMassBody<f64> {
        let p = [V::new(1., 1., 1.), V::new(1., -1., -1.), V::new(-1., 1., -1.), V::new(-1., -1., 1.)];
        PointMassBody::from_parts(&[1.0; 4], &p).unwrap()
    }

    fn close(a: V, b: V, tol: f64) -> bool {
        (a - b).max_abs() <= tol
    }

    #[test]
    fn construction_errors() {
        assert!(PointMassBody::<f64>::new(vec![]).is_err());
        assert!(PointMassBody::from_parts(&[0.0], &[V::zero()]).is_err());
        assert!(PointMassBody::from_parts(&[1.0, 2.0], &[V::zero()]).is_err());
        assert!(PointMassBody::from_parts(&[1.0], &[V::new(f64::NAN, 0.0, 0.0)]).is_err());
    }

    #[test]
    fn positions_and_velocities() {
        let body = unit_mass(V::basis(1));
        assert_eq!(positions_abs(&body, &Rot3::identity()), vec![V::basis(1)]);
        let r = positions_abs(&body, &elem_rot(3, FRAC_PI_2));
        assert!(close(r[0], V::basis(2), 1e-16));
        assert_eq!(velocities(&body, &Rot3::identity(), V::zero()), vec![V::zero()]);
        assert_eq!(velocities(&body, &Rot3::identity(), V::basis(3)), vec![V::basis(2)]);
    }

    #[test]
    fn single_mass_sums() {
        let body = unit_mass(V::basis(1));
        let id = Rot3::identity();
        assert_eq!(angular_momentum(&body, &id, V::basis(3)), V::basis(3));
        assert_eq!(angular_momentum(&body, &id, V::zero()), V::zero());
        assert_eq!(kinetic_energy(&body, &id, V::basis(3)), 0.5);
        assert_eq!(kinetic_energy(&body, &id, V::zero()), 0.0);
    }

    #[test]
    fn inertia_examples() {
        assert_eq!(*inertia_tensor(&unit_mass(V::basis(1))).matrix(), Mat3::diagonal(V::new(0., 1., 1.)));
        let pair = PointMassBody::from_parts(&[1.0, 1.0], &[V::basis(3), -V::basis(3)]).unwrap();
        assert_eq!(*inertia_tensor(&pair).matrix(), Mat3::diagonal(V::new(2., 2., 0.)));
        assert!(!pair.is_nondegenerate());
        assert_eq!(*inertia_tensor(&tetrahedron()).matrix(), Mat3::identity().scale(8.0));
    }

    #[test]
    fn inertia_validation() {
        assert!(InertiaTensor::diagonal(1.0, 1.0, 3.0).is_err());
        assert!(InertiaTensor::diagonal(1.0, 2.0, 3.0).is_ok());
        assert!(InertiaTensor::new(Mat3::from_rows([[1.0, 0.1, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])).is_err());
        let t = InertiaTensor::diagonal(1.0, 2.0, 3.0).unwrap();
        assert_eq!(t.condition_number(), 3.0);
    }

    #[test]
    fn isotropic_momenta() {
        // I = 8·Id, so p_ψ = 8·(ψ̇ + φ̇ cos θ).
        let body = tetrahedron();
        let s = EulerVelocityState::new(EulerAngles::new(0.3, 1.2, -0.4), V::new(0.7, -0.2, 1.1));
        let p = euler_momenta(&body, &s).p;
        assert!((p.z - 8.0 * (1.1 + 0.7 * 1.2_f64.cos())).abs() < 1e-13);
        let zero = euler_momenta(&body, &EulerVelocityState::new(s.q, V::zero())).p;
        assert_eq!(zero, V::zero());
    }

    #[test]
    fn random_body_contract() {
        let a = random_body::<f64>(7, 5, 1.0).unwrap();
        let b = random_body::<f64>(7, 5, 1.0).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, random_body::<f64>(8, 5, 1.0).unwrap());
        assert!(random_body::<f64>(1, 3, 1.0).is_err());
        for seed in 0..200 {
            let body = random_body::<f64>(seed, 5, 2.0).unwrap();
            let ev = inertia_tensor(&body).eigenvalues();
            assert!(ev[0] >= 0.05 * ev[2] && ev[0] > 0.0);
            for e in body.entries() {
                assert!((0.5..=2.0).contains(&e.mass));
                assert!(e.position.norm() <= 2.0);
            }
        }
    }

    #[test]
    fn body_file_round_trip() {
        let text = r#"{"masses": [1.0, 2.0], "positions": [[1, 0, 0], [0, 0.5, 0]]}"#;
        let body: PointMassBody<f64> = BodyFile::parse(text).unwrap().to_body().unwrap();
        assert_eq!(body.len(), 2);
        assert_eq!(BodyFile::from_body(&body), BodyFile::parse(text).unwrap());
        assert!(BodyFile::parse(r#"{"masses": [1.0]}"#).is_err());
        assert!(BodyFile::parse(r#"{"masses": [1], "positions": [[0,0,1]], "x": 1}"#).is_err());
        assert!(BodyFile::parse(r#"{"masses": [-1], "positions": [[0,0,1]]}"#).unwrap().to_body::<f64>().is_err());
    }

    fn vec3() -> impl Strategy<Value = V> {
        (-2.0..2.0f64, -2.0..2.0f64, -2.0..2.0f64).prop_map(|(x, y, z)| V::new(x, y, z))
    }

    fn attitude() -> impl Strategy<Value = Rot3<f64>> {
        (0.0..6.3f64, 0.0..3.1f64, 0.0..6.3f64)
            .prop_map(|(a, b, c)| crate::charts::euler_attitude(&EulerAngles::new(a, b, c)))
    }

    proptest! {
        #[test]
        fn sums_match_inertia_oracle(seed in 0u64..1000, a in attitude(), w in vec3()) {
            let body = random_body::<f64>(seed, 5, 1.0).unwrap();
            let gv = angular_momentum(&body, &a, w);
            let i = *inertia_tensor(&body).matrix();
            let oracle = a.transpose_mul(i * (a * w));
            prop_assert!(close(gv, oracle, 1e-12 * (1.0 + gv.norm())));
            let t = kinetic_energy(&body, &a, w);
            prop_assert!(t >= 0.0);
            prop_assert!((t - 0.5 * w.dot(gv)).abs() <= 1e-12 * (1.0 + t));
            let wb = a * w;
            prop_assert!((t - 0.5 * wb.dot(i * wb)).abs() <= 1e-12 * (1.0 + t));
            for (r, v) in positions_abs(&body, &a).iter().zip(velocities(&body, &a, w)) {
                prop_assert!(r.dot(v).abs() <= 1e-12 * (1.0 + r.norm() * v.norm()));
            }
        }

        #[test]
        fn isometry(seed in 0u64..1000, a in attitude()) {
            let body = random_body::<f64>(seed, 5, 1.0).unwrap();
            for (r, e) in positions_abs(&body, &a).iter().zip(body.entries()) {
                prop_assert!((r.norm() - e.position.norm()).abs() < 1e-14);
            }
        }

        #[test]
        fn frame_covariance(seed in 0u64..1000, a in attitude(), r0 in attitude(), w in vec3()) {
            let body = random_body::<f64>(seed, 5, 1.0).unwrap();
            let g1 = angular_momentum(&body, &a, w);
            let g2 = angular_momentum(&body.rotated(&r0), &(r0 * a), w);
            prop_assert!(close(g1, g2, 1e-10 * (1.0 + g1.norm())));
        }

        #[test]
        fn momenta_are_velocity_gradient_of_energy(seed in 0u64..1000, q in (0.0..6.3f64, 0.1..3.0f64, 0.0..6.3f64), qd in vec3()) {
            let body = random_body::<f64>(seed, 5, 1.0).unwrap();
            let q = EulerAngles::new(q.0, q.1, q.2);
            let p = euler_momenta(&body, &EulerVelocityState::new(q, qd)).p;
            let att = crate::charts::euler_attitude(&q);
            let energy = |v: V| {
                let w_abs = att.transpose_mul(kinematic_matrix(&q) * v);
                kinetic_energy(&body, &att, w_abs)
            };
            let h = 1e-5;
            for j in 0..3 {
                let mut e = [0.0; 3];
                e[j] = h;
                let d = V::from_array(e);
                let fd = (energy(qd + d) - energy(qd - d)) / (2.0 * h);
                prop_assert!((fd - p[j]).abs() <= 1e-7 * (1.0 + p[j].abs()));
            }
            let m = mass_matrix(&body, &q);
            prop_assert!(m.is_symmetric(1e-12));
            prop_assert!(m.symmetric_eigenvalues()[0] >= -1e-12);
        }

        #[test]
        fn rodrigues_rotated_body_has_conjugated_inertia(seed in 0u64..500, ang in -3.0..3.0f64) {
            let body = random_body::<f64>(seed, 5, 1.0).unwrap();
            let r = rot_about_axis(V::new(2., -1., 2.) * (1.0 / 3.0), ang).unwrap();
            let rotated = inertia_tensor(&body.rotated(&r));
            let conj = inertia_tensor(&body).conjugated(&r.transpose()).unwrap();
            prop_assert!((*rotated.matrix() - *conj.matrix()).max_abs() < 1e-12);
        }
    }
}
