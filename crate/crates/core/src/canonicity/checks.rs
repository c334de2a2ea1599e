use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::fd::{central_points, directional, jacobian};
use super::{AndoyerChart, CanonicalChart, CheckReport, CoefficientSet, PhasePoint};
use crate::body::{angular_momentum, PointMassBody};
use crate::charts::{
    andoyer_attitude, euler_attitude, kinematic_matrix, virtual_rotation_axis, ChartAngle, EulerAngles,
    EulerMomentumState, EulerVelocityState,
};
use crate::error::{Error, Result};
use crate::geometry::Vec3;
use crate::scalar::Real;

fn check_step<T: Real>(h: T, lo: f64, hi: f64) -> Result<()> {
    let v = h.to_f64_lossy();
    if !(lo..=hi).contains(&v) {
        return Err(Error::InvalidArgument(format!("finite-difference step {v} outside [{lo}, {hi}]")));
    }
    Ok(())
}

/// Coefficients of `Σ mᵢ ṙᵢ·drᵢ` with `drᵢ` from central differences of the positions in each
/// chart angle, the other four held fixed and `ṙᵢ` held at the point's true velocities.
pub fn virtual_coefficients_fd<T: Real>(
    body: &PointMassBody<T>,
    point: &PhasePoint<T>,
    h: T,
) -> Result<CoefficientSet<T>> {
    check_step(h, 1e-8, 1e-3)?;
    point.andoyer().check_nodes()?;
    let angles = point.andoyer().angles();
    let omega = point.omega_abs();
    let mut k = [T::zero(); 5];
    for (slot, which) in k.iter_mut().zip(ChartAngle::ALL) {
        let v = angles.get(which);
        let (plus, minus, spacing) = central_points(v, h);
        let a_plus = andoyer_attitude(&angles.shifted(which, plus - v));
        let a_minus = andoyer_attitude(&angles.shifted(which, minus - v));
        *slot = body.entries().iter().fold(T::zero(), |acc, e| {
            let r = point.attitude().transpose_mul(e.position);
            let rdot = omega.cross(r);
            let dr = (a_plus.transpose_mul(e.position) - a_minus.transpose_mul(e.position)) * (T::one() / spacing);
            acc + e.mass * rdot.dot(dr)
        });
    }
    Ok(CoefficientSet::from_array(k))
}

/// Closed form of the same coefficients: `kᵥ = (Σ mᵢ rᵢ × ṙᵢ)·axisᵥ`.
pub fn virtual_coefficients_analytic<T: Real>(body: &PointMassBody<T>, point: &PhasePoint<T>) -> Result<CoefficientSet<T>> {
    let a = point.andoyer();
    let momentum = angular_momentum(body, point.attitude(), point.omega_abs());
    let mut k = [T::zero(); 5];
    for (slot, which) in k.iter_mut().zip(ChartAngle::ALL) {
        *slot = momentum.dot(virtual_rotation_axis(a, which)?);
    }
    Ok(CoefficientSet::from_array(k))
}

fn along<T: Real>(x: &[T; 6], tangent: &[T; 6], s: T) -> EulerMomentumState<T> {
    let mut y = *x;
    for (yi, ti) in y.iter_mut().zip(tangent) {
        *yi = *yi + s * *ti;
    }
    EulerMomentumState::from_array(y)
}

/// Residual of `p·δq = Σ p'ₖ δq'ₖ` along one tangent, with the `h` vs `h/2` discrepancy.
///
/// Both are relative to `1 + |p·δq|`.
pub fn oneform_residual<T: Real, C: CanonicalChart<T> + ?Sized>(
    chart: &C,
    x: &EulerMomentumState<T>,
    tangent: &[T; 6],
    h: T,
) -> Result<(T, T)> {
    let base = chart.coordinates(x)?;
    let periodic = chart.periodic();
    let xa = x.to_array();
    let lhs = x.p.x * tangent[0] + x.p.y * tangent[1] + x.p.z * tangent[2];
    let rhs = |step: T| -> Result<T> {
        let d = directional(|s| chart.coordinates(&along(&xa, tangent, s)), step, &periodic)?;
        Ok(base[3] * d[0] + base[4] * d[1] + base[5] * d[2])
    };
    let coarse = rhs(h)?;
    let fine = rhs(h * T::half())?;
    let norm = T::one() + lhs.abs();
    Ok(((lhs - coarse).abs() / norm, (coarse - fine).abs() / norm))
}

/// One-form identity along `directions` random tangents.
pub fn oneform_check<T: Real>(point: &PhasePoint<T>, directions: usize, h: T, tolerance: f64, seed: u64) -> Result<CheckReport> {
    oneform_check_with(&AndoyerChart, point, directions, h, tolerance, seed)
}

pub fn oneform_check_with<T: Real, C: CanonicalChart<T> + ?Sized>(
    chart: &C,
    point: &PhasePoint<T>,
    directions: usize,
    h: T,
    tolerance: f64,
    seed: u64,
) -> Result<CheckReport> {
    let x = point.euler();
    let p_scale = x.p.max_abs().max(T::one());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut details = Vec::with_capacity(directions);
    for _ in 0..directions {
        let mut t = [T::zero(); 6];
        for (k, tk) in t.iter_mut().enumerate() {
            let u = T::lit(rng.gen_range(-1.0..=1.0));
            *tk = if k < 3 { u } else { u * p_scale };
        }
        let (residual, discrepancy) = oneform_residual(chart, x, &t, h)?;
        if discrepancy.to_f64_lossy() > tolerance {
            return Err(Error::StepTooSmall { check: "oneform_identity", discrepancy: discrepancy.to_f64_lossy() });
        }
        details.push(residual.to_f64_lossy());
    }
    Ok(CheckReport::new("oneform_identity", details, tolerance, seed))
}

/// `J·Ω·Jᵀ` for the finite-difference Jacobian `J` of the chart at `x`: the matrix of Poisson
/// brackets of the new coordinates.
pub fn poisson_matrix<T: Real, C: CanonicalChart<T> + ?Sized>(
    chart: &C,
    x: &EulerMomentumState<T>,
    h: T,
) -> Result<[[T; 6]; 6]> {
    let j = jacobian(|y: &[T; 6]| chart.coordinates(&EulerMomentumState::from_array(*y)), &x.to_array(), h, &chart.periodic())?;
    let mut out = [[T::zero(); 6]; 6];
    for (a, row) in out.iter_mut().enumerate() {
        for (b, e) in row.iter_mut().enumerate() {
            *e = (0..3).fold(T::zero(), |s, k| s + j[a][k] * j[b][k + 3] - j[a][k + 3] * j[b][k]);
        }
    }
    Ok(out)
}

/// Standard symplectic matrix pairing coordinate `k` with momentum `k + 3`.
pub fn symplectic_unit<T: Real>() -> [[T; 6]; 6] {
    let mut o = [[T::zero(); 6]; 6];
    for k in 0..3 {
        o[k][k + 3] = T::one();
        o[k + 3][k] = -T::one();
    }
    o
}

fn max_deviation<T: Real>(a: &[[T; 6]; 6], b: &[[T; 6]; 6]) -> T {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .fold(T::zero(), |m, (&x, &y)| if (x - y).is_nan() { T::nan() } else { m.max((x - y).abs()) })
}

pub fn symplectic_jacobian_check<T: Real>(point: &PhasePoint<T>, h: T, tolerance: f64, seed: u64) -> Result<CheckReport> {
    symplectic_jacobian_check_with(&AndoyerChart, point, h, tolerance, seed)
}

/// `max |J·Ω·Jᵀ − Ω|` over all entries.
pub fn symplectic_jacobian_check_with<T: Real, C: CanonicalChart<T> + ?Sized>(
    chart: &C,
    point: &PhasePoint<T>,
    h: T,
    tolerance: f64,
    seed: u64,
) -> Result<CheckReport> {
    let coarse = poisson_matrix(chart, point.euler(), h)?;
    let fine = poisson_matrix(chart, point.euler(), h * T::half())?;
    let discrepancy = max_deviation(&coarse, &fine).to_f64_lossy();
    if discrepancy > tolerance {
        return Err(Error::StepTooSmall { check: "symplectic_jacobian", discrepancy });
    }
    let residual = max_deviation(&coarse, &symplectic_unit()).to_f64_lossy();
    Ok(CheckReport::new("symplectic_jacobian", vec![residual], tolerance, seed))
}

fn position<T: Real>(q: &EulerAngles<T>, b: Vec3<T>) -> Vec3<T> {
    euler_attitude(q).transpose_mul(b)
}

fn velocity<T: Real>(q: &EulerAngles<T>, qdot: Vec3<T>, b: Vec3<T>) -> Vec3<T> {
    let a = euler_attitude(q);
    let omega = a.transpose_mul(kinematic_matrix(q) * qdot);
    omega.cross(a.transpose_mul(b))
}

/// `∂rᵢ/∂qⱼ = ∂ṙᵢ/∂q̇ⱼ` for every point mass and Euler coordinate, both sides by central
/// differences.
pub fn lagrange_relation_check<T: Real>(
    body: &PointMassBody<T>,
    state: &EulerVelocityState<T>,
    h: T,
    tolerance: f64,
    seed: u64,
) -> Result<CheckReport> {
    let q0 = state.q.to_vec();
    let mut details = Vec::with_capacity(3 * body.len());
    for e in body.entries() {
        let b = e.position;
        for j in 0..3 {
            let unit = Vec3::basis(j + 1);
            let dr = |step: T| {
                directional(|s| Ok(position(&EulerAngles::from_vec(q0 + unit * s), b).to_array()), step, &[false; 3])
                    .map(Vec3::from_array)
            };
            let dv = |step: T| {
                directional(|s| Ok(velocity(&state.q, state.qdot + unit * s, b).to_array()), step, &[false; 3])
                    .map(Vec3::from_array)
            };
            let (lhs, rhs) = (dr(h)?, dv(h)?);
            let norm = T::one() + lhs.norm();
            let discrepancy = ((lhs - dr(h * T::half())?).norm().max((rhs - dv(h * T::half())?).norm()) / norm).to_f64_lossy();
            if discrepancy > tolerance {
                return Err(Error::StepTooSmall { check: "lagrange_relation", discrepancy });
            }
            details.push(((lhs - rhs).norm() / norm).to_f64_lossy());
        }
    }
    Ok(CheckReport::new("lagrange_relation", details, tolerance, seed))
}
