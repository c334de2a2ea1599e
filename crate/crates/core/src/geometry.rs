//! Three-vectors, 3×3 matrices and proper rotations.
//!
//! Rotations come in two flavours. [`elem_rot`] builds *passive* elementary rotations (the
//! frame turns counterclockwise, so coordinates turn clockwise): `elem_rot(3, a)` has first
//! row `(cos a, sin a, 0)`. [`rot_about_axis`] builds *active* rotations by the Rodrigues
//! formula, so `rot_about_axis(eₖ, a) = elem_rot(k, a)ᵀ`.

use std::ops::{Add, AddAssign, Index, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3<T> {
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Real> Vec3<T> {
    #[inline]
    pub const fn new(x: T, y: T, z: T) -> Self {
        Self { x, y, z }
    }

    #[inline]
    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero())
    }

    /// Unit vector along coordinate axis `k ∈ {1, 2, 3}`.
    pub fn basis(k: usize) -> Self {
        let (o, z) = (T::one(), T::zero());
        match k {
            1 => Self::new(o, z, z),
            2 => Self::new(z, o, z),
            3 => Self::new(z, z, o),
            _ => panic!("axis index {k} not in 1..=3"),
        }
    }

    pub fn from_array(a: [T; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }

    pub fn to_array(self) -> [T; 3] {
        [self.x, self.y, self.z]
    }

    #[inline]
    pub fn dot(self, o: Self) -> T {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    #[inline]
    pub fn cross(self, o: Self) -> Self {
        Self::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    #[inline]
    pub fn norm_squared(self) -> T {
        self.dot(self)
    }

    #[inline]
    pub fn norm(self) -> T {
        self.norm_squared().sqrt()
    }

    /// Largest absolute component.
    pub fn max_abs(self) -> T {
        self.x.abs().max(self.y.abs()).max(self.z.abs())
    }

    /// `None` for the zero vector.
    pub fn normalized(self) -> Option<Self> {
        let n = self.norm();
        if n > T::zero() {
            Some(self * (T::one() / n))
        } else {
            None
        }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Outer product `self·oᵀ`.
    pub fn outer(self, o: Self) -> Mat3<T> {
        let a = self.to_array();
        let b = o.to_array();
        Mat3::from_fn(|i, j| a[i] * b[j])
    }

    pub fn cast<U: Real>(self) -> Vec3<U> {
        Vec3::new(
            U::lit(self.x.to_f64_lossy()),
            U::lit(self.y.to_f64_lossy()),
            U::lit(self.z.to_f64_lossy()),
        )
    }
}

impl<T: Real> Index<usize> for Vec3<T> {
    type Output = T;
    fn index(&self, i: usize) -> &T {
        match i {
            0 => &self.x,
            1 => &self.y,
            2 => &self.z,
            _ => panic!("Vec3 index {i} out of range"),
        }
    }
}

impl<T: Real> Add for Vec3<T> {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl<T: Real> AddAssign for Vec3<T> {
    #[inline]
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl<T: Real> Sub for Vec3<T> {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl<T: Real> Neg for Vec3<T> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y, -self.z)
    }
}

impl<T: Real> Mul<T> for Vec3<T> {
    type Output = Self;
    #[inline]
    fn mul(self, s: T) -> Self {
        Self::new(self.x * s, self.y * s, self.z * s)
    }
}

#[inline]
pub fn dot<T: Real>(a: Vec3<T>, b: Vec3<T>) -> T {
    a.dot(b)
}

#[inline]
pub fn cross<T: Real>(a: Vec3<T>, b: Vec3<T>) -> Vec3<T> {
    a.cross(b)
}

/// Mixed product `a · (b × c)`.
#[inline]
pub fn mixed<T: Real>(a: Vec3<T>, b: Vec3<T>, c: Vec3<T>) -> T {
    a.dot(b.cross(c))
}

/// Plain 3×3 matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat3<T> {
    pub m: [[T; 3]; 3],
}

impl<T: Real> Mat3<T> {
    pub const fn from_rows(m: [[T; 3]; 3]) -> Self {
        Self { m }
    }

    pub fn from_fn(f: impl Fn(usize, usize) -> T) -> Self {
        let mut m = [[T::zero(); 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = f(i, j);
            }
        }
        Self { m }
    }

    /// Matrix whose columns are `a`, `b`, `c`.
    pub fn from_columns(a: Vec3<T>, b: Vec3<T>, c: Vec3<T>) -> Self {
        Self::from_rows([[a.x, b.x, c.x], [a.y, b.y, c.y], [a.z, b.z, c.z]])
    }

    pub fn identity() -> Self {
        Self::from_fn(|i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn zeros() -> Self {
        Self::from_fn(|_, _| T::zero())
    }

    pub fn diagonal(d: Vec3<T>) -> Self {
        let d = d.to_array();
        Self::from_fn(|i, j| if i == j { d[i] } else { T::zero() })
    }

    pub fn row(&self, i: usize) -> Vec3<T> {
        Vec3::from_array(self.m[i])
    }

    pub fn col(&self, j: usize) -> Vec3<T> {
        Vec3::new(self.m[0][j], self.m[1][j], self.m[2][j])
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(|i, j| self.m[j][i])
    }

    pub fn scale(&self, s: T) -> Self {
        Self::from_fn(|i, j| self.m[i][j] * s)
    }

    pub fn det(&self) -> T {
        mixed(self.row(0), self.row(1), self.row(2))
    }

    pub fn trace(&self) -> T {
        self.m[0][0] + self.m[1][1] + self.m[2][2]
    }

    /// Inverse by the adjugate; `None` when the determinant vanishes.
    pub fn inverse(&self) -> Option<Self> {
        let d = self.det();
        if d == T::zero() || !d.is_finite() {
            return None;
        }
        // Columns of the inverse are the pairwise row cross products over det.
        let (r0, r1, r2) = (self.row(0), self.row(1), self.row(2));
        let inv = Self::from_columns(r1.cross(r2), r2.cross(r0), r0.cross(r1)).scale(T::one() / d);
        Some(inv)
    }

    /// Infinity norm (largest absolute row sum).
    pub fn norm_inf(&self) -> T {
        self.m
            .iter()
            .map(|r| r[0].abs() + r[1].abs() + r[2].abs())
            .fold(T::zero(), T::max)
    }

    pub fn max_abs(&self) -> T {
        self.m.iter().flatten().fold(T::zero(), |a, &e| a.max(e.abs()))
    }

    pub fn is_symmetric(&self, tol: T) -> bool {
        (0..3).all(|i| (0..3).all(|j| (self.m[i][j] - self.m[j][i]).abs() <= tol))
    }

    /// Eigenvalues of a symmetric matrix in ascending order (cyclic Jacobi sweeps).
    #[allow(clippy::needless_range_loop)]
    pub fn symmetric_eigenvalues(&self) -> [T; 3] {
        let mut a = self.m;
        let scale = self.max_abs();
        if scale == T::zero() {
            return [T::zero(); 3];
        }
        for _ in 0..64 {
            let off = (a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2]).sqrt();
            if off <= T::epsilon() * T::lit(1e-2) * scale {
                break;
            }
            for (p, q) in [(0usize, 1usize), (0, 2), (1, 2)] {
                if a[p][q] == T::zero() {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (T::two() * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                for k in 0..3 {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..3 {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
        let mut ev = [a[0][0], a[1][1], a[2][2]];
        ev.sort_by(|x, y| x.partial_cmp(y).unwrap_or(std::cmp::Ordering::Equal));
        ev
    }

    pub fn cast<U: Real>(&self) -> Mat3<U> {
        Mat3::from_fn(|i, j| U::lit(self.m[i][j].to_f64_lossy()))
    }
}

impl<T: Real> Mul<Vec3<T>> for Mat3<T> {
    type Output = Vec3<T>;
    #[inline]
    fn mul(self, v: Vec3<T>) -> Vec3<T> {
        Vec3::new(self.row(0).dot(v), self.row(1).dot(v), self.row(2).dot(v))
    }
}

impl<T: Real> Mul for Mat3<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self::from_fn(|i, j| self.row(i).dot(o.col(j)))
    }
}

impl<T: Real> Add for Mat3<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::from_fn(|i, j| self.m[i][j] + o.m[i][j])
    }
}

impl<T: Real> Sub for Mat3<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::from_fn(|i, j| self.m[i][j] - o.m[i][j])
    }
}

/// Skew-symmetric matrix `[u]×` with `[u]×·v = u × v`.
pub fn skew<T: Real>(u: Vec3<T>) -> Mat3<T> {
    let z = T::zero();
    Mat3::from_rows([[z, -u.z, u.y], [u.z, z, -u.x], [-u.y, u.x, z]])
}

/// Proper orthogonal 3×3 matrix.
///
/// Used passively throughout the crate: for an attitude `A`, `v_body = A·v_abs`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rot3<T> {
    m: Mat3<T>,
}

impl<T: Real> Rot3<T> {
    /// Validates `‖RᵀR − I‖∞ ≤ ORTHO_TOL` and `|det R − 1| ≤ ORTHO_TOL`.
    pub fn new(m: Mat3<T>) -> Result<Self> {
        let ortho = (m.transpose() * m - Mat3::identity()).norm_inf();
        let det = m.det();
        if !(ortho <= T::ORTHO_TOL) || !((det - T::one()).abs() <= T::ORTHO_TOL) {
            return Err(Error::NotARotation {
                orthogonality: ortho.to_f64_lossy(),
                det: det.to_f64_lossy(),
            });
        }
        Ok(Self { m })
    }

    /// Wraps a product of validated rotations without re-checking.
    pub(crate) fn from_matrix_unchecked(m: Mat3<T>) -> Self {
        Self { m }
    }

    pub fn identity() -> Self {
        Self { m: Mat3::identity() }
    }

    pub fn matrix(&self) -> &Mat3<T> {
        &self.m
    }

    pub fn transpose(&self) -> Self {
        Self { m: self.m.transpose() }
    }

    /// `Rᵀ·v`, i.e. the inverse map.
    pub fn transpose_mul(&self, v: Vec3<T>) -> Vec3<T> {
        Vec3::new(self.m.col(0).dot(v), self.m.col(1).dot(v), self.m.col(2).dot(v))
    }

    pub fn row(&self, i: usize) -> Vec3<T> {
        self.m.row(i)
    }
}

impl<T: Real> Mul for Rot3<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self { m: self.m * o.m }
    }
}

impl<T: Real> Mul<Vec3<T>> for Rot3<T> {
    type Output = Vec3<T>;
    fn mul(self, v: Vec3<T>) -> Vec3<T> {
        self.m * v
    }
}

/// Passive rotation by `angle` about coordinate axis `axis_index ∈ {1, 2, 3}`.
///
/// # Panics
///
/// If `axis_index` is not 1, 2 or 3.
pub fn elem_rot<T: Real>(axis_index: usize, angle: T) -> Rot3<T> {
    let (s, c) = angle.sin_cos();
    let (o, z) = (T::one(), T::zero());
    let m = match axis_index {
        1 => [[o, z, z], [z, c, s], [z, -s, c]],
        2 => [[c, z, -s], [z, o, z], [s, z, c]],
        3 => [[c, s, z], [-s, c, z], [z, z, o]],
        _ => panic!("axis index {axis_index} not in 1..=3"),
    };
    Rot3::from_matrix_unchecked(Mat3::from_rows(m))
}

/// Active (counterclockwise) rotation by `angle` about the unit vector `axis`.
pub fn rot_about_axis<T: Real>(axis: Vec3<T>, angle: T) -> Result<Rot3<T>> {
    let n = axis.norm();
    if !((n - T::one()).abs() <= T::UNIT_TOL) {
        return Err(Error::NonUnitAxis { norm: n.to_f64_lossy() });
    }
    // Renormalise so the result is orthogonal to working precision.
    let u = axis * (T::one() / n);
    let (s, c) = angle.sin_cos();
    let m = Mat3::identity().scale(c) + skew(u).scale(s) + u.outer(u).scale(T::one() - c);
    Ok(Rot3::from_matrix_unchecked(m))
}
