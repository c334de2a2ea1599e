use crate::error::{Error, Result};
use crate::geometry::{elem_rot, Rot3, Vec3};
use crate::scalar::{normalize_angle, Real};

/// Andoyer canonical variables: angles `(l, g, ϑ)` and their conjugate momenta `(L, G, Θ)`.
///
/// `G` is the norm of the angular momentum, `L` its projection on the body `z` axis and `Θ`
/// its projection on the absolute `Z` axis. Angles are not reduced on construction; use
/// [`AndoyerState::normalized`] for the `[0, 2π)` representative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AndoyerState<T> {
    pub l: T,
    pub g: T,
    pub theta: T,
    pub big_l: T,
    pub big_g: T,
    pub big_theta: T,
}

impl<T: Real> AndoyerState<T> {
    pub fn new(l: T, g: T, theta: T, big_l: T, big_g: T, big_theta: T) -> Result<Self> {
        let s = Self { l, g, theta, big_l, big_g, big_theta };
        s.validate()?;
        Ok(s)
    }

    /// Builds a state from the five angles and the momentum magnitude, `L = G cos χ`,
    /// `Θ = G cos ρ`.
    pub fn from_angles(angles: AndoyerAngles<T>, big_g: T) -> Result<Self> {
        Self::new(
            angles.l,
            angles.g,
            angles.theta,
            big_g * angles.chi.cos(),
            big_g,
            big_g * angles.rho.cos(),
        )
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.l, self.g, self.theta, self.big_l, self.big_g, self.big_theta];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidState("non-finite component".into()));
        }
        if !(self.big_g > T::zero()) {
            return Err(Error::InvalidState(format!("G = {} must be positive", self.big_g)));
        }
        if self.big_l.abs() > self.big_g || self.big_theta.abs() > self.big_g {
            return Err(Error::InvalidState(format!(
                "|L| = {} and |Θ| = {} must not exceed G = {}",
                self.big_l.abs(),
                self.big_theta.abs(),
                self.big_g
            )));
        }
        Ok(())
    }

    /// `χ = arccos(L/G) ∈ [0, π]`.
    pub fn chi(&self) -> T {
        clamp_unit(self.big_l / self.big_g).acos()
    }

    /// `ρ = arccos(Θ/G) ∈ [0, π]`.
    pub fn rho(&self) -> T {
        clamp_unit(self.big_theta / self.big_g).acos()
    }

    pub fn angles(&self) -> AndoyerAngles<T> {
        AndoyerAngles { l: self.l, chi: self.chi(), g: self.g, rho: self.rho(), theta: self.theta }
    }

    pub fn normalized(&self) -> Self {
        Self {
            l: normalize_angle(self.l),
            g: normalize_angle(self.g),
            theta: normalize_angle(self.theta),
            ..*self
        }
    }

    /// Multiplies the momenta by `s`, leaving the angles untouched.
    pub fn scale_momenta(&self, s: T) -> Self {
        Self {
            big_l: self.big_l * s,
            big_g: self.big_g * s,
            big_theta: self.big_theta * s,
            ..*self
        }
    }

    /// Errors when either node line is undefined (`|L|` or `|Θ|` within `CHART_TOL·G` of `G`).
    pub fn check_nodes(&self) -> Result<()> {
        let margin = T::CHART_TOL * self.big_g;
        if self.big_g - self.big_l.abs() <= margin {
            return Err(Error::ChartSingular {
                projection: "L = ±G: body z axis along the angular momentum",
                ratio: (self.big_l / self.big_g).to_f64_lossy(),
            });
        }
        if self.big_g - self.big_theta.abs() <= margin {
            return Err(Error::ChartSingular {
                projection: "Θ = ±G: absolute Z axis along the angular momentum",
                ratio: (self.big_theta / self.big_g).to_f64_lossy(),
            });
        }
        Ok(())
    }

    pub fn to_array(&self) -> [T; 6] {
        [self.l, self.g, self.theta, self.big_l, self.big_g, self.big_theta]
    }
}

fn clamp_unit<T: Real>(x: T) -> T {
    x.max(-T::one()).min(T::one())
}

/// The five position parameters `(l, χ, g, ρ, ϑ)` of the Andoyer chart, treated independently.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AndoyerAngles<T> {
    pub l: T,
    pub chi: T,
    pub g: T,
    pub rho: T,
    pub theta: T,
}

impl<T: Real> AndoyerAngles<T> {
    pub fn get(&self, which: ChartAngle) -> T {
        match which {
            ChartAngle::BodySpin => self.l,
            ChartAngle::MomentumSpin => self.g,
            ChartAngle::SpaceSpin => self.theta,
            ChartAngle::BodyTilt => self.chi,
            ChartAngle::MomentumTilt => self.rho,
        }
    }

    /// Copy with one angle shifted by `delta`.
    pub fn shifted(&self, which: ChartAngle, delta: T) -> Self {
        let mut out = *self;
        let slot = match which {
            ChartAngle::BodySpin => &mut out.l,
            ChartAngle::MomentumSpin => &mut out.g,
            ChartAngle::SpaceSpin => &mut out.theta,
            ChartAngle::BodyTilt => &mut out.chi,
            ChartAngle::MomentumTilt => &mut out.rho,
        };
        *slot = *slot + delta;
        out
    }
}

/// One of the five angle parameters of the chart, each paired with the axis its virtual
/// rotation turns the body about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChartAngle {
    /// `l`, about the body axis `e_z`.
    BodySpin,
    /// `g`, about the angular momentum direction `e_3`.
    MomentumSpin,
    /// `ϑ`, about the absolute axis `e_Z`.
    SpaceSpin,
    /// `χ`, about the node between the invariable plane and the body `xy` plane.
    BodyTilt,
    /// `ρ`, about the node between the absolute `XY` plane and the invariable plane.
    MomentumTilt,
}

impl ChartAngle {
    pub const ALL: [ChartAngle; 5] = [
        ChartAngle::BodySpin,
        ChartAngle::MomentumSpin,
        ChartAngle::SpaceSpin,
        ChartAngle::BodyTilt,
        ChartAngle::MomentumTilt,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            ChartAngle::BodySpin => "l",
            ChartAngle::MomentumSpin => "g",
            ChartAngle::SpaceSpin => "theta",
            ChartAngle::BodyTilt => "chi",
            ChartAngle::MomentumTilt => "rho",
        }
    }

    fn needs_nodes(self) -> bool {
        matches!(self, ChartAngle::BodyTilt | ChartAngle::MomentumTilt)
    }
}

/// Frame vectors of the chart in absolute coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameBasis<T> {
    /// Absolute `Z` axis.
    pub e_big_z: Vec3<T>,
    /// Unit angular momentum (`Oζ`).
    pub e_3: Vec3<T>,
    /// Body `z` axis.
    pub e_z: Vec3<T>,
    /// Node of the absolute `XY` plane on the invariable plane.
    pub n1: Vec3<T>,
    /// Node of the invariable plane on the body `xy` plane.
    pub n2: Vec3<T>,
}

/// Passive attitude `R₃(l)·R₁(χ)·R₃(g)·R₁(ρ)·R₃(ϑ)` of the five-angle parameterisation.
pub fn andoyer_attitude<T: Real>(a: &AndoyerAngles<T>) -> Rot3<T> {
    elem_rot(3, a.l) * elem_rot(1, a.chi) * momentum_frame(a.g, a.rho, a.theta)
}

/// Passive map from absolute coordinates to the frame whose third axis is the angular momentum
/// and whose first axis is the node `n2`.
fn momentum_frame<T: Real>(g: T, rho: T, theta: T) -> Rot3<T> {
    elem_rot(3, g) * elem_rot(1, rho) * elem_rot(3, theta)
}

/// Body attitude `A` with `v_body = A·v_abs`.
pub fn body_attitude<T: Real>(a: &AndoyerState<T>) -> Rot3<T> {
    andoyer_attitude(&a.angles())
}

pub fn frame_vectors<T: Real>(a: &AndoyerState<T>) -> Result<FrameBasis<T>> {
    a.check_nodes()?;
    Ok(frame_vectors_unchecked(&a.angles()))
}

fn frame_vectors_unchecked<T: Real>(a: &AndoyerAngles<T>) -> FrameBasis<T> {
    let momentum = momentum_frame(a.g, a.rho, a.theta);
    let body = elem_rot(3, a.l) * elem_rot(1, a.chi) * momentum;
    FrameBasis {
        e_big_z: Vec3::basis(3),
        e_3: momentum.row(2),
        e_z: body.row(2),
        n1: elem_rot(3, a.theta).row(0),
        n2: momentum.row(0),
    }
}

/// Axis of the unit-rate virtual rotation for `which`, in absolute coordinates.
pub fn virtual_rotation_axis<T: Real>(a: &AndoyerState<T>, which: ChartAngle) -> Result<Vec3<T>> {
    if which.needs_nodes() {
        a.check_nodes()?;
    }
    Ok(axis_of(&frame_vectors_unchecked(&a.angles()), which))
}

/// Axis for the five-angle parameterisation directly, without singularity checks.
pub fn angle_axis<T: Real>(a: &AndoyerAngles<T>, which: ChartAngle) -> Vec3<T> {
    axis_of(&frame_vectors_unchecked(a), which)
}

fn axis_of<T: Real>(f: &FrameBasis<T>, which: ChartAngle) -> Vec3<T> {
    match which {
        ChartAngle::BodySpin => f.e_z,
        ChartAngle::MomentumSpin => f.e_3,
        ChartAngle::SpaceSpin => f.e_big_z,
        ChartAngle::BodyTilt => f.n2,
        ChartAngle::MomentumTilt => f.n1,
    }
}

/// Angular momentum in absolute coordinates, `G·e_3`.
pub fn momentum_vector_abs<T: Real>(a: &AndoyerState<T>) -> Vec3<T> {
    let (sr, cr) = a.rho().sin_cos();
    // R₃(ϑ)ᵀ·(0, −sin ρ, cos ρ)
    let (st, ct) = a.theta.sin_cos();
    Vec3::new(sr * st, -sr * ct, cr) * a.big_g
}

/// Angular momentum in body coordinates, `(√(G²−L²) sin l, √(G²−L²) cos l, L)`.
pub fn momentum_vector_body<T: Real>(a: &AndoyerState<T>) -> Vec3<T> {
    let s = (a.big_g * a.big_g - a.big_l * a.big_l).max(T::zero()).sqrt();
    let (sl, cl) = a.l.sin_cos();
    Vec3::new(s * sl, s * cl, a.big_l)
}

/// Inverse chart: attitude and absolute angular momentum to Andoyer variables, angles in
/// `[0, 2π)`.
pub fn andoyer_from_state<T: Real>(attitude: &Rot3<T>, momentum_abs: Vec3<T>) -> Result<AndoyerState<T>> {
    let big_g = momentum_abs.norm();
    if !(big_g > T::zero()) {
        return Err(Error::ZeroMomentum);
    }
    let e_3 = momentum_abs * (T::one() / big_g);
    let e_z = attitude.row(2);
    let e_big_z = Vec3::<T>::basis(3);
    let big_theta = momentum_abs.z.max(-big_g).min(big_g);
    let body = *attitude * momentum_abs;
    let big_l = body.z.max(-big_g).min(big_g);

    let state = AndoyerState { l: T::zero(), g: T::zero(), theta: T::zero(), big_l, big_g, big_theta };
    state.check_nodes()?;

    let n1 = e_big_z.cross(e_3).normalized().ok_or(Error::ZeroMomentum)?;
    let n2 = e_3.cross(e_z).normalized().ok_or(Error::ZeroMomentum)?;
    let theta = n1.y.atan2(n1.x);
    let g = n2.dot(e_3.cross(n1)).atan2(n2.dot(n1));
    let l = body.x.atan2(body.y);

    Ok(AndoyerState { l, g, theta, ..state }.normalized())
}

/// Absolute angular velocity of the body for the given angle rates `(l̇, ġ, ϑ̇, χ̇, ρ̇)`.
pub fn rates_to_omega<T: Real>(a: &AndoyerState<T>, rates: [T; 5]) -> Result<Vec3<T>> {
    a.check_nodes()?;
    let f = frame_vectors_unchecked(&a.angles());
    Ok(ChartAngle::ALL
        .iter()
        .zip(rates)
        .fold(Vec3::zero(), |acc, (&w, r)| acc + axis_of(&f, w) * r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{skew, Mat3};
    use proptest::prelude::*;
    use std::f64::consts::TAU;

    type V = Vec3<f64>;

    fn state(l: f64, g: f64, th: f64, chi: f64, rho: f64, gg: f64) -> AndoyerState<f64> {
        AndoyerState::from_angles(AndoyerAngles { l, chi, g, rho, theta: th }, gg).unwrap()
    }

    fn close(a: V, b: V, tol: f64) -> bool {
        (a - b).max_abs() <= tol
    }

    fn angle_close(a: f64, b: f64, tol: f64) -> bool {
        crate::scalar::wrap_angle_diff(a - b).abs() <= tol
    }

    #[test]
    fn validation() {
        assert!(AndoyerState::new(0.0, 0.0, 0.0, 1.0, 0.0, 0.0).is_err());
        assert!(AndoyerState::new(0.0, 0.0, 0.0, 2.0, 1.0, 0.0).is_err());
        assert!(AndoyerState::new(0.0, 0.0, 0.0, 0.0, 1.0, -1.5).is_err());
        assert!(AndoyerState::new(f64::NAN, 0.0, 0.0, 0.0, 1.0, 0.0).is_err());
        assert!(AndoyerState::new(9.0, -1.0, 0.0, 1.0, 1.0, -1.0).is_ok());
    }

    #[test]
    fn aligned_state_is_identity() {
        let a = AndoyerState::new(0.0, 0.0, 0.0, 2.0, 2.0, 2.0).unwrap();
        assert!((*body_attitude(&a).matrix() - Mat3::identity()).max_abs() < 1e-15);
        assert_eq!(momentum_vector_abs(&a), V::new(0.0, 0.0, 2.0));
        assert_eq!(momentum_vector_body(&a), V::new(0.0, 0.0, 2.0));
        assert!(matches!(frame_vectors(&a), Err(Error::ChartSingular { .. })));
        assert!(matches!(
            virtual_rotation_axis(&a, ChartAngle::BodyTilt),
            Err(Error::ChartSingular { .. })
        ));
        assert_eq!(virtual_rotation_axis(&a, ChartAngle::SpaceSpin).unwrap(), V::basis(3));
    }

    #[test]
    fn single_factor_collapse() {
        let a = AndoyerState::new(0.0, 0.0, 0.0, 1.7 * 0.3_f64.cos(), 1.7, 1.7).unwrap();
        let d = *body_attitude(&a).matrix() - *elem_rot(1, 0.3).matrix();
        assert!(d.max_abs() < 1e-15);
    }

    #[test]
    fn node_along_x_when_theta_zero() {
        let a = state(0.4, 1.1, 0.0, 0.8, 1.3, 2.0);
        let f = frame_vectors(&a).unwrap();
        assert!(close(f.n1, V::basis(1), 1e-15));
    }

    #[test]
    fn momentum_in_absolute_frame_at_zero_theta() {
        // Chain R₃(ϑ=0)ᵀ·R₁(ρ)ᵀ·(0,0,G) applied by hand.
        let rho = 0.9;
        let a = state(2.0, 0.5, 0.0, 1.0, rho, 3.0);
        let expected = V::new(0.0, -rho.sin(), rho.cos()) * 3.0;
        assert!(close(momentum_vector_abs(&a), expected, 1e-14));
        assert!(close(momentum_vector_abs(&state(1.0, 1.0, 1.0, 1.0, 0.0, 3.0)), V::new(0.0, 0.0, 3.0), 1e-15));
    }

    #[test]
    fn momentum_in_body_frame_convention() {
        let a = AndoyerState::new(0.0, 0.3, 0.2, 0.0, 1.0, 0.1).unwrap();
        assert!(close(momentum_vector_body(&a), V::new(0.0, 1.0, 0.0), 1e-16));
    }

    #[test]
    fn spin_and_node_rates() {
        let a = state(0.3, 2.0, 4.0, 1.0, 2.2, 1.5);
        let f = frame_vectors(&a).unwrap();
        let w = rates_to_omega(&a, [1.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        assert!(close(w, f.e_z, 1e-15));
        let w = rates_to_omega(&a, [0.0, 1.0, 0.0, 0.0, 0.0]).unwrap();
        assert!(close(w, momentum_vector_abs(&a) * (1.0 / a.big_g), 1e-15));
    }

    #[test]
    fn inverse_chart_examples() {
        let err = andoyer_from_state(&Rot3::identity(), V::new(0.0, 0.0, 5.0)).unwrap_err();
        assert!(matches!(err, Error::ChartSingular { .. }));
        assert_eq!(andoyer_from_state(&Rot3::identity(), V::zero()), Err(Error::ZeroMomentum));
        // Θ along Z is singular too, whatever the body tilt.
        let err = andoyer_from_state(&elem_rot(1, 0.5), V::new(0.0, 0.0, 3.0)).unwrap_err();
        assert!(matches!(err, Error::ChartSingular { .. }));
        // Tilting the momentum exposes Θ = G cos 0.5 by hand projection.
        let gvec = V::new(0.0, -0.5_f64.sin(), 0.5_f64.cos()) * 3.0;
        let a = andoyer_from_state(&elem_rot(1, 0.2), gvec).unwrap();
        assert!((a.big_g - 3.0).abs() < 1e-15);
        assert!((a.big_theta - 3.0 * 0.5_f64.cos()).abs() < 1e-15);
        assert!((a.big_l - 3.0 * 0.3_f64.cos()).abs() < 1e-15);
    }

    // Axis ω of a passive attitude curve: dAᵀ/ds = [ω]×·Aᵀ, extracted from central differences.
    fn fd_axis(f: impl Fn(f64) -> Rot3<f64>, h: f64) -> V {
        let plus = f(h).matrix().transpose();
        let minus = f(-h).matrix().transpose();
        let d = (plus - minus).scale(0.5 / h);
        let w = d * *f(0.0).matrix();
        V::new(0.5 * (w.m[2][1] - w.m[1][2]), 0.5 * (w.m[0][2] - w.m[2][0]), 0.5 * (w.m[1][0] - w.m[0][1]))
    }

    fn angles() -> impl Strategy<Value = AndoyerState<f64>> {
        (0.0..TAU, 0.0..TAU, 0.0..TAU, 0.05..3.09f64, 0.05..3.09f64, 0.1..10.0f64)
            .prop_map(|(l, g, th, chi, rho, gg)| state(l, g, th, chi, rho, gg))
    }

    proptest! {
        #[test]
        fn attitude_is_rotation(a in angles()) {
            prop_assert!(Rot3::new(*body_attitude(&a).matrix()).is_ok());
        }

        #[test]
        fn projections_are_consistent(a in angles()) {
            let f = frame_vectors(&a).unwrap();
            let gv = momentum_vector_abs(&a);
            let g = a.big_g;
            prop_assert!((gv.norm() - g).abs() <= 1e-9 * g);
            prop_assert!((gv.dot(f.e_big_z) - a.big_theta).abs() <= 1e-9 * g);
            prop_assert!((gv.dot(f.e_z) - a.big_l).abs() <= 1e-9 * g);
            prop_assert!((f.e_3.dot(f.e_big_z) - a.big_theta / g).abs() <= 1e-9);
            prop_assert!((f.e_3.dot(f.e_z) - a.big_l / g).abs() <= 1e-9);
            for v in [f.e_big_z, f.e_3, f.e_z, f.n1, f.n2] {
                prop_assert!((v.norm() - 1.0).abs() <= 1e-9);
            }
            prop_assert!(f.n1.dot(f.e_big_z).abs() <= 1e-9 && f.n1.dot(f.e_3).abs() <= 1e-9);
            prop_assert!(f.n2.dot(f.e_3).abs() <= 1e-9 && f.n2.dot(f.e_z).abs() <= 1e-9);
            // Node signs agree with the cross-product definitions.
            prop_assert!(close(f.n1, f.e_big_z.cross(f.e_3).normalized().unwrap(), 1e-9));
            prop_assert!(close(f.n2, f.e_3.cross(f.e_z).normalized().unwrap(), 1e-9));
        }

        #[test]
        fn tilt_axes_orthogonal_to_momentum(a in angles()) {
            let gv = momentum_vector_abs(&a);
            for w in [ChartAngle::BodyTilt, ChartAngle::MomentumTilt] {
                let axis = virtual_rotation_axis(&a, w).unwrap();
                prop_assert!(axis.dot(gv).abs() <= 1e-9 * a.big_g);
            }
            let axis_g = virtual_rotation_axis(&a, ChartAngle::MomentumSpin).unwrap();
            prop_assert!(close(axis_g, gv * (1.0 / a.big_g), 1e-12));
        }

        #[test]
        fn body_momentum_matches_rotation_chain(a in angles()) {
            let m = momentum_vector_body(&a);
            let chained = body_attitude(&a) * momentum_vector_abs(&a);
            prop_assert!(close(m, chained, 1e-10 * a.big_g));
            prop_assert!((m.norm() - a.big_g).abs() <= 1e-10 * a.big_g);
        }

        #[test]
        fn round_trip(a in angles()) {
            let back = andoyer_from_state(&body_attitude(&a), momentum_vector_abs(&a)).unwrap();
            for (x, y) in [(back.l, a.l), (back.g, a.g), (back.theta, a.theta)] {
                prop_assert!(angle_close(x, y, 1e-8), "{x} vs {y}");
                prop_assert!((0.0..TAU).contains(&x));
            }
            for (x, y) in [(back.big_l, a.big_l), (back.big_g, a.big_g), (back.big_theta, a.big_theta)] {
                prop_assert!((x - y).abs() <= 1e-8 * a.big_g);
            }
        }

        #[test]
        fn virtual_axes_match_finite_differences(a in angles(), b in (-2.0..2.0f64, -2.0..2.0f64, -2.0..2.0f64)) {
            let b = V::new(b.0, b.1, b.2);
            let base = a.angles();
            let h = 1e-5;
            for w in ChartAngle::ALL {
                let r = |s: f64| andoyer_attitude(&base.shifted(w, s)).transpose_mul(b);
                let fd = (r(h) - r(-h)) * (0.5 / h);
                let expected = virtual_rotation_axis(&a, w).unwrap().cross(r(0.0));
                prop_assert!(close(fd, expected, 1e-6 * (1.0 + b.norm())), "{}", w.symbol());
                let axis = fd_axis(|s| andoyer_attitude(&base.shifted(w, s)), h);
                prop_assert!(close(axis, virtual_rotation_axis(&a, w).unwrap(), 1e-6));
            }
        }

        #[test]
        fn rates_match_attitude_derivative(a in angles(), r in proptest::array::uniform5(-2.0..2.0f64)) {
            let base = a.angles();
            let along = |s: f64| {
                let mut x = base;
                x.l += s * r[0];
                x.g += s * r[1];
                x.theta += s * r[2];
                x.chi += s * r[3];
                x.rho += s * r[4];
                andoyer_attitude(&x)
            };
            let fd = fd_axis(along, 1e-5);
            let w = rates_to_omega(&a, r).unwrap();
            prop_assert!(close(fd, w, 1e-6 * (1.0 + r.iter().map(|x| x.abs()).sum::<f64>())));
            prop_assert!((skew(w) * V::basis(1) - w.cross(V::basis(1))).max_abs() == 0.0);
        }
    }
}
