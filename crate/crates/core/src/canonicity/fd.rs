//! Central finite differences.

use crate::error::Result;
use crate::scalar::{wrap_angle_diff, Real};

/// Perturbed abscissae `x ± h` and the exactly representable spacing between them.
#[inline]
pub fn central_points<T: Real>(x: T, h: T) -> (T, T, T) {
    let plus = x + h;
    let minus = x - h;
    (plus, minus, plus - minus)
}

/// Difference of two function values, wrapped to `(−π, π]` for periodic components.
#[inline]
pub fn difference<T: Real, const N: usize>(plus: &[T; N], minus: &[T; N], periodic: &[bool; N]) -> [T; N] {
    let mut out = [T::zero(); N];
    for k in 0..N {
        let d = plus[k] - minus[k];
        out[k] = if periodic[k] { wrap_angle_diff(d) } else { d };
    }
    out
}

/// Directional derivative `d/ds f(s)` at `s = 0`.
pub fn directional<T: Real, const N: usize>(
    mut f: impl FnMut(T) -> Result<[T; N]>,
    h: T,
    periodic: &[bool; N],
) -> Result<[T; N]> {
    let plus = f(h)?;
    let minus = f(-h)?;
    let d = difference(&plus, &minus, periodic);
    let inv = T::one() / (h + h);
    Ok(d.map(|v| v * inv))
}

/// Jacobian `J[i][k] = ∂fᵢ/∂xₖ` of `f: ℝᴺ → ℝᴹ`.
pub fn jacobian<T: Real, const N: usize, const M: usize>(
    mut f: impl FnMut(&[T; N]) -> Result<[T; M]>,
    x: &[T; N],
    h: T,
    periodic: &[bool; M],
) -> Result<[[T; N]; M]> {
    let mut jac = [[T::zero(); N]; M];
    for k in 0..N {
        let (p, m, spacing) = central_points(x[k], h);
        let mut xp = *x;
        xp[k] = p;
        let mut xm = *x;
        xm[k] = m;
        let d = difference(&f(&xp)?, &f(&xm)?, periodic);
        for i in 0..M {
            jac[i][k] = d[i] / spacing;
        }
    }
    Ok(jac)
}
