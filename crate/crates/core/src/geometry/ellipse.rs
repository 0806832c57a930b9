//! Ellipse routines. The nearest-point solve is a bisection on the Lagrange
//! multiplier condition in the first quadrant of the sorted-axes frame,
//! which converges for interior and exterior query points alike.

use crate::error::{Error, Result};
use crate::rng::Rng;
use crate::scalar::{real, Real};
use crate::vec2::Vec2;

const MAX_ROOT_ITERATIONS: usize = 100;

pub fn diameter<T: Real>(
    center: Vec2<T>,
    semi_axes: [T; 2],
    rotation: T,
) -> (T, (Vec2<T>, Vec2<T>)) {
    let (len, dir) = if semi_axes[0] >= semi_axes[1] {
        (semi_axes[0], Vec2::new(T::one(), T::zero()).rotated(rotation))
    } else {
        (semi_axes[1], Vec2::new(T::zero(), T::one()).rotated(rotation))
    };
    let p = center - dir.scaled(len);
    let q = center + dir.scaled(len);
    let pair = if p.lex_le(q) { (p, q) } else { (q, p) };
    (len + len, pair)
}

fn to_local<T: Real>(center: Vec2<T>, rotation: T, p: Vec2<T>) -> Vec2<T> {
    (p - center).rotated(-rotation)
}

fn to_world<T: Real>(center: Vec2<T>, rotation: T, q: Vec2<T>) -> Vec2<T> {
    q.rotated(rotation) + center
}

pub fn contains_exact<T: Real>(
    center: Vec2<T>,
    semi_axes: [T; 2],
    rotation: T,
    p: Vec2<T>,
) -> bool {
    let q = to_local(center, rotation, p);
    let zx = q.x / semi_axes[0];
    let zy = q.y / semi_axes[1];
    zx * zx + zy * zy <= T::one()
}

/// Bisection for the root of F(s) = (n0/(s+r0))^2 + (z1/(s+1))^2 - 1 on the
/// interval where the closest-point parameter lives. `g` is F at s = 0.
fn closest_point_root<T: Real>(r0: T, z0: T, z1: T, g: T) -> Result<T> {
    let n0 = r0 * z0;
    let mut s0 = z1 - T::one();
    let mut s1 = if g < T::zero() {
        T::zero()
    } else {
        (n0 * n0 + z1 * z1).sqrt() - T::one()
    };
    let mut s = T::zero();
    let mut residual = g;
    for _ in 0..MAX_ROOT_ITERATIONS {
        s = (s0 + s1) * real(0.5);
        if s == s0 || s == s1 {
            return Ok(s);
        }
        let ratio0 = n0 / (s + r0);
        let ratio1 = z1 / (s + T::one());
        residual = ratio0 * ratio0 + ratio1 * ratio1 - T::one();
        if residual > T::zero() {
            s0 = s;
        } else if residual < T::zero() {
            s1 = s;
        } else {
            return Ok(s);
        }
    }
    if residual.abs() <= real(1e-10) {
        Ok(s)
    } else {
        Err(Error::Numeric {
            context: "ellipse nearest-point solve",
            detail: format!(
                "no convergence after {MAX_ROOT_ITERATIONS} iterations, residual {}",
                residual.to_f64().unwrap_or(f64::NAN)
            ),
        })
    }
}

/// Closest point on the boundary of the axis-sorted ellipse (e0 >= e1) to a
/// first-quadrant query (y0, y1 >= 0).
fn closest_first_quadrant<T: Real>(e0: T, e1: T, y0: T, y1: T) -> Result<(T, T)> {
    if y1 > T::zero() {
        if y0 > T::zero() {
            let z0 = y0 / e0;
            let z1 = y1 / e1;
            let g = z0 * z0 + z1 * z1 - T::one();
            if g == T::zero() {
                return Ok((y0, y1));
            }
            let r0 = (e0 / e1) * (e0 / e1);
            let sbar = closest_point_root(r0, z0, z1, g)?;
            Ok((r0 * y0 / (sbar + r0), y1 / (sbar + T::one())))
        } else {
            Ok((T::zero(), e1))
        }
    } else {
        let numer0 = e0 * y0;
        let denom0 = e0 * e0 - e1 * e1;
        if numer0 < denom0 {
            // Inside the evolute: the foot leaves the major axis.
            let xde0 = numer0 / denom0;
            let x0 = e0 * xde0;
            let x1 = e1 * (T::one() - xde0 * xde0).sqrt();
            Ok((x0, x1))
        } else {
            Ok((e0, T::zero()))
        }
    }
}

/// Nearest boundary point and its distance, from either side.
pub fn boundary_foot<T: Real>(
    center: Vec2<T>,
    semi_axes: [T; 2],
    rotation: T,
    p: Vec2<T>,
) -> Result<(Vec2<T>, T)> {
    let q = to_local(center, rotation, p);
    let swapped = semi_axes[0] < semi_axes[1];
    let (e0, e1, u0, u1) = if swapped {
        (semi_axes[1], semi_axes[0], q.y, q.x)
    } else {
        (semi_axes[0], semi_axes[1], q.x, q.y)
    };
    let s0 = if u0 < T::zero() { -T::one() } else { T::one() };
    let s1 = if u1 < T::zero() { -T::one() } else { T::one() };
    let (f0, f1) = closest_first_quadrant(e0, e1, u0.abs(), u1.abs())?;
    let (f0, f1) = (s0 * f0, s1 * f1);
    let local = if swapped {
        Vec2::new(f1, f0)
    } else {
        Vec2::new(f0, f1)
    };
    let foot = to_world(center, rotation, local);
    Ok((foot, foot.dist(p)))
}

/// First exit time of `p + s·u` through the boundary, within `horizon`.
pub fn exit_time<T: Real>(
    center: Vec2<T>,
    semi_axes: [T; 2],
    rotation: T,
    p: Vec2<T>,
    u: Vec2<T>,
    horizon: T,
) -> Option<T> {
    let q = to_local(center, rotation, p);
    let v = u.rotated(-rotation);
    let w0 = Vec2::new(q.x / semi_axes[0], q.y / semi_axes[1]);
    let wv = Vec2::new(v.x / semi_axes[0], v.y / semi_axes[1]);
    let a = wv.norm_sq();
    if a == T::zero() {
        return None;
    }
    let b = w0.dot(wv) * real(2.0);
    let c = w0.norm_sq() - T::one();
    // On or past the boundary and not moving inward: the exit is immediate
    // (tangential motion leaves a strictly convex set too).
    if c >= T::zero() && b >= T::zero() {
        return Some(T::zero());
    }
    let disc = b * b - real::<T>(4.0) * a * c;
    if disc <= T::zero() {
        return None;
    }
    let s = (-b + disc.sqrt()) / (a + a);
    let s = s.max(T::zero());
    (s <= horizon).then_some(s)
}

pub fn sample_interior<T: Real>(
    center: Vec2<T>,
    semi_axes: [T; 2],
    rotation: T,
    rng: &mut Rng,
) -> Vec2<T> {
    let r = real::<T>(rng.f64()).sqrt();
    let theta = real::<T>(rng.f64() * std::f64::consts::TAU);
    let local = Vec2::new(
        semi_axes[0] * r * theta.cos(),
        semi_axes[1] * r * theta.sin(),
    );
    to_world(center, rotation, local)
}

pub fn boundary_point<T: Real>(
    center: Vec2<T>,
    semi_axes: [T; 2],
    rotation: T,
    param: T,
) -> Vec2<T> {
    let theta = param * T::TAU();
    let local = Vec2::new(semi_axes[0] * theta.cos(), semi_axes[1] * theta.sin());
    to_world(center, rotation, local)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn foot_of_exterior_axis_point() {
        let (foot, dist) = boundary_foot(
            Vec2::new(0.0_f64, 0.0),
            [3.0, 2.0],
            0.0,
            Vec2::new(10.0, 0.0),
        )
        .unwrap();
        assert!((foot.x - 3.0).abs() < 1e-12);
        assert!(foot.y.abs() < 1e-12);
        assert!((dist - 7.0).abs() < 1e-12);
    }

    #[test]
    fn foot_from_inside_near_center() {
        // From the center the nearest boundary point is a minor-axis end.
        let (foot, dist) = boundary_foot(
            Vec2::new(0.0_f64, 0.0),
            [3.0, 2.0],
            0.0,
            Vec2::new(0.0, 0.0),
        )
        .unwrap();
        assert!((dist - 2.0).abs() < 1e-12);
        assert!(foot.x.abs() < 1e-12);
        assert!((foot.y.abs() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn foot_satisfies_ellipse_equation() {
        let mut rng = crate::rng::Rng::new(9);
        for _ in 0..500 {
            let a = rng.range(0.3, 5.0);
            let b = rng.range(0.3, 5.0);
            let rot = rng.range(-3.0, 3.0);
            let center = Vec2::new(rng.range(-4.0, 4.0), rng.range(-4.0, 4.0));
            let p = Vec2::new(rng.range(-12.0, 12.0), rng.range(-12.0, 12.0));
            let (foot, _) = boundary_foot(center, [a, b], rot, p).unwrap();
            let q = to_local(center, rot, foot);
            let lhs = (q.x / a).powi(2) + (q.y / b).powi(2);
            assert!((lhs - 1.0).abs() < 1e-9, "foot off boundary: {lhs}");
        }
    }

    #[test]
    fn swapped_axes_handled() {
        // Taller than wide: major axis vertical.
        let (d, (p1, p2)) = diameter(Vec2::new(0.0_f64, 0.0), [2.0, 3.0], 0.0);
        assert_eq!(d, 6.0);
        assert_eq!(p1, Vec2::new(0.0, -3.0));
        assert_eq!(p2, Vec2::new(0.0, 3.0));
        let (foot, dist) = boundary_foot(
            Vec2::new(0.0_f64, 0.0),
            [2.0, 3.0],
            0.0,
            Vec2::new(0.0, 10.0),
        )
        .unwrap();
        assert!((foot.y - 3.0).abs() < 1e-12);
        assert!((dist - 7.0).abs() < 1e-12);
    }
}
