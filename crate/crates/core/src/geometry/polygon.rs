//! Strictly convex polygon routines.

use crate::error::{Error, Result};
use crate::rng::Rng;
use crate::scalar::{real, Real};
use crate::vec2::Vec2;

pub fn validate<T: Real>(vertices: &[Vec2<T>]) -> Result<()> {
    let n = vertices.len();
    if n < 3 {
        return Err(Error::config(format!(
            "polygon needs at least 3 vertices, got {n}"
        )));
    }
    let dup_tol = real::<T>(1e-12);
    for i in 0..n {
        for j in (i + 1)..n {
            if vertices[i].dist(vertices[j]) < dup_tol {
                return Err(Error::config(format!(
                    "polygon vertices {i} and {j} coincide"
                )));
            }
        }
    }
    for i in 0..n {
        let a = vertices[i];
        let b = vertices[(i + 1) % n];
        let c = vertices[(i + 2) % n];
        if (b - a).cross(c - b) <= T::zero() {
            return Err(Error::config(format!(
                "polygon is not strictly convex counterclockwise at vertex {}",
                (i + 1) % n
            )));
        }
    }
    Ok(())
}

pub fn ordered_pair<T: Real>(p: Vec2<T>, q: Vec2<T>) -> (Vec2<T>, Vec2<T>) {
    if p.lex_le(q) {
        (p, q)
    } else {
        (q, p)
    }
}

pub fn pair_lex_less<T: Real>(a: (Vec2<T>, Vec2<T>), b: (Vec2<T>, Vec2<T>)) -> bool {
    if a.0 != b.0 {
        a.0.lex_le(b.0)
    } else {
        a.1.lex_le(b.1) && a.1 != b.1
    }
}

/// Rotating-calipers diameter. Enumerates antipodal vertex pairs by walking
/// a support vertex around opposite each edge; on exact area ties both tied
/// vertices are considered, so every diametral pair is in the candidate set
/// and the result matches the all-pairs maximum exactly.
pub fn diameter<T: Real>(vertices: &[Vec2<T>]) -> (T, (Vec2<T>, Vec2<T>)) {
    let n = vertices.len();
    let area2 = |i: usize, j: usize, k: usize| {
        (vertices[j] - vertices[i]).cross(vertices[k] - vertices[i])
    };

    let mut best_sq = T::neg_infinity();
    let mut best = (vertices[0], vertices[0]);
    let mut consider = |i: usize, j: usize| {
        let pair = ordered_pair(vertices[i], vertices[j]);
        let dsq = pair.0.dist_sq(pair.1);
        if dsq > best_sq || (dsq == best_sq && pair_lex_less(pair, best)) {
            best_sq = dsq;
            best = pair;
        }
    };

    let mut j = 1;
    for i in 0..n {
        let ni = (i + 1) % n;
        // Advance the support vertex while the triangle over edge (i, ni) grows.
        while area2(i, ni, (j + 1) % n) > area2(i, ni, j) {
            j = (j + 1) % n;
        }
        consider(i, j);
        consider(ni, j);
        // Parallel opposite edge: the next vertex supports the same edge.
        if area2(i, ni, (j + 1) % n) == area2(i, ni, j) {
            consider(i, (j + 1) % n);
            consider(ni, (j + 1) % n);
        }
    }
    (best_sq.sqrt(), best)
}

/// Exact closed-set membership: all edge half-planes satisfied.
pub fn contains_exact<T: Real>(vertices: &[Vec2<T>], p: Vec2<T>) -> bool {
    let n = vertices.len();
    (0..n).all(|i| {
        let a = vertices[i];
        let b = vertices[(i + 1) % n];
        (b - a).cross(p - a) >= T::zero()
    })
}

/// Closest boundary point and its distance (valid from inside or outside).
pub fn boundary_foot<T: Real>(vertices: &[Vec2<T>], p: Vec2<T>) -> (Vec2<T>, T) {
    let n = vertices.len();
    let mut best = vertices[0];
    let mut best_sq = T::infinity();
    for i in 0..n {
        let a = vertices[i];
        let b = vertices[(i + 1) % n];
        let e = b - a;
        let t = ((p - a).dot(e) / e.norm_sq()).max(T::zero()).min(T::one());
        let q = a + e.scaled(t);
        let dsq = p.dist_sq(q);
        if dsq < best_sq {
            best_sq = dsq;
            best = q;
        }
    }
    (best, best_sq.sqrt())
}

/// First exit time of `p + s·u` through any edge, within `horizon`.
pub fn exit_time<T: Real>(
    vertices: &[Vec2<T>],
    p: Vec2<T>,
    u: Vec2<T>,
    horizon: T,
) -> Option<T> {
    let n = vertices.len();
    let mut first: Option<T> = None;
    for i in 0..n {
        let a = vertices[i];
        let b = vertices[(i + 1) % n];
        let e = b - a;
        let margin = e.cross(p - a); // >= 0 inside
        let rate = e.cross(u);
        if rate < T::zero() {
            let s = (margin / -rate).max(T::zero());
            if s <= horizon && first.is_none_or(|f| s < f) {
                first = Some(s);
            }
        }
    }
    first
}

/// Uniform sample via the triangle fan from vertex 0.
pub fn sample_interior<T: Real>(vertices: &[Vec2<T>], rng: &mut Rng) -> Vec2<T> {
    let n = vertices.len();
    let mut areas = Vec::with_capacity(n - 2);
    let mut total = T::zero();
    for k in 1..n - 1 {
        let a = (vertices[k] - vertices[0])
            .cross(vertices[k + 1] - vertices[0])
            .abs();
        total = total + a;
        areas.push(a);
    }
    let mut pick = real::<T>(rng.f64()) * total;
    let mut tri = n - 3;
    for (k, a) in areas.iter().enumerate() {
        if pick <= *a {
            tri = k;
            break;
        }
        pick = pick - *a;
    }
    let (a, b, c) = (vertices[0], vertices[tri + 1], vertices[tri + 2]);
    let r1 = real::<T>(rng.f64()).sqrt();
    let r2 = real::<T>(rng.f64());
    a.scaled(T::one() - r1) + b.scaled(r1 * (T::one() - r2)) + c.scaled(r1 * r2)
}

/// Point at normalized arclength `param` in [0, 1) along the boundary.
pub fn boundary_point<T: Real>(vertices: &[Vec2<T>], param: T) -> Vec2<T> {
    let n = vertices.len();
    let mut perimeter = T::zero();
    for i in 0..n {
        perimeter = perimeter + vertices[i].dist(vertices[(i + 1) % n]);
    }
    let mut target = param.fract() * perimeter;
    if target < T::zero() {
        target = target + perimeter;
    }
    for i in 0..n {
        let a = vertices[i];
        let b = vertices[(i + 1) % n];
        let len = a.dist(b);
        if target <= len {
            return a + (b - a).scaled(target / len);
        }
        target = target - len;
    }
    vertices[0]
}
