use serde::{Deserialize, Serialize};

use crate::scalar::Real;
use crate::vec2::Vec2;

/// Rigid coordinate frame: translate `origin` to zero, then rotate by
/// `rotation`. For a diametral frame the rotation carries the diametral
/// direction onto the +x axis.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct Frame<T: Real> {
    pub origin: Vec2<T>,
    pub rotation: T,
}

impl<T: Real> Frame<T> {
    pub fn identity() -> Self {
        Self {
            origin: Vec2::zero(),
            rotation: T::zero(),
        }
    }

    /// World to frame coordinates.
    pub fn to_frame(&self, p: Vec2<T>) -> Vec2<T> {
        (p - self.origin).rotated(self.rotation)
    }

    /// Frame to world coordinates.
    pub fn to_world(&self, q: Vec2<T>) -> Vec2<T> {
        q.rotated(-self.rotation) + self.origin
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Rng;

    #[test]
    fn round_trip_identity() {
        let mut rng = Rng::new(1);
        for _ in 0..1000 {
            let frame = Frame {
                origin: Vec2::new(rng.range(-10.0, 10.0), rng.range(-10.0, 10.0)),
                rotation: rng.range(-7.0, 7.0),
            };
            let p = Vec2::new(rng.range(-10.0, 10.0), rng.range(-10.0, 10.0));
            let back = frame.to_world(frame.to_frame(p));
            assert!((back.x - p.x).abs() < 1e-12);
            assert!((back.y - p.y).abs() < 1e-12);
        }
    }

    #[test]
    fn transform_is_isometry() {
        let mut rng = Rng::new(2);
        for _ in 0..1000 {
            let frame = Frame {
                origin: Vec2::new(rng.range(-10.0, 10.0), rng.range(-10.0, 10.0)),
                rotation: rng.range(-7.0, 7.0),
            };
            let p = Vec2::new(rng.range(-10.0, 10.0), rng.range(-10.0, 10.0));
            let q = Vec2::new(rng.range(-10.0, 10.0), rng.range(-10.0, 10.0));
            let before = p.dist(q);
            let after = frame.to_frame(p).dist(frame.to_frame(q));
            assert!((before - after).abs() < 1e-12);
        }
    }
}
