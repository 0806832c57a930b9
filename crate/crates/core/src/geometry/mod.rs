//! The playing region: a closed bounded convex set in the plane, either a
//! strictly convex polygon or an ellipse. Provides every geometric quantity
//! the pursuit construction needs: diameter and a witnessing diametral pair,
//! the rotated frame that puts that pair on the x-axis, the maximum ordinate
//! in that frame, plus containment, nearest-point projection and boundary
//! queries used by the engine's stop rule.

mod ellipse;
mod frame;
mod polygon;

pub use frame::Frame;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::Rng;
use crate::scalar::{real, Real};
use crate::vec2::Vec2;

/// Closed convex region of the plane.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", bound = "T: Real")]
pub enum ConvexRegion<T: Real> {
    /// Strictly convex polygon, vertices in counterclockwise order.
    Polygon { vertices: Vec<Vec2<T>> },
    /// Ellipse with semi-axes `a, b` along its local axes, rotated by
    /// `rotation` radians about `center`.
    Ellipse {
        center: Vec2<T>,
        semi_axes: [T; 2],
        #[serde(default)]
        rotation: T,
    },
}

/// Two points of the region realizing its diameter, lexicographically
/// ordered.
pub type DiametralPair<T> = (Vec2<T>, Vec2<T>);

/// Diameter, a witnessing pair, and the maximum ordinate in the diametral
/// frame.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct RegionMetrics<T: Real> {
    pub d: T,
    pub diametral_pair: DiametralPair<T>,
    pub c: T,
}

impl<T: Real> ConvexRegion<T> {
    /// Check the structural invariants: polygons must be strictly convex,
    /// counterclockwise and non-degenerate; ellipse semi-axes positive.
    pub fn validate(&self) -> Result<()> {
        match self {
            ConvexRegion::Polygon { vertices } => polygon::validate(vertices),
            ConvexRegion::Ellipse { semi_axes, .. } => {
                if semi_axes[0] <= T::zero() || semi_axes[1] <= T::zero() {
                    return Err(Error::config(format!(
                        "ellipse semi-axes must be positive, got ({}, {})",
                        semi_axes[0], semi_axes[1]
                    )));
                }
                Ok(())
            }
        }
    }

    /// Maximum distance between two points of the region and a pair
    /// realizing it. Polygons use rotating calipers over antipodal vertex
    /// pairs; ellipses take the major axis endpoints. The returned pair is
    /// ordered lexicographically and, among exact ties, is the
    /// lexicographically smallest pair.
    pub fn diameter(&self) -> Result<(T, DiametralPair<T>)> {
        self.validate()?;
        Ok(match self {
            ConvexRegion::Polygon { vertices } => polygon::diameter(vertices),
            ConvexRegion::Ellipse {
                center,
                semi_axes,
                rotation,
            } => ellipse::diameter(*center, *semi_axes, *rotation),
        })
    }

    /// Frame whose x-axis carries the diametral pair, origin at the pair's
    /// midpoint. Rejects single-point (d = 0) regions: the game would be
    /// trivially over and every derived time would divide by zero.
    pub fn diametral_frame(&self) -> Result<Frame<T>> {
        let (d, (p1, p2)) = self.diameter()?;
        if d <= T::zero() {
            return Err(Error::config("region has zero diameter"));
        }
        let dir = p2 - p1;
        let rotation = -dir.y.atan2(dir.x);
        Ok(Frame {
            origin: (p1 + p2).scaled(real(0.5)),
            rotation,
        })
    }

    /// Maximum |η| over the region in the given frame's coordinates.
    pub fn max_ordinate(&self, frame: &Frame<T>) -> Result<T> {
        self.validate()?;
        Ok(match self {
            ConvexRegion::Polygon { vertices } => vertices
                .iter()
                .map(|v| frame.to_frame(*v).y.abs())
                .fold(T::zero(), T::max),
            ConvexRegion::Ellipse {
                center,
                semi_axes,
                rotation,
            } => {
                // Support value of the transformed ellipse in direction (0,1):
                // the ellipse seen in frame coordinates keeps its semi-axes and
                // has rotation `rotation + frame.rotation`.
                let phi = *rotation + frame.rotation;
                let (s, c) = phi.sin_cos();
                let extent =
                    (semi_axes[0] * semi_axes[0] * s * s + semi_axes[1] * semi_axes[1] * c * c)
                        .sqrt();
                frame.to_frame(*center).y.abs() + extent
            }
        })
    }

    /// Diameter, diametral pair and max ordinate in one call.
    pub fn metrics(&self) -> Result<(RegionMetrics<T>, Frame<T>)> {
        let (d, pair) = self.diameter()?;
        let frame = self.diametral_frame()?;
        let c = self.max_ordinate(&frame)?;
        Ok((RegionMetrics { d, diametral_pair: pair, c }, frame))
    }

    /// Closed-set membership with a tolerance band: true iff the distance
    /// from `p` to the region is at most `tol`.
    pub fn contains(&self, p: Vec2<T>, tol: T) -> bool {
        match self {
            ConvexRegion::Polygon { vertices } => {
                polygon::contains_exact(vertices, p)
                    || polygon::boundary_foot(vertices, p).1 <= tol
            }
            ConvexRegion::Ellipse {
                center,
                semi_axes,
                rotation,
            } => {
                ellipse::contains_exact(*center, *semi_axes, *rotation, p)
                    || ellipse::boundary_foot(*center, *semi_axes, *rotation, p)
                        .map(|(_, dist)| dist <= tol)
                        .unwrap_or(false)
            }
        }
    }

    /// Nearest point of the region: `p` itself when inside, otherwise the
    /// closest boundary point (solved iteratively for ellipses).
    pub fn project(&self, p: Vec2<T>) -> Result<Vec2<T>> {
        match self {
            ConvexRegion::Polygon { vertices } => {
                if polygon::contains_exact(vertices, p) {
                    Ok(p)
                } else {
                    Ok(polygon::boundary_foot(vertices, p).0)
                }
            }
            ConvexRegion::Ellipse {
                center,
                semi_axes,
                rotation,
            } => {
                if ellipse::contains_exact(*center, *semi_axes, *rotation, p) {
                    Ok(p)
                } else {
                    Ok(ellipse::boundary_foot(*center, *semi_axes, *rotation, p)?.0)
                }
            }
        }
    }

    /// Nearest boundary point and its distance, valid from either side.
    pub fn boundary_foot(&self, p: Vec2<T>) -> Result<(Vec2<T>, T)> {
        match self {
            ConvexRegion::Polygon { vertices } => Ok(polygon::boundary_foot(vertices, p)),
            ConvexRegion::Ellipse {
                center,
                semi_axes,
                rotation,
            } => ellipse::boundary_foot(*center, *semi_axes, *rotation, p),
        }
    }

    /// Boundary test: membership (within `tol`) and distance to the
    /// complement at most `tol`.
    pub fn on_boundary(&self, p: Vec2<T>, tol: T) -> Result<bool> {
        if !self.contains(p, tol) {
            return Ok(false);
        }
        Ok(self.boundary_foot(p)?.1 <= tol)
    }

    /// First time `s` in `(0, horizon]` at which the straight-line motion
    /// `p + s·u` leaves the region, `None` if it stays inside. `p` is
    /// assumed to be in the region.
    pub fn exit_time(&self, p: Vec2<T>, u: Vec2<T>, horizon: T) -> Option<T> {
        match self {
            ConvexRegion::Polygon { vertices } => polygon::exit_time(vertices, p, u, horizon),
            ConvexRegion::Ellipse {
                center,
                semi_axes,
                rotation,
            } => ellipse::exit_time(*center, *semi_axes, *rotation, p, u, horizon),
        }
    }

    /// Uniformly distributed point of the region.
    pub fn sample_interior(&self, rng: &mut Rng) -> Vec2<T> {
        match self {
            ConvexRegion::Polygon { vertices } => polygon::sample_interior(vertices, rng),
            ConvexRegion::Ellipse {
                center,
                semi_axes,
                rotation,
            } => ellipse::sample_interior(*center, *semi_axes, *rotation, rng),
        }
    }

    /// Boundary point for a normalized parameter in [0, 1): arclength along
    /// the edges for polygons, the angular parameter for ellipses.
    pub fn boundary_point(&self, param: T) -> Vec2<T> {
        match self {
            ConvexRegion::Polygon { vertices } => polygon::boundary_point(vertices, param),
            ConvexRegion::Ellipse {
                center,
                semi_axes,
                rotation,
            } => ellipse::boundary_point(*center, *semi_axes, *rotation, param),
        }
    }
}
