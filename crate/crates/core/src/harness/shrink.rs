//! Reduce a failing scenario while it keeps failing: fewer pursuers, a
//! simpler polygon, a smaller evader budget (which shortens the horizon).

use crate::geometry::ConvexRegion;
use crate::scenario::Scenario;

const MAX_ROUNDS: usize = 200;

pub fn shrink_scenario(
    failing: Scenario<f64>,
    still_fails: &mut dyn FnMut(&Scenario<f64>) -> bool,
) -> Scenario<f64> {
    let mut current = failing;
    let original_sigma = current.evader.budgets_sq;
    for _ in 0..MAX_ROUNDS {
        let mut improved = false;

        if current.pursuers.len() > 1 {
            for i in 0..current.pursuers.len() {
                let mut candidate = current.clone();
                candidate.pursuers.remove(i);
                if candidate.prepare().is_ok() && still_fails(&candidate) {
                    current = candidate;
                    improved = true;
                    break;
                }
            }
        }
        if improved {
            continue;
        }

        if let ConvexRegion::Polygon { vertices } = &current.region {
            if vertices.len() > 3 {
                for j in 0..vertices.len() {
                    let mut verts = vertices.clone();
                    verts.remove(j);
                    let mut candidate = current.clone();
                    candidate.region = ConvexRegion::Polygon { vertices: verts };
                    if candidate.prepare().is_ok() && still_fails(&candidate) {
                        current = candidate;
                        improved = true;
                        break;
                    }
                }
            }
        }
        if improved {
            continue;
        }

        // Smaller evader budgets shorten every chase and keep the margin.
        let shrunk = [
            current.evader.budgets_sq[0] * 0.5,
            current.evader.budgets_sq[1] * 0.5,
        ];
        if shrunk[0] > 1e-6 * original_sigma[0] {
            let mut candidate = current.clone();
            candidate.evader.budgets_sq = shrunk;
            if candidate.prepare().is_ok() && still_fails(&candidate) {
                current = candidate;
                improved = true;
            }
        }

        if !improved {
            break;
        }
    }
    current
}
