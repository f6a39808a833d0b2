//! Planted-failure slope: a pixel grid split by a polyline into a stable
//! block and a moving block whose velocity follows inverse-velocity
//! (Fukuzono) kinetics after an onset state.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::ScenarioError;
use crate::kinematics::{DisplacementSeries, ObservationPoint, TimeStamp};
use crate::netflow::{CutRatio, Link};

/// Scenario definition. Grid point `(row, col)` has id `row * cols + col`
/// and sits at `(col * spacing, row * spacing)` meters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlopeScenario {
    pub rows: usize,
    pub cols: usize,
    /// Pixel spacing in meters.
    pub spacing: f64,
    /// Failure polyline as `(col, row)` vertices in grid units with strictly
    /// increasing `col`, spanning `0..=cols-1`. Points with a row index
    /// below the line move.
    pub boundary: Vec<[f64; 2]>,
    /// Number of time states `T`; states are labeled `0..T`.
    pub states: usize,
    /// First state of accelerating motion.
    pub onset: usize,
    /// Planted failure time (a state index, `onset < failure_time <= T`).
    pub failure_time: usize,
    /// Fukuzono constant: velocity is `1 / (A (t_f - t))` mm per state.
    pub fukuzono_a: f64,
    /// Noise standard deviation as a fraction of the planted increment.
    pub noise_fraction: f64,
    pub seed: u64,
}

impl SlopeScenario {
    /// 30 x 30 grid, onset at state 100 of 400, failure at 400, 5% noise.
    pub fn standard() -> Self {
        SlopeScenario {
            rows: 30,
            cols: 30,
            spacing: 5.0,
            boundary: vec![[0.0, 12.5], [14.0, 17.5], [29.0, 10.5]],
            states: 400,
            onset: 100,
            failure_time: 400,
            fukuzono_a: 0.01,
            noise_fraction: 0.05,
            seed: 7,
        }
    }

    pub fn point_count(&self) -> usize {
        self.rows * self.cols
    }

    fn line_row(&self, col: f64) -> f64 {
        let b = &self.boundary;
        let k = b.windows(2).position(|w| col <= w[1][0]).unwrap_or(b.len() - 2);
        let ([x0, y0], [x1, y1]) = (b[k], b[k + 1]);
        y0 + (y1 - y0) * (col - x0) / (x1 - x0)
    }

    /// Per point, whether it belongs to the moving block.
    pub fn moving_mask(&self) -> Vec<bool> {
        (0..self.point_count())
            .map(|id| {
                let (r, c) = (id / self.cols, id % self.cols);
                (r as f64) < self.line_row(c as f64)
            })
            .collect()
    }

    /// Ids of the moving block, increasing.
    pub fn moving_points(&self) -> Vec<usize> {
        self.moving_mask().iter().enumerate().filter(|(_, &m)| m).map(|(i, _)| i).collect()
    }

    /// Grid links (8-neighbourhood) that cross the planted boundary.
    pub fn boundary_links(&self) -> Vec<Link> {
        let m = self.moving_mask();
        let mut out = Vec::new();
        for r in 0..self.rows {
            for c in 0..self.cols {
                let a = r * self.cols + c;
                for (dr, dc) in [(0i64, 1i64), (1, -1), (1, 0), (1, 1)] {
                    let (r2, c2) = (r as i64 + dr, c as i64 + dc);
                    if r2 < self.rows as i64 && c2 >= 0 && c2 < self.cols as i64 {
                        let b = r2 as usize * self.cols + c2 as usize;
                        if m[a] != m[b] {
                            out.push(Link::new(a, b));
                        }
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Points incident to a boundary link, increasing.
    pub fn boundary_points(&self) -> Vec<usize> {
        let mut p: Vec<usize> = self.boundary_links().iter().flat_map(|l| [l.lo(), l.hi()]).collect();
        p.sort_unstable();
        p.dedup();
        p
    }

    /// Grid (Chebyshev) distance from point `id` to the nearest boundary
    /// point.
    pub fn cells_from_boundary(&self, id: usize) -> usize {
        let (r, c) = ((id / self.cols) as i64, (id % self.cols) as i64);
        self.boundary_points()
            .iter()
            .map(|&b| {
                let (rb, cb) = ((b / self.cols) as i64, (b % self.cols) as i64);
                (r - rb).unsigned_abs().max((c - cb).unsigned_abs()) as usize
            })
            .min()
            .unwrap_or(usize::MAX)
    }

    /// Noise-free planted velocity of the moving block at state `t`.
    /// Zero before onset; after the failure time it stays at its last
    /// pre-failure value.
    pub fn planted_velocity(&self, t: usize) -> f64 {
        if t < self.onset {
            return 0.0;
        }
        let t = t.min(self.failure_time - 1);
        1.0 / (self.fukuzono_a * (self.failure_time - t) as f64)
    }

    /// Noise standard deviation at state `t`: a fraction of the planted
    /// increment, using the onset increment before onset.
    pub fn noise_sigma(&self, t: usize) -> f64 {
        self.noise_fraction * self.planted_velocity(t.max(self.onset))
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        let bad = |m: String| Err(ScenarioError::InvalidGeometry(m));
        if self.rows < 2 || self.cols < 2 {
            return bad(format!("grid {}x{} is too small", self.rows, self.cols));
        }
        if !(self.spacing > 0.0 && self.spacing.is_finite()) {
            return bad(format!("spacing must be positive (got {})", self.spacing));
        }
        if self.boundary.len() < 2
            || self.boundary.windows(2).any(|w| !(w[0][0] < w[1][0]))
            || self.boundary.iter().flatten().any(|v| !v.is_finite())
        {
            return bad("boundary needs at least two vertices with strictly increasing col".into());
        }
        let (first, last) = (self.boundary[0][0], self.boundary[self.boundary.len() - 1][0]);
        if first > 0.0 || last < (self.cols - 1) as f64 {
            return bad(format!("boundary must span columns 0..={}", self.cols - 1));
        }
        if !(self.onset >= 1 && self.onset < self.failure_time && self.failure_time <= self.states) {
            return bad(format!(
                "need 1 <= onset < failure_time <= states (got {}, {}, {})",
                self.onset, self.failure_time, self.states
            ));
        }
        if !(self.fukuzono_a > 0.0 && self.fukuzono_a.is_finite()) {
            return bad(format!("Fukuzono constant must be positive (got {})", self.fukuzono_a));
        }
        if !(self.noise_fraction >= 0.0 && self.noise_fraction.is_finite()) {
            return bad(format!("noise fraction must be non-negative (got {})", self.noise_fraction));
        }
        let mask = self.moving_mask();
        let moving = mask.iter().filter(|&&m| m).count();
        let ratio = CutRatio::from_sides(moving, mask.len() - moving);
        if moving == 0 || moving == mask.len() || ratio.value() < 0.3 {
            return bad(format!("boundary splits the grid {moving}/{} (ratio below 0.3)", mask.len() - moving));
        }
        for side in [true, false] {
            if !self.side_is_connected(&mask, side) {
                let name = if side { "moving" } else { "stable" };
                return bad(format!("the {name} block is not connected"));
            }
        }
        Ok(())
    }

    fn side_is_connected(&self, mask: &[bool], side: bool) -> bool {
        let members: Vec<usize> = (0..mask.len()).filter(|&i| mask[i] == side).collect();
        let mut seen = vec![false; mask.len()];
        let mut stack = vec![members[0]];
        seen[members[0]] = true;
        let mut count = 0;
        while let Some(v) = stack.pop() {
            count += 1;
            let (r, c) = (v / self.cols, v % self.cols);
            let mut nbrs = Vec::with_capacity(4);
            if r > 0 {
                nbrs.push(v - self.cols);
            }
            if r + 1 < self.rows {
                nbrs.push(v + self.cols);
            }
            if c > 0 {
                nbrs.push(v - 1);
            }
            if c + 1 < self.cols {
                nbrs.push(v + 1);
            }
            for w in nbrs {
                if mask[w] == side && !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        count == members.len()
    }
}

/// Line-of-sight displacement series of the scenario. Every point starts at
/// zero; each later state adds the planted increment (moving block, from
/// onset) plus independent Gaussian noise.
pub fn generate_slope(scn: &SlopeScenario) -> Result<DisplacementSeries, ScenarioError> {
    scn.validate()?;
    let l = scn.point_count();
    let mask = scn.moving_mask();
    let mut rng = ChaCha8Rng::seed_from_u64(scn.seed);
    let mut values = vec![0.0; scn.states * l];
    for t in 1..scn.states {
        let v = scn.planted_velocity(t);
        let sigma = scn.noise_sigma(t);
        let noise = Normal::new(0.0, sigma).map_err(|e| ScenarioError::InvalidGeometry(e.to_string()))?;
        for p in 0..l {
            let mut inc = if mask[p] { v } else { 0.0 };
            if sigma > 0.0 {
                inc += noise.sample(&mut rng);
            }
            values[t * l + p] = values[(t - 1) * l + p] + inc;
        }
    }
    let points = (0..l)
        .map(|id| ObservationPoint {
            id,
            label: id as u64,
            coords: vec![(id % scn.cols) as f64 * scn.spacing, (id / scn.cols) as f64 * scn.spacing],
        })
        .collect();
    let times = (0..scn.states).map(|t| TimeStamp::index(t as i64)).collect();
    Ok(DisplacementSeries::new(points, times, 1, values)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SlopeScenario {
        SlopeScenario {
            rows: 6,
            cols: 6,
            spacing: 3.5,
            boundary: vec![[0.0, 2.5], [5.0, 2.5]],
            states: 40,
            onset: 10,
            failure_time: 40,
            fukuzono_a: 0.05,
            noise_fraction: 0.0,
            seed: 1,
        }
    }

    #[test]
    fn noise_free_increments_follow_the_closed_form() {
        let scn = small();
        let s = generate_slope(&scn).unwrap();
        for t in 1..scn.states {
            let inc = s.displacement(t, 0)[0] - s.displacement(t - 1, 0)[0];
            let expected = if t < 10 { 0.0 } else { 1.0 / (0.05 * (40 - t) as f64) };
            // Increments come from differencing a running sum.
            assert!((inc - expected).abs() <= 1e-12 * s.displacement(t, 0)[0].abs());
            assert_eq!(s.displacement(t, 35)[0], 0.0);
        }
    }

    #[test]
    fn fixed_seed_is_reproducible() {
        let scn = SlopeScenario { noise_fraction: 0.05, ..small() };
        assert_eq!(generate_slope(&scn).unwrap(), generate_slope(&scn).unwrap());
        let other = SlopeScenario { seed: 2, ..scn.clone() };
        assert_ne!(generate_slope(&scn).unwrap(), generate_slope(&other).unwrap());
    }

    #[test]
    fn straight_boundary_geometry() {
        let scn = small();
        assert_eq!(scn.moving_points(), (0..18).collect::<Vec<_>>());
        // 6 vertical links and 2 * 5 diagonals cross between rows 2 and 3.
        assert_eq!(scn.boundary_links().len(), 16);
        assert_eq!(scn.boundary_points(), (12..24).collect::<Vec<_>>());
        assert_eq!(scn.cells_from_boundary(0), 2);
        assert_eq!(scn.cells_from_boundary(30), 2);
    }

    #[test]
    fn standard_scenario_is_valid() {
        let scn = SlopeScenario::standard();
        scn.validate().unwrap();
        let moving = scn.moving_points().len();
        assert!(moving > 300 && moving < 600);
    }

    #[test]
    fn invalid_geometry_is_rejected() {
        let lopsided = SlopeScenario { boundary: vec![[0.0, 0.5], [5.0, 0.5]], ..small() };
        assert!(matches!(lopsided.validate(), Err(ScenarioError::InvalidGeometry(_))));
        let short = SlopeScenario { boundary: vec![[1.0, 2.5], [5.0, 2.5]], ..small() };
        assert!(short.validate().is_err());
        let late = SlopeScenario { failure_time: 50, ..small() };
        assert!(late.validate().is_err());
        // A V-shaped line that cuts the moving block in two.
        let split = SlopeScenario { boundary: vec![[0.0, 4.5], [2.5, -3.0], [5.0, 4.5]], ..small() };
        assert!(split.validate().is_err());
    }
}
