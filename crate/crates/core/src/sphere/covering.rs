//! Fibonacci-lattice point sets on the unit sphere with a certified covering radius.

use std::collections::BinaryHeap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

/// Points in decreasing `z` order and an upper bound on the geodesic covering radius.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Covering {
    points: Vec<[f64; 3]>,
    /// Every point of the sphere lies within this geodesic distance of some lattice point.
    pub delta: f64,
    /// Largest nearest-point distance actually observed during certification.
    pub delta_lower: f64,
}

/// Relative gap between the certified and observed covering radius at which refinement stops.
const CERTIFY_TOLERANCE: f64 = 0.03;

/// Lower bound on the lattice size used by [`Covering::for_degree`].
pub const MIN_COVERING_POINTS: usize = 2048;

/// Target value of `n * delta` for default coverings.
pub const DEFAULT_N_DELTA: f64 = 0.31;

impl Covering {
    /// `K` points `z_i = 1 - (2i + 1)/K`, `phi_i = 2 pi i / golden ratio`.
    pub fn fibonacci(k: usize) -> Self {
        assert!(k >= 2, "a covering needs at least two points");
        let golden = (1.0 + 5f64.sqrt()) / 2.0;
        let points: Vec<[f64; 3]> = (0..k)
            .map(|i| {
                let z = 1.0 - (2 * i + 1) as f64 / k as f64;
                let rho = (1.0 - z * z).max(0.0).sqrt();
                let phi = 2.0 * PI * (i as f64 / golden).fract();
                [rho * phi.cos(), rho * phi.sin(), z]
            })
            .collect();
        let mut c = Covering {
            points,
            delta: PI,
            delta_lower: 0.0,
        };
        c.certify();
        c
    }

    /// Smallest lattice found with certified `n * delta <= DEFAULT_N_DELTA`.
    ///
    /// Sized from the observed `delta ~ 2.8 / sqrt(K)` and enlarged until the
    /// certified radius meets the target.
    pub fn for_degree(n: usize) -> Self {
        let mut k = ((2.8 * n as f64 / DEFAULT_N_DELTA).powi(2)).ceil() as usize;
        k = k.max(MIN_COVERING_POINTS);
        loop {
            let c = Covering::fibonacci(k);
            if n as f64 * c.delta <= DEFAULT_N_DELTA {
                return c;
            }
            k += k / 10;
        }
    }

    pub fn points(&self) -> &[[f64; 3]] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Geodesic distance from `q` (unit vector) to the nearest lattice point.
    pub fn nearest_distance(&self, q: [f64; 3]) -> f64 {
        let k = self.points.len();
        let guess = (((1.0 - q[2]) * k as f64 - 1.0) / 2.0).round();
        let start = guess.clamp(0.0, (k - 1) as f64) as usize;
        let mut best = f64::INFINITY;
        let chord = |p: &[f64; 3]| {
            let d = [p[0] - q[0], p[1] - q[1], p[2] - q[2]];
            (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt()
        };
        // chord length is at least |dz|, so each scan stops once the z gap exceeds the best chord
        for p in self.points[start..].iter() {
            if q[2] - p[2] > best {
                break;
            }
            best = best.min(chord(p));
        }
        for p in self.points[..start].iter().rev() {
            if p[2] - q[2] > best {
                break;
            }
            best = best.min(chord(p));
        }
        2.0 * (best / 2.0).min(1.0).asin()
    }

    /// Branch and bound over latitude-longitude cells. A cell with centre `c`,
    /// polar half-width `a` and azimuthal half-width `b` lies within geodesic
    /// distance `a + s_max b` of `c`, where `s_max` bounds `sin theta` on the
    /// cell, so `d(c) + a + s_max b` bounds the nearest distance on the cell.
    fn certify(&mut self) {
        let k = self.points.len();
        let n_theta = ((k as f64).sqrt().ceil() as usize).max(4);
        let n_phi = 2 * n_theta;
        let mut heap = BinaryHeap::new();
        let mut lower = 0.0f64;
        let dtheta = PI / n_theta as f64;
        let dphi = 2.0 * PI / n_phi as f64;
        for i in 0..n_theta {
            for j in 0..n_phi {
                let cell = Cell::new(self, i as f64 * dtheta, dtheta, j as f64 * dphi, dphi);
                lower = lower.max(cell.centre_distance);
                heap.push(cell);
            }
        }
        while let Some(cell) = heap.peek() {
            if cell.upper <= lower * (1.0 + CERTIFY_TOLERANCE) || cell.dtheta < 1e-9 {
                break;
            }
            let cell = heap.pop().expect("peeked");
            let (ht, hp) = (cell.dtheta / 2.0, cell.dphi / 2.0);
            for (a, b) in [(0.0, 0.0), (ht, 0.0), (0.0, hp), (ht, hp)] {
                let child = Cell::new(self, cell.theta0 + a, ht, cell.phi0 + b, hp);
                lower = lower.max(child.centre_distance);
                heap.push(child);
            }
        }
        self.delta_lower = lower;
        self.delta = heap.peek().map_or(lower, |c| c.upper.max(lower));
    }
}

#[derive(Debug, Clone, Copy)]
struct Cell {
    theta0: f64,
    dtheta: f64,
    phi0: f64,
    dphi: f64,
    centre_distance: f64,
    upper: f64,
}

impl Cell {
    fn new(cov: &Covering, theta0: f64, dtheta: f64, phi0: f64, dphi: f64) -> Self {
        let (tc, pc) = (theta0 + dtheta / 2.0, phi0 + dphi / 2.0);
        let q = [tc.sin() * pc.cos(), tc.sin() * pc.sin(), tc.cos()];
        let centre_distance = cov.nearest_distance(q);
        let theta1 = theta0 + dtheta;
        let s_max = if theta0 <= PI / 2.0 && PI / 2.0 <= theta1 {
            1.0
        } else {
            theta0.sin().max(theta1.sin())
        };
        Cell {
            theta0,
            dtheta,
            phi0,
            dphi,
            centre_distance,
            upper: centre_distance + dtheta / 2.0 + s_max * dphi / 2.0,
        }
    }
}

impl PartialEq for Cell {
    fn eq(&self, other: &Self) -> bool {
        self.upper == other.upper
    }
}

impl Eq for Cell {}

impl PartialOrd for Cell {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Cell {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.upper.total_cmp(&other.upper)
    }
}
