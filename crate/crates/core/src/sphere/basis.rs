//! Real solid harmonics in Cartesian form with sup-norm normalization.
//!
//! For order `t`, `C_t + i S_t = (x1 + i x2)^t` and `T_m^t(x3, |x|^2)` is the
//! homogeneous polynomial with `T_m^t(cos theta, 1) sin^t theta = P_m^t(cos theta)`
//! in Schmidt semi-normalization. The basis elements of degree `m` are
//! `T_m^0` (`l = 0`), `T_m^t C_t` (`l = 2t - 1`) and `T_m^t S_t` (`l = 2t`).

use std::f64::consts::PI;
use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_BASIS_DEGREE: usize = 128;

/// Arithmetic needed to evaluate the polynomial recurrences.
pub trait Jet:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Mul<f64, Output = Self>
{
    fn constant(v: f64) -> Self;
}

impl Jet for f64 {
    fn constant(v: f64) -> Self {
        v
    }
}

/// Value, gradient and Laplacian of a function of three variables,
/// propagated exactly through sums and products.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Taylor2 {
    pub value: f64,
    pub grad: [f64; 3],
    pub lap: f64,
}

impl Taylor2 {
    /// The coordinate function `x_i` at the point `x`.
    pub fn coordinate(x: [f64; 3], i: usize) -> Self {
        let mut grad = [0.0; 3];
        grad[i] = 1.0;
        Taylor2 {
            value: x[i],
            grad,
            lap: 0.0,
        }
    }
}

impl Jet for Taylor2 {
    fn constant(v: f64) -> Self {
        Taylor2 {
            value: v,
            grad: [0.0; 3],
            lap: 0.0,
        }
    }
}

impl Add for Taylor2 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Taylor2 {
            value: self.value + o.value,
            grad: [
                self.grad[0] + o.grad[0],
                self.grad[1] + o.grad[1],
                self.grad[2] + o.grad[2],
            ],
            lap: self.lap + o.lap,
        }
    }
}

impl Sub for Taylor2 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + o * -1.0
    }
}

impl Mul for Taylor2 {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let dot = self.grad[0] * o.grad[0] + self.grad[1] * o.grad[1] + self.grad[2] * o.grad[2];
        Taylor2 {
            value: self.value * o.value,
            grad: [
                self.value * o.grad[0] + o.value * self.grad[0],
                self.value * o.grad[1] + o.value * self.grad[1],
                self.value * o.grad[2] + o.value * self.grad[2],
            ],
            lap: self.value * o.lap + o.value * self.lap + 2.0 * dot,
        }
    }
}

impl Mul<f64> for Taylor2 {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Taylor2 {
            value: self.value * s,
            grad: [self.grad[0] * s, self.grad[1] * s, self.grad[2] * s],
            lap: self.lap * s,
        }
    }
}

/// Linear index of `(m, l)`.
pub fn basis_index(m: usize, l: usize) -> usize {
    m * m + l
}

/// `(m, l)` of a linear index.
pub fn basis_degree_order(i: usize) -> (usize, usize) {
    let m = (i as f64).sqrt() as usize;
    let m = if (m + 1) * (m + 1) <= i {
        m + 1
    } else if m * m > i {
        m - 1
    } else {
        m
    };
    (m, i - m * m)
}

fn order_index(m: usize, t: usize) -> usize {
    m * (m + 1) / 2 + t
}

/// Schmidt factor `T_t^t`.
fn sectoral_start(t: usize) -> f64 {
    (2..=t)
        .map(|s| ((2 * s - 1) as f64 / (2 * s) as f64).sqrt())
        .product()
}

/// `T_m^t(z, rr)` for `m = t..=n`, written into `out[m - t]`.
fn legendre_column<T: Jet>(t: usize, n: usize, z: T, rr: T, out: &mut Vec<T>) {
    out.clear();
    let mut prev2 = T::constant(0.0);
    let mut prev1 = T::constant(sectoral_start(t));
    out.push(prev1);
    let tt = (t * t) as f64;
    for m in t + 1..=n {
        let mf = m as f64;
        let a = (2.0 * mf - 1.0) / (mf * mf - tt).sqrt();
        let b = (((mf - 1.0) * (mf - 1.0) - tt).max(0.0) / (mf * mf - tt)).sqrt();
        let next = z * prev1 * a - rr * prev2 * b;
        prev2 = prev1;
        prev1 = next;
        out.push(next);
    }
}

/// Sup-normalized real spherical harmonics up to degree `N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SphericalBasis {
    max_degree: usize,
    /// Per `(m, t)`: certified upper bound of the raw sup.
    raw_upper: Vec<f64>,
    /// Per `(m, t)`: largest sampled raw value.
    raw_lower: Vec<f64>,
    /// Number of polar intervals used for the bounds.
    pub polar_grid: usize,
}

impl SphericalBasis {
    /// Builds the basis, bounding each raw sup on a polar grid.
    ///
    /// The raw element of order `t` reaches its sup where `|cos t phi| = 1`, so
    /// the sup is that of `p(theta) = P_m^t(cos theta)`, a trigonometric
    /// polynomial of degree `m`. At its maximizer `p' = 0`, and with `|p''| <= m^2 ||p||`
    /// the nearest node (within `h / 2`) satisfies
    /// `|p(node)| >= ||p|| (1 - m^2 h^2 / 8)`.
    pub fn build(n: usize) -> Result<Self> {
        if n > MAX_BASIS_DEGREE {
            return Err(Error::DegreeBudget(format!(
                "spherical basis degree {n} exceeds {MAX_BASIS_DEGREE}"
            )));
        }
        let k = 64 * n + 64;
        let h = PI / k as f64;
        let count = order_index(n, n) + 1;
        let mut raw_lower = vec![0.0f64; count];
        let mut column = Vec::with_capacity(n + 1);
        for i in 0..=k {
            let theta = i as f64 * h;
            let (s, c) = theta.sin_cos();
            let mut sin_pow = 1.0;
            for t in 0..=n {
                legendre_column(t, n, c, 1.0, &mut column);
                for (off, v) in column.iter().enumerate() {
                    let idx = order_index(t + off, t);
                    raw_lower[idx] = raw_lower[idx].max((v * sin_pow).abs());
                }
                sin_pow *= s;
            }
        }
        let raw_upper = (0..count)
            .map(|idx| {
                let m = degree_of_order_index(idx);
                let shrink = 1.0 - (m * m) as f64 * h * h / 8.0;
                raw_lower[idx] / shrink
            })
            .collect();
        Ok(SphericalBasis {
            max_degree: n,
            raw_upper,
            raw_lower,
            polar_grid: k,
        })
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// Number of basis elements, `(N + 1)^2`.
    pub fn len(&self) -> usize {
        (self.max_degree + 1) * (self.max_degree + 1)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn order(m: usize, l: usize) -> usize {
        order_index(m, l.div_ceil(2))
    }

    /// Factor applied to the raw harmonic, `1 / certified upper bound`.
    pub fn normalization(&self, m: usize, l: usize) -> f64 {
        1.0 / self.raw_upper[Self::order(m, l)]
    }

    /// Certified bracket of the sup of the normalized element.
    pub fn normalized_sup_bracket(&self, m: usize, l: usize) -> (f64, f64) {
        let i = Self::order(m, l);
        (self.raw_lower[i] / self.raw_upper[i], 1.0)
    }

    /// All normalized elements at `x`, indexed by [`basis_index`]. The
    /// polynomials are homogeneous, so this is `r^m Y_ml(x / r)`.
    pub fn eval_all<T: Jet>(&self, x: [T; 3]) -> Vec<T> {
        let n = self.max_degree;
        let rr = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
        let mut out = vec![T::constant(0.0); self.len()];
        let mut column = Vec::with_capacity(n + 1);
        let (mut ct, mut st) = (T::constant(1.0), T::constant(0.0));
        for t in 0..=n {
            legendre_column(t, n, x[2], rr, &mut column);
            for (off, &v) in column.iter().enumerate() {
                let m = t + off;
                let scale = 1.0 / self.raw_upper[order_index(m, t)];
                if t == 0 {
                    out[basis_index(m, 0)] = v * scale;
                } else {
                    out[basis_index(m, 2 * t - 1)] = v * ct * scale;
                    out[basis_index(m, 2 * t)] = v * st * scale;
                }
            }
            let next_c = x[0] * ct - x[1] * st;
            let next_s = x[0] * st + x[1] * ct;
            ct = next_c;
            st = next_s;
        }
        out
    }

    /// Largest `|Laplacian|` over all basis elements at `x`.
    pub fn laplacian_residual(&self, x: [f64; 3]) -> f64 {
        let jets = [0, 1, 2].map(|i| Taylor2::coordinate(x, i));
        self.eval_all(jets)
            .iter()
            .map(|v| v.lap.abs())
            .fold(0.0, f64::max)
    }
}

fn degree_of_order_index(idx: usize) -> usize {
    let mut m = ((2.0 * idx as f64).sqrt()) as usize;
    while order_index(m, 0) > idx {
        m -= 1;
    }
    while order_index(m + 1, 0) <= idx {
        m += 1;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indexing_round_trip() {
        for i in 0..400 {
            let (m, l) = basis_degree_order(i);
            assert!(l <= 2 * m);
            assert_eq!(basis_index(m, l), i);
        }
        for m in 0..30 {
            for t in 0..=m {
                assert_eq!(degree_of_order_index(order_index(m, t)), m);
            }
        }
    }

    #[test]
    fn low_degrees_closed_form() {
        let b = SphericalBasis::build(4).unwrap();
        let y = b.eval_all([0.0, 0.0, 0.5]);
        assert!((y[0] - 1.0).abs() < 1e-12);
        assert!((y[basis_index(1, 0)] - 0.5).abs() < 1e-3);
        // zonal degree 2 is (3 z^2 - r^2) / 2, normalized sup 1 at the poles
        let p = [0.3, -0.2, 0.6];
        let r2 = 0.09 + 0.04 + 0.36;
        let y = b.eval_all(p);
        let expect = (3.0 * 0.36 - r2) / 2.0 * b.normalization(2, 0);
        assert!((y[basis_index(2, 0)] - expect).abs() < 1e-14);
        assert!((b.normalization(2, 0) - 1.0).abs() < 1e-3);
        assert!((b.normalization(1, 0) - 1.0).abs() < 1e-3);
    }

    #[test]
    fn normalized_sups_tight() {
        let b = SphericalBasis::build(20).unwrap();
        for i in 0..b.len() {
            let (m, l) = basis_degree_order(i);
            let (lo, hi) = b.normalized_sup_bracket(m, l);
            assert!(lo > 0.999 && hi <= 1.0, "({m},{l}) -> {lo}");
        }
    }

    #[test]
    fn harmonic() {
        let b = SphericalBasis::build(16).unwrap();
        for x in [[0.1, 0.2, 0.3], [-0.5, 0.4, 0.7], [0.0, 0.0, 0.0]] {
            assert!(b.laplacian_residual(x) < 1e-9);
        }
    }

    #[test]
    fn degree_budget() {
        assert!(matches!(
            SphericalBasis::build(129),
            Err(Error::DegreeBudget(_))
        ));
    }
}
