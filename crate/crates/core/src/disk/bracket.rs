//! Certified sup-norm brackets on circles.
//!
//! On a grid of `M` equally spaced angles every point of the circle lies within
//! `pi / M` of a node. Bernstein's inequality `|P'| <= n ||P||` for a degree-`n`
//! trigonometric polynomial then gives `||P|| <= grid_max / (1 - pi n / M)`.

use std::f64::consts::PI;
use std::io::Write;

use serde::{Deserialize, Serialize};

use super::{radius_power, RandomizedSeries};
use crate::error::{Error, Result};
use crate::weight::Weight;

pub const DEFAULT_OVERSAMPLE: f64 = 16.0;

/// Relative size of the dropped tail when truncating a series at `r < 1`.
const TAIL_TOLERANCE: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SupBracket {
    pub lower: f64,
    pub upper: f64,
    pub grid_size: usize,
    /// Degree of the polynomial the Bernstein factor was applied to.
    pub degree: u64,
    /// Angle where the lower bound was attained.
    pub theta: f64,
}

impl SupBracket {
    pub fn contains(&self, value: f64) -> bool {
        self.lower <= value && value <= self.upper
    }

    fn exact(value: f64) -> Self {
        SupBracket {
            lower: value,
            upper: value,
            grid_size: 1,
            degree: 0,
            theta: 0.0,
        }
    }
}

fn grid_size(degree: u64, oversample: f64) -> usize {
    let target = (oversample * degree.max(1) as f64 * PI).ceil() as usize;
    target.next_power_of_two()
}

impl RandomizedSeries {
    /// Drops the highest degrees whose total contribution at radius `r` is below
    /// `1e-15` of `sum |c_j| r^j`; returns the kept length and the dropped mass.
    fn certified_cut(&self, r: f64) -> (usize, f64) {
        if r >= 1.0 || self.degrees.is_empty() {
            return (self.degrees.len(), 0.0);
        }
        let terms: Vec<f64> = self
            .degrees
            .iter()
            .zip(&self.coeffs)
            .map(|(&j, c)| c.norm() * radius_power(r, j))
            .collect();
        let total: f64 = terms.iter().sum();
        let mut tail = 0.0;
        let mut keep = terms.len();
        while keep > 0 && tail + terms[keep - 1] <= TAIL_TOLERANCE * total {
            tail += terms[keep - 1];
            keep -= 1;
        }
        (keep, tail)
    }

    /// Lower and certified upper bound of the sup over the circle of radius `r`.
    pub fn sup_bracket(&self, r: f64, oversample: f64, refine: bool) -> Result<SupBracket> {
        if !(oversample >= 1.0 && oversample.is_finite()) {
            return Err(Error::Domain(format!(
                "oversample must be >= 1, got {oversample}"
            )));
        }
        super::check_radius(r)?;
        let (keep, tail) = self.certified_cut(r);
        let body = RandomizedSeries {
            flavor: self.flavor,
            degrees: self.degrees[..keep].to_vec(),
            coeffs: self.coeffs[..keep].to_vec(),
            signs: self.signs[..keep].to_vec(),
        };
        let n = body.degree();
        if n == 0 {
            let v = body.modulus_at(r, 0.0);
            let mut b = SupBracket::exact(v);
            b.lower = (v - tail).max(0.0);
            b.upper = v + tail;
            return Ok(b);
        }
        let m = grid_size(n, oversample);
        let values = body.evaluate_circle(r, m)?;
        let (t_best, grid_max) =
            values
                .iter()
                .map(|v| v.abs())
                .enumerate()
                .fold(
                    (0, 0.0f64),
                    |acc, (t, v)| if v > acc.1 { (t, v) } else { acc },
                );
        let step = 2.0 * PI / m as f64;
        let mut lower = grid_max;
        let mut theta = t_best as f64 * step;
        if refine {
            for t in top_candidates(&values, 3) {
                let centre = t as f64 * step;
                let (arg, val) =
                    golden_max(|th| body.modulus_at(r, th), centre - step, centre + step);
                if val > lower {
                    lower = val;
                    theta = arg;
                }
            }
        }
        let factor = 1.0 - PI * n as f64 / m as f64;
        Ok(SupBracket {
            lower: (lower - tail).max(0.0),
            upper: grid_max / factor + tail,
            grid_size: m,
            degree: n,
            theta,
        })
    }
}

/// Indices of the `count` largest `|values|` that are local maxima on the periodic grid.
fn top_candidates(values: &[f64], count: usize) -> Vec<usize> {
    let m = values.len();
    let mut peaks: Vec<usize> = (0..m)
        .filter(|&t| {
            let v = values[t].abs();
            v >= values[(t + m - 1) % m].abs() && v >= values[(t + 1) % m].abs()
        })
        .collect();
    peaks.sort_by(|&a, &b| values[b].abs().total_cmp(&values[a].abs()));
    peaks.truncate(count);
    peaks
}

/// Golden-section search for a maximum of `h` on `[a, b]`.
fn golden_max(h: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut hc, mut hd) = (h(c), h(d));
    for _ in 0..60 {
        if (b - a).abs() < 1e-14 {
            break;
        }
        if hc > hd {
            b = d;
            d = c;
            hd = hc;
            c = b - inv_phi * (b - a);
            hc = h(c);
        } else {
            a = c;
            c = d;
            hc = hd;
            d = a + inv_phi * (b - a);
            hd = h(d);
        }
    }
    if hc > hd {
        (c, hc)
    } else {
        (d, hd)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileRow {
    pub r: f64,
    /// `1 / (1 - r)`, the degree scale matched to the radius.
    pub n_of_r: f64,
    pub lower: f64,
    pub upper: f64,
    /// `v(r) = g(1 / (1 - r))`.
    pub g_of_r: f64,
    pub ratio_lower: f64,
    pub ratio_upper: f64,
}

/// One certified bracket per radius, normalized by the weight.
pub fn growth_profile(
    series: &RandomizedSeries,
    radii: &[f64],
    weight: &Weight,
    oversample: f64,
    refine: bool,
) -> Result<Vec<ProfileRow>> {
    radii
        .iter()
        .map(|&r| {
            let g = weight.eval_v(r)?;
            let b = series.sup_bracket(r, oversample, refine)?;
            Ok(ProfileRow {
                r,
                n_of_r: 1.0 / (1.0 - r),
                lower: b.lower,
                upper: b.upper,
                g_of_r: g,
                ratio_lower: b.lower / g,
                ratio_upper: b.upper / g,
            })
        })
        .collect()
}

pub fn write_profile_csv<W: Write>(rows: &[ProfileRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "r",
        "n_of_r",
        "lower",
        "upper",
        "g_of_r",
        "ratio_lower",
        "ratio_upper",
    ])?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush().map_err(|e| Error::io("<csv>", e))?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochRow {
    pub r: f64,
    pub w_of_r: f64,
    /// Bracket of `sup |grad u|` on the circle of radius `r`.
    pub grad_lower: f64,
    pub grad_upper: f64,
    pub weighted_lower: f64,
    pub weighted_upper: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlochProfile {
    pub rows: Vec<BlochRow>,
    /// `|u(0)|`.
    pub value_at_origin: f64,
    /// `|u(0)| + max_r w(r) sup |grad u|` bracketed over the sampled radii.
    pub norm_lower: f64,
    pub norm_upper: f64,
}

/// Weighted gradient brackets `w(r) sup_theta |grad u(r e^(i theta))|`, using `|grad u| = |f'|`.
pub fn bloch_profile(
    series: &RandomizedSeries,
    radii: &[f64],
    w: &Weight,
    oversample: f64,
    refine: bool,
) -> Result<BlochProfile> {
    let d = series.derivative();
    let rows = radii
        .iter()
        .map(|&r| {
            let wr = w.eval_w(r)?;
            let b = d.sup_bracket(r, oversample, refine)?;
            Ok(BlochRow {
                r,
                w_of_r: wr,
                grad_lower: b.lower,
                grad_upper: b.upper,
                weighted_lower: wr * b.lower,
                weighted_upper: wr * b.upper,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let value_at_origin = series.modulus_at(0.0, 0.0);
    let fold = |f: fn(&BlochRow) -> f64| rows.iter().map(f).fold(0.0f64, f64::max);
    Ok(BlochProfile {
        norm_lower: value_at_origin + fold(|r| r.weighted_lower),
        norm_upper: value_at_origin + fold(|r| r.weighted_upper),
        value_at_origin,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::disk::Flavor;
    use crate::schemes::grs_polynomial_scheme;

    fn trig(terms: &[(u64, f64, f64)]) -> RandomizedSeries {
        RandomizedSeries::from_trig(terms.iter().copied()).unwrap()
    }

    #[test]
    fn bloch_profile_of_re_z() {
        let u = trig(&[(1, 1.0, 0.0)]);
        let w = Weight::bloch_power(0.5).unwrap();
        let p = bloch_profile(&u, &[0.0, 0.5, 0.9], &w, 8.0, true).unwrap();
        for row in &p.rows {
            assert!((row.grad_lower - 1.0).abs() < 1e-12 && (row.grad_upper - 1.0).abs() < 1e-12);
            assert!((row.w_of_r - (1.0 - row.r).sqrt()).abs() < 1e-12);
        }
        assert!((p.norm_upper - 1.0).abs() < 1e-12);
    }

    #[test]
    fn first_mode_bracket() {
        let u = trig(&[(1, 1.0, 0.0)]);
        let b = u.sup_bracket(0.5, 16.0, false).unwrap();
        assert!(b.contains(0.5));
        assert!((b.lower - 0.5).abs() < 1e-15);
        assert!(b.upper <= 0.5 / (1.0 - 1.0 / 16.0) + 1e-15);
    }

    #[test]
    fn constant_bracket_is_exact() {
        let u = trig(&[(0, -2.0, 0.0)]);
        let b = u.sup_bracket(0.9, 16.0, true).unwrap();
        assert_eq!((b.lower, b.upper), (2.0, 2.0));
        let b0 = trig(&[(3, 1.0, 1.0)]).sup_bracket(0.0, 4.0, false).unwrap();
        assert_eq!((b0.lower, b0.upper), (0.0, 0.0));
    }

    #[test]
    fn refinement_finds_off_grid_peak() {
        // cos(3 theta - 0.1) peaks between grid nodes
        let u = trig(&[(3, 0.1f64.cos(), 0.1f64.sin())]);
        let coarse = u.sup_bracket(1.0, 4.0, false).unwrap();
        let fine = u.sup_bracket(1.0, 4.0, true).unwrap();
        assert!(fine.lower >= coarse.lower);
        assert!((fine.lower - 1.0).abs() < 1e-12);
        assert!(fine.upper >= 1.0);
    }

    #[test]
    fn grs_256_within_bound() {
        let s = grs_polynomial_scheme(256).unwrap();
        let p = RandomizedSeries::unrandomized(&s, Flavor::AnalyticComplex);
        let b = p.sup_bracket(1.0, 16.0, true).unwrap();
        assert!(b.upper <= 80.0, "{b:?}");
        assert!(b.lower >= 16.0);
    }

    #[test]
    fn radius_zero_profile() {
        let u = trig(&[(0, 0.25, 0.0), (2, 1.0, 0.0)]);
        let w = Weight::power(1.0).unwrap();
        let rows = growth_profile(&u, &[0.0], &w, 8.0, false).unwrap();
        assert!((rows[0].lower - 0.25).abs() < 1e-15);
        assert!((rows[0].upper - 0.25).abs() < 1e-15);
    }

    #[test]
    fn tail_truncation_is_certified() {
        let u = trig(&[(1, 1.0, 0.0), (4000, 1.0, 0.0)]);
        let b = u.sup_bracket(0.5, 8.0, false).unwrap();
        assert_eq!(b.degree, 1);
        assert!(b.contains(0.5));
    }
}
