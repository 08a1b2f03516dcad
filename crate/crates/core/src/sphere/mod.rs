//! Harmonic series on the unit ball of R^3.

mod basis;
mod covering;

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::disk::SupBracket;
use crate::error::{Error, Result};
use crate::random::{sample_vector, RandomModel, SeedSpec};

pub use basis::{basis_degree_order, basis_index, Jet, SphericalBasis, Taylor2, MAX_BASIS_DEGREE};
pub use covering::{Covering, DEFAULT_N_DELTA, MIN_COVERING_POINTS};

/// Deterministic magnitudes `a_ml`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SphereScheme {
    pub max_degree: usize,
    /// `(m, l, a_ml)` with `l <= 2m`.
    pub entries: Vec<(usize, usize, f64)>,
}

impl SphereScheme {
    /// `a_ml = 1` for every `m <= n`.
    pub fn all_ones(n: usize) -> Self {
        SphereScheme {
            max_degree: n,
            entries: (0..=n)
                .flat_map(|m| (0..=2 * m).map(move |l| (m, l, 1.0)))
                .collect(),
        }
    }

    /// The single element `(m, l)`.
    pub fn single(m: usize, l: usize) -> Self {
        SphereScheme {
            max_degree: m,
            entries: vec![(m, l, 1.0)],
        }
    }
}

/// Dense coefficients over a basis, indexed by [`basis_index`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SphereSeries {
    pub degree: usize,
    pub coeffs: Vec<f64>,
}

impl SphereSeries {
    pub fn from_scheme(scheme: &SphereScheme) -> Result<Self> {
        let mut coeffs = vec![0.0; (scheme.max_degree + 1).pow(2)];
        let mut degree = 0;
        for &(m, l, a) in &scheme.entries {
            if m > scheme.max_degree || l > 2 * m {
                return Err(Error::Domain(format!("invalid harmonic index ({m}, {l})")));
            }
            coeffs[basis_index(m, l)] = a;
            if a != 0.0 {
                degree = degree.max(m);
            }
        }
        Ok(SphereSeries { degree, coeffs })
    }

    /// `sum a_ml xi_ml r^m Y_ml(x / r)` evaluated through solid harmonics.
    pub fn evaluate_ball(&self, basis: &SphericalBasis, x: [f64; 3]) -> Result<f64> {
        let r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
        if r2 > 1.0 + 1e-12 {
            return Err(Error::RadiusOutOfRange(r2.sqrt()));
        }
        self.check_basis(basis)?;
        Ok(self.dot(&basis.eval_all(x)))
    }

    fn check_basis(&self, basis: &SphericalBasis) -> Result<()> {
        if basis.max_degree() < self.max_index_degree() {
            return Err(Error::DegreeBudget(format!(
                "series needs degree {} but basis stops at {}",
                self.max_index_degree(),
                basis.max_degree()
            )));
        }
        Ok(())
    }

    fn max_index_degree(&self) -> usize {
        (self.coeffs.len() as f64).sqrt() as usize - 1
    }

    fn dot(&self, values: &[f64]) -> f64 {
        self.coeffs.iter().zip(values).map(|(a, y)| a * y).sum()
    }

    /// Values at every covering point.
    pub fn evaluate_points(&self, basis: &SphericalBasis, covering: &Covering) -> Result<Vec<f64>> {
        Ok(evaluate_many(std::slice::from_ref(self), basis, covering)?.remove(0))
    }
}

/// Pairs the scheme with one draw of `model`, in entry order.
pub fn randomize_sphere(
    scheme: &SphereScheme,
    model: &RandomModel,
    seed: &SeedSpec,
    trial: u64,
) -> Result<SphereSeries> {
    let xi = sample_vector(model, seed, trial, scheme.entries.len())?;
    let mut signed = scheme.clone();
    for (e, x) in signed.entries.iter_mut().zip(xi) {
        e.2 *= x;
    }
    SphereSeries::from_scheme(&signed)
}

/// Values of several series at every covering point, sharing basis evaluations.
pub fn evaluate_many(
    series: &[SphereSeries],
    basis: &SphericalBasis,
    covering: &Covering,
) -> Result<Vec<Vec<f64>>> {
    for s in series {
        s.check_basis(basis)?;
    }
    let mut out = vec![Vec::with_capacity(covering.len()); series.len()];
    for &p in covering.points() {
        let y = basis.eval_all(p);
        for (s, o) in series.iter().zip(out.iter_mut()) {
            o.push(s.dot(&y));
        }
    }
    Ok(out)
}

/// Sup bracket on the sphere from values at the covering points.
///
/// A tangential Bernstein bound `|grad P| <= n ||P||` along a geodesic of length
/// at most `delta` gives `||P|| <= grid_max / (1 - n delta)`.
pub fn sup_bracket_sphere(
    values: &[f64],
    degree: usize,
    covering: &Covering,
) -> Result<SupBracket> {
    let grid_max = values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let product = degree as f64 * covering.delta;
    if product >= 1.0 {
        return Err(Error::CoveringTooCoarse {
            degree,
            delta: covering.delta,
            product,
        });
    }
    Ok(SupBracket {
        lower: grid_max,
        upper: grid_max / (1.0 - product),
        grid_size: covering.len(),
        degree: degree as u64,
        theta: 0.0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CapReport {
    pub degree: usize,
    pub alpha: f64,
    /// Fraction of sphere area where `|P| >= alpha * grid_max`.
    pub fraction: f64,
    pub grid_k: usize,
    /// `fraction * n^2`.
    pub c_implied: f64,
}

/// Area fraction of `{|P| >= alpha * grid_max}`; lattice points carry equal area `1/K`.
pub fn cap_fraction(values: &[f64], degree: usize, alpha: f64) -> Result<CapReport> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Domain(format!(
            "alpha must lie in (0, 1), got {alpha}"
        )));
    }
    if values.is_empty() {
        return Err(Error::EmptyRange("no covering points".into()));
    }
    let grid_max = values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let hits = values
        .iter()
        .filter(|v| v.abs() >= alpha * grid_max)
        .count();
    let fraction = hits as f64 / values.len() as f64;
    Ok(CapReport {
        degree,
        alpha,
        fraction,
        grid_k: values.len(),
        c_implied: fraction * (degree * degree) as f64,
    })
}

pub fn write_cap_csv<W: Write>(rows: &[CapReport], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["degree", "alpha", "fraction", "grid_K", "c_implied"])?;
    for r in rows {
        w.write_record([
            r.degree.to_string(),
            r.alpha.to_string(),
            r.fraction.to_string(),
            r.grid_k.to_string(),
            r.c_implied.to_string(),
        ])?;
    }
    w.flush().map_err(|e| Error::io("<csv>", e))?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapStabilityRow {
    pub degree: usize,
    pub grid_k: usize,
    pub delta: f64,
    pub min_fraction: f64,
    pub median_fraction: f64,
    /// Smallest `fraction * n^2` over the batch.
    pub c_min: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapStability {
    pub alpha: f64,
    pub combinations: usize,
    pub slack: f64,
    /// `c_min` of the first degree, the reference constant.
    pub c_ref: f64,
    pub rows: Vec<CapStabilityRow>,
    pub pass: bool,
}

/// For each degree, `combinations` Rademacher sums of all harmonics up to that
/// degree; passes when no degree's `c_min` falls below `c_ref / slack`.
pub fn cap_stability_check(
    degrees: &[usize],
    combinations: usize,
    alpha: f64,
    slack: f64,
    seed: &SeedSpec,
) -> Result<CapStability> {
    let Some(&top) = degrees.iter().max() else {
        return Err(Error::EmptyRange("no degrees".into()));
    };
    let basis = SphericalBasis::build(top)?;
    let mut rows = Vec::new();
    for &n in degrees {
        let covering = Covering::for_degree(n);
        let scheme = SphereScheme::all_ones(n);
        let sub = seed.derive(&format!("cap-{n}"));
        let series = (0..combinations as u64)
            .map(|t| randomize_sphere(&scheme, &RandomModel::Rademacher, &sub, t))
            .collect::<Result<Vec<_>>>()?;
        let values = evaluate_many(&series, &basis, &covering)?;
        let mut fractions = values
            .iter()
            .map(|v| cap_fraction(v, n, alpha).map(|c| c.fraction))
            .collect::<Result<Vec<_>>>()?;
        fractions.sort_by(f64::total_cmp);
        let min_fraction = fractions[0];
        rows.push(CapStabilityRow {
            degree: n,
            grid_k: covering.len(),
            delta: covering.delta,
            min_fraction,
            median_fraction: fractions[fractions.len() / 2],
            c_min: min_fraction * (n * n) as f64,
        });
    }
    let c_ref = rows[0].c_min;
    let pass = c_ref > 0.0 && rows.iter().all(|r| r.c_min * slack >= c_ref);
    Ok(CapStability {
        alpha,
        combinations,
        slack,
        c_ref,
        rows,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_and_linear() {
        let basis = SphericalBasis::build(3).unwrap();
        let one = SphereSeries::from_scheme(&SphereScheme::single(0, 0)).unwrap();
        assert!((one.evaluate_ball(&basis, [0.2, 0.1, -0.3]).unwrap() - 1.0).abs() < 1e-12);
        let z = SphereSeries::from_scheme(&SphereScheme::single(1, 0)).unwrap();
        let v = z.evaluate_ball(&basis, [0.0, 0.0, 0.5]).unwrap();
        assert!((v - 0.5).abs() < 1e-4);
        assert_eq!(z.evaluate_ball(&basis, [0.0; 3]).unwrap(), 0.0);
        assert!(z.evaluate_ball(&basis, [1.0, 1.0, 0.0]).is_err());
    }

    #[test]
    fn y3_bracket_and_caps() {
        let basis = SphericalBasis::build(1).unwrap();
        let cov = Covering::fibonacci(4096);
        let z = SphereSeries::from_scheme(&SphereScheme::single(1, 0)).unwrap();
        let values = z.evaluate_points(&basis, &cov).unwrap();
        let b = sup_bracket_sphere(&values, 1, &cov).unwrap();
        assert!(b.lower <= 1.0 && b.upper >= 1.0 - 1e-9 && b.lower > 0.99);
        let cap = cap_fraction(&values, 1, 0.5).unwrap();
        assert!((cap.fraction - 0.5).abs() < 0.01);
        let tiny = cap_fraction(&values, 1, 1e-6).unwrap();
        assert!(tiny.fraction > 0.999);
    }

    #[test]
    fn coarse_covering_rejected() {
        let cov = Covering::fibonacci(16);
        let err = sup_bracket_sphere(&[1.0], 10, &cov).unwrap_err();
        assert!(matches!(err, Error::CoveringTooCoarse { .. }));
        let c = sup_bracket_sphere(&[2.0; 16], 0, &cov).unwrap();
        assert_eq!(c.lower, c.upper);
    }
}
