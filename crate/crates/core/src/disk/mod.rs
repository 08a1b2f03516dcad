//! Randomized series on the unit disk.
//!
//! A series is stored through its analytic companion `f(z) = sum c_j z^j`.
//! For the real harmonic flavor `u = Re f` with `c_j = a_j0 xi_j0 - i a_j1 xi_j1`,
//! which expands to `sum r^j (a_j0 xi_j0 cos j theta + a_j1 xi_j1 sin j theta)`.
//! For the analytic flavor the series is `f` itself with `c_j = (a_j0 - i a_j1) xi_j`.

mod bracket;

use std::cell::RefCell;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::random::{sample_complex, sample_vector, RandomModel, SeedSpec};
use crate::schemes::CoefficientScheme;

pub use bracket::{
    bloch_profile, growth_profile, write_profile_csv, BlochProfile, BlochRow, ProfileRow,
    SupBracket, DEFAULT_OVERSAMPLE,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Flavor {
    #[default]
    RealHarmonic,
    AnalyticComplex,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RandomizedSeries {
    flavor: Flavor,
    degrees: Vec<u64>,
    coeffs: Vec<Complex64>,
    signs: Vec<Complex64>,
}

/// Pairs `scheme` with one draw of `model`.
///
/// Real flavor draws one sample per nonzero component, walking the support in
/// increasing degree with the cosine component first. Analytic flavor draws one
/// (possibly complex) sample per support degree.
pub fn randomize(
    scheme: &CoefficientScheme,
    model: &RandomModel,
    seed: &SeedSpec,
    trial: u64,
    flavor: Flavor,
) -> Result<RandomizedSeries> {
    let entries = scheme.entries();
    match flavor {
        Flavor::RealHarmonic => {
            if model.is_complex() {
                return Err(Error::FlavorMismatch(format!(
                    "model `{}` is complex but the series is real harmonic",
                    model.name()
                )));
            }
            let count: usize = entries
                .iter()
                .map(|c| usize::from(c.cos != 0.0) + usize::from(c.sin != 0.0))
                .sum();
            let xi = sample_vector(model, seed, trial, count)?;
            let mut it = xi.iter().copied();
            let mut signs = Vec::with_capacity(count);
            let coeffs = entries
                .iter()
                .map(|c| {
                    let x0 = if c.cos != 0.0 {
                        it.next().unwrap()
                    } else {
                        0.0
                    };
                    let x1 = if c.sin != 0.0 {
                        it.next().unwrap()
                    } else {
                        0.0
                    };
                    signs.push(Complex64::new(x0, x1));
                    Complex64::new(c.cos * x0, -c.sin * x1)
                })
                .collect();
            Ok(RandomizedSeries {
                flavor,
                degrees: entries.iter().map(|c| c.j).collect(),
                coeffs,
                signs,
            })
        }
        Flavor::AnalyticComplex => {
            let xi = sample_complex(model, seed, trial, entries.len())?;
            let coeffs = entries
                .iter()
                .zip(&xi)
                .map(|(c, x)| Complex64::new(c.cos, -c.sin) * x)
                .collect();
            Ok(RandomizedSeries {
                flavor,
                degrees: entries.iter().map(|c| c.j).collect(),
                coeffs,
                signs: xi,
            })
        }
    }
}

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

impl RandomizedSeries {
    /// Series with the scheme's coefficients and every sample equal to one.
    pub fn unrandomized(scheme: &CoefficientScheme, flavor: Flavor) -> Self {
        randomize(scheme, &RandomModel::AllOnes, &SeedSpec::new(0), 0, flavor)
            .expect("the constant model is valid for every flavor")
    }

    /// Series `sum c_j z^j` from explicit complex coefficients.
    pub fn from_complex(
        flavor: Flavor,
        terms: impl IntoIterator<Item = (u64, Complex64)>,
    ) -> Result<Self> {
        let mut terms: Vec<(u64, Complex64)> = terms
            .into_iter()
            .filter(|(_, c)| *c != Complex64::ZERO)
            .collect();
        terms.sort_by_key(|t| t.0);
        if terms.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::Domain("duplicate degree".into()));
        }
        if terms
            .iter()
            .any(|(_, c)| !(c.re.is_finite() && c.im.is_finite()))
        {
            return Err(Error::Domain("non-finite coefficient".into()));
        }
        let signs = vec![Complex64::ONE; terms.len()];
        Ok(RandomizedSeries {
            flavor,
            degrees: terms.iter().map(|t| t.0).collect(),
            coeffs: terms.iter().map(|t| t.1).collect(),
            signs,
        })
    }

    /// Real harmonic trigonometric polynomial `sum a_j cos(j theta) + b_j sin(j theta)`.
    pub fn from_trig(terms: impl IntoIterator<Item = (u64, f64, f64)>) -> Result<Self> {
        Self::from_complex(
            Flavor::RealHarmonic,
            terms
                .into_iter()
                .map(|(j, a, b)| (j, Complex64::new(a, -b))),
        )
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn degrees(&self) -> &[u64] {
        &self.degrees
    }

    /// Coefficients `c_j` of the analytic companion, aligned with [`Self::degrees`].
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Samples aligned with the support; real flavor packs `(xi_j0, xi_j1)` as `re, im`.
    pub fn signs(&self) -> &[Complex64] {
        &self.signs
    }

    pub fn degree(&self) -> u64 {
        self.degrees.last().copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `sum |c_j| r^j`, an upper bound for the series on the circle of radius `r`.
    pub fn abs_sum(&self, r: f64) -> f64 {
        self.degrees
            .iter()
            .zip(&self.coeffs)
            .map(|(&j, c)| c.norm() * radius_power(r, j))
            .sum()
    }

    /// `f(z) = sum c_j z^j` by sparse Horner evaluation.
    pub fn eval_analytic(&self, z: Complex64) -> Complex64 {
        horner(&self.degrees, &self.coeffs, z)
    }

    /// `u(r e^(i theta))` for the real flavor.
    pub fn evaluate_at(&self, r: f64, theta: f64) -> Result<f64> {
        self.require(Flavor::RealHarmonic)?;
        check_radius(r)?;
        Ok(self.eval_analytic(Complex64::from_polar(r, theta)).re)
    }

    /// `f(r e^(i theta))` for either flavor; for the real flavor its real part is `u`.
    pub fn evaluate_complex_at(&self, r: f64, theta: f64) -> Result<Complex64> {
        check_radius(r)?;
        Ok(self.eval_analytic(Complex64::from_polar(r, theta)))
    }

    /// Quantity whose supremum is the sup norm: `|u|` or `|f|`.
    pub fn modulus_at(&self, r: f64, theta: f64) -> f64 {
        let v = self.eval_analytic(Complex64::from_polar(r, theta));
        match self.flavor {
            Flavor::RealHarmonic => v.re.abs(),
            Flavor::AnalyticComplex => v.norm(),
        }
    }

    /// `f(r e^(2 pi i t / m))` for `t = 0..m` through one length-`m` FFT.
    ///
    /// Degree `j` is folded onto bin `j mod m` before the transform, so for
    /// degrees `>= m` the result is still exact: `e^(2 pi i j t / m)` only
    /// depends on `j mod m`.
    pub fn evaluate_circle_complex(&self, r: f64, m: usize) -> Result<Vec<Complex64>> {
        check_radius(r)?;
        if m == 0 {
            return Err(Error::Domain("circle grid needs at least one point".into()));
        }
        let mut buf = vec![Complex64::ZERO; m];
        for (&j, &c) in self.degrees.iter().zip(&self.coeffs) {
            buf[(j % m as u64) as usize] += c * radius_power(r, j);
        }
        PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(m).process(&mut buf));
        Ok(buf)
    }

    /// `u` (real flavor) or `|f|` (analytic flavor) at `m` equally spaced angles.
    pub fn evaluate_circle(&self, r: f64, m: usize) -> Result<Vec<f64>> {
        let values = self.evaluate_circle_complex(r, m)?;
        Ok(match self.flavor {
            Flavor::RealHarmonic => values.into_iter().map(|v| v.re).collect(),
            Flavor::AnalyticComplex => values.into_iter().map(|v| v.norm()).collect(),
        })
    }

    /// Partial sum `s_n`: degrees `j <= n - 1`.
    pub fn partial_sum(&self, n: u64) -> Result<Self> {
        check_order(n)?;
        let keep = self.degrees.partition_point(|&j| j < n);
        Ok(RandomizedSeries {
            flavor: self.flavor,
            degrees: self.degrees[..keep].to_vec(),
            coeffs: self.coeffs[..keep].to_vec(),
            signs: self.signs[..keep].to_vec(),
        })
    }

    /// Cesaro mean `sigma_n`: coefficient `j < n` scaled by `1 - j/n`.
    pub fn cesaro_mean(&self, n: u64) -> Result<Self> {
        let mut s = self.partial_sum(n)?;
        for (j, c) in s.degrees.iter().zip(s.coeffs.iter_mut()) {
            *c *= 1.0 - *j as f64 / n as f64;
        }
        Ok(s)
    }

    /// Coefficients multiplied termwise by `weights(j)`; zeros are dropped.
    pub fn map_coeffs(&self, weights: impl Fn(u64) -> f64) -> Self {
        let mut out = RandomizedSeries {
            flavor: self.flavor,
            degrees: Vec::new(),
            coeffs: Vec::new(),
            signs: Vec::new(),
        };
        for ((&j, &c), &s) in self.degrees.iter().zip(&self.coeffs).zip(&self.signs) {
            let w = weights(j);
            if w != 0.0 {
                out.degrees.push(j);
                out.coeffs.push(c * w);
                out.signs.push(s);
            }
        }
        out
    }

    /// `f'` as an analytic series; `|f'| = |grad u|` for the real flavor.
    pub fn derivative(&self) -> Self {
        let mut out = RandomizedSeries {
            flavor: Flavor::AnalyticComplex,
            degrees: Vec::new(),
            coeffs: Vec::new(),
            signs: Vec::new(),
        };
        for ((&j, &c), &s) in self.degrees.iter().zip(&self.coeffs).zip(&self.signs) {
            if j > 0 {
                out.degrees.push(j - 1);
                out.coeffs.push(c * j as f64);
                out.signs.push(s);
            }
        }
        out
    }

    /// Cartesian gradient of `u` at `(x1, x2)`: `(Re f', -Im f')`.
    pub fn gradient_at(&self, x: [f64; 2]) -> Result<[f64; 2]> {
        self.require(Flavor::RealHarmonic)?;
        let r = x[0].hypot(x[1]);
        check_radius(r)?;
        let d = self.derivative();
        let v = d.eval_analytic(Complex64::new(x[0], x[1]));
        Ok([v.re, -v.im])
    }

    fn require(&self, flavor: Flavor) -> Result<()> {
        if self.flavor != flavor {
            return Err(Error::FlavorMismatch(format!(
                "operation needs {flavor:?}, series is {:?}",
                self.flavor
            )));
        }
        Ok(())
    }
}

fn check_radius(r: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::RadiusOutOfRange(r));
    }
    Ok(())
}

fn check_order(n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::Domain("truncation order must be at least 1".into()));
    }
    Ok(())
}

pub(crate) fn radius_power(r: f64, j: u64) -> f64 {
    if r == 1.0 {
        1.0
    } else {
        r.powf(j as f64)
    }
}

fn complex_pow(z: Complex64, k: u64) -> Complex64 {
    let mut base = z;
    let mut acc = Complex64::ONE;
    let mut k = k;
    while k > 0 {
        if k & 1 == 1 {
            acc *= base;
        }
        base *= base;
        k >>= 1;
    }
    acc
}

/// Horner's scheme over a sorted sparse support: highest degree first, and
/// multiplication by `z^gap` between consecutive degrees.
fn horner(degrees: &[u64], coeffs: &[Complex64], z: Complex64) -> Complex64 {
    let Some(&top) = degrees.last() else {
        return Complex64::ZERO;
    };
    let mut acc = Complex64::ZERO;
    let mut prev = top;
    for (&j, &c) in degrees.iter().zip(coeffs).rev() {
        let gap = prev - j;
        acc = if gap == 1 {
            acc * z
        } else {
            acc * complex_pow(z, gap)
        } + c;
        prev = j;
    }
    acc * complex_pow(z, prev)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::schemes::{random_uniform_scheme, Coefficient, CoefficientScheme, Provenance};

    fn single(j: u64, cos: f64, sin: f64) -> RandomizedSeries {
        let s = CoefficientScheme::from_entries(
            Provenance::Custom { label: "t".into() },
            j,
            vec![Coefficient { j, cos, sin }],
            None,
        )
        .unwrap();
        RandomizedSeries::unrandomized(&s, Flavor::RealHarmonic)
    }

    #[test]
    fn single_modes() {
        assert!((single(1, 1.0, 0.0).evaluate_at(0.5, 0.0).unwrap() - 0.5).abs() < 1e-15);
        assert!((single(1, 0.0, 1.0).evaluate_at(1.0, PI / 2.0).unwrap() - 1.0).abs() < 1e-15);
        let c = single(0, 3.0, 0.0);
        assert_eq!(c.evaluate_at(0.7, 1.3).unwrap(), 3.0);
        assert!(matches!(
            c.evaluate_at(1.5, 0.0),
            Err(Error::RadiusOutOfRange(_))
        ));
    }

    #[test]
    fn constant_on_circle() {
        let c = single(0, 2.5, 0.0);
        assert_eq!(c.evaluate_circle(0.3, 8).unwrap(), vec![2.5; 8]);
        let u = single(1, 1.0, 0.0);
        assert_eq!(u.evaluate_circle(0.5, 1).unwrap(), vec![0.5]);
    }

    #[test]
    fn circle_matches_pointwise() {
        let s = random_uniform_scheme(4, 100, true).unwrap();
        let u = randomize(
            &s,
            &RandomModel::Rademacher,
            &SeedSpec::new(1),
            0,
            Flavor::RealHarmonic,
        )
        .unwrap();
        for m in [16usize, 50, 512] {
            let fast = u.evaluate_circle(0.9, m).unwrap();
            let scale = fast.iter().fold(1.0f64, |a, v| a.max(v.abs()));
            for (t, v) in fast.iter().enumerate() {
                let direct = u.evaluate_at(0.9, 2.0 * PI * t as f64 / m as f64).unwrap();
                assert!((v - direct).abs() <= 1e-10 * scale, "m={m} t={t}");
            }
        }
    }

    #[test]
    fn cesaro_and_partial() {
        let s = random_uniform_scheme(9, 5, false).unwrap();
        let u = RandomizedSeries::unrandomized(&s, Flavor::RealHarmonic);
        let c2 = u.cesaro_mean(2).unwrap();
        assert_eq!(c2.degrees(), &[0, 1]);
        assert_eq!(c2.coeffs()[0], u.coeffs()[0]);
        assert_eq!(c2.coeffs()[1], u.coeffs()[1] * 0.5);
        assert_eq!(u.partial_sum(6).unwrap(), u);
        let c = u.cesaro_mean(6).unwrap();
        assert!((c.coeffs()[5] - u.coeffs()[5] / 6.0).norm() < 1e-15);
    }

    #[test]
    fn gradients_closed_form() {
        let x1 = single(1, 1.0, 0.0);
        assert_eq!(x1.gradient_at([0.2, -0.7]).unwrap(), [1.0, 0.0]);
        let q = single(2, 1.0, 0.0);
        let g = q.gradient_at([0.3, 0.4]).unwrap();
        assert!((g[0] - 0.6).abs() < 1e-15 && (g[1] + 0.8).abs() < 1e-15);
        let sine = single(1, 0.0, 1.0);
        assert_eq!(sine.gradient_at([0.1, 0.1]).unwrap(), [0.0, 1.0]);
    }

    #[test]
    fn flavor_rules() {
        let s = random_uniform_scheme(1, 4, false).unwrap();
        assert!(matches!(
            randomize(
                &s,
                &RandomModel::Steinhaus,
                &SeedSpec::new(0),
                0,
                Flavor::RealHarmonic
            ),
            Err(Error::FlavorMismatch(_))
        ));
        let f = randomize(
            &s,
            &RandomModel::Rademacher,
            &SeedSpec::new(0),
            0,
            Flavor::AnalyticComplex,
        )
        .unwrap();
        assert!(matches!(
            f.gradient_at([0.1, 0.0]),
            Err(Error::FlavorMismatch(_))
        ));
    }

    #[test]
    fn single_constant_sample() {
        let s = CoefficientScheme::from_dense("c", &[1.0]).unwrap();
        let u = randomize(
            &s,
            &RandomModel::Rademacher,
            &SeedSpec::new(3),
            2,
            Flavor::RealHarmonic,
        )
        .unwrap();
        let xi = u.signs()[0].re;
        assert_eq!(u.evaluate_at(0.4, 2.0).unwrap(), xi);
    }
}
