//! Subnormal random sequences and seeded streams.
//!
//! Every trial owns its own ChaCha stream selected from the master seed, so
//! sample `index` of trial `t` does not depend on which other trials ran or in
//! what order.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RandomModel {
    /// Independent fair signs.
    Rademacher,
    /// Centered normal with standard deviation `sigma <= 1`.
    Gaussian { sigma: f64 },
    /// `cos(phi)` with `phi` uniform on `[0, 2 pi)`.
    SteinhausReal,
    /// Uniform on `[-1, 1]`.
    UniformSymmetric,
    /// Complex `exp(i phi)`; only usable for analytic series.
    Steinhaus,
    /// Constant `+1`; not random, used to evaluate a scheme unrandomized.
    AllOnes,
}

impl RandomModel {
    /// The four real subnormal families.
    pub const SUBNORMAL: [RandomModel; 4] = [
        RandomModel::Rademacher,
        RandomModel::Gaussian { sigma: 1.0 },
        RandomModel::SteinhausReal,
        RandomModel::UniformSymmetric,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            RandomModel::Rademacher => "rademacher",
            RandomModel::Gaussian { .. } => "gaussian",
            RandomModel::SteinhausReal => "steinhaus_real",
            RandomModel::UniformSymmetric => "uniform_symmetric",
            RandomModel::Steinhaus => "steinhaus",
            RandomModel::AllOnes => "all_ones",
        }
    }

    pub fn is_complex(&self) -> bool {
        matches!(self, RandomModel::Steinhaus)
    }

    pub fn validate(&self) -> Result<()> {
        if let RandomModel::Gaussian { sigma } = *self {
            if !(sigma.is_finite() && sigma >= 0.0 && sigma * sigma <= 1.0) {
                return Err(Error::BadSigma(sigma));
            }
        }
        Ok(())
    }

    fn draw_real<R: Rng>(&self, rng: &mut R) -> f64 {
        match *self {
            RandomModel::Rademacher => {
                if rng.random::<bool>() {
                    1.0
                } else {
                    -1.0
                }
            }
            RandomModel::Gaussian { sigma } => sigma * rng.sample::<f64, _>(StandardNormal),
            RandomModel::SteinhausReal => (TAU * rng.random::<f64>()).cos(),
            RandomModel::UniformSymmetric => rng.random_range(-1.0..=1.0),
            RandomModel::AllOnes => 1.0,
            RandomModel::Steinhaus => unreachable!("complex model on the real path"),
        }
    }
}

impl std::str::FromStr for RandomModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "rademacher" => RandomModel::Rademacher,
            "gaussian" => RandomModel::Gaussian { sigma: 1.0 },
            "steinhaus_real" | "steinhaus-real" => RandomModel::SteinhausReal,
            "uniform_symmetric" | "uniform-symmetric" | "uniform" => RandomModel::UniformSymmetric,
            "steinhaus" => RandomModel::Steinhaus,
            "all_ones" | "ones" => RandomModel::AllOnes,
            other => {
                if let Some(sigma) = other.strip_prefix("gaussian:") {
                    let sigma = sigma
                        .parse()
                        .map_err(|_| Error::InvalidArgument(format!("bad sigma in `{other}`")))?;
                    let model = RandomModel::Gaussian { sigma };
                    model.validate()?;
                    return Ok(model);
                }
                return Err(Error::InvalidArgument(format!("unknown model `{other}`")));
            }
        })
    }
}

/// Master seed from which every trial stream is derived.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SeedSpec {
    pub master_seed: u64,
}

impl SeedSpec {
    pub fn new(master_seed: u64) -> Self {
        SeedSpec { master_seed }
    }

    /// Generator for one trial; identical inputs give identical streams.
    pub fn rng(&self, trial: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(trial);
        rng
    }

    /// Independent child seed for a named sub-experiment.
    pub fn derive(&self, label: &str) -> SeedSpec {
        let mut h = Sha256::new();
        h.update(self.master_seed.to_le_bytes());
        h.update(label.as_bytes());
        let digest = h.finalize();
        let mut bytes = [0u8; 8];
        bytes.copy_from_slice(&digest[..8]);
        SeedSpec::new(u64::from_le_bytes(bytes))
    }
}

/// `count` real samples of trial `trial`.
pub fn sample_vector(
    model: &RandomModel,
    seed: &SeedSpec,
    trial: u64,
    count: usize,
) -> Result<Vec<f64>> {
    model.validate()?;
    if model.is_complex() {
        return Err(Error::ComplexModel(model.name()));
    }
    let mut rng = seed.rng(trial);
    Ok((0..count).map(|_| model.draw_real(&mut rng)).collect())
}

/// `count` samples as complex numbers; real models land on the real axis.
pub fn sample_complex(
    model: &RandomModel,
    seed: &SeedSpec,
    trial: u64,
    count: usize,
) -> Result<Vec<Complex64>> {
    model.validate()?;
    let mut rng = seed.rng(trial);
    Ok((0..count)
        .map(|_| match model {
            RandomModel::Steinhaus => Complex64::from_polar(1.0, TAU * rng.random::<f64>()),
            real => Complex64::new(real.draw_real(&mut rng), 0.0),
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MgfRow {
    pub lambda: f64,
    /// Empirical `E exp(lambda w)` divided by `exp(lambda^2 / 2)`.
    pub ratio: f64,
    /// Standard error of `ratio`.
    pub std_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MgfAudit {
    pub model: RandomModel,
    pub n_samples: usize,
    pub worst_ratio: f64,
    pub rows: Vec<MgfRow>,
}

impl MgfAudit {
    /// Largest `(ratio - 1) / std_error`; positive values exceed the subnormal bound.
    pub fn worst_z(&self) -> f64 {
        self.rows
            .iter()
            .map(|r| {
                if r.std_error > 0.0 {
                    (r.ratio - 1.0) / r.std_error
                } else if r.ratio > 1.0 + 1e-12 {
                    f64::INFINITY
                } else {
                    0.0
                }
            })
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

pub const MIN_MGF_SAMPLES: usize = 10_000;

/// Empirical check of `E exp(lambda w) <= exp(lambda^2 / 2)` on one shared sample.
pub fn mgf_audit(
    model: &RandomModel,
    lambdas: &[f64],
    n_samples: usize,
    seed: &SeedSpec,
) -> Result<MgfAudit> {
    if n_samples < MIN_MGF_SAMPLES {
        return Err(Error::Domain(format!(
            "mgf audit needs at least {MIN_MGF_SAMPLES} samples, got {n_samples}"
        )));
    }
    if lambdas.iter().any(|l| !l.is_finite()) {
        return Err(Error::Domain("lambda grid must be finite".into()));
    }
    let samples = sample_vector(model, seed, 0, n_samples)?;
    let n = n_samples as f64;
    let rows: Vec<MgfRow> = lambdas
        .iter()
        .map(|&lambda| {
            let scale = (-0.5 * lambda * lambda).exp();
            let (mut sum, mut sum_sq) = (0.0, 0.0);
            for &w in &samples {
                let y = (lambda * w).exp() * scale;
                sum += y;
                sum_sq += y * y;
            }
            let mean = sum / n;
            let var = ((sum_sq - n * mean * mean) / (n - 1.0)).max(0.0);
            MgfRow {
                lambda,
                ratio: mean,
                std_error: (var / n).sqrt(),
            }
        })
        .collect();
    let worst_ratio = rows
        .iter()
        .map(|r| r.ratio)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(MgfAudit {
        model: *model,
        n_samples,
        worst_ratio,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rademacher_is_signs_and_centered() {
        let v = sample_vector(&RandomModel::Rademacher, &SeedSpec::new(7), 0, 1_000_000).unwrap();
        assert!(v.iter().all(|&x| x == 1.0 || x == -1.0));
        let mean = v.iter().sum::<f64>() / v.len() as f64;
        assert!(mean.abs() < 4.0 / 1000.0, "mean {mean}");
    }

    #[test]
    fn gaussian_variance() {
        let v = sample_vector(
            &RandomModel::Gaussian { sigma: 1.0 },
            &SeedSpec::new(11),
            3,
            1_000_000,
        )
        .unwrap();
        let n = v.len() as f64;
        let mean = v.iter().sum::<f64>() / n;
        let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
        assert!((var - 1.0).abs() < 0.01, "variance {var}");
    }

    #[test]
    fn bounded_models_stay_in_unit_interval() {
        for model in [RandomModel::SteinhausReal, RandomModel::UniformSymmetric] {
            let v = sample_vector(&model, &SeedSpec::new(1), 0, 10_000).unwrap();
            assert!(v.iter().all(|x| x.abs() <= 1.0));
        }
    }

    #[test]
    fn deterministic_and_trial_separated() {
        let s = SeedSpec::new(42);
        let a = sample_vector(&RandomModel::Rademacher, &s, 0, 5).unwrap();
        let b = sample_vector(&RandomModel::Rademacher, &s, 0, 5).unwrap();
        assert_eq!(a, b);
        let c = sample_vector(&RandomModel::Gaussian { sigma: 1.0 }, &s, 1, 64).unwrap();
        let d = sample_vector(&RandomModel::Gaussian { sigma: 1.0 }, &s, 2, 64).unwrap();
        assert_ne!(c, d);
        // prefix property: a longer request extends a shorter one
        let long = sample_vector(&RandomModel::Rademacher, &s, 0, 50).unwrap();
        assert_eq!(&long[..5], a.as_slice());
    }

    #[test]
    fn bad_sigma_and_complex_model() {
        let m = RandomModel::Gaussian { sigma: 1.5 };
        assert!(matches!(
            sample_vector(&m, &SeedSpec::new(0), 0, 1),
            Err(Error::BadSigma(_))
        ));
        assert!(matches!(
            sample_vector(&RandomModel::Steinhaus, &SeedSpec::new(0), 0, 1),
            Err(Error::ComplexModel(_))
        ));
        let z = sample_complex(&RandomModel::Steinhaus, &SeedSpec::new(0), 0, 100).unwrap();
        assert!(z.iter().all(|c| (c.norm() - 1.0).abs() < 1e-12));
    }

    #[test]
    fn mgf_audit_rademacher_closed_form() {
        let audit = mgf_audit(
            &RandomModel::Rademacher,
            &[0.0, 1.0],
            200_000,
            &SeedSpec::new(5),
        )
        .unwrap();
        assert_eq!(audit.rows[0].ratio, 1.0);
        let expect = 1f64.cosh() * (-0.5f64).exp();
        let row = audit.rows[1];
        assert!((row.ratio - expect).abs() <= 3.0 * row.std_error, "{row:?}");
    }

    #[test]
    fn json_tags() {
        let m: RandomModel = serde_json::from_str(r#"{"kind":"rademacher"}"#).unwrap();
        assert_eq!(m, RandomModel::Rademacher);
        let g: RandomModel = serde_json::from_str(r#"{"kind":"gaussian","sigma":0.5}"#).unwrap();
        assert_eq!(g, RandomModel::Gaussian { sigma: 0.5 });
        assert_eq!(
            serde_json::to_string(&RandomModel::SteinhausReal).unwrap(),
            r#"{"kind":"steinhaus_real"}"#
        );
    }

    #[test]
    fn derived_seeds_differ() {
        let s = SeedSpec::new(9);
        assert_ne!(s.derive("a"), s.derive("b"));
        assert_eq!(s.derive("a"), s.derive("a"));
    }
}
