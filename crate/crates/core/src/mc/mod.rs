//! Seeded Monte Carlo ensembles over randomized disk series.
//!
//! Trials run on the rayon pool; every trial draws from its own stream, so the
//! aggregated quantiles do not depend on scheduling.

mod probes;

use std::f64::consts::PI;
use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::disk::{randomize, Flavor, SupBracket, DEFAULT_OVERSAMPLE};
use crate::error::{Error, Result};
use crate::random::{RandomModel, SeedSpec};
use crate::schemes::Provenance;
use crate::weight::Weight;

pub use probes::{
    cesaro_domination_check, cesaro_domination_for, riesz_probe, riesz_sign_sweep,
    salem_zygmund_probe, CesaroCheck, RieszRow, RieszSummary, SzReport, SzRow,
};

/// Default cap on `trials * sum_r M log2 M` FFT work.
pub const DEFAULT_MAX_WORK: f64 = 1e11;

/// Radii at which each trial is bracketed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case", deny_unknown_fields)]
pub enum RadiiRule {
    /// `r_N = 1 - 1/n_N` for the listed block indices of the scheme.
    BlockRadii {
        indices: Vec<usize>,
    },
    Explicit {
        radii: Vec<f64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Candidate {
    pub name: String,
    pub weight: Weight,
}

impl Candidate {
    pub fn new(name: &str, weight: Weight) -> Self {
        Candidate {
            name: name.to_string(),
            weight,
        }
    }
}

fn default_oversample() -> f64 {
    DEFAULT_OVERSAMPLE
}

fn default_max_work() -> f64 {
    DEFAULT_MAX_WORK
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub scheme: Provenance,
    pub model: RandomModel,
    pub seed: u64,
    pub trials: usize,
    pub radii: RadiiRule,
    #[serde(default = "default_oversample")]
    pub oversample: f64,
    #[serde(default)]
    pub refine: bool,
    #[serde(default)]
    pub candidates: Vec<Candidate>,
    #[serde(default)]
    pub flavor: Flavor,
    #[serde(default = "default_max_work")]
    pub max_work: f64,
}

impl ExperimentConfig {
    /// Hex SHA-256 of the canonical JSON encoding.
    pub fn hash(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("config serializes");
        hex::encode(Sha256::digest(&bytes))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quantiles {
    pub q10: f64,
    pub median: f64,
    pub q90: f64,
}

/// Linearly interpolated quantile of sorted data.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    let pos = q.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

impl Quantiles {
    pub fn of(values: &[f64]) -> Self {
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        Quantiles {
            q10: quantile(&v, 0.1),
            median: quantile(&v, 0.5),
            q90: quantile(&v, 0.9),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadiusSummary {
    /// Block index when the radius came from [`RadiiRule::BlockRadii`].
    pub block: Option<usize>,
    pub r: f64,
    pub n_of_r: f64,
    pub lower: Quantiles,
    pub upper: Quantiles,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateRow {
    pub r: f64,
    pub g: f64,
    /// Quantiles of `lower / g`.
    pub lower: Quantiles,
    /// Quantiles of `upper / g`.
    pub upper: Quantiles,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateTable {
    pub name: String,
    pub rows: Vec<CandidateRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleReport {
    pub config_hash: String,
    pub seed: u64,
    pub trials: usize,
    pub scheme: String,
    pub model: String,
    pub radii: Vec<RadiusSummary>,
    pub candidates: Vec<CandidateTable>,
    /// Excluded from the serialized report so identical configs give identical bytes.
    #[serde(skip)]
    pub wall_time_s: f64,
}

fn grid_work(degree: u64, oversample: f64) -> f64 {
    let m = ((oversample * degree.max(1) as f64 * PI).ceil() as usize).next_power_of_two() as f64;
    m * m.log2().max(1.0)
}

fn resolve_radii(
    config: &ExperimentConfig,
    blocks: Option<&crate::weight::BlockSequence>,
) -> Result<Vec<(Option<usize>, f64)>> {
    match &config.radii {
        RadiiRule::Explicit { radii } => {
            for &r in radii {
                if !(0.0..=1.0).contains(&r) {
                    return Err(Error::RadiusOutOfRange(r));
                }
            }
            Ok(radii.iter().map(|&r| (None, r)).collect())
        }
        RadiiRule::BlockRadii { indices } => {
            let blocks = blocks.ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "scheme `{}` has no block sequence",
                    config.scheme.name()
                ))
            })?;
            indices
                .iter()
                .map(|&k| {
                    if k == 0 || k >= blocks.len() {
                        return Err(Error::InvalidArgument(format!(
                            "block index {k} outside 1..={}",
                            blocks.k_max()
                        )));
                    }
                    Ok((Some(k), 1.0 - 1.0 / blocks.ends()[k] as f64))
                })
                .collect()
        }
    }
}

/// Randomizes the scheme `trials` times and brackets the sup at every radius.
pub fn run_growth_ensemble(config: &ExperimentConfig) -> Result<EnsembleReport> {
    let start = Instant::now();
    config.model.validate()?;
    if config.trials == 0 {
        return Err(Error::InvalidArgument("trials must be positive".into()));
    }
    let scheme = config.scheme.build()?;
    let radii = resolve_radii(config, scheme.blocks())?;
    let estimated =
        config.trials as f64 * radii.len() as f64 * grid_work(scheme.degree(), config.oversample);
    if estimated > config.max_work {
        return Err(Error::BudgetExceeded {
            estimated,
            budget: config.max_work,
        });
    }
    let seed = SeedSpec::new(config.seed);
    let brackets: Vec<Vec<SupBracket>> = (0..config.trials as u64)
        .into_par_iter()
        .map(|t| {
            let series = randomize(&scheme, &config.model, &seed, t, config.flavor)?;
            radii
                .iter()
                .map(|&(_, r)| series.sup_bracket(r, config.oversample, config.refine))
                .collect()
        })
        .collect::<Result<_>>()?;

    let column = |i: usize, f: &dyn Fn(&SupBracket) -> f64| {
        brackets.iter().map(|b| f(&b[i])).collect::<Vec<_>>()
    };
    let summaries = radii
        .iter()
        .enumerate()
        .map(|(i, &(block, r))| RadiusSummary {
            block,
            r,
            n_of_r: 1.0 / (1.0 - r),
            lower: Quantiles::of(&column(i, &|b| b.lower)),
            upper: Quantiles::of(&column(i, &|b| b.upper)),
        })
        .collect();
    let candidates = config
        .candidates
        .iter()
        .map(|c| {
            let rows = radii
                .iter()
                .enumerate()
                .map(|(i, &(_, r))| {
                    let g = c.weight.eval_v(r)?;
                    Ok(CandidateRow {
                        r,
                        g,
                        lower: Quantiles::of(&column(i, &|b| b.lower / g)),
                        upper: Quantiles::of(&column(i, &|b| b.upper / g)),
                    })
                })
                .collect::<Result<_>>()?;
            Ok(CandidateTable {
                name: c.name.clone(),
                rows,
            })
        })
        .collect::<Result<_>>()?;
    Ok(EnsembleReport {
        config_hash: config.hash(),
        seed: config.seed,
        trials: config.trials,
        scheme: config.scheme.name().to_string(),
        model: config.model.name().to_string(),
        radii: summaries,
        candidates,
        wall_time_s: start.elapsed().as_secs_f64(),
    })
}

impl EnsembleReport {
    pub fn write_json<W: Write>(&self, out: W) -> Result<()> {
        serde_json::to_writer_pretty(out, self)?;
        Ok(())
    }

    fn stamp<W: Write>(&self, out: &mut W) -> Result<()> {
        writeln!(out, "# config_hash={} seed={}", self.config_hash, self.seed)
            .map_err(|e| Error::io("<csv>", e))
    }

    /// `block,r,n_of_r,lower_q10,lower_median,lower_q90,upper_q10,upper_median,upper_q90`.
    pub fn write_radii_csv<W: Write>(&self, mut out: W) -> Result<()> {
        self.stamp(&mut out)?;
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "block",
            "r",
            "n_of_r",
            "lower_q10",
            "lower_median",
            "lower_q90",
            "upper_q10",
            "upper_median",
            "upper_q90",
        ])?;
        for s in &self.radii {
            w.write_record([
                s.block.map_or(String::new(), |k| k.to_string()),
                s.r.to_string(),
                s.n_of_r.to_string(),
                s.lower.q10.to_string(),
                s.lower.median.to_string(),
                s.lower.q90.to_string(),
                s.upper.q10.to_string(),
                s.upper.median.to_string(),
                s.upper.q90.to_string(),
            ])?;
        }
        w.flush().map_err(|e| Error::io("<csv>", e))?;
        Ok(())
    }

    /// `r,g,ratio_q10,ratio_median,ratio_q90,upper_ratio_median` for one candidate.
    pub fn write_candidate_csv<W: Write>(&self, table: &CandidateTable, mut out: W) -> Result<()> {
        self.stamp(&mut out)?;
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "r",
            "g",
            "ratio_q10",
            "ratio_median",
            "ratio_q90",
            "upper_ratio_median",
        ])?;
        for row in &table.rows {
            w.write_record([
                row.r.to_string(),
                row.g.to_string(),
                row.lower.q10.to_string(),
                row.lower.median.to_string(),
                row.lower.q90.to_string(),
                row.upper.median.to_string(),
            ])?;
        }
        w.flush().map_err(|e| Error::io("<csv>", e))?;
        Ok(())
    }

    /// Median lower bracket divided by `g`, per radius.
    pub fn median_ratios(&self, weight: &Weight) -> Result<Vec<f64>> {
        self.radii
            .iter()
            .map(|s| Ok(s.lower.median / weight.eval_v(s.r)?))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthFit {
    pub name: String,
    /// Least-squares slope of `ln(median ratio)` against the radius index.
    pub slope: f64,
    pub ratios: Vec<f64>,
}

/// Candidates ordered by `|slope|`, flattest first.
pub fn fit_growth(report: &EnsembleReport, candidates: &[Candidate]) -> Result<Vec<GrowthFit>> {
    if report.radii.len() < 3 {
        return Err(Error::InsufficientRadii(report.radii.len()));
    }
    let mut fits = candidates
        .iter()
        .map(|c| {
            let ratios = report.median_ratios(&c.weight)?;
            let ys: Vec<f64> = ratios.iter().map(|v| v.ln()).collect();
            Ok(GrowthFit {
                name: c.name.clone(),
                slope: slope(&ys),
                ratios,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    fits.sort_by(|a, b| a.slope.abs().total_cmp(&b.slope.abs()));
    Ok(fits)
}

fn slope(ys: &[f64]) -> f64 {
    let n = ys.len() as f64;
    let xbar = (n - 1.0) / 2.0;
    let ybar = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (i, y) in ys.iter().enumerate() {
        let dx = i as f64 - xbar;
        sxy += dx * (y - ybar);
        sxx += dx * dx;
    }
    sxy / sxx
}
