//! Brute-force probes: Salem-Zygmund maxima on a block, lacunary cosine sums,
//! and domination of Cesaro means.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::quantile;
use crate::disk::{randomize, Flavor, RandomizedSeries};
use crate::error::{Error, Result};
use crate::random::{RandomModel, SeedSpec};
use crate::schemes::{random_uniform_scheme, CoefficientScheme};
use crate::weight::clamped_ln;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SzRow {
    pub block: usize,
    pub n_k: u64,
    pub r: f64,
    /// `R = sum b_j^2` with `b_j = (1 - j/n_k) |a_j| r^j` over the block.
    pub r_sum: f64,
    /// `T4 = sum b_j^4`.
    pub t4: f64,
    /// `T4 n_k / R^2`.
    pub c_implied: f64,
    pub q05: f64,
    pub q10: f64,
    pub median: f64,
    pub q90: f64,
    /// `(C, fraction of trials with normalized max below C)`.
    pub below: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SzReport {
    pub seed: u64,
    pub trials: usize,
    pub rows: Vec<SzRow>,
}

/// Distribution of `max |h_N| / sqrt(R ln n_N)`, where `h_N` keeps block `N` of
/// the randomized series with coefficients scaled by `(1 - j/n_N) r_N^j`,
/// `r_N = 1 - 1/n_N`.
pub fn salem_zygmund_probe(
    scheme: &CoefficientScheme,
    model: &RandomModel,
    seed: &SeedSpec,
    trials: usize,
    block_list: &[usize],
    constants: &[f64],
    oversample: f64,
) -> Result<SzReport> {
    let blocks = scheme
        .blocks()
        .ok_or_else(|| Error::InvalidArgument("the probe needs a scheme with blocks".into()))?;
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be positive".into()));
    }
    let mut plan = Vec::with_capacity(block_list.len());
    for &k in block_list {
        if k == 0 || k >= blocks.len() {
            return Err(Error::InvalidArgument(format!(
                "block index {k} outside 1..={}",
                blocks.k_max()
            )));
        }
        let (lo, nk) = (blocks.ends()[k - 1], blocks.ends()[k]);
        let r = 1.0 - 1.0 / nk as f64;
        let scale = move |j: u64| {
            if j > lo && j <= nk {
                (1.0 - j as f64 / nk as f64) * r.powf(j as f64)
            } else {
                0.0
            }
        };
        let b: Vec<f64> = scheme
            .range(lo + 1, nk)
            .iter()
            .map(|c| c.magnitude() * scale(c.j))
            .collect();
        let r_sum: f64 = b.iter().map(|x| x * x).sum();
        let t4: f64 = b.iter().map(|x| x.powi(4)).sum();
        plan.push((k, nk, r, scale, r_sum, t4));
    }
    let maxima: Vec<Vec<f64>> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let series = randomize(scheme, model, seed, t, Flavor::RealHarmonic)?;
            plan.iter()
                .map(|(_, nk, _, scale, r_sum, _)| {
                    let h = series.map_coeffs(scale);
                    let b = h.sup_bracket(1.0, oversample, true)?;
                    let denom = (r_sum * clamped_ln(*nk as f64)).sqrt();
                    Ok(if denom > 0.0 { b.lower / denom } else { 0.0 })
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    let rows = plan
        .iter()
        .enumerate()
        .map(|(i, &(block, n_k, r, _, r_sum, t4))| {
            let mut v: Vec<f64> = maxima.iter().map(|m| m[i]).collect();
            v.sort_by(f64::total_cmp);
            let below = constants
                .iter()
                .map(|&c| {
                    (
                        c,
                        v.iter().filter(|&&x| x < c).count() as f64 / v.len() as f64,
                    )
                })
                .collect();
            SzRow {
                block,
                n_k,
                r,
                r_sum,
                t4,
                c_implied: if r_sum > 0.0 {
                    t4 * n_k as f64 / (r_sum * r_sum)
                } else {
                    0.0
                },
                q05: quantile(&v, 0.05),
                q10: quantile(&v, 0.1),
                median: quantile(&v, 0.5),
                q90: quantile(&v, 0.9),
                below,
            }
        })
        .collect();
    Ok(SzReport {
        seed: seed.master_seed,
        trials,
        rows,
    })
}

/// Largest number of lacunary terms the probe accepts; the degree is `N + 4^8`.
pub const MAX_RIESZ_TERMS: usize = 8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RieszRow {
    pub n_terms: usize,
    pub offset: u64,
    pub coefficients: Vec<f64>,
    pub sum_abs: f64,
    /// Certified lower bound on `sup |sum c_j cos((N + 4^j) theta)|`.
    pub lower: f64,
    pub upper: f64,
    /// `lower / sum |c_j|`.
    pub ratio: f64,
}

/// Brackets `sum_{j=1}^{n} c_j cos((N + 4^j) theta)` against `sum |c_j|`.
pub fn riesz_probe(c_values: &[f64], offset: u64, oversample: f64) -> Result<RieszRow> {
    if c_values.is_empty() || c_values.len() > MAX_RIESZ_TERMS {
        return Err(Error::InvalidArgument(format!(
            "riesz probe takes 1..={MAX_RIESZ_TERMS} terms, got {}",
            c_values.len()
        )));
    }
    let terms = c_values
        .iter()
        .enumerate()
        .map(|(i, &c)| (offset + 4u64.pow(i as u32 + 1), c, 0.0));
    let series = RandomizedSeries::from_trig(terms)?;
    let b = series.sup_bracket(1.0, oversample, true)?;
    let sum_abs: f64 = c_values.iter().map(|c| c.abs()).sum();
    Ok(RieszRow {
        n_terms: c_values.len(),
        offset,
        coefficients: c_values.to_vec(),
        sum_abs,
        lower: b.lower,
        upper: b.upper,
        ratio: if sum_abs > 0.0 {
            b.lower / sum_abs
        } else {
            0.0
        },
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RieszSummary {
    pub n_terms: usize,
    pub configurations: usize,
    /// Ratio for all coefficients `+1`, minimized over offsets.
    pub min_ratio_positive: f64,
    /// Ratio minimized over offsets and all sign patterns of unit coefficients.
    pub min_ratio: f64,
    pub worst: RieszRow,
}

/// Unit-modulus coefficients with every sign pattern (first sign fixed, since
/// `sup |P| = sup |-P|`), for each offset.
pub fn riesz_sign_sweep(
    n_terms_list: &[usize],
    offsets: &[u64],
    oversample: f64,
) -> Result<Vec<RieszSummary>> {
    if offsets.is_empty() {
        return Err(Error::EmptyRange("no offsets".into()));
    }
    n_terms_list
        .iter()
        .map(|&n| {
            if n == 0 || n > MAX_RIESZ_TERMS {
                return Err(Error::InvalidArgument(format!(
                    "n_terms must lie in 1..={MAX_RIESZ_TERMS}"
                )));
            }
            let configs: Vec<(u64, Vec<f64>)> = offsets
                .iter()
                .flat_map(|&off| {
                    (0..1u32 << (n - 1)).map(move |bits| {
                        let c = (0..n)
                            .map(|i| {
                                if i > 0 && bits >> (i - 1) & 1 == 1 {
                                    -1.0
                                } else {
                                    1.0
                                }
                            })
                            .collect();
                        (off, c)
                    })
                })
                .collect();
            let rows = configs
                .par_iter()
                .map(|(off, c)| riesz_probe(c, *off, oversample))
                .collect::<Result<Vec<_>>>()?;
            let min_ratio_positive = rows
                .iter()
                .filter(|r| r.coefficients.iter().all(|&c| c > 0.0))
                .map(|r| r.ratio)
                .fold(f64::INFINITY, f64::min);
            let worst = rows
                .iter()
                .min_by(|a, b| a.ratio.total_cmp(&b.ratio))
                .cloned()
                .expect("at least one configuration");
            Ok(RieszSummary {
                n_terms: n,
                configurations: rows.len(),
                min_ratio_positive,
                min_ratio: worst.ratio,
                worst,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CesaroCheck {
    pub cases: usize,
    pub violations: usize,
    /// Largest `lower(sigma_n u) - upper(u)`; negative when every case passes.
    pub worst_margin: f64,
}

/// Checks `sup |sigma_n u_r| <= sup |u_r|` through brackets: a violation needs
/// the certified lower bound for the mean to exceed the upper bound for `u`.
pub fn cesaro_domination_for(
    series: &[RandomizedSeries],
    radii: &[f64],
    ns: &[u64],
    oversample: f64,
) -> Result<CesaroCheck> {
    let margins = series
        .par_iter()
        .map(|u| {
            let mut out = Vec::with_capacity(radii.len() * ns.len());
            for &r in radii {
                let full = u.sup_bracket(r, oversample, false)?;
                for &n in ns {
                    let mean = u.cesaro_mean(n)?.sup_bracket(r, oversample, true)?;
                    out.push(mean.lower - full.upper);
                }
            }
            Ok(out)
        })
        .collect::<Result<Vec<Vec<f64>>>>()?;
    let all: Vec<f64> = margins.into_iter().flatten().collect();
    Ok(CesaroCheck {
        cases: all.len(),
        violations: all.iter().filter(|&&m| m > 0.0).count(),
        worst_margin: all.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    })
}

/// [`cesaro_domination_for`] over `trials` uniform random schemes of the given degree.
pub fn cesaro_domination_check(
    trials: usize,
    degree: u64,
    radii: &[f64],
    ns: &[u64],
    seed: &SeedSpec,
    oversample: f64,
) -> Result<CesaroCheck> {
    let series = (0..trials)
        .map(|t| {
            let s = random_uniform_scheme(
                seed.derive(&format!("cesaro-{t}")).master_seed,
                degree,
                true,
            )?;
            Ok(RandomizedSeries::unrandomized(&s, Flavor::RealHarmonic))
        })
        .collect::<Result<Vec<_>>>()?;
    cesaro_domination_for(&series, radii, ns, oversample)
}
