//! Necessary-condition diagnostics: normalized coefficient minima along blocks
//! and counts of coefficients below a slowly growing threshold.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::schemes::{CoefficientScheme, NuSequence};
use crate::weight::{BlockSequence, Weight};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LiminfRow {
    pub k: usize,
    pub n_k: u64,
    /// Smallest normalized magnitude within block `k`.
    pub block_min: f64,
    /// Running minimum over blocks `1..=k`.
    pub running_min: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LiminfProfile {
    pub rows: Vec<LiminfRow>,
    /// Smallest block minimum over the second half of the blocks, a finite-range liminf proxy.
    pub proxy: f64,
}

fn bloch_factor(w: &Weight, j: u64) -> Result<f64> {
    w.eval_w(1.0 - 1.0 / j as f64)
}

/// Block minima of `|a_j| sqrt(n_k) / g(j)`, or `|a_j| j w(1 - 1/j) sqrt(n_k)` with a Bloch weight.
pub fn liminf_profile(
    scheme: &CoefficientScheme,
    blocks: &BlockSequence,
    weight: &Weight,
    bloch_w: Option<&Weight>,
) -> Result<LiminfProfile> {
    if blocks.len() < 2 {
        return Err(Error::EmptyBlocks);
    }
    if blocks.last() < scheme.degree() {
        return Err(Error::BlocksTooShort {
            blocks_end: blocks.last(),
            degree: scheme.degree() as usize,
        });
    }
    let mut rows = Vec::with_capacity(blocks.len() - 1);
    let mut running = f64::INFINITY;
    for k in 1..blocks.len() {
        let nk = blocks.ends()[k];
        let sqrt_nk = (nk as f64).sqrt();
        let range = blocks.block_range(k);
        let mut block_min = f64::INFINITY;
        for j in range {
            let a = scheme.magnitude(j);
            let v = match bloch_w {
                Some(w) => a * j as f64 * bloch_factor(w, j)? * sqrt_nk,
                None => a * sqrt_nk / weight.g_unchecked(j as f64),
            };
            block_min = block_min.min(v);
        }
        running = running.min(block_min);
        rows.push(LiminfRow {
            k,
            n_k: nk,
            block_min,
            running_min: running,
        });
    }
    let half = rows.len() / 2;
    let proxy = rows[half..]
        .iter()
        .map(|r| r.block_min)
        .fold(f64::INFINITY, f64::min);
    Ok(LiminfProfile { rows, proxy })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CensusRow {
    pub n: u64,
    pub count: u64,
    pub fraction: f64,
    /// Threshold applied at `j = n`.
    pub threshold: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensusReport {
    /// Threshold sequence `p_j`, evaluated as `p.at(j)`.
    pub p: NuSequence,
    pub rows: Vec<CensusRow>,
}

impl CensusReport {
    /// `n,N_n,fraction,threshold_at_n`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["n", "N_n", "fraction", "threshold_at_n"])?;
        for r in &self.rows {
            w.write_record([
                r.n.to_string(),
                r.count.to_string(),
                r.fraction.to_string(),
                r.threshold.to_string(),
            ])?;
        }
        w.flush().map_err(|e| Error::io("<csv>", e))?;
        Ok(())
    }

    pub fn fractions(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.fraction).collect()
    }
}

/// `N(n)` counts `1 <= j <= n` with `|a_j| <= p_j g(j) / sqrt j`, or
/// `|a_j| <= p_j / (j w(1 - 1/j) sqrt j)` with a Bloch weight; rows at powers of two and `n_max`.
pub fn coefficient_census(
    scheme: &CoefficientScheme,
    weight: &Weight,
    p: NuSequence,
    n_max: u64,
    bloch_w: Option<&Weight>,
) -> Result<CensusReport> {
    if n_max == 0 {
        return Err(Error::EmptyRange("n_max must be at least 1".into()));
    }
    let mut rows = Vec::new();
    let mut count = 0u64;
    for j in 1..=n_max {
        let jf = j as f64;
        let threshold = match bloch_w {
            Some(w) => p.at(j) / (jf * bloch_factor(w, j)? * jf.sqrt()),
            None => p.at(j) * weight.g_unchecked(jf) / jf.sqrt(),
        };
        if scheme.magnitude(j) <= threshold {
            count += 1;
        }
        if j.is_power_of_two() || j == n_max {
            rows.push(CensusRow {
                n: j,
                count,
                fraction: count as f64 / jf,
                threshold,
            });
        }
    }
    Ok(CensusReport { p, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schemes::{
        constant_scheme, hadamard_lacunary_scheme, rudin_shapiro_scheme, weight_profile_scheme,
    };
    use crate::weight::block_sequence;

    fn lin() -> Weight {
        Weight::power(1.0).unwrap()
    }

    fn dyadic(k: usize) -> BlockSequence {
        block_sequence(&lin(), 2.0, 1, k, true).unwrap()
    }

    #[test]
    fn hadamard_proxy_vanishes() {
        let s = hadamard_lacunary_scheme(&dyadic(10)).unwrap();
        let p = liminf_profile(&s, &dyadic(10), &lin(), None).unwrap();
        assert_eq!(p.proxy, 0.0);
    }

    #[test]
    fn rudin_shapiro_proxy_positive() {
        let s = rudin_shapiro_scheme(&dyadic(12)).unwrap();
        let p = liminf_profile(&s, &dyadic(12), &lin(), None).unwrap();
        // |a_j| sqrt(n_k) / g(j) = sqrt(2) n_k / j >= sqrt 2 on block k
        assert!((p.proxy - 2f64.sqrt()).abs() < 1e-12);
        assert!(p
            .rows
            .windows(2)
            .all(|w| w[1].running_min <= w[0].running_min));
    }

    #[test]
    fn constant_proxy_decays() {
        let s = constant_scheme(1.0, 1024).unwrap();
        let p = liminf_profile(&s, &dyadic(10), &lin(), None).unwrap();
        let last = p.rows.last().unwrap();
        assert!((last.block_min - (1024f64).sqrt() / 1024.0).abs() < 1e-12);
    }

    #[test]
    fn zero_scheme_census_is_full() {
        let z = CoefficientScheme::zero(0);
        let r = coefficient_census(&z, &lin(), NuSequence::Log, 1000, None).unwrap();
        assert!(r.rows.iter().all(|row| row.fraction == 1.0));
    }

    #[test]
    fn census_trends() {
        let rs = rudin_shapiro_scheme(&dyadic(14)).unwrap();
        let up = coefficient_census(&rs, &lin(), NuSequence::Log, 1 << 14, None).unwrap();
        assert!(up.rows.last().unwrap().fraction > 0.9);
        let big = weight_profile_scheme(&lin(), 1 << 12).unwrap();
        let down = coefficient_census(&big, &lin(), NuSequence::Log, 1 << 12, None).unwrap();
        let f = down.fractions();
        assert!(f.last().unwrap() < &0.01 && f[f.len() - 1] <= f[2]);
    }
}
