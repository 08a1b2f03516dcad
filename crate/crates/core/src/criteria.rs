//! Sup-ratio scores: the smallest constant making a coefficient or operator
//! inequality hold over a finite range, with checkpoints for trend reading.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::disk::RandomizedSeries;
use crate::error::{Error, Result};
use crate::schemes::CoefficientScheme;
use crate::weight::{clamped_ln, BlockSequence, Weight};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SupRatioKind {
    /// `sqrt(sum_(j<=n) |a_j|^2) / g(n)`.
    #[serde(rename = "L2_CUM")]
    L2Cum,
    /// `sum_(j<=n) |a_j| / g(n)`.
    #[serde(rename = "L1_CUM")]
    L1Cum,
    /// `sum_(j<=n) |a_j| / (g(n) sqrt n)`.
    #[serde(rename = "L1_SQRT")]
    L1Sqrt,
    /// `sqrt(sum_(j<=n) |a_j|^2) sqrt(L(n)) / g(n)`.
    #[serde(rename = "L2_LOG")]
    L2Log,
}

impl SupRatioKind {
    pub const ALL: [SupRatioKind; 4] = [
        SupRatioKind::L2Cum,
        SupRatioKind::L1Cum,
        SupRatioKind::L1Sqrt,
        SupRatioKind::L2Log,
    ];

    pub fn id(&self) -> &'static str {
        match self {
            SupRatioKind::L2Cum => "L2_CUM",
            SupRatioKind::L1Cum => "L1_CUM",
            SupRatioKind::L1Sqrt => "L1_SQRT",
            SupRatioKind::L2Log => "L2_LOG",
        }
    }

    fn ratio(&self, l1: f64, l2_sq: f64, n: u64, g: f64) -> f64 {
        let nf = n as f64;
        match self {
            SupRatioKind::L2Cum => l2_sq.sqrt() / g,
            SupRatioKind::L1Cum => l1 / g,
            SupRatioKind::L1Sqrt => l1 / (g * nf.sqrt()),
            SupRatioKind::L2Log => l2_sq.sqrt() * clamped_ln(nf).sqrt() / g,
        }
    }
}

impl std::str::FromStr for SupRatioKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SupRatioKind::ALL
            .into_iter()
            .find(|k| k.id().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown criterion kind `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub n: u64,
    pub ratio: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreReport {
    pub criterion: String,
    /// Largest ratio over the tested range.
    pub score: f64,
    /// Index attaining the score.
    pub witness: u64,
    pub range: [u64; 2],
    pub checkpoints: Vec<Checkpoint>,
    /// Last checkpoint ratio over the first positive one; a rough boundedness signal.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trend: Option<f64>,
    /// `max_k g(n_(k+1)) / g(n_k)` for block-based criteria.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c1_hat: Option<f64>,
}

impl ScoreReport {
    fn new(
        criterion: String,
        range: [u64; 2],
        checkpoints: Vec<Checkpoint>,
        score: f64,
        witness: u64,
    ) -> Self {
        let trend = checkpoints
            .iter()
            .find(|c| c.ratio > 0.0)
            .zip(checkpoints.last())
            .map(|(first, last)| last.ratio / first.ratio);
        ScoreReport {
            criterion,
            score,
            witness,
            range,
            checkpoints,
            trend,
            c1_hat: None,
        }
    }

    pub fn write_json<W: Write>(&self, out: W) -> Result<()> {
        serde_json::to_writer_pretty(out, self)?;
        Ok(())
    }

    /// CSV mirror of the checkpoints: `n,ratio,target`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["n", "ratio", "target"])?;
        for c in &self.checkpoints {
            w.write_record([
                c.n.to_string(),
                c.ratio.to_string(),
                c.target.map(|t| t.to_string()).unwrap_or_default(),
            ])?;
        }
        w.flush().map_err(|e| Error::io("<csv>", e))?;
        Ok(())
    }

    pub fn ratios(&self) -> Vec<f64> {
        self.checkpoints.iter().map(|c| c.ratio).collect()
    }
}

fn is_checkpoint(n: u64, last: u64) -> bool {
    n.is_power_of_two() || n == last
}

/// Score of one cumulative coefficient condition over `1 <= n <= n_max`.
///
/// Checkpoints sit at powers of two and at `n_max`, each holding the score
/// over `[1, n]`, so checkpoint ratios never decrease.
pub fn score_sup_ratio(
    kind: SupRatioKind,
    scheme: &CoefficientScheme,
    weight: &Weight,
    n_max: u64,
) -> Result<ScoreReport> {
    if n_max == 0 {
        return Err(Error::EmptyRange("n_max must be at least 1".into()));
    }
    let entries = scheme.entries();
    let mut next = 0;
    let (mut l1, mut l2) = (0.0, 0.0);
    let (mut score, mut witness) = (0.0f64, 1u64);
    let mut checkpoints = Vec::new();
    for n in 0..=n_max {
        while next < entries.len() && entries[next].j <= n {
            l1 += entries[next].magnitude();
            l2 += entries[next].magnitude_sq();
            next += 1;
        }
        if n == 0 {
            continue;
        }
        let ratio = kind.ratio(l1, l2, n, weight.g_unchecked(n as f64));
        if ratio > score {
            score = ratio;
            witness = n;
        }
        if is_checkpoint(n, n_max) {
            checkpoints.push(Checkpoint {
                n,
                ratio: score,
                target: None,
            });
        }
    }
    Ok(ScoreReport::new(
        kind.id().into(),
        [1, n_max],
        checkpoints,
        score,
        witness,
    ))
}

/// Optional modifiers shared by the two block criteria.
#[derive(Debug, Clone, Copy, Default)]
pub struct BlockOptions<'a> {
    /// Weight coefficient `j` by `j^2`, the gradient form.
    pub m_weighted: bool,
    /// Bloch-type target `1 / w(1 - 1/n_k)` instead of `g(n_k)`.
    pub bloch_w: Option<&'a Weight>,
}

struct BlockSums {
    n: Vec<u64>,
    /// Per block `k >= 1`; block 1 also absorbs degrees `j <= n_0`.
    sums: Vec<f64>,
    growth_target: Vec<f64>,
}

fn block_sums(
    scheme: &CoefficientScheme,
    blocks: &BlockSequence,
    weight: &Weight,
    opts: BlockOptions,
) -> Result<BlockSums> {
    if blocks.len() < 2 {
        return Err(Error::EmptyBlocks);
    }
    if blocks.last() < scheme.degree() {
        return Err(Error::BlocksTooShort {
            blocks_end: blocks.last(),
            degree: scheme.degree() as usize,
        });
    }
    let n = blocks.ends().to_vec();
    let mut sums = vec![0.0; n.len()];
    for c in scheme.entries() {
        let k = blocks.block_of(c.j).unwrap_or(1);
        let w = if opts.m_weighted {
            (c.j as f64).powi(2)
        } else {
            1.0
        };
        sums[k] += w * c.magnitude_sq();
    }
    let growth_target = n
        .iter()
        .map(|&nk| match opts.bloch_w {
            Some(w) => w.eval_w(1.0 - 1.0 / nk as f64).map(|v| 1.0 / v),
            None => Ok(weight.g_unchecked(nk as f64)),
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(BlockSums {
        n,
        sums,
        growth_target,
    })
}

fn criterion_name(base: &str, opts: BlockOptions) -> String {
    let mut s = base.to_string();
    if opts.m_weighted {
        s.push_str("_M2");
    }
    if opts.bloch_w.is_some() {
        s.push_str("_BLOCH");
    }
    s
}

/// `max_k [sum_(i<=k) sqrt(S_i L(n_i))] / target(n_k)` with `S_i` the block sums of `|a_j|^2`.
pub fn score_block_sum(
    scheme: &CoefficientScheme,
    blocks: &BlockSequence,
    weight: &Weight,
    opts: BlockOptions,
) -> Result<ScoreReport> {
    let b = block_sums(scheme, blocks, weight, opts)?;
    let mut acc = 0.0;
    let (mut score, mut witness) = (0.0f64, b.n[1]);
    let mut checkpoints = Vec::new();
    for k in 1..b.n.len() {
        acc += (b.sums[k] * clamped_ln(b.n[k] as f64)).sqrt();
        let target = b.growth_target[k];
        let ratio = acc / target;
        if ratio > score {
            score = ratio;
            witness = b.n[k];
        }
        checkpoints.push(Checkpoint {
            n: b.n[k],
            ratio,
            target: Some(target),
        });
    }
    let mut report = ScoreReport::new(
        criterion_name("BLOCK_SUM", opts),
        [b.n[0], blocks.last()],
        checkpoints,
        score,
        witness,
    );
    report.c1_hat = Some(
        b.growth_target
            .windows(2)
            .map(|w| w[1] / w[0])
            .fold(0.0, f64::max),
    );
    Ok(report)
}

/// `max_k sqrt(S_k) / target_k` with `target_k = g(n_k) / sqrt(L(n_k))`
/// or `1 / (w(1 - 1/n_k) sqrt(L(n_k)))`.
pub fn score_blockwise(
    scheme: &CoefficientScheme,
    blocks: &BlockSequence,
    weight: &Weight,
    opts: BlockOptions,
) -> Result<ScoreReport> {
    let b = block_sums(scheme, blocks, weight, opts)?;
    let (mut score, mut witness) = (0.0f64, b.n[1]);
    let mut checkpoints = Vec::new();
    for k in 1..b.n.len() {
        let target = b.growth_target[k] / clamped_ln(b.n[k] as f64).sqrt();
        let ratio = b.sums[k].sqrt() / target;
        if ratio > score {
            score = ratio;
            witness = b.n[k];
        }
        checkpoints.push(Checkpoint {
            n: b.n[k],
            ratio,
            target: Some(target),
        });
    }
    Ok(ScoreReport::new(
        criterion_name("BLOCKWISE", opts),
        [b.n[0], blocks.last()],
        checkpoints,
        score,
        witness,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum OperatorKind {
    /// `||sigma_n u|| / g(n)`.
    Cesaro,
    /// `||s_n u|| / (g(n) L(n))`.
    Partial,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OperatorRow {
    pub n: u64,
    pub lower: f64,
    pub upper: f64,
    /// `g(n)` for Cesaro means, `g(n) L(n)` for partial sums.
    pub normalizer: f64,
    pub ratio_lower: f64,
    pub ratio_upper: f64,
}

/// Certified boundary sup norms of `sigma_n u` or `s_n u` at each `n`, normalized.
pub fn operator_norm_profile(
    series: &RandomizedSeries,
    ns: &[u64],
    which: OperatorKind,
    weight: &Weight,
    oversample: f64,
    refine: bool,
) -> Result<Vec<OperatorRow>> {
    ns.iter()
        .map(|&n| {
            let op = match which {
                OperatorKind::Cesaro => series.cesaro_mean(n)?,
                OperatorKind::Partial => series.partial_sum(n)?,
            };
            let b = op.sup_bracket(1.0, oversample, refine)?;
            let g = weight.g_unchecked(n as f64);
            let normalizer = match which {
                OperatorKind::Cesaro => g,
                OperatorKind::Partial => g * clamped_ln(n as f64),
            };
            Ok(OperatorRow {
                n,
                lower: b.lower,
                upper: b.upper,
                normalizer,
                ratio_lower: b.lower / normalizer,
                ratio_upper: b.upper / normalizer,
            })
        })
        .collect()
}
