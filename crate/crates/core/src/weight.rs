//! Doubling weights and the block sequences built from them.
//!
//! A growth weight is stored through its growth function `g` on `[1, ∞)`;
//! the radial majorant is recovered as `v(r) = g(1 / (1 - r))`. Bloch-type
//! weights are represented as reciprocals `w = 1 / v` of a growth weight.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `max(1, ln x)`, the logarithm clamp used by every coefficient formula.
pub fn clamped_ln(x: f64) -> f64 {
    x.ln().max(1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum LogBase {
    #[default]
    #[serde(rename = "e")]
    Natural,
    #[serde(rename = "2")]
    Two,
}

impl LogBase {
    fn log(self, x: f64) -> f64 {
        match self {
            LogBase::Natural => x.ln(),
            LogBase::Two => x.log2(),
        }
    }
}

/// Serialized form of a [`Weight`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum WeightFamily {
    /// `g(x) = x^alpha`.
    Power { alpha: f64 },
    /// `g(x) = max(1, (log x)^alpha)`.
    #[serde(rename = "logpower")]
    LogPower {
        alpha: f64,
        #[serde(default)]
        base: LogBase,
    },
    /// `g(x) = max(1, ln x · ln ln x)^alpha`.
    #[serde(rename = "loglogpower")]
    LogLogPower { alpha: f64 },
    /// Growth weight `v = 1 / w` of a Bloch-type weight `w`; `g` is the inner `g`.
    BlochReciprocal { inner: Box<Weight> },
    /// Piecewise-linear interpolation of sampled values, constant past the last sample.
    Table { x: Vec<f64>, g: Vec<f64> },
}

/// A validated doubling weight.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "WeightFamily", into = "WeightFamily")]
pub struct Weight(WeightFamily);

impl TryFrom<WeightFamily> for Weight {
    type Error = Error;

    fn try_from(family: WeightFamily) -> Result<Self> {
        match &family {
            WeightFamily::Power { alpha }
            | WeightFamily::LogPower { alpha, .. }
            | WeightFamily::LogLogPower { alpha } => {
                if !(alpha.is_finite() && *alpha > 0.0) {
                    return Err(Error::NonPositiveExponent(*alpha));
                }
            }
            WeightFamily::BlochReciprocal { .. } => {}
            WeightFamily::Table { x, g } => validate_table(x, g)?,
        }
        Ok(Weight(family))
    }
}

impl From<Weight> for WeightFamily {
    fn from(w: Weight) -> Self {
        w.0
    }
}

fn validate_table(x: &[f64], g: &[f64]) -> Result<()> {
    if x.is_empty() || x.len() != g.len() {
        return Err(Error::InvalidTable(format!(
            "need equally long non-empty columns, got {} and {}",
            x.len(),
            g.len()
        )));
    }
    if x[0] != 1.0 {
        return Err(Error::InvalidTable(format!(
            "first abscissa must be 1, got {}",
            x[0]
        )));
    }
    if g[0] < 1.0 {
        return Err(Error::InvalidTable(format!(
            "g(1) must be >= 1, got {}",
            g[0]
        )));
    }
    if x.iter().chain(g).any(|v| !v.is_finite()) {
        return Err(Error::InvalidTable("non-finite sample".into()));
    }
    for i in 1..x.len() {
        if x[i] <= x[i - 1] {
            return Err(Error::InvalidTable(format!(
                "abscissae not increasing at index {i}"
            )));
        }
        if g[i] < g[i - 1] {
            return Err(Error::InvalidTable(format!("values decrease at index {i}")));
        }
    }
    Ok(())
}

/// Which builtin family to construct with [`make_weight`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyKind {
    Power,
    LogPower,
    LogPowerBase2,
    LogLogPower,
}

/// Builds one of the builtin families with exponent `alpha`.
pub fn make_weight(kind: FamilyKind, alpha: f64) -> Result<Weight> {
    let family = match kind {
        FamilyKind::Power => WeightFamily::Power { alpha },
        FamilyKind::LogPower => WeightFamily::LogPower {
            alpha,
            base: LogBase::Natural,
        },
        FamilyKind::LogPowerBase2 => WeightFamily::LogPower {
            alpha,
            base: LogBase::Two,
        },
        FamilyKind::LogLogPower => WeightFamily::LogLogPower { alpha },
    };
    Weight::try_from(family)
}

impl Weight {
    pub fn power(alpha: f64) -> Result<Self> {
        make_weight(FamilyKind::Power, alpha)
    }

    pub fn log_power(alpha: f64) -> Result<Self> {
        make_weight(FamilyKind::LogPower, alpha)
    }

    pub fn log_power_base2(alpha: f64) -> Result<Self> {
        make_weight(FamilyKind::LogPowerBase2, alpha)
    }

    pub fn log_log_power(alpha: f64) -> Result<Self> {
        make_weight(FamilyKind::LogLogPower, alpha)
    }

    pub fn table(x: Vec<f64>, g: Vec<f64>) -> Result<Self> {
        Weight::try_from(WeightFamily::Table { x, g })
    }

    /// Reciprocal of a Bloch-type weight: `w(r) = 1 / inner.v(r)`.
    pub fn bloch_reciprocal(inner: Weight) -> Self {
        Weight(WeightFamily::BlochReciprocal {
            inner: Box::new(inner),
        })
    }

    /// Growth weight of the Bloch weight `w(r) = (1 - r)^alpha`.
    pub fn bloch_power(alpha: f64) -> Result<Self> {
        Ok(Self::bloch_reciprocal(Self::power(alpha)?))
    }

    /// Growth weight of the Bloch weight `w(r) = (log 1/(1 - r))^(-alpha)`.
    pub fn bloch_log(alpha: f64) -> Result<Self> {
        Ok(Self::bloch_reciprocal(Self::log_power(alpha)?))
    }

    pub fn family(&self) -> &WeightFamily {
        &self.0
    }

    pub fn domain_min(&self) -> f64 {
        1.0
    }

    /// `g(x)` for `x >= 1`.
    pub fn eval_g(&self, x: f64) -> Result<f64> {
        if x.is_nan() || x < 1.0 {
            return Err(Error::Domain(format!(
                "g is defined on [1, inf), got x = {x}"
            )));
        }
        Ok(self.g_unchecked(x))
    }

    /// `g` without the domain check; callers guarantee `x >= 1`.
    pub(crate) fn g_unchecked(&self, x: f64) -> f64 {
        match &self.0 {
            WeightFamily::Power { alpha } => x.powf(*alpha),
            WeightFamily::LogPower { alpha, base } => base.log(x).max(1.0).powf(*alpha),
            WeightFamily::LogLogPower { alpha } => {
                if x <= std::f64::consts::E {
                    1.0
                } else {
                    let l = x.ln();
                    (l * l.ln()).max(1.0).powf(*alpha)
                }
            }
            WeightFamily::BlochReciprocal { inner } => inner.g_unchecked(x),
            WeightFamily::Table { x: xs, g } => interpolate(xs, g, x),
        }
    }

    /// `v(r) = g(1 / (1 - r))` for `0 <= r < 1`.
    pub fn eval_v(&self, r: f64) -> Result<f64> {
        if !(0.0..1.0).contains(&r) {
            return Err(Error::Domain(format!(
                "v is defined on [0, 1), got r = {r}"
            )));
        }
        Ok(self.g_unchecked(1.0 / (1.0 - r)))
    }

    /// Bloch-type weight `w(r) = 1 / v(r)`.
    pub fn eval_w(&self, r: f64) -> Result<f64> {
        Ok(1.0 / self.eval_v(r)?)
    }

    /// Doubling constant known in closed form, if any.
    pub fn analytic_doubling(&self) -> Option<f64> {
        match &self.0 {
            WeightFamily::Power { alpha } => Some(2f64.powf(*alpha)),
            // ratio (1 + l) / l of the logarithms peaks where the clamp releases
            WeightFamily::LogPower { alpha, base } => Some(match base {
                LogBase::Natural => (1.0 + std::f64::consts::LN_2).powf(*alpha),
                LogBase::Two => 2f64.powf(*alpha),
            }),
            WeightFamily::BlochReciprocal { inner } => inner.analytic_doubling(),
            _ => None,
        }
    }

    /// Short human-readable label, e.g. `power:1`.
    pub fn label(&self) -> String {
        match &self.0 {
            WeightFamily::Power { alpha } => format!("power:{alpha}"),
            WeightFamily::LogPower {
                alpha,
                base: LogBase::Natural,
            } => format!("logpower:{alpha}"),
            WeightFamily::LogPower {
                alpha,
                base: LogBase::Two,
            } => format!("logpower2:{alpha}"),
            WeightFamily::LogLogPower { alpha } => format!("loglogpower:{alpha}"),
            WeightFamily::BlochReciprocal { inner } => format!("bloch({})", inner.label()),
            WeightFamily::Table { x, .. } => format!("table[{}]", x.len()),
        }
    }
}

fn interpolate(xs: &[f64], g: &[f64], x: f64) -> f64 {
    let i = xs.partition_point(|&v| v <= x);
    if i == xs.len() {
        return g[g.len() - 1];
    }
    // xs[0] = 1 <= x, so i >= 1
    let (x0, x1) = (xs[i - 1], xs[i]);
    let t = (x - x0) / (x1 - x0);
    g[i - 1] + t * (g[i] - g[i - 1])
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Parses `family:alpha`, with families `power`, `logpower`, `logpower2`,
/// `loglogpower`, `bloch-power` and `bloch-log`.
impl FromStr for Weight {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (family, alpha) = s
            .split_once(':')
            .ok_or_else(|| Error::InvalidArgument(format!("weight `{s}` is not family:alpha")))?;
        let alpha: f64 = alpha
            .trim()
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("bad exponent in weight `{s}`")))?;
        match family.trim() {
            "power" => Weight::power(alpha),
            "logpower" => Weight::log_power(alpha),
            "logpower2" => Weight::log_power_base2(alpha),
            "loglogpower" => Weight::log_log_power(alpha),
            "bloch-power" => Weight::bloch_power(alpha),
            "bloch-log" => Weight::bloch_log(alpha),
            other => Err(Error::InvalidArgument(format!(
                "unknown weight family `{other}`"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DoublingAudit {
    pub d_hat: f64,
    pub worst_x: f64,
}

/// Largest `g(2x) / g(x)` over a log-spaced grid of `grid_size` points in `[1, x_max]`.
pub fn doubling_audit(weight: &Weight, x_max: f64, grid_size: usize) -> Result<DoublingAudit> {
    if grid_size == 0 {
        return Err(Error::EmptyRange(
            "doubling audit needs at least one grid point".into(),
        ));
    }
    if grid_size > 1 && !(x_max >= 2.0 && x_max.is_finite()) {
        return Err(Error::Domain(format!(
            "x_max must be finite and >= 2, got {x_max}"
        )));
    }
    let log_max = x_max.ln();
    let mut audit = DoublingAudit {
        d_hat: f64::NEG_INFINITY,
        worst_x: 1.0,
    };
    for i in 0..grid_size {
        let x = if grid_size == 1 || i == 0 {
            1.0
        } else if i == grid_size - 1 {
            x_max
        } else {
            (log_max * i as f64 / (grid_size - 1) as f64).exp()
        };
        let ratio = weight.g_unchecked(2.0 * x) / weight.g_unchecked(x);
        if ratio > audit.d_hat {
            audit = DoublingAudit {
                d_hat: ratio,
                worst_x: x,
            };
        }
    }
    Ok(audit)
}

/// How a block sequence was obtained; enough to rebuild it exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum BlockSpec {
    /// `n[k+1] = min { l : g(l) >= A g(n[k]) }` starting from `n0`.
    Generated {
        weight: Weight,
        ratio_a: f64,
        n0: u64,
        k_max: usize,
        #[serde(default)]
        require_doubling_growth: bool,
    },
    /// Caller-supplied increasing indices.
    Explicit { weight: Weight, n: Vec<u64> },
}

impl BlockSpec {
    pub fn build(&self) -> Result<BlockSequence> {
        match self {
            BlockSpec::Generated {
                weight,
                ratio_a,
                n0,
                k_max,
                require_doubling_growth,
            } => block_sequence(weight, *ratio_a, *n0, *k_max, *require_doubling_growth),
            BlockSpec::Explicit { weight, n } => BlockSequence::explicit(weight.clone(), n.clone()),
        }
    }

    pub fn weight(&self) -> &Weight {
        match self {
            BlockSpec::Generated { weight, .. } | BlockSpec::Explicit { weight, .. } => weight,
        }
    }
}

/// Increasing block endpoints `n[0] < n[1] < ...` tied to a weight.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockSequence {
    spec: BlockSpec,
    n: Vec<u64>,
}

/// Default ceiling for block endpoints.
pub const DEFAULT_INDEX_BUDGET: u64 = u64::MAX;

/// Block sequence of the weight for ratio `a`, starting at `n0`, with `k_max + 1` entries.
pub fn block_sequence(
    weight: &Weight,
    a: f64,
    n0: u64,
    k_max: usize,
    require_doubling_growth: bool,
) -> Result<BlockSequence> {
    block_sequence_with_budget(
        weight,
        a,
        n0,
        k_max,
        require_doubling_growth,
        DEFAULT_INDEX_BUDGET,
    )
}

pub fn block_sequence_with_budget(
    weight: &Weight,
    a: f64,
    n0: u64,
    k_max: usize,
    require_doubling_growth: bool,
    budget: u64,
) -> Result<BlockSequence> {
    if !(a > 1.0 && a.is_finite()) {
        return Err(Error::Domain(format!(
            "block ratio A must exceed 1, got {a}"
        )));
    }
    if n0 == 0 {
        return Err(Error::Domain("n0 must be at least 1".into()));
    }
    if n0 > budget {
        return Err(Error::Overflow { k: 0, budget });
    }
    let mut n = Vec::with_capacity(k_max + 1);
    n.push(n0);
    for k in 1..=k_max {
        let prev = n[k - 1];
        let next = next_block_end(weight, a * weight.g_unchecked(prev as f64), prev, budget)
            .ok_or(Error::Overflow { k, budget })?;
        if require_doubling_growth && next < prev.saturating_mul(2) {
            return Err(Error::RatioTooSmall {
                k,
                got: next,
                need: prev.saturating_mul(2),
            });
        }
        n.push(next);
    }
    Ok(BlockSequence {
        spec: BlockSpec::Generated {
            weight: weight.clone(),
            ratio_a: a,
            n0,
            k_max,
            require_doubling_growth,
        },
        n,
    })
}

/// Smallest `l > lo` with `g(l) >= target`, assuming `g(lo) < target`.
fn next_block_end(weight: &Weight, target: f64, lo: u64, budget: u64) -> Option<u64> {
    let g = |l: u64| weight.g_unchecked(l as f64);
    let mut lo = lo;
    let mut step = 1u64;
    // gallop until the target is bracketed by (lo, hi]
    let mut hi = loop {
        let hi = lo.checked_add(step).map_or(budget, |h| h.min(budget));
        if hi <= lo {
            return None;
        }
        if g(hi) >= target {
            break hi;
        }
        if hi == budget {
            return None;
        }
        lo = hi;
        step = step.saturating_mul(2);
    };
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if g(mid) >= target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(hi)
}

impl BlockSequence {
    /// Wraps caller-supplied endpoints; they must be positive and strictly increasing.
    pub fn explicit(weight: Weight, n: Vec<u64>) -> Result<Self> {
        if n.is_empty() {
            return Err(Error::EmptyBlocks);
        }
        if n[0] == 0 {
            return Err(Error::Domain("block endpoints must be positive".into()));
        }
        if let Some(k) = (1..n.len()).find(|&k| n[k] <= n[k - 1]) {
            return Err(Error::Domain(format!(
                "block endpoints not increasing at k = {k}"
            )));
        }
        Ok(BlockSequence {
            spec: BlockSpec::Explicit {
                weight,
                n: n.clone(),
            },
            n,
        })
    }

    /// Dyadic endpoints `n_k = 2^k`, `k = 0..=k_max`.
    pub fn dyadic(weight: Weight, k_max: usize) -> Result<Self> {
        if k_max >= 64 {
            return Err(Error::Overflow {
                k: 64,
                budget: u64::MAX,
            });
        }
        Self::explicit(weight, (0..=k_max).map(|k| 1u64 << k).collect())
    }

    pub fn spec(&self) -> &BlockSpec {
        &self.spec
    }

    pub fn weight(&self) -> &Weight {
        self.spec.weight()
    }

    pub fn ratio_a(&self) -> Option<f64> {
        match self.spec {
            BlockSpec::Generated { ratio_a, .. } => Some(ratio_a),
            BlockSpec::Explicit { .. } => None,
        }
    }

    pub fn ends(&self) -> &[u64] {
        &self.n
    }

    pub fn len(&self) -> usize {
        self.n.len()
    }

    pub fn is_empty(&self) -> bool {
        self.n.is_empty()
    }

    /// Index of the last block, `k_max`.
    pub fn k_max(&self) -> usize {
        self.n.len() - 1
    }

    pub fn last(&self) -> u64 {
        self.n[self.n.len() - 1]
    }

    /// Index `k >= 1` with `n[k-1] < j <= n[k]`, if `j` lies in some block.
    pub fn block_of(&self, j: u64) -> Option<usize> {
        let k = self.n.partition_point(|&e| e < j);
        (k >= 1 && k < self.n.len()).then_some(k)
    }

    /// Degree range `(n[k-1], n[k]]` of block `k >= 1`, as inclusive bounds.
    pub fn block_range(&self, k: usize) -> std::ops::RangeInclusive<u64> {
        self.n[k - 1] + 1..=self.n[k]
    }

    pub fn g_at(&self, k: usize) -> f64 {
        self.weight().g_unchecked(self.n[k] as f64)
    }

    /// Writes the `k,n_k,g_nk` table.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["k", "n_k", "g_nk"])?;
        for (k, &nk) in self.n.iter().enumerate() {
            w.write_record([k.to_string(), nk.to_string(), self.g_at(k).to_string()])?;
        }
        w.flush().map_err(|e| Error::io("<csv>", e))?;
        Ok(())
    }
}
