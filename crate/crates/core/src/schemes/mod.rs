//! Deterministic coefficient sequences `j -> (a_j0, a_j1)` prior to randomization.
//!
//! A scheme is sparse: only nonzero degrees are stored, sorted by `j`. Each
//! scheme carries a [`Provenance`] from which it can be rebuilt bit-exactly.

mod csv_io;
mod grs;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::random::SeedSpec;
use crate::weight::{block_sequence, clamped_ln, BlockSequence, BlockSpec, Weight};

pub use grs::{grs_sign, grs_signs};

/// Largest degree a scheme may reach.
pub const MAX_SCHEME_DEGREE: u64 = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Coefficient {
    pub j: u64,
    /// Coefficient of `r^j cos(j theta)`.
    pub cos: f64,
    /// Coefficient of `r^j sin(j theta)`.
    pub sin: f64,
}

impl Coefficient {
    /// `|a_j| = sqrt(a_j0^2 + a_j1^2)`.
    pub fn magnitude(&self) -> f64 {
        self.cos.hypot(self.sin)
    }

    pub fn magnitude_sq(&self) -> f64 {
        self.cos * self.cos + self.sin * self.sin
    }
}

/// Positive non-decreasing sequence indexed from 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NuSequence {
    Constant {
        c: f64,
    },
    /// `ln(k + 2)`.
    Log,
    /// `sqrt(k + 1)`.
    Sqrt,
}

impl NuSequence {
    pub fn at(&self, k: u64) -> f64 {
        match *self {
            NuSequence::Constant { c } => c,
            NuSequence::Log => ((k + 2) as f64).ln(),
            NuSequence::Sqrt => ((k + 1) as f64).sqrt(),
        }
    }

    /// Value attached to block `k >= 1`; blocks count from the first nonempty one.
    pub fn for_block(&self, k: usize) -> f64 {
        self.at(k as u64 - 1)
    }

    fn validate(&self) -> Result<()> {
        if let NuSequence::Constant { c } = *self {
            if !(c > 0.0 && c.is_finite()) {
                return Err(Error::Domain(format!(
                    "nu constant must be positive, got {c}"
                )));
            }
        }
        Ok(())
    }
}

impl std::str::FromStr for NuSequence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "log" => Ok(NuSequence::Log),
            "sqrt" => Ok(NuSequence::Sqrt),
            other => {
                let c = other
                    .strip_prefix("const:")
                    .unwrap_or(other)
                    .parse::<f64>()
                    .map_err(|_| {
                        Error::InvalidArgument(format!("unknown nu sequence `{other}`"))
                    })?;
                let nu = NuSequence::Constant { c };
                nu.validate()?;
                Ok(nu)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Prop22Variant {
    /// `g(n_k) / n_k`.
    I,
    /// `g(n_k) / sqrt(n_k L(n_k))`.
    II,
    /// `g(n_k) / sqrt(n_k)`.
    III,
}

impl Prop22Variant {
    pub fn magnitude(&self, g: f64, n: u64) -> f64 {
        let n = n as f64;
        match self {
            Prop22Variant::I => g / n,
            Prop22Variant::II => g / (n * clamped_ln(n)).sqrt(),
            Prop22Variant::III => g / n.sqrt(),
        }
    }
}

/// Recipe that regenerates a scheme.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "scheme", rename_all = "snake_case")]
pub enum Provenance {
    /// Block-constant magnitudes at the extremal bound of one of three block conditions.
    Prop22 {
        blocks: BlockSpec,
        variant: Prop22Variant,
        #[serde(default)]
        both_components: bool,
    },
    /// `a_j = 1 / sqrt(n_k)` on blocks `n_k = 2^(2^k)`.
    Remark32 { k_max: usize },
    /// `nu_k g(n_k) / L(n_k)` at the lacunary degrees `n_(k-1) + 4^m`.
    RieszLacunary {
        weight: Weight,
        ratio_a: f64,
        nu: NuSequence,
        k_max: usize,
    },
    /// `nu_k g(n_k) / sqrt(n_k L(n_k))` on full blocks, zero for `j <= 2`.
    Saturating {
        weight: Weight,
        ratio_a: f64,
        nu: NuSequence,
        k_max: usize,
    },
    /// Scaled Rudin-Shapiro segments `g(n_k) eps_i / sqrt(n_k - n_(k-1))`.
    RudinShapiro { blocks: BlockSpec },
    /// `a_(n_k) = g(n_k)`.
    HadamardLacunary { blocks: BlockSpec },
    /// `a_j = eps_j` for `0 <= j < m`.
    GrsPolynomial { m: usize },
    /// `a_j = value` for `1 <= j <= max_degree`.
    Constant { value: f64, max_degree: u64 },
    /// `a_j = g(j)` for `1 <= j <= max_degree`.
    WeightProfile { weight: Weight, max_degree: u64 },
    /// Independent uniform `[-1, 1]` coefficients for `0 <= j <= max_degree`.
    RandomUniform {
        seed: u64,
        max_degree: u64,
        #[serde(default)]
        both_components: bool,
    },
    /// Supplied from outside; cannot be rebuilt.
    Custom { label: String },
}

impl Provenance {
    pub fn name(&self) -> &'static str {
        match self {
            Provenance::Prop22 { .. } => "prop22",
            Provenance::Remark32 { .. } => "remark32",
            Provenance::RieszLacunary { .. } => "riesz_lacunary",
            Provenance::Saturating { .. } => "saturating",
            Provenance::RudinShapiro { .. } => "rudin_shapiro",
            Provenance::HadamardLacunary { .. } => "hadamard_lacunary",
            Provenance::GrsPolynomial { .. } => "grs_polynomial",
            Provenance::Constant { .. } => "constant",
            Provenance::WeightProfile { .. } => "weight_profile",
            Provenance::RandomUniform { .. } => "random_uniform",
            Provenance::Custom { .. } => "custom",
        }
    }

    /// Rebuilds the scheme this provenance describes.
    pub fn build(&self) -> Result<CoefficientScheme> {
        match self {
            Provenance::Prop22 {
                blocks,
                variant,
                both_components,
            } => prop22_scheme_with(&blocks.build()?, *variant, *both_components),
            Provenance::Remark32 { k_max } => remark32_scheme(*k_max),
            Provenance::RieszLacunary {
                weight,
                ratio_a,
                nu,
                k_max,
            } => riesz_lacunary_scheme(weight, *ratio_a, *nu, *k_max),
            Provenance::Saturating {
                weight,
                ratio_a,
                nu,
                k_max,
            } => saturating_scheme(weight, *ratio_a, *nu, *k_max),
            Provenance::RudinShapiro { blocks } => rudin_shapiro_scheme(&blocks.build()?),
            Provenance::HadamardLacunary { blocks } => hadamard_lacunary_scheme(&blocks.build()?),
            Provenance::GrsPolynomial { m } => grs_polynomial_scheme(*m),
            Provenance::Constant { value, max_degree } => constant_scheme(*value, *max_degree),
            Provenance::WeightProfile { weight, max_degree } => {
                weight_profile_scheme(weight, *max_degree)
            }
            Provenance::RandomUniform {
                seed,
                max_degree,
                both_components,
            } => random_uniform_scheme(*seed, *max_degree, *both_components),
            Provenance::Custom { label } => Err(Error::NotRegenerable(label.clone())),
        }
    }

    /// Block sequence underlying the construction, if it has one.
    pub fn blocks(&self) -> Result<Option<BlockSequence>> {
        Ok(Some(match self {
            Provenance::Prop22 { blocks, .. }
            | Provenance::RudinShapiro { blocks }
            | Provenance::HadamardLacunary { blocks } => blocks.build()?,
            Provenance::Remark32 { k_max } => remark32_blocks(*k_max)?,
            Provenance::RieszLacunary {
                weight,
                ratio_a,
                k_max,
                ..
            } => block_sequence(weight, *ratio_a, 2, *k_max, false)?,
            Provenance::Saturating {
                weight,
                ratio_a,
                k_max,
                ..
            } => block_sequence(weight, *ratio_a, 1, *k_max, false)?,
            _ => return Ok(None),
        }))
    }
}

/// Sparse coefficients with their provenance and, when defined, their block sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientScheme {
    provenance: Provenance,
    max_degree: u64,
    entries: Vec<Coefficient>,
    blocks: Option<BlockSequence>,
}

impl CoefficientScheme {
    /// Builds a scheme from arbitrary entries; zero entries are dropped, duplicates rejected.
    pub fn from_entries(
        provenance: Provenance,
        max_degree: u64,
        mut entries: Vec<Coefficient>,
        blocks: Option<BlockSequence>,
    ) -> Result<Self> {
        entries.retain(|c| c.cos != 0.0 || c.sin != 0.0);
        entries.sort_by_key(|c| c.j);
        if let Some(w) = entries.windows(2).find(|w| w[0].j == w[1].j) {
            return Err(Error::Domain(format!("duplicate degree {}", w[0].j)));
        }
        if entries
            .iter()
            .any(|c| !(c.cos.is_finite() && c.sin.is_finite()))
        {
            return Err(Error::Domain("non-finite coefficient".into()));
        }
        let top = entries.last().map_or(0, |c| c.j);
        if top > max_degree {
            return Err(Error::Domain(format!(
                "entry at degree {top} beyond max degree {max_degree}"
            )));
        }
        Ok(CoefficientScheme {
            provenance,
            max_degree,
            entries,
            blocks,
        })
    }

    /// Cosine-only scheme from a dense vector `a[j]`.
    pub fn from_dense(label: &str, a: &[f64]) -> Result<Self> {
        let entries = a
            .iter()
            .enumerate()
            .map(|(j, &cos)| Coefficient {
                j: j as u64,
                cos,
                sin: 0.0,
            })
            .collect();
        Self::from_entries(
            Provenance::Custom {
                label: label.into(),
            },
            a.len().saturating_sub(1) as u64,
            entries,
            None,
        )
    }

    pub fn zero(max_degree: u64) -> Self {
        CoefficientScheme {
            provenance: Provenance::Custom {
                label: "zero".into(),
            },
            max_degree,
            entries: Vec::new(),
            blocks: None,
        }
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn max_degree(&self) -> u64 {
        self.max_degree
    }

    /// Highest degree carrying a nonzero coefficient.
    pub fn degree(&self) -> u64 {
        self.entries.last().map_or(0, |c| c.j)
    }

    pub fn entries(&self) -> &[Coefficient] {
        &self.entries
    }

    pub fn support_size(&self) -> usize {
        self.entries.len()
    }

    pub fn blocks(&self) -> Option<&BlockSequence> {
        self.blocks.as_ref()
    }

    pub fn get(&self, j: u64) -> Option<&Coefficient> {
        self.entries
            .binary_search_by_key(&j, |c| c.j)
            .ok()
            .map(|i| &self.entries[i])
    }

    /// `|a_j|`, zero off the support.
    pub fn magnitude(&self, j: u64) -> f64 {
        self.get(j).map_or(0.0, Coefficient::magnitude)
    }

    /// Rebuilds from the provenance; equal to `self` for every builtin construction.
    pub fn regenerate(&self) -> Result<CoefficientScheme> {
        self.provenance.build()
    }

    /// Entries with `j` in the inclusive range.
    pub fn range(&self, lo: u64, hi: u64) -> &[Coefficient] {
        let a = self.entries.partition_point(|c| c.j < lo);
        let b = self.entries.partition_point(|c| c.j <= hi);
        &self.entries[a..b.max(a)]
    }
}

fn check_degree(n: u64) -> Result<()> {
    if n > MAX_SCHEME_DEGREE {
        return Err(Error::DegreeBudget(format!(
            "degree {n} exceeds the budget {MAX_SCHEME_DEGREE}"
        )));
    }
    Ok(())
}

fn require_growth(blocks: &BlockSequence, factor: u64) -> Result<()> {
    let n = blocks.ends();
    for k in 1..n.len() {
        let need = n[k - 1].saturating_mul(factor);
        if n[k] < need {
            return Err(Error::RatioTooSmall { k, got: n[k], need });
        }
    }
    Ok(())
}

/// Fills every block `k >= 1` with the value `f(k)` in the cosine component,
/// or split evenly over both components.
fn block_constant(
    provenance: Provenance,
    blocks: &BlockSequence,
    min_j: u64,
    both: bool,
    f: impl Fn(usize) -> f64,
) -> Result<CoefficientScheme> {
    check_degree(blocks.last())?;
    let mut entries = Vec::new();
    for k in 1..blocks.len() {
        let value = f(k);
        let (cos, sin) = if both {
            (value / 2f64.sqrt(), value / 2f64.sqrt())
        } else {
            (value, 0.0)
        };
        for j in blocks.block_range(k) {
            if j >= min_j {
                entries.push(Coefficient { j, cos, sin });
            }
        }
    }
    CoefficientScheme::from_entries(provenance, blocks.last(), entries, Some(blocks.clone()))
}

/// Block-constant scheme at the bound of one of the three block conditions, cosine only.
pub fn prop22_scheme(blocks: &BlockSequence, variant: Prop22Variant) -> Result<CoefficientScheme> {
    prop22_scheme_with(blocks, variant, false)
}

/// As [`prop22_scheme`]; with `both_components` each component carries `1/sqrt 2`
/// of the magnitude so that `|a_j|` is unchanged.
pub fn prop22_scheme_with(
    blocks: &BlockSequence,
    variant: Prop22Variant,
    both_components: bool,
) -> Result<CoefficientScheme> {
    if blocks.is_empty() {
        return Err(Error::EmptyBlocks);
    }
    let provenance = Provenance::Prop22 {
        blocks: blocks.spec().clone(),
        variant,
        both_components,
    };
    block_constant(provenance, blocks, 0, both_components, |k| {
        variant.magnitude(blocks.g_at(k), blocks.ends()[k])
    })
}

/// Blocks `n_k = 2^(2^k)` from the base-2 logarithm weight, `k = 0..=k_max`.
pub fn remark32_blocks(k_max: usize) -> Result<BlockSequence> {
    if k_max > 4 {
        return Err(Error::DegreeBudget(format!(
            "k_max = {k_max} would need degree 2^(2^{k_max})"
        )));
    }
    block_sequence(&Weight::log_power_base2(1.0)?, 2.0, 2, k_max, false)
}

/// `a_j = 1 / sqrt(n_k)` for `n_(k-1) < j <= n_k` with `n_k = 2^(2^k)`.
pub fn remark32_scheme(k_max: usize) -> Result<CoefficientScheme> {
    let blocks = remark32_blocks(k_max)?;
    let n = blocks.ends().to_vec();
    block_constant(Provenance::Remark32 { k_max }, &blocks, 0, false, |k| {
        1.0 / (n[k] as f64).sqrt()
    })
}

/// Lacunary scheme supported on `j = n_(k-1) + 4^m` with `2 * 4^m <= n_k`, blocks from `n0 = 2`.
pub fn riesz_lacunary_scheme(
    weight: &Weight,
    ratio_a: f64,
    nu: NuSequence,
    k_max: usize,
) -> Result<CoefficientScheme> {
    nu.validate()?;
    let blocks = block_sequence(weight, ratio_a, 2, k_max, false)?;
    require_growth(&blocks, 4)?;
    check_degree(blocks.last())?;
    let n = blocks.ends();
    let mut entries = Vec::new();
    for k in 1..blocks.len() {
        let value = nu.for_block(k) * blocks.g_at(k) / clamped_ln(n[k] as f64);
        let mut step = 1u64;
        while step.saturating_mul(2) <= n[k] {
            entries.push(Coefficient {
                j: n[k - 1] + step,
                cos: value,
                sin: 0.0,
            });
            step *= 4;
        }
    }
    let provenance = Provenance::RieszLacunary {
        weight: weight.clone(),
        ratio_a,
        nu,
        k_max,
    };
    CoefficientScheme::from_entries(provenance, blocks.last(), entries, Some(blocks))
}

/// `a_j = nu_k g(n_k) / sqrt(n_k L(n_k))` on full blocks from `n0 = 1`, zero for `j <= 2`.
pub fn saturating_scheme(
    weight: &Weight,
    ratio_a: f64,
    nu: NuSequence,
    k_max: usize,
) -> Result<CoefficientScheme> {
    nu.validate()?;
    let blocks = block_sequence(weight, ratio_a, 1, k_max, false)?;
    let provenance = Provenance::Saturating {
        weight: weight.clone(),
        ratio_a,
        nu,
        k_max,
    };
    let n = blocks.ends().to_vec();
    let g: Vec<f64> = (0..blocks.len()).map(|k| blocks.g_at(k)).collect();
    block_constant(provenance, &blocks, 3, false, |k| {
        nu.for_block(k) * Prop22Variant::II.magnitude(g[k], n[k])
    })
}

/// Block `k` carries `g(n_k) eps_(i-1) / sqrt(n_k - n_(k-1))` at degree `n_(k-1) + i`.
pub fn rudin_shapiro_scheme(blocks: &BlockSequence) -> Result<CoefficientScheme> {
    if blocks.is_empty() {
        return Err(Error::EmptyBlocks);
    }
    require_growth(blocks, 2)?;
    check_degree(blocks.last())?;
    let n = blocks.ends();
    let mut entries = Vec::new();
    for k in 1..blocks.len() {
        let len = n[k] - n[k - 1];
        let scale = blocks.g_at(k) / (len as f64).sqrt();
        for i in 1..=len {
            entries.push(Coefficient {
                j: n[k - 1] + i,
                cos: scale * grs_sign(i - 1),
                sin: 0.0,
            });
        }
    }
    let provenance = Provenance::RudinShapiro {
        blocks: blocks.spec().clone(),
    };
    CoefficientScheme::from_entries(provenance, blocks.last(), entries, Some(blocks.clone()))
}

/// `a_(n_k) = g(n_k)` for every block endpoint including `n_0`.
pub fn hadamard_lacunary_scheme(blocks: &BlockSequence) -> Result<CoefficientScheme> {
    if blocks.is_empty() {
        return Err(Error::EmptyBlocks);
    }
    check_degree(blocks.last())?;
    let entries = (0..blocks.len())
        .map(|k| Coefficient {
            j: blocks.ends()[k],
            cos: blocks.g_at(k),
            sin: 0.0,
        })
        .collect();
    let provenance = Provenance::HadamardLacunary {
        blocks: blocks.spec().clone(),
    };
    CoefficientScheme::from_entries(provenance, blocks.last(), entries, Some(blocks.clone()))
}

/// Polynomial `sum_(j<m) eps_j z^j`.
pub fn grs_polynomial_scheme(m: usize) -> Result<CoefficientScheme> {
    if m == 0 {
        return Err(Error::Domain("GRS polynomial needs m >= 1".into()));
    }
    check_degree(m as u64)?;
    let entries = grs_signs(m)
        .into_iter()
        .enumerate()
        .map(|(j, s)| Coefficient {
            j: j as u64,
            cos: s,
            sin: 0.0,
        })
        .collect();
    CoefficientScheme::from_entries(Provenance::GrsPolynomial { m }, m as u64 - 1, entries, None)
}

pub fn constant_scheme(value: f64, max_degree: u64) -> Result<CoefficientScheme> {
    check_degree(max_degree)?;
    let entries = (1..=max_degree)
        .map(|j| Coefficient {
            j,
            cos: value,
            sin: 0.0,
        })
        .collect();
    CoefficientScheme::from_entries(
        Provenance::Constant { value, max_degree },
        max_degree,
        entries,
        None,
    )
}

/// `a_j = g(j)`, the largest coefficients any growth condition could allow.
pub fn weight_profile_scheme(weight: &Weight, max_degree: u64) -> Result<CoefficientScheme> {
    check_degree(max_degree)?;
    let entries = (1..=max_degree)
        .map(|j| Coefficient {
            j,
            cos: weight.g_unchecked(j as f64),
            sin: 0.0,
        })
        .collect();
    let provenance = Provenance::WeightProfile {
        weight: weight.clone(),
        max_degree,
    };
    CoefficientScheme::from_entries(provenance, max_degree, entries, None)
}

/// Uniform `[-1, 1]` coefficients, reproducible from `seed`.
pub fn random_uniform_scheme(
    seed: u64,
    max_degree: u64,
    both_components: bool,
) -> Result<CoefficientScheme> {
    check_degree(max_degree)?;
    let mut rng = SeedSpec::new(seed).rng(0);
    let entries = (0..=max_degree)
        .map(|j| {
            let cos = rng.random_range(-1.0..=1.0);
            let sin = if both_components {
                rng.random_range(-1.0..=1.0)
            } else {
                0.0
            };
            Coefficient { j, cos, sin }
        })
        .collect();
    let provenance = Provenance::RandomUniform {
        seed,
        max_degree,
        both_components,
    };
    CoefficientScheme::from_entries(provenance, max_degree, entries, None)
}
