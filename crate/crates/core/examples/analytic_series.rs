// Analytic series `sum a_m xi_m z^m` with Steinhaus phases: modulus brackets and growth.

use growthlab::disk::{growth_profile, randomize, Flavor};
use growthlab::random::{RandomModel, SeedSpec};
use growthlab::schemes::{saturating_scheme, NuSequence};
use growthlab::weight::Weight;

pub fn run_example() -> growthlab::Result<Vec<f64>> {
    let g = Weight::power(1.0)?;
    let scheme = saturating_scheme(&g, 2.0, NuSequence::Constant { c: 1.0 }, 10)?;
    let blocks = scheme.blocks().expect("blocks");
    let radii: Vec<f64> = blocks.ends()[2..]
        .iter()
        .map(|&n| 1.0 - 1.0 / n as f64)
        .collect();
    let series = randomize(
        &scheme,
        &RandomModel::Steinhaus,
        &SeedSpec::new(12),
        0,
        Flavor::AnalyticComplex,
    )?;
    let rows = growth_profile(&series, &radii, &g, 16.0, true)?;
    for row in &rows {
        println!(
            "r = {:.5}: sup |f| in [{:.3}, {:.3}], / g = {:.4}",
            row.r, row.lower, row.upper, row.ratio_lower
        );
    }
    Ok(rows.iter().map(|r| r.ratio_lower).collect())
}

#[allow(dead_code)]
fn main() -> growthlab::Result<()> {
    run_example().map(|_| ())
}
