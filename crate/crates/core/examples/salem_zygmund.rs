// Lower tail of `max |h_N| / sqrt(R log n_N)` for one block of a saturating scheme.

use growthlab::mc::salem_zygmund_probe;
use growthlab::random::{RandomModel, SeedSpec};
use growthlab::schemes::{saturating_scheme, NuSequence};
use growthlab::weight::Weight;

pub fn run_example() -> growthlab::Result<Vec<f64>> {
    let scheme = saturating_scheme(&Weight::power(1.0)?, 2.0, NuSequence::Sqrt, 10)?;
    let report = salem_zygmund_probe(
        &scheme,
        &RandomModel::Rademacher,
        &SeedSpec::new(5),
        100,
        &[6, 8, 10],
        &[0.5, 0.8],
        16.0,
    )?;
    for r in &report.rows {
        println!(
            "N = {:>2}: q05 {:.3}, median {:.3}, T4 n/R^2 {:.3}, below 0.8: {:.2}",
            r.block, r.q05, r.median, r.c_implied, r.below[1].1
        );
    }
    Ok(report.rows.iter().map(|r| r.q05).collect())
}

#[allow(dead_code)]
fn main() -> growthlab::Result<()> {
    run_example().map(|_| ())
}
