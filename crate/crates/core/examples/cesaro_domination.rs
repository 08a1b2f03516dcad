// Fejer means never exceed the function: `sup |sigma_n u_r| <= sup |u_r|`.

use growthlab::criteria::{operator_norm_profile, OperatorKind};
use growthlab::disk::{Flavor, RandomizedSeries};
use growthlab::mc::cesaro_domination_check;
use growthlab::random::SeedSpec;
use growthlab::schemes::hadamard_lacunary_scheme;
use growthlab::weight::{BlockSequence, Weight};

pub fn run_example() -> growthlab::Result<usize> {
    let check = cesaro_domination_check(20, 200, &[0.5, 0.9], &[10, 100], &SeedSpec::new(4), 16.0)?;
    println!(
        "{} cases, {} violations, worst margin {:.4}",
        check.cases, check.violations, check.worst_margin
    );

    let g = Weight::power(1.0)?;
    let lacunary = hadamard_lacunary_scheme(&BlockSequence::dyadic(g.clone(), 10)?)?;
    let u = RandomizedSeries::unrandomized(&lacunary, Flavor::RealHarmonic);
    let ns: Vec<u64> = (1..=10).map(|k| 1u64 << k).collect();
    for row in operator_norm_profile(&u, &ns, OperatorKind::Cesaro, &g, 16.0, true)? {
        println!(
            "n = {:>5}: ||sigma_n u|| / n in [{:.4}, {:.4}]",
            row.n, row.ratio_lower, row.ratio_upper
        );
    }
    Ok(check.violations)
}

#[allow(dead_code)]
fn main() -> growthlab::Result<()> {
    run_example().map(|_| ())
}
