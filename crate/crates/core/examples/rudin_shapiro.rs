// Golay-Rudin-Shapiro polynomials stay below `sqrt(2m)` on the circle.

use growthlab::disk::{Flavor, RandomizedSeries};
use growthlab::schemes::grs_polynomial_scheme;

pub fn run_example() -> growthlab::Result<Vec<(usize, f64)>> {
    let mut rows = Vec::new();
    for e in 2..=12 {
        let m = 1usize << e;
        let p = RandomizedSeries::unrandomized(&grs_polynomial_scheme(m)?, Flavor::RealHarmonic);
        let b = p.sup_bracket(1.0, 16.0, true)?;
        let ratio = b.upper / (m as f64).sqrt();
        println!(
            "m = {m:>5}: sup in [{:.3}, {:.3}], upper/sqrt(m) = {ratio:.4}",
            b.lower, b.upper
        );
        rows.push((m, ratio));
    }
    Ok(rows)
}

#[allow(dead_code)]
fn main() -> growthlab::Result<()> {
    run_example().map(|_| ())
}
