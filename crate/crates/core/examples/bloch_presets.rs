// Bloch-type weights `w(r) = (1 - r)^alpha`: blockwise targets `2^(alpha k) / sqrt(k ln 2)`
// and the weighted gradient profile of `Re z`.

use growthlab::criteria::{score_blockwise, BlockOptions};
use growthlab::disk::{bloch_profile, RandomizedSeries};
use growthlab::schemes::rudin_shapiro_scheme;
use growthlab::weight::{BlockSequence, Weight};

pub fn run_example() -> growthlab::Result<(Vec<f64>, f64)> {
    let alpha = 0.5;
    let w = Weight::bloch_power(alpha)?;
    let blocks = BlockSequence::dyadic(Weight::power(1.0)?, 10)?;
    let scheme = rudin_shapiro_scheme(&blocks)?;
    let opts = BlockOptions {
        m_weighted: true,
        bloch_w: Some(&w),
    };
    let score = score_blockwise(&scheme, &blocks, blocks.weight(), opts)?;
    let targets: Vec<f64> = score
        .checkpoints
        .iter()
        .map(|c| c.target.unwrap_or(0.0))
        .collect();
    for (k, t) in targets.iter().enumerate() {
        println!("k = {:>2}: target {t:.4}", k + 1);
    }

    let u = RandomizedSeries::from_trig([(1, 1.0, 0.0)])?;
    let radii = [0.0, 0.5, 0.9, 0.99];
    let profile = bloch_profile(&u, &radii, &w, 16.0, true)?;
    for row in &profile.rows {
        println!(
            "r = {:.2}: w(r) sup|grad u| in [{:.4}, {:.4}]",
            row.r, row.weighted_lower, row.weighted_upper
        );
    }
    println!(
        "Bloch norm of Re z in [{:.4}, {:.4}]",
        profile.norm_lower, profile.norm_upper
    );
    Ok((targets, profile.norm_upper))
}

#[allow(dead_code)]
fn main() -> growthlab::Result<()> {
    run_example().map(|_| ())
}
