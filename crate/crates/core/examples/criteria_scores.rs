// Coefficient criteria for `a_j = 1/sqrt(n_k)` on `n_k = 2^(2^k)`: the cumulative
// square sum needs `sqrt(log x log log x)`, the block sum only `sqrt(log x)`.

use growthlab::criteria::{score_block_sum, score_sup_ratio, BlockOptions, SupRatioKind};
use growthlab::schemes::remark32_scheme;
use growthlab::weight::Weight;

pub fn run_example() -> growthlab::Result<(f64, f64)> {
    let scheme = remark32_scheme(4)?;
    let blocks = scheme.blocks().expect("blocks");
    let sqrt_log = Weight::log_power(0.5)?;
    let sqrt_log_loglog = Weight::log_log_power(0.5)?;

    let cumulative = score_sup_ratio(SupRatioKind::L2Log, &scheme, &sqrt_log, scheme.degree())?;
    println!(
        "L2_LOG vs sqrt(log x): trend {:.3}",
        cumulative.trend.unwrap_or(0.0)
    );
    let cumulative_ll = score_sup_ratio(
        SupRatioKind::L2Log,
        &scheme,
        &sqrt_log_loglog,
        scheme.degree(),
    )?;
    println!(
        "L2_LOG vs sqrt(log x log log x): score {:.3}",
        cumulative_ll.score
    );

    let block = score_block_sum(&scheme, blocks, &sqrt_log, BlockOptions::default())?;
    for c in &block.checkpoints {
        println!("  n_k = {:>6}: block-sum ratio {:.4}", c.n, c.ratio);
    }
    Ok((cumulative.trend.unwrap_or(0.0), block.score))
}

#[allow(dead_code)]
fn main() -> growthlab::Result<()> {
    run_example().map(|_| ())
}
