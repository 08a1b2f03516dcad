// Blocks saturated at `nu_k g(n_k) / sqrt(n_k log n_k)`: the blockwise score grows
// like `nu_k` and the random series grows like `nu_N g(n_N)`.

use growthlab::criteria::{score_blockwise, BlockOptions};
use growthlab::disk::Flavor;
use growthlab::mc::{run_growth_ensemble, ExperimentConfig, RadiiRule, DEFAULT_MAX_WORK};
use growthlab::random::RandomModel;
use growthlab::schemes::{saturating_scheme, NuSequence};
use growthlab::weight::Weight;

pub fn run_example() -> growthlab::Result<Vec<f64>> {
    let g = Weight::power(1.0)?;
    let nu = NuSequence::Sqrt;
    let scheme = saturating_scheme(&g, 2.0, nu, 8)?;
    let blocks = scheme.blocks().expect("blocks").clone();

    let score = score_blockwise(&scheme, &blocks, &g, BlockOptions::default())?;
    for (k, c) in score.checkpoints.iter().enumerate() {
        println!(
            "block {:>2}: ratio {:.4}, nu_k {:.4}",
            k + 1,
            c.ratio,
            nu.for_block(k + 1)
        );
    }

    let config = ExperimentConfig {
        scheme: scheme.provenance().clone(),
        model: RandomModel::Rademacher,
        seed: 8,
        trials: 40,
        radii: RadiiRule::BlockRadii {
            indices: vec![4, 6, 8],
        },
        oversample: 16.0,
        refine: true,
        candidates: vec![],
        flavor: Flavor::RealHarmonic,
        max_work: DEFAULT_MAX_WORK,
    };
    let report = run_growth_ensemble(&config)?;
    let normalized: Vec<f64> = report
        .radii
        .iter()
        .map(|s| {
            let k = s.block.expect("block radius");
            s.lower.median / (nu.for_block(k) * blocks.ends()[k] as f64)
        })
        .collect();
    println!("median sup / (nu_N n_N): {normalized:.3?}");
    Ok(normalized)
}

#[allow(dead_code)]
fn main() -> growthlab::Result<()> {
    run_example().map(|_| ())
}
