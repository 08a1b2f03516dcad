// Empirical check of `E exp(lambda xi) <= exp(lambda^2 / 2)` for the sampler families.

use growthlab::random::{mgf_audit, RandomModel, SeedSpec};

pub fn run_example() -> growthlab::Result<f64> {
    let lambdas: Vec<f64> = (-4..=4).map(f64::from).collect();
    let seed = SeedSpec::new(11);
    let mut worst = f64::NEG_INFINITY;
    for model in RandomModel::SUBNORMAL {
        let audit = mgf_audit(&model, &lambdas, 200_000, &seed.derive(model.name()))?;
        println!(
            "{:>16}: worst ratio {:.5}, worst z {:+.2}",
            model.name(),
            audit.worst_ratio,
            audit.worst_z()
        );
        worst = worst.max(audit.worst_z());
    }
    Ok(worst)
}

#[allow(dead_code)]
fn main() -> growthlab::Result<()> {
    run_example().map(|_| ())
}
