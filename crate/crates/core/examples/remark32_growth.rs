// Monte Carlo growth of `sum a_j xi_j r^j cos(j theta)` with `a_j = 1/sqrt(n_k)`,
// normalized by two candidate growth functions at `r_N = 1 - 1/n_N`.

use growthlab::disk::Flavor;
use growthlab::mc::{
    fit_growth, run_growth_ensemble, Candidate, ExperimentConfig, RadiiRule, DEFAULT_MAX_WORK,
};
use growthlab::random::RandomModel;
use growthlab::schemes::Provenance;
use growthlab::weight::Weight;

pub fn run_example() -> growthlab::Result<Vec<f64>> {
    let candidates = vec![
        Candidate::new("sqrt_log", Weight::log_power(0.5)?),
        Candidate::new("sqrt_log_loglog", Weight::log_log_power(0.5)?),
    ];
    let config = ExperimentConfig {
        scheme: Provenance::Remark32 { k_max: 3 },
        model: RandomModel::Rademacher,
        seed: 3,
        trials: 40,
        radii: RadiiRule::BlockRadii {
            indices: vec![1, 2, 3],
        },
        oversample: 8.0,
        refine: false,
        candidates: candidates.clone(),
        flavor: Flavor::RealHarmonic,
        max_work: DEFAULT_MAX_WORK,
    };
    let report = run_growth_ensemble(&config)?;
    for s in &report.radii {
        println!(
            "r = {:.6}: sup median {:.3} (q10 {:.3}, q90 {:.3})",
            s.r, s.lower.median, s.lower.q10, s.lower.q90
        );
    }
    for fit in fit_growth(&report, &candidates)? {
        println!(
            "{:>16}: slope {:+.3}, ratios {:.3?}",
            fit.name, fit.slope, fit.ratios
        );
    }
    Ok(report.radii.iter().map(|s| s.lower.median).collect())
}

#[allow(dead_code)]
fn main() -> growthlab::Result<()> {
    run_example().map(|_| ())
}
