// Sup-normalized spherical harmonics, certified sphere brackets and cap measures.

use growthlab::random::SeedSpec;
use growthlab::sphere::{
    cap_fraction, cap_stability_check, sup_bracket_sphere, CapStability, Covering, SphereScheme,
    SphereSeries, SphericalBasis,
};

pub fn run_example() -> growthlab::Result<CapStability> {
    let basis = SphericalBasis::build(8)?;
    let (lo, hi) = basis.normalized_sup_bracket(5, 3);
    println!("normalized sup of Y_(5,3) in [{lo:.5}, {hi}]");
    println!(
        "laplacian residual at (0.3, -0.2, 0.4): {:.1e}",
        basis.laplacian_residual([0.3, -0.2, 0.4])
    );

    let y3 = SphereSeries::from_scheme(&SphereScheme::single(1, 0))?;
    let covering = Covering::for_degree(1);
    let values = y3.evaluate_points(&basis, &covering)?;
    let b = sup_bracket_sphere(&values, 1, &covering)?;
    let cap = cap_fraction(&values, 1, 0.5)?;
    println!(
        "y3: sup in [{:.4}, {:.4}], cap fraction {:.4} on {} points",
        b.lower, b.upper, cap.fraction, cap.grid_k
    );

    let stability = cap_stability_check(&[2, 4, 8], 20, 0.5, 2.0, &SeedSpec::new(9))?;
    for r in &stability.rows {
        println!(
            "n = {:>2}: K = {:>6}, min fraction {:.4}, c_min {:.3}",
            r.degree, r.grid_k, r.min_fraction, r.c_min
        );
    }
    Ok(stability)
}

#[allow(dead_code)]
fn main() -> growthlab::Result<()> {
    run_example().map(|_| ())
}
