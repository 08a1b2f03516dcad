// Necessary conditions: block liminf of normalized coefficients and the census `N(n)/n`.

use growthlab::census::{coefficient_census, liminf_profile};
use growthlab::schemes::{hadamard_lacunary_scheme, rudin_shapiro_scheme, NuSequence};
use growthlab::weight::{BlockSequence, Weight};

pub fn run_example() -> growthlab::Result<(f64, f64, f64)> {
    let g = Weight::power(1.0)?;
    let blocks = BlockSequence::dyadic(g.clone(), 14)?;
    let rs = rudin_shapiro_scheme(&blocks)?;
    let lacunary = hadamard_lacunary_scheme(&blocks)?;

    let rs_profile = liminf_profile(&rs, &blocks, &g, None)?;
    let hd_profile = liminf_profile(&lacunary, &blocks, &g, None)?;
    println!(
        "liminf proxy: rudin_shapiro {:.4}, hadamard {:.4}",
        rs_profile.proxy, hd_profile.proxy
    );

    let census = coefficient_census(&rs, &g, NuSequence::Log, 1 << 14, None)?;
    for row in census.rows.iter().step_by(3) {
        println!("n = {:>6}: N(n)/n = {:.4}", row.n, row.fraction);
    }
    let last = census.rows.last().expect("rows").fraction;
    Ok((last, rs_profile.proxy, hd_profile.proxy))
}

#[allow(dead_code)]
fn main() -> growthlab::Result<()> {
    run_example().map(|_| ())
}
