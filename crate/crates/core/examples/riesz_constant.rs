// Certified `sup |sum c_j cos((N + 4^j) theta)| / sum |c_j|` over sign patterns.

use growthlab::mc::riesz_sign_sweep;

pub fn run_example() -> growthlab::Result<Vec<f64>> {
    let sweep = riesz_sign_sweep(&[1, 2, 3, 4, 5], &[0, 1, 10, 100], 16.0)?;
    for s in &sweep {
        println!(
            "n = {}: {} configurations, min ratio {:.4} (signs {:?}, offset {})",
            s.n_terms, s.configurations, s.min_ratio, s.worst.coefficients, s.worst.offset
        );
    }
    Ok(sweep.iter().map(|s| s.min_ratio).collect())
}

#[allow(dead_code)]
fn main() -> growthlab::Result<()> {
    run_example().map(|_| ())
}
