// Block sequences `n_(k+1) = min { l : g(l) >= A g(n_k) }` and the doubling audit.

use growthlab::weight::{block_sequence, doubling_audit, Weight};

pub fn run_example() -> growthlab::Result<(Vec<u64>, Vec<u64>)> {
    let linear = Weight::power(1.0)?;
    let dyadic = block_sequence(&linear, 2.0, 1, 12, true)?;
    println!("g(x) = x, A = 2: {:?}", dyadic.ends());

    let log2 = Weight::log_power_base2(1.0)?;
    let doubly = block_sequence(&log2, 2.0, 2, 4, true)?;
    println!("g(x) = log2 x, A = 2: {:?}", doubly.ends());

    for alpha in [0.5, 1.0, 2.0] {
        let audit = doubling_audit(&Weight::power(alpha)?, 1e6, 500)?;
        println!(
            "power {alpha}: D_hat = {:.6} (2^alpha = {:.6})",
            audit.d_hat,
            2f64.powf(alpha)
        );
    }
    let slow = Weight::log_power(0.5)?;
    let audit = doubling_audit(&slow, 1e6, 500)?;
    println!(
        "sqrt log: D_hat = {:.4} at x = {:.1}",
        audit.d_hat, audit.worst_x
    );

    Ok((dyadic.ends().to_vec(), doubly.ends().to_vec()))
}

#[allow(dead_code)]
fn main() -> growthlab::Result<()> {
    run_example().map(|_| ())
}
