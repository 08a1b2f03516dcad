/// Golay-Rudin-Shapiro sign of index `j`: `-1` to the number of adjacent `11` bit pairs.
pub fn grs_sign(j: u64) -> f64 {
    if (j & (j >> 1)).count_ones().is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// First `m` Golay-Rudin-Shapiro signs, indices `0..m`.
pub fn grs_signs(m: usize) -> Vec<f64> {
    (0..m as u64).map(grs_sign).collect()
}
