mod block_sequences_example {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/block_sequences.rs"
    ));
}
mod subnormal_audit_example {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/subnormal_audit.rs"
    ));
}
mod rudin_shapiro_example {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/rudin_shapiro.rs"
    ));
}
mod criteria_scores_example {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/criteria_scores.rs"
    ));
}
mod remark32_growth_example {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/remark32_growth.rs"
    ));
}
mod saturating_escape_example {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/saturating_escape.rs"
    ));
}
mod salem_zygmund_example {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/salem_zygmund.rs"
    ));
}
mod riesz_constant_example {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/riesz_constant.rs"
    ));
}
mod cesaro_domination_example {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/cesaro_domination.rs"
    ));
}
mod sphere_caps_example {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/sphere_caps.rs"
    ));
}
mod census_example {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/census.rs"));
}
mod bloch_presets_example {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/bloch_presets.rs"
    ));
}
mod analytic_series_example {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/analytic_series.rs"
    ));
}

#[test]
fn block_sequences_example_runs() {
    let (dyadic, doubly) = block_sequences_example::run_example().expect("block sequences");
    assert_eq!(dyadic, (0..=12).map(|k| 1u64 << k).collect::<Vec<_>>());
    assert_eq!(doubly, vec![2, 4, 16, 256, 65536]);
}

#[test]
fn subnormal_audit_example_runs() {
    let worst_z = subnormal_audit_example::run_example().expect("audit");
    assert!(worst_z < 3.0, "worst z {worst_z}");
}

#[test]
fn rudin_shapiro_example_runs() {
    let rows = rudin_shapiro_example::run_example().expect("grs");
    assert!(rows.iter().all(|&(_, ratio)| ratio <= 2f64.sqrt() * 1.06));
}

#[test]
fn criteria_scores_example_runs() {
    let (trend, block_score) = criteria_scores_example::run_example().expect("criteria");
    assert!(trend > 1.0);
    assert!(block_score.is_finite());
}

#[test]
fn remark32_growth_example_runs() {
    let medians = remark32_growth_example::run_example().expect("growth");
    assert!(medians.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn saturating_escape_example_runs() {
    let normalized = saturating_escape_example::run_example().expect("saturating");
    assert!(normalized.iter().all(|&v| v > 0.1 && v < 10.0));
}

#[test]
fn salem_zygmund_example_runs() {
    let q05 = salem_zygmund_example::run_example().expect("sz probe");
    assert!(q05.iter().all(|&q| q > 0.5));
}

#[test]
fn riesz_constant_example_runs() {
    let mins = riesz_constant_example::run_example().expect("riesz");
    assert!((mins[0] - 1.0).abs() < 1e-9);
    assert!(mins.iter().all(|&m| m > 0.5));
}

#[test]
fn cesaro_domination_example_runs() {
    assert_eq!(cesaro_domination_example::run_example().expect("cesaro"), 0);
}

#[test]
fn sphere_caps_example_runs() {
    let stability = sphere_caps_example::run_example().expect("caps");
    assert!(stability.rows.iter().all(|r| r.min_fraction > 0.0));
}

#[test]
fn census_example_runs() {
    let (fraction, rs, lacunary) = census_example::run_example().expect("census");
    assert!(fraction > 0.99);
    assert!(rs > 1.0);
    assert_eq!(lacunary, 0.0);
}

#[test]
fn bloch_presets_example_runs() {
    let (targets, norm_upper) = bloch_presets_example::run_example().expect("bloch");
    for (i, t) in targets.iter().enumerate().skip(1) {
        let k = (i + 1) as f64;
        let expected = 2f64.powf(0.5 * k) / (k * std::f64::consts::LN_2).sqrt();
        assert!(
            (t - expected).abs() / expected < 0.05,
            "k = {k}: {t} vs {expected}"
        );
    }
    assert!((norm_upper - 1.0).abs() < 1e-6);
}

#[test]
fn analytic_series_example_runs() {
    let ratios = analytic_series_example::run_example().expect("analytic");
    assert!(ratios.iter().all(|&r| r > 0.1 && r < 10.0));
}
