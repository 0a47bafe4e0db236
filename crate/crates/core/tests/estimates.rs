use gmhd_core::estimates::{
    max_growth, refinement_study, verify_inverse_estimate, verify_product_estimate, verify_semigroup_estimate,
    verify_sobolev_embedding, write_report_csv, ProductSplit, PROXY_NOTE,
};
use gmhd_core::{GFunction, Grid, MultiplierSpec};

const SIZES: [usize; 3] = [16, 32, 64];

#[test]
fn inverse_estimate_is_stable_under_refinement() {
    let unit = MultiplierSpec::new(2.0, GFunction::Unit).unwrap();
    let rows = refinement_study(2, &SIZES, |g| Ok(verify_inverse_estimate(&unit, 1.0, 2.0, g, 6, 11)?.sup_ratio)).unwrap();
    assert!(max_growth(&rows) < 0.05, "{rows:?}");

    // with g = log the bound needs a visible slack in γ^- to absorb ln|k|
    let log = MultiplierSpec::with_epsilon(2.0, GFunction::Log, 0.5).unwrap();
    let rows = refinement_study(2, &SIZES, |g| Ok(verify_inverse_estimate(&log, 1.0, 2.0, g, 6, 11)?.sup_ratio)).unwrap();
    assert!(max_growth(&rows) < 0.05, "{rows:?}");

    let rows = refinement_study(2, &SIZES, |g| Ok(verify_inverse_estimate(&unit, 0.5, 3.0, g, 4, 12)?.sup_ratio)).unwrap();
    assert!(rows.iter().all(|r| r.ratio.is_finite()));
    assert!(max_growth(&rows) < 0.05, "{rows:?}");
}

#[test]
fn embedding_is_stable_under_refinement() {
    let rows = refinement_study(2, &SIZES, |g| {
        let r = verify_sobolev_embedding(0.5, 0.0, 2.0, g, 6, 3)?;
        assert_eq!(r.q, Some(4.0));
        Ok(r.sup_ratio)
    })
    .unwrap();
    assert!(max_growth(&rows) < 0.10, "{rows:?}");
}

#[test]
fn product_estimate_is_stable_under_refinement() {
    let split = ProductSplit {
        p1: 4.0,
        p2: 4.0,
        q1: 4.0,
        q2: 4.0,
    };
    for r in [0.0, 1.0] {
        let rows = refinement_study(2, &[16, 32], |g| Ok(verify_product_estimate(r, 2.0, &split, g, 6, 5)?.sup_ratio)).unwrap();
        assert!(max_growth(&rows) < 0.10, "r={r}: {rows:?}");
    }
}

#[test]
fn semigroup_fit_recovers_dimension_dependence() {
    // L² → L⁴ in two dimensions: predicted exponent -(n/2 - n/4)/γ = -1/4
    let spec = MultiplierSpec::new(2.0, GFunction::Unit).unwrap();
    let grid = Grid::new(2, 32).unwrap();
    let times: Vec<f64> = (0..6).map(|i| 0.01 * 10f64.powf(i as f64 / 5.0)).collect();
    let r = verify_semigroup_estimate(&spec, 0.0, 2.0, 0.0, 4.0, grid, &times, 4, 9).unwrap();
    assert!((r.predicted_exponent + 0.25).abs() < 1e-9);
    // the worst case over the candidates must not beat the bound's exponent
    assert!(r.fitted_exponent >= r.predicted_exponent - 0.05, "{r:?}");
    assert!(r.relative_error < 0.2, "{r:?}");
}

#[test]
fn reports_write_csv() {
    let rows = refinement_study(2, &[8, 16], |g| Ok(g.points_per_axis() as f64)).unwrap();
    let mut buf = Vec::new();
    write_report_csv(&mut buf, &rows).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert!(text.starts_with(PROXY_NOTE));
    assert_eq!(text.lines().count(), 4);
}
