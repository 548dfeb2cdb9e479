use uqsl2::cyclo::Ctx;
use uqsl2::export::*;
use uqsl2::pipeline::{run, Pipeline};
use uqsl2::report::Status;

#[test]
fn st_matrices_round_trip() {
    let pl = Pipeline::build(2).unwrap();
    let v = export(&pl, "st-matrices").unwrap();
    let text = to_json_string(&v);
    // byte-stable rendering
    assert_eq!(text, to_json_string(&export(&pl, "st-matrices").unwrap()));
    let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
    let (rho_a, rho_b, cube) = import_st_matrices(pl.ctx(), &parsed).unwrap();
    assert_eq!(rho_a.rows, 5);
    // re-verify without rebuilding the representation
    reverify_st(pl.ctx(), &rho_a, &rho_b, &cube).unwrap();
    // a corrupted import is caught
    let bad = rho_a.scale(&pl.ctx().from_i64(2));
    assert!(reverify_st(pl.ctx(), &bad, &rho_b, &cube).is_err());
}

#[test]
fn element_round_trip() {
    let ctx = Ctx::new(3).unwrap();
    let third = num_rational::BigRational::new(num_bigint::BigInt::from(1), num_bigint::BigInt::from(3));
    let c = &ctx.zeta_pow(5) + &ctx.from_i64(7).scale(&third);
    let back = cyc_from_json(&ctx, &cyc_to_json(&c)).unwrap();
    assert_eq!(c, back);
    // wrong-length vectors are rejected
    assert!(cyc_from_json(&ctx, &serde_json::json!(["1", "2"])).is_err());
}

#[test]
fn all_export_kinds_render() {
    let pl = Pipeline::build(2).unwrap();
    for kind in EXPORT_KINDS {
        let v = export(&pl, kind).unwrap();
        assert!(v.is_object());
        let t = render_text(&pl, kind).unwrap();
        assert!(!t.is_empty());
    }
    assert!(export(&pl, "nonsense").is_err());
}

#[test]
fn report_runs_and_serializes() {
    let rep = run(2, &["field".to_string(), "hopf".to_string()]).unwrap();
    assert!(!rep.has_fail());
    assert_eq!(rep.checks.len(), 9);
    let js = rep.to_json();
    assert!(js.contains("\"check_id\""));
    assert!(rep.checks.iter().all(|c| c.status == Status::Pass));
    // unknown suites are rejected before building
    assert!(run(2, &["bogus".to_string()]).is_err());
}
