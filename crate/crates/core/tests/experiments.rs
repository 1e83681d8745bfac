use steklov::experiments::*;
use steklov::geometry::DomainSpec;
use steklov::shells::CorrectorSpec;
use steklov::Error;

fn ellipse() -> DomainSpec {
    DomainSpec::ellipse(1.2, 5.0 / 6.0, 0.0).unwrap()
}

#[test]
fn tiny_hole_on_coarse_mesh_is_rejected() {
    let plan = ExperimentPlan::new(ellipse(), vec![0.3, 0.01], [Check::ShrinkingHole]).with_resolution(Resolution::new(32, 8, 1.0));
    match run_plan(&plan) {
        Err(Error::ScheduleTooCoarse { radius, layers }) => {
            assert_eq!(radius, 0.01);
            assert!(layers < 2);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn empty_schedule_needs_no_solves() {
    let plan = ExperimentPlan::new(ellipse(), vec![], [Check::Corrector]);
    let out = run_plan(&plan).unwrap();
    assert!(out.asymptotics.is_none());
    assert!(out.all_pass());
    let empty = ExperimentPlan::new(ellipse(), vec![], [Check::Nodal]);
    assert!(matches!(run_plan(&empty), Err(Error::InvalidPlan(_))));
}

#[test]
fn increasing_schedule_is_invalid() {
    let plan = ExperimentPlan::new(ellipse(), vec![0.05, 0.1], [Check::ShrinkingHole]);
    assert!(plan.violations().iter().any(|v| v.contains("decreasing")), "{:?}", plan.violations());
    assert!(matches!(run_plan(&plan), Err(Error::InvalidPlan(_))));
}

#[test]
fn enclosure_must_contain_the_domain() {
    let err = run_lemma33_check_enclosed(&ellipse(), &[0.1], 1.1).unwrap_err();
    assert!(matches!(err, Error::InvalidEnclosure { .. }));
}

#[test]
fn slow_corrector_rate_is_refused() {
    assert!(matches!(CorrectorSpec::new(2, 0.1, 0.5), Err(Error::RateViolation(_))));
    let fine = [CorrectorSpec::new(2, 0.1, 2.0).unwrap(), CorrectorSpec::new(2, 0.2, 2.0).unwrap()];
    assert!(run_corrector_check(&fine, 3.0).is_err());
}

#[test]
fn large_holes_fail_the_limit_gap() {
    let plan = ExperimentPlan::new(ellipse(), vec![0.6, 0.4], [Check::ShrinkingHole]).with_resolution(Resolution::new(64, 16, 0.85));
    let rep = run_asymptotics(&plan).unwrap();
    assert_eq!(rep.verdict("sigma2_gap_final"), Some(Verdict::Fail));
    assert!(!rep.all_pass());
}

#[test]
fn reports_render_tables_and_charts() {
    let plan = ExperimentPlan::new(ellipse(), vec![0.2, 0.1], [Check::ShrinkingHole, Check::Nodal])
        .with_resolution(Resolution::new(64, 16, 0.85));
    let rep = run_asymptotics(&plan).unwrap();
    let table = rep.to_table();
    let csv = table.to_csv();
    assert!(csv.starts_with("r,sigma1,sigma2"));
    assert_eq!(csv.lines().count(), 3);
    let chart = svg::sigma_vs_r(&rep);
    assert!(chart.starts_with("<svg") && chart.trim_end().ends_with("</svg>"));
    let json: serde_json::Value = serde_json::from_str(&summary_json(&[rep.to_experiment_report()])).unwrap();
    assert_eq!(json["experiments"][0]["name"], "asymptotics");
}
