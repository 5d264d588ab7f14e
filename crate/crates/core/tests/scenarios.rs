use std::fs;

use biphoton::scenarios::{evaluate_scenario, list_scenarios, run_scenario, ScenarioReport, SCENARIO_IDS};

fn run(id: &str) -> ScenarioReport {
    let (report, _) = evaluate_scenario(id).unwrap();
    for a in &report.assertions {
        println!(
            "{id} {}: {} {:?} {} -> {}",
            a.name, a.value, a.comparison, a.threshold, a.passed
        );
    }
    report
}

fn expect_all(id: &str) {
    let r = run(id);
    assert!(!r.assertions.is_empty());
    let failed: Vec<String> = r
        .failures()
        .iter()
        .map(|a| format!("{} = {}", a.name, a.value))
        .collect();
    assert!(r.passed, "{id}: {}", failed.join(", "));
}

#[test]
fn every_scenario_is_listed() {
    let ids: Vec<&str> = list_scenarios().into_iter().map(|(id, _)| id).collect();
    assert_eq!(ids, SCENARIO_IDS);
}

#[test]
fn fig2a_cw_sheet() {
    expect_all("fig2a");
}

#[test]
fn fig2b_pulsed_ridge() {
    expect_all("fig2b");
}

#[test]
fn fig2c_filtered_bridge() {
    expect_all("fig2c");
}

#[test]
fn fig5_peak_dip() {
    expect_all("fig5");
}

#[test]
fn fig6_dispersion_curve() {
    expect_all("fig6");
}

#[test]
fn fig7a_spectrum() {
    expect_all("fig7a");
}

#[test]
fn fig7b_symmetric_spectrum() {
    expect_all("fig7b");
}

#[test]
fn fig8a_long_crystal_spectrum() {
    expect_all("fig8a");
}

#[test]
fn fig8b_uncorrelated_spectrum() {
    expect_all("fig8b");
}

#[test]
fn bundles_are_byte_identical() {
    let root = tempfile::tempdir().unwrap();
    for id in SCENARIO_IDS {
        let a = root.path().join("a");
        let b = root.path().join("b");
        run_scenario(id, &a).unwrap();
        run_scenario(id, &b).unwrap();
        for f in ["grid.csv", "meta.json", "report.json"] {
            let x = fs::read(a.join(id).join(f)).unwrap();
            let y = fs::read(b.join(id).join(f)).unwrap();
            assert!(x == y, "{id}/{f} differs between runs");
        }
    }
}
