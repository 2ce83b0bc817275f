use goid::catalog::{run_battery, INSTANCES, PAIRS};
use goid::report::Status;

#[test]
fn every_battery_matches_its_expectations() {
    for name in INSTANCES.iter().chain(PAIRS) {
        let started = std::time::Instant::now();
        let rep = run_battery(name, 3).unwrap();
        let bad: Vec<String> = rep
            .records
            .iter()
            .filter(|r| r.status != Status::Pass)
            .map(|r| format!("{} [{}] {:?}", r.claim, r.status, r.witness))
            .collect();
        eprintln!("{name}: {} records in {:?}", rep.records.len(), started.elapsed());
        assert!(bad.is_empty(), "{name}: {bad:#?}");
    }
}
