//! Shared scenario builders for the latency benchmarks, so the criterion
//! benches and ad-hoc comparisons run against the same inputs.

pub use thermo25d::eval::{BenchOp, BenchScenario};

/// Full working size used for headline timings.
pub fn standard_scenario() -> thermo25d::Result<BenchScenario> {
    BenchScenario::standard((256, 256, 64), 8, 40)
}

/// Reduced volume for quick comparative runs and sanity checks.
pub fn small_scenario() -> thermo25d::Result<BenchScenario> {
    BenchScenario::standard((96, 96, 16), 8, 40)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_operation_runs_on_the_small_scenario() {
        let mut scenario = small_scenario().unwrap();
        for &op in BenchOp::ALL.iter() {
            let elapsed = scenario.run_once(op).unwrap();
            assert!(elapsed.as_nanos() > 0, "{op} reported a zero duration");
        }
    }
}
