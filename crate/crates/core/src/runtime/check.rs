use serde::{Deserialize, Serialize};

/// Result of comparing check outcomes against what the sender prepared.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub positions_checked: usize,
    pub mismatches: usize,
    pub error_rate: f64,
    pub passed: bool,
}

impl CheckReport {
    /// Tallies disagreements between `expected` and `observed`; passes when
    /// the error rate does not exceed `threshold`.
    pub fn tally(expected: &[u8], observed: &[u8], threshold: f64) -> Self {
        debug_assert_eq!(expected.len(), observed.len());
        let positions_checked = expected.len();
        let mismatches = expected
            .iter()
            .zip(observed)
            .filter(|(a, b)| a != b)
            .count();
        let error_rate = if positions_checked == 0 {
            0.0
        } else {
            mismatches as f64 / positions_checked as f64
        };
        Self {
            positions_checked,
            mismatches,
            error_rate,
            passed: error_rate <= threshold,
        }
    }
}
