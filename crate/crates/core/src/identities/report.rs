use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::time::Duration;

/// One violated identity: the inputs, the first differing word in canonical
/// order, and the two coefficients found there.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub inputs: String,
    pub word: String,
    pub expected: String,
    pub actual: String,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: at word `{}` expected {} but found {}",
            self.inputs, self.word, self.expected, self.actual
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub check_name: String,
    pub trials: u64,
    /// The first [`CheckReport::MAX_RECORDED`] failures, in trial order.
    pub failures: Vec<Failure>,
    /// All failures, including those not recorded.
    pub failure_count: u64,
    /// Left at zero by the kernel, which has no clock.
    pub elapsed: Duration,
}

impl CheckReport {
    pub const MAX_RECORDED: usize = 25;

    pub fn new(check_name: &str) -> Self {
        CheckReport {
            check_name: check_name.into(),
            trials: 0,
            failures: Vec::new(),
            failure_count: 0,
            elapsed: Duration::ZERO,
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub(crate) fn record(&mut self, failure: Failure) {
        self.failure_count += 1;
        if self.failures.len() < Self::MAX_RECORDED {
            self.failures.push(failure);
        }
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} ({} trials, {} failures, {:.3}s)",
            self.check_name,
            if self.passed() { "PASS" } else { "FAIL" },
            self.trials,
            self.failure_count,
            self.elapsed.as_secs_f64()
        )?;
        for failure in &self.failures {
            write!(f, "\n  {failure}")?;
        }
        if self.failure_count > self.failures.len() as u64 {
            write!(f, "\n  ... {} more", self.failure_count - self.failures.len() as u64)?;
        }
        Ok(())
    }
}
