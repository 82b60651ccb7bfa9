use serde::Serialize;

/// One named check with its residual and the threshold it is held to.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckItem {
    pub name: String,
    pub residual: f64,
    pub threshold: f64,
    pub passed: bool,
    /// Set when the check was not held to its threshold, with the reason.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct VerificationReport {
    pub items: Vec<CheckItem>,
}

impl VerificationReport {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records `residual < threshold`. NaN residuals fail.
    pub fn check(&mut self, name: impl Into<String>, residual: f64, threshold: f64) -> bool {
        let passed = residual < threshold;
        self.items.push(CheckItem {
            name: name.into(),
            residual,
            threshold,
            passed,
            skipped: None,
        });
        passed
    }

    /// Records a residual that is reported but not judged.
    pub fn skip(&mut self, name: impl Into<String>, residual: f64, threshold: f64, reason: impl Into<String>) {
        self.items.push(CheckItem {
            name: name.into(),
            residual,
            threshold,
            passed: false,
            skipped: Some(reason.into()),
        });
    }

    /// `check` or `skip` depending on `reason`.
    pub fn check_unless(&mut self, reason: Option<&str>, name: impl Into<String>, residual: f64, threshold: f64) {
        match reason {
            Some(r) => self.skip(name, residual, threshold, r),
            None => {
                self.check(name, residual, threshold);
            }
        }
    }

    /// Records a check that failed to run at all.
    pub fn fail(&mut self, name: impl Into<String>) {
        self.items.push(CheckItem {
            name: name.into(),
            residual: f64::INFINITY,
            threshold: 0.0,
            passed: false,
            skipped: None,
        });
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.items.extend(other.items);
    }

    /// Every judged check passed; skipped items do not count.
    pub fn all_passed(&self) -> bool {
        self.failures().next().is_none()
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckItem> {
        self.items.iter().filter(|c| !c.passed && c.skipped.is_none())
    }

    pub fn skipped(&self) -> impl Iterator<Item = &CheckItem> {
        self.items.iter().filter(|c| c.skipped.is_some())
    }

    pub fn get(&self, name: &str) -> Option<&CheckItem> {
        self.items.iter().find(|c| c.name == name)
    }
}
