//! Machine-readable verification records.

use serde::{Deserialize, Serialize};

/// One verified property: what was measured, against which bound, and where
/// the worst case sat.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyCheck {
    pub name: String,
    pub pass: bool,
    pub measured: f64,
    /// Numeric pass bound where one exists (`None` for report-only rows).
    pub bound: Option<f64>,
    /// Abscissa (t, radius, …) at which `measured` was attained.
    pub worst_location: f64,
    pub note: String,
}

impl PropertyCheck {
    pub fn new(
        name: impl Into<String>,
        pass: bool,
        measured: f64,
        bound: Option<f64>,
        worst_location: f64,
        note: impl Into<String>,
    ) -> Self {
        PropertyCheck {
            name: name.into(),
            pass,
            measured,
            bound,
            worst_location,
            note: note.into(),
        }
    }
}

/// Aggregated pass/fail report with construction flags (clamped descents,
/// truncated cycles, capped envelope resolution, …).
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct PropertyReport {
    pub checks: Vec<PropertyCheck>,
    pub flags: Vec<String>,
}

impl PropertyReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, check: PropertyCheck) {
        self.checks.push(check);
    }

    pub fn flag(&mut self, msg: impl Into<String>) {
        self.flags.push(msg.into());
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failed(&self) -> Vec<&PropertyCheck> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }

    pub fn merge(&mut self, other: PropertyReport) {
        self.checks.extend(other.checks);
        self.flags.extend(other.flags);
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serialization cannot fail")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_aggregation() {
        let mut r = PropertyReport::new();
        r.push(PropertyCheck::new("a", true, 1.0, Some(2.0), 0.0, ""));
        assert!(r.all_pass());
        r.push(PropertyCheck::new("b", false, 3.0, Some(2.0), 7.0, "over"));
        assert!(!r.all_pass());
        assert_eq!(r.failed().len(), 1);
        let j = r.to_json();
        assert_eq!(j["checks"][1]["name"], "b");
        assert_eq!(j["checks"][0]["bound"], 2.0);
    }
}
