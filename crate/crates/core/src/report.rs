//! One line of verification output.

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub check: String,
    pub status: Status,
    /// `None` on error; non-finite residuals also serialize as `null`.
    pub max_residual: Option<f64>,
    pub tolerance: f64,
    pub params: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl Report {
    pub fn new(check: impl Into<String>, residual: f64, tolerance: f64, params: Value) -> Self {
        let status = if residual < tolerance { Status::Pass } else { Status::Fail };
        Self {
            check: check.into(),
            status,
            max_residual: residual.is_finite().then_some(residual),
            tolerance,
            params,
            wall_time_ms: None,
            error: None,
        }
    }

    pub fn error(check: impl Into<String>, tolerance: f64, params: Value, err: impl ToString) -> Self {
        Self {
            check: check.into(),
            status: Status::Error,
            max_residual: None,
            tolerance,
            params,
            wall_time_ms: None,
            error: Some(err.to_string()),
        }
    }

    pub fn from_result<E: ToString>(
        check: impl Into<String>,
        result: std::result::Result<f64, E>,
        tolerance: f64,
        params: Value,
    ) -> Self {
        match result {
            Ok(r) => Self::new(check, r, tolerance, params),
            Err(e) => Self::error(check, tolerance, params, e),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("reports always serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn status_follows_tolerance() {
        assert!(Report::new("a", 1e-13, 1e-12, json!({})).passed());
        assert_eq!(Report::new("a", 1e-12, 1e-12, json!({})).status, Status::Fail);
        let inf = Report::new("a", f64::INFINITY, 1.0, json!({}));
        assert_eq!(inf.status, Status::Fail);
        assert_eq!(inf.max_residual, None);
        assert_eq!(Report::error("a", 1.0, json!({}), "boom").status, Status::Error);
    }

    #[test]
    fn json_round_trip() {
        let r = Report::new("eq3", 2e-16, 1e-12, json!({"n": 2}));
        let line = r.to_json_line();
        assert!(!line.contains("wall_time_ms"));
        let back: Report = serde_json::from_str(&line).unwrap();
        assert_eq!(back, r);
    }
}
