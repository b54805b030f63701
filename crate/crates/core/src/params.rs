use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Simulation parameters.
///
/// `k` and `v` are free desk-scale stand-ins for the message count and the
/// number of payloads per index. `alpha`, `beta` and `r_in` only record the
/// asymptotic scaling a run is meant to mimic; nothing reads them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimParams {
    /// Molecules per codeword.
    pub m: usize,
    /// Number of messages (codewords).
    pub k: usize,
    /// Payloads per index.
    pub v: usize,
    /// Sequencing-error probability.
    pub p: f64,
    /// Consistency budget: a codeword stays consistent while at most `d_m`
    /// distinct observed molecules fall outside it.
    pub d_m: usize,
    /// Pairwise intersection fraction; words must share fewer than
    /// `ceil(theta * m)` molecules.
    pub theta: f64,
    /// Read cap; `None` means `50 * m`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub read_cap: Option<usize>,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_in: Option<f64>,
}

impl SimParams {
    pub fn new(m: usize, k: usize, v: usize, p: f64, d_m: usize, theta: f64, seed: u64) -> Self {
        Self {
            m,
            k,
            v,
            p,
            d_m,
            theta,
            read_cap: None,
            seed,
            alpha: None,
            beta: None,
            r_in: None,
        }
    }

    pub fn read_cap(&self) -> usize {
        self.read_cap.unwrap_or(50 * self.m)
    }

    /// `ceil(theta * m)`: the strict upper bound on pairwise intersections.
    pub fn intersection_limit(&self) -> usize {
        (self.theta * self.m as f64).ceil() as usize
    }

    /// Distinct molecules of the true codeword that guarantee a correct stop.
    pub fn acquisition_threshold(&self) -> usize {
        self.intersection_limit() + self.d_m + 1
    }

    pub fn validate(self) -> Result<Self> {
        validate(self)
    }
}

fn invalid(what: &str) -> Error {
    Error::InvalidParams(format!("{what} out of range"))
}

/// Returns `params` unchanged if every invariant holds, otherwise an error
/// naming the first violated one.
pub fn validate(params: SimParams) -> Result<SimParams> {
    if params.m == 0 {
        return Err(invalid("M"));
    }
    if params.k == 0 {
        return Err(invalid("K"));
    }
    if params.v == 0 {
        return Err(invalid("V"));
    }
    if !(0.0..=1.0).contains(&params.p) {
        return Err(invalid("p"));
    }
    if params.d_m > params.m {
        return Err(invalid("dM"));
    }
    if !(params.theta > 0.0 && params.theta <= 1.0) {
        return Err(invalid("theta"));
    }
    if params.read_cap == Some(0) {
        return Err(invalid("read_cap"));
    }
    if let Some(alpha) = params.alpha {
        if !(alpha > 1.0) {
            return Err(invalid("alpha"));
        }
    }
    Ok(params)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> SimParams {
        SimParams::new(10, 4, 8, 0.1, 1, 0.5, 0)
    }

    #[test]
    fn accepts_valid() {
        assert_eq!(validate(base()).unwrap(), base());
    }

    #[test]
    fn rejects_bad_p() {
        let err = validate(SimParams { p: 1.5, ..base() }).unwrap_err();
        assert_eq!(err.to_string(), "p out of range");
        assert!(validate(SimParams { p: f64::NAN, ..base() }).is_err());
    }

    #[test]
    fn rejects_bad_dm() {
        let err = validate(SimParams { d_m: 11, ..base() }).unwrap_err();
        assert_eq!(err.to_string(), "dM out of range");
        assert!(validate(SimParams { d_m: 10, ..base() }).is_ok());
    }

    #[test]
    fn rejects_bad_theta_and_alpha() {
        let err = validate(SimParams { theta: 0.0, ..base() }).unwrap_err();
        assert_eq!(err.to_string(), "theta out of range");
        assert!(validate(SimParams { theta: 1.0, ..base() }).is_ok());
        let err = validate(SimParams { alpha: Some(1.0), ..base() }).unwrap_err();
        assert_eq!(err.to_string(), "alpha out of range");
        assert!(validate(SimParams { alpha: Some(1.5), ..base() }).is_ok());
    }

    #[test]
    fn rejects_zero_sizes() {
        assert_eq!(validate(SimParams { m: 0, ..base() }).unwrap_err().to_string(), "M out of range");
        assert_eq!(validate(SimParams { k: 0, ..base() }).unwrap_err().to_string(), "K out of range");
        assert_eq!(validate(SimParams { v: 0, ..base() }).unwrap_err().to_string(), "V out of range");
    }

    #[test]
    fn json_keys_are_snake_case() {
        let json = serde_json::to_value(base()).unwrap();
        for key in ["m", "k", "v", "p", "d_m", "theta", "seed"] {
            assert!(json.get(key).is_some(), "missing {key}");
        }
        let parsed: SimParams =
            serde_json::from_str(r#"{"m":10,"k":4,"v":8,"p":0.1,"d_m":1,"theta":0.5,"seed":0}"#).unwrap();
        assert_eq!(parsed, base());
        assert_eq!(parsed.read_cap(), 500);
    }
}
