use crate::error::{Error, Result};

/// Coverage depth `c = ln(1 / (1 - r0 - delta))` at which the decoder
/// attains exponent `delta`.
pub fn coverage_for_exponent(r0: f64, delta: f64) -> Result<f64> {
    if !(r0 > 0.0 && r0 < 1.0) {
        return Err(Error::Domain(format!("R0={r0} not in (0,1)")));
    }
    if !(delta > 0.0 && delta < 1.0 - r0) {
        return Err(Error::Domain(format!("delta={delta} not in (0, 1-R0)")));
    }
    Ok(-(1.0 - r0 - delta).ln())
}

/// Inverse of [`coverage_for_exponent`]: `1 - r0 - e^{-c}`.
pub fn achievable_exponent(c: f64, r0: f64) -> Result<f64> {
    let delta = 1.0 - r0 - (-c).exp();
    // the zero-exponent boundary itself is allowed up to rounding
    if delta < -1e-12 || delta.is_nan() {
        return Err(Error::ExponentNonpositive);
    }
    Ok(delta.max(0.0))
}

/// Whether `delta < c e^{-c}`, the regime where the converse matches.
pub fn converse_valid(c: f64, delta: f64) -> bool {
    delta < c * (-c).exp()
}

/// Admissible `R'` values `(lower, r0)` for a converse run at coverage
/// `cpp`, or `None` if the interval is empty.
pub fn rprime_window(cpp: f64, delta: f64, r0: f64) -> Option<(f64, f64)> {
    let miss = (-cpp).exp();
    let lower = (1.0 - miss - delta).max(1.0 - miss - cpp * miss);
    (lower < r0).then_some((lower, r0))
}

/// Largest rate with a positive exponent: `(1 - e^{-c}) (c_in - 1/beta)`.
pub fn rate_region(c: f64, c_in: f64, beta: f64) -> Result<f64> {
    if !(beta > 0.0) {
        return Err(Error::Domain(format!("beta={beta} must be positive")));
    }
    let net = c_in - 1.0 / beta;
    if net <= 0.0 {
        return Err(Error::CapacityNonpositive);
    }
    Ok((1.0 - (-c).exp()) * net)
}

/// `p^{dM+1}`, the error-probability scale forced by the strong adversary.
pub fn strong_converse_factor(p: f64, d_m: usize) -> f64 {
    p.powf(d_m as f64 + 1.0)
}

/// `2^{-M} p^{dM+1}`, the scale forced by the weak adversary.
pub fn weak_converse_factor(m: usize, p: f64, d_m: usize) -> f64 {
    (-(m as f64)).exp2() * strong_converse_factor(p, d_m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn coverage_examples() {
        assert!(close(coverage_for_exponent(0.5, 0.2).unwrap(), 1.203973, 1e-6));
        let tiny = coverage_for_exponent(0.3, 1e-15).unwrap();
        assert!(close(tiny, (1.0f64 / 0.7).ln(), 1e-12));
        assert!(coverage_for_exponent(0.5, 0.5).is_err());
        assert!(coverage_for_exponent(0.0, 0.1).is_err());
        assert!(coverage_for_exponent(0.5, 0.0).is_err());
    }

    #[test]
    fn exponent_examples() {
        assert!(close(achievable_exponent(2f64.ln(), 0.25).unwrap(), 0.25, 1e-15));
        assert_eq!(achievable_exponent((1.0f64 / 0.5).ln(), 0.5).unwrap(), 0.0);
        assert!(close(achievable_exponent(1e3, 0.4).unwrap(), 0.6, 1e-15));
        assert!(matches!(achievable_exponent(0.1, 0.5), Err(Error::ExponentNonpositive)));
    }

    #[test]
    fn round_trip() {
        for &(r0, d) in &[(0.1, 0.3), (0.5, 0.2), (0.9, 0.05)] {
            let c = coverage_for_exponent(r0, d).unwrap();
            assert!(close(achievable_exponent(c, r0).unwrap(), d, 1e-12));
        }
    }

    #[test]
    fn converse_examples() {
        let c = (1.0f64 / 0.65).ln();
        assert!(close(c, 0.430783, 1e-6));
        assert!(close(c * (-c).exp(), 0.280009, 1e-6));
        assert!(converse_valid(c, 0.05));
        let edge = c * (-c).exp();
        assert!(!converse_valid(c, edge));
        assert!(!converse_valid(1.0, 0.5));
    }

    #[test]
    fn window_examples() {
        let (lo, hi) = rprime_window(0.4, 0.1, 0.45).unwrap();
        assert!(close(lo, 0.229680, 1e-6));
        assert_eq!(hi, 0.45);
        let second = 1.0 - (-0.4f64).exp() * 1.4;
        let (lo, _) = rprime_window(0.4, 10.0, 0.45).unwrap();
        assert!(close(lo, second, 1e-15));
        assert!(rprime_window(0.4, 0.1, 0.01).is_none());
    }

    #[test]
    fn rate_examples() {
        assert!(close(rate_region(2f64.ln(), 1.0, 2.0).unwrap(), 0.25, 1e-15));
        assert!(close(rate_region(60.0, 1.0, 2.0).unwrap(), 0.5, 1e-15));
        assert!(close(rate_region(1e-12, 1.0, 2.0).unwrap(), 0.0, 1e-11));
        assert!(matches!(rate_region(1.0, 0.5, 2.0), Err(Error::CapacityNonpositive)));
    }

    #[test]
    fn converse_factors() {
        assert_eq!(weak_converse_factor(10, 0.0, 2), 0.0);
        assert!(close(weak_converse_factor(10, 0.1, 2), 9.765625e-7, 1e-18));
        assert!(close(strong_converse_factor(0.1, 2), 1e-3, 1e-16));
    }
}
