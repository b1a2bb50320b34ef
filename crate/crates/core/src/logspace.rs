//! Scalar helpers for nonnegative quantities carried as log-magnitudes.
//!
//! `f64::NEG_INFINITY` encodes an exact zero throughout.

/// log(exp(a) + exp(b)).
#[inline]
pub fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// log(exp(a) - exp(b)); requires a >= b.
#[inline]
pub fn log_sub_exp(a: f64, b: f64) -> f64 {
    debug_assert!(a >= b, "log_sub_exp needs a >= b, got {a} < {b}");
    if b == f64::NEG_INFINITY {
        return a;
    }
    if a == b {
        return f64::NEG_INFINITY;
    }
    // ln(e^a - e^b) = a + ln(1 - e^{b-a})
    a + (-(b - a).exp()).ln_1p()
}

/// log(sum_i exp(x_i)) with the shift-by-max trick.
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let m = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let s: f64 = xs.iter().map(|&x| (x - m).exp()).sum();
    m + s.ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn add_matches_direct() {
        let a: f64 = -1.3;
        let b: f64 = -2.7;
        let direct = (a.exp() + b.exp()).ln();
        assert!((log_add_exp(a, b) - direct).abs() < 1e-14);
        assert_eq!(log_add_exp(f64::NEG_INFINITY, b), b);
    }

    #[test]
    fn sub_matches_direct() {
        let a: f64 = -1.0;
        let b: f64 = -5.0;
        let direct = (a.exp() - b.exp()).ln();
        assert!((log_sub_exp(a, b) - direct).abs() < 1e-14);
        assert_eq!(log_sub_exp(a, a), f64::NEG_INFINITY);
    }

    #[test]
    fn sum_handles_huge_magnitudes() {
        // values far below the linear underflow floor
        let xs = [-2000.0, -2000.0 + (2.0f64).ln()];
        let got = log_sum_exp(&xs);
        assert!((got - (-2000.0 + (3.0f64).ln())).abs() < 1e-12);
    }
}
