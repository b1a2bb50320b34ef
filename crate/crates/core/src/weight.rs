//! The exponential-polynomial velocity weight `(1+|v|^2)^delta e^{alpha |v|^beta}`.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Weight {
    /// Exponential strength, > 0.
    pub alpha: f64,
    /// Exponential exponent, > 0.
    pub beta: f64,
    /// Polynomial order, >= 0.
    pub delta: f64,
}

impl Weight {
    pub fn new(alpha: f64, beta: f64, delta: f64) -> Self {
        assert!(alpha > 0.0, "weight alpha must be positive, got {alpha}");
        assert!(beta > 0.0, "weight beta must be positive, got {beta}");
        assert!(delta >= 0.0, "weight delta must be nonnegative, got {delta}");
        Weight { alpha, beta, delta }
    }

    /// Purely exponential weight `e^{alpha |v|^beta}`.
    pub fn exponential(alpha: f64, beta: f64) -> Self {
        Weight::new(alpha, beta, 0.0)
    }

    /// log w(v) for |v| = speed, as the sum of the two log terms.
    /// Safe for speeds up to 1e4 and beyond: nothing here overflows.
    pub fn log_eval(&self, speed: f64) -> f64 {
        debug_assert!(speed >= 0.0);
        self.log_eval_sq(speed * speed)
    }

    /// log w(v) given |v|^2, for callers that already have the squared norm.
    pub fn log_eval_sq(&self, speed_sq: f64) -> f64 {
        debug_assert!(speed_sq >= 0.0);
        let poly = if self.delta == 0.0 {
            0.0
        } else {
            self.delta * speed_sq.ln_1p()
        };
        poly + self.alpha * speed_sq.powf(0.5 * self.beta)
    }
}
