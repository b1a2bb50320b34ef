//! Shell data `A_{n,p} e^{-alpha |v|^beta} 1_{n <= |v| <= n^2}`, normalized so
//! the exponentially weighted Lp norm is exactly one.

use crate::{FamilyError, Result};
use kinetic_core::special::ball_volume_log;
use kinetic_core::tail::shell_macro_asymptotics;
use kinetic_core::{Density, Lp, MacroFields, Shape, Tail};

#[derive(Debug, Clone)]
pub struct ShellFamily {
    pub alpha: f64,
    pub beta: f64,
    pub p: Lp,
    pub n: f64,
    pub dim: usize,
    /// ln A_{n,p}: 0 for p = infinity, else -(1/p) ln(|B_N(1)| (n^{2N} - n^N)).
    pub log_norm_const: f64,
}

impl ShellFamily {
    pub fn new(alpha: f64, beta: f64, p: Lp, n: f64, dim: usize) -> Result<Self> {
        if n < 2.0 {
            return Err(FamilyError::BadShell(n));
        }
        assert!(alpha > 0.0 && beta > 0.0 && dim >= 1);
        let log_norm_const = match p {
            Lp::Infinity => 0.0,
            Lp::P(pf) => -(log_support_volume(n, dim)) / pf,
        };
        Ok(ShellFamily {
            alpha,
            beta,
            p,
            n,
            dim,
            log_norm_const,
        })
    }

    pub fn log_eval_speed(&self, speed: f64) -> f64 {
        if speed < self.n || speed > self.n * self.n {
            f64::NEG_INFINITY
        } else {
            self.log_norm_const - self.alpha * speed.powf(self.beta)
        }
    }

    /// ln || e^{alpha |v|^beta} f ||_p from the exact support volume, no
    /// quadrature. Zero by construction for finite p, <= 0 for p = infinity.
    pub fn log_weighted_norm_exact(&self) -> f64 {
        match self.p {
            Lp::Infinity => self.log_norm_const,
            Lp::P(pf) => self.log_norm_const + log_support_volume(self.n, self.dim) / pf,
        }
    }

    /// Leading-order macro-field prediction for this shell.
    pub fn predicted_fields(&self) -> MacroFields {
        shell_macro_asymptotics(
            self.alpha,
            self.beta,
            self.dim,
            self.log_norm_const.exp(),
            self.n,
        )
    }

    /// Compare quadrature fields against the asymptotic targets; brackets are
    /// the 5% envelopes appropriate for n >= 20.
    pub fn macro_checks(&self, mf: &MacroFields) -> Vec<crate::MacroCheck> {
        let pred = self.predicted_fields();
        vec![
            crate::MacroCheck {
                label: "N T / n^2".into(),
                observed: self.dim as f64 * mf.temp / (self.n * self.n),
                target_lo: 0.95,
                target_hi: 1.05,
            },
            crate::MacroCheck {
                label: "log rho - log rho_pred".into(),
                observed: mf.log_rho - pred.log_rho,
                target_lo: -0.05,
                target_hi: 0.05,
            },
            crate::MacroCheck {
                label: "|u|".into(),
                observed: mf.speed(),
                target_lo: 0.0,
                target_hi: 1e-12,
            },
        ]
    }
}

/// ln of |B_N(1)| (n^{2N} - n^N), computed stably for large n.
fn log_support_volume(n: f64, dim: usize) -> f64 {
    let d = dim as f64;
    ball_volume_log(dim) + 2.0 * d * n.ln() + (-n.powf(-d)).ln_1p()
}

impl Density for ShellFamily {
    fn dim(&self) -> usize {
        self.dim
    }

    fn log_eval(&self, v: &[f64]) -> f64 {
        self.log_eval_speed(v.iter().map(|x| x * x).sum::<f64>().sqrt())
    }

    fn shape(&self) -> Shape {
        Shape::Radial
    }

    fn radial_support(&self) -> (f64, f64) {
        (self.n, self.n * self.n)
    }

    fn tail(&self) -> Option<Tail> {
        Some(Tail::Compact {
            radius: self.n * self.n,
        })
    }

    fn log_eval_rc(&self, r: f64, _c: f64) -> f64 {
        self.log_eval_speed(r)
    }
}
