//! Tail integrals `int_x^inf e^{-alpha r^beta} r^n dr`, their leading-order
//! asymptotics, and the macroscopic fields of far-field shell data.

use crate::error::Result;
use crate::fields::MacroFields;
use crate::quad::{integrate_log, upper_cutoff, QuadratureSpec};
use crate::special::sphere_area_log;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailIntegralQuery {
    pub alpha: f64,
    pub beta: f64,
    /// Moment order n >= 0 of the integrand e^{-alpha r^beta} r^n.
    pub moment_order: f64,
    /// Lower integration limit x >= 0.
    pub lower: f64,
}

impl TailIntegralQuery {
    pub fn new(alpha: f64, beta: f64, moment_order: f64, lower: f64) -> Self {
        assert!(alpha > 0.0 && beta > 0.0 && moment_order >= 0.0 && lower >= 0.0);
        TailIntegralQuery {
            alpha,
            beta,
            moment_order,
            lower,
        }
    }
}

/// log of `int_x^inf e^{-alpha r^beta} r^n dr`.
///
/// Past the linear underflow floor (alpha x^beta > 700) the integral is
/// computed in the substituted variable r = x(1+s), which keeps the result
/// exact in log space: the prefactor e^{-alpha x^beta} never has to exist as
/// a linear number.
pub fn tail_integral(q: &TailIntegralQuery, spec: &QuadratureSpec) -> Result<f64> {
    let TailIntegralQuery {
        alpha,
        beta,
        moment_order: n,
        lower: x,
    } = *q;
    let z = alpha * x.powf(beta);
    if z <= 700.0 {
        let g = |r: f64| -alpha * r.powf(beta) + ln_pow(r, n);
        let hi = upper_cutoff(&g, x, spec, None)?;
        integrate_log(g, x, hi, spec)
    } else {
        // r = x(1+s): x^{n+1} e^{-z} int_0^inf e^{-z((1+s)^beta - 1)} (1+s)^n ds
        let phi = |s: f64| -z * (beta * s.ln_1p()).exp_m1() + n * s.ln_1p();
        let hi = upper_cutoff(&phi, 0.0, spec, None)?;
        Ok((n + 1.0) * x.ln() - z + integrate_log(phi, 0.0, hi, spec)?)
    }
}

/// Ratio of the tail integral to its leading-order prefactor
/// `(1/(alpha beta)) e^{-alpha x^beta} x^{(n+1)-beta}`; tends to 1 as x grows.
pub fn tricomi_ratio(q: &TailIntegralQuery, spec: &QuadratureSpec) -> Result<f64> {
    assert!(q.lower > 0.0, "the ratio needs a positive lower limit");
    let z = q.alpha * q.lower.powf(q.beta);
    let log_prefactor =
        -(q.alpha * q.beta).ln() - z + (q.moment_order + 1.0 - q.beta) * q.lower.ln();
    Ok((tail_integral(q, spec)? - log_prefactor).exp())
}

/// Leading-order macroscopic fields of shell data
/// `C(n) e^{-alpha |v|^beta} 1_{n <= |v| (<= n^2)}`:
/// rho ~ |S^{N-1}| C(n) n^{N-beta} e^{-alpha n^beta} / (alpha beta),
/// u = 0, T ~ n^2 / N.
pub fn shell_macro_asymptotics(
    alpha: f64,
    beta: f64,
    dim: usize,
    c_n: f64,
    n: f64,
) -> MacroFields {
    assert!(n >= 1.0 && c_n > 0.0);
    let log_rho = c_n.ln() + sphere_area_log(dim) + (dim as f64 - beta) * n.ln()
        - alpha * n.powf(beta)
        - (alpha * beta).ln();
    MacroFields::new(log_rho, vec![0.0; dim], n * n / dim as f64)
}

/// For 0 < beta < 2: the increment g(v_T + 1) - g(v_T) of
/// g(x) = alpha' x^beta - x^2/(2T) past its maximizer v_T = (alpha' beta T)^{1/(2-beta)}.
/// Tends to 0 as T grows, so the exponential of the increment tends to 1.
pub fn max3_gap(alpha_prime: f64, beta: f64, temp: f64) -> f64 {
    assert!(beta > 0.0 && beta < 2.0 && alpha_prime > 0.0 && temp > 0.0);
    let v_t = (alpha_prime * beta * temp).powf(1.0 / (2.0 - beta));
    let g = |x: f64| alpha_prime * x.powf(beta) - x * x / (2.0 * temp);
    g(v_t + 1.0) - g(v_t)
}

#[inline]
fn ln_pow(r: f64, pow: f64) -> f64 {
    if pow == 0.0 {
        0.0
    } else {
        pow * r.ln()
    }
}
