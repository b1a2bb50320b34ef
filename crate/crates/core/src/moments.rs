//! Velocity moments of pointwise-evaluable densities.
//!
//! Mass, momentum and energy integrals reduce exactly to one- or
//! two-dimensional quadratures for the declared shapes: isotropic densities to
//! a radial integral, axisymmetric ones to (radius, cosine), displaced bumps
//! to the same reduction in their local frame. Masses live in log space;
//! means and second moments, which are bounded ratios, stay linear.

use crate::density::{Density, Shape};
use crate::error::{CoreError, Result};
use crate::fields::{MacroFields, Maxwellian};
use crate::logspace::log_sum_exp;
use crate::quad::{
    axial_log_integral, integrate_log, signed_sum, sphere_directions, upper_cutoff, LogIntegral,
    QuadratureSpec,
};
use crate::special::sphere_area_log;

/// Moments before assembly into (rho, u, T): the mass in log space together
/// with the mass-normalized mean velocity and second moment.
#[derive(Debug, Clone)]
pub struct RawMoments {
    pub log_mass: f64,
    pub mean: Vec<f64>,
    pub second_over_mass: f64,
}

/// Compute the raw moments of a density by its declared reduction.
pub fn raw_moments(f: &dyn Density, spec: &QuadratureSpec) -> Result<RawMoments> {
    let n = f.dim();
    let (lo, hi) = f.radial_support();
    match f.shape() {
        Shape::Radial => {
            let hi = resolve_radial_hi(f, n, lo, hi, spec)?;
            let order = |k: f64| -> Result<f64> {
                let pow = (n - 1) as f64 + k;
                let g = |r: f64| f.log_eval_rc(r, 1.0) + ln_pow(r, pow);
                Ok(sphere_area_log(n) + integrate_log(g, lo, hi, spec)?)
            };
            let lm = order(0.0)?;
            let l2 = order(2.0)?;
            Ok(RawMoments {
                log_mass: lm,
                mean: vec![0.0; n],
                second_over_mass: (l2 - lm).exp(),
            })
        }
        Shape::Axial { axis } => {
            let (e, _) = crate::quad::orthonormal_complement(&axis);
            let hi = resolve_radial_hi(f, n, lo, hi, spec)?;
            let mass = axial_log_integral(|r, c| (f.log_eval_rc(r, c), 1.0), n, lo, hi, spec)?;
            if mass.sign == 0.0 {
                return Ok(RawMoments {
                    log_mass: f64::NEG_INFINITY,
                    mean: vec![0.0; n],
                    second_over_mass: 0.0,
                });
            }
            let first = axial_log_integral(
                |r, c| (f.log_eval_rc(r, c) + r.ln(), c),
                n,
                lo,
                hi,
                spec,
            )?;
            let second = axial_log_integral(
                |r, c| (f.log_eval_rc(r, c) + 2.0 * r.ln(), 1.0),
                n,
                lo,
                hi,
                spec,
            )?;
            let mean_axial = first.sign * (first.log_abs - mass.log_abs).exp();
            Ok(RawMoments {
                log_mass: mass.log_abs,
                mean: e.iter().map(|ei| ei * mean_axial).collect(),
                second_over_mass: (second.log_abs - mass.log_abs).exp(),
            })
        }
        Shape::OffsetBall { center, radius } => {
            let (e, _) = crate::quad::orthonormal_complement(&center);
            let c0: f64 = center.iter().map(|x| x * x).sum::<f64>().sqrt();
            let hi = if hi.is_finite() { hi.min(radius) } else { radius };
            let mass = axial_log_integral(|r, c| (f.log_eval_rc(r, c), 1.0), n, lo, hi, spec)?;
            if mass.sign == 0.0 {
                return Ok(RawMoments {
                    log_mass: f64::NEG_INFINITY,
                    mean: vec![0.0; n],
                    second_over_mass: 0.0,
                });
            }
            let first = axial_log_integral(
                |r, c| (f.log_eval_rc(r, c) + r.ln(), c),
                n,
                lo,
                hi,
                spec,
            )?;
            let second = axial_log_integral(
                |r, c| (f.log_eval_rc(r, c) + 2.0 * r.ln(), 1.0),
                n,
                lo,
                hi,
                spec,
            )?;
            let m1 = first.sign * (first.log_abs - mass.log_abs).exp();
            let e2 = (second.log_abs - mass.log_abs).exp();
            Ok(RawMoments {
                log_mass: mass.log_abs,
                mean: (0..n).map(|i| center[i] + m1 * e[i]).collect(),
                second_over_mass: c0 * c0 + 2.0 * c0 * m1 + e2,
            })
        }
        Shape::General => {
            let dirs = sphere_directions(n, &spec.sphere_rule)?;
            let mut log_masses = Vec::with_capacity(dirs.len());
            let mut log_seconds = Vec::with_capacity(dirs.len());
            let mut first_components = vec![Vec::with_capacity(dirs.len()); n];
            for (d, w) in &dirs {
                let g = |r: f64| f.log_eval(&d.iter().map(|di| di * r).collect::<Vec<_>>());
                let pow = (n - 1) as f64;
                let hi_d = if hi.is_finite() {
                    hi
                } else {
                    upper_cutoff(|r| g(r) + ln_pow(r, pow + 2.0), lo, spec, None)?
                };
                let lw = w.ln();
                let lm = integrate_log(|r| g(r) + ln_pow(r, pow), lo, hi_d, spec)?;
                let l1 = integrate_log(|r| g(r) + ln_pow(r, pow + 1.0), lo, hi_d, spec)?;
                let l2 = integrate_log(|r| g(r) + ln_pow(r, pow + 2.0), lo, hi_d, spec)?;
                log_masses.push(lw + lm);
                log_seconds.push(lw + l2);
                for i in 0..n {
                    first_components[i].push(LogIntegral {
                        sign: if d[i] == 0.0 { 0.0 } else { d[i].signum() },
                        log_abs: lw + l1 + d[i].abs().ln(),
                    });
                }
            }
            let log_mass = log_sum_exp(&log_masses);
            let log_second = log_sum_exp(&log_seconds);
            let mean: Vec<f64> = (0..n)
                .map(|i| {
                    let s = signed_sum(&first_components[i]);
                    s.sign * (s.log_abs - log_mass).exp()
                })
                .collect();
            Ok(RawMoments {
                log_mass,
                mean,
                second_over_mass: (log_second - log_mass).exp(),
            })
        }
    }
}

/// Combine raw moments of disjoint components of a mixture.
pub fn combine_raw(parts: &[RawMoments], dim: usize) -> RawMoments {
    let logs: Vec<f64> = parts.iter().map(|p| p.log_mass).collect();
    let log_mass = log_sum_exp(&logs);
    if log_mass == f64::NEG_INFINITY {
        return RawMoments {
            log_mass,
            mean: vec![0.0; dim],
            second_over_mass: 0.0,
        };
    }
    let weights: Vec<f64> = parts.iter().map(|p| (p.log_mass - log_mass).exp()).collect();
    let mut mean = vec![0.0; dim];
    let mut second = 0.0;
    for (p, w) in parts.iter().zip(&weights) {
        for i in 0..dim {
            mean[i] += w * p.mean[i];
        }
        second += w * p.second_over_mass;
    }
    RawMoments {
        log_mass,
        mean,
        second_over_mass: second,
    }
}

/// Assemble raw moments into macroscopic fields:
/// rho = int f, rho u = int v f, rho (|u|^2 + N T) = int |v|^2 f.
pub fn assemble(raw: RawMoments, dim: usize, spec: &QuadratureSpec) -> Result<MacroFields> {
    if !(raw.log_mass > spec.zero_mass_log_floor) {
        return Err(CoreError::ZeroMass(raw.log_mass, spec.zero_mass_log_floor));
    }
    let u_sq: f64 = raw.mean.iter().map(|x| x * x).sum();
    let temp = ((raw.second_over_mass - u_sq) / dim as f64).max(0.0);
    Ok(MacroFields::new(raw.log_mass, raw.mean, temp))
}

/// Macroscopic fields (rho, u, T) of a density by quadrature.
pub fn moments(f: &dyn Density, spec: &QuadratureSpec) -> Result<MacroFields> {
    let raw = raw_moments(f, spec)?;
    assemble(raw, f.dim(), spec)
}

/// The Maxwellian sharing the given first three moments.
pub fn maxwellian_from_moments(mf: &MacroFields, dim: usize) -> Result<Maxwellian> {
    Maxwellian::new(mf.clone(), dim)
}

/// Resolve an infinite support bound by searching where the second-moment
/// integrand (the fastest-growing one used here) has decayed past the floor.
fn resolve_radial_hi(
    f: &dyn Density,
    n: usize,
    lo: f64,
    hi: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    if hi.is_finite() {
        return Ok(hi);
    }
    let pow = (n + 1) as f64;
    let proxy = |r: f64| {
        let mut m = f64::NEG_INFINITY;
        for k in 0..=8 {
            let c = -1.0 + 2.0 * (k as f64) / 8.0;
            let g = f.log_eval_rc(r, c);
            if g > m {
                m = g;
            }
        }
        m + ln_pow(r, pow)
    };
    upper_cutoff(proxy, lo, spec, None)
}

#[inline]
fn ln_pow(r: f64, pow: f64) -> f64 {
    if pow == 0.0 {
        0.0
    } else {
        pow * r.ln()
    }
}
