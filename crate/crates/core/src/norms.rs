//! Weighted Lp norms `|| w f ||_{L^p_v}` as extended reals.
//!
//! Divergence is decided by comparing the weight's growth exponents against
//! the density's declared tail; only provably convergent integrals are handed
//! to quadrature, which then runs entirely in log space.

use crate::density::{Density, Shape, Tail};
use crate::error::{CoreError, Result};
use crate::extreal::ExtReal;
use crate::logspace::log_sum_exp;
use crate::quad::{
    axial_log_integral, integrate_log, sphere_directions, upper_cutoff, QuadratureSpec,
};
use crate::special::sphere_area_log;
use crate::weight::Weight;
use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Lebesgue exponent: finite p >= 1 or the essential sup.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Lp {
    P(f64),
    Infinity,
}

impl Lp {
    pub fn finite(p: f64) -> Self {
        assert!(p >= 1.0, "Lp exponent must be >= 1, got {p}");
        Lp::P(p)
    }
}

impl Serialize for Lp {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Lp::P(p) => s.serialize_f64(*p),
            Lp::Infinity => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Lp {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json_value::deserialize(d)?;
        match v {
            serde_json_value::Value::Number(x) => {
                if x < 1.0 {
                    return Err(D::Error::custom("Lp exponent must be >= 1"));
                }
                Ok(Lp::P(x))
            }
            serde_json_value::Value::Str(st) if st == "inf" => Ok(Lp::Infinity),
            _ => Err(D::Error::custom("expected a number >= 1 or \"inf\"")),
        }
    }
}

// a tiny untagged helper so Lp can be read from both JSON numbers and "inf"
mod serde_json_value {
    use serde::Deserialize;

    #[derive(Deserialize)]
    #[serde(untagged)]
    pub enum Value {
        Number(f64),
        Str(String),
    }

    pub fn deserialize<'de, D: serde::Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Value, D::Error> {
        Value::deserialize(d)
    }
}

/// `|| w f ||_{L^p_v}` as an extended real. Infinity carries the exponent
/// comparison that proved it; quadrature never decides divergence.
pub fn weighted_lp_norm(
    f: &dyn Density,
    w: &Weight,
    p: Lp,
    spec: &QuadratureSpec,
) -> Result<ExtReal> {
    if let Some(tail) = f.tail() {
        if let Some(witness) = divergence_witness(w, &tail, p, f.dim()) {
            return Ok(ExtReal::infinite(witness));
        }
    }
    integrate_norm(f, w, p, f64::INFINITY, spec)
}

/// Truncated norm over `|v| <= radius`; always finite.
pub fn weighted_lp_norm_truncated(
    f: &dyn Density,
    w: &Weight,
    p: Lp,
    radius: f64,
    spec: &QuadratureSpec,
) -> Result<ExtReal> {
    integrate_norm(f, w, p, radius, spec)
}

/// The exponent comparison of weight growth against tail decay. Returns the
/// witness text when the norm provably diverges.
fn divergence_witness(w: &Weight, tail: &Tail, p: Lp, dim: usize) -> Option<String> {
    match *tail {
        Tail::Compact { .. } => None,
        Tail::Exponential {
            coeff,
            power,
            poly_order,
        } => {
            if w.beta > power {
                return Some(format!("β > {power}"));
            }
            if w.beta < power {
                return None;
            }
            if w.alpha > coeff {
                return Some(format!("α' − {coeff} > 0"));
            }
            if w.alpha < coeff {
                return None;
            }
            // exactly balanced exponentials: the polynomial part decides
            match p {
                Lp::P(pf) => {
                    let net = pf * (2.0 * w.delta + poly_order) + dim as f64;
                    if net >= 0.0 {
                        Some(format!(
                            "α' − {coeff} = 0 with net polynomial degree {net} ≥ 0"
                        ))
                    } else {
                        None
                    }
                }
                Lp::Infinity => {
                    let net = 2.0 * w.delta + poly_order;
                    if net > 0.0 {
                        Some(format!(
                            "α' − {coeff} = 0 with polynomial growth of degree {net}"
                        ))
                    } else {
                        None
                    }
                }
            }
        }
    }
}

fn integrate_norm(
    f: &dyn Density,
    w: &Weight,
    p: Lp,
    radius: f64,
    spec: &QuadratureSpec,
) -> Result<ExtReal> {
    match p {
        Lp::P(pf) => integrate_norm_finite(f, w, pf, radius, spec),
        Lp::Infinity => sup_norm(f, w, radius, spec),
    }
}

fn integrate_norm_finite(
    f: &dyn Density,
    w: &Weight,
    pf: f64,
    radius: f64,
    spec: &QuadratureSpec,
) -> Result<ExtReal> {
    let n = f.dim();
    let (lo, hi) = f.radial_support();
    match f.shape() {
        Shape::Radial => {
            let g = |r: f64| pf * (w.log_eval(r) + f.log_eval_rc(r, 1.0)) + ln_pow(r, (n - 1) as f64);
            let hi = clip_hi(&g, lo, hi, radius, spec)?;
            if hi <= lo {
                return Ok(ExtReal::zero());
            }
            let l = sphere_area_log(n) + integrate_log(g, lo, hi, spec)?;
            Ok(ExtReal::from_log(l / pf))
        }
        Shape::Axial { .. } => {
            let gmax = |r: f64| {
                pf * (w.log_eval(r) + max_over_c(f, r)) + ln_pow(r, (n - 1) as f64)
            };
            let hi = clip_hi(&gmax, lo, hi, radius, spec)?;
            if hi <= lo {
                return Ok(ExtReal::zero());
            }
            let li = axial_log_integral(
                |r, c| (pf * (w.log_eval(r) + f.log_eval_rc(r, c)), 1.0),
                n,
                lo,
                hi,
                spec,
            )?;
            Ok(ExtReal::from_log(li.log_abs / pf))
        }
        Shape::OffsetBall { center, radius: ball_r } => {
            let c0: f64 = center.iter().map(|x| x * x).sum::<f64>().sqrt();
            // the weight at center + z in local coordinates (rho, t)
            let li = axial_log_integral(
                |rho, t| {
                    let v_sq = c0 * c0 + 2.0 * c0 * rho * t + rho * rho;
                    (pf * (w.log_eval_sq(v_sq) + f.log_eval_rc(rho, t)), 1.0)
                },
                n,
                lo,
                if hi.is_finite() { hi.min(ball_r) } else { ball_r },
                spec,
            )?;
            if radius.is_finite() && c0 + ball_r > radius {
                return Err(CoreError::Unsupported(
                    "truncation cutting through a displaced bump".into(),
                ));
            }
            Ok(ExtReal::from_log(li.log_abs / pf))
        }
        Shape::General => {
            let dirs = sphere_directions(n, &spec.sphere_rule)?;
            let mut parts = Vec::with_capacity(dirs.len());
            for (d, wd) in &dirs {
                let g = |r: f64| {
                    let v: Vec<f64> = d.iter().map(|di| di * r).collect();
                    pf * (w.log_eval(r) + f.log_eval(&v)) + ln_pow(r, (n - 1) as f64)
                };
                let hi_d = clip_hi(&g, lo, hi, radius, spec)?;
                if hi_d <= lo {
                    continue;
                }
                parts.push(wd.ln() - sphere_area_log(n) + integrate_log(g, lo, hi_d, spec)?);
            }
            if parts.is_empty() {
                return Ok(ExtReal::zero());
            }
            Ok(ExtReal::from_log((sphere_area_log(n) + log_sum_exp(&parts)) / pf))
        }
    }
}

/// Essential sup of w f by a dense scan plus golden-section refinement.
fn sup_norm(f: &dyn Density, w: &Weight, radius: f64, spec: &QuadratureSpec) -> Result<ExtReal> {
    let n = f.dim();
    let (lo, hi) = f.radial_support();
    match f.shape() {
        Shape::Radial | Shape::General => {
            // General shapes are scanned along sphere-rule directions
            let dirs: Vec<Vec<f64>> = match f.shape() {
                Shape::Radial => vec![{
                    let mut e = vec![0.0; n];
                    e[0] = 1.0;
                    e
                }],
                _ => sphere_directions(n, &spec.sphere_rule)?
                    .into_iter()
                    .map(|(d, _)| d)
                    .collect(),
            };
            let mut best = f64::NEG_INFINITY;
            for d in &dirs {
                let g = |r: f64| {
                    let v: Vec<f64> = d.iter().map(|di| di * r).collect();
                    w.log_eval(r) + f.log_eval(&v)
                };
                let hi_d = sup_scan_hi(&g, f, lo, hi, radius, spec)?;
                best = best.max(scan_max_1d(&g, lo, hi_d)?);
            }
            Ok(ExtReal::from_log(best))
        }
        Shape::Axial { .. } => {
            let g = |r: f64, c: f64| w.log_eval(r) + f.log_eval_rc(r, c);
            let gmax = |r: f64| w.log_eval(r) + max_over_c(f, r);
            let hi2 = sup_scan_hi(&gmax, f, lo, hi, radius, spec)?;
            Ok(ExtReal::from_log(scan_max_2d(&g, lo, hi2)?))
        }
        Shape::OffsetBall { center, radius: ball_r } => {
            let c0: f64 = center.iter().map(|x| x * x).sum::<f64>().sqrt();
            let g = |rho: f64, t: f64| {
                let v_sq = c0 * c0 + 2.0 * c0 * rho * t + rho * rho;
                w.log_eval_sq(v_sq) + f.log_eval_rc(rho, t)
            };
            let hi2 = if hi.is_finite() { hi.min(ball_r) } else { ball_r };
            Ok(ExtReal::from_log(scan_max_2d(&g, lo, hi2)?))
        }
    }
}

fn max_over_c(f: &dyn Density, r: f64) -> f64 {
    let mut m = f64::NEG_INFINITY;
    for k in 0..=16 {
        let c = -1.0 + 2.0 * (k as f64) / 16.0;
        m = m.max(f.log_eval_rc(r, c));
    }
    m
}

/// Scan bound for sup norms. A weight that exactly balances the density makes
/// the cutoff search fail (nothing decays); finiteness was already proved by
/// the exponent comparison then, and the sup sits at bounded radii because the
/// net polynomial part does not grow.
fn sup_scan_hi(
    g: &impl Fn(f64) -> f64,
    f: &dyn Density,
    lo: f64,
    support_hi: f64,
    radius: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    match clip_hi(g, lo, support_hi, radius, spec) {
        Ok(h) => Ok(h),
        Err(CoreError::UnknownTail) if f.tail().is_some() => Ok(lo + 1.0e4),
        Err(e) => Err(e),
    }
}

/// Resolve the effective upper integration bound: the declared support, a
/// truncation radius, or the auto cutoff when both are unbounded.
fn clip_hi(
    g: &impl Fn(f64) -> f64,
    lo: f64,
    support_hi: f64,
    radius: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let mut hi = support_hi.min(radius);
    if !hi.is_finite() {
        hi = upper_cutoff(g, lo, spec, None)?;
    }
    Ok(hi)
}

fn scan_max_1d(g: &impl Fn(f64) -> f64, lo: f64, hi: f64) -> Result<f64> {
    if hi <= lo {
        return Ok(f64::NEG_INFINITY);
    }
    let m = 2048usize;
    let mut best_i = 0;
    let mut best = f64::NEG_INFINITY;
    for i in 0..=m {
        let r = lo + (hi - lo) * i as f64 / m as f64;
        let v = g(r);
        if v > best {
            best = v;
            best_i = i;
        }
    }
    // refine around the best grid cell
    let h = (hi - lo) / m as f64;
    let a = (lo + (best_i as f64 - 1.0) * h).max(lo);
    let b = (lo + (best_i as f64 + 1.0) * h).min(hi);
    Ok(golden_max(g, a, b).max(best))
}

fn scan_max_2d(g: &impl Fn(f64, f64) -> f64, lo: f64, hi: f64) -> Result<f64> {
    if hi <= lo {
        return Ok(f64::NEG_INFINITY);
    }
    let (mr, mc) = (512usize, 64usize);
    let mut best = f64::NEG_INFINITY;
    let mut best_rc = (lo, 1.0);
    for i in 0..=mr {
        let r = lo + (hi - lo) * i as f64 / mr as f64;
        for j in 0..=mc {
            let c = -1.0 + 2.0 * j as f64 / mc as f64;
            let v = g(r, c);
            if v > best {
                best = v;
                best_rc = (r, c);
            }
        }
    }
    // alternate golden refinements in each coordinate
    let (mut r0, mut c0) = best_rc;
    let hr = (hi - lo) / mr as f64;
    let hc = 2.0 / mc as f64;
    for _ in 0..3 {
        r0 = golden_argmax(&|r| g(r, c0), (r0 - hr).max(lo), (r0 + hr).min(hi));
        c0 = golden_argmax(&|c| g(r0, c), (c0 - hc).max(-1.0), (c0 + hc).min(1.0));
    }
    Ok(best.max(g(r0, c0)))
}

fn golden_max(g: &impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let x = golden_argmax(g, a, b);
    g(x)
}

/// Golden-section maximizer; assumes near-unimodality on the (small) bracket.
pub fn golden_argmax(g: &impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut gc = g(c);
    let mut gd = g(d);
    for _ in 0..200 {
        if (b - a).abs() <= 1e-13 * (a.abs().max(b.abs()).max(1.0)) {
            break;
        }
        if gc > gd {
            b = d;
            d = c;
            gd = gc;
            c = b - INV_PHI * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + INV_PHI * (b - a);
            gd = g(d);
        }
    }
    0.5 * (a + b)
}

#[inline]
fn ln_pow(r: f64, pow: f64) -> f64 {
    if pow == 0.0 {
        0.0
    } else {
        pow * r.ln()
    }
}
