//! Adaptive Gauss-Kronrod quadrature operating on log-magnitude integrands.
//!
//! Integrands are supplied as `x -> (g(x), phi(x))` meaning `phi(x) * e^{g(x)}`
//! with `g` possibly ranging over thousands of nats and `phi` a bounded,
//! possibly signed weight. The engine shifts by the running peak of `g`, so
//! integrals like `int e^{-alpha r^2} r^k dr` over shells at `r ~ 50` come out
//! exact in log space even though their linear values underflow.

use crate::error::{CoreError, Result};
use crate::special::sphere_area_log;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RadialCutoff {
    /// Choose the truncation radius so the integrand's log-magnitude has
    /// dropped `abs_tol_log` nats below its running peak.
    AutoFromExponent,
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SphereRule {
    /// Reduce isotropic/axisymmetric integrands exactly to one angular variable.
    ExactIsotropicReduction,
    /// Tensor Gauss-Legendre x uniform-azimuth directions for general shapes.
    ProductRule { order: usize },
    /// Seeded Monte-Carlo directions for general shapes.
    MonteCarlo { samples: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    /// Nats below the integrand peak at which the tail is negligible.
    pub abs_tol_log: f64,
    pub max_subdivisions: usize,
    pub radial_cutoff: RadialCutoff,
    pub sphere_rule: SphereRule,
    /// log-mass floor below which a density counts as vacuum.
    pub zero_mass_log_floor: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            rel_tol: 1e-8,
            abs_tol_log: 60.0,
            max_subdivisions: 400,
            radial_cutoff: RadialCutoff::AutoFromExponent,
            sphere_rule: SphereRule::ExactIsotropicReduction,
            zero_mass_log_floor: -1e8,
        }
    }
}

impl QuadratureSpec {
    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }
}

/// A signed quantity `sign * exp(log_abs)`.
#[derive(Debug, Clone, Copy)]
pub struct LogIntegral {
    pub sign: f64,
    pub log_abs: f64,
}

impl LogIntegral {
    pub fn zero() -> Self {
        LogIntegral {
            sign: 0.0,
            log_abs: f64::NEG_INFINITY,
        }
    }

    /// Linear value; only safe when the magnitude is moderate.
    pub fn value(&self) -> f64 {
        self.sign * self.log_abs.exp()
    }
}

/// G7/K15 nodes as (abscissa, kronrod weight, gauss weight).
const G7K15: [(f64, f64, f64); 15] = [
    (-0.991_455_371_120_812_6, 0.022_935_322_010_529_225, 0.0),
    (
        -0.949_107_912_342_758_5,
        0.063_092_092_629_978_55,
        0.129_484_966_168_869_7,
    ),
    (-0.864_864_423_359_769_1, 0.104_790_010_322_250_18, 0.0),
    (
        -0.741_531_185_599_394_4,
        0.140_653_259_715_525_92,
        0.279_705_391_489_276_7,
    ),
    (-0.586_087_235_467_691_1, 0.169_004_726_639_267_9, 0.0),
    (
        -0.405_845_151_377_397_17,
        0.190_350_578_064_785_4,
        0.381_830_050_505_118_94,
    ),
    (-0.207_784_955_007_898_47, 0.204_432_940_075_298_9, 0.0),
    (
        0.0,
        0.209_482_141_084_727_83,
        0.417_959_183_673_469_4,
    ),
    (0.207_784_955_007_898_47, 0.204_432_940_075_298_9, 0.0),
    (
        0.405_845_151_377_397_17,
        0.190_350_578_064_785_4,
        0.381_830_050_505_118_94,
    ),
    (0.586_087_235_467_691_1, 0.169_004_726_639_267_9, 0.0),
    (
        0.741_531_185_599_394_4,
        0.140_653_259_715_525_92,
        0.279_705_391_489_276_7,
    ),
    (0.864_864_423_359_769_1, 0.104_790_010_322_250_18, 0.0),
    (
        0.949_107_912_342_758_5,
        0.063_092_092_629_978_55,
        0.129_484_966_168_869_7,
    ),
    (0.991_455_371_120_812_6, 0.022_935_322_010_529_225, 0.0),
];

struct Segment {
    a: f64,
    b: f64,
    /// Signed Kronrod estimate, shifted by the global peak.
    kron: f64,
    /// Kronrod estimate of the absolute integrand, same shift.
    kron_abs: f64,
    err: f64,
    splittable: bool,
}

struct Engine<'f> {
    f: &'f dyn Fn(f64) -> (f64, f64),
    shift: f64,
    segments: Vec<Segment>,
}

impl<'f> Engine<'f> {
    fn eval(&mut self, a: f64, b: f64) -> Segment {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut raw = [0.0f64; 15];
        let mut phi = [0.0f64; 15];
        let mut seg_max = f64::NEG_INFINITY;
        for (i, (x, _, _)) in G7K15.iter().enumerate() {
            let (g, p) = (self.f)(mid + half * x);
            raw[i] = if p == 0.0 { f64::NEG_INFINITY } else { g };
            phi[i] = p;
            if raw[i] > seg_max {
                seg_max = raw[i];
            }
        }
        if seg_max > self.shift {
            self.rescale(seg_max);
        }
        let (mut kron, mut gauss, mut kron_abs) = (0.0, 0.0, 0.0);
        for i in 0..15 {
            let h = (raw[i] - self.shift).exp();
            let v = phi[i] * h;
            kron += G7K15[i].1 * v;
            gauss += G7K15[i].2 * v;
            kron_abs += G7K15[i].1 * v.abs();
        }
        kron *= half;
        gauss *= half;
        kron_abs *= half;
        let width = b - a;
        let splittable = width > f64::EPSILON * a.abs().max(b.abs()).max(1.0);
        Segment {
            a,
            b,
            kron,
            kron_abs,
            err: (kron - gauss).abs(),
            splittable,
        }
    }

    fn rescale(&mut self, new_shift: f64) {
        let factor = (self.shift - new_shift).exp();
        for s in &mut self.segments {
            s.kron *= factor;
            s.kron_abs *= factor;
            s.err *= factor;
        }
        self.shift = new_shift;
    }
}

/// Adaptive integral of `phi(x) e^{g(x)}` over [a, b].
pub fn integrate_signed(
    f: impl Fn(f64) -> (f64, f64),
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<LogIntegral> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(CoreError::QuadratureFailure(format!(
            "non-finite interval [{a}, {b}]"
        )));
    }
    if a >= b {
        return Ok(LogIntegral::zero());
    }
    // coarse scan for an initial shift
    let mut shift = f64::NEG_INFINITY;
    for k in 0..=32 {
        let x = a + (b - a) * (k as f64) / 32.0;
        let (g, p) = f(x);
        if p != 0.0 && g > shift {
            shift = g;
        }
    }
    if shift == f64::NEG_INFINITY {
        shift = 0.0;
    }
    let mut eng = Engine {
        f: &f,
        shift,
        segments: Vec::new(),
    };
    let first = eng.eval(a, b);
    eng.segments.push(first);

    loop {
        let total: f64 = eng.segments.iter().map(|s| s.kron).sum();
        let total_abs: f64 = eng.segments.iter().map(|s| s.kron_abs).sum();
        let err: f64 = eng.segments.iter().map(|s| s.err).sum();
        if total_abs == 0.0 {
            return Ok(LogIntegral::zero());
        }
        if err <= spec.rel_tol * total_abs {
            return Ok(LogIntegral {
                sign: total.signum() * if total == 0.0 { 0.0 } else { 1.0 },
                log_abs: eng.shift + total.abs().ln(),
            });
        }
        if eng.segments.len() >= spec.max_subdivisions {
            return Err(CoreError::QuadratureFailure(format!(
                "tolerance {:.1e} not met within {} subdivisions (err {:.3e} of {:.3e})",
                spec.rel_tol,
                spec.max_subdivisions,
                err,
                total_abs
            )));
        }
        // split the worst splittable segment
        let mut worst = usize::MAX;
        let mut worst_err = -1.0;
        for (i, s) in eng.segments.iter().enumerate() {
            if s.splittable && s.err > worst_err {
                worst_err = s.err;
                worst = i;
            }
        }
        if worst == usize::MAX {
            // nothing splittable left; accept what we have
            return Ok(LogIntegral {
                sign: total.signum() * if total == 0.0 { 0.0 } else { 1.0 },
                log_abs: eng.shift + total.abs().ln(),
            });
        }
        let seg = eng.segments.swap_remove(worst);
        let mid = 0.5 * (seg.a + seg.b);
        // push each half before evaluating the next: eval may rescale the pool
        let left = eng.eval(seg.a, mid);
        eng.segments.push(left);
        let right = eng.eval(mid, seg.b);
        eng.segments.push(right);
    }
}

/// Adaptive integral of the nonnegative integrand `e^{g(x)}`; returns the log value.
pub fn integrate_log(
    g: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let r = integrate_signed(|x| (g(x), 1.0), a, b, spec)?;
    Ok(r.log_abs)
}

/// Search for a truncation radius where `g` has dropped `abs_tol_log` nats
/// below its running peak. Doubles the excursion from `lo`; respects `hard_hi`.
pub fn upper_cutoff(
    g: impl Fn(f64) -> f64,
    lo: f64,
    spec: &QuadratureSpec,
    hard_hi: Option<f64>,
) -> Result<f64> {
    if let Some(h) = hard_hi {
        if h.is_finite() {
            return Ok(h);
        }
    }
    if let RadialCutoff::Fixed(r) = spec.radial_cutoff {
        return Ok(r.max(lo));
    }
    let mut peak = g(lo);
    let mut step = 1.0e-9 * lo.abs().max(1.0);
    for _ in 0..400 {
        let r = lo + step;
        let v = g(r);
        if v > peak {
            peak = v;
        }
        if peak.is_finite() && v <= peak - spec.abs_tol_log {
            return Ok(r);
        }
        if peak == f64::NEG_INFINITY && step > 1.0e30 {
            // identically zero so far: empty integrand
            return Ok(r);
        }
        step *= 2.0;
    }
    Err(CoreError::UnknownTail)
}

/// ln of `|S^{n-1}| int_lo^hi e^{g(r)} r^{n-1} dr`, the exact isotropic reduction.
/// An infinite `hi` is resolved by the auto cutoff.
pub fn radial_log_integral(
    g: impl Fn(f64) -> f64,
    n_dim: usize,
    lo: f64,
    hi: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let weight_pow = (n_dim - 1) as f64;
    let integrand = |r: f64| {
        let extra = if n_dim > 1 { weight_pow * r.ln() } else { 0.0 };
        g(r) + extra
    };
    let hi = if hi.is_finite() {
        hi
    } else {
        upper_cutoff(&integrand, lo, spec, None)?
    };
    Ok(sphere_area_log(n_dim) + integrate_log(integrand, lo, hi, spec)?)
}

/// ln of `int phi(r, c) e^{F(r, c)} dv` over R^n for an integrand depending on
/// the radius r and the cosine c of the angle to a fixed axis:
///
///   |S^{n-2}| int_lo^hi int_0^pi phi e^{F(r, cos t)} sin^{n-2} t r^{n-1} dt dr
///
/// For n = 1 the two half-lines c = +/-1 are summed directly.
pub fn axial_log_integral(
    f: impl Fn(f64, f64) -> (f64, f64),
    n_dim: usize,
    lo: f64,
    hi: f64,
    spec: &QuadratureSpec,
) -> Result<LogIntegral> {
    if n_dim == 1 {
        let plus = integrate_signed(|r| f(r, 1.0), lo, resolve_hi(&f, 1, lo, hi, spec)?, spec)?;
        let minus = integrate_signed(|r| f(r, -1.0), lo, resolve_hi(&f, 1, lo, hi, spec)?, spec)?;
        return Ok(signed_sum(&[plus, minus]));
    }
    let hi = resolve_hi(&f, n_dim, lo, hi, spec)?;
    let sin_pow = (n_dim - 2) as f64;
    let radial_pow = (n_dim - 1) as f64;
    // cache: the outer integrand needs (log_abs, sign) from one inner integral
    let inner = |r: f64| -> Result<LogIntegral> {
        integrate_signed(
            |theta: f64| {
                let (g, p) = f(r, theta.cos());
                let s = if n_dim > 2 {
                    sin_pow * theta.sin().ln()
                } else {
                    0.0
                };
                (g + s, p)
            },
            0.0,
            PI,
            spec,
        )
    };
    let err_slot = std::cell::RefCell::new(None::<CoreError>);
    let outer = integrate_signed(
        |r: f64| match inner(r) {
            Ok(li) => (li.log_abs + radial_pow * r.ln(), li.sign),
            Err(e) => {
                err_slot.borrow_mut().get_or_insert(e);
                (f64::NEG_INFINITY, 0.0)
            }
        },
        lo,
        hi,
        spec,
    )?;
    if let Some(e) = err_slot.into_inner() {
        return Err(e);
    }
    Ok(LogIntegral {
        sign: outer.sign,
        log_abs: outer.log_abs + sphere_area_log(n_dim.max(2) - 1),
    })
}

fn resolve_hi(
    f: &impl Fn(f64, f64) -> (f64, f64),
    n_dim: usize,
    lo: f64,
    hi: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    if hi.is_finite() {
        return Ok(hi);
    }
    // proxy radial profile: max of the log-magnitude over a coarse cosine grid
    let radial_pow = (n_dim.max(1) - 1) as f64;
    let proxy = |r: f64| {
        let mut m = f64::NEG_INFINITY;
        for k in 0..=16 {
            let c = -1.0 + 2.0 * (k as f64) / 16.0;
            let (g, p) = f(r, c);
            if p != 0.0 && g > m {
                m = g;
            }
        }
        m + if n_dim > 1 { radial_pow * r.ln() } else { 0.0 }
    };
    upper_cutoff(proxy, lo, spec, None)
}

/// Combine signed log quantities by shifting to the common peak.
pub fn signed_sum(parts: &[LogIntegral]) -> LogIntegral {
    let m = parts
        .iter()
        .filter(|p| p.sign != 0.0)
        .map(|p| p.log_abs)
        .fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return LogIntegral::zero();
    }
    let s: f64 = parts
        .iter()
        .map(|p| p.sign * (p.log_abs - m).exp())
        .sum();
    if s == 0.0 {
        LogIntegral::zero()
    } else {
        LogIntegral {
            sign: s.signum(),
            log_abs: m + s.abs().ln(),
        }
    }
}

/// Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration on the
/// Legendre recurrence.
pub fn gauss_legendre(m: usize) -> Vec<(f64, f64)> {
    assert!(m >= 1);
    let mut out = Vec::with_capacity(m);
    let n = m as f64;
    for i in 0..m {
        // Tricomi-style initial guess for the i-th root
        let mut x = (PI * (i as f64 + 0.75) / (n + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_and_derivative(m, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_and_derivative(m, x);
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    out
}

fn legendre_and_derivative(m: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=m {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = m as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Unit directions with weights summing to |S^{n-1}|, for general-shape
/// integrals. Product rule for n in {1, 2, 3}; Monte-Carlo for any n.
pub fn sphere_directions(n_dim: usize, rule: &SphereRule) -> Result<Vec<(Vec<f64>, f64)>> {
    match rule {
        SphereRule::MonteCarlo { samples, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let w = sphere_area_log(n_dim).exp() / *samples as f64;
            let mut dirs = Vec::with_capacity(*samples);
            for _ in 0..*samples {
                let mut d = vec![0.0; n_dim];
                let mut norm = 0.0;
                while norm == 0.0 {
                    for di in d.iter_mut() {
                        *di = standard_normal(&mut rng);
                    }
                    norm = d.iter().map(|x| x * x).sum::<f64>().sqrt();
                }
                for di in d.iter_mut() {
                    *di /= norm;
                }
                dirs.push((d, w));
            }
            Ok(dirs)
        }
        SphereRule::ExactIsotropicReduction | SphereRule::ProductRule { .. } => {
            let order = match rule {
                SphereRule::ProductRule { order } => (*order).max(2),
                _ => 16,
            };
            match n_dim {
                1 => Ok(vec![(vec![1.0], 1.0), (vec![-1.0], 1.0)]),
                2 => {
                    let m = 4 * order;
                    let w = 2.0 * PI / m as f64;
                    Ok((0..m)
                        .map(|j| {
                            let t = 2.0 * PI * (j as f64 + 0.5) / m as f64;
                            (vec![t.cos(), t.sin()], w)
                        })
                        .collect())
                }
                3 => {
                    let gl = gauss_legendre(order);
                    let m_phi = 2 * order;
                    let wphi = 2.0 * PI / m_phi as f64;
                    let mut dirs = Vec::with_capacity(order * m_phi);
                    for (c, wc) in gl {
                        let s = (1.0 - c * c).max(0.0).sqrt();
                        for j in 0..m_phi {
                            let phi = 2.0 * PI * (j as f64 + 0.5) / m_phi as f64;
                            dirs.push((vec![s * phi.cos(), s * phi.sin(), c], wc * wphi));
                        }
                    }
                    Ok(dirs)
                }
                _ => Err(CoreError::Unsupported(format!(
                    "product sphere rule for dimension {n_dim}"
                ))),
            }
        }
    }
}

fn standard_normal(rng: &mut ChaCha8Rng) -> f64 {
    // Box-Muller
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen::<f64>();
    (-2.0 * u1.ln()).sqrt() * (2.0 * PI * u2).cos()
}

/// An orthonormal vector completing `axis` (itself normalized) to a frame.
pub fn orthonormal_complement(axis: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let norm = axis.iter().map(|x| x * x).sum::<f64>().sqrt();
    assert!(norm > 0.0, "axis must be nonzero");
    let e: Vec<f64> = axis.iter().map(|x| x / norm).collect();
    let n = e.len();
    let mut perp = vec![0.0; n];
    if n == 1 {
        return (e, perp);
    }
    // pick the coordinate axis least aligned with e
    let (k, _) = e
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.abs().partial_cmp(&b.1.abs()).unwrap())
        .unwrap();
    perp[k] = 1.0;
    let dot: f64 = perp.iter().zip(&e).map(|(a, b)| a * b).sum();
    for i in 0..n {
        perp[i] -= dot * e[i];
    }
    let pn = perp.iter().map(|x| x * x).sum::<f64>().sqrt();
    for p in perp.iter_mut() {
        *p /= pn;
    }
    (e, perp)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn polynomial_is_exact() {
        // int_0^1 x^3 dx = 1/4
        let r = integrate_log(|x: f64| 3.0 * x.ln(), 0.0, 1.0, &spec()).unwrap();
        assert!((r - (0.25f64).ln()).abs() < 1e-12);
    }

    #[test]
    fn gaussian_with_huge_negative_scale() {
        // int_R e^{-x^2 - 5000} dx = sqrt(pi) e^{-5000}: underflows linearly
        let r = integrate_log(|x: f64| -x * x - 5000.0, -20.0, 20.0, &spec()).unwrap();
        assert!((r - (PI.sqrt().ln() - 5000.0)).abs() < 1e-10);
    }

    #[test]
    fn signed_weight_integral() {
        // int_0^pi cos(x) e^0 dx = 0; int_0^{pi/2} = 1
        let r = integrate_signed(|x: f64| (0.0, x.cos()), 0.0, PI / 2.0, &spec()).unwrap();
        assert!((r.value() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cutoff_finds_gaussian_tail() {
        let g = |r: f64| -r * r;
        let hi = upper_cutoff(g, 0.0, &spec(), None).unwrap();
        assert!(hi * hi >= 60.0);
        let full = radial_log_integral(g, 3, 0.0, f64::INFINITY, &spec()).unwrap();
        // int_{R^3} e^{-|v|^2} dv = pi^{3/2}
        assert!((full - 1.5 * PI.ln()).abs() < 1e-9);
    }

    #[test]
    fn axial_matches_radial_for_isotropic() {
        let iso = radial_log_integral(|r| -r * r, 3, 0.0, f64::INFINITY, &spec()).unwrap();
        let ax = axial_log_integral(|r, _c| (-r * r, 1.0), 3, 0.0, f64::INFINITY, &spec()).unwrap();
        assert!((iso - ax.log_abs).abs() < 1e-8);
        assert_eq!(ax.sign, 1.0);
    }

    #[test]
    fn axial_first_moment_of_shifted_gaussian() {
        // int z_axis e^{-|v - u|^2} dv over R^3 with |u| = 2 along the axis:
        // equals 2 pi^{3/2}
        let u = 2.0;
        let f = |r: f64, c: f64| {
            let d2 = r * r - 2.0 * r * c * u + u * u;
            (-d2, r * c)
        };
        let got = axial_log_integral(f, 3, 0.0, f64::INFINITY, &spec()).unwrap();
        let expect = (2.0f64).ln() + 1.5 * PI.ln();
        assert_eq!(got.sign, 1.0);
        assert!((got.log_abs - expect).abs() < 1e-8, "{}", got.log_abs);
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let gl = gauss_legendre(8);
        // exact for degree <= 15: int_{-1}^{1} x^10 dx = 2/11
        let s: f64 = gl.iter().map(|(x, w)| w * x.powi(10)).sum();
        assert!((s - 2.0 / 11.0).abs() < 1e-13);
        let total: f64 = gl.iter().map(|(_, w)| w).sum();
        assert!((total - 2.0).abs() < 1e-13);
    }

    #[test]
    fn product_directions_integrate_linear_functions() {
        let dirs = sphere_directions(3, &SphereRule::ProductRule { order: 8 }).unwrap();
        let total: f64 = dirs.iter().map(|(_, w)| w).sum();
        assert!((total - 4.0 * PI).abs() < 1e-10);
        let first: f64 = dirs.iter().map(|(d, w)| w * d[2]).sum();
        assert!(first.abs() < 1e-12);
    }
}
