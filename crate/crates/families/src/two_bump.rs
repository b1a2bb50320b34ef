//! Two-component data: a flat bump on the unit ball carrying the temperature
//! mass plus a tiny exponentially weighted bump displaced to distance n. The
//! mean drifts like n while the temperature stays near the target T.

use crate::{FamilyError, MacroCheck, Result};
use kinetic_core::logspace::log_add_exp;
use kinetic_core::special::ball_volume_log;
use kinetic_core::{
    combine_raw, raw_moments, CoreError, Density, ExtReal, Lp, MacroFields, QuadratureSpec,
    Shape, Tail, Weight,
};

#[derive(Debug, Clone)]
pub struct TwoBumpFamily {
    pub alpha: f64,
    /// Target temperature T of the construction.
    pub temp: f64,
    /// The weight exponent alpha' this family is built to defeat; recorded
    /// constraint: 0 < alpha' T < 1/2 and alpha'/(1 - 2 T alpha') > alpha.
    pub alpha_prime: f64,
    pub p: Lp,
    pub n: f64,
    pub dim: usize,
    /// ln A'_{n,p}.
    pub log_norm_const: f64,
    /// ln of the displaced-bump mass, fixed at construction by quadrature.
    pub log_small_mass: f64,
    /// ln of the flat-bump height N T/(n^2 |B_N(1)|) times the small mass.
    pub log_flat_height: f64,
}

impl TwoBumpFamily {
    pub fn new(alpha: f64, temp: f64, alpha_prime: f64, p: Lp, n: f64, dim: usize) -> Result<Self> {
        if !(alpha_prime * temp > 0.0 && alpha_prime * temp < 0.5) {
            return Err(FamilyError::BadTemperature(format!(
                "alpha' T = {}",
                alpha_prime * temp
            )));
        }
        if alpha_prime / (1.0 - 2.0 * temp * alpha_prime) <= alpha {
            return Err(FamilyError::BadTemperature(format!(
                "alpha'/(1 - 2 T alpha') = {} <= alpha = {alpha}",
                alpha_prime / (1.0 - 2.0 * temp * alpha_prime)
            )));
        }
        assert!(n >= 1.0 && dim >= 1);
        let log_norm_const = match p {
            Lp::Infinity => 0.0,
            Lp::P(pf) => -(ball_volume_log(dim) + 2.0 * dim as f64 * n.ln()) / pf,
        };
        let mut fam = TwoBumpFamily {
            alpha,
            temp,
            alpha_prime,
            p,
            n,
            dim,
            log_norm_const,
            log_small_mass: f64::NEG_INFINITY,
            log_flat_height: f64::NEG_INFINITY,
        };
        let spec = QuadratureSpec::default();
        let raw = raw_moments(&fam.small_bump(), &spec)?;
        fam.log_small_mass = raw.log_mass;
        fam.log_flat_height = (dim as f64 * temp / (n * n)).ln() - ball_volume_log(dim)
            + fam.log_small_mass;
        Ok(fam)
    }

    /// Bump center (0, ..., 0, -n).
    pub fn center(&self) -> Vec<f64> {
        let mut c = vec![0.0; self.dim];
        c[self.dim - 1] = -self.n;
        c
    }

    pub fn bump_radius(&self) -> f64 {
        1.0 / (self.n * self.n)
    }

    /// The components have disjoint supports once the bump clears the unit ball.
    pub fn components_disjoint(&self) -> bool {
        self.n - self.bump_radius() > 1.0
    }

    /// The flat component on the unit ball.
    pub fn flat_bump(&self) -> FlatBump {
        FlatBump {
            dim: self.dim,
            log_height: self.log_flat_height,
        }
    }

    /// The displaced exponential bump, integrated in its own local frame:
    /// its radius is far below any global grid resolution.
    pub fn small_bump(&self) -> SmallBump {
        SmallBump {
            dim: self.dim,
            alpha: self.alpha,
            log_norm_const: self.log_norm_const,
            center: self.center(),
            radius: self.bump_radius(),
        }
    }

    /// Macro-fields by componentwise quadrature in local frames.
    pub fn macro_fields(&self, spec: &QuadratureSpec) -> Result<MacroFields> {
        let flat = raw_moments(&self.flat_bump(), spec)?;
        let bump = raw_moments(&self.small_bump(), spec)?;
        let raw = combine_raw(&[flat, bump], self.dim);
        Ok(kinetic_core::moments::assemble(raw, self.dim, spec)?)
    }

    /// Weighted Lp norm by disjoint component decomposition.
    pub fn weighted_norm(&self, w: &Weight, p: Lp, spec: &QuadratureSpec) -> Result<ExtReal> {
        if !self.components_disjoint() {
            return Err(FamilyError::Core(CoreError::Unsupported(
                "two-bump components overlap for this n".into(),
            )));
        }
        let a = kinetic_core::weighted_lp_norm(&self.flat_bump(), w, p, spec)?;
        let b = kinetic_core::weighted_lp_norm(&self.small_bump(), w, p, spec)?;
        Ok(match p {
            Lp::Infinity => a.max(&b),
            Lp::P(pf) => a.powf(pf).add(&b.powf(pf)).powf(1.0 / pf),
        })
    }

    /// Upper bound e^{alpha} N T / n^2 + 1 on the alpha-weighted norm.
    pub fn weighted_norm_bound_log(&self) -> f64 {
        log_add_exp(
            self.alpha + (self.dim as f64 * self.temp / (self.n * self.n)).ln(),
            0.0,
        )
    }

    /// Analytic macro-field targets: the mass prediction with its finite-n
    /// envelope, the drift bracket, and the temperature bracket.
    pub fn macro_checks(&self, mf: &MacroFields) -> Vec<MacroCheck> {
        let d = self.dim as f64;
        let (n, t) = (self.n, self.temp);
        let q = d * t / (n * n);
        // rho ~ (|B| A' / n^{2N}) (N T / n^2 + 1) e^{-alpha n^2}; the bump mass
        // carries e^{-alpha (n +- 1/n^2)^2} envelopes
        let log_rho_pred = ball_volume_log(self.dim) + self.log_norm_const
            - 2.0 * d * n.ln()
            + q.ln_1p()
            - self.alpha * n * n;
        let rho_env = self.alpha * (2.0 / n + n.powi(-4));
        let drift = (d * t * (n + 1.0) + 1.0) / (d * t + n * n);
        // T bracket from mass-weighted second moments about the bump center
        let t_lo = ((q * (n - 1.0) * (n - 1.0) / (1.0 + q)) - drift * drift) / d;
        let t_hi = (q * (n + 1.0) * (n + 1.0) + n.powi(-4)) / ((1.0 + q) * d);
        vec![
            MacroCheck {
                label: "log rho - log rho_pred".into(),
                observed: mf.log_rho - log_rho_pred,
                target_lo: -rho_env,
                target_hi: rho_env,
            },
            MacroCheck {
                label: "|u|".into(),
                observed: mf.speed(),
                target_lo: n - drift,
                target_hi: n + drift,
            },
            MacroCheck {
                label: "T".into(),
                observed: mf.temp,
                target_lo: t_lo,
                target_hi: t_hi,
            },
        ]
    }
}

/// Constant-height component on the unit ball.
pub struct FlatBump {
    dim: usize,
    log_height: f64,
}

impl Density for FlatBump {
    fn dim(&self) -> usize {
        self.dim
    }
    fn log_eval(&self, v: &[f64]) -> f64 {
        if v.iter().map(|x| x * x).sum::<f64>() <= 1.0 {
            self.log_height
        } else {
            f64::NEG_INFINITY
        }
    }
    fn shape(&self) -> Shape {
        Shape::Radial
    }
    fn radial_support(&self) -> (f64, f64) {
        (0.0, 1.0)
    }
    fn tail(&self) -> Option<Tail> {
        Some(Tail::Compact { radius: 1.0 })
    }
    fn log_eval_rc(&self, r: f64, _c: f64) -> f64 {
        if r <= 1.0 {
            self.log_height
        } else {
            f64::NEG_INFINITY
        }
    }
}

/// The displaced bump `A' e^{-alpha |v|^2} 1_{|v - center| <= radius}`.
pub struct SmallBump {
    dim: usize,
    alpha: f64,
    log_norm_const: f64,
    center: Vec<f64>,
    radius: f64,
}

impl Density for SmallBump {
    fn dim(&self) -> usize {
        self.dim
    }
    fn log_eval(&self, v: &[f64]) -> f64 {
        let d2: f64 = v
            .iter()
            .zip(&self.center)
            .map(|(a, b)| (a - b) * (a - b))
            .sum();
        if d2 <= self.radius * self.radius {
            self.log_norm_const - self.alpha * v.iter().map(|x| x * x).sum::<f64>()
        } else {
            f64::NEG_INFINITY
        }
    }
    fn shape(&self) -> Shape {
        Shape::OffsetBall {
            center: self.center.clone(),
            radius: self.radius,
        }
    }
    fn radial_support(&self) -> (f64, f64) {
        (0.0, self.radius)
    }
    fn tail(&self) -> Option<Tail> {
        let c: f64 = self.center.iter().map(|x| x * x).sum::<f64>().sqrt();
        Some(Tail::Compact {
            radius: c + self.radius,
        })
    }
    /// Local frame: |v|^2 = c0^2 + 2 c0 rho t + rho^2 with t the cosine to the
    /// outward center direction.
    fn log_eval_rc(&self, rho: f64, t: f64) -> f64 {
        if rho > self.radius {
            return f64::NEG_INFINITY;
        }
        let c0: f64 = self.center.iter().map(|x| x * x).sum::<f64>().sqrt();
        self.log_norm_const - self.alpha * (c0 * c0 + 2.0 * c0 * rho * t + rho * rho)
    }
}

/// Pointwise evaluator of the full two-component density. Moments and norms
/// go through the component decomposition, not through this evaluator.
impl Density for TwoBumpFamily {
    fn dim(&self) -> usize {
        self.dim
    }
    fn log_eval(&self, v: &[f64]) -> f64 {
        log_add_exp(
            self.flat_bump().log_eval(v),
            self.small_bump().log_eval(v),
        )
    }
    fn shape(&self) -> Shape {
        Shape::Axial {
            axis: self.center(),
        }
    }
    fn radial_support(&self) -> (f64, f64) {
        (0.0, self.n + self.bump_radius())
    }
    fn tail(&self) -> Option<Tail> {
        Some(Tail::Compact {
            radius: self.n + self.bump_radius(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use kinetic_core::moments;

    fn family() -> TwoBumpFamily {
        TwoBumpFamily::new(1.0, 0.2, 2.0, Lp::Infinity, 30.0, 3).unwrap()
    }

    #[test]
    fn regime_preconditions_enforced() {
        // alpha' T >= 1/2
        assert!(matches!(
            TwoBumpFamily::new(1.0, 0.3, 2.0, Lp::Infinity, 10.0, 3),
            Err(FamilyError::BadTemperature(_))
        ));
        // alpha'/(1 - 2 T alpha') <= alpha
        assert!(matches!(
            TwoBumpFamily::new(10.0, 0.01, 1.0, Lp::Infinity, 10.0, 3),
            Err(FamilyError::BadTemperature(_))
        ));
    }

    #[test]
    fn flat_component_is_isotropic() {
        let fam = family();
        let mf = moments(&fam.flat_bump(), &QuadratureSpec::default()).unwrap();
        assert!(mf.speed() < 1e-12, "flat bump drift {}", mf.speed());
    }

    #[test]
    fn macro_fields_near_targets() {
        let fam = family();
        let mf = fam.macro_fields(&QuadratureSpec::default()).unwrap();
        for c in fam.macro_checks(&mf) {
            assert!(
                c.holds(),
                "{}: observed {} not in [{}, {}]",
                c.label,
                c.observed,
                c.target_lo,
                c.target_hi
            );
        }
        // temperature within 10% of the target
        assert!((mf.temp / fam.temp - 1.0).abs() < 0.1, "T_n = {}", mf.temp);
        // drift near n
        assert!((mf.speed() - 30.0).abs() < 0.1);
    }

    #[test]
    fn weighted_norm_bound_holds() {
        for pf in [Lp::finite(1.0), Lp::finite(2.0), Lp::Infinity] {
            for n in [5.0, 12.0, 30.0] {
                let fam = TwoBumpFamily::new(1.0, 0.2, 2.0, pf, n, 3).unwrap();
                let w = Weight::exponential(fam.alpha, 2.0);
                let norm = fam.weighted_norm(&w, pf, &QuadratureSpec::default()).unwrap();
                let bound = fam.weighted_norm_bound_log();
                assert!(
                    norm.log_value().unwrap() <= bound + 1e-9,
                    "n = {n}: {} > {bound}",
                    norm.log_value().unwrap()
                );
            }
        }
    }
}
