//! Spatially inhomogeneous data
//! `(1+|x|)^{-omega} (1+|v|^2)^{-delta} e^{-alpha |v|^beta}` supported on the
//! moving shell `|x|^gamma <= |v| <= 2 |x|^gamma + 10`.

use crate::{FamilyError, Result};
use kinetic_core::special::sphere_area_log;
use kinetic_core::{Density, ExtReal, Lp, QuadratureSpec, Shape, Tail, Weight};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InhomFamily {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
    pub omega: f64,
    pub dim: usize,
}

impl InhomFamily {
    /// Strict constructor: gamma in [1/3, min(1/(1+beta), 1/2)], the range on
    /// which the transported moment bounds are provable.
    pub fn new(alpha: f64, beta: f64, gamma: f64, delta: f64, omega: f64, dim: usize) -> Result<Self> {
        let lo = 1.0 / 3.0;
        let hi = (1.0 / (1.0 + beta)).min(0.5);
        if !(gamma >= lo - 1e-12 && gamma <= hi + 1e-12) {
            return Err(FamilyError::BadGamma { gamma, lo, hi });
        }
        Self::new_relaxed(alpha, beta, gamma, delta, omega, dim)
    }

    /// Relaxed constructor: only gamma in [1/3, 1/2], which is what the
    /// radius-bracket inequalities and the first-iterate field bounds need.
    /// Exists for configurations probed beyond the provable regime.
    pub fn new_relaxed(
        alpha: f64,
        beta: f64,
        gamma: f64,
        delta: f64,
        omega: f64,
        dim: usize,
    ) -> Result<Self> {
        assert!(alpha > 0.0 && beta > 0.0 && delta >= 0.0 && omega >= 0.0 && dim >= 1);
        if !(gamma >= 1.0 / 3.0 - 1e-12 && gamma <= 0.5 + 1e-12) {
            return Err(FamilyError::BadGamma {
                gamma,
                lo: 1.0 / 3.0,
                hi: 0.5,
            });
        }
        Ok(InhomFamily {
            alpha,
            beta,
            gamma,
            delta,
            omega,
            dim,
        })
    }

    /// Support predicate: |x|^gamma <= |v| <= 2 |x|^gamma + 10, radially in
    /// both variables.
    pub fn in_support(&self, x_norm: f64, v_norm: f64) -> bool {
        let s = x_norm.powf(self.gamma);
        v_norm >= s && v_norm <= 2.0 * s + 10.0
    }

    /// Velocity support interval at spatial radius |x|.
    pub fn velocity_support(&self, x_norm: f64) -> (f64, f64) {
        let s = x_norm.powf(self.gamma);
        (s, 2.0 * s + 10.0)
    }

    /// ln f_0(x, v) through the radial coordinates.
    pub fn log_eval_radial(&self, x_norm: f64, v_norm: f64) -> f64 {
        if !self.in_support(x_norm, v_norm) {
            return f64::NEG_INFINITY;
        }
        -self.omega * x_norm.ln_1p() - self.delta * (v_norm * v_norm).ln_1p()
            - self.alpha * v_norm.powf(self.beta)
    }

    pub fn log_eval_phase(&self, x: &[f64], v: &[f64]) -> f64 {
        let xn = x.iter().map(|a| a * a).sum::<f64>().sqrt();
        let vn = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        self.log_eval_radial(xn, vn)
    }

    /// The velocity density at a fixed spatial point (radial in v).
    pub fn velocity_slice(&self, x_norm: f64) -> VelocitySlice {
        VelocitySlice {
            fam: *self,
            x_norm,
        }
    }

    /// The finiteness threshold for omega of || w f_0 ||_{L^q_v L^p_x},
    /// together with whether the threshold itself is admissible.
    pub fn omega_threshold(&self, p: Lp, q: Lp) -> (f64, bool) {
        let d = self.dim as f64;
        match (p, q) {
            (Lp::Infinity, Lp::Infinity) => (0.0, true),
            (Lp::Infinity, Lp::P(qf)) => (d * self.gamma / qf, true),
            (Lp::P(pf), Lp::Infinity) => (d / pf, false),
            (Lp::P(pf), Lp::P(qf)) => (d * (self.gamma / qf + 1.0 / pf), false),
        }
    }

    /// `|| w f_0 ||_{L^q_v L^p_x}` truncated to |x| <= r_x, by nested radial
    /// quadrature. With omega above its threshold the values stabilize as the
    /// truncation radius grows; below it they grow without bound.
    pub fn truncated_vx_norm(
        &self,
        w: &Weight,
        q: Lp,
        p: Lp,
        r_x: f64,
        spec: &QuadratureSpec,
    ) -> Result<ExtReal> {
        let d = self.dim;
        // inner x-norm at fixed speed: the x-support is
        // (max{v - 10, 0}/2)^{1/gamma} <= |x| <= v^{1/gamma}
        let x_range = |v: f64| -> (f64, f64) {
            let lo = (((v - 10.0).max(0.0)) / 2.0).powf(1.0 / self.gamma);
            let hi = v.powf(1.0 / self.gamma).min(r_x);
            (lo, hi)
        };
        let log_g = |v: f64| -self.delta * (v * v).ln_1p() - self.alpha * v.powf(self.beta);
        let inner = |v: f64| -> kinetic_core::Result<f64> {
            let (lo, hi) = x_range(v);
            if hi <= lo {
                return Ok(f64::NEG_INFINITY);
            }
            match p {
                Lp::Infinity => Ok(log_g(v) - self.omega * lo.ln_1p()),
                Lp::P(pf) => {
                    let integ = |r: f64| {
                        -pf * self.omega * r.ln_1p()
                            + if d > 1 { (d - 1) as f64 * r.ln() } else { 0.0 }
                    };
                    let l = sphere_area_log(d)
                        + kinetic_core::quad::integrate_log(integ, lo, hi, spec)?;
                    Ok(log_g(v) + l / pf)
                }
            }
        };
        // outer v-norm: speeds beyond 2 r_x^gamma + 10 see an empty x-ball
        let v_max = 2.0 * r_x.powf(self.gamma) + 10.0;
        match q {
            Lp::Infinity => {
                let mut best = f64::NEG_INFINITY;
                let m = 4096;
                for i in 0..=m {
                    let v = v_max * i as f64 / m as f64;
                    let val = w.log_eval(v) + inner(v)?;
                    if val > best {
                        best = val;
                    }
                }
                Ok(ExtReal::from_log(best))
            }
            Lp::P(qf) => {
                let err = std::cell::RefCell::new(None);
                let g = |v: f64| match inner(v) {
                    Ok(l) => qf * (w.log_eval(v) + l) + if d > 1 { (d - 1) as f64 * v.ln() } else { 0.0 },
                    Err(e) => {
                        err.borrow_mut().get_or_insert(e);
                        f64::NEG_INFINITY
                    }
                };
                let l = sphere_area_log(d)
                    + kinetic_core::quad::integrate_log(g, 0.0, v_max, spec)?;
                if let Some(e) = err.into_inner() {
                    return Err(e.into());
                }
                Ok(ExtReal::from_log(l / qf))
            }
        }
    }
}

/// Radial-in-v density f_0(x, .) at fixed spatial radius.
pub struct VelocitySlice {
    fam: InhomFamily,
    x_norm: f64,
}

impl Density for VelocitySlice {
    fn dim(&self) -> usize {
        self.fam.dim
    }
    fn log_eval(&self, v: &[f64]) -> f64 {
        let vn = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        self.fam.log_eval_radial(self.x_norm, vn)
    }
    fn shape(&self) -> Shape {
        Shape::Radial
    }
    fn radial_support(&self) -> (f64, f64) {
        self.fam.velocity_support(self.x_norm)
    }
    fn tail(&self) -> Option<Tail> {
        Some(Tail::Compact {
            radius: self.fam.velocity_support(self.x_norm).1,
        })
    }
    fn log_eval_rc(&self, r: f64, _c: f64) -> f64 {
        self.fam.log_eval_radial(self.x_norm, r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn default_family() -> InhomFamily {
        InhomFamily::new_relaxed(1.0, 2.0, 0.5, 0.0, 0.0, 3).unwrap()
    }

    #[test]
    fn gamma_domain_enforced() {
        assert!(matches!(
            InhomFamily::new(1.0, 2.0, 0.2, 0.0, 0.0, 3),
            Err(FamilyError::BadGamma { .. })
        ));
        // beta = 2 caps the strict interval at the single point 1/3
        assert!(InhomFamily::new(1.0, 2.0, 1.0 / 3.0, 0.0, 0.0, 3).is_ok());
        assert!(InhomFamily::new(1.0, 2.0, 0.4, 0.0, 0.0, 3).is_err());
        // the relaxed range still requires gamma <= 1/2
        assert!(InhomFamily::new_relaxed(1.0, 2.0, 0.5, 0.0, 0.0, 3).is_ok());
        assert!(InhomFamily::new_relaxed(1.0, 2.0, 0.6, 0.0, 0.0, 3).is_err());
    }

    #[test]
    fn origin_slice_is_a_gaussian_ball() {
        let fam = default_family();
        assert!(fam.in_support(0.0, 5.0));
        assert!(!fam.in_support(0.0, 10.5));
        let v = [1.0, 2.0, 0.0];
        let got = fam.log_eval_phase(&[0.0; 3], &v);
        assert!((got - (-5.0)).abs() < 1e-12);
    }

    #[test]
    fn origin_of_velocity_excluded_away_from_zero() {
        let fam = default_family();
        assert_eq!(
            fam.log_eval_phase(&[3.0, 0.0, 0.0], &[0.0; 3]),
            f64::NEG_INFINITY
        );
    }

    #[test]
    fn depends_only_on_radii() {
        let fam = default_family();
        let a = fam.log_eval_phase(&[4.0, 0.0, 0.0], &[0.0, 2.5, 0.0]);
        let b = fam.log_eval_phase(&[0.0, 0.0, 4.0], &[2.5, 0.0, 0.0]);
        assert_eq!(a, b);
    }

    #[test]
    fn omega_above_threshold_stabilizes() {
        // p = q = 2, gamma = 1/2, N = 3: threshold 3 (1/4 + 1/2) = 2.25
        let spec = QuadratureSpec::default();
        let w = Weight::exponential(1.0, 2.0);
        let good = InhomFamily::new_relaxed(1.0, 2.0, 0.5, 0.0, 3.0, 3).unwrap();
        let bad = InhomFamily::new_relaxed(1.0, 2.0, 0.5, 0.0, 1.0, 3).unwrap();
        let radii = [10.0, 40.0, 160.0, 640.0];
        let vals = |fam: &InhomFamily| -> Vec<f64> {
            radii
                .iter()
                .map(|&r| {
                    fam.truncated_vx_norm(&w, Lp::finite(2.0), Lp::finite(2.0), r, &spec)
                        .unwrap()
                        .log_value()
                        .unwrap()
                })
                .collect()
        };
        let g = vals(&good);
        let b = vals(&bad);
        // stabilization: successive increments shrink
        let g_last = g[3] - g[2];
        assert!(
            g_last.abs() < 0.02,
            "stabilizing norms still moved by {g_last}"
        );
        // divergence: increments stay substantial
        let b_last = b[3] - b[2];
        assert!(b_last > 0.2, "sub-threshold norms only moved by {b_last}");
    }
}
