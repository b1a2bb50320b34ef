//! Macroscopic fields and the local Maxwellian they parameterize.

use crate::density::{Density, Shape, Tail};
use crate::error::{CoreError, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Density, bulk velocity and temperature of a distribution. The mass is
/// carried as a log-magnitude: shell data at radius n has mass ~ e^{-alpha n^2},
/// far below the linear floor already for moderate n.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MacroFields {
    pub log_rho: f64,
    pub u: Vec<f64>,
    pub temp: f64,
}

impl MacroFields {
    pub fn new(log_rho: f64, u: Vec<f64>, temp: f64) -> Self {
        MacroFields { log_rho, u, temp }
    }

    /// Linear mass; may underflow for far-field data.
    pub fn rho(&self) -> f64 {
        self.log_rho.exp()
    }

    pub fn speed(&self) -> f64 {
        self.u.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Vacuum or cold states make the Maxwellian undefined.
    pub fn is_degenerate(&self) -> bool {
        self.log_rho == f64::NEG_INFINITY || !self.log_rho.is_finite() || self.temp <= 0.0
    }
}

/// The Gaussian sharing a distribution's first three moments.
#[derive(Debug, Clone, PartialEq)]
pub struct Maxwellian {
    pub fields: MacroFields,
    pub dim: usize,
}

impl Maxwellian {
    pub fn new(fields: MacroFields, dim: usize) -> Result<Self> {
        if fields.is_degenerate() {
            return Err(CoreError::DegenerateFields(format!(
                "log_rho = {}, temp = {}",
                fields.log_rho, fields.temp
            )));
        }
        if fields.u.len() != dim {
            return Err(CoreError::Unsupported(format!(
                "bulk velocity has {} components in dimension {}",
                fields.u.len(),
                dim
            )));
        }
        Ok(Maxwellian { fields, dim })
    }

    /// ln of rho (2 pi T)^{-N/2} exp(-|v - u|^2 / (2T)).
    pub fn log_eval(&self, v: &[f64]) -> f64 {
        let d2: f64 = v
            .iter()
            .zip(&self.fields.u)
            .map(|(a, b)| (a - b) * (a - b))
            .sum();
        self.log_eval_dist_sq(d2)
    }

    /// Same, given |v - u|^2 directly.
    pub fn log_eval_dist_sq(&self, dist_sq: f64) -> f64 {
        let t = self.fields.temp;
        self.fields.log_rho - 0.5 * self.dim as f64 * (2.0 * PI * t).ln() - dist_sq / (2.0 * t)
    }

    pub fn log_prefactor(&self) -> f64 {
        self.fields.log_rho - 0.5 * self.dim as f64 * (2.0 * PI * self.fields.temp).ln()
    }
}

impl Density for Maxwellian {
    fn dim(&self) -> usize {
        self.dim
    }

    fn log_eval(&self, v: &[f64]) -> f64 {
        Maxwellian::log_eval(self, v)
    }

    fn shape(&self) -> Shape {
        if self.fields.speed() == 0.0 {
            Shape::Radial
        } else {
            Shape::Axial {
                axis: self.fields.u.clone(),
            }
        }
    }

    fn tail(&self) -> Option<Tail> {
        Some(Tail::Exponential {
            coeff: 1.0 / (2.0 * self.fields.temp),
            power: 2.0,
            poly_order: 0.0,
        })
    }

    fn log_eval_rc(&self, r: f64, c: f64) -> f64 {
        let u = self.fields.speed();
        self.log_eval_dist_sq(r * r - 2.0 * r * c * u + u * u)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_gaussian_value() {
        let m = Maxwellian::new(MacroFields::new(0.0, vec![0.0; 3], 1.0), 3).unwrap();
        let lv = m.log_eval(&[0.0, 0.0, 0.0]);
        let expected = -1.5 * (2.0 * PI).ln();
        assert!((lv - expected).abs() < 1e-12);
        assert!((expected + 2.756_815_599_614_018).abs() < 1e-12);
        assert!((lv.exp() - 0.063_493_635_934_240_97).abs() < 1e-12);
    }

    #[test]
    fn radial_symmetry_about_u() {
        let m =
            Maxwellian::new(MacroFields::new(0.3, vec![1.0, -2.0, 0.5], 2.0), 3).unwrap();
        let w = [0.7, 0.1, -0.4];
        let plus: Vec<f64> = (0..3).map(|i| m.fields.u[i] + w[i]).collect();
        let minus: Vec<f64> = (0..3).map(|i| m.fields.u[i] - w[i]).collect();
        assert!((m.log_eval(&plus) - m.log_eval(&minus)).abs() < 1e-13);
    }

    #[test]
    fn linearity_in_mass() {
        let m1 = Maxwellian::new(MacroFields::new(0.0, vec![0.2, 0.0], 1.3), 2).unwrap();
        let m2 =
            Maxwellian::new(MacroFields::new((2.0f64).ln(), vec![0.2, 0.0], 1.3), 2).unwrap();
        let v = [0.9, -0.3];
        assert!((m2.log_eval(&v) - m1.log_eval(&v) - (2.0f64).ln()).abs() < 1e-13);
    }

    #[test]
    fn degenerate_states_rejected() {
        assert!(Maxwellian::new(MacroFields::new(f64::NEG_INFINITY, vec![0.0], 1.0), 1).is_err());
        assert!(Maxwellian::new(MacroFields::new(0.0, vec![0.0], 0.0), 1).is_err());
    }

    #[test]
    fn no_overflow_across_temperature_range() {
        for &t in &[1e-4, 1.0, 1e8] {
            let m = Maxwellian::new(MacroFields::new(0.0, vec![0.0; 3], t), 3).unwrap();
            let lv = m.log_eval(&[1.0e4, 0.0, 0.0]);
            assert!(lv.is_finite(), "T = {t} gave {lv}");
        }
    }
}
