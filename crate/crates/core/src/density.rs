//! Pointwise-evaluable nonnegative velocity densities.

/// Asymptotic log-density information, used to decide divergence of weighted
/// norms analytically instead of by quadrature overflow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Tail {
    /// log f(v) ~ poly_order * ln|v| - coeff * |v|^power as |v| -> infinity.
    Exponential {
        coeff: f64,
        power: f64,
        poly_order: f64,
    },
    /// f vanishes outside |v| <= radius.
    Compact { radius: f64 },
}

/// Symmetry structure a density declares so integrals can be reduced exactly.
#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    /// f(v) = g(|v|).
    Radial,
    /// f depends on (|v|, v . axis) only.
    Axial { axis: Vec<f64> },
    /// f(v) = g(v - center), axisymmetric about the center direction and
    /// supported in |v - center| <= radius (a displaced bump).
    OffsetBall { center: Vec<f64>, radius: f64 },
    /// No exploitable structure; handled by a sphere rule.
    General,
}

pub trait Density {
    fn dim(&self) -> usize;

    /// ln f(v); `NEG_INFINITY` outside the support.
    fn log_eval(&self, v: &[f64]) -> f64;

    fn shape(&self) -> Shape {
        Shape::General
    }

    /// Radial support interval in the shape's natural frame: about the origin
    /// for `Radial`/`Axial`/`General`, about the center for `OffsetBall`.
    fn radial_support(&self) -> (f64, f64) {
        (0.0, f64::INFINITY)
    }

    fn tail(&self) -> Option<Tail> {
        None
    }

    /// ln f at frame coordinates (r, c): radius and cosine to the shape axis.
    /// For `OffsetBall` the coordinates are local to the center. The default
    /// reconstructs a representative vector; implementors may override with a
    /// direct formula.
    fn log_eval_rc(&self, r: f64, c: f64) -> f64 {
        let v = self.frame_point(r, c);
        self.log_eval(&v)
    }

    /// A representative point at frame coordinates (r, c).
    fn frame_point(&self, r: f64, c: f64) -> Vec<f64> {
        let n = self.dim();
        let s = (1.0 - c * c).max(0.0).sqrt();
        match self.shape() {
            Shape::Radial | Shape::General => {
                let mut v = vec![0.0; n];
                v[0] = r;
                v
            }
            Shape::Axial { axis } => {
                let (e, perp) = crate::quad::orthonormal_complement(&axis);
                (0..n).map(|i| r * (c * e[i] + s * perp[i])).collect()
            }
            Shape::OffsetBall { center, .. } => {
                let (e, perp) = crate::quad::orthonormal_complement(&center);
                (0..n)
                    .map(|i| center[i] + r * (c * e[i] + s * perp[i]))
                    .collect()
            }
        }
    }
}

/// A density given by closures; the escape hatch for custom initial data and
/// for tests.
pub struct FnDensity<F: Fn(&[f64]) -> f64> {
    pub dim: usize,
    pub f: F,
    pub shape: Shape,
    pub support: (f64, f64),
    pub tail: Option<Tail>,
}

impl<F: Fn(&[f64]) -> f64> Density for FnDensity<F> {
    fn dim(&self) -> usize {
        self.dim
    }
    fn log_eval(&self, v: &[f64]) -> f64 {
        (self.f)(v)
    }
    fn shape(&self) -> Shape {
        self.shape.clone()
    }
    fn radial_support(&self) -> (f64, f64) {
        self.support
    }
    fn tail(&self) -> Option<Tail> {
        self.tail
    }
}
