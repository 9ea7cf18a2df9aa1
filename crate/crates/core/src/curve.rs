//! Continuous curves `I → Rⁿ` in their various representations.

use std::sync::Arc;

use crate::divdiff::AdKernel;
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::linear::LinearMap;
use crate::model::{Interval, VectorValue};
use crate::parse::parse_curve;
use crate::SquareFn;

/// A curve given by one expression per component.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolicCurve {
    components: Vec<Expr>,
    domain: Interval,
}

impl SymbolicCurve {
    pub fn new(components: Vec<Expr>, domain: Interval) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::Usage("a curve needs at least one component".into()));
        }
        Ok(Self { components, domain })
    }

    pub fn components(&self) -> &[Expr] {
        &self.components
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }
}

/// A continuous piecewise-affine curve through `(breakpoints[i], values[i])`.
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon {
    breakpoints: Vec<f64>,
    values: Vec<VectorValue>,
}

impl Polygon {
    pub fn new(breakpoints: Vec<f64>, values: Vec<VectorValue>) -> Result<Self> {
        if breakpoints.len() < 2 {
            return Err(Error::Usage("a polygon needs at least two breakpoints".into()));
        }
        if breakpoints.len() != values.len() {
            return Err(Error::DimensionMismatch {
                expected: breakpoints.len(),
                found: values.len(),
            });
        }
        if breakpoints.iter().any(|b| !b.is_finite()) || breakpoints.windows(2).any(|w| w[0] >= w[1])
        {
            return Err(Error::Usage(
                "polygon breakpoints must be finite and strictly increasing".into(),
            ));
        }
        let dim = values[0].dim();
        if let Some(v) = values.iter().find(|v| v.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: v.dim(),
            });
        }
        Ok(Self {
            breakpoints,
            values,
        })
    }

    /// Piecewise-linear interpolant of `f` at the given breakpoints.
    pub fn interpolate(f: &Curve, breakpoints: Vec<f64>) -> Result<Self> {
        let values = breakpoints
            .iter()
            .map(|&b| f.eval(b))
            .collect::<Result<Vec<_>>>()?;
        Self::new(breakpoints, values)
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[VectorValue] {
        &self.values
    }

    pub fn dim(&self) -> usize {
        self.values[0].dim()
    }

    pub fn domain(&self) -> Interval {
        Interval::new(self.breakpoints[0], self.breakpoints[self.breakpoints.len() - 1])
            .expect("breakpoints are strictly increasing")
    }

    /// Index of the segment `[b_i, b_{i+1}]` used to evaluate at `x`.
    pub(crate) fn segment(&self, x: f64) -> usize {
        let last = self.breakpoints.len() - 2;
        self.breakpoints.partition_point(|&b| b <= x).saturating_sub(1).min(last)
    }

    pub(crate) fn eval_in_segment(&self, i: usize, x: f64) -> VectorValue {
        let (b0, b1) = (self.breakpoints[i], self.breakpoints[i + 1]);
        let w = (x - b0) / (b1 - b0);
        let (v0, v1) = (&self.values[i], &self.values[i + 1]);
        VectorValue::from_raw(
            v0.iter()
                .zip(v1.iter())
                .map(|(a, b)| a + w * (b - a))
                .collect(),
        )
    }

    pub fn eval(&self, x: f64) -> Result<VectorValue> {
        self.domain().check(x)?;
        Ok(self.eval_in_segment(self.segment(x), x))
    }
}

/// An element of C(I, Rⁿ).
#[derive(Debug, Clone)]
pub enum Curve {
    Symbolic(SymbolicCurve),
    Polygonal(Polygon),
    /// `x ↦ h(x, x)`.
    DiagonalOf(Arc<AdKernel>),
    /// `x ↦ u(f(x))`.
    Mapped { map: LinearMap, inner: Arc<Curve> },
    /// `y ↦ f0 + (y − x0)·h(x0, y)`.
    Reconstructed {
        kernel: Arc<AdKernel>,
        anchor: f64,
        anchor_value: VectorValue,
    },
}

impl Curve {
    /// Parses curve text (an expression or `[e1, e2, …]`) on `domain`.
    pub fn parse(text: &str, domain: Interval) -> Result<Self> {
        Ok(Curve::Symbolic(SymbolicCurve::new(parse_curve(text)?, domain)?))
    }

    pub fn symbolic(components: Vec<Expr>, domain: Interval) -> Result<Self> {
        Ok(Curve::Symbolic(SymbolicCurve::new(components, domain)?))
    }

    pub fn domain(&self) -> Interval {
        match self {
            Curve::Symbolic(s) => s.domain,
            Curve::Polygonal(p) => p.domain(),
            Curve::DiagonalOf(h) => h.domain(),
            Curve::Mapped { inner, .. } => inner.domain(),
            Curve::Reconstructed { kernel, .. } => kernel.domain(),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Curve::Symbolic(s) => s.components.len(),
            Curve::Polygonal(p) => p.dim(),
            Curve::DiagonalOf(h) => h.dim(),
            Curve::Mapped { map, .. } => map.rows(),
            Curve::Reconstructed { anchor_value, .. } => anchor_value.dim(),
        }
    }

    pub fn eval(&self, x: f64) -> Result<VectorValue> {
        match self {
            Curve::Symbolic(s) => {
                s.domain.check(x)?;
                let values = s
                    .components
                    .iter()
                    .map(|e| e.eval(x))
                    .collect::<Result<Vec<_>>>()?;
                Ok(VectorValue::from_raw(values))
            }
            Curve::Polygonal(p) => p.eval(x),
            Curve::DiagonalOf(h) => h.eval(x, x),
            Curve::Mapped { map, inner } => {
                Ok(VectorValue::from_raw(map.apply(&inner.eval(x)?)))
            }
            Curve::Reconstructed {
                kernel,
                anchor,
                anchor_value,
            } => {
                let slope = kernel.eval(*anchor, x)?;
                let dx = x - anchor;
                Ok(VectorValue::from_raw(
                    anchor_value
                        .iter()
                        .zip(slope.iter())
                        .map(|(f0, h)| f0 + dx * h)
                        .collect(),
                ))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn unit() -> Interval {
        Interval::new(0.0, 1.0).unwrap()
    }

    #[test]
    fn polygonal_interpolation() {
        let p = Polygon::new(
            vec![0.0, 1.0],
            vec![VectorValue::scalar(0.0), VectorValue::scalar(2.0)],
        )
        .unwrap();
        let c = Curve::Polygonal(p);
        assert_eq!(c.eval(0.5).unwrap().components(), &[1.0]);
        assert_eq!(c.eval(0.0).unwrap().components(), &[0.0]);
        assert_eq!(c.eval(1.0).unwrap().components(), &[2.0]);
        assert!(matches!(c.eval(1.5), Err(Error::OutOfDomain { .. })));
    }

    #[test]
    fn polygon_hits_breakpoint_values_exactly() {
        let b = vec![0.0, 0.3, 0.7, 1.0];
        let vals: Vec<VectorValue> = [1.0, -2.0, 5.5, 0.25]
            .iter()
            .map(|&v| VectorValue::scalar(v))
            .collect();
        let p = Polygon::new(b.clone(), vals.clone()).unwrap();
        for (x, v) in b.iter().zip(&vals) {
            assert_eq!(&p.eval(*x).unwrap(), v);
        }
    }

    #[test]
    fn symbolic_components() {
        let c = Curve::parse("[sin(x), cos(x)]", unit()).unwrap();
        assert_eq!(c.dim(), 2);
        assert_eq!(c.eval(0.0).unwrap().components(), &[0.0, 1.0]);
        assert!(c.eval(-0.1).is_err());
    }

    #[test]
    fn mapped_applies_matrix() {
        let dom = Interval::new(0.0, 5.0).unwrap();
        let f = Curve::parse("x", dom).unwrap();
        let u = LinearMap::from_rows(&[&[2.0]]).unwrap();
        let c = Curve::Mapped {
            map: u,
            inner: Arc::new(f),
        };
        assert_eq!(c.eval(3.0).unwrap().components(), &[6.0]);
    }

    #[test]
    fn polygon_agrees_with_affine_expression() {
        let dom = Interval::new(-2.0, 3.0).unwrap();
        let sym = Curve::parse("1.5 - 0.75*x", dom).unwrap();
        let poly = Curve::Polygonal(Polygon::interpolate(&sym, vec![-2.0, 3.0]).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let x = rng.gen_range(-2.0..=3.0);
            let a = sym.eval(x).unwrap()[0];
            let b = poly.eval(x).unwrap()[0];
            assert!((a - b).abs() <= 4.0 * f64::EPSILON * (1.0 + a.abs()), "{x}: {a} vs {b}");
        }
    }

    #[test]
    fn polygon_validation() {
        let v = |x: f64| VectorValue::scalar(x);
        assert!(Polygon::new(vec![0.0], vec![v(0.0)]).is_err());
        assert!(Polygon::new(vec![0.0, 0.0], vec![v(0.0), v(1.0)]).is_err());
        assert!(Polygon::new(vec![0.0, 1.0], vec![v(0.0)]).is_err());
        assert!(Polygon::new(
            vec![0.0, 1.0],
            vec![v(0.0), VectorValue::new(vec![1.0, 2.0]).unwrap()]
        )
        .is_err());
    }
}
