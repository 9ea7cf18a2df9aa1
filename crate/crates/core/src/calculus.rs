//! Derivative, averaging kernel, integral and antiderivative.
//!
//! The derivative of a path is the diagonal of its kernel. The averaging
//! kernel `av_f(x, y)` is the mean value of `f` over `[x, y]` (and `f(x)` on
//! the diagonal); it lies in the ad-space and its diagonal is `f`, so it
//! inverts diagonal evaluation. The integral is `(b − a)·av_f(a, b)`.

use std::sync::Arc;

use crate::curve::{Curve, Polygon};
use crate::divdiff::{AdKernel, Path};
use crate::error::Result;
use crate::model::{Interval, Tolerances, VectorValue};
use crate::quadrature::{adaptive_mean, SUBINTERVAL_BUDGET};
use crate::SquareFn;

#[derive(Debug, Clone)]
enum MeanMethod {
    /// Every component is `c + x·d`: the mean over `[x, y]` is `c + ((x+y)/2)·d`.
    Affine(Vec<(f64, f64)>),
    /// Exact trapezoid sums over the pieces of a polygon.
    Polygonal(Polygon),
    Quadrature,
}

/// `av_f`: the mean value of `f` over `[x, y]`.
#[derive(Debug, Clone)]
pub struct AveragingKernel {
    source: Arc<Curve>,
    method: MeanMethod,
    quadrature_tol: f64,
}

impl AveragingKernel {
    fn new(source: &Curve, quadrature_tol: f64) -> Self {
        let method = match source {
            Curve::Symbolic(s) => s
                .components()
                .iter()
                .map(|e| e.as_affine())
                .collect::<Option<Vec<_>>>()
                .map_or(MeanMethod::Quadrature, MeanMethod::Affine),
            Curve::Polygonal(p) => MeanMethod::Polygonal(p.clone()),
            _ => MeanMethod::Quadrature,
        };
        Self {
            source: Arc::new(source.clone()),
            method,
            quadrature_tol,
        }
    }

    pub fn source(&self) -> &Curve {
        &self.source
    }

    pub fn domain(&self) -> Interval {
        self.source.domain()
    }

    pub fn dim(&self) -> usize {
        self.source.dim()
    }

    pub fn eval(&self, x: f64, y: f64) -> Result<VectorValue> {
        self.eval_with_error(x, y).map(|(v, _)| v)
    }

    /// Mean value together with the quadrature error estimate (zero for the
    /// closed-form cases).
    pub fn eval_with_error(&self, x: f64, y: f64) -> Result<(VectorValue, f64)> {
        let dom = self.domain();
        dom.check(x)?;
        dom.check(y)?;
        if x == y {
            return Ok((self.source.eval(x)?, 0.0));
        }
        let (a, b) = if x < y { (x, y) } else { (y, x) };
        match &self.method {
            MeanMethod::Affine(coeffs) => {
                let mid = (a + b) / 2.0;
                let v = coeffs.iter().map(|(c, d)| c + mid * d).collect();
                Ok((VectorValue::from_raw(v), 0.0))
            }
            MeanMethod::Polygonal(p) => Ok((polygon_mean(p, a, b), 0.0)),
            MeanMethod::Quadrature => {
                let est = adaptive_mean(
                    |t| self.source.eval(t),
                    a,
                    b,
                    self.quadrature_tol,
                    SUBINTERVAL_BUDGET,
                )?;
                Ok((VectorValue::from_raw(est.mean), est.error))
            }
        }
    }
}

/// Exact mean of a polygon over `[a, b]`, `a < b`, as a length-weighted
/// average of trapezoid midvalues.
fn polygon_mean(p: &Polygon, a: f64, b: f64) -> VectorValue {
    let (ia, ib) = (p.segment(a), p.segment(b));
    let fa = p.eval_in_segment(ia, a);
    let fb = p.eval_in_segment(ib, b);
    if ia == ib {
        return VectorValue::from_raw(fa.iter().zip(fb.iter()).map(|(u, v)| 0.5 * (u + v)).collect());
    }
    let bp = p.breakpoints();
    let vals = p.values();
    let mut knots: Vec<(f64, &[f64])> = Vec::with_capacity(ib - ia + 2);
    knots.push((a, fa.components()));
    for k in ia + 1..=ib {
        knots.push((bp[k], vals[k].components()));
    }
    knots.push((b, fb.components()));
    let length = b - a;
    let mut mean = vec![0.0; p.dim()];
    for w in knots.windows(2) {
        let ((p0, v0), (p1, v1)) = (w[0], w[1]);
        let weight = (p1 - p0) / length;
        for (m, (u, v)) in mean.iter_mut().zip(v0.iter().zip(v1)) {
            *m += weight * 0.5 * (u + v);
        }
    }
    VectorValue::from_raw(mean)
}

/// `av_f`. Closed form for affine and polygonal curves, adaptive quadrature
/// otherwise; `av` commutes with linear maps, so mapped curves reuse the
/// averaging kernel of their inner curve.
pub fn averaging_kernel(f: &Curve, tol: &Tolerances) -> Result<AdKernel> {
    tol.validate()?;
    Ok(match f {
        Curve::Mapped { map, inner } => AdKernel::Mapped {
            map: map.clone(),
            inner: Arc::new(averaging_kernel(inner, tol)?),
        },
        _ => AdKernel::Averaging(AveragingKernel::new(f, tol.quadrature_tol)),
    })
}

/// Kernel value with a quadrature error estimate.
pub(crate) fn eval_with_error(h: &AdKernel, x: f64, y: f64) -> Result<(VectorValue, f64)> {
    match h {
        AdKernel::Averaging(k) => k.eval_with_error(x, y),
        AdKernel::Mapped { map, inner } => {
            let (v, err) = eval_with_error(inner, x, y)?;
            Ok((VectorValue::from_raw(map.apply(&v)), err * map.frobenius()))
        }
        _ => Ok((h.eval(x, y)?, 0.0)),
    }
}

/// `Df`: the diagonal of the path's kernel.
pub fn derivative(p: &Path) -> Curve {
    Curve::DiagonalOf(Arc::new(p.kernel().clone()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Integral {
    pub value: VectorValue,
    pub error_estimate: f64,
}

/// `∫ₐᵇ f = (b − a)·av_f(a, b)`; `a > b` gives the negated integral.
pub fn integrate(f: &Curve, a: f64, b: f64, tol: &Tolerances) -> Result<Integral> {
    let dom = f.domain();
    dom.check(a)?;
    dom.check(b)?;
    if a == b {
        return Ok(Integral {
            value: VectorValue::zeros(f.dim()),
            error_estimate: 0.0,
        });
    }
    let av = averaging_kernel(f, tol)?;
    let (mean, err) = eval_with_error(&av, a, b)?;
    Ok(Integral {
        value: mean.scaled(b - a),
        error_estimate: (b - a).abs() * err,
    })
}

/// `F(x) = ∫ₐˣ f`, bundled with its kernel `av_f`.
pub fn antiderivative(f: &Curve, a: f64, tol: &Tolerances) -> Result<Path> {
    f.domain().check(a)?;
    let av = Arc::new(averaging_kernel(f, tol)?);
    let curve = Curve::Reconstructed {
        kernel: av.clone(),
        anchor: a,
        anchor_value: VectorValue::zeros(f.dim()),
    };
    Ok(Path::from_parts(curve, (*av).clone()))
}

/// `‖∫ₐᵇ Df − (f(b) − f(a))‖`.
pub fn newton_leibniz_residual(p: &Path, a: f64, b: f64, tol: &Tolerances) -> Result<f64> {
    let lhs = integrate(&derivative(p), a, b, tol)?.value;
    let rhs = p.curve().eval(b)?.sub(&p.curve().eval(a)?);
    Ok(lhs.distance(&rhs))
}
