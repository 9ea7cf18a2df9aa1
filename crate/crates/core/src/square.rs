//! Functions on the square `I × I`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linear::LinearMap;
use crate::model::{Interval, VectorValue};

/// A vector-valued function of two points of an interval.
pub trait SquareFn {
    fn domain(&self) -> Interval;
    fn dim(&self) -> usize;
    fn eval(&self, x: f64, y: f64) -> Result<VectorValue>;
}

type PairFn = dyn Fn(f64, f64) -> Vec<f64> + Send + Sync;

/// An arbitrary continuous function `I × I → Rⁿ`, with no cocycle structure
/// assumed. Used for probes of the plain square functor and as a foil for
/// residual checks.
#[derive(Clone)]
pub struct Field {
    domain: Interval,
    dim: usize,
    func: Arc<PairFn>,
}

impl Field {
    pub fn new<F>(domain: Interval, dim: usize, func: F) -> Self
    where
        F: Fn(f64, f64) -> Vec<f64> + Send + Sync + 'static,
    {
        Self {
            domain,
            dim,
            func: Arc::new(func),
        }
    }

    /// Forgets the cocycle structure of a kernel-like function.
    pub fn from_square_fn<K>(h: K) -> Self
    where
        K: SquareFn + Send + Sync + 'static,
    {
        let domain = h.domain();
        let dim = h.dim();
        Self::new(domain, dim, move |x, y| {
            h.eval(x, y)
                .map(VectorValue::into_inner)
                .unwrap_or_else(|_| vec![f64::NAN; dim])
        })
    }

    /// `x ↦ u ∘ self`.
    pub fn mapped(&self, u: &LinearMap) -> Result<Field> {
        if u.cols() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: u.cols(),
                found: self.dim,
            });
        }
        let inner = self.func.clone();
        let u = u.clone();
        Ok(Self {
            domain: self.domain,
            dim: u.rows(),
            func: Arc::new(move |x, y| u.apply(&inner(x, y))),
        })
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("domain", &self.domain)
            .field("dim", &self.dim)
            .finish_non_exhaustive()
    }
}

impl SquareFn for Field {
    fn domain(&self) -> Interval {
        self.domain
    }

    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, x: f64, y: f64) -> Result<VectorValue> {
        self.domain.check(x)?;
        self.domain.check(y)?;
        let v = (self.func)(x, y);
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: v.len(),
            });
        }
        VectorValue::new(v).map_err(|_| Error::Domain {
            node: "field".into(),
            at: x,
            reason: format!("non-finite value at ({x}, {y})"),
        })
    }
}

impl<K: SquareFn + ?Sized> SquareFn for &K {
    fn domain(&self) -> Interval {
        (**self).domain()
    }

    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn eval(&self, x: f64, y: f64) -> Result<VectorValue> {
        (**self).eval(x, y)
    }
}
