//! Operations on the ad-space: residuals of its defining identities, diagonal
//! evaluation, reconstruction of a curve from a kernel, gluing along a shared
//! endpoint, and numerical path detection.

use std::sync::Arc;

use serde::Serialize;

use crate::curve::Curve;
use crate::divdiff::AdKernel;
use crate::error::{Error, Result};
use crate::model::{make_grid, Interval, VectorValue};
use crate::SquareFn;

/// `max ‖(y−x)h(x,y) + (z−y)h(y,z) + (x−z)h(z,x)‖` over the triples.
pub fn cocycle_residual<K: SquareFn + ?Sized>(h: &K, triples: &[(f64, f64, f64)]) -> Result<f64> {
    let mut worst = 0.0_f64;
    for &(x, y, z) in triples {
        let (hxy, hyz, hzx) = (h.eval(x, y)?, h.eval(y, z)?, h.eval(z, x)?);
        let r = (0..hxy.dim())
            .map(|c| {
                let s = (y - x) * hxy[c] + (z - y) * hyz[c] + (x - z) * hzx[c];
                s * s
            })
            .sum::<f64>()
            .sqrt();
        worst = worst.max(r);
    }
    Ok(worst)
}

/// `max ‖h(x,y) − h(y,x)‖` over the pairs.
pub fn symmetry_residual<K: SquareFn + ?Sized>(h: &K, pairs: &[(f64, f64)]) -> Result<f64> {
    let mut worst = 0.0_f64;
    for &(x, y) in pairs {
        worst = worst.max(h.eval(x, y)?.distance(&h.eval(y, x)?));
    }
    Ok(worst)
}

/// The curve `x ↦ h(x, x)`.
pub fn diagonal_eval(h: &AdKernel) -> Curve {
    Curve::DiagonalOf(Arc::new(h.clone()))
}

/// The curve `y ↦ f0 + (y − x0)·h(x0, y)`.
pub fn reconstruct_from_kernel(h: &AdKernel, x0: f64, f0: VectorValue) -> Result<Curve> {
    h.domain().check(x0)?;
    if f0.dim() != h.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            found: f0.dim(),
        });
    }
    Ok(Curve::Reconstructed {
        kernel: Arc::new(h.clone()),
        anchor: x0,
        anchor_value: f0,
    })
}

/// Kernel on `[a, c]²` assembled from kernels on `[a, b]²` and `[b, c]²`.
///
/// Inside either block the input kernel is returned unchanged. For
/// `x < b < y` the value is `((b − x)·h(x, b) + (y − b)·k(b, y)) / (y − x)`,
/// the divided difference of the curve reconstructed through `b`.
#[derive(Debug, Clone)]
pub struct GluedKernel {
    left: Arc<AdKernel>,
    right: Arc<AdKernel>,
    junction: f64,
    domain: Interval,
}

impl GluedKernel {
    pub fn left(&self) -> &AdKernel {
        &self.left
    }

    pub fn right(&self) -> &AdKernel {
        &self.right
    }

    pub fn junction(&self) -> f64 {
        self.junction
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn dim(&self) -> usize {
        self.left.dim()
    }

    pub fn eval(&self, x: f64, y: f64) -> Result<VectorValue> {
        self.domain.check(x)?;
        self.domain.check(y)?;
        let b = self.junction;
        if x <= b && y <= b {
            return self.left.eval(x, y);
        }
        if x >= b && y >= b {
            return self.right.eval(x, y);
        }
        let (p, q) = if x < y { (x, y) } else { (y, x) };
        let h = self.left.eval(p, b)?;
        let k = self.right.eval(b, q)?;
        let (wl, wr) = ((b - p) / (q - p), (q - b) / (q - p));
        Ok(VectorValue::from_raw(
            h.iter().zip(k.iter()).map(|(h, k)| wl * h + wr * k).collect(),
        ))
    }
}

/// Glues `h` on `[a, b]²` to `k` on `[b, c]²`; requires `‖h(b,b) − k(b,b)‖ ≤ tol`.
pub fn glue(h: &AdKernel, k: &AdKernel, tol: f64) -> Result<AdKernel> {
    let (dh, dk) = (h.domain(), k.domain());
    if dh.hi() != dk.lo() {
        return Err(Error::NotAdjacent {
            left_lo: dh.lo(),
            left_hi: dh.hi(),
            right_lo: dk.lo(),
            right_hi: dk.hi(),
        });
    }
    if h.dim() != k.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            found: k.dim(),
        });
    }
    let b = dh.hi();
    let gap = h.eval(b, b)?.distance(&k.eval(b, b)?);
    if gap > tol {
        return Err(Error::GlueMismatch { junction: b, gap });
    }
    Ok(AdKernel::Glued(GluedKernel {
        left: Arc::new(h.clone()),
        right: Arc::new(k.clone()),
        junction: b,
        domain: Interval::new(dh.lo(), dk.hi())?,
    }))
}

/// Outcome of the numerical path test.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PathReport {
    pub is_path: bool,
    pub oscillation: f64,
    pub witness_point: Option<f64>,
}

/// Probe points used by [`check_path`].
pub const PATH_PROBES: usize = 101;
const FINEST_SCALE: i32 = 40;
const COARSEST_SCALE: i32 = 8;
const TAIL: usize = 8;

/// Spread of the difference quotients at `x` over the finest usable scales.
///
/// For each `δ = 2^−k`, `k = 8…40`, the symmetric, right and left quotients
/// are formed. A quotient is usable when its rounding noise
/// `2ε·size/(b − a)` stays below `tol/8`, where `size` is the larger of the
/// sampled sup norm of `f` and `|f(a)|`, `|f(b)|`; the spread is taken
/// over the last [`TAIL`] usable slots. Pairs that leave the domain keep their
/// slot but contribute no value, so the window spans the same range of
/// scales at the endpoints as in the interior.
fn quotient_spread(f: &Curve, x: f64, dom: Interval, size: f64, tol: f64) -> Result<f64> {
    let fx = f.eval(x)?;
    let mut usable: Vec<Option<Vec<f64>>> = Vec::new();
    for k in COARSEST_SCALE..=FINEST_SCALE {
        let delta = 2f64.powi(-k);
        for (a, b) in [(x - delta, x + delta), (x, x + delta), (x - delta, x)] {
            if a < dom.lo() || b > dom.hi() {
                usable.push(None);
                continue;
            }
            let fa = if a == x { fx.clone() } else { f.eval(a)? };
            let fb = if b == x { fx.clone() } else { f.eval(b)? };
            let width = b - a;
            let noisy = fa.iter().zip(fb.iter()).any(|(u, v)| {
                2.0 * f64::EPSILON * size.max(u.abs()).max(v.abs()) / width > tol / 8.0
            });
            if noisy {
                continue;
            }
            usable.push(Some(fa.iter().zip(fb.iter()).map(|(u, v)| (v - u) / width).collect()));
        }
    }
    let tail: Vec<&Vec<f64>> = usable[usable.len().saturating_sub(TAIL)..].iter().flatten().collect();
    let Some(first) = tail.first() else {
        return Ok(0.0);
    };
    let spread = (0..first.len())
        .map(|c| {
            let (lo, hi) = tail
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), q| (lo.min(q[c]), hi.max(q[c])));
            hi - lo
        })
        .fold(0.0, f64::max);
    Ok(spread)
}

/// Decides numerically whether `f` is a path: the difference quotients must
/// settle (oscillation ≤ `tol`) at every one of [`PATH_PROBES`] probe points.
/// Kinks smaller than `tol` at the probed scales go undetected.
pub fn check_path(f: &Curve, tol: f64) -> Result<PathReport> {
    let dom = f.domain();
    let probes = make_grid(dom, PATH_PROBES)?;
    let mut size = 0.0_f64;
    for &x in probes.points() {
        size = f.eval(x)?.iter().fold(size, |m, v| m.max(v.abs()));
    }
    let mut worst = (0.0_f64, dom.lo());
    for &x in probes.points() {
        let spread = quotient_spread(f, x, dom, size, tol)?;
        if spread > worst.0 {
            worst = (spread, x);
        }
    }
    let is_path = worst.0 <= tol;
    Ok(PathReport {
        is_path,
        oscillation: worst.0,
        witness_point: (!is_path).then_some(worst.1),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divdiff::build_kernel;
    use crate::square::Field;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn iv(lo: f64, hi: f64) -> Interval {
        Interval::new(lo, hi).unwrap()
    }

    fn kernel(text: &str, lo: f64, hi: f64) -> AdKernel {
        build_kernel(&Curve::parse(text, iv(lo, hi)).unwrap()).unwrap()
    }

    #[test]
    fn cocycle_examples() {
        let c = Field::new(iv(0.0, 1.0), 1, |_, _| vec![2.5]);
        assert_eq!(cocycle_residual(&c, &[(0.25, 0.75, 0.5), (0.0, 1.0, 0.5)]).unwrap(), 0.0);

        let sq = kernel("x^2", 0.0, 1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let triples: Vec<_> = (0..1000).map(|_| (rng.gen(), rng.gen(), rng.gen())).collect();
        assert!(cocycle_residual(&sq, &triples).unwrap() <= 1e-15);

        let xy = Field::new(iv(0.0, 1.0), 1, |x, y| vec![x * y]);
        assert_eq!(cocycle_residual(&xy, &[(0.0, 0.5, 1.0)]).unwrap(), 0.25);
    }

    #[test]
    fn symmetry_examples() {
        let sq = kernel("x^2", 0.0, 1.0);
        assert_eq!(symmetry_residual(&sq, &[(0.2, 0.9), (0.0, 1.0)]).unwrap(), 0.0);

        let e = kernel("exp(x)", 0.0, 1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let pairs: Vec<_> = (0..10_000).map(|_| (rng.gen(), rng.gen())).collect();
        assert!(symmetry_residual(&e, &pairs).unwrap() <= 1e-13 * std::f64::consts::E);

        let first = Field::new(iv(0.0, 1.0), 1, |x, _| vec![x]);
        assert_eq!(symmetry_residual(&first, &[(0.0, 1.0)]).unwrap(), 1.0);
    }

    #[test]
    fn diagonal_examples() {
        let d = diagonal_eval(&kernel("x^2", 0.0, 1.0));
        assert_eq!(d.eval(0.3).unwrap()[0], 0.6);
        let d = diagonal_eval(&kernel("sin(x)", 0.0, PI));
        for i in 0..=100 {
            let x = PI * i as f64 / 100.0;
            assert!((d.eval(x).unwrap()[0] - x.cos()).abs() <= 1e-14);
        }
    }

    #[test]
    fn reconstruct_examples() {
        let g = reconstruct_from_kernel(&kernel("x^2", 0.0, 1.0), 0.0, VectorValue::scalar(0.0))
            .unwrap();
        assert_eq!(g.eval(0.5).unwrap()[0], 0.25);
        let g = reconstruct_from_kernel(&kernel("x", 0.0, 3.0), 2.0, VectorValue::scalar(5.0))
            .unwrap();
        assert_eq!(g.eval(2.0).unwrap()[0], 5.0);
        assert_eq!(g.eval(0.5).unwrap()[0], 3.5);
        let g = reconstruct_from_kernel(&kernel("sin(x)", 0.0, PI), 0.0, VectorValue::scalar(0.0))
            .unwrap();
        for i in 0..=100 {
            let x = PI * i as f64 / 100.0;
            assert!((g.eval(x).unwrap()[0] - x.sin()).abs() <= 1e-13);
        }
        assert!(reconstruct_from_kernel(&kernel("x", 0.0, 1.0), 2.0, VectorValue::scalar(0.0)).is_err());
    }

    #[test]
    fn glue_examples() {
        let l = glue(&kernel("x^2", 0.0, 1.0), &kernel("x^2", 1.0, 2.0), 1e-10).unwrap();
        assert_eq!(l.domain(), iv(0.0, 2.0));
        assert_eq!(l.eval(0.0, 2.0).unwrap()[0], 2.0);
        assert_eq!(l.eval(2.0, 0.0).unwrap()[0], 2.0);

        let ones = glue(&kernel("x", 0.0, 1.0), &kernel("x", 1.0, 2.0), 1e-10).unwrap();
        for (x, y) in [(0.0, 2.0), (0.5, 1.5), (1.0, 1.0), (1.9, 0.2)] {
            assert_eq!(ones.eval(x, y).unwrap()[0], 1.0);
        }

        let mismatch = glue(&kernel("0*x", 0.0, 1.0), &kernel("x", 1.0, 2.0), 1e-10);
        assert!(matches!(mismatch, Err(Error::GlueMismatch { .. })));
        let apart = glue(&kernel("x", 0.0, 1.0), &kernel("x", 1.5, 2.0), 1e-10);
        assert!(matches!(apart, Err(Error::NotAdjacent { .. })));
    }

    #[test]
    fn glue_delegates_inside_blocks() {
        let h = kernel("sin(x)", 0.0, 1.0);
        let k = kernel("sin(x)", 1.0, 2.0);
        let l = glue(&h, &k, 1e-12).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..1000 {
            let (x, y): (f64, f64) = (rng.gen(), rng.gen());
            assert_eq!(l.eval(x, y).unwrap(), h.eval(x, y).unwrap());
            assert_eq!(l.eval(x + 1.0, y + 1.0).unwrap(), k.eval(x + 1.0, y + 1.0).unwrap());
        }
    }

    #[test]
    fn path_detection() {
        let relu = check_path(&Curve::parse("relu(x)", iv(-1.0, 1.0)).unwrap(), 1e-6).unwrap();
        assert!(!relu.is_path);
        assert_eq!(relu.witness_point, Some(0.0));
        assert!((relu.oscillation - 1.0).abs() < 1e-12);

        let accepted = [
            ("x^2", -1.0, 1.0),
            ("abs(x)", 0.5, 1.0),
            ("relu(x)", 0.0, 1.0),
            ("sin(x)*exp(x)", 0.0, 1.0),
            ("sin(x) - 0.9", 0.0, 3.0),
        ];
        for (text, lo, hi) in accepted {
            let r = check_path(&Curve::parse(text, iv(lo, hi)).unwrap(), 1e-6).unwrap();
            assert!(r.is_path, "{text}: {r:?}");
            assert_eq!(r.witness_point, None);
        }

        let kink = check_path(&Curve::parse("abs(x - 0.3)", iv(0.0, 1.0)).unwrap(), 1e-6).unwrap();
        assert!(!kink.is_path);
        assert!((kink.witness_point.unwrap() - 0.3).abs() < 1e-12);
    }
}
