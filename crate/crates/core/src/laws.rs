//! The three functors `C(I, −)`, `C(I×I, −)` and `ad C(I×I, −)` on the probe
//! category (objects `Rⁿ`, morphisms matrices), diagonal evaluation as a
//! natural transformation between them, and finite-sample law checks.
//!
//! Residuals in a [`LawReport`] are divided by a scale `1 + sup norm` so the
//! tolerances are unit-free, except where the report note says otherwise.

use std::sync::Arc;

use serde::Serialize;

use crate::adspace::diagonal_eval;
use crate::calculus::averaging_kernel;
use crate::curve::Curve;
use crate::divdiff::AdKernel;
use crate::error::{Error, Result};
use crate::linear::LinearMap;
use crate::model::{norm_vec, Grid, Tolerances};
use crate::square::Field;
use crate::SquareFn;

/// `x ↦ u(f(x))`.
pub fn map_curve(u: &LinearMap, f: &Curve) -> Result<Curve> {
    check_dims(u, f.dim())?;
    Ok(Curve::Mapped {
        map: u.clone(),
        inner: Arc::new(f.clone()),
    })
}

/// `(x, y) ↦ u(h(x, y))`.
pub fn map_kernel(u: &LinearMap, h: &AdKernel) -> Result<AdKernel> {
    check_dims(u, h.dim())?;
    Ok(AdKernel::Mapped {
        map: u.clone(),
        inner: Arc::new(h.clone()),
    })
}

fn check_dims(u: &LinearMap, dim: usize) -> Result<()> {
    if u.cols() != dim {
        return Err(Error::DimensionMismatch {
            expected: u.cols(),
            found: dim,
        });
    }
    Ok(())
}

/// Result of one finite-sample law check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LawReport {
    pub law: String,
    pub max_residual: f64,
    pub tolerance: f64,
    pub samples: usize,
    pub pass: bool,
    /// Sample location (and for matrix laws, entry index) of the worst residual.
    pub witness: Option<Vec<f64>>,
    /// False for negative controls, which are meant to fail.
    pub expected_to_hold: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl LawReport {
    pub fn new(law: impl Into<String>, worst: Worst, tolerance: f64, samples: usize) -> Self {
        Self {
            law: law.into(),
            max_residual: worst.residual,
            tolerance,
            samples,
            pass: worst.residual <= tolerance,
            witness: worst.witness,
            expected_to_hold: true,
            note: None,
        }
    }

    pub fn negative_control(mut self) -> Self {
        self.expected_to_hold = false;
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    /// Passing laws and failing negative controls are both as expected.
    pub fn as_expected(&self) -> bool {
        self.pass == self.expected_to_hold
    }
}

/// Running maximum of a residual with its location.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Worst {
    pub residual: f64,
    pub witness: Option<Vec<f64>>,
}

impl Worst {
    pub fn update(&mut self, residual: f64, at: &[f64]) {
        if self.witness.is_none() || residual > self.residual || residual.is_nan() {
            self.residual = residual;
            self.witness = Some(at.to_vec());
        }
    }

    fn merge(&mut self, other: Worst) {
        if let Some(at) = other.witness {
            self.update(other.residual, &at);
        }
    }
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// `max_x ‖ed(u ∘ h)(x) − u(ed(h)(x))‖` on the grid, against `tol·(1 + sup‖u ∘ ed h‖)`.
pub fn check_naturality(u: &LinearMap, h: &AdKernel, g: &Grid, tol: f64) -> Result<LawReport> {
    let left = diagonal_eval(&map_kernel(u, h)?);
    let right = map_curve(u, &diagonal_eval(h))?;
    let mut worst = Worst::default();
    let mut sup = 0.0_f64;
    let mut raw = Vec::with_capacity(g.len());
    for &x in g.points() {
        let (l, r) = (left.eval(x)?, right.eval(x)?);
        sup = sup.max(r.norm());
        raw.push((x, l.distance(&r)));
    }
    let scale = 1.0 + sup;
    for (x, r) in raw {
        worst.update(r / scale, &[x]);
    }
    Ok(LawReport::new("naturality of diagonal evaluation", worst, tol, g.len()))
}

/// Points of the refined grid paired with every refined point at most one
/// original spacing away, the band where near-diagonal extrema hide.
fn diagonal_band(g: &Grid) -> Vec<(f64, f64)> {
    let fine = g.refine();
    let reach = g.spacing() * (1.0 + 1e-9);
    let pts = fine.points();
    let mut pairs = Vec::new();
    for (i, &p) in pts.iter().enumerate() {
        for &q in &pts[i..] {
            if q - p > reach {
                break;
            }
            pairs.push((p, q));
        }
    }
    pairs
}

/// `|sup‖h‖ − sup‖ed h‖|` with both sups taken on the grid (the square
/// additionally sampled on a refined band around the diagonal). The
/// tolerance is `L·spacing`, where `L` is the largest sampled increment
/// quotient of `h` along the grid axes. Residual and tolerance are absolute.
pub fn check_isometry<K: SquareFn + ?Sized>(h: &K, g: &Grid) -> Result<LawReport> {
    let pts = g.points();
    let n = pts.len();
    let mut values = Vec::with_capacity(n * n);
    for &x in pts {
        for &y in pts {
            values.push(h.eval(x, y)?);
        }
    }
    let mut sup_square = 0.0_f64;
    let mut lipschitz = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            let v = &values[i * n + j];
            sup_square = sup_square.max(v.norm());
            if i + 1 < n {
                let step = pts[i + 1] - pts[i];
                lipschitz = lipschitz.max(v.distance(&values[(i + 1) * n + j]) / step);
            }
        }
    }
    let mut sup_diag = 0.0_f64;
    let mut worst_at = [pts[0], pts[0]];
    for (p, q) in diagonal_band(g) {
        let v = h.eval(p, q)?.norm();
        if p == q {
            sup_diag = sup_diag.max(v);
        }
        if v > sup_square {
            sup_square = v;
            worst_at = [p, q];
        }
    }
    let tolerance = lipschitz * g.spacing();
    let worst = Worst {
        residual: (sup_square - sup_diag).abs(),
        witness: Some(worst_at.to_vec()),
    };
    Ok(LawReport::new("isometry of diagonal evaluation", worst, tolerance, n * n)
        .with_note(format!(
            "absolute residual; tolerance = Lipschitz estimate {lipschitz:e} x spacing {:e}",
            g.spacing()
        )))
}

/// A probe object for one of the three functors.
#[derive(Debug, Clone)]
pub enum Probe {
    /// Element of `C(I, Rⁿ)`.
    Curve(Curve),
    /// Element of `C(I×I, Rⁿ)`.
    Field(Field),
    /// Element of `ad C(I×I, Rⁿ)`.
    Kernel(AdKernel),
}

impl Probe {
    pub fn functor(&self) -> &'static str {
        match self {
            Probe::Curve(_) => "C(I,-)",
            Probe::Field(_) => "C(IxI,-)",
            Probe::Kernel(_) => "ad C(IxI,-)",
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Probe::Curve(f) => f.dim(),
            Probe::Field(h) => h.dim(),
            Probe::Kernel(h) => h.dim(),
        }
    }

    /// The functor applied to a morphism, evaluated at this object.
    pub fn map(&self, u: &LinearMap) -> Result<Probe> {
        Ok(match self {
            Probe::Curve(f) => Probe::Curve(map_curve(u, f)?),
            Probe::Field(h) => Probe::Field(h.mapped(u)?),
            Probe::Kernel(h) => Probe::Kernel(map_kernel(u, h)?),
        })
    }

    /// Values at the grid points (curves) or grid pairs (square functions),
    /// each with its location.
    pub fn sample(&self, g: &Grid) -> Result<Vec<(Vec<f64>, Vec<f64>)>> {
        let pts = g.points();
        let square = |h: &dyn Fn(f64, f64) -> Result<Vec<f64>>| -> Result<Vec<_>> {
            let mut out = Vec::with_capacity(pts.len() * pts.len());
            for &x in pts {
                for &y in pts {
                    out.push((vec![x, y], h(x, y)?));
                }
            }
            Ok(out)
        };
        match self {
            Probe::Curve(f) => pts
                .iter()
                .map(|&x| Ok((vec![x], f.eval(x)?.into_inner())))
                .collect(),
            Probe::Field(h) => square(&|x, y| Ok(h.eval(x, y)?.into_inner())),
            Probe::Kernel(h) => square(&|x, y| Ok(h.eval(x, y)?.into_inner())),
        }
    }
}

fn sup(samples: &[(Vec<f64>, Vec<f64>)]) -> f64 {
    samples.iter().map(|(_, v)| norm_vec(v)).fold(0.0, f64::max)
}

/// Pointwise residual between two probes, divided by `scale`.
fn probe_residual(a: &Probe, b: &Probe, g: &Grid, scale: f64) -> Result<(Worst, usize)> {
    let (sa, sb) = (a.sample(g)?, b.sample(g)?);
    let mut worst = Worst::default();
    for ((at, va), (_, vb)) in sa.iter().zip(&sb) {
        worst.update(distance(va, vb) / scale, at);
    }
    Ok((worst, sa.len()))
}

/// Direction of a functor on morphisms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variance {
    Covariant,
    Contravariant,
}

/// `chain[k−1] ∘ … ∘ chain[0]`.
fn compose(chain: &[LinearMap]) -> Result<LinearMap> {
    let (first, rest) = chain
        .split_first()
        .ok_or_else(|| Error::Usage("empty morphism chain".into()))?;
    rest.iter().try_fold(first.clone(), |acc, m| m.after(&acc))
}

fn chain_norm(chain: &[LinearMap]) -> f64 {
    chain.iter().map(LinearMap::frobenius).product()
}

/// Functor laws over the probes, one report per law and functor.
///
/// Covariant mode checks identity preservation (F1), composition
/// `F(v ∘ u) = F(v) ∘ F(u)` along every chain (F2a), and the category
/// axioms of the matrix chains themselves (associativity, identity).
/// Contravariant mode checks `F(v ∘ u) = F(u) ∘ F(v)` (F2b), which these
/// covariant functors violate; its reports are negative controls and need
/// square matrices of the probe dimension.
///
/// Residuals are scaled by `1 + ‖chain‖·sup‖p‖` with Frobenius norms.
pub fn check_functor_laws(
    variance: Variance,
    chains: &[Vec<LinearMap>],
    probes: &[Probe],
    g: &Grid,
    tol: f64,
) -> Result<Vec<LawReport>> {
    let mut reports = Vec::new();
    for functor in ["C(I,-)", "C(IxI,-)", "ad C(IxI,-)"] {
        let of_kind: Vec<&Probe> = probes.iter().filter(|p| p.functor() == functor).collect();
        if of_kind.is_empty() {
            continue;
        }
        match variance {
            Variance::Covariant => {
                let (mut f1, mut n1) = (Worst::default(), 0);
                let (mut f2, mut n2) = (Worst::default(), 0);
                for p in &of_kind {
                    let base = p.sample(g)?;
                    let scale = 1.0 + sup(&base);
                    let (w, n) = probe_residual(&p.map(&LinearMap::identity(p.dim()))?, p, g, scale)?;
                    f1.merge(w);
                    n1 += n;
                    for chain in chains.iter().filter(|c| c.len() >= 2) {
                        let composite = p.map(&compose(chain)?)?;
                        let stepwise = chain.iter().try_fold((*p).clone(), |q, m| q.map(m))?;
                        let scale = 1.0 + chain_norm(chain) * sup(&base);
                        let (w, n) = probe_residual(&composite, &stepwise, g, scale)?;
                        f2.merge(w);
                        n2 += n;
                    }
                }
                reports.push(LawReport::new(format!("F1 identity [{functor}]"), f1, tol, n1));
                reports.push(LawReport::new(format!("F2a composition [{functor}]"), f2, tol, n2));
            }
            Variance::Contravariant => {
                let (mut f2, mut n2) = (Worst::default(), 0);
                for p in &of_kind {
                    let base = p.sample(g)?;
                    for chain in chains.iter().filter(|c| c.len() >= 2) {
                        for m in chain {
                            if m.rows() != p.dim() || m.cols() != p.dim() {
                                return Err(Error::DimensionMismatch {
                                    expected: p.dim(),
                                    found: if m.rows() != p.dim() { m.rows() } else { m.cols() },
                                });
                            }
                        }
                        let composite = p.map(&compose(chain)?)?;
                        let reversed = chain.iter().rev().try_fold((*p).clone(), |q, m| q.map(m))?;
                        let scale = 1.0 + chain_norm(chain) * sup(&base);
                        let (w, n) = probe_residual(&composite, &reversed, g, scale)?;
                        f2.merge(w);
                        n2 += n;
                    }
                }
                reports.push(
                    LawReport::new(format!("F2b contravariant composition [{functor}]"), f2, tol, n2)
                        .negative_control(),
                );
            }
        }
    }
    if variance == Variance::Covariant {
        reports.extend(check_category_axioms(chains, tol)?);
    }
    Ok(reports)
}

/// Associativity on chains of length ≥ 3 and identity laws on every morphism.
fn check_category_axioms(chains: &[Vec<LinearMap>], tol: f64) -> Result<Vec<LawReport>> {
    let (mut assoc, mut n_assoc) = (Worst::default(), 0);
    let (mut ident, mut n_ident) = (Worst::default(), 0);
    for (i, chain) in chains.iter().enumerate() {
        for w in chain.windows(3) {
            let left = w[2].after(&w[1])?.after(&w[0])?;
            let right = w[2].after(&w[1].after(&w[0])?)?;
            let scale = 1.0 + chain_norm(w);
            assoc.update(left.max_abs_diff(&right) / scale, &[i as f64]);
            n_assoc += 1;
        }
        for m in chain {
            let before = LinearMap::identity(m.rows()).after(m)?;
            let after = m.after(&LinearMap::identity(m.cols()))?;
            ident.update(before.max_abs_diff(m).max(after.max_abs_diff(m)), &[i as f64]);
            n_ident += 1;
        }
    }
    Ok(vec![
        LawReport::new("C3 associativity", assoc, tol, n_assoc)
            .with_note("witness is the chain index"),
        LawReport::new("C3 identity", ident, tol, n_ident).with_note("witness is the chain index"),
    ])
}

/// Both round trips of the diagonal-evaluation isomorphism.
///
/// Forward: `‖ed(av_f) − f‖` on the grid, scaled by `1 + sup‖f‖`.
/// Backward: `‖av(ed h) − h‖` on grid pairs, scaled by `1 + sup‖h‖`.
pub fn check_natural_iso_roundtrip(
    f: &Curve,
    h: &AdKernel,
    g: &Grid,
    tolerances: &Tolerances,
    tol: f64,
) -> Result<[LawReport; 2]> {
    let av = averaging_kernel(f, tolerances)?;
    let back = diagonal_eval(&av);
    let mut raw = Vec::with_capacity(g.len());
    let mut sup_f = 0.0_f64;
    for &x in g.points() {
        let fx = f.eval(x)?;
        sup_f = sup_f.max(fx.norm());
        raw.push((x, back.eval(x)?.distance(&fx)));
    }
    let mut forward = Worst::default();
    for (x, r) in raw {
        forward.update(r / (1.0 + sup_f), &[x]);
    }

    let rebuilt = averaging_kernel(&diagonal_eval(h), tolerances)?;
    let mut raw = Vec::with_capacity(g.len() * g.len());
    let mut sup_h = 0.0_f64;
    for &x in g.points() {
        for &y in g.points() {
            let hv = h.eval(x, y)?;
            sup_h = sup_h.max(hv.norm());
            raw.push((x, y, rebuilt.eval(x, y)?.distance(&hv)));
        }
    }
    let mut backward = Worst::default();
    for (x, y, r) in raw {
        backward.update(r / (1.0 + sup_h), &[x, y]);
    }
    Ok([
        LawReport::new("round trip ed . av = id", forward, tol, g.len()),
        LawReport::new("round trip av . ed = id", backward, tol, g.len() * g.len()),
    ])
}
