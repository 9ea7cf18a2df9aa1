//! Seeded property suites over the battery, producing [`LawReport`]s.
//!
//! Every suite draws from its own generator derived from the seed, so a
//! suite run alone and the same suite run inside `All` report identical
//! numbers.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::adspace::{cocycle_residual, glue, symmetry_residual};
use crate::battery::battery;
use crate::calculus::{averaging_kernel, newton_leibniz_residual};
use crate::curve::Curve;
use crate::divdiff::{build_kernel, make_path_with, AdKernel};
use crate::error::{Error, Result};
use crate::laws::{
    check_functor_laws, check_isometry, check_natural_iso_roundtrip, check_naturality, map_kernel,
    LawReport, Probe, Variance, Worst,
};
use crate::linear::LinearMap;
use crate::model::{make_grid, sup_norm_curve, sup_norm_kernel, Interval, Tolerances};
use crate::square::Field;
use crate::SquareFn;

/// Threshold for laws that hold up to rounding; a stricter configured
/// residual tolerance takes precedence.
pub const EXACT_LAW_TOL: f64 = 1e-12;
/// Threshold for laws limited by quadrature accuracy.
pub const QUADRATURE_LAW_TOL: f64 = 1e-9;

const COCYCLE_SAMPLES: usize = 1000;
const AVERAGING_SAMPLES: usize = 200;
const NATURALITY_SAMPLES: usize = 100;
const NEWTON_LEIBNIZ_SAMPLES: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    All,
    Cocycle,
    Symmetry,
    Naturality,
    Isometry,
    Functor,
    NewtonLeibniz,
    Roundtrip,
}

impl Suite {
    pub const EACH: [Suite; 7] = [
        Suite::Cocycle,
        Suite::Symmetry,
        Suite::Naturality,
        Suite::Isometry,
        Suite::Functor,
        Suite::NewtonLeibniz,
        Suite::Roundtrip,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::Cocycle => "cocycle",
            Suite::Symmetry => "symmetry",
            Suite::Naturality => "naturality",
            Suite::Isometry => "isometry",
            Suite::Functor => "functor",
            Suite::NewtonLeibniz => "newton-leibniz",
            Suite::Roundtrip => "roundtrip",
        }
    }

    fn stream(self) -> u64 {
        Suite::EACH.iter().position(|s| *s == self).map_or(0, |i| i as u64 + 1)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        std::iter::once(Suite::All)
            .chain(Suite::EACH)
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::Usage(format!("unknown suite '{s}'")))
    }
}

/// Runs one suite (or all of them, in a fixed order).
pub fn run_suite(suite: Suite, seed: u64, tol: &Tolerances) -> Result<Vec<LawReport>> {
    tol.validate()?;
    if suite == Suite::All {
        let mut out = Vec::new();
        for s in Suite::EACH {
            out.extend(run_suite(s, seed, tol)?);
        }
        return Ok(out);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ suite.stream().wrapping_mul(0x9E37_79B9_7F4A_7C15));
    match suite {
        Suite::All => unreachable!(),
        Suite::Cocycle => cocycle_suite(&mut rng, tol),
        Suite::Symmetry => symmetry_suite(&mut rng, tol),
        Suite::Naturality => naturality_suite(&mut rng, tol),
        Suite::Isometry => isometry_suite(),
        Suite::Functor => functor_suite(&mut rng, tol),
        Suite::NewtonLeibniz => newton_leibniz_suite(&mut rng, tol),
        Suite::Roundtrip => roundtrip_suite(tol),
    }
}

/// Kernels of each structural kind, with how many samples to spend on each.
fn kernel_families(rng: &mut ChaCha8Rng, tol: &Tolerances) -> Result<Vec<(&'static str, Vec<AdKernel>, usize)>> {
    let mut symbolic = Vec::new();
    let mut averaging = Vec::new();
    let mut mapped = Vec::new();
    for m in battery() {
        let f = m.curve()?;
        let h = build_kernel(&f)?;
        averaging.push(averaging_kernel(&f, tol)?);
        let u = LinearMap::random(rng.gen_range(1..=3), h.dim(), rng);
        mapped.push(map_kernel(&u, &h)?);
        symbolic.push(h);
    }
    let mut glued = Vec::new();
    for text in ["x^2", "sin(x)", "exp(x)", "[sin(x), cos(x)]"] {
        let left = build_kernel(&Curve::parse(text, Interval::new(0.0, 1.0)?)?)?;
        let right = build_kernel(&Curve::parse(text, Interval::new(1.0, 2.0)?)?)?;
        glued.push(glue(&left, &right, tol.residual_tol)?);
    }
    Ok(vec![
        ("symbolic", symbolic, COCYCLE_SAMPLES),
        ("averaging", averaging, AVERAGING_SAMPLES),
        ("glued", glued, COCYCLE_SAMPLES),
        ("mapped", mapped, COCYCLE_SAMPLES),
    ])
}

fn exact_tol(tol: &Tolerances) -> f64 {
    EXACT_LAW_TOL.min(tol.residual_tol)
}

fn draw(rng: &mut ChaCha8Rng, iv: Interval) -> f64 {
    rng.gen_range(iv.lo()..=iv.hi())
}

fn coarse_sup<K: SquareFn>(h: &K) -> Result<f64> {
    sup_norm_kernel(h, &make_grid(h.domain(), 21)?)
}

/// Scale `1 + width·sup‖h‖`, the size of the terms `(y − x)·h(x, y)`.
fn cocycle_suite(rng: &mut ChaCha8Rng, tol: &Tolerances) -> Result<Vec<LawReport>> {
    let mut reports = Vec::new();
    for (family, kernels, n) in kernel_families(rng, tol)? {
        let mut worst = Worst::default();
        for h in &kernels {
            let iv = h.domain();
            let scale = 1.0 + iv.width() * coarse_sup(h)?;
            for _ in 0..n {
                let t = (draw(rng, iv), draw(rng, iv), draw(rng, iv));
                let r = cocycle_residual(h, &[t])?;
                worst.update(r / scale, &[t.0, t.1, t.2]);
            }
        }
        let samples = kernels.len() * n;
        reports.push(LawReport::new(format!("cocycle [{family}]"), worst, exact_tol(tol), samples));
    }
    Ok(reports)
}

/// Scale `1 + sup‖h‖`.
fn symmetry_suite(rng: &mut ChaCha8Rng, tol: &Tolerances) -> Result<Vec<LawReport>> {
    let mut reports = Vec::new();
    for (family, kernels, n) in kernel_families(rng, tol)? {
        let mut worst = Worst::default();
        for h in &kernels {
            let iv = h.domain();
            let scale = 1.0 + coarse_sup(h)?;
            for _ in 0..n {
                let p = (draw(rng, iv), draw(rng, iv));
                let r = symmetry_residual(h, &[p])?;
                worst.update(r / scale, &[p.0, p.1]);
            }
        }
        let samples = kernels.len() * n;
        reports.push(LawReport::new(format!("symmetry [{family}]"), worst, exact_tol(tol), samples));
    }
    Ok(reports)
}

fn naturality_suite(rng: &mut ChaCha8Rng, tol: &Tolerances) -> Result<Vec<LawReport>> {
    let kernels = battery()
        .iter()
        .map(|m| build_kernel(&m.curve()?))
        .collect::<Result<Vec<_>>>()?;
    let mut worst = Worst::default();
    let mut samples = 0;
    for i in 0..NATURALITY_SAMPLES {
        let h = &kernels[i % kernels.len()];
        let u = LinearMap::random(rng.gen_range(1..=3), h.dim(), rng);
        let g = make_grid(h.domain(), 201)?;
        let r = check_naturality(&u, h, &g, exact_tol(tol))?;
        samples += r.samples;
        if let Some(at) = r.witness {
            worst.update(r.max_residual, &at);
        }
    }
    Ok(vec![LawReport::new("naturality of diagonal evaluation", worst, exact_tol(tol), samples)])
}

fn isometry_suite() -> Result<Vec<LawReport>> {
    let mut reports = Vec::new();
    for m in battery() {
        let h = build_kernel(&m.curve()?)?;
        let mut r = check_isometry(&h, &make_grid(m.domain(), 201)?)?;
        r.law = format!("{} [{}]", r.law, m.source);
        reports.push(r);
    }
    Ok(reports)
}

fn interval(lo: f64, hi: f64) -> Interval {
    Interval::new(lo, hi).expect("valid literal interval")
}

fn functor_suite(rng: &mut ChaCha8Rng, tol: &Tolerances) -> Result<Vec<LawReport>> {
    let iv = interval(0.0, 1.0);
    let mut probes = Vec::new();
    for text in ["[sin(x), cos(x)]", "[x^2, exp(x)]"] {
        let f = Curve::parse(text, iv)?;
        probes.push(Probe::Kernel(build_kernel(&f)?));
        probes.push(Probe::Curve(f));
    }
    probes.push(Probe::Field(Field::new(iv, 2, |x, y| vec![x * y, x - y])));
    probes.push(Probe::Field(Field::new(iv, 2, |x, y| vec![(x + y).sin(), x * x])));

    let mut chains = Vec::new();
    for len in [2, 2, 3, 3] {
        let mut dim = 2;
        let chain: Vec<LinearMap> = (0..len)
            .map(|_| {
                let rows = rng.gen_range(1..=3);
                let m = LinearMap::random(rows, dim, rng);
                dim = rows;
                m
            })
            .collect();
        chains.push(chain);
    }
    let g = make_grid(iv, 101)?;
    let mut reports = check_functor_laws(Variance::Covariant, &chains, &probes, &g, exact_tol(tol))?;

    let square: Vec<Vec<LinearMap>> = (0..2)
        .map(|_| vec![LinearMap::random(2, 2, rng), LinearMap::random(2, 2, rng)])
        .collect();
    reports.extend(check_functor_laws(Variance::Contravariant, &square, &probes, &g, exact_tol(tol))?);
    Ok(reports)
}

/// Scale `1 + sup‖f‖`.
fn newton_leibniz_suite(rng: &mut ChaCha8Rng, tol: &Tolerances) -> Result<Vec<LawReport>> {
    let mut reports = Vec::new();
    for m in battery() {
        let f = m.curve()?;
        let p = make_path_with(&f, tol)?;
        let iv = m.domain();
        let scale = 1.0 + sup_norm_curve(&f, &make_grid(iv, 201)?)?;
        let mut worst = Worst::default();
        for _ in 0..NEWTON_LEIBNIZ_SAMPLES {
            let (a, b) = (draw(rng, iv), draw(rng, iv));
            let r = newton_leibniz_residual(&p, a, b, tol)?;
            worst.update(r / scale, &[a, b]);
        }
        reports.push(LawReport::new(
            format!("newton-leibniz [{}]", m.source),
            worst,
            QUADRATURE_LAW_TOL,
            NEWTON_LEIBNIZ_SAMPLES,
        ));
    }
    Ok(reports)
}

fn roundtrip_suite(tol: &Tolerances) -> Result<Vec<LawReport>> {
    let mut reports = Vec::new();
    for m in battery() {
        let f = m.curve()?;
        let h = build_kernel(&f)?;
        let g = make_grid(m.domain(), 21)?;
        for mut r in check_natural_iso_roundtrip(&f, &h, &g, tol, QUADRATURE_LAW_TOL)? {
            r.law = format!("{} [{}]", r.law, m.source);
            reports.push(r);
        }
    }
    Ok(reports)
}
