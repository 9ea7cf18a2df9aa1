//! Calculus on curves through their divided-difference kernels.
//!
//! A curve `f: [a, b] → Rⁿ` is represented together with a symmetric kernel
//! `h_f` on the square satisfying `f(y) − f(x) = (y − x)·h_f(x, y)`. The
//! derivative is the diagonal of the kernel, and integration goes through the
//! averaging kernel `av_f(x, y) = mean of f over [x, y]`.

pub mod adspace;
pub mod battery;
pub mod calculus;
pub mod curve;
pub mod divdiff;
pub mod error;
pub mod expr;
pub mod laws;
pub mod linear;
pub mod model;
pub mod parse;
pub mod quadrature;
pub mod special;
pub mod square;
pub mod verify;

pub use adspace::{
    check_path, cocycle_residual, diagonal_eval, glue, reconstruct_from_kernel, symmetry_residual,
    GluedKernel, PathReport,
};
pub use calculus::{
    antiderivative, averaging_kernel, derivative, integrate, newton_leibniz_residual,
    AveragingKernel, Integral,
};
pub use curve::{Curve, Polygon, SymbolicCurve};
pub use divdiff::{build_kernel, eval_kernel, make_path, make_path_with, AdKernel, Path, SymbolicKernel};
pub use error::{Error, Result};
pub use expr::{Expr, Func};
pub use linear::LinearMap;
pub use model::{make_grid, sup_norm_curve, sup_norm_kernel, Grid, Interval, Tolerances, VectorValue};
pub use parse::{parse_curve, parse_expr};
pub use square::{Field, SquareFn};
pub use laws::{
    check_functor_laws, check_isometry, check_natural_iso_roundtrip, check_naturality, map_curve,
    map_kernel, LawReport, Probe, Variance,
};
pub use battery::{battery, BatteryMember};
pub use verify::{run_suite, Suite};
