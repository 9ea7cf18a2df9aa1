//! Built-in test curves used by the verification suites.

use crate::curve::Curve;
use crate::error::Result;
use crate::model::Interval;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BatteryMember {
    pub name: &'static str,
    pub source: &'static str,
    pub lo: f64,
    pub hi: f64,
}

impl BatteryMember {
    pub fn domain(&self) -> Interval {
        Interval::new(self.lo, self.hi).expect("battery intervals are valid")
    }

    pub fn curve(&self) -> Result<Curve> {
        Curve::parse(self.source, self.domain())
    }
}

const fn member(name: &'static str, source: &'static str, lo: f64, hi: f64) -> BatteryMember {
    BatteryMember { name, source, lo, hi }
}

/// Intervals keep every kernel away from zero, so relative errors are meaningful.
pub const BATTERY: [BatteryMember; 11] = [
    member("square", "x^2", 0.0, 1.0),
    member("cube", "x^3", 0.0, 1.0),
    member("affine", "1 + 2*x", -1.0, 1.0),
    member("sin", "sin(x)", 0.0, 1.0),
    member("cos", "cos(x)", 0.5, 2.0),
    member("exp", "exp(x)", 0.0, 2.0),
    member("sqrt", "sqrt(x + 2)", 0.0, 2.0),
    member("log", "log(x + 2)", 0.0, 2.0),
    member("sin*exp", "sin(x)*exp(x)", 0.0, 1.0),
    member("exp.sin", "exp(sin(x))", 0.0, 1.0),
    member("sin,cos", "[sin(x), cos(x)]", 0.5, 1.5),
];

pub fn battery() -> &'static [BatteryMember] {
    &BATTERY
}
