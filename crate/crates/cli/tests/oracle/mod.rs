//! Multiprecision reference evaluation of expressions, used as an oracle for
//! divided differences and derivatives.

#![allow(dead_code)]

use adcalc::{Expr, Func};
use astro_float::{BigFloat, Consts, RoundingMode};

const PREC: usize = 384;
const RM: RoundingMode = RoundingMode::ToEven;

pub struct Oracle {
    cc: Consts,
}

impl Oracle {
    pub fn new() -> Self {
        Self {
            cc: Consts::new().expect("constant cache"),
        }
    }

    fn eval(&mut self, e: &Expr, x: &BigFloat) -> BigFloat {
        match e {
            Expr::Const(c) => BigFloat::from_f64(*c, PREC),
            Expr::Var => x.clone(),
            Expr::Add(a, b) => self.eval(a, x).add(&self.eval(b, x), PREC, RM),
            Expr::Sub(a, b) => self.eval(a, x).sub(&self.eval(b, x), PREC, RM),
            Expr::Mul(a, b) => self.eval(a, x).mul(&self.eval(b, x), PREC, RM),
            Expr::Div(a, b) => self.eval(a, x).div(&self.eval(b, x), PREC, RM),
            Expr::PowInt(a, n) => self.eval(a, x).powi(*n as usize, PREC, RM),
            Expr::Neg(a) => self.eval(a, x).neg(),
            Expr::Call(func, a) => {
                let u = self.eval(a, x);
                match func {
                    Func::Sin => u.sin(PREC, RM, &mut self.cc),
                    Func::Cos => u.cos(PREC, RM, &mut self.cc),
                    Func::Exp => u.exp(PREC, RM, &mut self.cc),
                    Func::Log => u.ln(PREC, RM, &mut self.cc),
                    Func::Sqrt => u.sqrt(PREC, RM),
                    Func::Relu if u.is_negative() => BigFloat::from_f64(0.0, PREC),
                    Func::Relu => u,
                    Func::Abs if u.is_negative() => u.neg(),
                    Func::Abs => u,
                }
            }
        }
    }

    pub fn value(&mut self, e: &Expr, x: f64) -> f64 {
        to_f64(&self.eval(e, &BigFloat::from_f64(x, PREC)))
    }

    /// `(f(y) − f(x)) / (y − x)` for `x ≠ y`, correctly rounded.
    pub fn divided_difference(&mut self, e: &Expr, x: f64, y: f64) -> f64 {
        assert_ne!(x, y);
        let (bx, by) = (BigFloat::from_f64(x, PREC), BigFloat::from_f64(y, PREC));
        let num = self.eval(e, &by).sub(&self.eval(e, &bx), PREC, RM);
        to_f64(&num.div(&by.sub(&bx, PREC, RM), PREC, RM))
    }
}

pub fn to_f64(b: &BigFloat) -> f64 {
    let text = format!("{b}");
    text.parse()
        .unwrap_or_else(|_| panic!("unparseable multiprecision value {text}"))
}

/// Relative error against a nonzero reference.
pub fn rel_err(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs()
}
