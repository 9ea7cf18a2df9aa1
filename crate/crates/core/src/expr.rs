//! Expression trees in the single variable `x`.

use std::fmt;

use crate::error::{Error, Result};

/// Unary elementary functions admitted by the grammar.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Sqrt,
    Log,
    Relu,
    Abs,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Sqrt => "sqrt",
            Func::Log => "log",
            Func::Relu => "relu",
            Func::Abs => "abs",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "exp" => Func::Exp,
            "sqrt" => Func::Sqrt,
            "log" => Func::Log,
            "relu" => Func::Relu,
            "abs" => Func::Abs,
            _ => return None,
        })
    }

    /// Kink nodes are continuous but not differentiable where their argument vanishes.
    pub fn is_kink(self) -> bool {
        matches!(self, Func::Relu | Func::Abs)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var,
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    PowInt(Box<Expr>, u32),
    Neg(Box<Expr>),
    Call(Func, Box<Expr>),
}

impl Expr {
    pub fn add(a: Expr, b: Expr) -> Expr {
        Expr::Add(Box::new(a), Box::new(b))
    }

    pub fn sub(a: Expr, b: Expr) -> Expr {
        Expr::Sub(Box::new(a), Box::new(b))
    }

    pub fn mul(a: Expr, b: Expr) -> Expr {
        Expr::Mul(Box::new(a), Box::new(b))
    }

    pub fn div(a: Expr, b: Expr) -> Expr {
        Expr::Div(Box::new(a), Box::new(b))
    }

    pub fn pow(a: Expr, n: u32) -> Expr {
        Expr::PowInt(Box::new(a), n)
    }

    pub fn neg(a: Expr) -> Expr {
        Expr::Neg(Box::new(a))
    }

    pub fn call(f: Func, a: Expr) -> Expr {
        Expr::Call(f, Box::new(a))
    }

    /// Evaluates at `x`, failing on log/sqrt/division domain violations or
    /// non-finite results.
    pub fn eval(&self, x: f64) -> Result<f64> {
        let value = match self {
            Expr::Const(c) => *c,
            Expr::Var => x,
            Expr::Add(a, b) => a.eval(x)? + b.eval(x)?,
            Expr::Sub(a, b) => a.eval(x)? - b.eval(x)?,
            Expr::Mul(a, b) => a.eval(x)? * b.eval(x)?,
            Expr::Div(a, b) => {
                let num = a.eval(x)?;
                let den = b.eval(x)?;
                if den == 0.0 {
                    return Err(self.domain_error(x, "division by zero"));
                }
                num / den
            }
            Expr::PowInt(a, n) => a.eval(x)?.powi(*n as i32),
            Expr::Neg(a) => -a.eval(x)?,
            Expr::Call(f, a) => {
                let v = a.eval(x)?;
                match f {
                    Func::Sin => v.sin(),
                    Func::Cos => v.cos(),
                    Func::Exp => v.exp(),
                    Func::Sqrt => {
                        if v < 0.0 {
                            return Err(self.domain_error(x, "square root of a negative number"));
                        }
                        v.sqrt()
                    }
                    Func::Log => {
                        if v <= 0.0 {
                            return Err(self.domain_error(x, "logarithm of a nonpositive number"));
                        }
                        v.ln()
                    }
                    Func::Relu => v.max(0.0),
                    Func::Abs => v.abs(),
                }
            }
        };
        if value.is_finite() {
            Ok(value)
        } else {
            Err(self.domain_error(x, "non-finite result"))
        }
    }

    pub(crate) fn domain_error(&self, x: f64, reason: &str) -> Error {
        Error::Domain {
            node: self.to_string(),
            at: x,
            reason: reason.to_string(),
        }
    }

    /// Returns `(c, d)` when the expression is structurally `c + x·d`.
    pub fn as_affine(&self) -> Option<(f64, f64)> {
        let pair = match self {
            Expr::Const(c) => (*c, 0.0),
            Expr::Var => (0.0, 1.0),
            Expr::Add(a, b) => {
                let (ca, da) = a.as_affine()?;
                let (cb, db) = b.as_affine()?;
                (ca + cb, da + db)
            }
            Expr::Sub(a, b) => {
                let (ca, da) = a.as_affine()?;
                let (cb, db) = b.as_affine()?;
                (ca - cb, da - db)
            }
            Expr::Neg(a) => {
                let (c, d) = a.as_affine()?;
                (-c, -d)
            }
            Expr::Mul(a, b) => {
                let (ca, da) = a.as_affine()?;
                let (cb, db) = b.as_affine()?;
                if da == 0.0 {
                    (ca * cb, ca * db)
                } else if db == 0.0 {
                    (ca * cb, da * cb)
                } else {
                    return None;
                }
            }
            Expr::Div(a, b) => {
                let (ca, da) = a.as_affine()?;
                let (cb, db) = b.as_affine()?;
                if db != 0.0 || cb == 0.0 {
                    return None;
                }
                (ca / cb, da / cb)
            }
            Expr::PowInt(a, n) => match n {
                0 => (1.0, 0.0),
                1 => a.as_affine()?,
                _ => {
                    let (c, d) = a.as_affine()?;
                    if d != 0.0 {
                        return None;
                    }
                    (c.powi(*n as i32), 0.0)
                }
            },
            Expr::Call(_, a) => {
                let (_, d) = a.as_affine()?;
                if d != 0.0 {
                    return None;
                }
                (self.eval(0.0).ok()?, 0.0)
            }
        };
        (pair.0.is_finite() && pair.1.is_finite()).then_some(pair)
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(_) => 3,
            Expr::PowInt(..) => 4,
            Expr::Const(c) if c.is_sign_negative() => 3,
            Expr::Const(_) | Expr::Var | Expr::Call(..) => 5,
        }
    }

    fn fmt_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.precedence() < min {
            write!(f, "(")?;
            self.fmt_at(f, 0)?;
            return write!(f, ")");
        }
        match self {
            Expr::Const(c) => write!(f, "{c:?}"),
            Expr::Var => write!(f, "x"),
            Expr::Add(a, b) => {
                a.fmt_at(f, 1)?;
                write!(f, " + ")?;
                b.fmt_at(f, 2)
            }
            Expr::Sub(a, b) => {
                a.fmt_at(f, 1)?;
                write!(f, " - ")?;
                b.fmt_at(f, 2)
            }
            Expr::Mul(a, b) => {
                a.fmt_at(f, 2)?;
                write!(f, "*")?;
                b.fmt_at(f, 3)
            }
            Expr::Div(a, b) => {
                a.fmt_at(f, 2)?;
                write!(f, "/")?;
                b.fmt_at(f, 3)
            }
            Expr::Neg(a) => {
                write!(f, "-")?;
                a.fmt_at(f, 3)
            }
            Expr::PowInt(a, n) => {
                a.fmt_at(f, 5)?;
                write!(f, "^{n}")
            }
            Expr::Call(func, a) => {
                write!(f, "{}(", func.name())?;
                a.fmt_at(f, 0)?;
                write!(f, ")")
            }
        }
    }
}

/// Prints in the input grammar; `parse(&e.to_string())` reproduces `e`
/// for every tree the parser can produce.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_at(f, 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_expr;

    #[test]
    fn eval_examples() {
        assert_eq!(parse_expr("x^2").unwrap().eval(3.0).unwrap(), 9.0);
        assert_eq!(parse_expr("relu(x)").unwrap().eval(-0.5).unwrap(), 0.0);
        assert_eq!(parse_expr("relu(x)").unwrap().eval(0.5).unwrap(), 0.5);
        assert!(matches!(
            parse_expr("log(x)").unwrap().eval(0.0),
            Err(Error::Domain { .. })
        ));
        assert!(matches!(
            parse_expr("1/x").unwrap().eval(0.0),
            Err(Error::Domain { .. })
        ));
        assert!(matches!(
            parse_expr("sqrt(x)").unwrap().eval(-1.0),
            Err(Error::Domain { .. })
        ));
        assert!(parse_expr("exp(x)").unwrap().eval(1000.0).is_err());
    }

    #[test]
    fn domain_error_names_node() {
        let err = parse_expr("1 + log(x - 1)").unwrap().eval(0.5).unwrap_err();
        match err {
            Error::Domain { node, at, .. } => {
                assert_eq!(node, "log(x - 1.0)");
                assert_eq!(at, 0.5);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn affine_detection() {
        assert_eq!(parse_expr("1 + 2*x").unwrap().as_affine(), Some((1.0, 2.0)));
        assert_eq!(parse_expr("(x - 3)/2").unwrap().as_affine(), Some((-1.5, 0.5)));
        assert_eq!(parse_expr("-x").unwrap().as_affine(), Some((-0.0, -1.0)));
        assert_eq!(parse_expr("x*x").unwrap().as_affine(), None);
        assert_eq!(parse_expr("sin(x)").unwrap().as_affine(), None);
        assert_eq!(parse_expr("x + sin(0)").unwrap().as_affine(), Some((0.0, 1.0)));
        assert_eq!(parse_expr("1/x").unwrap().as_affine(), None);
    }

    #[test]
    fn display_minimal_parentheses() {
        let cases = [
            ("x^2 + 1", "x^2 + 1.0"),
            ("sin(x)*exp(x)", "sin(x)*exp(x)"),
            ("(x + 1)^3", "(x + 1.0)^3"),
            ("x - (x - 1)", "x - (x - 1.0)"),
            ("-(x*x)", "-(x*x)"),
            ("-x*x", "-x*x"),
            ("x/(x*2)", "x/(x*2.0)"),
        ];
        for (src, printed) in cases {
            assert_eq!(parse_expr(src).unwrap().to_string(), printed);
        }
    }
}
