use super::ast::{BinOp, Expr, Func};
use super::jet::Jet;
use crate::error::{Error, Result};

/// How each variable enters a jet evaluation: its value, and the local
/// slot (0 or 1) if it is one of the active variables.
pub(crate) struct Binding<'a> {
    pub values: &'a [f64],
    pub slots: [Option<usize>; 2],
    pub order: usize,
}

fn domain(e: &Expr, reason: &str) -> Error {
    Error::Domain {
        subexpr: e.to_string(),
        reason: reason.to_string(),
    }
}

fn checked(e: &Expr, j: Jet) -> Result<Jet> {
    if j.is_finite() {
        Ok(j)
    } else {
        Err(domain(e, "non-finite result"))
    }
}

pub(crate) fn eval(e: &Expr, b: &Binding) -> Result<Jet> {
    let order = b.order;
    match e {
        Expr::Num(x) => Ok(Jet::constant(*x, order)),
        Expr::Const(_, x) => Ok(Jet::constant(*x, order)),
        Expr::Var(i, _) => {
            let x = b.values[*i];
            match b.slots.iter().position(|s| *s == Some(*i)) {
                Some(slot) => Ok(Jet::variable(slot, x, order)),
                None => Ok(Jet::constant(x, order)),
            }
        }
        Expr::Neg(a) => Ok(-eval(a, b)?),
        Expr::Bin(op, l, r) => {
            let x = eval(l, b)?;
            let y = eval(r, b)?;
            let out = match op {
                BinOp::Add => x + y,
                BinOp::Sub => x - y,
                BinOp::Mul => x * y,
                BinOp::Div => x * y.recip().ok_or_else(|| domain(e, "division by zero"))?,
                BinOp::Pow => power(e, x, y)?,
            };
            checked(e, out)
        }
        Expr::Call(f, args) => {
            let x = eval(&args[0], b)?;
            let out = match f {
                Func::Sin => x.sin(),
                Func::Cos => x.cos(),
                Func::Tan => {
                    let t = x.value().tan();
                    let s = 1.0 + t * t;
                    x.compose([t, s, 2.0 * t * s, 2.0 * s * (1.0 + 3.0 * t * t)])
                }
                Func::Asin | Func::Acos => {
                    let v = x.value();
                    if v.abs() > 1.0 || (v.abs() == 1.0 && x.order() > 0) {
                        return Err(domain(e, "argument outside (-1, 1)"));
                    }
                    let q = 1.0 - v * v;
                    let r = 1.0 / q.sqrt();
                    let sg = if *f == Func::Asin { 1.0 } else { -1.0 };
                    let v0 = if *f == Func::Asin { v.asin() } else { v.acos() };
                    x.compose([v0, sg * r, sg * v * r / q, sg * (1.0 + 2.0 * v * v) * r / (q * q)])
                }
                Func::Atan => atan(&x),
                Func::Atan2 => {
                    let xx = eval(&args[1], b)?;
                    atan2(e, x, xx)?
                }
                Func::Sinh => {
                    let (s, c) = (x.value().sinh(), x.value().cosh());
                    x.compose([s, c, s, c])
                }
                Func::Cosh => {
                    let (s, c) = (x.value().sinh(), x.value().cosh());
                    x.compose([c, s, c, s])
                }
                Func::Tanh => {
                    let t = x.value().tanh();
                    let s = 1.0 - t * t;
                    x.compose([t, s, -2.0 * t * s, -2.0 * s * (1.0 - 3.0 * t * t)])
                }
                Func::Exp => x.exp(),
                Func::Ln => x.ln().ok_or_else(|| domain(e, "logarithm of a non-positive value"))?,
                Func::Sqrt => x.sqrt().ok_or_else(|| {
                    domain(e, "square root of a negative value (or of zero with derivatives)")
                })?,
                Func::Abs => {
                    let v = x.value();
                    if v == 0.0 && x.order() > 0 {
                        return Err(domain(e, "abs is not differentiable at zero"));
                    }
                    x * v.signum()
                }
            };
            checked(e, out)
        }
    }
}

fn atan(x: &Jet) -> Jet {
    let v = x.value();
    let q = 1.0 + v * v;
    x.compose([
        v.atan(),
        1.0 / q,
        -2.0 * v / (q * q),
        (6.0 * v * v - 2.0) / (q * q * q),
    ])
}

/// Branch-safe atan2: differentiate through whichever of y/x or x/y is
/// bounded, then pin the value to the quadrant-correct angle.
fn atan2(e: &Expr, y: Jet, x: Jet) -> Result<Jet> {
    let (y0, x0) = (y.value(), x.value());
    if y0 == 0.0 && x0 == 0.0 {
        return Err(domain(e, "atan2 of (0, 0)"));
    }
    let mut j = if x0.abs() >= y0.abs() {
        atan(&(y * x.recip().expect("nonzero")))
    } else {
        -atan(&(x * y.recip().expect("nonzero")))
    };
    let shift = y0.atan2(x0) - j.value();
    j = j + shift;
    Ok(j)
}

fn power(e: &Expr, x: Jet, y: Jet) -> Result<Jet> {
    let exponent_is_constant = y.order() == 0 || (1..=y.order()).all(|n| (0..=n).all(|a| y.coefficient(a, n - a) == 0.0));
    if exponent_is_constant {
        return x.powf(y.value()).ok_or_else(|| {
            if x.value() < 0.0 {
                domain(e, "negative base with non-integer exponent")
            } else {
                domain(e, "zero base with a derivative of negative power")
            }
        });
    }
    let lx = x
        .ln()
        .ok_or_else(|| domain(e, "variable exponent needs a positive base"))?;
    Ok((y * lx).exp())
}
