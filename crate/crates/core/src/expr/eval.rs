use std::f64::consts::PI;

use super::{BiJet2, BinOp, Bindings, ExprError, Expression, Jet3, Node, Scalar, UnaryOp, Var};

/// Denominators (and tangent arguments' cosines) smaller than this in
/// magnitude are reported as poles.
pub const POLE_TOL: f64 = 1e-12;

/// Largest integer exponent evaluated by repeated multiplication.
const MAX_INT_POWER: f64 = 1024.0;

/// Values bound to the variables of an expression. `None` marks a variable
/// that is not available in the current context.
#[derive(Debug, Clone, Copy)]
pub struct Vars<T> {
    pub u: Option<T>,
    pub v: Option<T>,
    pub w: Option<T>,
}

impl<T> Vars<T> {
    pub fn only_u(u: T) -> Self {
        Self { u: Some(u), v: None, w: None }
    }
}

/// Evaluates `e` on an arbitrary [`Scalar`], checking every elementary
/// operation for domain violations. Never returns a non-finite result.
pub fn eval_scalar<T: Scalar>(e: &Expression, vars: &Vars<T>, b: &Bindings) -> Result<T, ExprError> {
    let out = eval_node(e.root(), vars, b)?;
    if out.is_finite() {
        Ok(out)
    } else {
        Err(ExprError::NonFinite)
    }
}

/// Value of an expression in `u` alone.
pub fn eval_f64(e: &Expression, u: f64, b: &Bindings) -> Result<f64, ExprError> {
    eval_scalar(e, &Vars::only_u(u), b)
}

/// Value and the first three `u`-derivatives of an expression in `u`.
pub fn eval_jet3(e: &Expression, u: f64, b: &Bindings) -> Result<Jet3, ExprError> {
    eval_scalar(e, &Vars::only_u(Jet3::var(u)), b)
}

/// Value and `(u, v)` partials up to order two. `w` is supplied as a
/// precomputed jet so that expressions referencing it pick up the chain rule
/// through `w(u, v)`.
pub fn eval_bijet2(e: &Expression, u: f64, v: f64, w: BiJet2, b: &Bindings) -> Result<BiJet2, ExprError> {
    let vars = Vars { u: Some(BiJet2::var_u(u)), v: Some(BiJet2::var_v(v)), w: Some(w) };
    eval_scalar(e, &vars, b)
}

fn eval_node<T: Scalar>(n: &Node, vars: &Vars<T>, b: &Bindings) -> Result<T, ExprError> {
    Ok(match n {
        Node::Num(x) => T::cst(*x),
        Node::Var(var) => {
            let slot = match var {
                Var::U => vars.u,
                Var::V => vars.v,
                Var::W => vars.w,
            };
            slot.ok_or(ExprError::UnavailableVariable { name: var.name() })?
        }
        Node::Const { name, offset } => match b.get(name) {
            Some(x) => T::cst(*x),
            None if name == "pi" => T::cst(PI),
            None => return Err(ExprError::UnknownIdentifier { name: name.clone(), offset: *offset }),
        },
        Node::Unary(op, a) => unary(*op, eval_node(a, vars, b)?)?,
        Node::Binary(op, l, r) => {
            let x = eval_node(l, vars, b)?;
            let y = eval_node(r, vars, b)?;
            match op {
                BinOp::Add => x + y,
                BinOp::Sub => x - y,
                BinOp::Mul => x * y,
                BinOp::Div => {
                    if y.value().abs() < POLE_TOL {
                        return Err(ExprError::DivisionByZero);
                    }
                    x / y
                }
                BinOp::Pow => pow(x, y)?,
            }
        }
    })
}

fn unary<T: Scalar>(op: UnaryOp, x: T) -> Result<T, ExprError> {
    let a = x.value();
    let domain = |op: &'static str| ExprError::Domain { op, arg: a };
    Ok(match op {
        UnaryOp::Neg => -x,
        UnaryOp::Sin => x.sin(),
        UnaryOp::Cos => x.cos(),
        UnaryOp::Tan => {
            if a.cos().abs() < POLE_TOL {
                return Err(domain("tan"));
            }
            x.tan()
        }
        UnaryOp::Exp => x.exp(),
        UnaryOp::Log => {
            if a <= 0.0 {
                return Err(domain("log"));
            }
            x.ln()
        }
        UnaryOp::Sqrt => {
            if a > 0.0 {
                x.sqrt()
            } else if a == 0.0 && x.is_const() {
                T::cst(0.0)
            } else {
                return Err(domain("sqrt"));
            }
        }
        UnaryOp::Abs => {
            if a == 0.0 && !x.is_const() {
                return Err(domain("abs"));
            }
            x.abs()
        }
        UnaryOp::Sign => {
            if a == 0.0 && !x.is_const() {
                return Err(domain("sign"));
            }
            x.signum()
        }
    })
}

fn pow<T: Scalar>(base: T, exponent: T) -> Result<T, ExprError> {
    let n = exponent.value();
    if exponent.is_const() && n.fract() == 0.0 && n.abs() <= MAX_INT_POWER {
        if n < 0.0 && base.value().abs() < POLE_TOL {
            return Err(ExprError::DivisionByZero);
        }
        return Ok(base.powi(n as i32));
    }
    if base.value() <= 0.0 {
        return Err(ExprError::Domain { op: "pow", arg: base.value() });
    }
    Ok((exponent * base.ln()).exp())
}
