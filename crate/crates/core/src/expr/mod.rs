//! Closed-form scalar expressions in `u`, `v`, `w` and their exact
//! derivatives.
//!
//! Expressions are parsed once into an immutable [`Expression`] and then
//! evaluated on plain values or on truncated Taylor jets ([`Jet3`],
//! [`BiJet2`]). The grammar is documented in `docs/expr.md`.

mod eval;
mod jet;
mod parse;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

pub use eval::{eval_bijet2, eval_f64, eval_jet3, eval_scalar, Vars};
pub use jet::{BiJet1, BiJet2, Jet3, Scalar};
pub use parse::parse;

/// Named real constants available to expressions.
pub type Bindings = BTreeMap<String, f64>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExprError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { name: String, offset: usize },
    #[error("variable `{name}` is not available in this context")]
    UnavailableVariable { name: &'static str },
    #[error("division by zero")]
    DivisionByZero,
    #[error("domain error in {op}({arg})")]
    Domain { op: &'static str, arg: f64 },
    #[error("evaluation produced a non-finite value")]
    NonFinite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    U,
    V,
    W,
}

impl Var {
    pub fn name(self) -> &'static str {
        match self {
            Var::U => "u",
            Var::V => "v",
            Var::W => "w",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnaryOp {
    Neg,
    Sin,
    Cos,
    Tan,
    Exp,
    Log,
    Sqrt,
    Abs,
    Sign,
}

impl UnaryOp {
    pub(crate) fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "sin" => UnaryOp::Sin,
            "cos" => UnaryOp::Cos,
            "tan" => UnaryOp::Tan,
            "exp" => UnaryOp::Exp,
            "log" | "ln" => UnaryOp::Log,
            "sqrt" => UnaryOp::Sqrt,
            "abs" => UnaryOp::Abs,
            "sign" => UnaryOp::Sign,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            UnaryOp::Neg => "-",
            UnaryOp::Sin => "sin",
            UnaryOp::Cos => "cos",
            UnaryOp::Tan => "tan",
            UnaryOp::Exp => "exp",
            UnaryOp::Log => "log",
            UnaryOp::Sqrt => "sqrt",
            UnaryOp::Abs => "abs",
            UnaryOp::Sign => "sign",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
            BinOp::Pow => '^',
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Num(f64),
    Var(Var),
    /// A named constant, resolved against the bindings (or `pi`) at evaluation.
    Const { name: String, offset: usize },
    Unary(UnaryOp, Box<Node>),
    Binary(BinOp, Box<Node>, Box<Node>),
}

/// A parsed expression.
#[derive(Debug, Clone, PartialEq)]
pub struct Expression {
    root: Node,
}

impl Expression {
    pub fn parse(text: &str) -> Result<Self, ExprError> {
        parse(text)
    }

    pub fn from_node(root: Node) -> Self {
        Self { root }
    }

    pub fn constant(c: f64) -> Self {
        Self { root: Node::Num(c) }
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    pub fn uses(&self, var: Var) -> bool {
        fn walk(n: &Node, var: Var) -> bool {
            match n {
                Node::Var(x) => *x == var,
                Node::Num(_) | Node::Const { .. } => false,
                Node::Unary(_, a) => walk(a, var),
                Node::Binary(_, a, b) => walk(a, var) || walk(b, var),
            }
        }
        walk(&self.root, var)
    }

    /// Checks that every named constant is bound and that only the allowed
    /// variables occur.
    pub fn check(&self, allowed: &[Var], bindings: &Bindings) -> Result<(), ExprError> {
        fn walk(n: &Node, allowed: &[Var], b: &Bindings) -> Result<(), ExprError> {
            match n {
                Node::Num(_) => Ok(()),
                Node::Var(x) if allowed.contains(x) => Ok(()),
                Node::Var(x) => Err(ExprError::UnavailableVariable { name: x.name() }),
                Node::Const { name, offset } => {
                    if b.contains_key(name) || name == "pi" {
                        Ok(())
                    } else {
                        Err(ExprError::UnknownIdentifier { name: name.clone(), offset: *offset })
                    }
                }
                Node::Unary(_, a) => walk(a, allowed, b),
                Node::Binary(_, a, c) => {
                    walk(a, allowed, b)?;
                    walk(c, allowed, b)
                }
            }
        }
        walk(&self.root, allowed, bindings)
    }
}

impl std::str::FromStr for Expression {
    type Err = ExprError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::Num(x) if *x < 0.0 => write!(f, "(-{})", -x),
            Node::Num(x) => write!(f, "{x}"),
            Node::Var(v) => f.write_str(v.name()),
            Node::Const { name, .. } => f.write_str(name),
            Node::Unary(UnaryOp::Neg, a) => write!(f, "(-{a})"),
            Node::Unary(op, a) => write!(f, "{}({a})", op.name()),
            Node::Binary(op, a, b) => write!(f, "({a} {} {b})", op.symbol()),
        }
    }
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.root.fmt(f)
    }
}
