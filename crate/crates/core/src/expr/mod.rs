//! Scalar expression language for chart functions.
//!
//! Expressions range over the chart coordinates `x1..xD` and are evaluated
//! over any [`Scalar`], so binding dual numbers yields exact derivatives.
//! The grammar is documented in `docs/grammar.md`.

mod parser;

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::numeric::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Exp,
    Log,
    Sin,
    Cos,
    Sinh,
    Cosh,
    Sqrt,
}

impl Func {
    pub fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "sinh" => Func::Sinh,
            "cosh" => Func::Cosh,
            "sqrt" => Func::Sqrt,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Sqrt => "sqrt",
        }
    }
}

/// Expression tree node. Variables are stored zero-based.
#[derive(Clone, Debug, PartialEq)]
pub enum Node {
    Num(f64),
    Var(usize),
    Neg(Box<Node>),
    Bin(BinOp, Box<Node>, Box<Node>),
    Pow(Box<Node>, i32),
    Call(Func, Box<Node>),
}

/// A parsed expression together with the chart dimension it was parsed for.
#[derive(Clone, Debug, PartialEq)]
pub struct Expr {
    dim: usize,
    root: Node,
}

impl Expr {
    /// Parses `text` over the variables `x1..x{dim}`.
    pub fn parse(text: &str, dim: usize) -> Result<Expr> {
        let root = parser::parse(text, dim)?;
        Ok(Expr { dim, root })
    }

    /// Wraps a node built programmatically. Fails if a variable index is
    /// out of range.
    pub fn from_node(root: Node, dim: usize) -> Result<Expr> {
        if let Some(&v) = free_vars_of(&root).iter().next_back() {
            if v >= dim {
                return Err(Error::UnknownIdentifier {
                    name: format!("x{}", v + 1),
                    offset: 0,
                });
            }
        }
        Ok(Expr { dim, root })
    }

    pub fn constant(value: f64, dim: usize) -> Expr {
        Expr {
            dim,
            root: Node::Num(value),
        }
    }

    /// The coordinate `x{index+1}`.
    pub fn variable(index: usize, dim: usize) -> Expr {
        assert!(index < dim, "variable index out of range");
        Expr {
            dim,
            root: Node::Var(index),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    /// True when the expression is a numeric literal equal to `v`.
    pub fn is_literal(&self, v: f64) -> bool {
        matches!(self.root, Node::Num(x) if x == v)
    }

    /// One-based indices of the variables that occur in the expression.
    pub fn free_vars(&self) -> BTreeSet<usize> {
        free_vars_of(&self.root).into_iter().map(|v| v + 1).collect()
    }

    pub fn evaluate<S: Scalar>(&self, bindings: &[S]) -> Result<S> {
        if bindings.len() != self.dim {
            return Err(Error::BindingLength {
                expected: self.dim,
                found: bindings.len(),
            });
        }
        eval_node(&self.root, bindings)
    }

    /// Fully parenthesised rendering; re-parsing it gives the same tree.
    pub fn to_text(&self) -> String {
        self.root.to_string()
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.root)
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::Num(v) => write!(f, "{v}"),
            Node::Var(i) => write!(f, "x{}", i + 1),
            Node::Neg(a) => write!(f, "(-{a})"),
            Node::Bin(op, a, b) => {
                let sym = match op {
                    BinOp::Add => "+",
                    BinOp::Sub => "-",
                    BinOp::Mul => "*",
                    BinOp::Div => "/",
                };
                write!(f, "({a} {sym} {b})")
            }
            Node::Pow(a, k) => write!(f, "({a}^{k})"),
            Node::Call(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}

fn free_vars_of(node: &Node) -> BTreeSet<usize> {
    let mut out = BTreeSet::new();
    collect_vars(node, &mut out);
    out
}

fn collect_vars(node: &Node, out: &mut BTreeSet<usize>) {
    match node {
        Node::Num(_) => {}
        Node::Var(i) => {
            out.insert(*i);
        }
        Node::Neg(a) | Node::Pow(a, _) | Node::Call(_, a) => collect_vars(a, out),
        Node::Bin(_, a, b) => {
            collect_vars(a, out);
            collect_vars(b, out);
        }
    }
}

fn domain(node: &Node, reason: &str) -> Error {
    Error::EvaluationDomain {
        subexpr: node.to_string(),
        reason: reason.to_string(),
    }
}

fn eval_node<S: Scalar>(node: &Node, x: &[S]) -> Result<S> {
    let out = match node {
        Node::Num(v) => S::constant(*v),
        Node::Var(i) => x[*i].clone(),
        Node::Neg(a) => -eval_node(a, x)?,
        Node::Bin(op, a, b) => {
            let l = eval_node(a, x)?;
            let r = eval_node(b, x)?;
            match op {
                BinOp::Add => l + r,
                BinOp::Sub => l - r,
                BinOp::Mul => l * r,
                BinOp::Div => {
                    if r.value() == 0.0 {
                        return Err(domain(node, "division by zero"));
                    }
                    l / r
                }
            }
        }
        Node::Pow(a, k) => {
            let b = eval_node(a, x)?;
            if *k < 0 && b.value() == 0.0 {
                return Err(domain(node, "negative power of zero"));
            }
            b.powi(*k)
        }
        Node::Call(func, a) => {
            let v = eval_node(a, x)?;
            match func {
                Func::Exp => v.exp(),
                Func::Log => {
                    if v.value() <= 0.0 {
                        return Err(domain(node, "logarithm of a non-positive value"));
                    }
                    v.ln()
                }
                Func::Sin => v.sin(),
                Func::Cos => v.cos(),
                Func::Sinh => v.sinh(),
                Func::Cosh => v.cosh(),
                Func::Sqrt => {
                    if v.value() < 0.0 {
                        return Err(domain(node, "square root of a negative value"));
                    }
                    v.sqrt()
                }
            }
        }
    };
    if !out.is_finite() {
        return Err(domain(node, "non-finite value"));
    }
    Ok(out)
}
