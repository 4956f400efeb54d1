//! First- and second-order forward-mode dual numbers.
//!
//! Gradient vectors are sized to the full active coordinate set of the
//! enclosing computation. An empty gradient (or Hessian) stands for an
//! identically zero one, which lets constants be lifted without knowing
//! the active dimension.

use std::ops::{Add, Div, Mul, Neg, Sub};

use super::matrix::Matrix;
use super::scalar::Scalar;

/// Value plus exact gradient.
#[derive(Clone, Debug, PartialEq)]
pub struct Dual1 {
    pub value: f64,
    pub grad: Vec<f64>,
}

/// Value, gradient and Hessian. The Hessian is stored as its packed lower
/// triangle, so it is symmetric by construction.
#[derive(Clone, Debug, PartialEq)]
pub struct Dual2 {
    pub value: f64,
    pub grad: Vec<f64>,
    hess: Vec<f64>,
}

/// `a * ca + b * cb`, treating an empty slice as zeros.
fn lincomb(a: &[f64], ca: f64, b: &[f64], cb: f64) -> Vec<f64> {
    match (a.is_empty(), b.is_empty()) {
        (true, true) => Vec::new(),
        (false, true) => a.iter().map(|x| x * ca).collect(),
        (true, false) => b.iter().map(|x| x * cb).collect(),
        (false, false) => {
            debug_assert_eq!(a.len(), b.len(), "dual gradient length mismatch");
            a.iter().zip(b).map(|(x, y)| x * ca + y * cb).collect()
        }
    }
}

fn tri_index(i: usize, j: usize) -> usize {
    let (r, c) = if i >= j { (i, j) } else { (j, i) };
    r * (r + 1) / 2 + c
}

impl Dual1 {
    pub fn new(value: f64, grad: Vec<f64>) -> Self {
        Self { value, grad }
    }

    /// The `index`-th of `dim` independent variables, seeded at `value`.
    pub fn variable(value: f64, index: usize, dim: usize) -> Self {
        let mut grad = vec![0.0; dim];
        grad[index] = 1.0;
        Self { value, grad }
    }

    /// Seeds every coordinate of `x` as an independent variable.
    pub fn variables(x: &[f64]) -> Vec<Self> {
        (0..x.len()).map(|i| Self::variable(x[i], i, x.len())).collect()
    }

    /// Partial derivative along coordinate `k` (zero for lifted constants).
    pub fn d(&self, k: usize) -> f64 {
        self.grad.get(k).copied().unwrap_or(0.0)
    }

    fn chain(&self, f0: f64, f1: f64) -> Self {
        Self {
            value: f0,
            grad: self.grad.iter().map(|g| g * f1).collect(),
        }
    }
}

impl Dual2 {
    pub fn variable(value: f64, index: usize, dim: usize) -> Self {
        let mut grad = vec![0.0; dim];
        grad[index] = 1.0;
        Self {
            value,
            grad,
            hess: vec![0.0; dim * (dim + 1) / 2],
        }
    }

    pub fn variables(x: &[f64]) -> Vec<Self> {
        (0..x.len()).map(|i| Self::variable(x[i], i, x.len())).collect()
    }

    pub fn d(&self, k: usize) -> f64 {
        self.grad.get(k).copied().unwrap_or(0.0)
    }

    /// Second partial derivative; symmetric in `(i, j)` exactly.
    pub fn d2(&self, i: usize, j: usize) -> f64 {
        self.hess.get(tri_index(i, j)).copied().unwrap_or(0.0)
    }

    /// Full symmetric Hessian of size `dim`.
    pub fn hessian(&self, dim: usize) -> Matrix<f64> {
        Matrix::from_fn(dim, dim, |i, j| self.d2(i, j))
    }

    /// Drops the second-order part.
    pub fn first_order(&self) -> Dual1 {
        Dual1::new(self.value, self.grad.clone())
    }

    /// Outer product `a bᵀ + b aᵀ` in packed lower storage.
    fn sym_outer(a: &[f64], b: &[f64]) -> Vec<f64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let d = a.len();
        let mut out = Vec::with_capacity(d * (d + 1) / 2);
        for i in 0..d {
            for j in 0..=i {
                out.push(a[i] * b[j] + b[i] * a[j]);
            }
        }
        out
    }

    fn chain(&self, f0: f64, f1: f64, f2: f64) -> Self {
        let gg = Self::sym_outer(&self.grad, &self.grad);
        // sym_outer doubles the square, so halve f2
        let hess = lincomb(&self.hess, f1, &gg, 0.5 * f2);
        Self {
            value: f0,
            grad: self.grad.iter().map(|g| g * f1).collect(),
            hess,
        }
    }
}

impl Add for Dual1 {
    type Output = Dual1;
    fn add(self, rhs: Dual1) -> Dual1 {
        Dual1::new(self.value + rhs.value, lincomb(&self.grad, 1.0, &rhs.grad, 1.0))
    }
}

impl Sub for Dual1 {
    type Output = Dual1;
    fn sub(self, rhs: Dual1) -> Dual1 {
        Dual1::new(self.value - rhs.value, lincomb(&self.grad, 1.0, &rhs.grad, -1.0))
    }
}

impl Mul for Dual1 {
    type Output = Dual1;
    fn mul(self, rhs: Dual1) -> Dual1 {
        Dual1::new(
            self.value * rhs.value,
            lincomb(&self.grad, rhs.value, &rhs.grad, self.value),
        )
    }
}

impl Div for Dual1 {
    type Output = Dual1;
    fn div(self, rhs: Dual1) -> Dual1 {
        let inv = 1.0 / rhs.value;
        let q = self.value * inv;
        Dual1::new(q, lincomb(&self.grad, inv, &rhs.grad, -q * inv))
    }
}

impl Neg for Dual1 {
    type Output = Dual1;
    fn neg(self) -> Dual1 {
        Dual1::new(-self.value, self.grad.iter().map(|g| -g).collect())
    }
}

impl Add for Dual2 {
    type Output = Dual2;
    fn add(self, rhs: Dual2) -> Dual2 {
        Dual2 {
            value: self.value + rhs.value,
            grad: lincomb(&self.grad, 1.0, &rhs.grad, 1.0),
            hess: lincomb(&self.hess, 1.0, &rhs.hess, 1.0),
        }
    }
}

impl Sub for Dual2 {
    type Output = Dual2;
    fn sub(self, rhs: Dual2) -> Dual2 {
        Dual2 {
            value: self.value - rhs.value,
            grad: lincomb(&self.grad, 1.0, &rhs.grad, -1.0),
            hess: lincomb(&self.hess, 1.0, &rhs.hess, -1.0),
        }
    }
}

impl Mul for Dual2 {
    type Output = Dual2;
    fn mul(self, rhs: Dual2) -> Dual2 {
        let cross = Dual2::sym_outer(&self.grad, &rhs.grad);
        let hess = lincomb(&self.hess, rhs.value, &rhs.hess, self.value);
        Dual2 {
            value: self.value * rhs.value,
            grad: lincomb(&self.grad, rhs.value, &rhs.grad, self.value),
            hess: lincomb(&hess, 1.0, &cross, 1.0),
        }
    }
}

impl Div for Dual2 {
    type Output = Dual2;
    fn div(self, rhs: Dual2) -> Dual2 {
        let v = rhs.value;
        let recip = rhs.chain(1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v));
        self * recip
    }
}

impl Neg for Dual2 {
    type Output = Dual2;
    fn neg(self) -> Dual2 {
        Dual2 {
            value: -self.value,
            grad: self.grad.iter().map(|g| -g).collect(),
            hess: self.hess.iter().map(|h| -h).collect(),
        }
    }
}

impl Scalar for Dual1 {
    fn constant(v: f64) -> Self {
        Dual1::new(v, Vec::new())
    }

    fn value(&self) -> f64 {
        self.value
    }

    fn exp(&self) -> Self {
        let e = self.value.exp();
        self.chain(e, e)
    }

    fn ln(&self) -> Self {
        self.chain(self.value.ln(), 1.0 / self.value)
    }

    fn sin(&self) -> Self {
        self.chain(self.value.sin(), self.value.cos())
    }

    fn cos(&self) -> Self {
        self.chain(self.value.cos(), -self.value.sin())
    }

    fn sinh(&self) -> Self {
        self.chain(self.value.sinh(), self.value.cosh())
    }

    fn cosh(&self) -> Self {
        self.chain(self.value.cosh(), self.value.sinh())
    }

    fn sqrt(&self) -> Self {
        let s = self.value.sqrt();
        self.chain(s, 0.5 / s)
    }

    fn powi(&self, k: i32) -> Self {
        let f1 = if k == 0 {
            0.0
        } else {
            f64::from(k) * self.value.powi(k - 1)
        };
        self.chain(self.value.powi(k), f1)
    }

    fn is_finite(&self) -> bool {
        self.value.is_finite() && self.grad.iter().all(|g| g.is_finite())
    }

    fn scale(&self, c: f64) -> Self {
        Dual1::new(self.value * c, self.grad.iter().map(|g| g * c).collect())
    }
}

impl Scalar for Dual2 {
    fn constant(v: f64) -> Self {
        Dual2 {
            value: v,
            grad: Vec::new(),
            hess: Vec::new(),
        }
    }

    fn value(&self) -> f64 {
        self.value
    }

    fn exp(&self) -> Self {
        let e = self.value.exp();
        self.chain(e, e, e)
    }

    fn ln(&self) -> Self {
        let v = self.value;
        self.chain(v.ln(), 1.0 / v, -1.0 / (v * v))
    }

    fn sin(&self) -> Self {
        let (s, c) = self.value.sin_cos();
        self.chain(s, c, -s)
    }

    fn cos(&self) -> Self {
        let (s, c) = self.value.sin_cos();
        self.chain(c, -s, -c)
    }

    fn sinh(&self) -> Self {
        let (s, c) = (self.value.sinh(), self.value.cosh());
        self.chain(s, c, s)
    }

    fn cosh(&self) -> Self {
        let (s, c) = (self.value.sinh(), self.value.cosh());
        self.chain(c, s, c)
    }

    fn sqrt(&self) -> Self {
        let s = self.value.sqrt();
        self.chain(s, 0.5 / s, -0.25 / (s * self.value))
    }

    fn powi(&self, k: i32) -> Self {
        let v = self.value;
        let kf = f64::from(k);
        let f1 = if k == 0 { 0.0 } else { kf * v.powi(k - 1) };
        let f2 = if k == 0 || k == 1 {
            0.0
        } else {
            kf * (kf - 1.0) * v.powi(k - 2)
        };
        self.chain(v.powi(k), f1, f2)
    }

    fn is_finite(&self) -> bool {
        self.value.is_finite()
            && self.grad.iter().all(|g| g.is_finite())
            && self.hess.iter().all(|h| h.is_finite())
    }

    fn scale(&self, c: f64) -> Self {
        Dual2 {
            value: self.value * c,
            grad: self.grad.iter().map(|g| g * c).collect(),
            hess: self.hess.iter().map(|h| h * c).collect(),
        }
    }
}
