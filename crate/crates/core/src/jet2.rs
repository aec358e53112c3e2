//! Second-order forward-mode automatic differentiation in two active variables.

use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Magnitude below which a divisor is treated as zero.
pub const DIV_FLOOR: f64 = 1e-300;

/// Active variable selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Var {
    X,
    Y,
}

/// Arithmetic operation selector for [`arithmetic`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    Add,
    Sub,
    Mul,
    Div,
}

/// A value together with its gradient and Hessian in `(x, y)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Jet2 {
    pub value: f64,
    pub dx: f64,
    pub dy: f64,
    pub dxx: f64,
    pub dxy: f64,
    pub dyy: f64,
}

impl Jet2 {
    pub const ZERO: Jet2 = Jet2::constant(0.0);
    pub const ONE: Jet2 = Jet2::constant(1.0);

    pub const fn constant(value: f64) -> Self {
        Jet2 { value, dx: 0.0, dy: 0.0, dxx: 0.0, dxy: 0.0, dyy: 0.0 }
    }

    /// Lifts a coordinate value to a jet with unit gradient in its slot.
    pub const fn lift(which: Var, value: f64) -> Self {
        match which {
            Var::X => Jet2 { value, dx: 1.0, dy: 0.0, dxx: 0.0, dxy: 0.0, dyy: 0.0 },
            Var::Y => Jet2 { value, dx: 0.0, dy: 1.0, dxx: 0.0, dxy: 0.0, dyy: 0.0 },
        }
    }

    pub const fn x(value: f64) -> Self {
        Self::lift(Var::X, value)
    }

    pub const fn y(value: f64) -> Self {
        Self::lift(Var::Y, value)
    }

    pub fn grad(&self) -> [f64; 2] {
        [self.dx, self.dy]
    }

    pub fn hess(&self) -> [[f64; 2]; 2] {
        [[self.dxx, self.dxy], [self.dxy, self.dyy]]
    }

    /// First partial derivative along `v`.
    pub fn d(&self, v: Var) -> f64 {
        match v {
            Var::X => self.dx,
            Var::Y => self.dy,
        }
    }

    /// Second partial derivative along `a` then `b`.
    pub fn dd(&self, a: Var, b: Var) -> f64 {
        match (a, b) {
            (Var::X, Var::X) => self.dxx,
            (Var::Y, Var::Y) => self.dyy,
            _ => self.dxy,
        }
    }

    /// Applies a scalar function given its value and first two derivatives at `self.value`.
    pub fn chain(self, f: f64, f1: f64, f2: f64) -> Self {
        Jet2 {
            value: f,
            dx: f1 * self.dx,
            dy: f1 * self.dy,
            dxx: f1 * self.dxx + f2 * self.dx * self.dx,
            dxy: f1 * self.dxy + f2 * self.dx * self.dy,
            dyy: f1 * self.dyy + f2 * self.dy * self.dy,
        }
    }

    /// Reciprocal, failing when the value is below [`DIV_FLOOR`].
    pub fn recip(self) -> Result<Self> {
        if self.value.abs() < DIV_FLOOR || !self.value.is_finite() {
            return Err(Error::DivisionByZero(self.value));
        }
        let r = 1.0 / self.value;
        Ok(self.chain(r, -r * r, 2.0 * r * r * r))
    }

    pub fn checked_div(self, rhs: Jet2) -> Result<Self> {
        Ok(self * rhs.recip()?)
    }

    pub fn powi(self, n: i32) -> Self {
        match n {
            0 => Jet2::ONE,
            1 => self,
            _ => {
                let v = self.value;
                let nf = f64::from(n);
                self.chain(v.powi(n), nf * v.powi(n - 1), nf * (nf - 1.0) * v.powi(n - 2))
            }
        }
    }

    pub fn sqrt(self) -> Self {
        let s = self.value.sqrt();
        self.chain(s, 0.5 / s, -0.25 / (s * self.value))
    }

    pub fn scale(self, k: f64) -> Self {
        Jet2 {
            value: k * self.value,
            dx: k * self.dx,
            dy: k * self.dy,
            dxx: k * self.dxx,
            dxy: k * self.dxy,
            dyy: k * self.dyy,
        }
    }
}

/// Binary arithmetic with exact propagation of first and second derivatives.
pub fn arithmetic(a: Jet2, b: Jet2, op: Op) -> Result<Jet2> {
    Ok(match op {
        Op::Add => a + b,
        Op::Sub => a - b,
        Op::Mul => a * b,
        Op::Div => a.checked_div(b)?,
    })
}

impl From<f64> for Jet2 {
    fn from(v: f64) -> Self {
        Jet2::constant(v)
    }
}

impl Add for Jet2 {
    type Output = Jet2;
    fn add(self, o: Jet2) -> Jet2 {
        Jet2 {
            value: self.value + o.value,
            dx: self.dx + o.dx,
            dy: self.dy + o.dy,
            dxx: self.dxx + o.dxx,
            dxy: self.dxy + o.dxy,
            dyy: self.dyy + o.dyy,
        }
    }
}

impl Sub for Jet2 {
    type Output = Jet2;
    fn sub(self, o: Jet2) -> Jet2 {
        self + (-o)
    }
}

impl Neg for Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        self.scale(-1.0)
    }
}

impl Mul for Jet2 {
    type Output = Jet2;
    fn mul(self, o: Jet2) -> Jet2 {
        Jet2 {
            value: self.value * o.value,
            dx: self.dx * o.value + self.value * o.dx,
            dy: self.dy * o.value + self.value * o.dy,
            dxx: self.dxx * o.value + 2.0 * self.dx * o.dx + self.value * o.dxx,
            dxy: self.dxy * o.value + self.dx * o.dy + self.dy * o.dx + self.value * o.dxy,
            dyy: self.dyy * o.value + 2.0 * self.dy * o.dy + self.value * o.dyy,
        }
    }
}

/// Unchecked quotient following IEEE semantics; use [`Jet2::checked_div`] near zeros.
impl Div for Jet2 {
    type Output = Jet2;
    fn div(self, o: Jet2) -> Jet2 {
        let r = 1.0 / o.value;
        self * o.chain(r, -r * r, 2.0 * r * r * r)
    }
}

impl Add<f64> for Jet2 {
    type Output = Jet2;
    fn add(mut self, o: f64) -> Jet2 {
        self.value += o;
        self
    }
}

impl Sub<f64> for Jet2 {
    type Output = Jet2;
    fn sub(mut self, o: f64) -> Jet2 {
        self.value -= o;
        self
    }
}

impl Mul<f64> for Jet2 {
    type Output = Jet2;
    fn mul(self, o: f64) -> Jet2 {
        self.scale(o)
    }
}

impl Div<f64> for Jet2 {
    type Output = Jet2;
    fn div(self, o: f64) -> Jet2 {
        self.scale(1.0 / o)
    }
}

impl Add<Jet2> for f64 {
    type Output = Jet2;
    fn add(self, o: Jet2) -> Jet2 {
        o + self
    }
}

impl Sub<Jet2> for f64 {
    type Output = Jet2;
    fn sub(self, o: Jet2) -> Jet2 {
        -o + self
    }
}

impl Mul<Jet2> for f64 {
    type Output = Jet2;
    fn mul(self, o: Jet2) -> Jet2 {
        o.scale(self)
    }
}

impl AddAssign for Jet2 {
    fn add_assign(&mut self, o: Jet2) {
        *self = *self + o;
    }
}

impl SubAssign for Jet2 {
    fn sub_assign(&mut self, o: Jet2) {
        *self = *self - o;
    }
}

impl MulAssign for Jet2 {
    fn mul_assign(&mut self, o: Jet2) {
        *self = *self * o;
    }
}
