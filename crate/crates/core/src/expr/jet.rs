//! Truncated Taylor jets for forward-mode differentiation.
//!
//! Every jet type implements [`Scalar`], so the geometric formulas in this
//! crate are written once and evaluated either on plain `f64` values or on
//! jets that carry the partial derivatives along.
//!
//! Elementary functions are applied through [`Scalar::chain`], which takes the
//! value and the first three derivatives of the outer function at the current
//! value and composes them with the inner jet (Faà di Bruno up to order 3).

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Numeric type usable by the generic formula code.
pub trait Scalar:
    Copy
    + Debug
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn cst(c: f64) -> Self;
    fn value(self) -> f64;
    /// Composes `g ∘ self` given `g`, `g'`, `g''`, `g'''` at `self.value()`.
    fn chain(self, g: [f64; 4]) -> Self;
    /// True when every derivative channel is exactly zero.
    fn is_const(self) -> bool;
    fn is_finite(self) -> bool;

    fn recip(self) -> Self {
        let x = self.value();
        let r = 1.0 / x;
        self.chain([r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r])
    }

    fn sqrt(self) -> Self {
        let x = self.value();
        let s = x.sqrt();
        self.chain([
            s,
            0.5 / s,
            -0.25 / (s * x),
            0.375 / (s * x * x),
        ])
    }

    fn sin(self) -> Self {
        let (s, c) = self.value().sin_cos();
        self.chain([s, c, -s, -c])
    }

    fn cos(self) -> Self {
        let (s, c) = self.value().sin_cos();
        self.chain([c, -s, -c, s])
    }

    fn tan(self) -> Self {
        let t = self.value().tan();
        let sec2 = 1.0 + t * t;
        self.chain([t, sec2, 2.0 * t * sec2, sec2 * (2.0 + 6.0 * t * t)])
    }

    fn exp(self) -> Self {
        let e = self.value().exp();
        self.chain([e, e, e, e])
    }

    fn ln(self) -> Self {
        let x = self.value();
        let r = 1.0 / x;
        self.chain([x.ln(), r, -r * r, 2.0 * r * r * r])
    }

    fn abs(self) -> Self {
        let x = self.value();
        let s = if x < 0.0 { -1.0 } else { 1.0 };
        self.chain([x.abs(), s, 0.0, 0.0])
    }

    fn signum(self) -> Self {
        let x = self.value();
        let s = if x > 0.0 {
            1.0
        } else if x < 0.0 {
            -1.0
        } else {
            0.0
        };
        self.chain([s, 0.0, 0.0, 0.0])
    }

    /// Integer power by repeated squaring; exact in every channel.
    fn powi(self, n: i32) -> Self {
        let mut base = if n < 0 { self.recip() } else { self };
        let mut k = n.unsigned_abs();
        let mut acc = Self::cst(1.0);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base;
            }
            k >>= 1;
            if k > 0 {
                base = base * base;
            }
        }
        acc
    }

    fn scale(self, c: f64) -> Self {
        self * Self::cst(c)
    }
}

impl Scalar for f64 {
    fn cst(c: f64) -> Self {
        c
    }
    fn value(self) -> f64 {
        self
    }
    fn chain(self, g: [f64; 4]) -> Self {
        g[0]
    }
    fn is_const(self) -> bool {
        true
    }
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
    fn recip(self) -> Self {
        1.0 / self
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn sin(self) -> Self {
        f64::sin(self)
    }
    fn cos(self) -> Self {
        f64::cos(self)
    }
    fn tan(self) -> Self {
        f64::tan(self)
    }
    fn exp(self) -> Self {
        f64::exp(self)
    }
    fn ln(self) -> Self {
        f64::ln(self)
    }
    fn abs(self) -> Self {
        f64::abs(self)
    }
}

/// Value and first three derivatives with respect to one variable.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Jet3 {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
}

impl Jet3 {
    pub const fn new(value: f64, d1: f64, d2: f64, d3: f64) -> Self {
        Self { value, d1, d2, d3 }
    }

    /// The independent variable itself.
    pub const fn var(x: f64) -> Self {
        Self::new(x, 1.0, 0.0, 0.0)
    }

    /// Shifts the jet one order down: the result is the jet of the first
    /// derivative, with the (unknown) fourth-order channel set to zero.
    pub fn derivative(self) -> Self {
        Self::new(self.d1, self.d2, self.d3, 0.0)
    }

    /// Lifts a jet in `u` to a bivariate jet that does not depend on `v`.
    pub fn lift(self) -> BiJet2 {
        BiJet2::new(self.value, self.d1, 0.0, self.d2, 0.0, 0.0)
    }
}

impl Add for Jet3 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.value + o.value, self.d1 + o.d1, self.d2 + o.d2, self.d3 + o.d3)
    }
}

impl Sub for Jet3 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.value - o.value, self.d1 - o.d1, self.d2 - o.d2, self.d3 - o.d3)
    }
}

impl Neg for Jet3 {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.value, -self.d1, -self.d2, -self.d3)
    }
}

impl Mul for Jet3 {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let (a, b) = (self, o);
        Self::new(
            a.value * b.value,
            a.d1 * b.value + a.value * b.d1,
            a.d2 * b.value + 2.0 * a.d1 * b.d1 + a.value * b.d2,
            a.d3 * b.value + 3.0 * a.d2 * b.d1 + 3.0 * a.d1 * b.d2 + a.value * b.d3,
        )
    }
}

impl Div for Jet3 {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Self) -> Self {
        self * o.recip()
    }
}

impl Scalar for Jet3 {
    fn cst(c: f64) -> Self {
        Self::new(c, 0.0, 0.0, 0.0)
    }
    fn value(self) -> f64 {
        self.value
    }
    fn chain(self, g: [f64; 4]) -> Self {
        let (a1, a2, a3) = (self.d1, self.d2, self.d3);
        Self::new(
            g[0],
            g[1] * a1,
            g[2] * a1 * a1 + g[1] * a2,
            g[3] * a1 * a1 * a1 + 3.0 * g[2] * a1 * a2 + g[1] * a3,
        )
    }
    fn is_const(self) -> bool {
        self.d1 == 0.0 && self.d2 == 0.0 && self.d3 == 0.0
    }
    fn is_finite(self) -> bool {
        self.value.is_finite() && self.d1.is_finite() && self.d2.is_finite() && self.d3.is_finite()
    }
}

/// First-order jet in two variables `(u, v)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BiJet1 {
    pub value: f64,
    pub du: f64,
    pub dv: f64,
}

impl BiJet1 {
    pub const fn new(value: f64, du: f64, dv: f64) -> Self {
        Self { value, du, dv }
    }
}

impl Add for BiJet1 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.value + o.value, self.du + o.du, self.dv + o.dv)
    }
}

impl Sub for BiJet1 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.value - o.value, self.du - o.du, self.dv - o.dv)
    }
}

impl Neg for BiJet1 {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.value, -self.du, -self.dv)
    }
}

impl Mul for BiJet1 {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self::new(
            self.value * o.value,
            self.du * o.value + self.value * o.du,
            self.dv * o.value + self.value * o.dv,
        )
    }
}

impl Div for BiJet1 {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Self) -> Self {
        self * o.recip()
    }
}

impl Scalar for BiJet1 {
    fn cst(c: f64) -> Self {
        Self::new(c, 0.0, 0.0)
    }
    fn value(self) -> f64 {
        self.value
    }
    fn chain(self, g: [f64; 4]) -> Self {
        Self::new(g[0], g[1] * self.du, g[1] * self.dv)
    }
    fn is_const(self) -> bool {
        self.du == 0.0 && self.dv == 0.0
    }
    fn is_finite(self) -> bool {
        self.value.is_finite() && self.du.is_finite() && self.dv.is_finite()
    }
}

/// Second-order jet in two variables `(u, v)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BiJet2 {
    pub value: f64,
    pub du: f64,
    pub dv: f64,
    pub duu: f64,
    pub duv: f64,
    pub dvv: f64,
}

impl BiJet2 {
    pub const fn new(value: f64, du: f64, dv: f64, duu: f64, duv: f64, dvv: f64) -> Self {
        Self { value, du, dv, duu, duv, dvv }
    }

    pub const fn var_u(u: f64) -> Self {
        Self::new(u, 1.0, 0.0, 0.0, 0.0, 0.0)
    }

    pub const fn var_v(v: f64) -> Self {
        Self::new(v, 0.0, 1.0, 0.0, 0.0, 0.0)
    }

    /// Drops the second-order channels.
    pub fn first_order(self) -> BiJet1 {
        BiJet1::new(self.value, self.du, self.dv)
    }

    /// First-order jet of `∂/∂u` of this function.
    pub fn partial_u(self) -> BiJet1 {
        BiJet1::new(self.du, self.duu, self.duv)
    }

    /// First-order jet of `∂/∂v` of this function.
    pub fn partial_v(self) -> BiJet1 {
        BiJet1::new(self.dv, self.duv, self.dvv)
    }
}

impl Add for BiJet2 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(
            self.value + o.value,
            self.du + o.du,
            self.dv + o.dv,
            self.duu + o.duu,
            self.duv + o.duv,
            self.dvv + o.dvv,
        )
    }
}

impl Sub for BiJet2 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(
            self.value - o.value,
            self.du - o.du,
            self.dv - o.dv,
            self.duu - o.duu,
            self.duv - o.duv,
            self.dvv - o.dvv,
        )
    }
}

impl Neg for BiJet2 {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.value, -self.du, -self.dv, -self.duu, -self.duv, -self.dvv)
    }
}

impl Mul for BiJet2 {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let (a, b) = (self, o);
        Self::new(
            a.value * b.value,
            a.du * b.value + a.value * b.du,
            a.dv * b.value + a.value * b.dv,
            a.duu * b.value + 2.0 * a.du * b.du + a.value * b.duu,
            // symmetric in (u, v) by construction
            a.duv * b.value + a.du * b.dv + a.dv * b.du + a.value * b.duv,
            a.dvv * b.value + 2.0 * a.dv * b.dv + a.value * b.dvv,
        )
    }
}

impl Div for BiJet2 {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Self) -> Self {
        self * o.recip()
    }
}

impl Scalar for BiJet2 {
    fn cst(c: f64) -> Self {
        Self::new(c, 0.0, 0.0, 0.0, 0.0, 0.0)
    }
    fn value(self) -> f64 {
        self.value
    }
    fn chain(self, g: [f64; 4]) -> Self {
        let a = self;
        Self::new(
            g[0],
            g[1] * a.du,
            g[1] * a.dv,
            g[2] * a.du * a.du + g[1] * a.duu,
            g[2] * a.du * a.dv + g[1] * a.duv,
            g[2] * a.dv * a.dv + g[1] * a.dvv,
        )
    }
    fn is_const(self) -> bool {
        self.du == 0.0 && self.dv == 0.0 && self.duu == 0.0 && self.duv == 0.0 && self.dvv == 0.0
    }
    fn is_finite(self) -> bool {
        [self.value, self.du, self.dv, self.duu, self.duv, self.dvv]
            .iter()
            .all(|x| x.is_finite())
    }
}
