//! Truncated bivariate Taylor jets up to total degree three.
//!
//! A jet stores the Taylor coefficients of a function of two local
//! variables `(u, v)` around a base point. Coefficient `(a, b)` multiplies
//! `du^a dv^b`, so the partial derivative of that order is the coefficient
//! times `a! b!`.

use std::ops::{Add, Div, Mul, Neg, Sub};

pub const MAX_ORDER: usize = 3;
const NCOEF: usize = 10;

/// Exponent pairs in storage order.
const POWERS: [(usize, usize); NCOEF] = [
    (0, 0),
    (1, 0),
    (0, 1),
    (2, 0),
    (1, 1),
    (0, 2),
    (3, 0),
    (2, 1),
    (1, 2),
    (0, 3),
];

#[inline]
fn index(a: usize, b: usize) -> usize {
    let n = a + b;
    n * (n + 1) / 2 + b
}

/// Number of coefficients carried by a jet of the given order.
#[inline]
fn count(order: usize) -> usize {
    (order + 1) * (order + 2) / 2
}

const FACT: [f64; 4] = [1.0, 1.0, 2.0, 6.0];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    order: usize,
    coef: [f64; NCOEF],
}

impl Jet {
    pub fn constant(value: f64, order: usize) -> Self {
        let mut coef = [0.0; NCOEF];
        coef[0] = value;
        Jet {
            order: order.min(MAX_ORDER),
            coef,
        }
    }

    /// The jet of the local variable `slot` (0 for u, 1 for v) at `value`.
    pub fn variable(slot: usize, value: f64, order: usize) -> Self {
        let mut j = Jet::constant(value, order);
        if j.order >= 1 {
            j.coef[1 + slot.min(1)] = 1.0;
        }
        j
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn value(&self) -> f64 {
        self.coef[0]
    }

    /// Raw Taylor coefficient of `du^a dv^b`.
    pub fn coefficient(&self, a: usize, b: usize) -> f64 {
        if a + b > self.order {
            0.0
        } else {
            self.coef[index(a, b)]
        }
    }

    /// Partial derivative `d^(a+b) / du^a dv^b` at the base point.
    pub fn derivative(&self, a: usize, b: usize) -> f64 {
        self.coefficient(a, b) * FACT[a.min(3)] * FACT[b.min(3)]
    }

    pub fn du(&self) -> f64 {
        self.derivative(1, 0)
    }

    pub fn dv(&self) -> f64 {
        self.derivative(0, 1)
    }

    /// The jet of a partial derivative, one order lower.
    pub fn partial(&self, slot: usize) -> Jet {
        let order = self.order.saturating_sub(1);
        let mut out = Jet::constant(0.0, order);
        if self.order == 0 {
            return out;
        }
        for (i, &(a, b)) in POWERS.iter().enumerate().take(count(order)) {
            let (src, k) = if slot == 0 {
                (index(a + 1, b), (a + 1) as f64)
            } else {
                (index(a, b + 1), (b + 1) as f64)
            };
            out.coef[i] = self.coef[src] * k;
        }
        out
    }

    pub fn with_order(mut self, order: usize) -> Jet {
        let order = order.min(self.order);
        for c in self.coef.iter_mut().skip(count(order)) {
            *c = 0.0;
        }
        self.order = order;
        self
    }

    pub fn is_finite(&self) -> bool {
        self.coef.iter().all(|c| c.is_finite())
    }

    /// Jet with the base value removed.
    fn increment(&self) -> Jet {
        let mut h = *self;
        h.coef[0] = 0.0;
        h
    }

    /// `f(self)` given `f` and its first three derivatives at the base value.
    pub fn compose(&self, derivs: [f64; 4]) -> Jet {
        let h = self.increment();
        let mut out = Jet::constant(derivs[0], self.order);
        let mut hk = Jet::constant(1.0, self.order);
        for (k, d) in derivs.iter().enumerate().skip(1).take(self.order) {
            hk = hk * h;
            if *d != 0.0 {
                out = out + hk.scale(d / FACT[k]);
            }
        }
        out
    }

    pub fn scale(&self, s: f64) -> Jet {
        let mut out = *self;
        for c in out.coef.iter_mut() {
            *c *= s;
        }
        out
    }

    /// Reciprocal, `None` when the base value is exactly zero.
    pub fn recip(&self) -> Option<Jet> {
        let x = self.value();
        if x == 0.0 {
            return None;
        }
        let r = 1.0 / x;
        Some(self.compose([r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r]))
    }

    /// Square root; needs a positive base value unless the order is zero.
    pub fn sqrt(&self) -> Option<Jet> {
        let x = self.value();
        if x < 0.0 || (x == 0.0 && self.order > 0) {
            return None;
        }
        let s = x.sqrt();
        if self.order == 0 {
            return Some(Jet::constant(s, 0));
        }
        Some(self.compose([s, 0.5 / s, -0.25 / (s * x), 0.375 / (s * x * x)]))
    }

    pub fn sin(&self) -> Jet {
        let (s, c) = self.value().sin_cos();
        self.compose([s, c, -s, -c])
    }

    pub fn cos(&self) -> Jet {
        let (s, c) = self.value().sin_cos();
        self.compose([c, -s, -c, s])
    }

    pub fn exp(&self) -> Jet {
        let e = self.value().exp();
        self.compose([e; 4])
    }

    pub fn ln(&self) -> Option<Jet> {
        let x = self.value();
        if x <= 0.0 {
            return None;
        }
        let r = 1.0 / x;
        Some(self.compose([x.ln(), r, -r * r, 2.0 * r * r * r]))
    }

    /// `self^p` for a constant exponent.
    pub fn powf(&self, p: f64) -> Option<Jet> {
        let x = self.value();
        let integral = p.fract() == 0.0 && p.abs() < 1e15;
        if x < 0.0 && !integral {
            return None;
        }
        let mut d = [0.0; 4];
        let mut falling = 1.0;
        for (k, dk) in d.iter_mut().enumerate().take(self.order + 1) {
            if falling == 0.0 {
                break;
            }
            let e = p - k as f64;
            let power = if integral {
                if x == 0.0 && e < 0.0 {
                    return None;
                }
                x.powi(e as i32)
            } else {
                if x == 0.0 && e < 0.0 {
                    return None;
                }
                x.powf(e)
            };
            *dk = falling * power;
            falling *= e;
        }
        Some(self.compose(d))
    }

    pub fn dot3(a: &[Jet; 3], b: &[Jet; 3]) -> Jet {
        a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
    }

    pub fn cross3(a: &[Jet; 3], b: &[Jet; 3]) -> [Jet; 3] {
        [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ]
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, rhs: Jet) -> Jet {
        let order = self.order.min(rhs.order);
        let mut out = Jet::constant(0.0, order);
        for i in 0..count(order) {
            out.coef[i] = self.coef[i] + rhs.coef[i];
        }
        out
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        self + (-rhs)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        let order = self.order.min(rhs.order);
        let n = count(order);
        let mut out = Jet::constant(0.0, order);
        for i in 0..n {
            let x = self.coef[i];
            if x == 0.0 {
                continue;
            }
            let (a1, b1) = POWERS[i];
            for (j, &(a2, b2)) in POWERS.iter().enumerate().take(n) {
                if a1 + a2 + b1 + b2 <= order {
                    out.coef[index(a1 + a2, b1 + b2)] += x * rhs.coef[j];
                }
            }
        }
        out
    }
}

/// Unchecked division: a zero divisor yields non-finite coefficients.
/// Use [`Jet::recip`] where the zero case must be reported.
impl Div for Jet {
    type Output = Jet;
    fn div(self, rhs: Jet) -> Jet {
        match rhs.recip() {
            Some(r) => self * r,
            None => Jet::constant(f64::NAN, self.order.min(rhs.order)),
        }
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(mut self, rhs: f64) -> Jet {
        self.coef[0] += rhs;
        self
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, rhs: f64) -> Jet {
        self.scale(rhs)
    }
}
