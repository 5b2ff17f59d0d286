//! Truncated power series in the formal variable `s`.
//!
//! A [`Jet`] stores the coefficients `c_0 + c_1 s + ... + c_S s^S`. Constants are
//! stored with a single coefficient and promote on contact with longer jets, so
//! every binary operation truncates at the longer operand's order. The
//! [`Scalar`] trait lets the numeric kernels run either on plain complex numbers
//! (the `s = 0` fast path) or on jets.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

/// Field operations needed by the fixed-point and index kernels.
pub trait Scalar:
    Clone
    + fmt::Debug
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_c64(c: Complex64) -> Self;

    fn from_f64(x: f64) -> Self {
        Self::from_c64(Complex64::new(x, 0.0))
    }

    fn zero() -> Self {
        Self::from_f64(0.0)
    }

    fn one() -> Self {
        Self::from_f64(1.0)
    }

    /// Constant (order zero) coefficient.
    fn lead(&self) -> Complex64;

    fn exp(&self) -> Self;

    /// `exp(self) - 1` with an accurate constant term.
    fn exp_m1(&self) -> Self;

    /// Principal logarithm.
    fn ln(&self) -> Self;

    fn scale(&self, k: Complex64) -> Self;

    /// Adds a constant to the order-zero coefficient.
    fn shift(&self, k: Complex64) -> Self;

    fn to_jet(&self) -> Jet;

    /// Inverse of [`Scalar::to_jet`]; plain complex numbers keep the constant term.
    fn from_jet(j: &Jet) -> Self;

    fn powi(&self, n: i32) -> Self {
        if n < 0 {
            return Self::one() / self.powi(-n);
        }
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = n as u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.clone() * base;
            e >>= 1;
        }
        acc
    }
}

/// Accurate `e^z - 1` for complex `z`.
pub fn c_exp_m1(z: Complex64) -> Complex64 {
    let (a, b) = (z.re, z.im);
    let ea = a.exp();
    let half = (0.5 * b).sin();
    Complex64::new(a.exp_m1() * b.cos() - 2.0 * half * half, ea * b.sin())
}

impl Scalar for Complex64 {
    fn from_c64(c: Complex64) -> Self {
        c
    }

    fn lead(&self) -> Complex64 {
        *self
    }

    fn exp(&self) -> Self {
        Complex64::exp(*self)
    }

    fn exp_m1(&self) -> Self {
        c_exp_m1(*self)
    }

    fn ln(&self) -> Self {
        Complex64::ln(*self)
    }

    fn scale(&self, k: Complex64) -> Self {
        *self * k
    }

    fn shift(&self, k: Complex64) -> Self {
        *self + k
    }

    fn to_jet(&self) -> Jet {
        Jet::constant(*self)
    }

    fn from_jet(j: &Jet) -> Self {
        j.lead()
    }

    fn powi(&self, n: i32) -> Self {
        Complex64::powi(self, n)
    }
}

#[derive(Clone, PartialEq)]
pub struct Jet {
    coeffs: Vec<Complex64>,
}

impl Jet {
    pub fn constant(c: Complex64) -> Self {
        Jet { coeffs: vec![c] }
    }

    /// The formal variable `s` truncated at `order`.
    pub fn variable(order: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); order + 1];
        if order >= 1 {
            coeffs[1] = Complex64::new(1.0, 0.0);
        }
        Jet { coeffs }
    }

    pub fn from_coeffs(coeffs: Vec<Complex64>) -> Self {
        assert!(!coeffs.is_empty(), "a jet needs at least one coefficient");
        Jet { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of `s^k`, zero beyond the stored order.
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    /// Re-truncates (or zero-pads) to the given order.
    pub fn with_order(&self, order: usize) -> Self {
        let coeffs = (0..=order).map(|k| self.coeff(k)).collect();
        Jet { coeffs }
    }

    fn len_with(&self, other: &Jet) -> usize {
        self.coeffs.len().max(other.coeffs.len())
    }

    pub fn inverse(&self) -> Self {
        let a = &self.coeffs;
        let inv0 = a[0].inv();
        let mut b = vec![Complex64::new(0.0, 0.0); a.len()];
        b[0] = inv0;
        for n in 1..a.len() {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 1..=n {
                acc += a[k] * b[n - k];
            }
            b[n] = -acc * inv0;
        }
        Jet { coeffs: b }
    }
}

impl fmt::Debug for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Jet{:?}", self.coeffs)
    }
}

impl From<Complex64> for Jet {
    fn from(c: Complex64) -> Self {
        Jet::constant(c)
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, rhs: Jet) -> Jet {
        let n = self.len_with(&rhs);
        Jet {
            coeffs: (0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect(),
        }
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        let n = self.len_with(&rhs);
        Jet {
            coeffs: (0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect(),
        }
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        let n = self.len_with(&rhs);
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate().take(n - i) {
                out[i + j] += a * b;
            }
        }
        Jet { coeffs: out }
    }
}

impl Div for Jet {
    type Output = Jet;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Jet) -> Jet {
        let n = self.len_with(&rhs);
        self * rhs.with_order(n - 1).inverse()
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        Jet {
            coeffs: self.coeffs.into_iter().map(|c| -c).collect(),
        }
    }
}

impl Scalar for Jet {
    fn from_c64(c: Complex64) -> Self {
        Jet::constant(c)
    }

    fn lead(&self) -> Complex64 {
        self.coeffs[0]
    }

    fn exp(&self) -> Self {
        // f' = a' f  =>  n f_n = sum_{k=1..n} k a_k f_{n-k}
        let a = &self.coeffs;
        let mut f = vec![Complex64::new(0.0, 0.0); a.len()];
        f[0] = a[0].exp();
        for n in 1..a.len() {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 1..=n {
                acc += a[k] * f[n - k] * k as f64;
            }
            f[n] = acc / n as f64;
        }
        Jet { coeffs: f }
    }

    fn exp_m1(&self) -> Self {
        let mut out = self.exp();
        out.coeffs[0] = c_exp_m1(self.coeffs[0]);
        out
    }

    fn ln(&self) -> Self {
        // a g' = a'  =>  a_0 n g_n = n a_n - sum_{k=1..n-1} k g_k a_{n-k}
        let a = &self.coeffs;
        let mut g = vec![Complex64::new(0.0, 0.0); a.len()];
        g[0] = a[0].ln();
        for n in 1..a.len() {
            let mut acc = a[n] * n as f64;
            for k in 1..n {
                acc -= g[k] * a[n - k] * k as f64;
            }
            g[n] = acc / (a[0] * n as f64);
        }
        Jet { coeffs: g }
    }

    fn scale(&self, k: Complex64) -> Self {
        Jet {
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    fn shift(&self, k: Complex64) -> Self {
        let mut out = self.clone();
        out.coeffs[0] += k;
        out
    }

    fn to_jet(&self) -> Jet {
        self.clone()
    }

    fn from_jet(j: &Jet) -> Self {
        j.clone()
    }
}
