//! The fixed-point equation `χ(f) = 1` in logarithmic form, its `t`-derivative
//! and its Jacobian.
//!
//! With `u = α(ξ)` reduced modulo `2πi`, every root factor is evaluated as
//! `1 + t e^u = (1 + t) e^u - expm1(u)`, which stays accurate when both `1 + t`
//! and `u` are small.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jet::Scalar;
use crate::lie::{Representation, RootSystem};
use crate::linalg::SquareMatrix;
use crate::precision::{Accumulator, Precision};

const SINGULAR_EPS: f64 = 1e-14;

/// A value of `t` in `[-1, 0]` together with `1 + t` carried separately.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Time {
    pub t: f64,
    pub one_plus_t: f64,
}

impl Time {
    pub fn zero() -> Self {
        Time { t: 0.0, one_plus_t: 1.0 }
    }

    pub fn from_t(t: f64) -> Self {
        Time { t, one_plus_t: 1.0 + t }
    }

    /// `t = x² - 1`.
    pub fn from_x(x: f64) -> Self {
        let one_plus_t = x * x;
        Time {
            t: one_plus_t - 1.0,
            one_plus_t,
        }
    }

    pub fn x(&self) -> f64 {
        self.one_plus_t.max(0.0).sqrt()
    }
}

/// Reduces `u` so that its constant term has imaginary part in `[-π, π]`.
pub fn reduce_angle<S: Scalar>(u: &S) -> S {
    let m = (u.lead().im / (2.0 * PI)).round();
    if m == 0.0 {
        u.clone()
    } else {
        u.shift(Complex64::new(0.0, -2.0 * PI * m))
    }
}

/// `1 + t e^u`.
pub fn one_plus_t_exp<S: Scalar>(u: &S, time: Time) -> S {
    u.exp().scale(Complex64::new(time.one_plus_t, 0.0)) - u.exp_m1()
}

/// `1 - e^u`.
pub fn one_minus_exp<S: Scalar>(u: &S) -> S {
    -u.exp_m1()
}

/// Per positive root: `u = α(ξ)` and the two factors `1 + t e^{±u}`.
pub struct RootFactors<S> {
    pub u: S,
    pub plus: S,
    pub minus: S,
}

/// `(h + c)`-shifted equation for a fixed group, level and optional `V`.
#[derive(Debug, Clone, Copy)]
pub struct Equation<'a> {
    pub rs: &'a RootSystem,
    /// `h + c`.
    pub shift: f64,
    pub v: Option<&'a Representation>,
    pub precision: Precision,
}

impl<'a> Equation<'a> {
    pub fn new(rs: &'a RootSystem, level: i64) -> Self {
        Equation {
            rs,
            shift: (level + rs.dual_coxeter) as f64,
            v: None,
            precision: Precision::Double,
        }
    }

    pub fn with_v(mut self, v: Option<&'a Representation>) -> Self {
        self.v = v;
        self
    }

    pub fn with_precision(mut self, precision: Precision) -> Self {
        self.precision = precision;
        self
    }

    /// Root factors for every positive root, failing if one of them vanishes.
    pub fn root_factors<S: Scalar>(&self, xi: &[S], time: Time) -> Result<Vec<RootFactors<S>>> {
        let rs = self.rs;
        rs.positive_roots()
            .iter()
            .enumerate()
            .map(|(i, root)| {
                let u = reduce_angle(&root.eval(xi));
                let plus = one_plus_t_exp(&u, time);
                let minus = one_plus_t_exp(&(-u.clone()), time);
                for (val, idx) in [(&plus, i), (&minus, rs.negative_of(i))] {
                    let modulus = val.lead().norm();
                    if modulus < SINGULAR_EPS || !modulus.is_finite() {
                        return Err(Error::SingularEvaluation {
                            root: idx,
                            t: time.t,
                            modulus,
                        });
                    }
                }
                Ok(RootFactors { u, plus, minus })
            })
            .collect()
    }

    fn accumulate<S: Scalar>(&self, terms: Vec<Vec<S>>) -> Vec<S> {
        let l = self.rs.rank;
        let mut acc: Vec<Accumulator> = (0..l).map(|_| Accumulator::new(self.precision)).collect();
        for term in &terms {
            for (a, x) in acc.iter_mut().zip(term) {
                a.add(x);
            }
        }
        acc.iter().map(|a| S::from_jet(&a.total())).collect()
    }

    /// `LogChi(ξ, t, s) = (h+c) B ξ - s dTr_V - Σ_{α>0} log[(1 + t e^α)/(1 + t e^{-α})] α`.
    pub fn log_chi<S: Scalar>(&self, xi: &[S], time: Time, s: Option<&S>) -> Result<Vec<S>> {
        let rs = self.rs;
        let k = Complex64::new(self.shift, 0.0);
        let mut terms: Vec<Vec<S>> = vec![rs.gram_apply(xi).iter().map(|x| x.scale(k)).collect()];
        if let (Some(v), Some(s)) = (self.v, s) {
            let d = v.character_jets(xi).gradient;
            terms.push(d.into_iter().map(|x| -(s.clone() * x)).collect());
        }
        for (root, f) in rs.positive_roots().iter().zip(self.root_factors(xi, time)?) {
            let w = f.plus.ln() - f.minus.ln();
            terms.push(
                root.weight
                    .iter()
                    .map(|&a| w.scale(Complex64::new(-(a as f64), 0.0)))
                    .collect(),
            );
        }
        Ok(self.accumulate(terms))
    }

    /// `∂LogChi/∂t = -Σ_{α>0} (e^α - e^{-α}) / ((1 + t e^α)(1 + t e^{-α})) α`.
    pub fn dlog_chi_dt<S: Scalar>(&self, xi: &[S], time: Time) -> Result<Vec<S>> {
        let rs = self.rs;
        let mut terms = Vec::new();
        for (root, f) in rs.positive_roots().iter().zip(self.root_factors(xi, time)?) {
            let num = f.u.exp() - (-f.u.clone()).exp();
            let w = num / (f.plus * f.minus);
            terms.push(
                root.weight
                    .iter()
                    .map(|&a| w.scale(Complex64::new(-(a as f64), 0.0)))
                    .collect(),
            );
        }
        if terms.is_empty() {
            return Ok(vec![S::zero(); rs.rank]);
        }
        Ok(self.accumulate(terms))
    }

    /// Paired root bracket `e^α/(1 + t e^α) + e^{-α}/(1 + t e^{-α})`, evaluated as
    /// `(expm1(u) + expm1(-u) + 2(1 + t)) / ((1 + t e^u)(1 + t e^{-u}))`.
    pub fn bracket<S: Scalar>(f: &RootFactors<S>, time: Time) -> S {
        let num = (f.u.exp_m1() + (-f.u.clone()).exp_m1()).shift(Complex64::new(2.0 * time.one_plus_t, 0.0));
        num / (f.plus.clone() * f.minus.clone())
    }

    /// Jacobian `H = (h+c) B - s H_V - t Σ_α e^α/(1 + t e^α) α⊗α`.
    pub fn jacobian<S: Scalar>(&self, xi: &[S], time: Time, s: Option<&S>) -> Result<SquareMatrix<S>> {
        let rs = self.rs;
        let l = rs.rank;
        let mut acc: Vec<Accumulator> = (0..l * l).map(|_| Accumulator::new(self.precision)).collect();
        for i in 0..l {
            for j in 0..l {
                acc[i * l + j].add(&Complex64::new(self.shift * rs.gram_f64(i, j), 0.0));
            }
        }
        if let (Some(v), Some(s)) = (self.v, s) {
            let hv = v.character_jets(xi).hessian;
            for (a, h) in acc.iter_mut().zip(&hv.data) {
                a.add(&(-(s.clone() * h.clone())));
            }
        }
        for (root, f) in rs.positive_roots().iter().zip(self.root_factors(xi, time)?) {
            let w = Self::bracket(&f, time).scale(Complex64::new(-time.t, 0.0));
            for i in 0..l {
                let ai = root.weight[i];
                if ai == 0 {
                    continue;
                }
                for j in 0..l {
                    let aj = root.weight[j];
                    if aj != 0 {
                        acc[i * l + j].add(&w.scale(Complex64::new((ai * aj) as f64, 0.0)));
                    }
                }
            }
        }
        Ok(SquareMatrix {
            dim: l,
            data: acc.iter().map(|a| S::from_jet(&a.total())).collect(),
        })
    }

    /// `det((h+c) B)`.
    pub fn base_determinant(&self) -> f64 {
        self.shift.powi(self.rs.rank as i32) * self.rs.gram_det as f64
    }

    /// Smallest `|e^{α(ξ)} - 1|` over the roots.
    pub fn min_root_gap(&self, xi: &[Complex64]) -> f64 {
        self.rs
            .positive_roots()
            .iter()
            .map(|r| {
                let u = reduce_angle(&r.eval(xi));
                u.exp_m1().norm().min((-u).exp_m1().norm())
            })
            .fold(f64::INFINITY, f64::min)
    }
}
