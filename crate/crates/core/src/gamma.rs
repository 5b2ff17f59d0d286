//! λ- and γ-polynomials and divisibility by powers of `(1 + t)`.
//!
//! `γ_t = (1 - t)^r λ_{t/(1-t)}` and its inverse `λ_t = (1 + t)^r γ_{t/(1+t)}`
//! are evaluated coefficient-wise as `Σ_k c_k t^k (1 ∓ t)^{r-k}`, which is exact
//! over the rationals.

use std::fmt::Debug;
use std::ops::Neg;

use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::{Num, One, Zero};

use crate::error::{Error, Result};

/// Coefficient ring for [`KPolynomial`].
pub trait Coefficient: Clone + Debug + Num + Neg<Output = Self> {
    fn magnitude(&self) -> f64;
}

impl Coefficient for f64 {
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl Coefficient for Complex64 {
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

impl Coefficient for Rational64 {
    fn magnitude(&self) -> f64 {
        (*self.numer() as f64 / *self.denom() as f64).abs()
    }
}

/// Polynomial in `t` attached to a bundle of nominal rank `rank`.
#[derive(Debug, Clone, PartialEq)]
pub struct KPolynomial<T> {
    coeffs: Vec<T>,
    pub rank: usize,
}

impl<T: Coefficient> KPolynomial<T> {
    /// Trailing exact zeros are trimmed.
    pub fn new(mut coeffs: Vec<T>, rank: usize) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(T::zero());
        }
        KPolynomial { coeffs, rank }
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, t: T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * t.clone() + c.clone())
    }

    pub fn mul(&self, other: &KPolynomial<T>) -> KPolynomial<T> {
        KPolynomial::new(poly_mul(&self.coeffs, &other.coeffs), self.rank + other.rank)
    }

    pub fn max_magnitude(&self) -> f64 {
        self.coeffs.iter().map(Coefficient::magnitude).fold(0.0, f64::max)
    }
}

fn poly_mul<T: Coefficient>(a: &[T], b: &[T]) -> Vec<T> {
    let mut out = vec![T::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].clone() + x.clone() * y.clone();
        }
    }
    out
}

/// Coefficients of `(1 + sign·t)^n`.
fn binomial_power<T: Coefficient>(n: usize, sign: T) -> Vec<T> {
    let mut p = vec![T::one()];
    for _ in 0..n {
        p = poly_mul(&p, &[T::one(), sign.clone()]);
    }
    p
}

fn substitute<T: Coefficient>(p: &KPolynomial<T>, r: usize, sign: T) -> Result<KPolynomial<T>> {
    if p.degree() > r {
        return Err(Error::DegreeExceedsRank {
            degree: p.degree(),
            rank: r,
        });
    }
    let mut out = vec![T::zero(); r + 1];
    for (k, c) in p.coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let base = binomial_power(r - k, sign.clone());
        for (j, b) in base.into_iter().enumerate() {
            out[k + j] = out[k + j].clone() + c.clone() * b;
        }
    }
    Ok(KPolynomial::new(out, r))
}

/// `γ_t = (1 - t)^r λ_{t/(1-t)}`.
pub fn gamma_from_lambda<T: Coefficient>(lambda: &KPolynomial<T>, r: usize) -> Result<KPolynomial<T>> {
    substitute(lambda, r, -T::one())
}

/// `λ_t = (1 + t)^r γ_{t/(1+t)}`.
pub fn lambda_from_gamma<T: Coefficient>(gamma: &KPolynomial<T>, r: usize) -> Result<KPolynomial<T>> {
    substitute(gamma, r, T::one())
}

/// Divides by `(t + 1)`, returning quotient and remainder.
fn divide_by_one_plus_t<T: Coefficient>(coeffs: &[T]) -> (Vec<T>, T) {
    let n = coeffs.len();
    if n == 1 {
        return (vec![T::zero()], coeffs[0].clone());
    }
    let mut q = vec![T::zero(); n - 1];
    let mut carry = coeffs[n - 1].clone();
    for k in (0..n - 1).rev() {
        q[k] = carry.clone();
        carry = coeffs[k].clone() - carry;
    }
    (q, carry)
}

/// Largest `d` such that repeated synthetic division by `(1 + t)` leaves every
/// remainder below `tol · max|coefficient|`.
pub fn vanishing_order_at_minus1<T: Coefficient>(p: &KPolynomial<T>, tol: f64) -> Result<usize> {
    let scale = p.max_magnitude();
    if scale == 0.0 || !scale.is_finite() {
        return Err(Error::ZeroPolynomial);
    }
    let threshold = tol * scale;
    let mut cur = p.coeffs.clone();
    let mut d = 0;
    while cur.len() > 1 {
        let (q, rem) = divide_by_one_plus_t(&cur);
        if rem.magnitude() > threshold {
            break;
        }
        d += 1;
        cur = q;
    }
    Ok(d)
}

/// Checks that "top `d` γ-coefficients vanish" and "`(1+t)^d` divides λ_t"
/// agree, returning their common verdict.
pub fn check_equivalence_ii_iii<T: Coefficient>(lambda: &KPolynomial<T>, r: usize, d: usize, tol: f64) -> Result<bool> {
    let gamma = gamma_from_lambda(lambda, r)?;
    let scale = gamma.max_magnitude().max(lambda.max_magnitude());
    if scale == 0.0 {
        return Err(Error::ZeroPolynomial);
    }
    let top_vanish = d <= r + 1
        && (r + 1 - d.min(r + 1)..=r).all(|k| gamma.coeff(k).magnitude() <= tol * scale);
    let divisible = vanishing_order_at_minus1(lambda, tol)? >= d;
    if top_vanish != divisible {
        return Err(Error::EquivalenceBroken { d });
    }
    Ok(divisible)
}

/// Exact rational helper: `(1 + t)^n`.
pub fn one_plus_t_power(n: usize) -> KPolynomial<Rational64> {
    KPolynomial::new(binomial_power(n, Rational64::one()), n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rat(n: i64) -> Rational64 {
        Rational64::from_integer(n)
    }

    fn poly(c: &[i64], r: usize) -> KPolynomial<Rational64> {
        KPolynomial::new(c.iter().map(|&x| rat(x)).collect(), r)
    }

    #[test]
    fn line_bundle_gamma() {
        // λ = 1 + t v  =>  γ = (1 - t) + t v
        let v = rat(7);
        let lambda = KPolynomial::new(vec![rat(1), v], 1);
        let gamma = gamma_from_lambda(&lambda, 1).unwrap();
        assert_eq!(gamma.coeffs(), &[rat(1), v - rat(1)]);
        assert_eq!(lambda_from_gamma(&gamma, 1).unwrap(), lambda);
    }

    #[test]
    fn trivial_bundle_has_gamma_one() {
        let lambda = one_plus_t_power(3);
        let gamma = gamma_from_lambda(&lambda, 3).unwrap();
        assert_eq!(gamma.coeffs(), &[rat(1)]);
        let back = lambda_from_gamma(&poly(&[1], 2), 2).unwrap();
        assert_eq!(back.coeffs(), &[rat(1), rat(2), rat(1)]);
    }

    #[test]
    fn degree_above_rank_is_rejected() {
        assert!(matches!(
            gamma_from_lambda(&poly(&[1, 1, 1], 1), 1),
            Err(Error::DegreeExceedsRank { .. })
        ));
    }

    #[test]
    fn vanishing_orders() {
        // (1+t)^2 (3 - t) = 3 + 5t + t^2 - t^3
        assert_eq!(vanishing_order_at_minus1(&poly(&[3, 5, 1, -1], 3), 1e-8).unwrap(), 2);
        assert_eq!(vanishing_order_at_minus1(&poly(&[1, 1, 1], 2), 1e-8).unwrap(), 0);
        assert_eq!(vanishing_order_at_minus1(&one_plus_t_power(5), 1e-8).unwrap(), 5);
        assert!(matches!(
            vanishing_order_at_minus1(&poly(&[0], 0), 1e-8),
            Err(Error::ZeroPolynomial)
        ));
    }

    #[test]
    fn equivalence_examples() {
        assert!(check_equivalence_ii_iii(&one_plus_t_power(4), 4, 4, 1e-8).unwrap());
        // λ(-1) = 1 - 2 + 5 = 4 ≠ 0
        assert!(!check_equivalence_ii_iii(&poly(&[1, 2, 5], 2), 2, 1, 1e-8).unwrap());
    }

    fn small_poly(max_len: usize) -> impl Strategy<Value = Vec<i64>> {
        prop::collection::vec(-9i64..=9, 1..=max_len)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn gamma_lambda_roundtrip(c in small_poly(5)) {
            let lambda = poly(&c, 4);
            let gamma = gamma_from_lambda(&lambda, 4).unwrap();
            prop_assert_eq!(lambda_from_gamma(&gamma, 4).unwrap(), lambda);
        }

        #[test]
        fn gamma_is_multiplicative(a in small_poly(3), b in small_poly(4)) {
            let la = poly(&a, 2);
            let lb = poly(&b, 3);
            let lhs = gamma_from_lambda(&la.mul(&lb), 5).unwrap();
            let rhs = gamma_from_lambda(&la, 2).unwrap().mul(&gamma_from_lambda(&lb, 3).unwrap());
            prop_assert_eq!(lhs.coeffs(), rhs.coeffs());
        }

        /// (ii) ⇔ (iii): build λ from a γ whose top `d` coefficients vanish
        /// (true case) or from a generic γ (verdicts must still agree).
        #[test]
        fn ii_iff_iii(c in prop::collection::vec(-9i64..=9, 6), d in 0usize..=5, zero_tail in any::<bool>()) {
            let r = 5;
            let mut gc: Vec<Rational64> = c.iter().map(|&x| rat(x)).collect();
            if gc.iter().all(Zero::is_zero) {
                gc[0] = rat(1);
            }
            if zero_tail {
                for k in (r + 1 - d)..=r {
                    gc[k] = rat(0);
                }
                if gc.iter().all(Zero::is_zero) {
                    gc[0] = rat(1);
                }
            }
            let gamma = KPolynomial::new(gc, r);
            let lambda = lambda_from_gamma(&gamma, r).unwrap();
            let verdict = check_equivalence_ii_iii(&lambda, r, d, 1e-12).unwrap();
            if zero_tail {
                prop_assert!(verdict);
            }
        }

        #[test]
        fn float_roundtrip(c in prop::collection::vec(-1.0f64..1.0, 5)) {
            let lambda = KPolynomial::new(c.clone(), 4);
            let back = lambda_from_gamma(&gamma_from_lambda(&lambda, 4).unwrap(), 4).unwrap();
            for k in 0..5 {
                prop_assert!((back.coeff(k) - lambda.coeff(k)).abs() < 1e-12);
            }
        }
    }
}
