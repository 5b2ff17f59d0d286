//! Precision modes for the reductions that dominate rounding error.
//!
//! `Double` sums in plain 64-bit arithmetic. `Extended` carries a
//! double-double style error term through every sum (Neumaier compensation on
//! the real and imaginary parts of each jet coefficient).

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::jet::{Jet, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    #[default]
    Double,
    Extended,
}

impl FromStr for Precision {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "double" => Ok(Precision::Double),
            "extended" => Ok(Precision::Extended),
            other => Err(Error::InvalidInput(format!(
                "unknown precision mode '{other}' (expected double or extended)"
            ))),
        }
    }
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Precision::Double => f.write_str("double"),
            Precision::Extended => f.write_str("extended"),
        }
    }
}

/// Error-free transformation: `a + b = s + e` exactly.
#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

#[derive(Debug, Clone, Default)]
struct Compensated {
    hi: f64,
    lo: f64,
}

impl Compensated {
    fn add(&mut self, x: f64) {
        let (s, e) = two_sum(self.hi, x);
        self.hi = s;
        self.lo += e;
    }

    fn value(&self) -> f64 {
        self.hi + self.lo
    }
}

/// Running sum of jets honouring the precision mode.
#[derive(Debug, Clone)]
pub struct Accumulator {
    precision: Precision,
    plain: Vec<Complex64>,
    re: Vec<Compensated>,
    im: Vec<Compensated>,
}

impl Accumulator {
    pub fn new(precision: Precision) -> Self {
        Accumulator {
            precision,
            plain: Vec::new(),
            re: Vec::new(),
            im: Vec::new(),
        }
    }

    pub fn add_jet(&mut self, term: &Jet) {
        let n = term.coeffs().len();
        match self.precision {
            Precision::Double => {
                if self.plain.len() < n {
                    self.plain.resize(n, Complex64::new(0.0, 0.0));
                }
                for (acc, c) in self.plain.iter_mut().zip(term.coeffs()) {
                    *acc += c;
                }
            }
            Precision::Extended => {
                if self.re.len() < n {
                    self.re.resize(n, Compensated::default());
                    self.im.resize(n, Compensated::default());
                }
                for (k, c) in term.coeffs().iter().enumerate() {
                    self.re[k].add(c.re);
                    self.im[k].add(c.im);
                }
            }
        }
    }

    pub fn add<S: Scalar>(&mut self, term: &S) {
        self.add_jet(&term.to_jet());
    }

    pub fn total(&self) -> Jet {
        let coeffs: Vec<Complex64> = match self.precision {
            Precision::Double => self.plain.clone(),
            Precision::Extended => self
                .re
                .iter()
                .zip(&self.im)
                .map(|(r, i)| Complex64::new(r.value(), i.value()))
                .collect(),
        };
        if coeffs.is_empty() {
            Jet::constant(Complex64::new(0.0, 0.0))
        } else {
            Jet::from_coeffs(coeffs)
        }
    }
}

/// Sums an iterator of scalars in the given precision mode.
pub fn sum<S, I>(terms: I, precision: Precision) -> S
where
    S: Scalar,
    I: IntoIterator<Item = S>,
{
    let mut acc = Accumulator::new(precision);
    for t in terms {
        acc.add(&t);
    }
    S::from_jet(&acc.total())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extended_recovers_cancelled_terms() {
        let terms = [1e16, 1.0, -1e16, 1.0].map(|x| Complex64::new(x, 0.0));
        let plain: Complex64 = sum(terms, Precision::Double);
        let ext: Complex64 = sum(terms, Precision::Extended);
        assert_eq!(ext.re, 2.0);
        assert_ne!(plain.re, 2.0);
    }

    #[test]
    fn parses_modes() {
        assert_eq!("double".parse::<Precision>().unwrap(), Precision::Double);
        assert_eq!("EXTENDED".parse::<Precision>().unwrap(), Precision::Extended);
        assert!("quad".parse::<Precision>().is_err());
    }
}
