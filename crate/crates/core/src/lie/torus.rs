use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::root_system::{pair, RootSystem};
use crate::error::{Error, Result};

const TWO_PI: f64 = 2.0 * PI;

/// A point `f = exp(ξ)` of the maximal torus, `ξ` in simple-coroot coordinates.
///
/// `ξ` is defined modulo `2πi` times the coroot lattice; [`TorusPoint::canonical`]
/// brings every imaginary coordinate into `[0, 2π)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TorusPoint {
    pub xi: Vec<Complex64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Regularity {
    Regular,
    /// Indices (into `RootSystem::roots`) of roots with `e^{α(ξ)} = 1`.
    Singular { witnesses: Vec<usize> },
}

impl Regularity {
    pub fn is_regular(&self) -> bool {
        matches!(self, Regularity::Regular)
    }
}

impl TorusPoint {
    pub fn new(xi: Vec<Complex64>) -> Self {
        TorusPoint { xi }
    }

    pub fn zero(rank: usize) -> Self {
        TorusPoint {
            xi: vec![Complex64::new(0.0, 0.0); rank],
        }
    }

    /// `ξ = 2πi · y` for real coordinates `y`.
    pub fn from_fractions(y: &[f64]) -> Self {
        TorusPoint {
            xi: y.iter().map(|&v| Complex64::new(0.0, TWO_PI * v)).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        self.xi.len()
    }

    /// `λ(ξ)` for a covector in fundamental-weight coordinates.
    pub fn weight_value(&self, lambda: &[i64]) -> Complex64 {
        pair(lambda, &self.xi)
    }

    /// Imaginary parts divided by `2π`.
    pub fn fractions(&self) -> Vec<f64> {
        self.xi.iter().map(|z| z.im / TWO_PI).collect()
    }

    /// Representative with every `Im ξ_i / 2π` in `[0, 1)`; values within `1e-12`
    /// of 1 wrap to 0.
    pub fn canonical(&self) -> TorusPoint {
        TorusPoint {
            xi: self
                .xi
                .iter()
                .map(|z| {
                    let mut y = (z.im / TWO_PI).rem_euclid(1.0);
                    if 1.0 - y < 1e-12 {
                        y = 0.0;
                    }
                    Complex64::new(z.re, TWO_PI * y)
                })
                .collect(),
        }
    }

    /// Lattice shift `m` with `canonical().xi = xi - 2πi m`.
    pub fn canonical_shift(&self) -> Vec<i64> {
        let c = self.canonical();
        self.xi
            .iter()
            .zip(&c.xi)
            .map(|(a, b)| ((a.im - b.im) / TWO_PI).round() as i64)
            .collect()
    }

    /// Distance modulo `2πi` times the coroot lattice (coordinate-wise wrap).
    pub fn distance_mod_lattice(&self, other: &TorusPoint) -> f64 {
        self.xi
            .iter()
            .zip(&other.xi)
            .map(|(a, b)| {
                let re = a.re - b.re;
                let mut d = ((a.im - b.im) / TWO_PI).rem_euclid(1.0);
                if d > 0.5 {
                    d -= 1.0;
                }
                re * re + (TWO_PI * d).powi(2)
            })
            .sum::<f64>()
            .sqrt()
    }

    pub fn max_abs_real(&self) -> f64 {
        self.xi.iter().map(|z| z.re.abs()).fold(0.0, f64::max)
    }

    /// Applies a Weyl element (simple-coroot matrix).
    pub fn act(&self, vector_matrix: &[i64]) -> TorusPoint {
        let l = self.rank();
        TorusPoint {
            xi: (0..l)
                .map(|i| {
                    (0..l)
                        .map(|j| self.xi[j] * vector_matrix[i * l + j] as f64)
                        .sum()
                })
                .collect(),
        }
    }
}

/// Classifies `p` as regular or singular: singular iff `|e^{α(ξ)} - 1| ≤ tol`
/// for some root.
pub fn regularity(rs: &RootSystem, p: &TorusPoint, tol: f64) -> Regularity {
    let witnesses: Vec<usize> = rs
        .roots
        .iter()
        .enumerate()
        .filter(|(_, r)| (p.weight_value(&r.weight).exp() - 1.0).norm() <= tol)
        .map(|(i, _)| i)
        .collect();
    if witnesses.is_empty() {
        Regularity::Regular
    } else {
        Regularity::Singular { witnesses }
    }
}

/// Maps `p` into the closed fundamental alcove of the affine Weyl group
/// (`Im α_i(ξ) ≥ 0`, `Im θ(ξ) ≤ 2π`), applying the same linear parts to `Re ξ`.
pub fn alcove_representative(rs: &RootSystem, p: &TorusPoint, tol: f64) -> TorusPoint {
    let theta = &rs.roots[rs.highest_root];
    let mut xi = p.xi.clone();
    let eps = tol * TWO_PI;
    for _ in 0..10_000 {
        let mut moved = false;
        for i in 0..rs.rank {
            if pair(&rs.cartan[i * rs.rank..(i + 1) * rs.rank], &xi).im < -eps {
                xi = rs.reflect_vector(i, &xi);
                moved = true;
            }
        }
        if moved {
            continue;
        }
        let th = pair(&theta.weight, &xi);
        if th.im > TWO_PI + eps {
            let shift = th - Complex64::new(0.0, TWO_PI);
            for (x, &c) in xi.iter_mut().zip(&theta.coroot) {
                *x -= shift * c as f64;
            }
            continue;
        }
        break;
    }
    TorusPoint { xi }
}

/// One Weyl orbit among a list of input points.
#[derive(Debug, Clone)]
pub struct Orbit {
    /// Dominant (fundamental-alcove) representative.
    pub representative: TorusPoint,
    /// Indices of the input points in this orbit, ascending.
    pub members: Vec<usize>,
}

/// Groups points into Weyl orbits modulo `2πi` times the coroot lattice.
///
/// Orbits are returned in order of first appearance. Two inputs that coincide
/// modulo the lattice, or more members than the orbit can hold, are reported as
/// a collision.
pub fn orbit_representatives(rs: &RootSystem, points: &[TorusPoint], tol: f64) -> Result<Vec<Orbit>> {
    let mut orbits: Vec<Orbit> = Vec::new();
    for (idx, p) in points.iter().enumerate() {
        let rep = alcove_representative(rs, p, tol);
        match orbits
            .iter_mut()
            .find(|o| o.representative.distance_mod_lattice(&rep) <= tol)
        {
            Some(orbit) => {
                if let Some(&dup) = orbit
                    .members
                    .iter()
                    .find(|&&m| points[m].distance_mod_lattice(p) <= tol)
                {
                    return Err(Error::OrbitCollision(format!(
                        "inputs {dup} and {idx} are the same torus point"
                    )));
                }
                orbit.members.push(idx);
            }
            None => orbits.push(Orbit {
                representative: rep.canonical(),
                members: vec![idx],
            }),
        }
    }
    for o in &orbits {
        let size = orbit_size(rs, &o.representative, tol);
        if o.members.len() > size {
            return Err(Error::OrbitCollision(format!(
                "{} inputs map to an orbit of size {size}",
                o.members.len()
            )));
        }
    }
    Ok(orbits)
}

/// Number of distinct points (mod lattice) in the Weyl orbit of `p`.
pub fn orbit_size(rs: &RootSystem, p: &TorusPoint, tol: f64) -> usize {
    let mut images: Vec<TorusPoint> = Vec::new();
    for w in rs.weyl.elements() {
        let q = p.act(&w.vector_matrix);
        if !images.iter().any(|r| r.distance_mod_lattice(&q) <= tol) {
            images.push(q);
        }
    }
    images.len()
}
