use std::collections::{BTreeMap, HashMap, HashSet};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::root_system::{pair, RootSystem};
use crate::error::{Error, Result};
use crate::jet::Scalar;
use crate::linalg::SquareMatrix;

/// A finite-dimensional representation as a weight multiset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Representation {
    rank: usize,
    /// Distinct weights (fundamental-weight coordinates) with multiplicities, sorted.
    weights: Vec<(Vec<i64>, u32)>,
}

/// `Tr_V`, `dTr_V` and the Hessian `H_V` at a point.
#[derive(Debug, Clone)]
pub struct CharacterJets<S> {
    pub trace: S,
    /// Covector in fundamental-weight coordinates.
    pub gradient: Vec<S>,
    pub hessian: SquareMatrix<S>,
}

impl Representation {
    pub fn from_weights(rank: usize, weights: impl IntoIterator<Item = (Vec<i64>, u32)>) -> Result<Self> {
        let mut map: BTreeMap<Vec<i64>, u32> = BTreeMap::new();
        for (w, m) in weights {
            if w.len() != rank {
                return Err(Error::InvalidInput(format!(
                    "weight {w:?} has length {} but the rank is {rank}",
                    w.len()
                )));
            }
            if m == 0 {
                continue;
            }
            *map.entry(w).or_insert(0) += m;
        }
        Ok(Representation {
            rank,
            weights: map.into_iter().collect(),
        })
    }

    pub fn trivial(rank: usize) -> Self {
        Representation {
            rank,
            weights: vec![(vec![0; rank], 1)],
        }
    }

    /// Roots with multiplicity one plus the zero weight with multiplicity `ℓ`.
    pub fn adjoint(rs: &RootSystem) -> Self {
        let weights = rs
            .roots
            .iter()
            .map(|r| (r.weight.clone(), 1))
            .chain(std::iter::once((vec![0; rs.rank], rs.rank as u32)));
        Representation::from_weights(rs.rank, weights).expect("root weights have the right rank")
    }

    /// Irreducible representation of highest weight `lambda` (Freudenthal).
    pub fn irreducible(rs: &RootSystem, lambda: &[i64]) -> Result<Self> {
        if lambda.len() != rs.rank || lambda.iter().any(|&x| x < 0) {
            return Err(Error::InvalidInput(format!(
                "highest weight {lambda:?} must be dominant of length {}",
                rs.rank
            )));
        }
        let l = rs.rank;
        let rho = rs.rho();
        let shifted = |mu: &[i64]| -> Vec<i64> { mu.iter().zip(&rho).map(|(a, b)| a + b).collect() };
        let lr = shifted(lambda);
        let norm_lr = rs.weight_inner(&lr, &lr);

        let dominant_le_lambda = |mu: &[i64]| -> bool {
            let dom = dominant_conjugate(rs, mu);
            // λ - μ⁺ must be a non-negative integer combination of simple roots
            let diff: Vec<i64> = lambda.iter().zip(&dom).map(|(a, b)| a - b).collect();
            simple_root_coeffs(rs, &diff).is_some_and(|k| k.iter().all(|&c| c >= 0))
        };

        let mut mult: HashMap<Vec<i64>, u32> = HashMap::new();
        mult.insert(lambda.to_vec(), 1);
        let mut layer: Vec<Vec<i64>> = vec![lambda.to_vec()];
        while !layer.is_empty() {
            let mut next: HashSet<Vec<i64>> = HashSet::new();
            for nu in &layer {
                for i in 0..l {
                    let mu: Vec<i64> = (0..l).map(|k| nu[k] - rs.cartan[i * l + k]).collect();
                    if !mult.contains_key(&mu) && dominant_le_lambda(&mu) {
                        next.insert(mu);
                    }
                }
            }
            let mut next: Vec<Vec<i64>> = next.into_iter().collect();
            next.sort();
            let mut computed = Vec::new();
            for mu in next {
                let mr = shifted(&mu);
                let denom = norm_lr - rs.weight_inner(&mr, &mr);
                let mut acc = 0.0;
                for alpha in rs.positive_roots() {
                    let mut k = 1;
                    loop {
                        let nu: Vec<i64> = mu.iter().zip(&alpha.weight).map(|(a, b)| a + k * b).collect();
                        match mult.get(&nu) {
                            Some(&m) => acc += m as f64 * rs.weight_inner(&nu, &alpha.weight),
                            None => break,
                        }
                        k += 1;
                    }
                }
                let m = (2.0 * acc / denom).round();
                if m > 0.0 {
                    computed.push((mu, m as u32));
                }
            }
            layer = computed.iter().map(|(mu, _)| mu.clone()).collect();
            for (mu, m) in computed {
                mult.insert(mu, m);
            }
        }
        Representation::from_weights(l, mult)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn weights(&self) -> &[(Vec<i64>, u32)] {
        &self.weights
    }

    pub fn dimension(&self) -> u64 {
        self.weights.iter().map(|(_, m)| *m as u64).sum()
    }

    pub fn multiplicity(&self, weight: &[i64]) -> u32 {
        self.weights
            .iter()
            .find(|(w, _)| w.as_slice() == weight)
            .map_or(0, |(_, m)| *m)
    }

    pub fn is_trivial(&self) -> bool {
        self.weights.len() == 1 && self.weights[0].1 == 1 && self.weights[0].0.iter().all(|&x| x == 0)
    }

    /// Weyl invariance of the multiset under every simple reflection.
    pub fn is_weyl_invariant(&self, rs: &RootSystem) -> bool {
        self.weights.iter().all(|(w, m)| {
            (0..rs.rank).all(|i| self.multiplicity(&rs.reflect_weight(i, w)) == *m)
        })
    }

    /// Largest `b(λ, α₀)` over the weights, the level bound for this test class.
    pub fn max_level(&self, rs: &RootSystem) -> i64 {
        self.weights
            .iter()
            .map(|(w, _)| rs.level(w))
            .max()
            .unwrap_or(0)
    }

    /// `Tr_V = Σ m e^{λ(ξ)}`, `dTr_V = Σ m e^{λ(ξ)} λ`, `H_V = Σ m e^{λ(ξ)} λ⊗λ`.
    pub fn character_jets<S: Scalar>(&self, xi: &[S]) -> CharacterJets<S> {
        let l = self.rank;
        let mut trace = S::zero();
        let mut gradient = vec![S::zero(); l];
        let mut hessian: SquareMatrix<S> = SquareMatrix::zeros(l);
        for (w, m) in &self.weights {
            let e = pair(w, xi).exp().scale(Complex64::new(*m as f64, 0.0));
            trace = trace + e.clone();
            for i in 0..l {
                if w[i] == 0 {
                    continue;
                }
                let ei = e.scale(Complex64::new(w[i] as f64, 0.0));
                gradient[i] = gradient[i].clone() + ei.clone();
                for j in 0..l {
                    if w[j] != 0 {
                        let v = hessian.get(i, j).clone() + ei.scale(Complex64::new(w[j] as f64, 0.0));
                        hessian.set(i, j, v);
                    }
                }
            }
        }
        CharacterJets {
            trace,
            gradient,
            hessian,
        }
    }

    /// `Tr_V` alone.
    pub fn trace<S: Scalar>(&self, xi: &[S]) -> S {
        self.weights.iter().fold(S::zero(), |acc, (w, m)| {
            acc + pair(w, xi).exp().scale(Complex64::new(*m as f64, 0.0))
        })
    }
}

/// Simple-root coefficients of a root-lattice element, if integral.
pub fn simple_root_coeffs(rs: &RootSystem, weight: &[i64]) -> Option<Vec<i64>> {
    let l = rs.rank;
    let at = nalgebra::DMatrix::from_fn(l, l, |i, j| rs.cartan[j * l + i] as f64);
    let rhs = nalgebra::DVector::from_iterator(l, weight.iter().map(|&x| x as f64));
    let sol = at.lu().solve(&rhs)?;
    let k: Vec<i64> = sol.iter().map(|x| x.round() as i64).collect();
    if sol.iter().zip(&k).any(|(x, &r)| (x - r as f64).abs() > 1e-9) {
        return None;
    }
    Some(k)
}

/// The dominant weight in the Weyl orbit of `mu`.
pub fn dominant_conjugate(rs: &RootSystem, mu: &[i64]) -> Vec<i64> {
    let mut w = mu.to_vec();
    while let Some(i) = (0..rs.rank).find(|&i| w[i] < 0) {
        w = rs.reflect_weight(i, &w);
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adjoint_dimensions() {
        let a1 = RootSystem::from_name("A1").unwrap();
        let adj = Representation::adjoint(&a1);
        assert_eq!(adj.dimension(), 3);
        assert_eq!(adj.multiplicity(&[2]), 1);
        assert_eq!(adj.multiplicity(&[-2]), 1);
        assert_eq!(adj.multiplicity(&[0]), 1);
        let a2 = RootSystem::from_name("A2").unwrap();
        let adj2 = Representation::adjoint(&a2);
        assert_eq!(adj2.dimension(), 8);
        assert_eq!(adj2.multiplicity(&[0, 0]), 2);
        let g2 = RootSystem::from_name("G2").unwrap();
        assert_eq!(Representation::adjoint(&g2).dimension() as usize, g2.rank + g2.roots.len());
    }

    #[test]
    fn freudenthal_matches_known_dimensions() {
        let a2 = RootSystem::from_name("A2").unwrap();
        let adj = Representation::irreducible(&a2, &[1, 1]).unwrap();
        assert_eq!(adj, Representation::adjoint(&a2));
        assert_eq!(Representation::irreducible(&a2, &[2, 0]).unwrap().dimension(), 6);
        assert_eq!(Representation::irreducible(&a2, &[2, 1]).unwrap().dimension(), 15);
        let g2 = RootSystem::from_name("G2").unwrap();
        assert_eq!(Representation::irreducible(&g2, &[1, 0]).unwrap().dimension(), 7);
        let b3 = RootSystem::from_name("B3").unwrap();
        assert_eq!(Representation::irreducible(&b3, &[0, 0, 1]).unwrap().dimension(), 8);
        let a1 = RootSystem::from_name("A1").unwrap();
        let v3 = Representation::irreducible(&a1, &[3]).unwrap();
        assert_eq!(v3.weights().len(), 4);
        assert!(v3.is_weyl_invariant(&a1));
    }

    #[test]
    fn rejects_wrong_rank() {
        assert!(Representation::from_weights(2, [(vec![1], 1)]).is_err());
    }
}
