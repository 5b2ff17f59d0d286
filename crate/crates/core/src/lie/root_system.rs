use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::weyl::WeylGroup;
use crate::error::{Error, Result};
use crate::jet::Scalar;
use crate::linalg::{adjugate_i64, det_i64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    G,
}

/// Lie type such as `A2` or `G2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CartanType {
    pub family: Family,
    pub rank: usize,
}

impl CartanType {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let ok = match family {
            Family::A => (1..=7).contains(&rank),
            Family::B | Family::C => (2..=5).contains(&rank),
            Family::D => (4..=6).contains(&rank),
            Family::G => rank == 2,
        };
        if ok {
            Ok(CartanType { family, rank })
        } else {
            Err(Error::UnsupportedGroup(format!(
                "{family:?}{rank} (supported: A1-A7, B2-B5, C2-C5, D4-D6, G2)"
            )))
        }
    }

    pub fn dual_coxeter(&self) -> i64 {
        let n = self.rank as i64;
        match self.family {
            Family::A => n + 1,
            Family::B => 2 * n - 1,
            Family::C => n + 1,
            Family::D => 2 * n - 2,
            Family::G => 4,
        }
    }

    /// Simple roots in an ambient Euclidean lattice, and the factor `k` with
    /// `b = (euclidean form) / k` so that long roots have `b(α, α) = 2`.
    fn euclidean_simple_roots(&self) -> (Vec<Vec<i64>>, i64) {
        let n = self.rank;
        let e = |m: usize, i: usize| -> Vec<i64> {
            let mut v = vec![0; m];
            v[i] = 1;
            v
        };
        let diff = |m: usize, i: usize, j: usize| -> Vec<i64> {
            let mut v = e(m, i);
            v[j] -= 1;
            v
        };
        match self.family {
            Family::A => ((0..n).map(|i| diff(n + 1, i, i + 1)).collect(), 1),
            Family::B => {
                let mut r: Vec<_> = (0..n - 1).map(|i| diff(n, i, i + 1)).collect();
                r.push(e(n, n - 1));
                (r, 1)
            }
            Family::C => {
                let mut r: Vec<_> = (0..n - 1).map(|i| diff(n, i, i + 1)).collect();
                let mut last = e(n, n - 1);
                last[n - 1] = 2;
                r.push(last);
                (r, 2)
            }
            Family::D => {
                let mut r: Vec<_> = (0..n - 1).map(|i| diff(n, i, i + 1)).collect();
                let mut last = e(n, n - 1);
                last[n - 2] = 1;
                r.push(last);
                (r, 1)
            }
            Family::G => (vec![vec![1, -1, 0], vec![-2, 1, 1]], 3),
        }
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.family, self.rank)
    }
}

impl FromStr for CartanType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut chars = s.chars();
        let family = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => Family::A,
            Some('B') => Family::B,
            Some('C') => Family::C,
            Some('D') => Family::D,
            Some('G') => Family::G,
            _ => return Err(Error::UnsupportedGroup(s.to_string())),
        };
        let rank: usize = chars
            .as_str()
            .parse()
            .map_err(|_| Error::UnsupportedGroup(s.to_string()))?;
        CartanType::new(family, rank)
    }
}

/// A root, stored as a covector in the fundamental-weight basis together with
/// its coroot in the simple-coroot basis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Root {
    pub weight: Vec<i64>,
    pub coroot: Vec<i64>,
    /// Coefficients in the simple-root basis.
    pub simple_coeffs: Vec<i64>,
    pub height: i64,
    pub long: bool,
}

impl Root {
    pub fn is_positive(&self) -> bool {
        self.height > 0
    }

    /// `α(ξ)` for a Lie-algebra vector in simple-coroot coordinates.
    pub fn eval<S: Scalar>(&self, xi: &[S]) -> S {
        pair(&self.weight, xi)
    }
}

/// Pairing of an integer covector with a Lie-algebra vector.
pub fn pair<S: Scalar>(weight: &[i64], xi: &[S]) -> S {
    let mut acc = S::zero();
    for (&w, x) in weight.iter().zip(xi) {
        if w != 0 {
            acc = acc + x.scale(Complex64::new(w as f64, 0.0));
        }
    }
    acc
}

/// Root-system data for a simply connected simple group.
///
/// Lie-algebra vectors are written in the simple-coroot basis, covectors
/// (weights, roots) in the fundamental-weight basis, so `ϖ_i(α∨_j) = δ_ij` and
/// the pairing is the dot product. `gram` is `B_ij = b(α∨_i, α∨_j)` for the
/// basic form `b` (long roots have length 2); it is integral because the
/// coroot lattice is even for `b`.
#[derive(Debug, Clone)]
pub struct RootSystem {
    pub cartan_type: CartanType,
    pub rank: usize,
    /// `A_ij = α_i(α∨_j)`, row-major.
    pub cartan: Vec<i64>,
    pub gram: Vec<i64>,
    pub gram_det: i64,
    gram_adj: Vec<i64>,
    /// Positive roots (sorted by height) followed by their negatives in the same order.
    pub roots: Vec<Root>,
    pub n_positive: usize,
    pub dual_coxeter: i64,
    pub highest_root: usize,
    pub weyl: WeylGroup,
}

impl RootSystem {
    pub fn new(cartan_type: CartanType) -> Result<Self> {
        let cartan_type = CartanType::new(cartan_type.family, cartan_type.rank)?;
        let l = cartan_type.rank;
        let (simple, k) = cartan_type.euclidean_simple_roots();
        let ip = |a: &[i64], b: &[i64]| -> i64 { a.iter().zip(b).map(|(x, y)| x * y).sum() };

        let mut cartan = vec![0i64; l * l];
        let mut gram = vec![0i64; l * l];
        for i in 0..l {
            for j in 0..l {
                let eij = ip(&simple[i], &simple[j]);
                let ejj = ip(&simple[j], &simple[j]);
                let eii = ip(&simple[i], &simple[i]);
                assert_eq!((2 * eij) % ejj, 0);
                cartan[i * l + j] = 2 * eij / ejj;
                let num = 4 * eij * k;
                assert_eq!(num % (eii * ejj), 0, "coroot Gram matrix must be integral");
                gram[i * l + j] = num / (eii * ejj);
            }
        }
        let gram_det = det_i64(&gram, l);
        let gram_adj = adjugate_i64(&gram, l);

        let roots = generate_roots(l, &cartan, gram_det, &gram_adj);
        let n_positive = roots.len() / 2;
        let highest_root = (0..n_positive)
            .max_by_key(|&i| roots[i].height)
            .expect("nonempty root system");
        let weyl = WeylGroup::generate(l, &cartan)?;

        Ok(RootSystem {
            cartan_type,
            rank: l,
            cartan,
            gram,
            gram_det,
            gram_adj,
            roots,
            n_positive,
            dual_coxeter: cartan_type.dual_coxeter(),
            highest_root,
            weyl,
        })
    }

    pub fn from_name(name: &str) -> Result<Self> {
        RootSystem::new(name.parse()?)
    }

    pub fn positive_roots(&self) -> &[Root] {
        &self.roots[..self.n_positive]
    }

    /// Index of `-α` for the root at `i`.
    pub fn negative_of(&self, i: usize) -> usize {
        if i < self.n_positive {
            i + self.n_positive
        } else {
            i - self.n_positive
        }
    }

    pub fn dim_group(&self) -> usize {
        self.rank + self.roots.len()
    }

    pub fn gram_f64(&self, i: usize, j: usize) -> f64 {
        self.gram[i * self.rank + j] as f64
    }

    /// `b(ξ, η)` for vectors in simple-coroot coordinates.
    pub fn basic_form<S: Scalar>(&self, xi: &[S], eta: &[S]) -> S {
        let l = self.rank;
        let mut acc = S::zero();
        for i in 0..l {
            for j in 0..l {
                let g = self.gram[i * l + j];
                if g != 0 {
                    acc = acc + (xi[i].clone() * eta[j].clone()).scale(Complex64::new(g as f64, 0.0));
                }
            }
        }
        acc
    }

    /// `B · ξ`, the covector `b(ξ, ·)` in fundamental-weight coordinates.
    pub fn gram_apply<S: Scalar>(&self, xi: &[S]) -> Vec<S> {
        let l = self.rank;
        (0..l)
            .map(|i| pair(&self.gram[i * l..(i + 1) * l], xi))
            .collect()
    }

    /// `B^{-1} λ` as floating point: the vector dual to a covector under `b`.
    pub fn gram_inverse_apply(&self, lambda: &[f64]) -> Vec<f64> {
        let l = self.rank;
        (0..l)
            .map(|i| {
                (0..l)
                    .map(|j| self.gram_adj[i * l + j] as f64 * lambda[j])
                    .sum::<f64>()
                    / self.gram_det as f64
            })
            .collect()
    }

    /// Inner product of weights induced by `b`: `(λ, μ) = λᵀ B^{-1} μ`.
    pub fn weight_inner(&self, lambda: &[i64], mu: &[i64]) -> f64 {
        let mu_f: Vec<f64> = mu.iter().map(|&x| x as f64).collect();
        let v = self.gram_inverse_apply(&mu_f);
        lambda.iter().zip(&v).map(|(&a, b)| a as f64 * b).sum()
    }

    /// `ρ` in fundamental-weight coordinates.
    pub fn rho(&self) -> Vec<i64> {
        vec![1; self.rank]
    }

    pub fn weyl_order(&self) -> usize {
        self.weyl.order()
    }

    /// Level `λ(θ∨)` of a weight, `θ` the highest root.
    pub fn level(&self, lambda: &[i64]) -> i64 {
        let theta_co = &self.roots[self.highest_root].coroot;
        lambda.iter().zip(theta_co).map(|(a, b)| a * b).sum()
    }

    /// Simple reflection `s_i` on a weight.
    pub fn reflect_weight(&self, i: usize, lambda: &[i64]) -> Vec<i64> {
        let l = self.rank;
        let li = lambda[i];
        (0..l)
            .map(|k| lambda[k] - li * self.cartan[i * l + k])
            .collect()
    }

    /// Simple reflection `s_i` on a Lie-algebra vector: `ξ - α_i(ξ) α∨_i`.
    pub fn reflect_vector<S: Scalar>(&self, i: usize, xi: &[S]) -> Vec<S> {
        let l = self.rank;
        let a = pair(&self.cartan[i * l..(i + 1) * l], xi);
        let mut out = xi.to_vec();
        out[i] = out[i].clone() - a;
        out
    }

    /// Dominant weights of level at most `h`.
    pub fn level_weights(&self, h: i64) -> Vec<Vec<i64>> {
        let theta_co = self.roots[self.highest_root].coroot.clone();
        let mut out = Vec::new();
        let mut cur = vec![0i64; self.rank];
        fn rec(i: usize, budget: i64, co: &[i64], cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
            if i == cur.len() {
                out.push(cur.clone());
                return;
            }
            let mut v = 0;
            while v * co[i] <= budget {
                cur[i] = v;
                rec(i + 1, budget - v * co[i], co, cur, out);
                v += 1;
            }
            cur[i] = 0;
        }
        rec(0, h, &theta_co, &mut cur, &mut out);
        out
    }
}

fn generate_roots(l: usize, cartan: &[i64], gram_det: i64, gram_adj: &[i64]) -> Vec<Root> {
    let reflect = |i: usize, lambda: &[i64]| -> Vec<i64> {
        let li = lambda[i];
        (0..l).map(|k| lambda[k] - li * cartan[i * l + k]).collect()
    };
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    let mut queue: VecDeque<Vec<i64>> = VecDeque::new();
    for i in 0..l {
        let w = cartan[i * l..(i + 1) * l].to_vec();
        if seen.insert(w.clone()) {
            queue.push_back(w);
        }
    }
    while let Some(w) = queue.pop_front() {
        for i in 0..l {
            let r = reflect(i, &w);
            if seen.insert(r.clone()) {
                queue.push_back(r);
            }
        }
    }

    // simple-root coefficients: weight = Aᵀ k
    let at = nalgebra::DMatrix::from_fn(l, l, |i, j| cartan[j * l + i] as f64);
    let lu = at.lu();
    let mut roots: Vec<Root> = seen
        .into_iter()
        .map(|weight| {
            let rhs = nalgebra::DVector::from_iterator(l, weight.iter().map(|&x| x as f64));
            let sol = lu.solve(&rhs).expect("Cartan matrix is invertible");
            let simple_coeffs: Vec<i64> = sol.iter().map(|x| x.round() as i64).collect();
            for i in 0..l {
                let back: i64 = (0..l).map(|j| cartan[j * l + i] * simple_coeffs[j]).sum();
                assert_eq!(back, weight[i], "root must lie in the root lattice");
            }
            // b(α, α) = αᵀ B^{-1} α = αᵀ adj(B) α / det(B)
            let mut num = 0i64;
            for i in 0..l {
                for j in 0..l {
                    num += weight[i] * gram_adj[i * l + j] * weight[j];
                }
            }
            // α∨ = 2 B^{-1} α / b(α, α) = 2 adj(B) α / num
            let coroot: Vec<i64> = (0..l)
                .map(|i| {
                    let v: i64 = (0..l).map(|j| gram_adj[i * l + j] * weight[j]).sum::<i64>() * 2;
                    assert_eq!(v % num, 0, "coroot must be integral");
                    v / num
                })
                .collect();
            debug_assert_eq!(
                (0..l).map(|i| weight[i] * coroot[i]).sum::<i64>(),
                2
            );
            Root {
                height: simple_coeffs.iter().sum(),
                long: num == 2 * gram_det,
                weight,
                coroot,
                simple_coeffs,
            }
        })
        .collect();

    let mut positive: Vec<Root> = roots.drain(..).filter(|r| r.height > 0).collect();
    positive.sort_by(|a, b| a.height.cmp(&b.height).then_with(|| b.simple_coeffs.cmp(&a.simple_coeffs)));
    let negative: Vec<Root> = positive
        .iter()
        .map(|r| Root {
            weight: r.weight.iter().map(|x| -x).collect(),
            coroot: r.coroot.iter().map(|x| -x).collect(),
            simple_coeffs: r.simple_coeffs.iter().map(|x| -x).collect(),
            height: -r.height,
            long: r.long,
        })
        .collect();
    positive.extend(negative);
    positive
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a1_data() {
        let rs = RootSystem::from_name("A1").unwrap();
        assert_eq!(rs.rank, 1);
        assert_eq!(rs.roots.len(), 2);
        assert_eq!(rs.dual_coxeter, 2);
        assert_eq!(rs.gram, vec![2]);
        assert_eq!(rs.weyl_order(), 2);
        assert_eq!(rs.roots[0].weight, vec![2]);
    }

    #[test]
    fn a2_data() {
        let rs = RootSystem::from_name("A2").unwrap();
        assert_eq!(rs.roots.len(), 6);
        assert_eq!(rs.dual_coxeter, 3);
        assert_eq!(rs.gram_det, 3);
        assert_eq!(rs.weyl_order(), 6);
        assert_eq!(rs.gram, rs.cartan, "simply laced: B is the Cartan matrix");
        assert_eq!(rs.roots[rs.highest_root].weight, vec![1, 1]);
    }

    #[test]
    fn root_counts_match_tables() {
        for (name, roots, weyl) in [
            ("A3", 12, 24),
            ("B2", 8, 8),
            ("B3", 18, 48),
            ("C3", 18, 48),
            ("D4", 24, 192),
            ("G2", 12, 12),
        ] {
            let rs = RootSystem::from_name(name).unwrap();
            assert_eq!(rs.roots.len(), roots, "{name}");
            assert_eq!(rs.weyl_order(), weyl, "{name}");
        }
    }

    #[test]
    fn long_roots_have_length_two() {
        for name in ["B3", "C3", "G2", "D4"] {
            let rs = RootSystem::from_name(name).unwrap();
            for r in &rs.roots {
                let len = rs.weight_inner(&r.weight, &r.weight);
                if r.long {
                    assert!((len - 2.0).abs() < 1e-12, "{name}");
                } else {
                    assert!(len < 2.0 - 1e-9, "{name}");
                }
            }
        }
    }

    #[test]
    fn fundamental_weights_dual_to_coroots() {
        // ϖ_i(α∨_j) = δ_ij: the fundamental weight covectors are unit vectors.
        let rs = RootSystem::from_name("C3").unwrap();
        for i in 0..rs.rank {
            let mut w = vec![0i64; rs.rank];
            w[i] = 1;
            for j in 0..rs.rank {
                let mut e = vec![Complex64::new(0.0, 0.0); rs.rank];
                e[j] = Complex64::new(1.0, 0.0);
                let v = pair(&w, &e);
                assert_eq!(v.re, if i == j { 1.0 } else { 0.0 });
            }
        }
    }

    #[test]
    fn unsupported_groups_are_rejected() {
        assert!(matches!(
            RootSystem::from_name("E8"),
            Err(Error::UnsupportedGroup(_))
        ));
        assert!("A0".parse::<CartanType>().is_err());
        assert!("D3".parse::<CartanType>().is_err());
        assert!("Q2".parse::<CartanType>().is_err());
    }

    #[test]
    fn level_weight_counts() {
        let a1 = RootSystem::from_name("A1").unwrap();
        assert_eq!(a1.level_weights(1).len(), 2);
        let a2 = RootSystem::from_name("A2").unwrap();
        assert_eq!(a2.level_weights(1).len(), 3);
        assert_eq!(a2.level_weights(4).len(), 15);
    }
}
