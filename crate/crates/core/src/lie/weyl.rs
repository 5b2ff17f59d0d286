use std::collections::HashMap;

use crate::error::{Error, Result};

const MAX_ORDER: usize = 100_000;

/// A Weyl group element as integer matrices on both coordinate systems.
#[derive(Debug, Clone)]
pub struct WeylElement {
    /// Action on Lie-algebra vectors (simple-coroot coordinates), row-major.
    pub vector_matrix: Vec<i64>,
    /// Action on covectors (fundamental-weight coordinates), row-major.
    pub weight_matrix: Vec<i64>,
    /// Reduced word in simple reflections, leftmost applied last.
    pub word: Vec<usize>,
}

impl WeylElement {
    pub fn length(&self) -> usize {
        self.word.len()
    }
}

#[derive(Debug, Clone)]
pub struct WeylGroup {
    rank: usize,
    elements: Vec<WeylElement>,
}

impl WeylGroup {
    /// Breadth-first enumeration from the identity; BFS depth is the length.
    pub fn generate(rank: usize, cartan: &[i64]) -> Result<Self> {
        let l = rank;
        let identity: Vec<i64> = (0..l * l)
            .map(|k| if k / l == k % l { 1 } else { 0 })
            .collect();

        // s_i on vectors: x_i -= Σ_j A_ij x_j ; on weights: λ_k -= A_ik λ_i
        let vec_refl: Vec<Vec<i64>> = (0..l)
            .map(|i| {
                let mut m = identity.clone();
                for j in 0..l {
                    m[i * l + j] -= cartan[i * l + j];
                }
                m
            })
            .collect();
        let wt_refl: Vec<Vec<i64>> = (0..l)
            .map(|i| {
                let mut m = identity.clone();
                for k in 0..l {
                    m[k * l + i] -= cartan[i * l + k];
                }
                m
            })
            .collect();

        let matmul = |a: &[i64], b: &[i64]| -> Vec<i64> {
            let mut out = vec![0i64; l * l];
            for i in 0..l {
                for k in 0..l {
                    let aik = a[i * l + k];
                    if aik != 0 {
                        for j in 0..l {
                            out[i * l + j] += aik * b[k * l + j];
                        }
                    }
                }
            }
            out
        };

        let mut elements = vec![WeylElement {
            vector_matrix: identity.clone(),
            weight_matrix: identity,
            word: Vec::new(),
        }];
        let mut index: HashMap<Vec<i64>, usize> = HashMap::new();
        index.insert(elements[0].vector_matrix.clone(), 0);
        let mut frontier = 0;
        while frontier < elements.len() {
            let cur = elements[frontier].clone();
            for i in 0..l {
                let vm = matmul(&vec_refl[i], &cur.vector_matrix);
                if index.contains_key(&vm) {
                    continue;
                }
                let wm = matmul(&wt_refl[i], &cur.weight_matrix);
                let mut word = vec![i];
                word.extend_from_slice(&cur.word);
                index.insert(vm.clone(), elements.len());
                elements.push(WeylElement {
                    vector_matrix: vm,
                    weight_matrix: wm,
                    word,
                });
                if elements.len() > MAX_ORDER {
                    return Err(Error::UnsupportedGroup(format!(
                        "Weyl group order exceeds {MAX_ORDER}"
                    )));
                }
            }
            frontier += 1;
        }
        Ok(WeylGroup { rank, elements })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[WeylElement] {
        &self.elements
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Coefficients of `Σ_w q^{length(w)}`.
    pub fn length_generating_coeffs(&self) -> Vec<u64> {
        let max = self.elements.iter().map(WeylElement::length).max().unwrap_or(0);
        let mut c = vec![0u64; max + 1];
        for e in &self.elements {
            c[e.length()] += 1;
        }
        c
    }

    pub fn act_on_weight(&self, element: &WeylElement, lambda: &[i64]) -> Vec<i64> {
        let l = self.rank;
        (0..l)
            .map(|i| (0..l).map(|j| element.weight_matrix[i * l + j] * lambda[j]).sum())
            .collect()
    }
}
