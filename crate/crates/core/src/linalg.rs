//! Dense row-major linear algebra over [`Scalar`], sized for rank ≤ 8.

use num_complex::Complex64;

use crate::jet::Scalar;

/// Square matrix stored row-major.
#[derive(Debug, Clone)]
pub struct SquareMatrix<S> {
    pub dim: usize,
    pub data: Vec<S>,
}

impl<S: Scalar> SquareMatrix<S> {
    pub fn zeros(dim: usize) -> Self {
        SquareMatrix {
            dim,
            data: vec![S::zero(); dim * dim],
        }
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        SquareMatrix { dim, data }
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.data[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: S) {
        self.data[i * self.dim + j] = v;
    }

    pub fn lead(&self) -> SquareMatrix<Complex64> {
        SquareMatrix {
            dim: self.dim,
            data: self.data.iter().map(Scalar::lead).collect(),
        }
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        (0..self.dim)
            .map(|i| {
                let mut acc = S::zero();
                for j in 0..self.dim {
                    acc = acc + self.get(i, j).clone() * v[j].clone();
                }
                acc
            })
            .collect()
    }

    /// LU factorisation with partial pivoting on the constant coefficient.
    fn factor(&self) -> Option<(Vec<S>, Vec<usize>, bool)> {
        let n = self.dim;
        let mut a = self.data.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut odd = false;
        for k in 0..n {
            let p = (k..n)
                .max_by(|&x, &y| {
                    a[x * n + k]
                        .lead()
                        .norm()
                        .total_cmp(&a[y * n + k].lead().norm())
                })
                .unwrap();
            if a[p * n + k].lead().norm() == 0.0 {
                return None;
            }
            if p != k {
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
                odd = !odd;
            }
            let pivot = a[k * n + k].clone();
            for i in (k + 1)..n {
                let factor = a[i * n + k].clone() / pivot.clone();
                a[i * n + k] = factor.clone();
                for j in (k + 1)..n {
                    let v = a[i * n + j].clone() - factor.clone() * a[k * n + j].clone();
                    a[i * n + j] = v;
                }
            }
        }
        Some((a, perm, odd))
    }

    pub fn det(&self) -> S {
        match self.factor() {
            None => S::zero(),
            Some((a, _, odd)) => {
                let n = self.dim;
                let mut d = S::one();
                for k in 0..n {
                    d = d * a[k * n + k].clone();
                }
                if odd {
                    -d
                } else {
                    d
                }
            }
        }
    }

    /// Solves `self · x = b`; `None` when the constant part is singular.
    pub fn solve(&self, b: &[S]) -> Option<Vec<S>> {
        let n = self.dim;
        let (a, perm, _) = self.factor()?;
        let mut y: Vec<S> = perm.iter().map(|&p| b[p].clone()).collect();
        for i in 0..n {
            for j in 0..i {
                y[i] = y[i].clone() - a[i * n + j].clone() * y[j].clone();
            }
        }
        for i in (0..n).rev() {
            for j in (i + 1)..n {
                y[i] = y[i].clone() - a[i * n + j].clone() * y[j].clone();
            }
            y[i] = y[i].clone() / a[i * n + i].clone();
        }
        Some(y)
    }
}

impl SquareMatrix<Complex64> {
    pub fn to_nalgebra(&self) -> nalgebra::DMatrix<Complex64> {
        nalgebra::DMatrix::from_row_slice(self.dim, self.dim, &self.data)
    }

    /// Ratio of extreme singular values.
    pub fn condition_number(&self) -> f64 {
        let sv = self.to_nalgebra().singular_values();
        let max = sv.iter().cloned().fold(0.0, f64::max);
        let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
        if min == 0.0 {
            f64::INFINITY
        } else {
            max / min
        }
    }

    /// Smallest eigenvalue of the Hermitian part's real form.
    pub fn min_symmetric_eigenvalue(&self) -> f64 {
        let n = self.dim;
        let m = nalgebra::DMatrix::from_fn(n, n, |i, j| {
            0.5 * (self.get(i, j).re + self.get(j, i).re)
        });
        m.symmetric_eigenvalues()
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min)
    }
}

pub fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter()
        .zip(b)
        .fold(S::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

/// Integer determinant via Bareiss fraction-free elimination.
pub fn det_i64(m: &[i64], n: usize) -> i64 {
    let mut a: Vec<i128> = m.iter().map(|&x| x as i128).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k * n + k] == 0 {
            match ((k + 1)..n).find(|&i| a[i * n + k] != 0) {
                None => return 0,
                Some(p) => {
                    for j in 0..n {
                        a.swap(k * n + j, p * n + j);
                    }
                    sign = -sign;
                }
            }
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                a[i * n + j] = (a[i * n + j] * a[k * n + k] - a[i * n + k] * a[k * n + j]) / prev;
            }
        }
        prev = a[k * n + k];
    }
    (sign * a[(n - 1) * n + (n - 1)]) as i64
}

/// Adjugate of an integer matrix, so that `m · adj = det · I`.
pub fn adjugate_i64(m: &[i64], n: usize) -> Vec<i64> {
    if n == 1 {
        return vec![1];
    }
    let mut adj = vec![0i64; n * n];
    let mut minor = Vec::with_capacity((n - 1) * (n - 1));
    for i in 0..n {
        for j in 0..n {
            minor.clear();
            for r in (0..n).filter(|&r| r != i) {
                for c in (0..n).filter(|&c| c != j) {
                    minor.push(m[r * n + c]);
                }
            }
            let cof = det_i64(&minor, n - 1);
            let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
            adj[j * n + i] = sign * cof;
        }
    }
    adj
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::Jet;

    #[test]
    fn integer_det_and_adjugate() {
        let m = [2, -1, 0, -1, 2, -1, 0, -1, 2];
        assert_eq!(det_i64(&m, 3), 4);
        let adj = adjugate_i64(&m, 3);
        for i in 0..3 {
            for j in 0..3 {
                let v: i64 = (0..3).map(|k| m[i * 3 + k] * adj[k * 3 + j]).sum();
                assert_eq!(v, if i == j { 4 } else { 0 });
            }
        }
    }

    #[test]
    fn jet_solve_matches_series() {
        // (2 + s) x = 1  =>  x = 1/2 - s/4 + s^2/8
        let a = SquareMatrix::from_fn(1, |_, _| {
            Jet::from_coeffs(vec![Complex64::new(2.0, 0.0), Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)])
        });
        let x = a.solve(&[Jet::constant(Complex64::new(1.0, 0.0))]).unwrap();
        assert!((x[0].coeff(0) - 0.5).norm() < 1e-15);
        assert!((x[0].coeff(1) + 0.25).norm() < 1e-15);
        assert!((x[0].coeff(2) - 0.125).norm() < 1e-15);
    }

    #[test]
    fn complex_det_with_pivoting() {
        let m = SquareMatrix::from_fn(2, |i, j| {
            Complex64::new([[0.0, 1.0], [2.0, 3.0]][i][j], 0.0)
        });
        assert!((m.det() - Complex64::new(-2.0, 0.0)).norm() < 1e-15);
    }
}
