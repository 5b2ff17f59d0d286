//! Right-hand side of the twisted index formula, polynomial reconstruction in
//! `t` and the divisibility check at `t = -1`.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::Rational64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dilog::li2;
use crate::equation::{one_minus_exp, one_plus_t_exp, reduce_angle, Equation, Time};
use crate::error::{Error, Result};
use crate::fixed_points::{enumerate_t0, standard_schedule, track_all, FixedPointPath, FixedPointSet, PathSample, TrackControls};
use crate::gamma::{vanishing_order_at_minus1, KPolynomial};
use crate::jet::{Jet, Scalar};
use crate::lie::{pair, Representation, RootSystem};
use crate::linalg::SquareMatrix;
use crate::precision::{Accumulator, Precision};

pub const SCHEMA_VERSION: u32 = 1;

/// An odd-generator insertion `W` attached to a cycle on the curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OddInsertion {
    pub rep: Representation,
    pub cycle: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexTask {
    pub group: String,
    pub genus: u32,
    pub level: i64,
    /// Test representation `U`.
    pub u: Representation,
    /// Borel weight `μ`; switches on full-flag mode.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flag_weight: Option<Vec<i64>>,
    #[serde(default)]
    pub fiber_differentials: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v: Option<Representation>,
    #[serde(default)]
    pub s_order: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub odd: Vec<OddInsertion>,
    /// Skew intersection numbers `#C_i C_j` of the insertion cycles.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub intersection: Vec<Vec<i64>>,
}

impl IndexTask {
    /// Trivial `U`, no `V`, no insertions.
    pub fn new(rs: &RootSystem, genus: u32, level: i64) -> Self {
        IndexTask {
            group: rs.cartan_type.to_string(),
            genus,
            level,
            u: Representation::trivial(rs.rank),
            flag_weight: None,
            fiber_differentials: false,
            v: None,
            s_order: 0,
            odd: Vec::new(),
            intersection: Vec::new(),
        }
    }

    pub fn full_flag(&self) -> bool {
        self.flag_weight.is_some()
    }

    pub fn validate(&self, rs: &RootSystem) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidInput(m));
        if self.genus < 2 {
            return bad(format!("genus g = {} must be at least 2", self.genus));
        }
        if self.level < 0 {
            return bad(format!("level h = {} must be non-negative", self.level));
        }
        if self.u.rank() != rs.rank {
            return bad("test representation U has the wrong rank".into());
        }
        if !self.u.is_weyl_invariant(rs) {
            return bad("test representation U is not Weyl invariant".into());
        }
        if let Some(mu) = &self.flag_weight {
            if mu.len() != rs.rank {
                return bad(format!("flag weight must have {} entries", rs.rank));
            }
        }
        if let Some(v) = &self.v {
            if v.rank() != rs.rank || !v.is_weyl_invariant(rs) {
                return bad("representation V must be a Weyl-invariant weight multiset of the right rank".into());
            }
        } else if self.s_order > 0 {
            return bad("an s-order needs a representation V".into());
        }
        let n = self.odd.len();
        if n % 2 == 1 {
            return Err(Error::OddInsertions(n));
        }
        if self.odd.iter().any(|w| w.rep.rank() != rs.rank) {
            return bad("odd insertion representation has the wrong rank".into());
        }
        if n > 0 {
            if self.intersection.len() != n || self.intersection.iter().any(|r| r.len() != n) {
                return bad(format!("intersection matrix must be {n}x{n}"));
            }
            for i in 0..n {
                for j in 0..n {
                    if self.intersection[i][j] != -self.intersection[j][i] {
                        return bad("intersection matrix must be antisymmetric".into());
                    }
                }
            }
        }
        Ok(())
    }

    /// `(g - 1) dim G`, plus `#positive roots` with fibre differentials in flag mode.
    pub fn degree_bound(&self, rs: &RootSystem) -> usize {
        let base = (self.genus as usize - 1) * rs.dim_group();
        if self.full_flag() && self.fiber_differentials {
            base + rs.n_positive
        } else {
            base
        }
    }

    /// `(g - 1) ℓ`.
    pub fn required_order(&self, rs: &RootSystem) -> usize {
        (self.genus as usize - 1) * rs.rank
    }
}

/// Deliberate defects used to check that the verifier notices them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fault {
    /// Flips the sign of `t` in the numerator factors of `θ⁻¹`.
    ThetaSign,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct EngineOptions {
    pub track: TrackControls,
    pub precision: Precision,
    pub snap_tol: f64,
    /// Fit residual bound relative to the largest sampled value.
    pub fit_bound: f64,
    pub vanishing_tol: f64,
    pub fault: Option<Fault>,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions {
            track: TrackControls::default(),
            precision: Precision::Double,
            snap_tol: 1e-6,
            fit_bound: 1e-8,
            vanishing_tol: 1e-8,
            fault: None,
        }
    }
}

/// `H` together with `det H / det((h + c) B)`.
#[derive(Debug, Clone)]
pub struct HessianForm<S> {
    pub matrix: SquareMatrix<S>,
    pub det_norm: S,
}

impl HessianForm<Complex64> {
    /// Smallest eigenvalue of the real symmetric part.
    pub fn min_eigenvalue(&self) -> f64 {
        self.matrix.min_symmetric_eigenvalue()
    }
}

/// Which starting points to continue.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathScope {
    Representatives,
    AllRegular,
    All,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeValue {
    pub t: f64,
    pub value_re: f64,
    pub value_im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointTheta {
    pub branch: Vec<i64>,
    pub theta_re: f64,
    pub theta_im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexResult {
    pub schema: u32,
    pub task: IndexTask,
    pub nodes: Vec<NodeValue>,
    /// Monomial coefficients of the `s⁰` part, rounded when `integral`.
    pub polynomial: Vec<f64>,
    pub integral: bool,
    pub degree_bound: usize,
    pub residual: f64,
    pub vanishing_order: usize,
    pub required_order: usize,
    pub verlinde_t0: f64,
    pub per_point: Vec<PointTheta>,
    /// Coefficients `[re, im]` of the `s^k` parts, `k ≥ 1`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub s_series: Vec<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

pub struct IndexEngine {
    pub rs: RootSystem,
    pub task: IndexTask,
    pub options: EngineOptions,
    pub set: FixedPointSet,
    pub warnings: Vec<String>,
}

impl IndexEngine {
    pub fn new(task: IndexTask, options: EngineOptions) -> Result<Self> {
        let rs = RootSystem::from_name(&task.group)?;
        task.validate(&rs)?;
        let set = enumerate_t0(&rs, task.level)?;
        let mut warnings = Vec::new();
        if task.level <= rs.dual_coxeter {
            warnings.push(format!(
                "level h = {} <= c = {}: the Jacobian bound (h - c) b is not positive",
                task.level, rs.dual_coxeter
            ));
        }
        Ok(IndexEngine {
            rs,
            task,
            options,
            set,
            warnings,
        })
    }

    pub fn equation(&self) -> Equation<'_> {
        Equation::new(&self.rs, self.task.level)
            .with_v(self.task.v.as_ref())
            .with_precision(self.options.precision)
    }

    /// The formal variable, when `s`-jets are requested.
    pub fn s_variable(&self) -> Option<Jet> {
        (self.task.s_order > 0 && self.task.v.is_some()).then(|| Jet::variable(self.task.s_order))
    }

    pub fn hessian<S: Scalar>(&self, xi: &[S], time: Time, s: Option<&S>) -> Result<HessianForm<S>> {
        let eq = self.equation();
        let matrix = eq.jacobian(xi, time, s)?;
        let det_norm = matrix.det().scale(Complex64::new(1.0 / eq.base_determinant(), 0.0));
        Ok(HessianForm { matrix, det_norm })
    }

    fn root_ratio_product<S: Scalar>(&self, xi: &[S], time: Time) -> Result<S> {
        let num_time = match self.options.fault {
            Some(Fault::ThetaSign) => Time {
                t: -time.t,
                one_plus_t: 1.0 - time.t,
            },
            None => time,
        };
        let mut prod = S::one();
        for (i, root) in self.rs.positive_roots().iter().enumerate() {
            let u = reduce_angle(&root.eval(xi));
            let den = u.exp_m1() * (-u.clone()).exp_m1();
            if den.lead().norm() <= self.options.track.regularity_tol.powi(2) {
                return Err(Error::SingularPoint { root: i });
            }
            let num = one_plus_t_exp(&u, num_time) * one_plus_t_exp(&(-u.clone()), num_time);
            prod = prod * num / den;
        }
        Ok(prod)
    }

    /// `θ⁻¹ = |F| Π_α (1 + t e^α)/(1 - e^α) · det_norm(H)`.
    pub fn theta_inverse<S: Scalar>(&self, xi: &[S], time: Time, s: Option<&S>) -> Result<S> {
        let h = self.hessian(xi, time, s)?;
        self.theta_inverse_with(xi, time, &h)
    }

    fn theta_inverse_with<S: Scalar>(&self, xi: &[S], time: Time, h: &HessianForm<S>) -> Result<S> {
        let prod = self.root_ratio_product(xi, time)?;
        Ok((prod * h.det_norm.clone()).scale(Complex64::new(self.set.count as f64, 0.0)))
    }

    pub fn scope(&self) -> PathScope {
        if self.task.full_flag() {
            PathScope::AllRegular
        } else {
            PathScope::Representatives
        }
    }

    pub fn indices(&self, scope: PathScope) -> Vec<usize> {
        match scope {
            PathScope::Representatives => self.set.representatives(),
            PathScope::AllRegular => self.set.regular_indices(),
            PathScope::All => (0..self.set.points.len()).collect(),
        }
    }

    pub fn track(&self, schedule: &[Time], scope: PathScope) -> Result<Vec<FixedPointPath>> {
        let eq = self.equation();
        let order = if self.s_variable().is_some() { self.task.s_order } else { 0 };
        track_all(&eq, &self.set, &self.indices(scope), schedule, &self.options.track, order)
    }

    fn sample_jets(&self, sample: &PathSample) -> Vec<Jet> {
        match &sample.jets {
            Some(j) => j.clone(),
            None => sample.xi.iter().map(|&z| Jet::constant(z)).collect(),
        }
    }

    /// `(θ⁻¹)^{g-1}` times the test-class factor and the odd cofactor at one sample.
    pub fn point_contribution(&self, sample: &PathSample) -> Result<Jet> {
        let xi = self.sample_jets(sample);
        let s = self.s_variable();
        let time = sample.time;
        let h = self.hessian(&xi, time, s.as_ref())?;
        let theta_inv = self.theta_inverse_with(&xi, time, &h)?;
        let mut value = theta_inv.powi(self.task.genus as i32 - 1);
        match &self.task.flag_weight {
            None => value = value * self.task.u.trace(&xi),
            Some(mu) => {
                value = value * pair(mu, &xi).exp();
                for root in self.rs.positive_roots() {
                    let u = reduce_angle(&root.eval(&xi));
                    value = value / one_minus_exp(&u);
                    if self.task.fiber_differentials {
                        value = value * one_plus_t_exp(&u, time);
                    }
                }
            }
        }
        if !self.task.odd.is_empty() {
            value = value * self.odd_cofactor(&xi, &h.matrix)?;
        }
        Ok(value)
    }

    /// `Σ_{matchings} Π_{(i<j)} #C_iC_j · dTr_{W_i} H⁻¹ dTr_{W_j}`.
    pub fn odd_cofactor<S: Scalar>(&self, xi: &[S], h: &SquareMatrix<S>) -> Result<S> {
        let grads: Vec<Vec<S>> = self.task.odd.iter().map(|w| w.rep.character_jets(xi).gradient).collect();
        odd_cofactor(&grads, h, &self.task.intersection)
    }

    /// Right-hand side at `time` from paths tracked over [`IndexEngine::scope`].
    pub fn rhs(&self, paths: &[FixedPointPath], time: Time) -> Result<Jet> {
        let samples: Vec<&PathSample> = paths.iter().map(|p| p.sample_at(time)).collect::<Result<_>>()?;
        let terms: Vec<Jet> = samples
            .par_iter()
            .map(|s| self.point_contribution(s))
            .collect::<Result<_>>()?;
        let mut acc = Accumulator::new(self.options.precision);
        for t in &terms {
            acc.add_jet(t);
        }
        let pre = time.one_plus_t.powi(self.task.required_order(&self.rs) as i32);
        Ok(acc.total().scale(Complex64::new(pre, 0.0)))
    }

    /// Schedule through `nodes` down to the smallest node.
    pub fn schedule_for(&self, nodes: &[f64]) -> Result<Vec<Time>> {
        let t_min = nodes.iter().copied().fold(0.0, f64::min);
        standard_schedule(&self.options.track, Some(t_min), nodes)
    }

    /// Samples the right-hand side at `nodes` and fits a polynomial of degree
    /// [`IndexTask::degree_bound`]. Defaults to `2(D + 1)` Chebyshev nodes in `[-0.9, 0]`.
    pub fn fit(&self, nodes: Option<Vec<f64>>) -> Result<IndexResult> {
        let degree = self.task.degree_bound(&self.rs);
        let nodes = nodes.unwrap_or_else(|| chebyshev_nodes(2 * (degree + 1), -0.9, 0.0));
        if nodes.len() < degree + 1 {
            return Err(Error::InvalidInput(format!(
                "{} nodes cannot determine a polynomial of degree {degree}",
                nodes.len()
            )));
        }
        let schedule = self.schedule_for(&nodes)?;
        let paths = self.track(&schedule, self.scope())?;
        let mut warnings = self.warnings.clone();
        for p in &paths {
            warnings.extend(p.warnings.iter().cloned());
        }

        let values: Vec<Jet> = nodes
            .iter()
            .map(|&t| self.rhs(&paths, Time::from_t(t)))
            .collect::<Result<_>>()?;
        let order = self.s_variable().map_or(0, |_| self.task.s_order);
        let mut fits = Vec::with_capacity(order + 1);
        for k in 0..=order {
            let vk: Vec<Complex64> = values.iter().map(|v| v.coeff(k)).collect();
            fits.push(fit_chebyshev(&nodes, &vk, degree, nodes_min(&nodes).min(-0.9), nodes_max(&nodes).max(0.0))?);
        }
        let residual = fits[0].residual;
        if residual > self.options.fit_bound {
            return Err(Error::FitFailure {
                residual,
                bound: self.options.fit_bound,
            });
        }

        let base = &fits[0].coeffs;
        let snap_tol = self.options.snap_tol;
        let integral = !self.task.full_flag()
            && base
                .iter()
                .all(|c| (c.re - c.re.round()).abs() <= snap_tol && c.im.abs() <= snap_tol);
        let (polynomial, vanishing_order) = if integral {
            let ints: Vec<i64> = base.iter().map(|c| c.re.round() as i64).collect();
            let exact = KPolynomial::new(ints.iter().map(|&c| Rational64::from_integer(c)).collect(), degree);
            let order = vanishing_order_at_minus1(&exact, 0.0)?;
            (ints.iter().map(|&c| c as f64).collect(), order)
        } else {
            let p = KPolynomial::new(base.clone(), degree);
            let order = vanishing_order_at_minus1(&p, self.options.vanishing_tol)?;
            (base.iter().map(|c| c.re).collect(), order)
        };

        let t0 = Time::zero();
        let verlinde_t0 = self.rhs(&paths, t0)?.coeff(0).re;
        let s = self.s_variable();
        let per_point = paths
            .iter()
            .map(|p| {
                let xi = self.sample_jets(&p.samples[0]);
                let th = self.theta_inverse(&xi, t0, s.as_ref())?.coeff(0).inv();
                Ok(PointTheta {
                    branch: p.branch.clone(),
                    theta_re: th.re,
                    theta_im: th.im,
                })
            })
            .collect::<Result<_>>()?;

        Ok(IndexResult {
            schema: SCHEMA_VERSION,
            task: self.task.clone(),
            nodes: nodes
                .iter()
                .zip(&values)
                .map(|(&t, v)| NodeValue {
                    t,
                    value_re: v.coeff(0).re,
                    value_im: v.coeff(0).im,
                })
                .collect(),
            polynomial,
            integral,
            degree_bound: degree,
            residual,
            vanishing_order,
            required_order: self.task.required_order(&self.rs),
            verlinde_t0,
            per_point,
            s_series: fits[1..]
                .iter()
                .map(|f| f.coeffs.iter().map(|c| [c.re, c.im]).collect())
                .collect(),
            warnings,
        })
    }
}

fn nodes_min(nodes: &[f64]) -> f64 {
    nodes.iter().copied().fold(f64::INFINITY, f64::min)
}

fn nodes_max(nodes: &[f64]) -> f64 {
    nodes.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

/// Fails unless the measured order reaches `(g - 1) ℓ`.
pub fn vanishing_check(result: &IndexResult) -> Result<usize> {
    if result.vanishing_order < result.required_order {
        return Err(Error::TheoremViolation(format!(
            "index polynomial vanishes to order {} at t = -1, expected at least {}",
            result.vanishing_order, result.required_order
        )));
    }
    Ok(result.vanishing_order)
}

/// Sum over perfect matchings of `{0..n}` of the product of `weight(i, j)`, `i < j`.
pub fn perfect_matching_sum<S: Scalar>(n: usize, weight: &dyn Fn(usize, usize) -> S) -> S {
    fn rec<S: Scalar>(free: &mut Vec<usize>, weight: &dyn Fn(usize, usize) -> S) -> S {
        if free.is_empty() {
            return S::one();
        }
        let i = free.remove(0);
        let mut total = S::zero();
        for k in 0..free.len() {
            let j = free.remove(k);
            total = total + weight(i, j) * rec(free, weight);
            free.insert(k, j);
        }
        free.insert(0, i);
        total
    }
    let mut free: Vec<usize> = (0..n).collect();
    rec(&mut free, weight)
}

/// Odd-generator cofactor from the gradients `dTr_{W_i}`.
pub fn odd_cofactor<S: Scalar>(grads: &[Vec<S>], h: &SquareMatrix<S>, intersection: &[Vec<i64>]) -> Result<S> {
    let n = grads.len();
    if n % 2 == 1 {
        return Err(Error::OddInsertions(n));
    }
    if n == 0 {
        return Ok(S::one());
    }
    let solved: Vec<Vec<S>> = grads
        .iter()
        .map(|g| h.solve(g).ok_or(Error::SingularPoint { root: 0 }))
        .collect::<Result<_>>()?;
    let weight = |i: usize, j: usize| -> S {
        let p = crate::linalg::dot(&grads[i], &solved[j]);
        p.scale(Complex64::new(intersection[i][j] as f64, 0.0))
    };
    Ok(perfect_matching_sum(n, &weight))
}

/// Classical `SL(2)` Verlinde number `((h+2)/2)^{g-1} Σ_j sin(jπ/(h+2))^{2-2g}`.
pub fn verlinde_sl2(genus: u32, level: i64) -> f64 {
    let k = (level + 2) as f64;
    let g = genus as i32;
    let s: f64 = (1..=level + 1).map(|j| (j as f64 * PI / k).sin().powi(2 - 2 * g)).sum();
    (k / 2.0).powi(g - 1) * s
}

/// `(h+c)/2 b(ξ,ξ) - s Tr_V + Σ_α Li₂(-t e^{α(ξ)})`, whose gradient is
/// `LogChi` and whose Hessian is `H`.
pub fn master_potential(eq: &Equation, xi: &[Complex64], time: Time, s: Complex64) -> Complex64 {
    let rs = eq.rs;
    let mut acc = rs.basic_form(xi, xi) * (0.5 * eq.shift);
    if let Some(v) = eq.v {
        acc -= s * v.trace(xi);
    }
    for root in &rs.roots {
        acc += li2(-time.t * root.eval(xi).exp());
    }
    acc
}

/// Chebyshev-Gauss nodes on `[a, b]`, in decreasing order.
pub fn chebyshev_nodes(n: usize, a: f64, b: f64) -> Vec<f64> {
    let mut v: Vec<f64> = (0..n)
        .map(|k| {
            let th = (2 * k + 1) as f64 * PI / (2 * n) as f64;
            0.5 * (a + b) + 0.5 * (b - a) * th.cos()
        })
        .collect();
    v.sort_by(|x, y| y.total_cmp(x));
    v
}

#[derive(Debug, Clone)]
pub struct PolyFit {
    /// Monomial coefficients in `t`.
    pub coeffs: Vec<Complex64>,
    /// Largest misfit relative to the largest sample.
    pub residual: f64,
}

/// Least squares in the Chebyshev basis of `[a, b]`, converted to monomials.
pub fn fit_chebyshev(ts: &[f64], values: &[Complex64], degree: usize, a: f64, b: f64) -> Result<PolyFit> {
    let n = ts.len();
    if n < degree + 1 {
        return Err(Error::InvalidInput(format!(
            "{n} nodes cannot determine a polynomial of degree {degree}"
        )));
    }
    let scale = 2.0 / (b - a);
    let offset = -(a + b) / (b - a);
    let basis = nalgebra::DMatrix::from_fn(n, degree + 1, |i, k| {
        let u = scale * ts[i] + offset;
        (k as f64 * u.clamp(-1.0, 1.0).acos()).cos()
    });
    let svd = basis.clone().svd(true, true);
    let solve = |rhs: nalgebra::DVector<f64>| -> Result<nalgebra::DVector<f64>> {
        svd.solve(&rhs, 1e-14)
            .map_err(|e| Error::InvalidInput(format!("least squares failed: {e}")))
    };
    let re = solve(nalgebra::DVector::from_iterator(n, values.iter().map(|v| v.re)))?;
    let im = solve(nalgebra::DVector::from_iterator(n, values.iter().map(|v| v.im)))?;
    let cheb: Vec<Complex64> = re.iter().zip(im.iter()).map(|(&r, &i)| Complex64::new(r, i)).collect();

    // T_k(scale·t + offset) as monomials in t
    let lin = [offset, scale];
    let mut t_prev = vec![1.0];
    let mut t_cur = lin.to_vec();
    let mut coeffs = vec![Complex64::new(0.0, 0.0); degree + 1];
    for (k, c) in cheb.iter().enumerate() {
        let tk: &[f64] = match k {
            0 => &t_prev,
            _ => &t_cur,
        };
        for (j, &m) in tk.iter().enumerate() {
            coeffs[j] += c * m;
        }
        if k >= 1 {
            let mut next = vec![0.0; t_cur.len() + 1];
            for (j, &m) in t_cur.iter().enumerate() {
                next[j] += 2.0 * offset * m;
                next[j + 1] += 2.0 * scale * m;
            }
            for (j, &m) in t_prev.iter().enumerate() {
                next[j] -= m;
            }
            t_prev = std::mem::replace(&mut t_cur, next);
        }
    }
    let max = values.iter().map(|v| v.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let residual = ts
        .iter()
        .zip(values)
        .map(|(&t, v)| {
            let p = coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * t + c);
            (p - v).norm()
        })
        .fold(0.0, f64::max)
        / max;
    Ok(PolyFit { coeffs, residual })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn a1_engine(genus: u32, level: i64) -> IndexEngine {
        let rs = RootSystem::from_name("A1").unwrap();
        IndexEngine::new(IndexTask::new(&rs, genus, level), EngineOptions::default()).unwrap()
    }

    #[test]
    fn theta_at_t0_examples() {
        let e = a1_engine(2, 1);
        for k in [1.0, 2.0] {
            let xi = [c(0.0, PI * k / 3.0)];
            let th = e.theta_inverse(&xi, Time::zero(), None).unwrap();
            assert!((th - c(2.0, 0.0)).norm() < 1e-13);
        }
        assert!(matches!(
            e.theta_inverse(&[c(0.0, 0.0)], Time::zero(), None),
            Err(Error::SingularPoint { .. })
        ));
    }

    #[test]
    fn verlinde_closed_form() {
        assert!((verlinde_sl2(2, 1) - 4.0).abs() < 1e-12);
        assert!((verlinde_sl2(2, 3) - 20.0).abs() < 1e-12);
        assert!((verlinde_sl2(3, 1) - 8.0).abs() < 1e-12);
    }

    #[test]
    fn matchings() {
        let one = |_: usize, _: usize| c(1.0, 0.0);
        assert_eq!(perfect_matching_sum(0, &one), c(1.0, 0.0));
        assert_eq!(perfect_matching_sum(2, &one), c(1.0, 0.0));
        assert_eq!(perfect_matching_sum(4, &one), c(3.0, 0.0));
        assert_eq!(perfect_matching_sum(6, &one), c(15.0, 0.0));
    }

    #[test]
    fn chebyshev_fit_recovers_polynomial() {
        let p = [3.0, -1.0, 4.0, 1.0, -5.0];
        let ts = chebyshev_nodes(12, -0.9, 0.0);
        let vals: Vec<Complex64> = ts
            .iter()
            .map(|&t| c(p.iter().rev().fold(0.0, |a, &k| a * t + k), 0.0))
            .collect();
        let fit = fit_chebyshev(&ts, &vals, 4, -0.9, 0.0).unwrap();
        for (a, b) in fit.coeffs.iter().zip(p) {
            assert!((a.re - b).abs() < 1e-10);
        }
        assert!(fit.residual < 1e-13);
        assert!(fit_chebyshev(&ts[..3], &vals[..3], 4, -0.9, 0.0).is_err());
    }

    #[test]
    fn a1_genus2_level3_polynomial() {
        let e = a1_engine(2, 3);
        let r = e.fit(None).unwrap();
        assert!(r.integral, "{:?}", r.polynomial);
        assert_eq!(r.polynomial, vec![20.0, 4.0, -16.0, 0.0]);
        assert!(r.vanishing_order >= 1);
        assert!((r.verlinde_t0 - 20.0).abs() < 1e-9);
    }

    #[test]
    fn task_validation() {
        let rs = RootSystem::from_name("A1").unwrap();
        let mut t = IndexTask::new(&rs, 1, 2);
        assert!(t.validate(&rs).is_err());
        t.genus = 2;
        t.odd.push(OddInsertion {
            rep: Representation::adjoint(&rs),
            cycle: "a1".into(),
        });
        assert!(matches!(t.validate(&rs), Err(Error::OddInsertions(1))));
        t.odd.push(t.odd[0].clone());
        t.intersection = vec![vec![0, 1], vec![1, 0]];
        assert!(t.validate(&rs).is_err());
        t.intersection = vec![vec![0, 1], vec![-1, 0]];
        t.validate(&rs).unwrap();
    }
}
