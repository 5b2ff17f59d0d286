//! Behaviour of the fixed points and of `θ` as `t → -1`.
//!
//! Paths are fitted in `x = √(1 + t)` as `ξ(x) = ξ_{-1} + Σ_k x^k ξ_k`. When the
//! limit is singular the tangent is `ξ₁ = iζ`, with `ζ` the minimiser of
//! `½ h b(ζ,ζ) - Σ_{β∈z} log|β(ζ)|` over the Weyl chamber of `z` that the
//! path enters.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::equation::{one_minus_exp, one_plus_t_exp, reduce_angle, Equation, RootFactors, Time};
use crate::error::{Error, Result};
use crate::fixed_points::{lattice_solutions, standard_schedule, FixedPointPath, LatticeSolution};
use crate::index::{IndexEngine, SCHEMA_VERSION};
use crate::jet::Jet;
use crate::lie::{RootSystem, TorusPoint};
use crate::linalg::SquareMatrix;
use crate::precision::Accumulator;

const TWO_PI: f64 = 2.0 * PI;

/// Solutions of `exp(h b) = 1` modulo the coroot lattice.
pub fn solve_at_minus1(rs: &RootSystem, level: i64) -> Result<Vec<LatticeSolution>> {
    if level < 1 {
        return Err(Error::InvalidInput(format!("level h = {level} must be at least 1 at t = -1")));
    }
    Ok(lattice_solutions(rs, level))
}

/// Indices of the roots `β` with `|e^{β(ξ)} - 1| ≤ tol`.
pub fn centralizer(rs: &RootSystem, p: &TorusPoint, tol: f64) -> Vec<usize> {
    (0..rs.roots.len())
        .filter(|&i| (p.weight_value(&rs.roots[i].weight).exp() - 1.0).norm() <= tol)
        .collect()
}

fn real_pair(weight: &[i64], v: &[f64]) -> f64 {
    weight.iter().zip(v).map(|(&a, b)| a as f64 * b).sum()
}

/// Minimiser `ζ` of `½ h b(ζ,ζ) - Σ_{β∈z} log|β(ζ)|` in the open chamber of `z`
/// containing `chamber`, by damped Newton. Returns `(ζ, ξ₁ = iζ)`.
pub fn xi1_solve(rs: &RootSystem, z: &[usize], level: i64, chamber: &[f64]) -> Result<(Vec<f64>, Vec<Complex64>)> {
    if z.is_empty() {
        return Err(Error::NotSingularLimit);
    }
    let l = rs.rank;
    let h = level as f64;
    let betas: Vec<&[i64]> = z.iter().map(|&i| rs.roots[i].weight.as_slice()).collect();
    let signs: Vec<f64> = betas.iter().map(|b| real_pair(b, chamber).signum()).collect();
    if betas.iter().any(|b| real_pair(b, chamber) == 0.0) {
        return Err(Error::InvalidInput("chamber reference lies on a wall".into()));
    }
    let inside = |zeta: &[f64]| betas.iter().zip(&signs).all(|(b, s)| real_pair(b, zeta) * s > 0.0);
    let phi = |zeta: &[f64]| -> f64 {
        let q: f64 = (0..l)
            .flat_map(|i| (0..l).map(move |j| (i, j)))
            .map(|(i, j)| rs.gram_f64(i, j) * zeta[i] * zeta[j])
            .sum();
        0.5 * h * q - betas.iter().map(|b| real_pair(b, zeta).abs().ln()).sum::<f64>()
    };
    let mut zeta = chamber.to_vec();
    let max_halvings = 60;
    for _ in 0..200 {
        let mut grad: Vec<f64> = (0..l)
            .map(|i| h * (0..l).map(|j| rs.gram_f64(i, j) * zeta[j]).sum::<f64>())
            .collect();
        let mut hess = nalgebra::DMatrix::from_fn(l, l, |i, j| h * rs.gram_f64(i, j));
        for b in &betas {
            let v = real_pair(b, &zeta);
            for i in 0..l {
                grad[i] -= b[i] as f64 / v;
                for j in 0..l {
                    hess[(i, j)] += (b[i] * b[j]) as f64 / (v * v);
                }
            }
        }
        let gnorm = grad.iter().map(|g| g.abs()).fold(0.0, f64::max);
        if gnorm < 1e-14 * (1.0 + h) {
            break;
        }
        let step = hess
            .lu()
            .solve(&nalgebra::DVector::from_vec(grad.clone()))
            .ok_or(Error::ChamberEscape { retries: 0 })?;
        let f0 = phi(&zeta);
        let mut lambda = 1.0;
        let mut halvings = 0;
        loop {
            let cand: Vec<f64> = zeta.iter().zip(step.iter()).map(|(z, s)| z - lambda * s).collect();
            if inside(&cand) && phi(&cand) <= f0 + 1e-15 * f0.abs() {
                zeta = cand;
                break;
            }
            halvings += 1;
            if halvings > max_halvings {
                return Err(Error::ChamberEscape { retries: halvings });
            }
            lambda *= 0.5;
        }
        if step.iter().map(|s| (lambda * s).abs()).fold(0.0, f64::max) < 1e-16 {
            break;
        }
    }
    let xi1 = zeta.iter().map(|&z| Complex64::new(0.0, z)).collect();
    Ok((zeta, xi1))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LimitKind {
    /// The limit point is regular.
    Regular,
    /// Several paths meet at a singular point.
    Colliding,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SingularLimit {
    /// `ξ_{-1}`, lifted to the lattice translate nearest to the path.
    pub limit_point: TorusPoint,
    pub z_roots: Vec<usize>,
    pub kind: LimitKind,
    /// Fitted `ξ_1, ..., ξ_K`.
    pub coefficients: Vec<Vec<Complex64>>,
    pub fit_residual: f64,
}

impl SingularLimit {
    pub fn xi1(&self) -> &[Complex64] {
        &self.coefficients[0]
    }
}

/// Largest `x` used by [`fit_expansion`].
pub const FIT_X_MAX: f64 = 0.05;

/// Least-squares fit of `ξ(x) - ξ_{-1}` against `Σ_{k=1..K} x^k ξ_k` on the path
/// samples with `x ≤ FIT_X_MAX`.
pub fn fit_expansion(rs: &RootSystem, level: i64, path: &FixedPointPath, k: usize, tol: f64) -> Result<SingularLimit> {
    let last = path.last();
    let end = TorusPoint::new(last.xi.clone());
    let candidates = solve_at_minus1(rs, level)?;
    let mut dists: Vec<(f64, usize)> = candidates
        .iter()
        .enumerate()
        .map(|(i, c)| (c.point.distance_mod_lattice(&end), i))
        .collect();
    dists.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (d1, best) = dists[0];
    let radius = 10.0 * d1 + 1e-9;
    let close = dists.iter().filter(|(d, _)| *d <= radius).count();
    if close > 1 {
        return Err(Error::AmbiguousLimit {
            candidates: close,
            radius,
        });
    }
    let base = &candidates[best].point;
    let limit_point = TorusPoint::new(
        base.xi
            .iter()
            .zip(&end.xi)
            .map(|(b, e)| {
                let m = ((e.im - b.im) / TWO_PI).round();
                Complex64::new(b.re, b.im + TWO_PI * m)
            })
            .collect(),
    );
    let z_roots = centralizer(rs, &limit_point, tol);

    let pts: Vec<_> = path.samples.iter().filter(|s| s.time.x() <= FIT_X_MAX).collect();
    if pts.len() < k + 2 {
        return Err(Error::InvalidInput(format!(
            "only {} path samples with x <= {FIT_X_MAX}; track closer to t = -1",
            pts.len()
        )));
    }
    let basis = nalgebra::DMatrix::from_fn(pts.len(), k, |i, j| pts[i].time.x().powi(j as i32 + 1));
    let svd = basis.clone().svd(true, true);
    let l = rs.rank;
    let mut coefficients = vec![vec![Complex64::new(0.0, 0.0); l]; k];
    let mut fit_residual: f64 = 0.0;
    for c in 0..l {
        let re = nalgebra::DVector::from_iterator(pts.len(), pts.iter().map(|s| s.xi[c].re - limit_point.xi[c].re));
        let im = nalgebra::DVector::from_iterator(pts.len(), pts.iter().map(|s| s.xi[c].im - limit_point.xi[c].im));
        let sr = svd.solve(&re, 1e-15).map_err(|e| Error::InvalidInput(e.to_string()))?;
        let si = svd.solve(&im, 1e-15).map_err(|e| Error::InvalidInput(e.to_string()))?;
        for j in 0..k {
            coefficients[j][c] = Complex64::new(sr[j], si[j]);
        }
        let rr = &basis * &sr - &re;
        let ri = &basis * &si - &im;
        fit_residual = fit_residual.max(rr.amax()).max(ri.amax());
    }
    let kind = if z_roots.is_empty() {
        LimitKind::Regular
    } else {
        LimitKind::Colliding
    };
    if kind == LimitKind::Colliding {
        for &b in &z_roots {
            let v = rs.roots[b].eval(&coefficients[0]);
            if v.norm() <= tol {
                return Err(Error::TheoremViolation(format!(
                    "fitted tangent is degenerate: root #{b} vanishes on it"
                )));
            }
        }
    }
    Ok(SingularLimit {
        limit_point,
        z_roots,
        kind,
        coefficients,
        fit_residual,
    })
}

/// Value at `x = 0` of the interpolating polynomial through `(xs, ys)` (Neville).
pub fn neville_at_zero(xs: &[f64], ys: &[Complex64]) -> Complex64 {
    let mut p = ys.to_vec();
    let n = xs.len();
    for m in 1..n {
        for i in 0..n - m {
            p[i] = (p[i] * xs[i + m] - p[i + 1] * xs[i]) / (xs[i + m] - xs[i]);
        }
    }
    p[0]
}

/// Extrapolates to `x = 0` from the `m` smallest-`x` samples, returning the
/// value and the change from using one point fewer.
pub fn extrapolate(xs: &[f64], ys: &[Complex64], m: usize) -> (Complex64, f64) {
    let n = xs.len();
    let m = m.min(n);
    let (xa, ya) = (&xs[n - m..], &ys[n - m..]);
    let full = neville_at_zero(xa, ya);
    let fewer = neville_at_zero(&xa[1..], &ya[1..]);
    (full, (full - fewer).norm())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ThetaLimit {
    /// Extrapolated limit of `θ^{1-g}`.
    pub value: Complex64,
    pub extrapolation_error: f64,
    /// `θ^{1-g}` from the limiting Hessian.
    pub semi_analytic: Complex64,
}

/// `θ⁻¹` at `t = -1` assembled from the limit data: every root ratio tends to 1 and
/// `H → h B + Σ_{β∈z, β>0} 2 ββᵀ/β(ζ)²`.
pub fn semi_analytic_theta_inverse(engine: &IndexEngine, limit: &SingularLimit, zeta: Option<&[f64]>) -> Result<Complex64> {
    let rs = &engine.rs;
    let l = rs.rank;
    let h = engine.task.level as f64;
    if limit.kind == LimitKind::Regular {
        return engine.theta_inverse(&limit.limit_point.xi, Time::from_x(0.0), None);
    }
    let zeta = zeta.ok_or(Error::NotSingularLimit)?;
    let mut m = SquareMatrix::<Complex64>::from_fn(l, |i, j| Complex64::new(h * rs.gram_f64(i, j), 0.0));
    for &b in &limit.z_roots {
        if b >= rs.n_positive {
            continue;
        }
        let w = &rs.roots[b].weight;
        let v = real_pair(w, zeta);
        for i in 0..l {
            for j in 0..l {
                let add = 2.0 * (w[i] * w[j]) as f64 / (v * v);
                let cur = *m.get(i, j);
                m.set(i, j, cur + add);
            }
        }
    }
    let eq = engine.equation();
    Ok(m.det() * (engine.set.count as f64 / eq.base_determinant()))
}

/// Number of smallest-`x` samples used for extrapolation.
pub const EXTRAPOLATION_POINTS: usize = 6;

/// Limit of `θ^{1-g}` along a path.
pub fn limit_theta(engine: &IndexEngine, path: &FixedPointPath, limit: &SingularLimit, zeta: Option<&[f64]>) -> Result<ThetaLimit> {
    let g1 = engine.task.genus as i32 - 1;
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for s in path.samples.iter().filter(|s| s.time.x() <= FIT_X_MAX) {
        let th = engine.theta_inverse(&s.xi, s.time, None)?;
        xs.push(s.time.x());
        ys.push(th.powi(g1).inv());
    }
    if xs.len() < EXTRAPOLATION_POINTS {
        return Err(Error::InvalidInput("too few samples near t = -1 to extrapolate".into()));
    }
    let (value, extrapolation_error) = extrapolate(&xs, &ys, EXTRAPOLATION_POINTS);
    if !value.norm().is_finite() || extrapolation_error > 1e-3 * (1.0 + value.norm()) {
        return Err(Error::TheoremViolation(format!(
            "θ^(1-g) does not settle as t -> -1 (extrapolation change {extrapolation_error:e})"
        )));
    }
    let semi = semi_analytic_theta_inverse(engine, limit, zeta)?.powi(g1).inv();
    Ok(ThetaLimit {
        value,
        extrapolation_error,
        semi_analytic: semi,
    })
}

/// `(1 + t e^{α})/(1 - e^{α})` at one sample, for the root with index `root`.
pub fn root_ratio(rs: &RootSystem, root: usize, xi: &[Complex64], time: Time) -> Complex64 {
    let u = reduce_angle(&rs.roots[root].eval(xi));
    one_plus_t_exp(&u, time) / one_minus_exp(&u)
}

/// Paired bracket `e^β/(1 + t e^β) + e^{-β}/(1 + t e^{-β})` for a positive root.
pub fn root_bracket(rs: &RootSystem, root: usize, xi: &[Complex64], time: Time) -> Complex64 {
    let u = reduce_angle(&rs.roots[root].eval(xi));
    let f = RootFactors {
        plus: one_plus_t_exp(&u, time),
        minus: one_plus_t_exp(&(-u), time),
        u,
    };
    Equation::bracket(&f, time)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PathLimitEntry {
    pub branch: Vec<i64>,
    pub kind: LimitKind,
    /// `Im ξ_{-1} / 2π` in canonical form.
    pub limit_point: Vec<f64>,
    /// Weights of the roots in `z`.
    pub z_roots: Vec<Vec<i64>>,
    /// Fitted `ξ₁` as `[re, im]` pairs.
    pub xi1: Vec<[f64; 2]>,
    /// Relative distance between fitted and minimiser `ξ₁` (0 for regular limits).
    pub xi1_residual: f64,
    pub theta_limit_re: f64,
    pub theta_limit_im: f64,
    pub extrapolation_error: f64,
    /// Distance between extrapolated and semi-analytic limits.
    pub semi_analytic_gap: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LimitReport {
    pub schema: u32,
    pub group: String,
    pub genus: u32,
    pub level: i64,
    pub x_min: f64,
    pub paths: Vec<PathLimitEntry>,
    /// `max|S|` over the last decade of `x` divided by `max|S|` over the one before,
    /// where `S = Σ_orbit θ^{1-g} Tr_U`.
    pub growth_ratio: f64,
    pub bounded: bool,
    pub sum_limit_re: f64,
    pub sum_limit_im: f64,
}

/// Growth ratio above which the orbit sum counts as unbounded.
pub const GROWTH_BOUND: f64 = 1.5;

/// Full analysis of one path: expansion, tangent cross-check and `θ` limit.
pub fn analyse_path(engine: &IndexEngine, path: &FixedPointPath) -> Result<(SingularLimit, PathLimitEntry)> {
    let rs = &engine.rs;
    let tol = engine.options.track.regularity_tol;
    let limit = fit_expansion(rs, engine.task.level, path, 4, tol)?;
    let (zeta, xi1_residual) = match limit.kind {
        LimitKind::Regular => (None, 0.0),
        LimitKind::Colliding => {
            let x = path.last().time.x();
            let chamber: Vec<f64> = path
                .last()
                .xi
                .iter()
                .zip(&limit.limit_point.xi)
                .map(|(a, b)| (a.im - b.im) / x)
                .collect();
            let (zeta, xi1) = xi1_solve(rs, &limit.z_roots, engine.task.level, &chamber)?;
            let num: f64 = xi1.iter().zip(limit.xi1()).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
            let den: f64 = xi1.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
            (Some(zeta), num / den)
        }
    };
    let theta = limit_theta(engine, path, &limit, zeta.as_deref())?;
    let entry = PathLimitEntry {
        branch: path.branch.clone(),
        kind: limit.kind,
        limit_point: limit.limit_point.canonical().fractions(),
        z_roots: limit.z_roots.iter().map(|&i| rs.roots[i].weight.clone()).collect(),
        xi1: limit.xi1().iter().map(|z| [z.re, z.im]).collect(),
        xi1_residual,
        theta_limit_re: theta.value.re,
        theta_limit_im: theta.value.im,
        extrapolation_error: theta.extrapolation_error,
        semi_analytic_gap: (theta.value - theta.semi_analytic).norm(),
    };
    Ok((limit, entry))
}

/// Orbit sum `S(x) = Σ θ^{1-g}·(test class)` at every sample of the given paths.
pub fn orbit_sum_along(engine: &IndexEngine, paths: &[FixedPointPath]) -> Result<Vec<(f64, Jet)>> {
    let n = paths.first().map_or(0, |p| p.samples.len());
    (0..n)
        .map(|k| {
            let mut acc = Accumulator::new(engine.options.precision);
            for p in paths {
                acc.add_jet(&engine.point_contribution(&p.samples[k])?);
            }
            Ok((paths[0].samples[k].time.x(), acc.total()))
        })
        .collect()
}

/// Checks that no singularity of `θ^{1-g}` offsets the `(1 + t)^{(g-1)ℓ}`
/// prefactor: the orbit sum stays bounded as `x → x_min`.
pub fn verify_vanishing_mechanism(engine: &IndexEngine) -> Result<LimitReport> {
    let controls = &engine.options.track;
    if engine.set.regular_orbit_count() == 0 {
        return Err(Error::InvalidInput("no regular fixed points at this level".into()));
    }
    let schedule = standard_schedule(controls, None, &[])?;
    let paths = engine.track(&schedule, engine.scope())?;
    let entries: Vec<PathLimitEntry> = paths
        .iter()
        .map(|p| analyse_path(engine, p).map(|(_, e)| e))
        .collect::<Result<_>>()?;

    let sums = orbit_sum_along(engine, &paths)?;
    let x_min = controls.x_min;
    let band_max = |lo: f64, hi: f64| -> f64 {
        sums.iter()
            .filter(|(x, _)| *x >= lo * (1.0 - 1e-9) && *x <= hi * (1.0 + 1e-9))
            .map(|(_, v)| v.coeff(0).norm())
            .fold(0.0, f64::max)
    };
    let last = band_max(x_min, 10.0 * x_min);
    let prev = band_max(10.0 * x_min, 100.0 * x_min);
    let finite = sums.iter().all(|(_, v)| v.coeff(0).norm().is_finite());
    let growth_ratio = if prev > 0.0 { last / prev } else if last == 0.0 { 1.0 } else { f64::INFINITY };
    let bounded = finite && growth_ratio <= GROWTH_BOUND;
    let xs: Vec<f64> = sums.iter().map(|(x, _)| *x).collect();
    let ys: Vec<Complex64> = sums.iter().map(|(_, v)| v.coeff(0)).collect();
    let (limit, _) = extrapolate(&xs, &ys, EXTRAPOLATION_POINTS);
    let report = LimitReport {
        schema: SCHEMA_VERSION,
        group: engine.task.group.clone(),
        genus: engine.task.genus,
        level: engine.task.level,
        x_min,
        paths: entries,
        growth_ratio,
        bounded,
        sum_limit_re: limit.re,
        sum_limit_im: limit.im,
    };
    if !bounded {
        return Err(Error::TheoremViolation(format!(
            "orbit sum grows by a factor {growth_ratio:.3} over the last decade of x"
        )));
    }
    Ok(report)
}

/// For each `t = -1` solution, the indices of the paths ending there.
pub fn incoming_paths(rs: &RootSystem, level: i64, paths: &[FixedPointPath]) -> Result<Vec<Vec<usize>>> {
    let limits = solve_at_minus1(rs, level)?;
    let mut incoming = vec![Vec::new(); limits.len()];
    for (pi, p) in paths.iter().enumerate() {
        let end = TorusPoint::new(p.last().xi.clone());
        let best = limits
            .iter()
            .enumerate()
            .min_by(|a, b| {
                a.1.point
                    .distance_mod_lattice(&end)
                    .total_cmp(&b.1.point.distance_mod_lattice(&end))
            })
            .map(|(i, _)| i)
            .expect("at least one limit point");
        incoming[best].push(pi);
    }
    Ok(incoming)
}
