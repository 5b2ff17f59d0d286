//! Enumeration of the solutions of `χ(f) = 1` at `t = 0` and their
//! continuation towards `t = -1`.

use std::collections::{HashSet, VecDeque};
use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::equation::{Equation, Time};
use crate::error::{Error, Result};
use crate::jet::{Jet, Scalar};
use crate::lie::{orbit_representatives, regularity, RootSystem, TorusPoint};
use crate::linalg::{adjugate_i64, det_i64, SquareMatrix};

const TWO_PI: f64 = 2.0 * PI;
const ORBIT_TOL: f64 = 1e-9;

/// Integer vector `n` of the branch `LogChi = 2πi n`.
pub type BranchVector = Vec<i64>;

/// `|F| = (h + c)^ℓ det B`.
pub fn count_solutions(rs: &RootSystem, level: i64) -> usize {
    ((level + rs.dual_coxeter) as usize).pow(rs.rank as u32) * rs.gram_det as usize
}

/// A solution of `exp(M ξ) = 1` in canonical form `ξ = 2πi N / det M`,
/// `N ∈ [0, det M)^ℓ`.
#[derive(Debug, Clone)]
pub struct LatticeSolution {
    pub point: TorusPoint,
    pub numerators: Vec<i64>,
    /// `n = M y` for `y = N / det M`.
    pub branch: BranchVector,
    /// Exact regularity: `α·N ≢ 0 (mod det M)` for every root.
    pub regular: bool,
}

/// All solutions of `exp(k B ξ) = 1` modulo the coroot lattice, sorted by branch.
pub fn lattice_solutions(rs: &RootSystem, k: i64) -> Vec<LatticeSolution> {
    let l = rs.rank;
    let m: Vec<i64> = rs.gram.iter().map(|&g| g * k).collect();
    let det = det_i64(&m, l);
    let adj = adjugate_i64(&m, l);
    // M⁻¹ Z^ℓ / Z^ℓ is generated by the columns of adj(M) / det.
    let gens: Vec<Vec<i64>> = (0..l)
        .map(|j| (0..l).map(|i| adj[i * l + j].rem_euclid(det)).collect())
        .collect();
    let zero = vec![0i64; l];
    let mut seen: HashSet<Vec<i64>> = HashSet::from([zero.clone()]);
    let mut queue = VecDeque::from([zero]);
    while let Some(cur) = queue.pop_front() {
        for g in &gens {
            let next: Vec<i64> = cur.iter().zip(g).map(|(a, b)| (a + b).rem_euclid(det)).collect();
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    let mut out: Vec<LatticeSolution> = seen
        .into_iter()
        .map(|nums| {
            let branch: Vec<i64> = (0..l)
                .map(|i| {
                    let v: i64 = (0..l).map(|j| m[i * l + j] * nums[j]).sum();
                    debug_assert_eq!(v % det, 0);
                    v / det
                })
                .collect();
            let regular = rs.roots.iter().all(|r| {
                let v: i64 = r.weight.iter().zip(&nums).map(|(a, b)| a * b).sum();
                v.rem_euclid(det) != 0
            });
            let y: Vec<f64> = nums.iter().map(|&x| x as f64 / det as f64).collect();
            LatticeSolution {
                point: TorusPoint::from_fractions(&y),
                numerators: nums,
                branch,
                regular,
            }
        })
        .collect();
    out.sort_by(|a, b| a.branch.cmp(&b.branch));
    out
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FixedPoint {
    pub point: TorusPoint,
    pub branch: BranchVector,
    pub regular: bool,
    pub orbit: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OrbitInfo {
    /// Indices into [`FixedPointSet::points`].
    pub members: Vec<usize>,
    /// Member lying in the closed fundamental alcove.
    pub representative: usize,
    pub regular: bool,
}

/// Solutions at `t = s = 0` with orbit structure.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FixedPointSet {
    pub group: String,
    pub level: i64,
    pub count: usize,
    pub points: Vec<FixedPoint>,
    pub orbits: Vec<OrbitInfo>,
}

impl FixedPointSet {
    /// Representatives of the regular orbits, in orbit order.
    pub fn representatives(&self) -> Vec<usize> {
        self.orbits
            .iter()
            .filter(|o| o.regular)
            .map(|o| o.representative)
            .collect()
    }

    pub fn regular_indices(&self) -> Vec<usize> {
        (0..self.points.len()).filter(|&i| self.points[i].regular).collect()
    }

    pub fn regular_count(&self) -> usize {
        self.points.iter().filter(|p| p.regular).count()
    }

    pub fn regular_orbit_count(&self) -> usize {
        self.orbits.iter().filter(|o| o.regular).count()
    }
}

/// Groups lattice solutions into Weyl orbits.
pub fn build_point_set(rs: &RootSystem, level: i64, sols: Vec<LatticeSolution>) -> Result<FixedPointSet> {
    let pts: Vec<TorusPoint> = sols.iter().map(|s| s.point.clone()).collect();
    let orbits = orbit_representatives(rs, &pts, ORBIT_TOL)?;
    let mut points: Vec<FixedPoint> = sols
        .into_iter()
        .map(|s| FixedPoint {
            point: s.point,
            branch: s.branch,
            regular: s.regular,
            orbit: 0,
        })
        .collect();
    let mut infos = Vec::with_capacity(orbits.len());
    for (id, o) in orbits.into_iter().enumerate() {
        for &m in &o.members {
            points[m].orbit = id;
        }
        let representative = o
            .members
            .iter()
            .copied()
            .find(|&m| points[m].point.distance_mod_lattice(&o.representative) <= ORBIT_TOL)
            .unwrap_or(o.members[0]);
        let regular = points[representative].regular;
        if o.members.iter().any(|&m| points[m].regular != regular) {
            return Err(Error::OrbitCollision("orbit mixes regular and singular points".into()));
        }
        infos.push(OrbitInfo {
            members: o.members,
            representative,
            regular,
        });
    }
    Ok(FixedPointSet {
        group: rs.cartan_type.to_string(),
        level,
        count: points.len(),
        points,
        orbits: infos,
    })
}

/// All solutions of `exp((h + c) b) = 1`.
pub fn enumerate_t0(rs: &RootSystem, level: i64) -> Result<FixedPointSet> {
    if level < 0 {
        return Err(Error::InvalidInput(format!("level h = {level} must be non-negative")));
    }
    let sols = lattice_solutions(rs, level + rs.dual_coxeter);
    let expected = count_solutions(rs, level);
    if sols.len() != expected {
        return Err(Error::CountMismatch {
            expected,
            found: sols.len(),
        });
    }
    build_point_set(rs, level, sols)
}

/// Tolerances and step controls for correction and continuation.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TrackControls {
    pub newton_tol: f64,
    pub max_newton_iter: usize,
    /// Largest initial residual accepted by [`newton_correct`].
    pub basin_bound: f64,
    pub regularity_tol: f64,
    pub path_sep: f64,
    pub x_min: f64,
    pub initial_step: f64,
    pub min_step: f64,
    /// Largest corrector displacement accepted in one sub-step.
    pub max_jump: f64,
    pub condition_threshold: f64,
}

impl Default for TrackControls {
    fn default() -> Self {
        TrackControls {
            newton_tol: 1e-12,
            max_newton_iter: 30,
            basin_bound: PI,
            regularity_tol: 1e-8,
            path_sep: 1e-6,
            x_min: 1e-3,
            initial_step: 0.02,
            min_step: 1e-10,
            max_jump: 0.05,
            condition_threshold: 1e8,
        }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct NewtonStats {
    pub iterations: usize,
    pub residual: f64,
    /// Successive residuals, starting with the initial one.
    pub history: Vec<f64>,
}

fn inf_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn residual(eq: &Equation, xi: &[Complex64], time: Time, target: &[Complex64]) -> Result<Vec<Complex64>> {
    let g = eq.log_chi(xi, time, None)?;
    Ok(g.iter().zip(target).map(|(a, b)| a - b).collect())
}

fn branch_target(branch: &[i64]) -> Vec<Complex64> {
    branch.iter().map(|&n| Complex64::new(0.0, TWO_PI * n as f64)).collect()
}

/// Residual threshold: `tol` relative to `max(1, |2π n|)`.
fn scaled_tol(tol: f64, branch: &[i64]) -> f64 {
    let n = branch.iter().map(|&n| (TWO_PI * n as f64).abs()).fold(1.0, f64::max);
    tol * n
}

/// Newton's method on `LogChi(ξ, t) = 2πi n` at `s = 0`.
pub fn newton_correct(
    eq: &Equation,
    guess: &[Complex64],
    time: Time,
    branch: &[i64],
    tol: f64,
    max_iter: usize,
    basin_bound: f64,
) -> Result<(Vec<Complex64>, NewtonStats)> {
    let target = branch_target(branch);
    let tol = scaled_tol(tol, branch);
    let mut xi = guess.to_vec();
    let mut r = residual(eq, &xi, time, &target)?;
    let mut res = inf_norm(&r);
    let mut stats = NewtonStats {
        iterations: 0,
        residual: res,
        history: vec![res],
    };
    if res > basin_bound {
        return Err(Error::BranchMismatch { residual: res });
    }
    while stats.iterations < max_iter {
        let h = eq.jacobian(&xi, time, None)?;
        let delta = h.solve(&r).ok_or(Error::NoConvergence {
            iterations: stats.iterations,
            residual: res,
        })?;
        for (x, d) in xi.iter_mut().zip(&delta) {
            *x -= d;
        }
        r = residual(eq, &xi, time, &target)?;
        res = inf_norm(&r);
        stats.iterations += 1;
        stats.residual = res;
        stats.history.push(res);
        if res <= tol {
            let (xi, res) = polish(eq, xi, time, &target, res);
            stats.residual = res;
            return Ok((xi, stats));
        }
        if !res.is_finite() {
            break;
        }
    }
    Err(Error::NoConvergence {
        iterations: stats.iterations,
        residual: res,
    })
}

/// Sample times: steps of `initial_step` in `t` down to `-0.5`, then geometric
/// spacing in `x = √(1 + t)` (16 per decade) down to `x_min`, merged with
/// `extra` nodes. Stops at `t_min` when given.
pub fn standard_schedule(controls: &TrackControls, t_min: Option<f64>, extra: &[f64]) -> Result<Vec<Time>> {
    let x_min = controls.x_min;
    if !(x_min > 0.0 && x_min < 0.5) {
        return Err(Error::InvalidInput(format!("x_min = {x_min} must lie in (0, 0.5)")));
    }
    let floor = t_min.map(Time::from_t).unwrap_or(Time::from_x(x_min));
    if !(floor.t >= -1.0 && floor.t <= 0.0) || floor.one_plus_t <= 0.0 {
        return Err(Error::InvalidInput(format!("t_min = {} must lie in (-1, 0]", floor.t)));
    }
    let mut nodes = vec![Time::zero()];
    let step = controls.initial_step;
    if !(step > 0.0 && step <= 0.5) {
        return Err(Error::InvalidInput(format!("initial step {step} must lie in (0, 0.5]")));
    }
    let n_t = (0.5 / step).round() as usize;
    for k in 1..=n_t {
        nodes.push(Time::from_t(-(k as f64) * 0.5 / n_t as f64));
    }
    let ratio = 10f64.powf(-1.0 / 16.0);
    let mut x = 0.5f64.sqrt() * ratio;
    while x > x_min * (1.0 + 1e-9) {
        nodes.push(Time::from_x(x));
        x *= ratio;
    }
    nodes.push(Time::from_x(x_min));
    for &t in extra {
        if !(-1.0..=0.0).contains(&t) || t == -1.0 {
            return Err(Error::InvalidInput(format!("node t = {t} outside (-1, 0]")));
        }
        nodes.push(Time::from_t(t));
    }
    nodes.push(floor);
    nodes.retain(|n| n.one_plus_t >= floor.one_plus_t * (1.0 - 1e-12));
    nodes.sort_by(|a, b| b.one_plus_t.total_cmp(&a.one_plus_t));
    nodes.dedup_by(|a, b| (a.one_plus_t - b.one_plus_t).abs() <= 1e-13 * b.one_plus_t.max(1e-300));
    Ok(nodes)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PathSample {
    pub time: Time,
    pub xi: Vec<Complex64>,
    pub residual: f64,
    pub min_root_gap: f64,
    /// `ξ` as jets in `s` when an `s`-order was requested.
    #[serde(skip)]
    pub jets: Option<Vec<Jet>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FixedPointPath {
    /// Index of the starting point in its [`FixedPointSet`].
    pub index: usize,
    pub orbit: usize,
    pub branch: BranchVector,
    pub start: TorusPoint,
    pub samples: Vec<PathSample>,
    pub regular_start: bool,
    pub regular_end: bool,
    pub warnings: Vec<String>,
}

impl FixedPointPath {
    /// Sample recorded at `t` (schedule nodes are hit exactly).
    pub fn sample_at(&self, time: Time) -> Result<&PathSample> {
        self.samples
            .iter()
            .find(|s| (s.time.one_plus_t - time.one_plus_t).abs() <= 1e-13 * time.one_plus_t.max(1e-300))
            .ok_or(Error::MissingPathData { t: time.t })
    }

    pub fn last(&self) -> &PathSample {
        self.samples.last().expect("paths hold at least the start")
    }

    pub fn max_abs_real(&self) -> f64 {
        self.samples
            .iter()
            .flat_map(|s| s.xi.iter().map(|z| z.re.abs()))
            .fold(0.0, f64::max)
    }
}

#[derive(Clone, Copy)]
enum Param {
    T,
    X,
}

impl Param {
    fn of(self, time: Time) -> f64 {
        match self {
            Param::T => time.t,
            Param::X => time.x(),
        }
    }

    fn time(self, p: f64) -> Time {
        match self {
            Param::T => Time::from_t(p),
            Param::X => Time::from_x(p),
        }
    }
}

/// `dξ/dp` for the continuation parameter `p`.
fn tangent(eq: &Equation, xi: &[Complex64], time: Time, param: Param) -> Result<Vec<Complex64>> {
    let h = eq.jacobian(xi, time, None)?;
    let mut g = eq.dlog_chi_dt(xi, time)?;
    if let Param::X = param {
        let two_x = 2.0 * time.x();
        for v in &mut g {
            *v *= two_x;
        }
    }
    let d = h.solve(&g).ok_or(Error::SingularEvaluation {
        root: 0,
        t: time.t,
        modulus: 0.0,
    })?;
    Ok(d.into_iter().map(|z| -z).collect())
}

fn try_correct(
    eq: &Equation,
    pred: &[Complex64],
    time: Time,
    target: &[Complex64],
    tol: f64,
    controls: &TrackControls,
) -> Option<(Vec<Complex64>, f64)> {
    let mut xi = pred.to_vec();
    let mut r = residual(eq, &xi, time, target).ok()?;
    let mut res = inf_norm(&r);
    for _ in 0..controls.max_newton_iter.min(12) {
        if res <= tol {
            break;
        }
        let h = eq.jacobian(&xi, time, None).ok()?;
        let delta = h.solve(&r)?;
        for (x, d) in xi.iter_mut().zip(&delta) {
            *x -= d;
        }
        let r_new = residual(eq, &xi, time, target).ok()?;
        let res_new = inf_norm(&r_new);
        if !(res_new < res) && res_new > tol {
            return None;
        }
        r = r_new;
        res = res_new;
    }
    if res > tol {
        return None;
    }
    let jump = xi.iter().zip(pred).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    if jump > controls.max_jump {
        return None;
    }
    Some(polish(eq, xi, time, target, res))
}

/// One extra Newton step once converged, kept only if it does not raise the residual.
fn polish(eq: &Equation, xi: Vec<Complex64>, time: Time, target: &[Complex64], res: f64) -> (Vec<Complex64>, f64) {
    let step = || -> Option<(Vec<Complex64>, f64)> {
        let r = residual(eq, &xi, time, target).ok()?;
        let delta = eq.jacobian(&xi, time, None).ok()?.solve(&r)?;
        let next: Vec<Complex64> = xi.iter().zip(&delta).map(|(x, d)| x - d).collect();
        let res_next = inf_norm(&residual(eq, &next, time, target).ok()?);
        Some((next, res_next))
    };
    match step() {
        Some((next, r)) if r <= res => (next, r),
        _ => (xi, res),
    }
}

/// Predictor-corrector continuation through the schedule (first node = start time).
pub fn track_path(
    eq: &Equation,
    start: &TorusPoint,
    branch: &[i64],
    schedule: &[Time],
    controls: &TrackControls,
) -> Result<(Vec<PathSample>, Vec<String>)> {
    let target = branch_target(branch);
    let tol = scaled_tol(controls.newton_tol, branch);
    let first = *schedule
        .first()
        .ok_or_else(|| Error::InvalidInput("empty schedule".into()))?;
    let (mut xi, stats) = newton_correct(
        eq,
        &start.xi,
        first,
        branch,
        controls.newton_tol,
        controls.max_newton_iter,
        controls.basin_bound,
    )?;
    let mut samples = vec![PathSample {
        time: first,
        min_root_gap: eq.min_root_gap(&xi),
        xi: xi.clone(),
        residual: stats.residual,
        jets: None,
    }];
    let mut warnings = Vec::new();
    let mut res = stats.residual;
    for pair in schedule.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let param = if a.t >= -0.5 - 1e-12 && b.t >= -0.5 - 1e-12 {
            Param::T
        } else {
            Param::X
        };
        let (pa, pb) = (param.of(a), param.of(b));
        let span = pb - pa;
        let mut p = pa;
        let mut step = span.abs();
        let mut cur_time = a;
        while (pb - p).abs() > 0.0 {
            if step < controls.min_step {
                return Err(Error::PathFailure {
                    last_t: cur_time.t,
                    step,
                    last_xi: xi,
                });
            }
            let remaining = pb - p;
            let dp = if step >= remaining.abs() {
                remaining
            } else {
                step * remaining.signum()
            };
            let next_p = p + dp;
            let next_time = if next_p == pb { b } else { param.time(next_p) };
            let accepted = tangent(eq, &xi, cur_time, param).ok().and_then(|d| {
                let pred: Vec<Complex64> = xi.iter().zip(&d).map(|(x, v)| x + v * dp).collect();
                try_correct(eq, &pred, next_time, &target, tol, controls)
            });
            match accepted {
                Some((new_xi, r)) => {
                    xi = new_xi;
                    res = r;
                    p = next_p;
                    cur_time = next_time;
                    step = (step * 2.0).min(span.abs());
                }
                None => step *= 0.5,
            }
        }
        if b.x() > 10.0 * controls.x_min {
            let cond = eq.jacobian(&xi, b, None)?.condition_number();
            if cond > controls.condition_threshold {
                warnings.push(format!(
                    "Jacobian condition number {cond:.3e} at t = {:.6} (h <= c?)",
                    b.t
                ));
            }
        }
        samples.push(PathSample {
            time: b,
            min_root_gap: eq.min_root_gap(&xi),
            xi: xi.clone(),
            residual: res,
            jets: None,
        });
    }
    Ok((samples, warnings))
}

/// Lifts a solution at `s = 0` to jets in `s` of the given order by Newton
/// iteration with the frozen `s = 0` Jacobian (one order per sweep).
pub fn jet_lift(eq: &Equation, xi: &[Complex64], time: Time, branch: &[i64], order: usize) -> Result<Vec<Jet>> {
    let mut xj: Vec<Jet> = xi.iter().map(|&z| Jet::constant(z).with_order(order)).collect();
    if order == 0 || eq.v.is_none() {
        return Ok(xj);
    }
    let h0: SquareMatrix<Complex64> = eq.jacobian(xi, time, None)?;
    let s = Jet::variable(order);
    let target = branch_target(branch);
    for _ in 0..=order {
        let g = eq.log_chi(&xj, time, Some(&s))?;
        let r: Vec<Jet> = g.iter().zip(&target).map(|(a, b)| a.shift(-b)).collect();
        for k in 0..=order {
            let rk: Vec<Complex64> = r.iter().map(|j| j.coeff(k)).collect();
            let dk = h0.solve(&rk).ok_or(Error::NoConvergence {
                iterations: k,
                residual: inf_norm(&rk),
            })?;
            for (x, d) in xj.iter_mut().zip(dk) {
                let mut c = x.coeffs().to_vec();
                c[k] -= d;
                *x = Jet::from_coeffs(c);
            }
        }
    }
    Ok(xj)
}

/// Tracks the selected points of `set` in parallel; results keep the order of `indices`.
pub fn track_all(
    eq: &Equation,
    set: &FixedPointSet,
    indices: &[usize],
    schedule: &[Time],
    controls: &TrackControls,
    s_order: usize,
) -> Result<Vec<FixedPointPath>> {
    indices
        .par_iter()
        .map(|&i| {
            let fp = &set.points[i];
            let (mut samples, warnings) = track_path(eq, &fp.point, &fp.branch, schedule, controls)?;
            if s_order > 0 && eq.v.is_some() {
                for s in &mut samples {
                    s.jets = Some(jet_lift(eq, &s.xi, s.time, &fp.branch, s_order)?);
                }
            }
            let end = TorusPoint::new(samples.last().expect("nonempty").xi.clone());
            Ok(FixedPointPath {
                index: i,
                orbit: fp.orbit,
                branch: fp.branch.clone(),
                start: fp.point.clone(),
                regular_start: fp.regular,
                regular_end: regularity(eq.rs, &end, controls.regularity_tol).is_regular(),
                samples,
                warnings,
            })
        })
        .collect()
}

/// Smallest distance (mod lattice) between two paths at a common node.
pub fn min_separation(paths: &[FixedPointPath]) -> f64 {
    let mut best = f64::INFINITY;
    let n = paths.first().map_or(0, |p| p.samples.len());
    for k in 0..n {
        let pts: Vec<TorusPoint> = paths.iter().map(|p| TorusPoint::new(p.samples[k].xi.clone())).collect();
        for i in 0..pts.len() {
            for j in (i + 1)..pts.len() {
                best = best.min(pts[i].distance_mod_lattice(&pts[j]));
            }
        }
    }
    best
}

/// Fails when two paths come within `path_sep` of each other.
pub fn check_separation(paths: &[FixedPointPath], path_sep: f64) -> Result<f64> {
    let sep = min_separation(paths);
    if sep <= path_sep {
        return Err(Error::TheoremViolation(format!(
            "two fixed-point paths came within {sep:e} of each other"
        )));
    }
    Ok(sep)
}

/// Path traces as CSV: `branch_n..., t, x, re_xi..., im_xi..., residual, min_root_gap`.
pub fn write_paths_csv<W: Write>(paths: &[FixedPointPath], rank: usize, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<String> = (0..rank).map(|i| format!("branch_n{i}")).collect();
    header.push("t".into());
    header.push("x".into());
    header.extend((0..rank).map(|i| format!("re_xi{i}")));
    header.extend((0..rank).map(|i| format!("im_xi{i}")));
    header.push("residual".into());
    header.push("min_root_gap".into());
    w.write_record(&header)?;
    for p in paths {
        for s in &p.samples {
            let mut row: Vec<String> = p.branch.iter().map(|n| n.to_string()).collect();
            row.push(s.time.t.to_string());
            row.push(s.time.x().to_string());
            row.extend(s.xi.iter().map(|z| z.re.to_string()));
            row.extend(s.xi.iter().map(|z| z.im.to_string()));
            row.push(s.residual.to_string());
            row.push(s.min_root_gap.to_string());
            w.write_record(&row)?;
        }
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn counts() {
        let a1 = RootSystem::from_name("A1").unwrap();
        let a2 = RootSystem::from_name("A2").unwrap();
        assert_eq!(count_solutions(&a1, 1), 6);
        assert_eq!(count_solutions(&a2, 1), 48);
        assert_eq!(count_solutions(&a1, 0), 4);
        assert_eq!(lattice_solutions(&a2, 4).len(), 48);
        let g2 = RootSystem::from_name("G2").unwrap();
        assert_eq!(enumerate_t0(&g2, 1).unwrap().count, count_solutions(&g2, 1));
    }

    #[test]
    fn a1_level_one_points() {
        let rs = RootSystem::from_name("A1").unwrap();
        let set = enumerate_t0(&rs, 1).unwrap();
        let ks: Vec<i64> = set.points.iter().map(|p| p.branch[0]).collect();
        assert_eq!(ks, vec![0, 1, 2, 3, 4, 5]);
        for p in &set.points {
            let k = p.branch[0] as f64;
            assert!((p.point.xi[0] - c(0.0, PI * k / 3.0)).norm() < 1e-14);
        }
        let regular: Vec<bool> = set.points.iter().map(|p| p.regular).collect();
        assert_eq!(regular, vec![false, true, true, false, true, true]);
        assert_eq!(set.regular_orbit_count(), 2);
        let mut reps: Vec<i64> = set.representatives().iter().map(|&i| set.points[i].branch[0]).collect();
        reps.sort();
        assert_eq!(reps, vec![1, 2]);
    }

    #[test]
    fn regular_orbits_match_level_weights() {
        for (name, h) in [("A1", 1), ("A1", 4), ("A2", 1), ("A2", 4), ("B2", 2), ("G2", 1), ("A3", 2)] {
            let rs = RootSystem::from_name(name).unwrap();
            let set = enumerate_t0(&rs, h).unwrap();
            assert_eq!(set.regular_orbit_count(), rs.level_weights(h).len(), "{name} h={h}");
            assert_eq!(set.regular_count(), set.regular_orbit_count() * rs.weyl_order());
        }
    }

    #[test]
    fn newton_recovers_lattice_point() {
        let rs = RootSystem::from_name("A1").unwrap();
        let eq = Equation::new(&rs, 1);
        let exact = [c(0.0, PI / 3.0)];
        let (xi, stats) = newton_correct(&eq, &exact, Time::zero(), &[1], 1e-12, 20, PI).unwrap();
        assert!(stats.iterations <= 1);
        assert!((xi[0] - exact[0]).norm() < 1e-15);
        let guess = [exact[0] + c(0.0, 1e-3)];
        let (xi, _) = newton_correct(&eq, &guess, Time::zero(), &[1], 1e-12, 20, PI).unwrap();
        assert!((xi[0] - exact[0]).norm() < 1e-12);
    }

    #[test]
    fn newton_rejects_other_branch() {
        let rs = RootSystem::from_name("A1").unwrap();
        let eq = Equation::new(&rs, 1);
        let other = [c(0.0, 2.0 * PI / 3.0)];
        let err = newton_correct(&eq, &other, Time::zero(), &[1], 1e-12, 20, PI).unwrap_err();
        assert!(matches!(err, Error::BranchMismatch { .. }));
    }

    #[test]
    fn single_node_schedule_returns_start() {
        let rs = RootSystem::from_name("A2").unwrap();
        let eq = Equation::new(&rs, 2);
        let set = enumerate_t0(&rs, 2).unwrap();
        let i = set.representatives()[0];
        let (samples, _) = track_path(&eq, &set.points[i].point, &set.points[i].branch, &[Time::zero()], &TrackControls::default()).unwrap();
        assert_eq!(samples.len(), 1);
        assert!(samples[0].xi.iter().zip(&set.points[i].point.xi).all(|(a, b)| (a - b).norm() < 1e-14));
    }

    #[test]
    fn a1_paths_stay_compact_and_mirror() {
        let rs = RootSystem::from_name("A1").unwrap();
        let controls = TrackControls::default();
        let schedule = standard_schedule(&controls, Some(-0.9), &[]).unwrap();
        let eq = Equation::new(&rs, 3);
        let set = enumerate_t0(&rs, 3).unwrap();
        let paths = track_all(&eq, &set, &set.regular_indices(), &schedule, &controls, 0).unwrap();
        for p in &paths {
            assert!(p.max_abs_real() < 1e-10);
        }
        check_separation(&paths, controls.path_sep).unwrap();

        let eq1 = Equation::new(&rs, 1);
        let set1 = enumerate_t0(&rs, 1).unwrap();
        let paths = track_all(&eq1, &set1, &[1, 5], &schedule, &controls, 0).unwrap();
        for (a, b) in paths[0].samples.iter().zip(&paths[1].samples) {
            // k ↦ -k: ξ ↦ 2πi - ξ
            assert!((a.xi[0] + b.xi[0] - c(0.0, 2.0 * PI)).norm() < 1e-10);
        }
    }

    #[test]
    fn schedule_shape() {
        let controls = TrackControls::default();
        let s = standard_schedule(&controls, None, &[-0.33, -0.8]).unwrap();
        assert_eq!(s[0], Time::zero());
        assert!(s.windows(2).all(|w| w[0].one_plus_t > w[1].one_plus_t));
        assert!((s.last().unwrap().x() - 1e-3).abs() < 1e-15);
        assert!(s.iter().any(|n| n.t == -0.33));
        assert!(s.iter().any(|n| n.t == -0.8));
    }

    #[test]
    fn csv_has_documented_columns() {
        let rs = RootSystem::from_name("A1").unwrap();
        let eq = Equation::new(&rs, 1);
        let set = enumerate_t0(&rs, 1).unwrap();
        let schedule = [Time::zero(), Time::from_t(-0.1)];
        let paths = track_all(&eq, &set, &[1], &schedule, &TrackControls::default(), 0).unwrap();
        let mut buf = Vec::new();
        write_paths_csv(&paths, 1, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("branch_n0,t,x,re_xi0,im_xi0,residual,min_root_gap\n"));
        assert_eq!(text.lines().count(), 3);
    }

    #[test]
    fn jet_lift_solves_order_by_order() {
        use crate::lie::Representation;
        let rs = RootSystem::from_name("A1").unwrap();
        let v = Representation::adjoint(&rs);
        let eq = Equation::new(&rs, 2).with_v(Some(&v));
        let set = enumerate_t0(&rs, 2).unwrap();
        let p = &set.points[set.representatives()[0]];
        let time = Time::from_t(-0.3);
        let (xi, _) = newton_correct(&eq, &p.point.xi, time, &p.branch, 1e-13, 30, PI).unwrap();
        let jets = jet_lift(&eq, &xi, time, &p.branch, 3).unwrap();
        let s = Jet::variable(3);
        let g = eq.log_chi(&jets, time, Some(&s)).unwrap();
        for k in 0..=3 {
            let target = if k == 0 { c(0.0, TWO_PI * p.branch[0] as f64) } else { c(0.0, 0.0) };
            assert!((g[0].coeff(k) - target).norm() < 1e-10, "order {k}");
        }
        // first-order check against a finite difference in s
        let eps = 1e-6;
        let solve_s = |sv: f64| {
            let target = branch_target(&p.branch);
            let mut x = xi.clone();
            for _ in 0..30 {
                let sc = c(sv, 0.0);
                let g = eq.log_chi(&x, time, Some(&sc)).unwrap();
                let r: Vec<Complex64> = g.iter().zip(&target).map(|(a, b)| a - b).collect();
                let h = eq.jacobian(&x, time, Some(&sc)).unwrap();
                let d = h.solve(&r).unwrap();
                x[0] -= d[0];
            }
            x[0]
        };
        let fd = (solve_s(eps) - solve_s(-eps)) / (2.0 * eps);
        assert!((fd - jets[0].coeff(1)).norm() < 1e-6);
    }
}
