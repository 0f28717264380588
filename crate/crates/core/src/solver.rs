//! Levenberg–Marquardt search for points of `μ⁻¹(0)` with `b* = 0`, and
//! reconstruction of exact rational solutions from numeric ones.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dimvec::DimVector;
use crate::error::{Error, Result};
use crate::field::{q_to_f64, rationalize, Coarse, Field, Q};
use crate::matrix::Matrix;
use crate::quiver::FramedQuiver;
use crate::rep::{Representation, Verdict};
use crate::stability::Stability;

#[derive(Clone, Debug, PartialEq)]
pub struct SolverConfig {
    pub restarts: usize,
    pub max_iters: usize,
    /// Success threshold on `‖μ‖²`; `1e-20` means `‖μ‖ ≤ 1e-10`.
    pub tol_sq: f64,
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            restarts: 64,
            max_iters: 300,
            tol_sq: 1e-20,
            seed: 0,
        }
    }
}

/// Runs independent restarts and returns the result of the lowest-numbered
/// restart that succeeds, so the outcome does not depend on scheduling.
pub trait RestartExecutor: Sync {
    fn find_map_first<T, F>(&self, n: usize, f: F) -> Option<T>
    where
        T: Send,
        F: Fn(usize) -> Option<T> + Sync + Send;
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Sequential;

impl RestartExecutor for Sequential {
    fn find_map_first<T, F>(&self, n: usize, f: F) -> Option<T>
    where
        T: Send,
        F: Fn(usize) -> Option<T> + Sync + Send,
    {
        (0..n).find_map(f)
    }
}

/// Positions of the real unknowns: every entry of every arrow matrix except `b*`.
#[derive(Clone, Debug)]
pub struct Layout {
    dims: Vec<usize>,
    offsets: Vec<Option<usize>>,
    n_vars: usize,
    n_res: usize,
}

impl Layout {
    pub fn new(q: &FramedQuiver, dim: &DimVector) -> Self {
        let dims = dim.slots();
        let mut offsets = vec![None; q.arrows().len()];
        let mut n = 0;
        for a in q.arrows() {
            if a.id == q.b_star() {
                continue;
            }
            offsets[a.id] = Some(n);
            n += dims[a.head.slot()] * dims[a.tail.slot()];
        }
        let n_res = dims[1..].iter().map(|d| d * d).sum();
        Layout {
            dims,
            offsets,
            n_vars: n,
            n_res,
        }
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    /// Arrow of each unknown.
    pub fn var_arrows(&self, q: &FramedQuiver) -> Vec<usize> {
        let mut out = vec![0; self.n_vars];
        for a in q.arrows() {
            if let Some(off) = self.offsets[a.id] {
                let len = self.dims[a.head.slot()] * self.dims[a.tail.slot()];
                for s in &mut out[off..off + len] {
                    *s = a.id;
                }
            }
        }
        out
    }

    /// Sign class of each unknown: the `ε` of its arrow.
    pub fn signs(&self, q: &FramedQuiver) -> Vec<i8> {
        let mut out = vec![0; self.n_vars];
        for a in q.arrows() {
            if let Some(off) = self.offsets[a.id] {
                let len = self.dims[a.head.slot()] * self.dims[a.tail.slot()];
                for s in &mut out[off..off + len] {
                    *s = a.eps;
                }
            }
        }
        out
    }

    pub fn to_rep<F: Field>(
        &self,
        q: &FramedQuiver,
        dim: &DimVector,
        x: &[F],
    ) -> Representation<F> {
        let maps = q
            .arrows()
            .iter()
            .map(|a| {
                let (r, c) = (self.dims[a.head.slot()], self.dims[a.tail.slot()]);
                match self.offsets[a.id] {
                    Some(off) => Matrix::from_vec(r, c, x[off..off + r * c].to_vec()),
                    None => Matrix::zeros(r, c),
                }
            })
            .collect();
        Representation::new(q, dim, maps).expect("layout shapes")
    }

    pub fn from_rep<F: Field>(&self, rep: &Representation<F>) -> Vec<F> {
        let mut x = vec![F::zero(); self.n_vars];
        for a in rep.quiver().arrows() {
            if let Some(off) = self.offsets[a.id] {
                for (k, v) in rep.map(a.id).entries().iter().enumerate() {
                    x[off + k] = v.clone();
                }
            }
        }
        x
    }

    /// Calls `f(row, u, v, ε)` for every bilinear term `ε·x_u·x_v` of the
    /// residual `μ` at the nodes.
    fn for_each_term(&self, q: &FramedQuiver, mut f: impl FnMut(usize, usize, usize, i8)) {
        let mut res_off = vec![0usize; self.dims.len()];
        let mut acc = 0;
        for s in 1..self.dims.len() {
            res_off[s] = acc;
            acc += self.dims[s] * self.dims[s];
        }
        for a in q.arrows() {
            let h = a.head.slot();
            if h == 0 {
                continue;
            }
            let (Some(oa), Some(ob)) = (self.offsets[a.id], self.offsets[a.star]) else {
                continue;
            };
            let dh = self.dims[h];
            let dt = self.dims[a.tail.slot()];
            // ε · A · B with A = M_a (dh × dt), B = M_{a*} (dt × dh)
            for i in 0..dh {
                for j in 0..dh {
                    for k in 0..dt {
                        f(
                            res_off[h] + i * dh + j,
                            oa + i * dt + k,
                            ob + k * dh + j,
                            a.eps,
                        );
                    }
                }
            }
        }
    }

    /// Residual `μ` at the nodes and its Jacobian in the unknowns.
    pub fn residual_jacobian<F: Field>(&self, q: &FramedQuiver, x: &[F]) -> (Vec<F>, Matrix<F>) {
        let mut res = vec![F::zero(); self.n_res];
        let mut jac: Matrix<F> = Matrix::zeros(self.n_res, self.n_vars);
        self.for_each_term(q, |r, u, v, eps| {
            let eps = F::from_i64(eps as i64);
            res[r] = res[r].add(&eps.mul(&x[u].mul(&x[v])));
            let ju = jac.get(r, u).add(&eps.mul(&x[v]));
            jac.set(r, u, ju);
            let jv = jac.get(r, v).add(&eps.mul(&x[u]));
            jac.set(r, v, jv);
        });
        (res, jac)
    }

    /// Float residual with the Jacobian as sparse rows.
    pub fn residual_sparse(
        &self,
        q: &FramedQuiver,
        x: &[f64],
    ) -> (Vec<f64>, Vec<Vec<(usize, f64)>>) {
        let mut res = vec![0.0; self.n_res];
        let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); self.n_res];
        self.for_each_term(q, |r, u, v, eps| {
            let e = eps as f64;
            res[r] += e * x[u] * x[v];
            rows[r].push((u, e * x[v]));
            rows[r].push((v, e * x[u]));
        });
        for row in &mut rows {
            row.sort_by_key(|&(c, _)| c);
            row.dedup_by(|b, a| {
                if a.0 == b.0 {
                    a.1 += b.1;
                    true
                } else {
                    false
                }
            });
        }
        (res, rows)
    }

    fn residual_only(&self, q: &FramedQuiver, x: &[f64]) -> Vec<f64> {
        let mut res = vec![0.0; self.n_res];
        self.for_each_term(q, |r, u, v, eps| res[r] += eps as f64 * x[u] * x[v]);
        res
    }
}

fn norm_sq(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum()
}

/// Solves `A x = b` by Gaussian elimination with partial pivoting.
fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| {
            crate::field::abs(a[i][col])
                .partial_cmp(&crate::field::abs(a[j][col]))
                .unwrap_or(core::cmp::Ordering::Equal)
        })?;
        if a[piv][col] == 0.0 || !a[piv][col].is_finite() {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            if f == 0.0 {
                continue;
            }
            for c in col..n {
                a[r][c] -= f * a[col][c];
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let mut s = b[r];
        for c in r + 1..n {
            s -= a[r][c] * x[c];
        }
        x[r] = s / a[r][r];
    }
    Some(x)
}

/// Levenberg–Marquardt on the unknowns marked `free`; returns the final
/// point and `‖μ‖²`.
pub fn levenberg_marquardt(
    q: &FramedQuiver,
    layout: &Layout,
    x0: &[f64],
    free: &[bool],
    cfg: &SolverConfig,
) -> (Vec<f64>, f64) {
    let idx: Vec<usize> = (0..x0.len()).filter(|&i| free[i]).collect();
    let mut pos = vec![usize::MAX; x0.len()];
    for (k, &c) in idx.iter().enumerate() {
        pos[c] = k;
    }
    let n = idx.len();
    let mut x = x0.to_vec();
    let mut r = layout.residual_only(q, &x);
    let mut cost = norm_sq(&r);
    let mut lambda = 1e-3;
    for _ in 0..cfg.max_iters {
        if cost <= cfg.tol_sq || n == 0 {
            break;
        }
        let (_, rows) = layout.residual_sparse(q, &x);
        let mut jtj = vec![vec![0.0; n]; n];
        let mut g = vec![0.0; n];
        for (row, ri) in rows.iter().zip(&r) {
            let entries: Vec<(usize, f64)> = row
                .iter()
                .filter(|(c, _)| pos[*c] != usize::MAX)
                .map(|&(c, v)| (pos[c], v))
                .collect();
            for &(a, va) in &entries {
                g[a] += va * ri;
                for &(b, vb) in &entries {
                    jtj[a][b] += va * vb;
                }
            }
        }
        let mut accepted = false;
        for _ in 0..12 {
            let mut sys = jtj.clone();
            for (k, row) in sys.iter_mut().enumerate() {
                row[k] += lambda * (1.0 + jtj[k][k]);
            }
            let rhs: Vec<f64> = g.iter().map(|v| -v).collect();
            let Some(step) = solve_dense(sys, rhs) else {
                lambda *= 4.0;
                continue;
            };
            let mut trial = x.clone();
            for (k, &c) in idx.iter().enumerate() {
                trial[c] += step[k];
            }
            let tr = layout.residual_only(q, &trial);
            let tc = norm_sq(&tr);
            if tc < cost {
                x = trial;
                r = tr;
                cost = tc;
                lambda = (lambda / 3.0).max(1e-15);
                accepted = true;
                break;
            }
            lambda *= 4.0;
        }
        if !accepted {
            break;
        }
    }
    (x, cost)
}

#[derive(Clone, Debug, PartialEq)]
pub struct NumericSolution {
    pub rep: Representation<f64>,
    pub x: Vec<f64>,
    pub residual_sq: f64,
    pub restart: usize,
}

fn meets(verdict: Result<Verdict>, want: Verdict) -> bool {
    matches!(verdict, Ok(v) if v >= want)
}

/// The float verdict, if it does not change when small entries are ignored.
pub fn robust_verdict(rep: &Representation<f64>, theta: &Stability) -> Option<Verdict> {
    let fine = rep.verdict(theta).ok()?;
    let coarse = rep.map_field(|x| Coarse(*x)).verdict(theta).ok()?;
    (fine == coarse).then_some(fine)
}

fn robustly_meets(rep: &Representation<f64>, theta: &Stability, want: Verdict) -> bool {
    matches!(robust_verdict(rep, theta), Some(v) if v >= want)
}

fn restart_seed(seed: u64, restart: usize) -> u64 {
    seed ^ (restart as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Random restarts of [`levenberg_marquardt`] until a point with small
/// residual whose numeric verdict is at least `want` turns up. `None` is not
/// evidence that no such point exists.
pub fn solve_moment_map<E: RestartExecutor>(
    q: &FramedQuiver,
    dim: &DimVector,
    theta: &Stability,
    want: Verdict,
    cfg: &SolverConfig,
    exec: &E,
) -> Option<NumericSolution> {
    let layout = Layout::new(q, dim);
    if dim.node_total() == 0 {
        let rep = layout.to_rep(q, dim, &vec![0.0; layout.n_vars()]);
        return meets(rep.verdict(theta), want).then(|| NumericSolution {
            rep,
            x: vec![0.0; layout.n_vars()],
            residual_sq: 0.0,
            restart: 0,
        });
    }
    let free = vec![true; layout.n_vars()];
    exec.find_map_first(cfg.restarts, |restart| {
        let mut rng = ChaCha8Rng::seed_from_u64(restart_seed(cfg.seed, restart));
        let x0: Vec<f64> = (0..layout.n_vars())
            .map(|_| rng.random_range(-1.0..1.0))
            .collect();
        let (x, cost) = levenberg_marquardt(q, &layout, &x0, &free, cfg);
        if cost > cfg.tol_sq {
            return None;
        }
        let rep = layout.to_rep(q, dim, &x);
        robustly_meets(&rep, theta, want).then_some(NumericSolution {
            rep,
            x,
            residual_sq: cost,
            restart,
        })
    })
}

/// For each pair `{a, a*}` one side is held fixed; the moment map is then
/// linear in the other side.
fn fixed_sides(q: &FramedQuiver, layout: &Layout, mask: u64, by_sign: Option<i8>) -> Vec<bool> {
    let pairs: Vec<usize> = q
        .arrows()
        .iter()
        .filter(|a| a.eps > 0 && a.id != q.b())
        .map(|a| a.id)
        .collect();
    layout
        .var_arrows(q)
        .iter()
        .map(|&id| {
            let a = q.arrow(id);
            if a.id == q.b() {
                return false;
            }
            match by_sign {
                Some(s) => a.eps == s,
                None => {
                    let plus = if a.eps > 0 { a.id } else { a.star };
                    let k = pairs.iter().position(|&p| p == plus).expect("paired");
                    ((mask >> (k % 64)) & 1 == 1) == (a.eps > 0)
                }
            }
        })
        .collect()
}

/// Exact points of `μ⁻¹(0)`: the fixed side of each pair gets small random
/// integers and the rest is a random integer combination of the exact
/// kernel. Succeeds when the points with verdict at least `want` project
/// onto an open set of the fixed side.
pub fn sample_exact(
    q: &FramedQuiver,
    dim: &DimVector,
    theta: &Stability,
    want: Verdict,
    seed: u64,
    orientations: usize,
    samples: usize,
) -> Option<Representation<Q>> {
    let layout = Layout::new(q, dim);
    let n = layout.n_vars();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for o in 0..orientations {
        let fixed = match o {
            0 => fixed_sides(q, &layout, 0, Some(-1)),
            1 => fixed_sides(q, &layout, 0, Some(1)),
            _ => fixed_sides(q, &layout, rng.random(), None),
        };
        let other: Vec<usize> = (0..n).filter(|&v| !fixed[v]).collect();
        for _ in 0..samples {
            let vals: Vec<Q> = (0..n)
                .map(|v| {
                    if fixed[v] {
                        Q::from_i64(rng.random_range(-3..=3))
                    } else {
                        Q::zero()
                    }
                })
                .collect();
            let (_, jac) = layout.residual_jacobian(q, &vals);
            let mut l = Matrix::zeros(jac.rows(), other.len());
            for r in 0..jac.rows() {
                for (c, &v) in other.iter().enumerate() {
                    l.set(r, c, jac.get(r, v).clone());
                }
            }
            let kernel = l.kernel();
            let mut full = vals;
            for basis in &kernel {
                let c = Q::from_i64(rng.random_range(-3..=3));
                for (k, &v) in other.iter().enumerate() {
                    full[v] = full[v].add(&basis[k].mul(&c));
                }
            }
            let rep = layout.to_rep(q, dim, &full);
            // exact closures are slow, so screen in floating point first
            if !robustly_meets(&rep.to_f64(), theta, want) {
                continue;
            }
            if rep.is_a_module() && meets(rep.verdict(theta), want) {
                return Some(rep);
            }
        }
    }
    None
}

const SNAP_DENOMINATORS: [i64; 4] = [1, 2, 10, 100];
const CHUNK_DENOMINATOR: i64 = 100;
const SNAP_ITERS: usize = 40;
/// Re-solves allowed per unknown before a rationalization attempt gives up.
const SNAP_SOLVES_PER_VAR: usize = 3;
const COEFF_DENOMINATORS: [i64; 6] = [1, 10, 100, 1_000, 10_000, 1_000_000];

/// Turns a numeric solution into an exact one with the same verdict.
///
/// The moment map is bilinear in the unknowns with `ε = +1` and those with
/// `ε = −1`. One class is snapped to small-denominator rationals one unknown
/// at a time, re-solving the rest numerically after each snap; the other
/// class then solves a linear system, done exactly over ℚ. Both choices of
/// class are tried.
pub fn rationalize_and_verify(
    q: &FramedQuiver,
    dim: &DimVector,
    sol: &NumericSolution,
    theta: &Stability,
    want: Verdict,
    cfg: &SolverConfig,
) -> Result<Representation<Q>> {
    if !(sol.residual_sq <= cfg.tol_sq) {
        return Err(Error::PreconditionViolated(alloc::format!(
            "numeric residual {:e} above tolerance",
            sol.residual_sq
        )));
    }
    let layout = Layout::new(q, dim);
    for fix_sign in [-1i8, 1] {
        if let Some(rep) = snap_and_solve(q, dim, &layout, &sol.x, fix_sign, theta, want, cfg) {
            return Ok(rep);
        }
    }
    Err(Error::RationalizationFailed)
}

/// Nearby small-denominator rationals, then small nonzero values by distance:
/// a value near zero may only be stable away from zero.
fn snap_candidates(x: f64) -> Vec<Q> {
    let mut out: Vec<Q> = Vec::new();
    for &den in &SNAP_DENOMINATORS {
        if let Some(c) = rationalize(x, den) {
            if !out.contains(&c) {
                out.push(c);
            }
        }
    }
    let mut extra: Vec<Q> = [(1, 1), (-1, 1), (2, 1), (-2, 1), (1, 2), (-1, 2)]
        .iter()
        .map(|&(n, d)| crate::field::q(n, d))
        .filter(|c| !out.contains(c))
        .collect();
    extra.sort_by(|a, b| {
        let da = crate::field::abs(q_to_f64(a) - x);
        let db = crate::field::abs(q_to_f64(b) - x);
        da.partial_cmp(&db).unwrap_or(core::cmp::Ordering::Equal)
    });
    out.extend(extra);
    // values pinned down by earlier snaps may be rationals with larger denominators
    for &den in &COEFF_DENOMINATORS[3..] {
        if let Some(c) = rationalize(x, den) {
            if !out.contains(&c) {
                out.push(c);
            }
        }
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn snap_and_solve(
    q: &FramedQuiver,
    dim: &DimVector,
    layout: &Layout,
    x_start: &[f64],
    fix_sign: i8,
    theta: &Stability,
    want: Verdict,
    cfg: &SolverConfig,
) -> Option<Representation<Q>> {
    let signs = layout.signs(q);
    let n = layout.n_vars();
    let mut x = x_start.to_vec();
    let mut free = vec![true; n];
    let mut exact: Vec<Option<Q>> = vec![None; n];
    let mut pending: Vec<usize> = (0..n).filter(|&v| signs[v] == fix_sign).collect();
    // re-solves start next to a solution, so a short budget suffices
    let short = SolverConfig {
        max_iters: cfg.max_iters.min(SNAP_ITERS),
        ..cfg.clone()
    };
    let budget = core::cell::Cell::new(SNAP_SOLVES_PER_VAR * n + 16);
    let accept = |x: &[f64], free: &[bool]| -> Option<Vec<f64>> {
        if budget.get() == 0 {
            return None;
        }
        budget.set(budget.get() - 1);
        let (tx, cost) = levenberg_marquardt(q, layout, x, free, &short);
        (cost <= cfg.tol_sq && robustly_meets(&layout.to_rep(q, dim, &tx), theta, want))
            .then_some(tx)
    };
    // snap a chunk of unknowns to their nearest candidates at once, halving
    // the chunk on failure; a single unknown tries every candidate
    let mut chunk = pending.len().max(1);
    while !pending.is_empty() {
        let take = chunk.min(pending.len());
        let group: Vec<usize> = pending[..take].to_vec();
        let mut ok = false;
        if take > 1 {
            let snapped: Option<Vec<Q>> = group
                .iter()
                .map(|&v| rationalize(x[v], CHUNK_DENOMINATOR))
                .collect();
            let Some(snapped) = snapped else { return None };
            let mut trial = x.clone();
            for (&v, c) in group.iter().zip(&snapped) {
                trial[v] = q_to_f64(c);
                free[v] = false;
            }
            if let Some(tx) = accept(&trial, &free) {
                x = tx;
                for (&v, c) in group.iter().zip(snapped) {
                    exact[v] = Some(c);
                }
                ok = true;
            } else {
                for &v in &group {
                    free[v] = true;
                }
            }
        } else {
            let var = group[0];
            for cand in snap_candidates(x[var]) {
                let mut trial = x.clone();
                trial[var] = q_to_f64(&cand);
                free[var] = false;
                if let Some(tx) = accept(&trial, &free) {
                    x = tx;
                    exact[var] = Some(cand);
                    ok = true;
                    break;
                }
                free[var] = true;
            }
            if !ok {
                return None;
            }
        }
        if ok {
            pending.drain(..take);
            chunk = (chunk * 2).min(pending.len().max(1));
        } else {
            chunk = (take / 2).max(1);
        }
    }

    // remaining unknowns: the linear system L y = 0 with the snapped ones fixed
    let other: Vec<usize> = (0..n).filter(|&v| signs[v] != fix_sign).collect();
    let vals: Vec<Q> = (0..n)
        .map(|v| exact[v].clone().unwrap_or_else(Q::zero))
        .collect();
    let (_, jac) = layout.residual_jacobian(q, &vals);
    let mut l = Matrix::zeros(jac.rows(), other.len());
    for r in 0..jac.rows() {
        for (c, &v) in other.iter().enumerate() {
            l.set(r, c, jac.get(r, v).clone());
        }
    }
    let kernel = l.kernel();
    // least-squares coordinates of the float point in the exact kernel
    let kf: Vec<Vec<f64>> = kernel
        .iter()
        .map(|b| b.iter().map(q_to_f64).collect())
        .collect();
    let k = kf.len();
    let gram: Vec<Vec<f64>> = (0..k)
        .map(|a| {
            (0..k)
                .map(|b| kf[a].iter().zip(&kf[b]).map(|(u, v)| u * v).sum())
                .collect()
        })
        .collect();
    let rhs: Vec<f64> = (0..k)
        .map(|a| kf[a].iter().zip(&other).map(|(u, &v)| u * x[v]).sum())
        .collect();
    let c_float = if k == 0 {
        Vec::new()
    } else {
        solve_dense(gram, rhs)?
    };
    for &den in &COEFF_DENOMINATORS {
        let coeffs: Option<Vec<Q>> = c_float.iter().map(|&c| rationalize(c, den)).collect();
        let Some(coeffs) = coeffs else { continue };
        let mut full = vals.clone();
        for (basis, c) in kernel.iter().zip(&coeffs) {
            for (k, &v) in other.iter().enumerate() {
                full[v] = full[v].add(&basis[k].mul(c));
            }
        }
        let rep = layout.to_rep(q, dim, &full);
        if rep.is_a_module() && meets(rep.verdict(theta), want) {
            return Some(rep);
        }
    }
    None
}
