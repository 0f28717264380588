//! End to end: weights, `v′`, certificates of nonemptiness, the search for
//! `ṽ`, and the restriction to the cornered algebra.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::{assemble_ai_module, CorneredModule};
use crate::dimvec::DimVector;
use crate::error::{Error, Result};
use crate::field::Q;
use crate::mckay::{build_mckay, GroupFamily, McKayData};
use crate::oracle::{partition_to_rep, partitions, ColoredPartition};
use crate::quiver::{frame, FramedQuiver, Vertex};
use crate::rep::{Representation, Verdict};
use crate::solver::{
    rationalize_and_verify, sample_exact, solve_moment_map, Layout, RestartExecutor, SolverConfig,
};
use crate::stability::{
    construct_vprime, eta_i, theta_i, vnj_violations, CorneredStability, Stability, VPrime,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Provenance {
    Trivial,
    Oracle,
    /// Random integers on one side of each arrow pair, the exact kernel on
    /// the other.
    Sampled,
    NumericThenRationalized,
    Padded,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::Trivial => "trivial",
            Provenance::Oracle => "oracle",
            Provenance::Sampled => "sampled",
            Provenance::NumericThenRationalized => "numeric_then_rationalized",
            Provenance::Padded => "padded",
        }
    }
}

/// An exact point of `𝔐_θ(v)`: a module of `Π/(b*)` whose moment residual is
/// identically zero, with its verdict for `θ`.
#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub rep: Representation<Q>,
    pub theta: Stability,
    pub verdict: Verdict,
    pub provenance: Provenance,
    /// `‖μ‖²` of the numeric solution this came from, if any.
    pub numeric_residual_sq: Option<f64>,
}

impl Certificate {
    /// Checks the relations and the verdict; refuses anything unstable.
    pub fn issue(
        rep: Representation<Q>,
        theta: &Stability,
        provenance: Provenance,
        numeric_residual_sq: Option<f64>,
    ) -> Result<Self> {
        if !rep.is_a_module() {
            return Err(Error::InvariantViolation(
                "certificate does not satisfy the relations".into(),
            ));
        }
        let verdict = rep.verdict(theta)?;
        if !verdict.is_semistable() {
            return Err(Error::InvariantViolation("certificate is unstable".into()));
        }
        Ok(Certificate {
            rep,
            theta: theta.clone(),
            verdict,
            provenance,
            numeric_residual_sq,
        })
    }

    /// Recomputes everything from the matrices.
    pub fn verify(&self) -> Result<()> {
        let again = Certificate::issue(
            self.rep.clone(),
            &self.theta,
            self.provenance,
            self.numeric_residual_sq,
        )?;
        if again.verdict != self.verdict {
            return Err(Error::InvariantViolation(format!(
                "recorded verdict {} but recomputed {}",
                self.verdict, again.verdict
            )));
        }
        Ok(())
    }

    pub fn dim_vector(&self) -> DimVector {
        self.rep.dim_vector()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PipelineConfig {
    pub solver: SolverConfig,
    /// Most candidates of the `ṽ` search handed to the solver.
    pub max_solver_candidates: usize,
    /// Most dimension vectors handed to the numeric solver in one run.
    pub max_numeric_candidates: usize,
    /// Numeric search is skipped above this many unknowns.
    pub max_numeric_vars: usize,
    /// Largest partition size enumerated by the cyclic oracle.
    pub oracle_max_size: u32,
    /// Orientations and samples per orientation tried by exact sampling.
    pub sample_orientations: usize,
    pub samples_per_orientation: usize,
    /// Longest generating path used by the restriction; by default just long
    /// enough to be conclusive, up to [`DEFAULT_CAP_LIMIT`].
    pub restrict_cap: Option<usize>,
}

pub const DEFAULT_CAP_LIMIT: usize = 10;

/// Exact kernels get expensive past this many unknowns, so fewer
/// orientations are sampled there.
const LARGE_SAMPLE_VARS: usize = 150;
const LARGE_SAMPLE_ORIENTATIONS: usize = 4;

/// Fresh numeric solutions tried when one fails to rationalize.
const RATIONALIZE_RETRIES: usize = 4;

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            solver: SolverConfig::default(),
            max_solver_candidates: 64,
            max_numeric_candidates: 16,
            max_numeric_vars: 400,
            oracle_max_size: 24,
            sample_orientations: 16,
            samples_per_orientation: 2,
            restrict_cap: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum AttemptOutcome {
    /// Ruled out by the necessary inequality at these vertices.
    PrunedVnj(Vec<usize>),
    Stable(Provenance),
    NotFound,
    RationalizationFailed,
    Skipped(String),
}

impl AttemptOutcome {
    pub fn is_conclusive_negative(&self) -> bool {
        matches!(self, AttemptOutcome::PrunedVnj(_))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchAttempt {
    pub w: DimVector,
    pub outcome: AttemptOutcome,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VTildeResult {
    pub v_tilde: DimVector,
    pub witness: Certificate,
    pub search_log: Vec<SearchAttempt>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum VTildeOutcome {
    /// Every larger candidate was ruled out, so `ṽ` is maximal.
    Found(VTildeResult),
    /// Some larger candidate was inconclusive; `best` is the largest stable
    /// dimension vector certified.
    Unknown {
        best: Option<(DimVector, Certificate)>,
        search_log: Vec<SearchAttempt>,
    },
}

impl VTildeOutcome {
    pub fn best(&self) -> Option<(&DimVector, &Certificate)> {
        match self {
            VTildeOutcome::Found(r) => Some((&r.v_tilde, &r.witness)),
            VTildeOutcome::Unknown { best, .. } => best.as_ref().map(|(v, c)| (v, c)),
        }
    }

    pub fn search_log(&self) -> &[SearchAttempt] {
        match self {
            VTildeOutcome::Found(r) => &r.search_log,
            VTildeOutcome::Unknown { search_log, .. } => search_log,
        }
    }

    pub fn is_conclusive(&self) -> bool {
        matches!(self, VTildeOutcome::Found(_))
    }
}

/// Searches for exact certificates; holds the state shared by all attempts.
struct Searcher<'a, E> {
    mckay: &'a McKayData,
    quiver: FramedQuiver,
    cfg: &'a PipelineConfig,
    exec: &'a E,
    calls: u64,
    numeric_left: usize,
    residuals: Vec<f64>,
    stable_cache: BTreeMap<Vec<u32>, core::result::Result<Certificate, AttemptOutcome>>,
}

impl<'a, E: RestartExecutor> Searcher<'a, E> {
    fn new(mckay: &'a McKayData, cfg: &'a PipelineConfig, exec: &'a E) -> Self {
        Searcher {
            mckay,
            quiver: frame(mckay),
            cfg,
            exec,
            calls: 0,
            numeric_left: cfg.max_numeric_candidates,
            residuals: Vec::new(),
            stable_cache: BTreeMap::new(),
        }
    }

    fn cyclic_order(&self) -> Option<usize> {
        match self.mckay.group {
            GroupFamily::Cyclic(m) => Some(m),
            _ => None,
        }
    }

    fn trivial(&self, w: &DimVector) -> Representation<Q> {
        Representation::zero(&self.quiver, w)
    }

    /// Partition modules of content exactly `w` with verdict at least `want`.
    fn oracle_exact(
        &self,
        w: &DimVector,
        theta: &Stability,
        want: Verdict,
    ) -> Result<Vec<Certificate>> {
        let Some(m) = self.cyclic_order() else {
            return Ok(Vec::new());
        };
        let n = w.node_total();
        if n > self.cfg.oracle_max_size {
            return Ok(Vec::new());
        }
        let mut out = Vec::new();
        for parts in partitions(n) {
            let p = ColoredPartition::new(parts, m)?;
            if p.content != w.nodes {
                continue;
            }
            let rep = partition_to_rep(&p, &self.quiver)?;
            if rep.verdict(theta)? >= want {
                out.push(Certificate::issue(rep, theta, Provenance::Oracle, None)?);
            }
        }
        Ok(out)
    }

    fn sampled(
        &mut self,
        w: &DimVector,
        theta: &Stability,
        want: Verdict,
    ) -> Result<Option<Certificate>> {
        let n_vars = Layout::new(&self.quiver, w).n_vars();
        if n_vars > self.cfg.max_numeric_vars {
            return Ok(None);
        }
        let orientations = if n_vars > LARGE_SAMPLE_VARS {
            self.cfg.sample_orientations.min(LARGE_SAMPLE_ORIENTATIONS)
        } else {
            self.cfg.sample_orientations
        };
        let seed = self.next_seed();
        sample_exact(
            &self.quiver,
            w,
            theta,
            want,
            seed,
            orientations,
            self.cfg.samples_per_orientation,
        )
        .map(|rep| Certificate::issue(rep, theta, Provenance::Sampled, None))
        .transpose()
    }

    fn next_seed(&mut self) -> u64 {
        let s = self
            .cfg
            .solver
            .seed
            .wrapping_add(self.calls.wrapping_mul(0xA076_1D64_78BD_642F));
        self.calls += 1;
        s
    }

    fn numeric(
        &mut self,
        w: &DimVector,
        theta: &Stability,
        want: Verdict,
    ) -> Result<core::result::Result<Certificate, AttemptOutcome>> {
        let layout = Layout::new(&self.quiver, w);
        if layout.n_vars() > self.cfg.max_numeric_vars {
            return Ok(Err(AttemptOutcome::Skipped(format!(
                "{} unknowns exceed the numeric limit {}",
                layout.n_vars(),
                self.cfg.max_numeric_vars
            ))));
        }
        if self.numeric_left == 0 {
            return Ok(Err(AttemptOutcome::Skipped(
                "numeric budget exhausted".into(),
            )));
        }
        self.numeric_left -= 1;
        let mut failed = false;
        for _ in 0..RATIONALIZE_RETRIES {
            let mut scfg = self.cfg.solver.clone();
            scfg.seed = self.next_seed();
            let Some(sol) = solve_moment_map(&self.quiver, w, theta, want, &scfg, self.exec) else {
                break;
            };
            self.residuals.push(sol.residual_sq);
            match rationalize_and_verify(&self.quiver, w, &sol, theta, want, &scfg) {
                Ok(rep) => {
                    return Ok(Ok(Certificate::issue(
                        rep,
                        theta,
                        Provenance::NumericThenRationalized,
                        Some(sol.residual_sq),
                    )?))
                }
                Err(Error::RationalizationFailed) => failed = true,
                Err(e) => return Err(e),
            }
        }
        Ok(Err(if failed {
            AttemptOutcome::RationalizationFailed
        } else {
            AttemptOutcome::NotFound
        }))
    }

    /// A stable certificate of dimension exactly `w`; results are cached.
    fn stable_at(
        &mut self,
        w: &DimVector,
        theta: &Stability,
    ) -> Result<core::result::Result<Certificate, AttemptOutcome>> {
        if let Some(hit) = self.stable_cache.get(&w.nodes) {
            return Ok(hit.clone());
        }
        let out = self.stable_uncached(w, theta)?;
        self.stable_cache.insert(w.nodes.clone(), out.clone());
        Ok(out)
    }

    fn stable_uncached(
        &mut self,
        w: &DimVector,
        theta: &Stability,
    ) -> Result<core::result::Result<Certificate, AttemptOutcome>> {
        if w.node_total() == 0 {
            let rep = self.trivial(w);
            if rep.verdict(theta)? == Verdict::Stable {
                return Ok(Ok(Certificate::issue(
                    rep,
                    theta,
                    Provenance::Trivial,
                    None,
                )?));
            }
            return Ok(Err(AttemptOutcome::NotFound));
        }
        if let Some(c) = self
            .oracle_exact(w, theta, Verdict::Stable)?
            .into_iter()
            .next()
        {
            return Ok(Ok(c));
        }
        if let Some(c) = self.sampled(w, theta, Verdict::Stable)? {
            return Ok(Ok(c));
        }
        self.numeric(w, theta, Verdict::Stable)
    }

    /// A semistable certificate at `v`: a partition module padded by vertex
    /// simples when the oracle applies, otherwise a numeric one.
    fn semistable_at(
        &mut self,
        v: &DimVector,
        theta: &Stability,
        set: &BTreeSet<usize>,
    ) -> Result<Option<Certificate>> {
        if v.node_total() == 0 {
            let rep = self.trivial(v);
            return rep
                .is_semistable(theta)?
                .then(|| Certificate::issue(rep, theta, Provenance::Trivial, None))
                .transpose();
        }
        if let Some(m) = self.cyclic_order() {
            let lo: u32 = set.iter().map(|&i| v.nodes[i]).sum();
            let hi = v.node_total().min(self.cfg.oracle_max_size);
            for n in (lo..=hi).rev() {
                for parts in partitions(n) {
                    let p = ColoredPartition::new(parts, m)?;
                    let fits = p.content.iter().zip(&v.nodes).all(|(a, b)| a <= b)
                        && set.iter().all(|&i| p.content[i] == v.nodes[i]);
                    if !fits {
                        continue;
                    }
                    let pad: Vec<u32> =
                        v.nodes.iter().zip(&p.content).map(|(a, b)| a - b).collect();
                    let rep = partition_to_rep(&p, &self.quiver)?.pad_with_simples(&pad)?;
                    if rep.is_semistable(theta)? {
                        let prov = if pad.iter().all(|&x| x == 0) {
                            Provenance::Oracle
                        } else {
                            Provenance::Padded
                        };
                        return Ok(Some(Certificate::issue(rep, theta, prov, None)?));
                    }
                }
            }
        }
        if let Some(c) = self.sampled(v, theta, Verdict::Semistable)? {
            return Ok(Some(c));
        }
        // a polystable point is a stable one below v plus vertex simples
        let below: Vec<DimVector> = v_tilde_candidates(v, set)?
            .into_iter()
            .filter(|w| w != v && vnj_violations(self.mckay, set, w).is_empty())
            .collect();
        let pad_up = |c: Certificate, w: &DimVector| -> Result<Certificate> {
            let pad: Vec<u32> = v.nodes.iter().zip(&w.nodes).map(|(a, b)| a - b).collect();
            Certificate::issue(
                c.rep.pad_with_simples(&pad)?,
                theta,
                Provenance::Padded,
                None,
            )
        };
        // small candidates sample fastest and any of them will do
        for _ in 0..FALLBACK_ROUNDS {
            for w in below.iter().rev().take(FALLBACK_SAMPLED) {
                if let Some(c) = self.sampled(w, theta, Verdict::Stable)? {
                    return pad_up(c, w).map(Some);
                }
            }
        }
        if let Ok(c) = self.numeric(v, theta, Verdict::Semistable)? {
            return Ok(Some(c));
        }
        for w in below.iter().take(self.cfg.max_solver_candidates) {
            if let Ok(c) = self.stable_at(w, theta)? {
                return pad_up(c, w).map(Some);
            }
        }
        Ok(None)
    }
}

/// Candidates below `v` tried by sampling alone in the semistable fallback.
const FALLBACK_SAMPLED: usize = 2048;
const FALLBACK_ROUNDS: usize = 4;

/// Most candidates the `ṽ` search will enumerate.
pub const MAX_CANDIDATES: u64 = 200_000;

/// Candidates `w ≤ v` agreeing with `v` on `set`, by decreasing total and
/// then lexicographically decreasing.
pub fn v_tilde_candidates(v: &DimVector, set: &BTreeSet<usize>) -> Result<Vec<DimVector>> {
    let count = (0..v.num_nodes())
        .filter(|k| !set.contains(k))
        .try_fold(1u64, |acc, k| acc.checked_mul(v.nodes[k] as u64 + 1))
        .unwrap_or(u64::MAX);
    if count > MAX_CANDIDATES {
        return Err(Error::DimensionTooLarge {
            dim: count.min(usize::MAX as u64) as usize,
            limit: MAX_CANDIDATES as usize,
        });
    }
    let mut out = vec![v.clone()];
    for k in 0..v.num_nodes() {
        if set.contains(&k) {
            continue;
        }
        let mut next = Vec::new();
        for w in &out {
            for x in 0..=v.nodes[k] {
                let mut c = w.clone();
                c.nodes[k] = x;
                next.push(c);
            }
        }
        out = next;
    }
    out.sort_by(|a, b| {
        b.total()
            .cmp(&a.total())
            .then_with(|| b.nodes.cmp(&a.nodes))
    });
    Ok(out)
}

/// Searches below `v` for the largest dimension vector with a `θ_I`-stable
/// certificate. Without a semistable certificate at `v` nothing is tried.
pub fn find_v_tilde<E: RestartExecutor>(
    mckay: &McKayData,
    set: &BTreeSet<usize>,
    v: &DimVector,
    semistable: Option<&Certificate>,
    cfg: &PipelineConfig,
    exec: &E,
) -> Result<VTildeOutcome> {
    let mut s = Searcher::new(mckay, cfg, exec);
    find_v_tilde_with(&mut s, set, v, semistable)
}

fn find_v_tilde_with<E: RestartExecutor>(
    s: &mut Searcher<'_, E>,
    set: &BTreeSet<usize>,
    v: &DimVector,
    semistable: Option<&Certificate>,
) -> Result<VTildeOutcome> {
    let mut log = Vec::new();
    if semistable.is_none() {
        return Ok(VTildeOutcome::Unknown {
            best: None,
            search_log: log,
        });
    }
    let theta = theta_i(s.mckay, set, v)?;
    let mut conclusive = true;
    let mut solver_candidates = 0;
    for w in v_tilde_candidates(v, set)? {
        let bad = vnj_violations(s.mckay, set, &w);
        if !bad.is_empty() {
            log.push(SearchAttempt {
                w,
                outcome: AttemptOutcome::PrunedVnj(bad),
            });
            continue;
        }
        if solver_candidates >= s.cfg.max_solver_candidates {
            log.push(SearchAttempt {
                w,
                outcome: AttemptOutcome::Skipped("candidate budget exhausted".into()),
            });
            conclusive = false;
            continue;
        }
        solver_candidates += 1;
        match s.stable_at(&w, &theta)? {
            Ok(cert) => {
                log.push(SearchAttempt {
                    w: w.clone(),
                    outcome: AttemptOutcome::Stable(cert.provenance),
                });
                return Ok(if conclusive {
                    VTildeOutcome::Found(VTildeResult {
                        v_tilde: w,
                        witness: cert,
                        search_log: log,
                    })
                } else {
                    VTildeOutcome::Unknown {
                        best: Some((w, cert)),
                        search_log: log,
                    }
                });
            }
            Err(outcome) => {
                conclusive &= outcome.is_conclusive_negative();
                log.push(SearchAttempt { w, outcome });
            }
        }
    }
    Ok(VTildeOutcome::Unknown {
        best: None,
        search_log: log,
    })
}

/// Compares the dimensions of the summand through `∞` with `ṽ`. `None` when
/// that summand, the submodule generated at `∞`, is not itself stable.
pub fn lemma_vwtildev_check(cert: &Certificate, v_tilde: &DimVector) -> Result<Option<bool>> {
    let summand = summand_at_inf(cert)?;
    Ok(summand.map(|d| d.le(v_tilde)))
}

fn summand_at_inf(cert: &Certificate) -> Result<Option<DimVector>> {
    let closure = cert.rep.framing_closure();
    let sub = cert.rep.subrepresentation(&closure)?;
    if sub.verdict(&cert.theta)? == Verdict::Stable {
        Ok(Some(sub.dim_vector()))
    } else {
        Ok(None)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VnjCheck {
    pub source: String,
    pub v: DimVector,
    pub violations: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaCheck {
    pub source: String,
    pub summand: Option<DimVector>,
    pub holds: Option<bool>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RestrictionCheck {
    pub cap: usize,
    /// The cap is long enough that a negative verdict would also be sound.
    pub conclusive: bool,
    pub module: CorneredModule<Q>,
    pub dims_ok: bool,
    pub eta_verdict: Verdict,
    /// Splitting into `T` and the images of `R_I` and reassembling gives
    /// back the same module; `None` when not generated at `∞`.
    pub round_trip_ok: Option<bool>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Nonemptiness {
    Nonempty,
    Unknown,
}

impl Nonemptiness {
    pub fn as_str(self) -> &'static str {
        match self {
            Nonemptiness::Nonempty => "nonempty",
            Nonemptiness::Unknown => "unknown",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PipelineReport {
    pub group: GroupFamily,
    pub n_i: BTreeMap<usize, u32>,
    pub seed: u64,
    pub theta: Option<Stability>,
    pub eta: Option<CorneredStability>,
    pub vprime: Option<VPrime>,
    pub semistable: Option<Certificate>,
    /// Partition modules of dimension exactly `v′` that are semistable.
    pub oracle_fixed_points: Option<usize>,
    pub v_tilde: Option<VTildeOutcome>,
    /// Verdict at `v′` of the `ṽ` witness padded by vertex simples.
    pub padded_verdict: Option<Verdict>,
    pub lemma: Vec<LemmaCheck>,
    pub vnj: Vec<VnjCheck>,
    pub restriction: Option<RestrictionCheck>,
    pub quiver_variety: Nonemptiness,
    pub moduli: Nonemptiness,
    pub numeric_residuals_sq: Vec<f64>,
    pub errors: Vec<Error>,
    pub invariant_violations: Vec<String>,
}

impl PipelineReport {
    pub fn invariants_ok(&self) -> bool {
        self.invariant_violations.is_empty() && !self.errors.iter().any(Error::is_invariant)
    }

    /// Both sides of the equivalence certified nonempty.
    pub fn equivalence_confirmed(&self) -> bool {
        self.quiver_variety == Nonemptiness::Nonempty && self.moduli == Nonemptiness::Nonempty
    }
}

/// Runs every stage for `(group, I, n_I)`. Failures of a stage are recorded
/// in the report and later stages that need its output are skipped.
pub fn run_pipeline<E: RestartExecutor>(
    group: GroupFamily,
    n_i: &BTreeMap<usize, u32>,
    cfg: &PipelineConfig,
    exec: &E,
) -> PipelineReport {
    let mut report = PipelineReport {
        group,
        n_i: n_i.clone(),
        seed: cfg.solver.seed,
        theta: None,
        eta: None,
        vprime: None,
        semistable: None,
        oracle_fixed_points: None,
        v_tilde: None,
        padded_verdict: None,
        lemma: Vec::new(),
        vnj: Vec::new(),
        restriction: None,
        quiver_variety: Nonemptiness::Unknown,
        moduli: Nonemptiness::Unknown,
        numeric_residuals_sq: Vec::new(),
        errors: Vec::new(),
        invariant_violations: Vec::new(),
    };
    let mckay = match build_mckay(group) {
        Ok(m) => m,
        Err(e) => {
            report.errors.push(e);
            return report;
        }
    };
    if let Err(e) = stages(&mckay, &mut report, cfg, exec) {
        report.errors.push(e);
    }
    report
}

fn stages<E: RestartExecutor>(
    mckay: &McKayData,
    report: &mut PipelineReport,
    cfg: &PipelineConfig,
    exec: &E,
) -> Result<()> {
    let n_i = report.n_i.clone();
    let set: BTreeSet<usize> = n_i.keys().copied().collect();
    if set.is_empty() {
        return Err(Error::EmptyIndexSet);
    }
    let mut start = DimVector::framed(1, vec![0; mckay.num_vertices()]);
    for (&i, &n) in &n_i {
        if i >= mckay.num_vertices() {
            return Err(Error::PreconditionViolated(format!(
                "vertex {i} out of range"
            )));
        }
        start.nodes[i] = n;
    }
    let vp = construct_vprime(mckay, &n_i, &start)?;
    let theta = theta_i(mckay, &set, &vp.v)?;
    report.eta = Some(eta_i(&n_i)?);
    report.theta = Some(theta.clone());
    report.vprime = Some(vp.clone());
    let v = vp.v.clone();

    let mut s = Searcher::new(mckay, cfg, exec);
    if s.cyclic_order().is_some() && v.node_total() <= cfg.oracle_max_size {
        report.oracle_fixed_points = Some(s.oracle_exact(&v, &theta, Verdict::Semistable)?.len());
    }
    let semistable = s.semistable_at(&v, &theta, &set)?;
    let outcome = find_v_tilde_with(&mut s, &set, &v, semistable.as_ref())?;
    report.numeric_residuals_sq = core::mem::take(&mut s.residuals);

    // a stable witness below v′, padded up, also certifies v′
    let mut semistable = semistable;
    if let Some((w, witness)) = outcome.best() {
        let pad: Vec<u32> = v.nodes.iter().zip(&w.nodes).map(|(a, b)| a - b).collect();
        let padded = witness.rep.pad_with_simples(&pad)?;
        let verdict = padded.verdict(&theta)?;
        report.padded_verdict = Some(verdict);
        if !verdict.is_semistable() {
            report
                .invariant_violations
                .push(format!("padding the witness at {w} to {v} is unstable"));
        } else if semistable.is_none() {
            semistable = Some(Certificate::issue(
                padded,
                &theta,
                Provenance::Padded,
                None,
            )?);
        }
    }
    if let Some(c) = &semistable {
        c.verify()?;
        report.quiver_variety = Nonemptiness::Nonempty;
    }

    let mut stable: Vec<(String, &Certificate)> = Vec::new();
    if let Some((_, c)) = outcome.best() {
        stable.push(("v_tilde witness".into(), c));
    }
    if let Some(c) = semistable.as_ref().filter(|c| c.verdict == Verdict::Stable) {
        stable.push(("v' certificate".into(), c));
    }
    for (source, c) in &stable {
        c.verify()?;
        let d = c.dim_vector();
        let violations = vnj_violations(mckay, &set, &d);
        if !violations.is_empty() {
            report.invariant_violations.push(format!(
                "{source} at {d} violates the inequality at {violations:?}"
            ));
        }
        report.vnj.push(VnjCheck {
            source: source.clone(),
            v: d,
            violations,
        });
    }

    if let (Some(c), Some((vt, _))) = (&semistable, outcome.best()) {
        let summand = summand_at_inf(c)?;
        let holds = summand.as_ref().map(|d| d.le(vt));
        if holds == Some(false) && outcome.is_conclusive() {
            report
                .invariant_violations
                .push(format!("summand through infinity exceeds {vt}"));
        }
        report.lemma.push(LemmaCheck {
            source: "v' certificate".into(),
            summand,
            holds,
        });
    }

    if let Some(c) = &semistable {
        let check = restriction_check(
            &s.quiver,
            mckay,
            c,
            &set,
            &n_i,
            report.eta.as_ref().expect("set"),
            cfg,
        )?;
        if !check.dims_ok {
            report
                .invariant_violations
                .push("restriction changed the dimensions on I".into());
        }
        if check.round_trip_ok == Some(false) {
            report
                .invariant_violations
                .push("decompose and assemble did not round trip".into());
        }
        if check.eta_verdict == Verdict::Stable && check.dims_ok {
            report.moduli = Nonemptiness::Nonempty;
        } else if check.conclusive {
            report
                .invariant_violations
                .push("restriction of a semistable certificate is eta-unstable".into());
        }
        report.restriction = Some(check);
    }
    report.semistable = semistable;
    report.v_tilde = Some(outcome);
    Ok(())
}

fn restriction_check(
    quiver: &FramedQuiver,
    mckay: &McKayData,
    cert: &Certificate,
    set: &BTreeSet<usize>,
    n_i: &BTreeMap<usize, u32>,
    eta: &CorneredStability,
    cfg: &PipelineConfig,
) -> Result<RestrictionCheck> {
    // a generating path enters the complement of I, wanders, and leaves; a
    // walk inside the complement never needs more steps than its dimension
    let outside: usize = (0..mckay.num_vertices())
        .filter(|k| !set.contains(k))
        .map(|k| cert.rep.dim(Vertex::Node(k)))
        .sum();
    let needed = outside + 2;
    let cap = cfg.restrict_cap.unwrap_or(needed.min(DEFAULT_CAP_LIMIT));
    let module = cert.rep.restrict_ji(set, cap);
    module.verify(quiver)?;
    let dims_ok = module.inf == 1 && &module.dims == n_i;
    let eta_verdict = module.eta_verdict(quiver, eta)?;
    let round_trip_ok = if eta_verdict == Verdict::Stable {
        let data = module.decompose(quiver)?;
        let back = assemble_ai_module(quiver, &data)?;
        let mut a = module.generators.clone();
        a.sort_by(|x, y| x.0.cmp(&y.0));
        Some(back.generators == a)
    } else {
        None
    };
    Ok(RestrictionCheck {
        cap,
        conclusive: cap >= needed,
        module,
        dims_ok,
        eta_verdict,
        round_trip_ok,
    })
}

impl core::fmt::Display for AttemptOutcome {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            AttemptOutcome::PrunedVnj(ks) => write!(f, "pruned at {ks:?}"),
            AttemptOutcome::Stable(p) => write!(f, "stable ({})", p.as_str()),
            AttemptOutcome::NotFound => f.write_str("not found"),
            AttemptOutcome::RationalizationFailed => f.write_str("rationalization failed"),
            AttemptOutcome::Skipped(why) => write!(f, "skipped: {why}"),
        }
    }
}

impl AttemptOutcome {
    pub fn kind(&self) -> &'static str {
        match self {
            AttemptOutcome::PrunedVnj(_) => "pruned",
            AttemptOutcome::Stable(_) => "stable",
            AttemptOutcome::NotFound => "not_found",
            AttemptOutcome::RationalizationFailed => "rationalization_failed",
            AttemptOutcome::Skipped(_) => "skipped",
        }
    }
}
