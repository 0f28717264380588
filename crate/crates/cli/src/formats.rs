//! JSON shapes for everything the command line reads or writes.
//!
//! Rationals are `[num, den]` pairs of integers, or of decimal strings once
//! either side leaves the `i64` range.

use std::collections::BTreeMap;

use kq_core::algebra::{CorneredModule, Path};
use kq_core::mckay::McKayData;
use kq_core::pipeline::{
    AttemptOutcome, Certificate, PipelineReport, RestrictionCheck, SearchAttempt, VTildeOutcome,
};
use kq_core::quiver::frame;
use kq_core::stability::{CorneredStability, VPrime};
use kq_core::{DimVector, GroupFamily, Matrix, Representation, Stability, Vertex, Q};
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("unsupported schema_version {0}")]
    Schema(u32),
    #[error("bad rational {0:?}")]
    Rational(RationalJson),
    #[error("bad vertex `{0}`")]
    Vertex(String),
    #[error("{0}")]
    Shape(String),
    #[error(transparent)]
    Core(#[from] kq_core::Error),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RationalJson {
    Small([i64; 2]),
    Big([String; 2]),
}

impl From<&Q> for RationalJson {
    fn from(x: &Q) -> Self {
        match (x.numer().to_i64(), x.denom().to_i64()) {
            (Some(n), Some(d)) => RationalJson::Small([n, d]),
            _ => RationalJson::Big([x.numer().to_string(), x.denom().to_string()]),
        }
    }
}

impl RationalJson {
    pub fn to_q(&self) -> Result<Q, FormatError> {
        let (n, d) = match self {
            RationalJson::Small([n, d]) => (BigInt::from(*n), BigInt::from(*d)),
            RationalJson::Big([n, d]) => {
                let p = |s: &str| {
                    s.parse::<BigInt>()
                        .map_err(|_| FormatError::Rational(self.clone()))
                };
                (p(n)?, p(d)?)
            }
        };
        if d.is_zero() {
            return Err(FormatError::Rational(self.clone()));
        }
        Ok(Q::new(n, d))
    }
}

fn qs(xs: &[Q]) -> Vec<RationalJson> {
    xs.iter().map(RationalJson::from).collect()
}

fn parse_qs(xs: &[RationalJson]) -> Result<Vec<Q>, FormatError> {
    xs.iter().map(RationalJson::to_q).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimVectorJson {
    pub inf: Option<u32>,
    pub weights: Vec<u32>,
}

impl From<&DimVector> for DimVectorJson {
    fn from(d: &DimVector) -> Self {
        DimVectorJson {
            inf: d.inf,
            weights: d.nodes.clone(),
        }
    }
}

impl From<&DimVectorJson> for DimVector {
    fn from(d: &DimVectorJson) -> Self {
        DimVector {
            inf: d.inf,
            nodes: d.weights.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilityJson {
    pub inf: RationalJson,
    pub weights: Vec<RationalJson>,
}

impl From<&Stability> for StabilityJson {
    fn from(t: &Stability) -> Self {
        StabilityJson {
            inf: (&t.inf).into(),
            weights: qs(&t.nodes),
        }
    }
}

impl StabilityJson {
    pub fn to_stability(&self) -> Result<Stability, FormatError> {
        Ok(Stability {
            inf: self.inf.to_q()?,
            nodes: parse_qs(&self.weights)?,
        })
    }
}

/// Weights of `η_I`, keyed by vertex of `I`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorneredStabilityJson {
    pub inf: RationalJson,
    pub weights: BTreeMap<usize, RationalJson>,
}

impl From<&CorneredStability> for CorneredStabilityJson {
    fn from(t: &CorneredStability) -> Self {
        CorneredStabilityJson {
            inf: (&t.inf).into(),
            weights: t.weights.iter().map(|(&i, w)| (i, w.into())).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    /// Row-major.
    pub entries: Vec<RationalJson>,
}

impl From<&Matrix<Q>> for MatrixJson {
    fn from(m: &Matrix<Q>) -> Self {
        MatrixJson {
            rows: m.rows(),
            cols: m.cols(),
            entries: qs(m.entries()),
        }
    }
}

impl MatrixJson {
    pub fn to_matrix(&self) -> Result<Matrix<Q>, FormatError> {
        if self.entries.len() != self.rows * self.cols {
            return Err(FormatError::Shape(format!(
                "{} entries for a {}x{} matrix",
                self.entries.len(),
                self.rows,
                self.cols
            )));
        }
        let vals = parse_qs(&self.entries)?;
        let mut m = Matrix::zeros(self.rows, self.cols);
        for (k, x) in vals.into_iter().enumerate() {
            m.set(k / self.cols.max(1), k % self.cols.max(1), x);
        }
        Ok(m)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrowJson {
    pub id: usize,
    pub tail: String,
    pub head: String,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<RationalJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepresentationJson {
    pub schema_version: u32,
    pub group: String,
    pub dims: DimVectorJson,
    pub arrows: Vec<ArrowJson>,
}

impl RepresentationJson {
    pub fn new(group: GroupFamily, rep: &Representation<Q>) -> Self {
        let q = rep.quiver();
        let arrows = q
            .arrows()
            .iter()
            .map(|a| {
                let m = MatrixJson::from(rep.map(a.id));
                ArrowJson {
                    id: a.id,
                    tail: a.tail.to_string(),
                    head: a.head.to_string(),
                    rows: m.rows,
                    cols: m.cols,
                    entries: m.entries,
                }
            })
            .collect();
        RepresentationJson {
            schema_version: SCHEMA_VERSION,
            group: group.to_string(),
            dims: (&rep.dim_vector()).into(),
            arrows,
        }
    }

    /// Rebuilds the representation on the framed McKay quiver of `group`;
    /// arrows must come in id order with matching endpoints.
    pub fn to_rep(&self) -> Result<(GroupFamily, Representation<Q>), FormatError> {
        check_schema(self.schema_version)?;
        let group: GroupFamily = self.group.parse()?;
        let mckay = kq_core::mckay::build_mckay(group)?;
        let quiver = frame(&mckay);
        if self.arrows.len() != quiver.arrows().len() {
            return Err(FormatError::Shape(format!(
                "{} arrows given, quiver has {}",
                self.arrows.len(),
                quiver.arrows().len()
            )));
        }
        let mut maps = Vec::with_capacity(self.arrows.len());
        for (k, a) in self.arrows.iter().enumerate() {
            let arrow = quiver.arrow(k);
            if a.id != k
                || parse_vertex(&a.tail)? != arrow.tail
                || parse_vertex(&a.head)? != arrow.head
            {
                return Err(FormatError::Shape(format!(
                    "arrow {k} should be {} -> {}",
                    arrow.tail, arrow.head
                )));
            }
            let m = MatrixJson {
                rows: a.rows,
                cols: a.cols,
                entries: a.entries.clone(),
            };
            maps.push(m.to_matrix()?);
        }
        let dim = DimVector::from(&self.dims);
        if dim.inf.is_none() {
            return Err(FormatError::Shape(
                "representation needs a dimension at inf".into(),
            ));
        }
        Ok((group, Representation::new(&quiver, &dim, maps)?))
    }
}

pub fn parse_vertex(s: &str) -> Result<Vertex, FormatError> {
    match s {
        "inf" => Ok(Vertex::Inf),
        _ => s
            .parse()
            .map(Vertex::Node)
            .map_err(|_| FormatError::Vertex(s.to_string())),
    }
}

fn check_schema(v: u32) -> Result<(), FormatError> {
    if v == SCHEMA_VERSION {
        Ok(())
    } else {
        Err(FormatError::Schema(v))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct McKayJson {
    pub schema_version: u32,
    pub group: String,
    pub family: String,
    pub order: u64,
    pub dims: Vec<u32>,
    pub adjacency: Vec<Vec<u32>>,
    pub delta: Vec<u32>,
}

impl From<&McKayData> for McKayJson {
    fn from(m: &McKayData) -> Self {
        let family = match m.group {
            GroupFamily::Cyclic(k) => format!("cyclic({k})"),
            GroupFamily::BinaryDihedral(k) => format!("binary_dihedral({k})"),
            GroupFamily::BinaryTetrahedral => "binary_tetrahedral".into(),
            GroupFamily::BinaryOctahedral => "binary_octahedral".into(),
            GroupFamily::BinaryIcosahedral => "binary_icosahedral".into(),
        };
        McKayJson {
            schema_version: SCHEMA_VERSION,
            group: m.group.to_string(),
            family,
            order: m.group.order(),
            dims: m.irrep_dims.clone(),
            adjacency: m.adjacency.clone(),
            delta: m.delta().nodes,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VPrimeJson {
    pub v: DimVectorJson,
    #[serde(rename = "N")]
    pub n: u32,
    pub k_prime: Vec<usize>,
    pub path: Vec<usize>,
}

impl From<&VPrime> for VPrimeJson {
    fn from(v: &VPrime) -> Self {
        VPrimeJson {
            v: (&v.v).into(),
            n: v.n,
            k_prime: v.k_prime.clone(),
            path: v.path.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub rep: RepresentationJson,
    pub theta: StabilityJson,
    pub verdict: String,
    pub provenance: String,
    /// `‖μ‖` of the numeric point it was rounded from.
    pub numeric_residual: Option<f64>,
}

impl CertificateJson {
    pub fn new(group: GroupFamily, c: &Certificate) -> Self {
        CertificateJson {
            rep: RepresentationJson::new(group, &c.rep),
            theta: (&c.theta).into(),
            verdict: c.verdict.as_str().into(),
            provenance: c.provenance.as_str().into(),
            numeric_residual: c.numeric_residual_sq.map(f64::sqrt),
        }
    }

    /// Re-checks relations and verdict from scratch.
    pub fn verify(&self) -> Result<bool, FormatError> {
        let (_, rep) = self.rep.to_rep()?;
        let theta = self.theta.to_stability()?;
        Ok(rep.is_a_module() && rep.verdict(&theta)?.as_str() == self.verdict)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttemptJson {
    pub w: Vec<u32>,
    pub outcome: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl From<&SearchAttempt> for AttemptJson {
    fn from(a: &SearchAttempt) -> Self {
        let detail = match &a.outcome {
            AttemptOutcome::PrunedVnj(at) => Some(format!("{at:?}")),
            AttemptOutcome::Stable(p) => Some(p.as_str().into()),
            AttemptOutcome::Skipped(why) => Some(why.clone()),
            AttemptOutcome::NotFound | AttemptOutcome::RationalizationFailed => None,
        };
        AttemptJson {
            w: a.w.nodes.clone(),
            outcome: a.outcome.kind().into(),
            detail,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VTildeJson {
    /// `found` when maximality is certified, `unknown` otherwise.
    pub status: String,
    pub v_tilde: Option<DimVectorJson>,
    pub witness: Option<CertificateJson>,
    pub search_log: Vec<AttemptJson>,
}

impl VTildeJson {
    fn new(group: GroupFamily, o: &VTildeOutcome) -> Self {
        let best = o.best();
        VTildeJson {
            status: if o.is_conclusive() {
                "found"
            } else {
                "unknown"
            }
            .into(),
            v_tilde: best.map(|(v, _)| v.into()),
            witness: best.map(|(_, c)| CertificateJson::new(group, c)),
            search_log: o.search_log().iter().map(Into::into).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathJson {
    pub start: String,
    pub arrows: Vec<usize>,
}

impl From<&Path> for PathJson {
    fn from(p: &Path) -> Self {
        PathJson {
            start: p.start.to_string(),
            arrows: p.arrows.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorJson {
    pub path: PathJson,
    #[serde(flatten)]
    pub matrix: MatrixJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorneredModuleJson {
    pub inf: u32,
    pub dims: BTreeMap<usize, u32>,
    pub generators: Vec<GeneratorJson>,
}

impl From<&CorneredModule<Q>> for CorneredModuleJson {
    fn from(m: &CorneredModule<Q>) -> Self {
        CorneredModuleJson {
            inf: m.inf,
            dims: m.dims.clone(),
            generators: m
                .generators
                .iter()
                .map(|(p, a)| GeneratorJson {
                    path: p.into(),
                    matrix: a.into(),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RestrictionJson {
    pub cap: usize,
    pub conclusive: bool,
    pub dims_ok: bool,
    pub eta_verdict: String,
    pub round_trip_ok: Option<bool>,
    pub module: CorneredModuleJson,
}

impl From<&RestrictionCheck> for RestrictionJson {
    fn from(r: &RestrictionCheck) -> Self {
        RestrictionJson {
            cap: r.cap,
            conclusive: r.conclusive,
            dims_ok: r.dims_ok,
            eta_verdict: r.eta_verdict.as_str().into(),
            round_trip_ok: r.round_trip_ok,
            module: (&r.module).into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VnjJson {
    pub source: String,
    pub v: DimVectorJson,
    pub violations: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaJson {
    pub source: String,
    pub summand: Option<DimVectorJson>,
    pub holds: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportJson {
    pub schema_version: u32,
    pub group: String,
    #[serde(rename = "n_I")]
    pub n_i: BTreeMap<usize, u32>,
    pub seed: u64,
    pub theta: Option<StabilityJson>,
    pub eta: Option<CorneredStabilityJson>,
    pub vprime: Option<VPrimeJson>,
    pub semistable: Option<CertificateJson>,
    pub oracle_fixed_points: Option<usize>,
    pub v_tilde: Option<VTildeJson>,
    pub padded_verdict: Option<String>,
    pub lemma: Vec<LemmaJson>,
    pub vnj: Vec<VnjJson>,
    pub restriction: Option<RestrictionJson>,
    pub quiver_variety: String,
    pub moduli: String,
    pub equivalence_confirmed: bool,
    /// `‖μ‖` of every numeric point the solver accepted.
    pub numeric_residuals: Vec<f64>,
    pub errors: Vec<String>,
    pub invariant_violations: Vec<String>,
    pub invariants_ok: bool,
}

impl From<&PipelineReport> for ReportJson {
    fn from(r: &PipelineReport) -> Self {
        let g = r.group;
        ReportJson {
            schema_version: SCHEMA_VERSION,
            group: g.to_string(),
            n_i: r.n_i.clone(),
            seed: r.seed,
            theta: r.theta.as_ref().map(Into::into),
            eta: r.eta.as_ref().map(Into::into),
            vprime: r.vprime.as_ref().map(Into::into),
            semistable: r.semistable.as_ref().map(|c| CertificateJson::new(g, c)),
            oracle_fixed_points: r.oracle_fixed_points,
            v_tilde: r.v_tilde.as_ref().map(|o| VTildeJson::new(g, o)),
            padded_verdict: r.padded_verdict.map(|v| v.as_str().into()),
            lemma: r
                .lemma
                .iter()
                .map(|l| LemmaJson {
                    source: l.source.clone(),
                    summand: l.summand.as_ref().map(Into::into),
                    holds: l.holds,
                })
                .collect(),
            vnj: r
                .vnj
                .iter()
                .map(|c| VnjJson {
                    source: c.source.clone(),
                    v: (&c.v).into(),
                    violations: c.violations.clone(),
                })
                .collect(),
            restriction: r.restriction.as_ref().map(Into::into),
            quiver_variety: r.quiver_variety.as_str().into(),
            moduli: r.moduli.as_str().into(),
            equivalence_confirmed: r.equivalence_confirmed(),
            numeric_residuals: r.numeric_residuals_sq.iter().map(|x| x.sqrt()).collect(),
            errors: r.errors.iter().map(ToString::to_string).collect(),
            invariant_violations: r.invariant_violations.clone(),
            invariants_ok: r.invariants_ok(),
        }
    }
}

impl ReportJson {
    pub fn parse(s: &str) -> Result<Self, FormatError> {
        let r: ReportJson =
            serde_json::from_str(s).map_err(|e| FormatError::Shape(e.to_string()))?;
        check_schema(r.schema_version)?;
        Ok(r)
    }
}
