//! Path algebras with preprojective relations truncated at a degree cap, the
//! cornered algebras `B_I = e_I B e_I` and `A_I = ē_I A ē_I`, and modules over
//! `A_I` assembled from cyclic `B_I`-module data.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::{q_int, Field, Q};
use crate::matrix::{Matrix, Subspace};
use crate::quiver::{ArrowSet, FramedQuiver, Vertex};
use crate::rep::Verdict;
use crate::stability::CorneredStability;

/// Hard limit on the number of paths enumerated for a truncated algebra.
pub const MAX_PATHS: usize = 1_000_000;

/// A path: its start vertex and arrow ids in traversal order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Path {
    pub arrows: Vec<usize>,
    pub start: Vertex,
}

impl Path {
    pub fn trivial(v: Vertex) -> Self {
        Path {
            arrows: Vec::new(),
            start: v,
        }
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn end(&self, q: &FramedQuiver) -> Vertex {
        self.arrows.last().map_or(self.start, |&a| q.arrow(a).head)
    }

    /// `self · other`: traverse `other`, then `self`.
    pub fn compose(&self, other: &Path, q: &FramedQuiver) -> Option<Path> {
        if other.end(q) != self.start {
            return None;
        }
        let mut arrows = other.arrows.clone();
        arrows.extend_from_slice(&self.arrows);
        Some(Path {
            arrows,
            start: other.start,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlgebraKind {
    /// Framed preprojective algebra.
    Pi,
    /// `Π/(b*)`.
    A,
    /// Preprojective algebra of the McKay quiver.
    B,
    /// `e_I B e_I`.
    BI,
    /// `ē_I A ē_I` with `ē_I = e_∞ + e_I`.
    AI,
}

impl AlgebraKind {
    fn arrows(self) -> ArrowSet {
        match self {
            AlgebraKind::Pi => ArrowSet::Framed,
            AlgebraKind::A | AlgebraKind::AI => ArrowSet::QStar,
            AlgebraKind::B | AlgebraKind::BI => ArrowSet::Gamma,
        }
    }
}

/// Linear combination of paths.
pub type Element = BTreeMap<Path, Q>;

#[derive(Clone, Debug)]
struct Piece {
    basis: Vec<Path>,
    /// Each leading path of the relation ideal, written in the basis.
    rewrite: BTreeMap<Path, Vec<(Path, Q)>>,
}

/// Graded pieces `e_h X_d e_t` for `d ≤ cap`, modulo the relation ideal.
#[derive(Clone, Debug)]
pub struct TruncatedAlgebra {
    quiver: FramedQuiver,
    kind: AlgebraKind,
    set: BTreeSet<usize>,
    cap: usize,
    pieces: BTreeMap<(Vertex, Vertex, usize), Piece>,
}

impl TruncatedAlgebra {
    pub fn new(
        quiver: &FramedQuiver,
        kind: AlgebraKind,
        set: &BTreeSet<usize>,
        cap: usize,
    ) -> Result<Self> {
        let arrows = kind.arrows();
        let uses_inf = matches!(kind, AlgebraKind::Pi | AlgebraKind::A | AlgebraKind::AI);
        let vertices: Vec<Vertex> = quiver
            .vertices()
            .into_iter()
            .filter(|v| uses_inf || *v != Vertex::Inf)
            .collect();
        let corner: Vec<Vertex> = match kind {
            AlgebraKind::BI => set.iter().map(|&i| Vertex::Node(i)).collect(),
            AlgebraKind::AI => core::iter::once(Vertex::Inf)
                .chain(set.iter().map(|&i| Vertex::Node(i)))
                .collect(),
            _ => vertices.clone(),
        };
        if matches!(kind, AlgebraKind::BI | AlgebraKind::AI) && set.is_empty() {
            return Err(Error::EmptyIndexSet);
        }
        let relation_at: Vec<Vertex> = match kind {
            AlgebraKind::Pi => vertices.clone(),
            _ => vertices
                .iter()
                .copied()
                .filter(|v| *v != Vertex::Inf)
                .collect(),
        };

        // paths[v][d]: all paths of length d starting at v
        let mut paths: BTreeMap<Vertex, Vec<Vec<Path>>> = BTreeMap::new();
        let mut count = 0usize;
        for &v in &vertices {
            let mut layers = vec![vec![Path::trivial(v)]];
            for d in 1..=cap {
                let mut next = Vec::new();
                for p in &layers[d - 1] {
                    let end = p.end(quiver);
                    for a in quiver.arrows_from(end) {
                        if quiver.allows(arrows, a.id) {
                            let mut arrows = p.arrows.clone();
                            arrows.push(a.id);
                            next.push(Path { arrows, start: v });
                        }
                    }
                }
                count += next.len();
                if count > MAX_PATHS {
                    return Err(Error::CapTooLargeForMemory { limit: MAX_PATHS });
                }
                layers.push(next);
            }
            paths.insert(v, layers);
        }

        let mut pieces = BTreeMap::new();
        for &t in &corner {
            for &h in &corner {
                for d in 0..=cap {
                    let all: Vec<Path> = paths[&t][d]
                        .iter()
                        .filter(|p| p.end(quiver) == h)
                        .cloned()
                        .collect();
                    let generators =
                        ideal_generators(quiver, arrows, &relation_at, &paths, t, h, d);
                    pieces.insert((t, h, d), reduce_piece(all, &generators));
                }
            }
        }
        Ok(TruncatedAlgebra {
            quiver: quiver.clone(),
            kind,
            set: set.clone(),
            cap,
            pieces,
        })
    }

    pub fn kind(&self) -> AlgebraKind {
        self.kind
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn quiver(&self) -> &FramedQuiver {
        &self.quiver
    }

    pub fn index_set(&self) -> &BTreeSet<usize> {
        &self.set
    }

    /// `dim e_h X_d e_t`, zero for endpoints outside the algebra.
    pub fn piece_dim(&self, t: Vertex, h: Vertex, d: usize) -> usize {
        self.pieces.get(&(t, h, d)).map_or(0, |p| p.basis.len())
    }

    pub fn piece_basis(&self, t: Vertex, h: Vertex, d: usize) -> &[Path] {
        self.pieces.get(&(t, h, d)).map_or(&[], |p| &p.basis)
    }

    /// Total dimension in each degree `0..=cap`.
    pub fn degree_dims(&self) -> Vec<usize> {
        let mut out = vec![0; self.cap + 1];
        for ((_, _, d), p) in &self.pieces {
            out[*d] += p.basis.len();
        }
        out
    }

    /// All basis paths, grouped by degree, endpoints and then path order.
    pub fn basis(&self) -> Vec<(Vertex, Vertex, usize, Path)> {
        let mut out = Vec::new();
        for ((t, h, d), p) in &self.pieces {
            for path in &p.basis {
                out.push((*t, *h, *d, path.clone()));
            }
        }
        out.sort_by(|a, b| (a.2, a.0, a.1, &a.3).cmp(&(b.2, b.0, b.1, &b.3)));
        out
    }

    pub fn idempotent(&self, v: Vertex) -> Element {
        self.reduce_path(&Path::trivial(v))
    }

    /// Normal form of a path; empty if it lies outside the window.
    pub fn reduce_path(&self, p: &Path) -> Element {
        let key = (p.start, p.end(&self.quiver), p.len());
        let mut out = Element::new();
        let Some(piece) = self.pieces.get(&key) else {
            return out;
        };
        if let Some(rw) = piece.rewrite.get(p) {
            for (b, c) in rw {
                out.insert(b.clone(), c.clone());
            }
        } else if piece.basis.binary_search(p).is_ok() {
            out.insert(p.clone(), Q::one());
        }
        out
    }

    pub fn reduce(&self, x: &Element) -> Element {
        let mut out = Element::new();
        for (p, c) in x {
            for (b, d) in self.reduce_path(p) {
                add_term(&mut out, b, c.mul(&d));
            }
        }
        out
    }

    /// `x · y`, reading paths right to left, dropping anything above the cap.
    pub fn multiply(&self, x: &Element, y: &Element) -> Element {
        let mut out = Element::new();
        for (p, c) in x {
            for (q, d) in y {
                if p.len() + q.len() > self.cap {
                    continue;
                }
                if let Some(pq) = p.compose(q, &self.quiver) {
                    for (b, e) in self.reduce_path(&pq) {
                        add_term(&mut out, b, c.mul(d).mul(&e));
                    }
                }
            }
        }
        out
    }
}

pub fn add_term(x: &mut Element, p: Path, c: Q) {
    if c.is_zero() {
        return;
    }
    let sum = x.get(&p).map_or(c.clone(), |old| old.add(&c));
    if sum.is_zero() {
        x.remove(&p);
    } else {
        x.insert(p, sum);
    }
}

pub fn add_elements(x: &Element, y: &Element) -> Element {
    let mut out = x.clone();
    for (p, c) in y {
        add_term(&mut out, p.clone(), c.clone());
    }
    out
}

pub fn scale_element(x: &Element, s: &Q) -> Element {
    let mut out = Element::new();
    for (p, c) in x {
        add_term(&mut out, p.clone(), c.mul(s));
    }
    out
}

/// Spanning set of the degree-`d` part of the relation ideal from `t` to `h`:
/// `q · ρ_v · p` with `ρ_v = Σ_{h(a)=v} ε(a) a a*`.
fn ideal_generators(
    quiver: &FramedQuiver,
    arrows: ArrowSet,
    relation_at: &[Vertex],
    paths: &BTreeMap<Vertex, Vec<Vec<Path>>>,
    t: Vertex,
    h: Vertex,
    d: usize,
) -> Vec<Element> {
    let mut out = Vec::new();
    if d < 2 {
        return out;
    }
    for &v in relation_at {
        let terms: Vec<(usize, usize, i8)> = quiver
            .arrows_to(v)
            .filter(|a| quiver.allows(arrows, a.id) && quiver.allows(arrows, a.star))
            .map(|a| (a.star, a.id, a.eps))
            .collect();
        if terms.is_empty() {
            continue;
        }
        for k in 0..=d - 2 {
            for p in paths[&t][k].iter().filter(|p| p.end(quiver) == v) {
                let Some(from_v) = paths.get(&v) else {
                    continue;
                };
                for q in from_v[d - 2 - k].iter().filter(|q| q.end(quiver) == h) {
                    let mut el = Element::new();
                    for &(first, second, eps) in &terms {
                        let mut arrows = p.arrows.clone();
                        arrows.push(first);
                        arrows.push(second);
                        arrows.extend_from_slice(&q.arrows);
                        add_term(&mut el, Path { arrows, start: t }, q_int(eps as i64));
                    }
                    if !el.is_empty() {
                        out.push(el);
                    }
                }
            }
        }
    }
    out
}

fn reduce_piece(mut all: Vec<Path>, generators: &[Element]) -> Piece {
    all.sort();
    if generators.is_empty() {
        return Piece {
            basis: all,
            rewrite: BTreeMap::new(),
        };
    }
    let index: BTreeMap<&Path, usize> = all.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let rows: Vec<Vec<Q>> = generators
        .iter()
        .map(|g| {
            let mut row = vec![Q::zero(); all.len()];
            for (p, c) in g {
                row[index[p]] = c.clone();
            }
            row
        })
        .collect();
    let m = Matrix::from_rows(rows.len(), all.len(), rows);
    let (r, pivots) = m.rref();
    let pivot_set: BTreeSet<usize> = pivots.iter().copied().collect();
    let basis: Vec<Path> = (0..all.len())
        .filter(|c| !pivot_set.contains(c))
        .map(|c| all[c].clone())
        .collect();
    let mut rewrite = BTreeMap::new();
    for (row, &pc) in pivots.iter().enumerate() {
        // pivot + Σ r[row][c] path_c = 0 in the quotient
        let combo: Vec<(Path, Q)> = (0..all.len())
            .filter(|c| !pivot_set.contains(c) && !r.get(row, *c).is_zero())
            .map(|c| (all[c].clone(), r.get(row, c).neg()))
            .collect();
        rewrite.insert(all[pc].clone(), combo);
    }
    Piece { basis, rewrite }
}

/// Per-degree dimensions of `A_I`, `B_I` and `R_I = e_I B e_0`, for the check
/// `dim A_I(d) = dim B_I(d) + dim R_I(d−1) + [d = 0]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionTable {
    pub a_i: Vec<usize>,
    pub b_i: Vec<usize>,
    pub r_i: Vec<usize>,
}

impl DecompositionTable {
    pub fn holds(&self) -> bool {
        (0..self.a_i.len()).all(|d| {
            let r = if d == 0 { 1 } else { self.r_i[d - 1] };
            self.a_i[d] == self.b_i[d] + r
        })
    }
}

pub fn decomposition_table(
    quiver: &FramedQuiver,
    set: &BTreeSet<usize>,
    cap: usize,
) -> Result<DecompositionTable> {
    let a_i = TruncatedAlgebra::new(quiver, AlgebraKind::AI, set, cap)?.degree_dims();
    let b = TruncatedAlgebra::new(quiver, AlgebraKind::B, set, cap)?;
    let b_i = TruncatedAlgebra::new(quiver, AlgebraKind::BI, set, cap)?.degree_dims();
    let r_i = r_dims(&b, set);
    Ok(DecompositionTable { a_i, b_i, r_i })
}

fn r_dims(b: &TruncatedAlgebra, set: &BTreeSet<usize>) -> Vec<usize> {
    (0..=b.cap())
        .map(|d| {
            set.iter()
                .map(|&i| b.piece_dim(Vertex::Node(0), Vertex::Node(i), d))
                .sum()
        })
        .collect()
}

/// An element `(b, r, c)` of `A_I ≅ B_I ⊕ R_I ⊕ ℂ e_∞`.
#[derive(Clone, Debug, PartialEq)]
pub struct TernaryElement {
    pub b: Element,
    pub r: Element,
    pub c: Q,
}

impl TernaryElement {
    pub fn one(b_alg: &TruncatedAlgebra) -> Self {
        let mut b = Element::new();
        for &i in b_alg.index_set() {
            b = add_elements(&b, &b_alg.idempotent(Vertex::Node(i)));
        }
        TernaryElement {
            b,
            r: Element::new(),
            c: Q::one(),
        }
    }

    pub fn zero() -> Self {
        TernaryElement {
            b: Element::new(),
            r: Element::new(),
            c: Q::zero(),
        }
    }
}

/// `(b₁, r₁, c₁)(b₂, r₂, c₂) = (b₁b₂, b₁r₂ + r₁c₂, c₁c₂)`, products taken in
/// the truncated algebra `B`.
pub fn ternary_multiply(
    b_alg: &TruncatedAlgebra,
    x: &TernaryElement,
    y: &TernaryElement,
) -> TernaryElement {
    TernaryElement {
        b: b_alg.multiply(&x.b, &y.b),
        r: add_elements(&b_alg.multiply(&x.b, &y.r), &scale_element(&x.r, &y.c)),
        c: x.c.mul(&y.c),
    }
}

/// Generating paths of `A_I` (over arrows of `Q` without `b*`): nonempty paths
/// from `{∞} ∪ I` to `I` whose interior avoids `{∞} ∪ I`, of length at most `cap`.
pub fn cornered_generators(quiver: &FramedQuiver, set: &BTreeSet<usize>, cap: usize) -> Vec<Path> {
    let in_corner = |v: Vertex| match v {
        Vertex::Inf => true,
        Vertex::Node(i) => set.contains(&i),
    };
    let mut out = Vec::new();
    let starts = core::iter::once(Vertex::Inf).chain(set.iter().map(|&i| Vertex::Node(i)));
    for s in starts {
        let mut frontier = vec![Path::trivial(s)];
        for _ in 0..cap {
            let mut next = Vec::new();
            for p in &frontier {
                for a in quiver.arrows_from(p.end(quiver)) {
                    if !quiver.allows(ArrowSet::QStar, a.id) {
                        continue;
                    }
                    let mut arrows = p.arrows.clone();
                    arrows.push(a.id);
                    let np = Path { arrows, start: s };
                    if in_corner(a.head) {
                        if a.head != Vertex::Inf {
                            out.push(np);
                        }
                    } else {
                        next.push(np);
                    }
                }
            }
            frontier = next;
        }
    }
    out.sort();
    out
}

/// A module over the cornered algebra: spaces at `∞` and on `I`, and the
/// matrices of the generating paths.
#[derive(Clone, Debug, PartialEq)]
pub struct CorneredModule<F> {
    pub set: BTreeSet<usize>,
    pub inf: u32,
    pub dims: BTreeMap<usize, u32>,
    pub generators: Vec<(Path, Matrix<F>)>,
}

/// Data of a `B_I`-module `T` with a map from `R_I`: the action of each
/// generating path of `B_I`, and the image of each generating path of `R_I`.
#[derive(Clone, Debug, PartialEq)]
pub struct CyclicQuotient<F> {
    pub set: BTreeSet<usize>,
    pub dims: BTreeMap<usize, u32>,
    pub action: Vec<(Path, Matrix<F>)>,
    pub r_images: Vec<(Path, Vec<F>)>,
}

impl<F: Field> CorneredModule<F> {
    fn slot_of(&self, v: Vertex) -> Option<usize> {
        match v {
            Vertex::Inf => Some(0),
            Vertex::Node(i) => self.set.iter().position(|&x| x == i).map(|p| p + 1),
        }
    }

    fn space_dims(&self) -> Vec<usize> {
        core::iter::once(self.inf as usize)
            .chain(self.set.iter().map(|i| self.dims[i] as usize))
            .collect()
    }

    pub fn total_dim(&self) -> usize {
        self.space_dims().iter().sum()
    }

    /// Shapes of all generator matrices agree with the dimensions.
    pub fn verify(&self, quiver: &FramedQuiver) -> Result<()> {
        let dims = self.space_dims();
        for (p, m) in &self.generators {
            let (Some(t), Some(h)) = (self.slot_of(p.start), self.slot_of(p.end(quiver))) else {
                return Err(Error::ShapeMismatch(format!(
                    "path {:?} leaves the corner",
                    p.arrows
                )));
            };
            if m.shape() != (dims[h], dims[t]) {
                return Err(Error::ShapeMismatch(format!("path {:?}", p.arrows)));
            }
        }
        Ok(())
    }

    /// Submodule generated by the space at `∞`, per slot (`∞`, then `I`).
    pub fn generated_at_inf(&self, quiver: &FramedQuiver) -> Vec<Subspace<F>> {
        let dims = self.space_dims();
        let mut spaces: Vec<Subspace<F>> = dims.iter().map(|&d| Subspace::zero(d)).collect();
        spaces[0] = Subspace::full(dims[0]);
        loop {
            let mut changed = false;
            for (p, m) in &self.generators {
                let t = self.slot_of(p.start).expect("verified");
                let h = self.slot_of(p.end(quiver)).expect("verified");
                if spaces[t].is_zero() {
                    continue;
                }
                let img = spaces[t].image(m);
                if !spaces[h].contains_subspace(&img) {
                    spaces[h] = spaces[h].sum(&img);
                    changed = true;
                }
            }
            if !changed {
                return spaces;
            }
        }
    }

    /// `η_I` has positive weight on every vertex of `I`, so a module of
    /// dimension `(1, n_I)` is `η_I`-stable exactly when `∞` generates it.
    pub fn eta_verdict(&self, quiver: &FramedQuiver, eta: &CorneredStability) -> Result<Verdict> {
        self.verify(quiver)?;
        if !eta.pairing(self.inf, &self.dims).is_zero() || self.inf != 1 {
            return Ok(Verdict::Unstable);
        }
        if self.generated_at_inf(quiver).iter().all(Subspace::is_full) {
            Ok(Verdict::Stable)
        } else {
            Ok(Verdict::Unstable)
        }
    }

    /// Splits off the `R_I` part: paths from `∞` are `b` followed by a path
    /// of `B` from 0, and act on the one-dimensional space at `∞`.
    pub fn decompose(&self, quiver: &FramedQuiver) -> Result<CyclicQuotient<F>> {
        self.verify(quiver)?;
        if self.inf != 1 {
            return Err(Error::PreconditionViolated(
                "dimension at infinity must be 1".into(),
            ));
        }
        let mut action = Vec::new();
        let mut r_images = Vec::new();
        for (p, m) in &self.generators {
            if p.start == Vertex::Inf {
                let rest = Path {
                    arrows: p.arrows[1..].to_vec(),
                    start: Vertex::Node(0),
                };
                r_images.push((rest, m.column(0)));
            } else {
                action.push((p.clone(), m.clone()));
            }
        }
        Ok(CyclicQuotient {
            set: self.set.clone(),
            dims: self.dims.clone(),
            action,
            r_images,
        })
    }
}

impl<F: Field> CyclicQuotient<F> {
    /// The `B_I`-submodule of `T` generated by the images of `R_I`.
    pub fn generated(&self, quiver: &FramedQuiver) -> Vec<Subspace<F>> {
        let pos = |v: Vertex| {
            let i = v.node().expect("node");
            self.set.iter().position(|&x| x == i).expect("in I")
        };
        let dims: Vec<usize> = self.set.iter().map(|i| self.dims[i] as usize).collect();
        let mut spaces: Vec<Subspace<F>> = dims.iter().map(|&d| Subspace::zero(d)).collect();
        for (p, v) in &self.r_images {
            let h = pos(p.end(quiver));
            spaces[h] = spaces[h].sum(&Subspace::span(dims[h], core::slice::from_ref(v)));
        }
        loop {
            let mut changed = false;
            for (p, m) in &self.action {
                let (t, h) = (pos(p.start), pos(p.end(quiver)));
                if spaces[t].is_zero() {
                    continue;
                }
                let img = spaces[t].image(m);
                if !spaces[h].contains_subspace(&img) {
                    spaces[h] = spaces[h].sum(&img);
                    changed = true;
                }
            }
            if !changed {
                return spaces;
            }
        }
    }
}

/// The module `ℂ ⊕ T` over `A_I`: `B_I` acts on `T`, scalars at `∞`, and the
/// path `b·ρ` sends `1` to the image of `ρ`. Fails unless `T` is generated by
/// those images.
pub fn assemble_ai_module<F: Field>(
    quiver: &FramedQuiver,
    data: &CyclicQuotient<F>,
) -> Result<CorneredModule<F>> {
    if !data.generated(quiver).iter().all(Subspace::is_full) {
        return Err(Error::NotCyclic);
    }
    let mut generators: Vec<(Path, Matrix<F>)> = data.action.clone();
    for (rho, v) in &data.r_images {
        let mut arrows = vec![quiver.b()];
        arrows.extend_from_slice(&rho.arrows);
        let col = Matrix::from_vec(v.len(), 1, v.clone());
        generators.push((
            Path {
                arrows,
                start: Vertex::Inf,
            },
            col,
        ));
    }
    generators.sort_by(|a, b| a.0.cmp(&b.0));
    let module = CorneredModule {
        set: data.set.clone(),
        inf: 1,
        dims: data.dims.clone(),
        generators,
    };
    module.verify(quiver)?;
    Ok(module)
}
