//! Finite-dimensional representations of the framed quiver, the moment map,
//! submodule computations and the stability verdicts.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::algebra::{cornered_generators, CorneredModule};
use crate::dimvec::DimVector;
use crate::error::{Error, Result};
use crate::field::{q_to_f64, q_to_fp, Field, Fp, Q};
use crate::matrix::{Matrix, Subspace};
use crate::quiver::{FramedQuiver, Vertex};
use crate::stability::{face_of, Stability};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Verdict {
    Unstable,
    Semistable,
    Stable,
}

impl Verdict {
    pub fn is_semistable(self) -> bool {
        self != Verdict::Unstable
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Stable => "stable",
            Verdict::Semistable => "semistable",
            Verdict::Unstable => "unstable",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One subspace per vertex, in slot order.
#[derive(Clone, Debug, PartialEq)]
pub struct SubmoduleWitness<F> {
    pub spaces: Vec<Subspace<F>>,
}

impl<F: Field> SubmoduleWitness<F> {
    pub fn dims(&self) -> Vec<usize> {
        self.spaces.iter().map(Subspace::dim).collect()
    }

    pub fn dim_vector(&self) -> DimVector {
        let d = self.dims();
        DimVector::framed(d[0] as u32, d[1..].iter().map(|&x| x as u32).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.spaces.iter().all(Subspace::is_zero)
    }

    pub fn is_full(&self) -> bool {
        self.spaces.iter().all(Subspace::is_full)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Representation<F> {
    quiver: FramedQuiver,
    dims: Vec<usize>,
    maps: Vec<Matrix<F>>,
}

impl<F: Field> Representation<F> {
    pub fn zero(quiver: &FramedQuiver, dim: &DimVector) -> Self {
        let dims = dim.slots();
        let maps = quiver
            .arrows()
            .iter()
            .map(|a| Matrix::zeros(dims[a.head.slot()], dims[a.tail.slot()]))
            .collect();
        Representation {
            quiver: quiver.clone(),
            dims,
            maps,
        }
    }

    pub fn new(quiver: &FramedQuiver, dim: &DimVector, maps: Vec<Matrix<F>>) -> Result<Self> {
        if dim.num_nodes() != quiver.num_nodes() {
            return Err(Error::ShapeMismatch(format!(
                "dimension vector has {} nodes, quiver has {}",
                dim.num_nodes(),
                quiver.num_nodes()
            )));
        }
        if maps.len() != quiver.arrows().len() {
            return Err(Error::ShapeMismatch(format!(
                "{} matrices for {} arrows",
                maps.len(),
                quiver.arrows().len()
            )));
        }
        let dims = dim.slots();
        for a in quiver.arrows() {
            let want = (dims[a.head.slot()], dims[a.tail.slot()]);
            if maps[a.id].shape() != want {
                return Err(Error::ShapeMismatch(format!(
                    "arrow {} has shape {:?}, expected {:?}",
                    a.id,
                    maps[a.id].shape(),
                    want
                )));
            }
        }
        Ok(Representation {
            quiver: quiver.clone(),
            dims,
            maps,
        })
    }

    pub fn quiver(&self) -> &FramedQuiver {
        &self.quiver
    }

    /// Dimensions in slot order.
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, v: Vertex) -> usize {
        self.dims[v.slot()]
    }

    pub fn dim_vector(&self) -> DimVector {
        DimVector::framed(
            self.dims[0] as u32,
            self.dims[1..].iter().map(|&x| x as u32).collect(),
        )
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn map(&self, arrow: usize) -> &Matrix<F> {
        &self.maps[arrow]
    }

    pub fn maps(&self) -> &[Matrix<F>] {
        &self.maps
    }

    pub fn set_map(&mut self, arrow: usize, m: Matrix<F>) -> Result<()> {
        if m.shape() != self.maps[arrow].shape() {
            return Err(Error::ShapeMismatch(format!("arrow {arrow}")));
        }
        self.maps[arrow] = m;
        Ok(())
    }

    /// `Σ_{h(a)=i} ε(a) M_a M_{a*}` at every vertex, in slot order.
    pub fn moment_residual(&self) -> Vec<Matrix<F>> {
        let mut out: Vec<Matrix<F>> = self.dims.iter().map(|&d| Matrix::zeros(d, d)).collect();
        for a in self.quiver.arrows() {
            let h = a.head.slot();
            if self.dims[h] == 0 {
                continue;
            }
            let term = self.maps[a.id].mul(&self.maps[a.star]);
            out[h] = if a.eps > 0 {
                out[h].add(&term)
            } else {
                out[h].sub(&term)
            };
        }
        out
    }

    pub fn is_preprojective(&self) -> bool {
        self.moment_residual().iter().all(Matrix::is_zero)
    }

    /// True for modules over `Π/(b*)`: flat with `b*` acting by zero.
    pub fn is_a_module(&self) -> bool {
        self.maps[self.quiver.b_star()].is_zero() && self.is_preprojective()
    }

    /// Matrix of a path given as arrow ids in traversal order.
    pub fn path_matrix(&self, start: Vertex, arrows: &[usize]) -> Matrix<F> {
        let mut m = Matrix::identity(self.dim(start));
        for &id in arrows {
            m = self.maps[id].mul(&m);
        }
        m
    }

    /// Smallest arrow-closed family of subspaces containing `seed`.
    pub fn submodule_closure(&self, seed: Vec<Subspace<F>>) -> SubmoduleWitness<F> {
        let mut spaces = seed;
        loop {
            let mut changed = false;
            for a in self.quiver.arrows() {
                let (t, h) = (a.tail.slot(), a.head.slot());
                if spaces[t].is_zero() || self.dims[h] == 0 {
                    continue;
                }
                let img = spaces[t].image(&self.maps[a.id]);
                if !spaces[h].contains_subspace(&img) {
                    spaces[h] = spaces[h].sum(&img);
                    changed = true;
                }
            }
            if !changed {
                return SubmoduleWitness { spaces };
            }
        }
    }

    pub fn closure_of_vectors(&self, seed: &[(Vertex, Vec<F>)]) -> SubmoduleWitness<F> {
        let mut spaces: Vec<Subspace<F>> = self.dims.iter().map(|&d| Subspace::zero(d)).collect();
        for (v, x) in seed {
            let s = v.slot();
            spaces[s] = spaces[s].sum(&Subspace::span(self.dims[s], core::slice::from_ref(x)));
        }
        self.submodule_closure(spaces)
    }

    /// Submodule generated by the space at `∞`.
    pub fn framing_closure(&self) -> SubmoduleWitness<F> {
        let mut spaces: Vec<Subspace<F>> = self.dims.iter().map(|&d| Subspace::zero(d)).collect();
        spaces[0] = Subspace::full(self.dims[0]);
        self.submodule_closure(spaces)
    }

    pub fn full_witness(&self) -> SubmoduleWitness<F> {
        SubmoduleWitness {
            spaces: self.dims.iter().map(|&d| Subspace::full(d)).collect(),
        }
    }

    /// Largest submodule vanishing at every vertex of `avoid`.
    pub fn max_submodule_avoiding(&self, avoid: &BTreeSet<Vertex>) -> SubmoduleWitness<F> {
        let mut spaces: Vec<Subspace<F>> = self
            .quiver
            .vertices()
            .iter()
            .map(|v| {
                let d = self.dims[v.slot()];
                if avoid.contains(v) {
                    Subspace::zero(d)
                } else {
                    Subspace::full(d)
                }
            })
            .collect();
        loop {
            let mut changed = false;
            for a in self.quiver.arrows() {
                let (t, h) = (a.tail.slot(), a.head.slot());
                if spaces[t].is_zero() {
                    continue;
                }
                let pre = Subspace::preimage(&self.maps[a.id], &spaces[h]);
                let meet = spaces[t].intersection(&pre);
                if meet.dim() < spaces[t].dim() {
                    spaces[t] = meet;
                    changed = true;
                }
            }
            if !changed {
                return SubmoduleWitness { spaces };
            }
        }
    }

    /// King stability for weights in the closed positive cone.
    ///
    /// With `I` the support of `θ` on the nodes: semistable iff the submodule
    /// generated at `∞` is full on `I`; stable iff it is everything and no
    /// nonzero submodule vanishes on `{∞} ∪ I`.
    pub fn verdict(&self, theta: &Stability) -> Result<Verdict> {
        if theta.nodes.len() != self.quiver.num_nodes() {
            return Err(Error::ShapeMismatch("stability has wrong length".into()));
        }
        let set = face_of(theta).ok_or(Error::UnsupportedStability)?;
        if !theta.pairing_slots(&self.dims).is_zero() {
            return Ok(Verdict::Unstable);
        }
        let gen = self.framing_closure();
        let full_on_i = set.iter().all(|&i| gen.spaces[i + 1].is_full());
        if !full_on_i {
            return Ok(Verdict::Unstable);
        }
        if !gen.is_full() {
            return Ok(Verdict::Semistable);
        }
        let mut avoid: BTreeSet<Vertex> = set.iter().map(|&i| Vertex::Node(i)).collect();
        avoid.insert(Vertex::Inf);
        if self.max_submodule_avoiding(&avoid).is_zero() {
            Ok(Verdict::Stable)
        } else {
            Ok(Verdict::Semistable)
        }
    }

    pub fn is_semistable(&self, theta: &Stability) -> Result<bool> {
        Ok(self.verdict(theta)?.is_semistable())
    }

    pub fn is_stable(&self, theta: &Stability) -> Result<bool> {
        Ok(self.verdict(theta)? == Verdict::Stable)
    }

    /// Block-diagonal direct sum; both summands must live on the same quiver.
    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if self.quiver != other.quiver {
            return Err(Error::QuiverMismatch(
                "direct sum of different quivers".into(),
            ));
        }
        let dims = self
            .dims
            .iter()
            .zip(&other.dims)
            .map(|(a, b)| a + b)
            .collect();
        let maps = self
            .maps
            .iter()
            .zip(&other.maps)
            .map(|(a, b)| a.direct_sum(b))
            .collect();
        Ok(Representation {
            quiver: self.quiver.clone(),
            dims,
            maps,
        })
    }

    /// `self ⊕ ⊕_k S_k^{mult[k]}` with vertex simples at the nodes.
    pub fn pad_with_simples(&self, mult: &[u32]) -> Result<Self> {
        if mult.len() != self.quiver.num_nodes() {
            return Err(Error::ShapeMismatch("multiplicities per node".into()));
        }
        let pad = Representation::zero(&self.quiver, &DimVector::framed(0, mult.to_vec()));
        self.direct_sum(&pad)
    }

    /// Transports a module for this quiver's signs to `target`, which must be
    /// the same quiver with another sign function, by negating one map in
    /// every pair whose signs differ.
    pub fn sign_twist(&self, target: &FramedQuiver) -> Result<Self> {
        if target.arrows().len() != self.quiver.arrows().len() {
            return Err(Error::QuiverMismatch("different arrow sets".into()));
        }
        let mut maps = self.maps.clone();
        for (a, b) in self.quiver.arrows().iter().zip(target.arrows()) {
            if a.tail != b.tail || a.head != b.head || a.star != b.star {
                return Err(Error::QuiverMismatch(format!("arrow {} differs", a.id)));
            }
            if a.eps != b.eps && a.eps < 0 {
                maps[a.id] = maps[a.id].neg();
            }
        }
        Ok(Representation {
            quiver: target.clone(),
            dims: self.dims.clone(),
            maps,
        })
    }

    pub fn map_field<G: Field>(&self, f: impl Fn(&F) -> G) -> Representation<G> {
        Representation {
            quiver: self.quiver.clone(),
            dims: self.dims.clone(),
            maps: self.maps.iter().map(|m| m.map(&f)).collect(),
        }
    }

    /// The submodule `w` as a representation in its echelon bases.
    pub fn subrepresentation(&self, w: &SubmoduleWitness<F>) -> Result<Self> {
        let mut maps = Vec::with_capacity(self.maps.len());
        for a in self.quiver.arrows() {
            let (t, h) = (a.tail.slot(), a.head.slot());
            let (src, dst) = (&w.spaces[t], &w.spaces[h]);
            let mut m = Matrix::zeros(dst.dim(), src.dim());
            for (c, b) in src.basis().iter().enumerate() {
                let img = self.maps[a.id].mul_vec(b);
                let coords = dst.coordinates(&img).ok_or_else(|| {
                    Error::PreconditionViolated(format!("arrow {} leaves the subspace", a.id))
                })?;
                for (r, x) in coords.into_iter().enumerate() {
                    m.set(r, c, x);
                }
            }
            maps.push(m);
        }
        Representation::new(&self.quiver, &w.dim_vector(), maps)
    }

    /// Restriction to `{∞} ∪ I`: dimensions there, and the matrices of the
    /// generating paths of the cornered algebra up to length `cap`.
    pub fn restrict_ji(&self, set: &BTreeSet<usize>, cap: usize) -> CorneredModule<F> {
        let generators = cornered_generators(&self.quiver, set, cap)
            .into_iter()
            .map(|p| {
                let m = self.path_matrix(p.start, &p.arrows);
                (p, m)
            })
            .collect();
        CorneredModule {
            set: set.clone(),
            inf: self.dims[0] as u32,
            dims: set.iter().map(|&i| (i, self.dims[i + 1] as u32)).collect(),
            generators,
        }
    }
}

impl Representation<Q> {
    pub fn to_f64(&self) -> Representation<f64> {
        self.map_field(q_to_f64)
    }

    /// Reduction mod `P`; `None` if some denominator is divisible by `P`.
    pub fn reduce_mod<const P: u32>(&self) -> Option<Representation<Fp<P>>> {
        let maps = self
            .maps
            .iter()
            .map(|m| m.try_map(q_to_fp::<P>))
            .collect::<Option<Vec<_>>>()?;
        Some(Representation {
            quiver: self.quiver.clone(),
            dims: self.dims.clone(),
            maps,
        })
    }
}

impl Representation<f64> {
    /// `Σ ‖μ_i‖²` over all vertices.
    pub fn residual_norm_sq(&self) -> f64 {
        self.moment_residual()
            .iter()
            .flat_map(|m| m.entries().iter().map(|x| x * x).collect::<Vec<_>>())
            .sum()
    }
}

/// The vertex simple `S_k` as a representation with zero maps.
pub fn vertex_simple<F: Field>(quiver: &FramedQuiver, k: Vertex) -> Representation<F> {
    let mut d = DimVector::framed(0, vec![0; quiver.num_nodes()]);
    d.set(k, 1);
    Representation::zero(quiver, &d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{q_int, F2};
    use crate::mckay::{build_mckay, GroupFamily};
    use crate::quiver::frame;
    use crate::stability::theta_i;

    fn a1() -> FramedQuiver {
        frame(&build_mckay(GroupFamily::Cyclic(2)).unwrap())
    }

    /// ℂ[x,y]/(x², y) for ℤ/2: basis {1, x}, dims (1;1,1).
    fn partition_two(q: &FramedQuiver) -> Representation<Q> {
        let mut r = Representation::zero(q, &DimVector::framed(1, vec![1, 1]));
        r.set_map(q.b(), Matrix::from_vec(1, 1, vec![q_int(1)]))
            .unwrap();
        // the first 0 -> 1 arrow plays x
        let x = q
            .arrows()
            .iter()
            .find(|a| a.tail == Vertex::Node(0) && a.head == Vertex::Node(1))
            .unwrap()
            .id;
        r.set_map(x, Matrix::from_vec(1, 1, vec![q_int(1)]))
            .unwrap();
        r
    }

    #[test]
    fn zero_rep_is_flat() {
        let q = a1();
        let r: Representation<Q> = Representation::zero(&q, &DimVector::framed(1, vec![2, 3]));
        assert!(r.is_preprojective());
        assert!(r.is_a_module());
    }

    #[test]
    fn closure_examples() {
        let q = a1();
        let r = partition_two(&q);
        assert!(r.is_preprojective());
        assert_eq!(r.framing_closure().dims(), vec![1, 1, 1]);
        assert!(r.submodule_closure(r.full_witness().spaces).is_full());
        let empty = r.closure_of_vectors(&[]);
        assert!(empty.is_zero());
    }

    #[test]
    fn avoiding_submodules() {
        let q = a1();
        let r = partition_two(&q);
        let avoid = [Vertex::Inf, Vertex::Node(0)].into_iter().collect();
        // x lands at vertex 1 and nothing maps it back to 0
        assert_eq!(r.max_submodule_avoiding(&avoid).dims(), vec![0, 0, 1]);
        let all = q.vertices().into_iter().collect();
        assert!(r.max_submodule_avoiding(&all).is_zero());
        let s: Representation<Q> = vertex_simple(&q, Vertex::Node(1));
        let avoid0 = [Vertex::Inf, Vertex::Node(0)].into_iter().collect();
        assert_eq!(s.max_submodule_avoiding(&avoid0).dims(), vec![0, 0, 1]);
    }

    #[test]
    fn verdicts_for_theta_i() {
        let m = build_mckay(GroupFamily::Cyclic(2)).unwrap();
        let q = frame(&m);
        let r = partition_two(&q);
        let full = theta_i(&m, &[0, 1].into_iter().collect(), &r.dim_vector()).unwrap();
        assert_eq!(r.verdict(&full).unwrap(), Verdict::Stable);
        let t0 = theta_i(&m, &[0].into_iter().collect(), &r.dim_vector()).unwrap();
        assert_eq!(r.verdict(&t0).unwrap(), Verdict::Semistable);

        let padded = r.pad_with_simples(&[0, 2]).unwrap();
        assert_eq!(padded.dim_vector(), DimVector::framed(1, vec![1, 3]));
        let tp = theta_i(&m, &[0].into_iter().collect(), &padded.dim_vector()).unwrap();
        assert_eq!(padded.verdict(&tp).unwrap(), Verdict::Semistable);

        // framing vector generates nothing at vertex 1
        let lonely = Representation::<Q>::zero(&q, &DimVector::framed(1, vec![0, 1]));
        let t1 = theta_i(&m, &[1].into_iter().collect(), &lonely.dim_vector()).unwrap();
        assert_eq!(lonely.verdict(&t1).unwrap(), Verdict::Unstable);

        let neg = Stability {
            inf: q_int(0),
            nodes: vec![q_int(1), q_int(-1)],
        };
        assert_eq!(r.verdict(&neg), Err(Error::UnsupportedStability));
    }

    #[test]
    fn sign_twist_preserves_flatness() {
        let q = a1();
        let r = partition_two(&q);
        let mut eps = q.epsilons();
        // flip the pair containing b
        eps[q.b()] = -1;
        eps[q.b_star()] = 1;
        // and one node pair
        let x = q
            .arrows()
            .iter()
            .find(|a| a.tail == Vertex::Node(0))
            .unwrap();
        eps[x.id] = -eps[x.id];
        eps[x.star] = -eps[x.star];
        let q2 = q.with_eps(&eps).unwrap();
        let r2 = r.sign_twist(&q2).unwrap();
        assert!(r2.is_preprojective());
        assert_eq!(r2.sign_twist(&q).unwrap(), r);
    }

    #[test]
    fn reduction_mod_two() {
        let q = a1();
        let r = partition_two(&q);
        let r2: Representation<F2> = r.reduce_mod::<2>().unwrap();
        assert!(r2.is_preprojective());
        let mut half = r.clone();
        half.set_map(q.b(), Matrix::from_vec(1, 1, vec![crate::field::q(1, 2)]))
            .unwrap();
        assert!(half.reduce_mod::<2>().is_none());
    }

    #[test]
    fn restriction_dims() {
        let m = build_mckay(GroupFamily::Cyclic(3)).unwrap();
        let q = frame(&m);
        let r: Representation<Q> = Representation::zero(&q, &DimVector::framed(1, vec![2, 3, 1]));
        let c = r.restrict_ji(&[1].into_iter().collect(), 4);
        assert_eq!(c.inf, 1);
        assert_eq!(c.dims.values().copied().collect::<Vec<_>>(), vec![3]);
        let s: Representation<Q> = vertex_simple(&q, Vertex::Node(2));
        let cs = s.restrict_ji(&[1].into_iter().collect(), 4);
        assert!(cs.dims.values().all(|&d| d == 0) && cs.inf == 0);
    }
}
