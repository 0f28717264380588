//! The framed McKay quiver: vertices `{∞, 0, …, r}` and signed arrow pairs.

use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::mckay::McKayData;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Vertex {
    Inf,
    Node(usize),
}

impl Vertex {
    /// Position in slot order: `∞` is 0, node `i` is `i + 1`.
    pub fn slot(self) -> usize {
        match self {
            Vertex::Inf => 0,
            Vertex::Node(i) => i + 1,
        }
    }

    pub fn from_slot(s: usize) -> Self {
        if s == 0 {
            Vertex::Inf
        } else {
            Vertex::Node(s - 1)
        }
    }

    pub fn node(self) -> Option<usize> {
        match self {
            Vertex::Inf => None,
            Vertex::Node(i) => Some(i),
        }
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Vertex::Inf => f.write_str("inf"),
            Vertex::Node(i) => write!(f, "{i}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub id: usize,
    pub tail: Vertex,
    pub head: Vertex,
    /// Distinguishes parallel arrows between the same pair of vertices.
    pub index: usize,
    /// Id of the paired arrow `a*`.
    pub star: usize,
    pub eps: i8,
}

/// Which arrows a path algebra or representation is allowed to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArrowSet {
    /// Every arrow of the framed quiver.
    Framed,
    /// All arrows except `b*`.
    QStar,
    /// Arrows between unframed vertices.
    Gamma,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FramedQuiver {
    num_nodes: usize,
    arrows: Vec<Arrow>,
    b: usize,
    b_star: usize,
}

/// Adds `∞` and the pair `b: ∞ → 0`, `b*: 0 → ∞` to the McKay quiver.
///
/// Arrows are numbered in lexicographic order of `(tail slot, head slot,
/// index)`, and within each pair the smaller arrow gets `ε = +1`.
pub fn frame(mckay: &McKayData) -> FramedQuiver {
    let n = mckay.num_vertices();
    let mut keys: Vec<(usize, usize, usize)> = Vec::new();
    keys.push((0, 1, 0));
    keys.push((1, 0, 0));
    for i in 0..n {
        for j in 0..n {
            for idx in 0..mckay.adjacency[i][j] as usize {
                keys.push((i + 1, j + 1, idx));
            }
        }
    }
    keys.sort_unstable();
    let arrows = keys
        .iter()
        .enumerate()
        .map(|(id, &(t, h, idx))| {
            let star = keys.binary_search(&(h, t, idx)).expect("paired arrow");
            Arrow {
                id,
                tail: Vertex::from_slot(t),
                head: Vertex::from_slot(h),
                index: idx,
                star,
                eps: if (t, h, idx) < (h, t, idx) { 1 } else { -1 },
            }
        })
        .collect::<Vec<_>>();
    let b = keys.binary_search(&(0, 1, 0)).expect("b");
    let b_star = keys.binary_search(&(1, 0, 0)).expect("b*");
    FramedQuiver {
        num_nodes: n,
        arrows,
        b,
        b_star,
    }
}

impl FramedQuiver {
    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    pub fn num_slots(&self) -> usize {
        self.num_nodes + 1
    }

    pub fn vertices(&self) -> Vec<Vertex> {
        (0..self.num_slots()).map(Vertex::from_slot).collect()
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow(&self, id: usize) -> &Arrow {
        &self.arrows[id]
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn b_star(&self) -> usize {
        self.b_star
    }

    pub fn allows(&self, set: ArrowSet, id: usize) -> bool {
        match set {
            ArrowSet::Framed => true,
            ArrowSet::QStar => id != self.b_star,
            ArrowSet::Gamma => id != self.b && id != self.b_star,
        }
    }

    pub fn arrows_in(&self, set: ArrowSet) -> impl Iterator<Item = &Arrow> {
        self.arrows.iter().filter(move |a| self.allows(set, a.id))
    }

    pub fn arrows_from(&self, v: Vertex) -> impl Iterator<Item = &Arrow> {
        self.arrows.iter().filter(move |a| a.tail == v)
    }

    pub fn arrows_to(&self, v: Vertex) -> impl Iterator<Item = &Arrow> {
        self.arrows.iter().filter(move |a| a.head == v)
    }

    /// Number of arrow pairs joining nodes `i` and `j`.
    pub fn pairs_between(&self, i: usize, j: usize) -> usize {
        self.arrows
            .iter()
            .filter(|a| a.tail == Vertex::Node(i) && a.head == Vertex::Node(j))
            .count()
    }

    /// Number of arrow pairs with `v` as an endpoint.
    pub fn pair_degree(&self, v: Vertex) -> usize {
        self.arrows_from(v).count()
    }

    pub fn epsilons(&self) -> Vec<i8> {
        self.arrows.iter().map(|a| a.eps).collect()
    }

    /// The same quiver with a different sign function.
    pub fn with_eps(&self, eps: &[i8]) -> Result<FramedQuiver> {
        if eps.len() != self.arrows.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} signs for {} arrows",
                eps.len(),
                self.arrows.len()
            )));
        }
        for a in &self.arrows {
            if eps[a.id].abs() != 1 || eps[a.id] == eps[a.star] {
                return Err(Error::PreconditionViolated(format!(
                    "signs on arrow pair {}, {} must be opposite units",
                    a.id, a.star
                )));
            }
        }
        let mut q = self.clone();
        for a in &mut q.arrows {
            a.eps = eps[a.id];
        }
        Ok(q)
    }

    /// Checks the pairing and sign invariants.
    pub fn check(&self) -> Result<()> {
        for a in &self.arrows {
            let s = &self.arrows[a.star];
            if s.star != a.id || s.tail != a.head || s.head != a.tail || s.id == a.id {
                return Err(Error::InvariantViolation(format!(
                    "bad pairing at arrow {}",
                    a.id
                )));
            }
            if a.eps * s.eps != -1 {
                return Err(Error::InvariantViolation(format!(
                    "bad signs at arrow {}",
                    a.id
                )));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mckay::{build_mckay, GroupFamily};

    #[test]
    fn a1_has_three_pairs() {
        let q = frame(&build_mckay(GroupFamily::Cyclic(2)).unwrap());
        assert_eq!(q.arrows().len(), 6);
        assert_eq!(q.num_slots(), 3);
        q.check().unwrap();
        assert_eq!(q.arrow(q.b()).eps, 1);
        assert_eq!(q.arrow(q.b_star()).eps, -1);
    }

    #[test]
    fn a2_vertex_degrees() {
        let q = frame(&build_mckay(GroupFamily::Cyclic(3)).unwrap());
        assert_eq!(q.pair_degree(Vertex::Inf), 1);
        assert_eq!(q.pair_degree(Vertex::Node(0)), 3);
        assert_eq!(q.pair_degree(Vertex::Node(1)), 2);
        assert_eq!(q.pair_degree(Vertex::Node(2)), 2);
    }

    #[test]
    fn restriction_recovers_the_mckay_graph() {
        for g in [
            GroupFamily::Cyclic(2),
            GroupFamily::BinaryDihedral(3),
            GroupFamily::BinaryOctahedral,
        ] {
            let m = build_mckay(g).unwrap();
            let q = frame(&m);
            for i in 0..m.num_vertices() {
                for j in 0..m.num_vertices() {
                    assert_eq!(q.pairs_between(i, j), m.adjacency[i][j] as usize);
                }
            }
            assert_eq!(q.arrows_in(ArrowSet::Gamma).count() + 2, q.arrows().len());
        }
    }

    #[test]
    fn with_eps_rejects_equal_signs() {
        let q = frame(&build_mckay(GroupFamily::Cyclic(2)).unwrap());
        let flipped: Vec<i8> = q.epsilons().iter().map(|e| -e).collect();
        assert!(q.with_eps(&flipped).unwrap().check().is_ok());
        assert!(q.with_eps(&[1; 6]).is_err());
    }
}
