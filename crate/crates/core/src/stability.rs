//! Stability weights, the inequality set `𝒱(n_I)`, the `v′` construction and
//! Cartan matrices of proper subdiagrams.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::dimvec::DimVector;
use crate::error::{Error, Result};
use crate::field::{q_int, q_nonneg, Field, Q};
use crate::matrix::Matrix;
use crate::mckay::McKayData;
use crate::quiver::Vertex;

/// Rational weights on `{∞, 0, …, r}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stability {
    pub inf: Q,
    pub nodes: Vec<Q>,
}

impl Stability {
    pub fn get(&self, v: Vertex) -> &Q {
        match v {
            Vertex::Inf => &self.inf,
            Vertex::Node(i) => &self.nodes[i],
        }
    }

    /// `θ(d) = Σ θ_k d_k`, with `d_∞` taken as 0 for unframed `d`.
    pub fn pairing(&self, d: &DimVector) -> Q {
        let mut acc = self.inf.mul(&q_int(d.inf.unwrap_or(0) as i64));
        for (w, &x) in self.nodes.iter().zip(&d.nodes) {
            acc = acc.add(&w.mul(&q_int(x as i64)));
        }
        acc
    }

    /// Pairing against a dimension vector given in slot order.
    pub fn pairing_slots(&self, dims: &[usize]) -> Q {
        let mut acc = self.inf.mul(&q_int(dims[0] as i64));
        for (w, &x) in self.nodes.iter().zip(&dims[1..]) {
            acc = acc.add(&w.mul(&q_int(x as i64)));
        }
        acc
    }
}

/// Weights on `{∞} ∪ I` for modules over the cornered algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorneredStability {
    pub inf: Q,
    pub weights: BTreeMap<usize, Q>,
}

impl CorneredStability {
    pub fn pairing(&self, inf: u32, dims: &BTreeMap<usize, u32>) -> Q {
        let mut acc = self.inf.mul(&q_int(inf as i64));
        for (i, w) in &self.weights {
            acc = acc.add(&w.mul(&q_int(*dims.get(i).unwrap_or(&0) as i64)));
        }
        acc
    }
}

fn check_index_set(mckay: &McKayData, set: &BTreeSet<usize>) -> Result<()> {
    if set.is_empty() {
        return Err(Error::EmptyIndexSet);
    }
    if let Some(&i) = set.iter().find(|&&i| i >= mckay.num_vertices()) {
        return Err(Error::PreconditionViolated(format!(
            "vertex {i} out of range"
        )));
    }
    Ok(())
}

/// `θ_I`: weight `−Σ_{i∈I} v_i` at `∞`, 1 on `I`, 0 elsewhere.
pub fn theta_i(mckay: &McKayData, set: &BTreeSet<usize>, v: &DimVector) -> Result<Stability> {
    check_index_set(mckay, set)?;
    if v.inf != Some(1) || v.num_nodes() != mckay.num_vertices() {
        return Err(Error::PreconditionViolated(format!(
            "{v} is not of the form (1,v)"
        )));
    }
    let total: i64 = set.iter().map(|&i| v.nodes[i] as i64).sum();
    let nodes = (0..mckay.num_vertices())
        .map(|k| q_int(set.contains(&k) as i64))
        .collect();
    Ok(Stability {
        inf: q_int(-total),
        nodes,
    })
}

/// `η_I`: weight `−Σ n_j` at `∞` and 1 on every vertex of `I`.
pub fn eta_i(n: &BTreeMap<usize, u32>) -> Result<CorneredStability> {
    if n.is_empty() {
        return Err(Error::EmptyIndexSet);
    }
    let total: i64 = n.values().map(|&x| x as i64).sum();
    Ok(CorneredStability {
        inf: q_int(-total),
        weights: n.keys().map(|&i| (i, q_int(1))).collect(),
    })
}

pub fn in_c_plus(theta: &Stability) -> bool {
    theta.nodes.iter().all(|w| q_nonneg(w) && !w.is_zero())
}

/// The face `I = {i : θ_i > 0}` of the closed cone containing `θ` in its
/// relative interior, or `None` when some node weight is negative.
pub fn face_of(theta: &Stability) -> Option<BTreeSet<usize>> {
    if theta.nodes.iter().any(|w| !q_nonneg(w)) {
        return None;
    }
    Some(
        theta
            .nodes
            .iter()
            .enumerate()
            .filter(|(_, w)| !w.is_zero())
            .map(|(i, _)| i)
            .collect(),
    )
}

/// `Σ_{t(e)=k} v_{h(e)}` over the arrows of the framed quiver; the framing
/// arrow contributes `v_∞` at vertex 0.
pub fn neighbour_sum(mckay: &McKayData, k: usize, v: &DimVector) -> u64 {
    let mut s: u64 = mckay
        .neighbours(k)
        .into_iter()
        .map(|j| v.nodes[j] as u64)
        .sum();
    if k == 0 {
        s += v.inf.unwrap_or(0) as u64;
    }
    s
}

fn complement(mckay: &McKayData, set: &BTreeSet<usize>) -> Vec<usize> {
    (0..mckay.num_vertices())
        .filter(|k| !set.contains(k))
        .collect()
}

/// Membership of `(1, v)` in `𝒱(n_I)`.
pub fn in_v(mckay: &McKayData, n: &BTreeMap<usize, u32>, v: &DimVector) -> bool {
    if v.inf != Some(1) || v.num_nodes() != mckay.num_vertices() {
        return false;
    }
    if n.iter()
        .any(|(&i, &ni)| i >= v.num_nodes() || v.nodes[i] != ni)
    {
        return false;
    }
    let set: BTreeSet<usize> = n.keys().copied().collect();
    complement(mckay, &set)
        .into_iter()
        .all(|k| 2 * v.nodes[k] as u64 >= neighbour_sum(mckay, k, v))
}

/// Vertices `k ∉ {∞} ∪ I` where `2v_k ≤ Σ_{t(e)=k} v_{h(e)}` fails; this
/// inequality holds for every `θ_I`-stable module of dimension `(1, v)`.
pub fn vnj_violations(mckay: &McKayData, set: &BTreeSet<usize>, v: &DimVector) -> Vec<usize> {
    complement(mckay, set)
        .into_iter()
        .filter(|&k| 2 * v.nodes[k] as u64 > neighbour_sum(mckay, k, v))
        .collect()
}

pub fn vnj_holds(mckay: &McKayData, set: &BTreeSet<usize>, v: &DimVector) -> bool {
    vnj_violations(mckay, set, v).is_empty()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathData {
    /// Vertices of the path, starting at the source and ending in the target set.
    pub path: Vec<usize>,
    /// Distance from the source of each vertex on the path.
    pub distances: BTreeMap<usize, u32>,
}

impl PathData {
    /// Vertices strictly between the two endpoints.
    pub fn interior(&self) -> &[usize] {
        if self.path.len() <= 2 {
            &[]
        } else {
            &self.path[1..self.path.len() - 1]
        }
    }
}

/// Breadth-first shortest path from `source` to the nearest vertex of
/// `targets`, expanding smaller vertices first. Empty when `source` is a target.
pub fn shortest_path_data(
    mckay: &McKayData,
    source: usize,
    targets: &BTreeSet<usize>,
) -> Result<PathData> {
    if targets.is_empty() {
        return Err(Error::EmptyIndexSet);
    }
    if targets.contains(&source) {
        return Ok(PathData {
            path: Vec::new(),
            distances: BTreeMap::new(),
        });
    }
    let n = mckay.num_vertices();
    let mut parent = vec![usize::MAX; n];
    let mut seen = vec![false; n];
    seen[source] = true;
    let mut queue = VecDeque::from([source]);
    while let Some(x) = queue.pop_front() {
        for y in 0..n {
            if mckay.adjacency[x][y] == 0 || seen[y] {
                continue;
            }
            seen[y] = true;
            parent[y] = x;
            if targets.contains(&y) {
                let mut path = vec![y];
                let mut cur = y;
                while cur != source {
                    cur = parent[cur];
                    path.push(cur);
                }
                path.reverse();
                let distances = path
                    .iter()
                    .enumerate()
                    .map(|(d, &k)| (k, d as u32))
                    .collect();
                return Ok(PathData { path, distances });
            }
            queue.push_back(y);
        }
    }
    Err(Error::InvariantViolation(
        "McKay graph is disconnected".into(),
    ))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VPrime {
    pub v: DimVector,
    pub n: u32,
    pub k_prime: Vec<usize>,
    pub path: Vec<usize>,
}

/// Builds `v′ ≥ v` with `(1, v′) ∈ 𝒱(n_I)`: `N dim ρ_k − d_k` on the interior
/// of a shortest path from 0 to `I`, `N dim ρ_k` elsewhere off `I`, and `N`
/// as small as possible.
pub fn construct_vprime(
    mckay: &McKayData,
    n: &BTreeMap<usize, u32>,
    v: &DimVector,
) -> Result<VPrime> {
    let set: BTreeSet<usize> = n.keys().copied().collect();
    check_index_set(mckay, &set)?;
    if v.inf != Some(1) || v.num_nodes() != mckay.num_vertices() {
        return Err(Error::PreconditionViolated(format!(
            "{v} is not of the form (1,v)"
        )));
    }
    if n.iter().any(|(&i, &ni)| v.nodes[i] != ni) {
        return Err(Error::PreconditionViolated(
            "v must agree with n_I on I".into(),
        ));
    }
    let path = shortest_path_data(mckay, 0, &set)?;
    let k_prime: Vec<usize> = path.interior().to_vec();
    let k = complement(mckay, &set);
    // Any N at least this large satisfies all inequalities.
    let bound = 4 * (v.node_total() + n.values().sum::<u32>() + mckay.num_vertices() as u32 + 2);
    for big_n in 0..=bound {
        if let Some(candidate) = vprime_at(mckay, &k, &path, &k_prime, big_n, v) {
            if in_v(mckay, n, &candidate) && v.le(&candidate) {
                return Ok(VPrime {
                    v: candidate,
                    n: big_n,
                    k_prime,
                    path: path.path,
                });
            }
        }
    }
    Err(Error::InvariantViolation(
        "no N produced a vector in V(n_I)".into(),
    ))
}

/// The candidate `v′` for a given `N`, or `None` if some entry is negative.
pub fn vprime_at(
    mckay: &McKayData,
    k: &[usize],
    path: &PathData,
    k_prime: &[usize],
    big_n: u32,
    v: &DimVector,
) -> Option<DimVector> {
    let mut out = v.clone();
    for &x in k {
        let base = big_n as i64 * mckay.irrep_dims[x] as i64;
        let val = if k_prime.contains(&x) {
            base - path.distances[&x] as i64
        } else {
            base
        };
        out.nodes[x] = u32::try_from(val).ok()?;
    }
    Some(out)
}

/// A connected induced subdiagram with its Cartan matrix `2 − adjacency`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartanBlock {
    pub vertices: Vec<usize>,
    pub matrix: Vec<Vec<i64>>,
}

impl CartanBlock {
    pub fn to_matrix(&self) -> Matrix<Q> {
        let n = self.vertices.len();
        Matrix::from_vec(
            n,
            n,
            self.matrix.iter().flatten().map(|&x| q_int(x)).collect(),
        )
    }
}

/// Connected components of the subdiagram induced on `k`.
pub fn cartan_blocks(mckay: &McKayData, k: &BTreeSet<usize>) -> Result<Vec<CartanBlock>> {
    let mut seen = BTreeSet::new();
    let mut blocks = Vec::new();
    for &start in k {
        if !seen.insert(start) {
            continue;
        }
        let mut comp = vec![start];
        let mut stack = vec![start];
        while let Some(x) = stack.pop() {
            for &y in k {
                if mckay.adjacency[x][y] > 0 && seen.insert(y) {
                    comp.push(y);
                    stack.push(y);
                }
            }
        }
        comp.sort_unstable();
        if comp.len() == mckay.num_vertices() {
            return Err(Error::AffineComponent);
        }
        let matrix = comp
            .iter()
            .map(|&a| {
                comp.iter()
                    .map(|&b| {
                        if a == b {
                            2
                        } else {
                            -(mckay.adjacency[a][b] as i64)
                        }
                    })
                    .collect()
            })
            .collect();
        blocks.push(CartanBlock {
            vertices: comp,
            matrix,
        });
    }
    Ok(blocks)
}

/// The exact inverse of a block's Cartan matrix and whether it is entrywise
/// nonnegative.
pub fn cartan_inverse_nonneg(block: &CartanBlock) -> Result<(bool, Matrix<Q>)> {
    let inv = block.to_matrix().inverse().ok_or(Error::SingularMatrix)?;
    let ok = inv.entries().iter().all(q_nonneg);
    Ok((ok, inv))
}

/// Given `v`, `w` agreeing on `{∞} ∪ I`, checks `C(v − w)|_Λ ≥ 0` on every
/// block `Λ` of the complement. When this holds, `v ≥ w` follows from the
/// nonnegativity of `C⁻¹`; that conclusion is verified and a failure is
/// reported as an invariant violation.
pub fn solve_w_bound(
    mckay: &McKayData,
    set: &BTreeSet<usize>,
    v: &DimVector,
    w: &DimVector,
) -> Result<bool> {
    check_index_set(mckay, set)?;
    if v.inf != w.inf || set.iter().any(|&i| v.nodes[i] != w.nodes[i]) {
        return Err(Error::PreconditionViolated(
            "v and w must agree on {inf} and I".into(),
        ));
    }
    let k: BTreeSet<usize> = complement(mckay, set).into_iter().collect();
    for block in cartan_blocks(mckay, &k)? {
        let u: Vec<Q> = block
            .vertices
            .iter()
            .map(|&x| q_int(v.nodes[x] as i64 - w.nodes[x] as i64))
            .collect();
        let cu = block.to_matrix().mul_vec(&u);
        if !cu.iter().all(q_nonneg) {
            return Ok(false);
        }
        let (_, inv) = cartan_inverse_nonneg(&block)?;
        let back = inv.mul_vec(&cu);
        if back != u || !u.iter().all(q_nonneg) {
            return Err(Error::InvariantViolation(format!(
                "C(v-w) >= 0 on block {:?} but v >= w fails",
                block.vertices
            )));
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::q;
    use crate::mckay::{build_mckay, GroupFamily};

    fn set(xs: &[usize]) -> BTreeSet<usize> {
        xs.iter().copied().collect()
    }

    fn nmap(xs: &[(usize, u32)]) -> BTreeMap<usize, u32> {
        xs.iter().copied().collect()
    }

    fn a(m: usize) -> McKayData {
        build_mckay(GroupFamily::Cyclic(m)).unwrap()
    }

    #[test]
    fn theta_examples() {
        let t = theta_i(&a(2), &set(&[0]), &DimVector::framed(1, vec![4, 1])).unwrap();
        assert_eq!(t.inf, q_int(-4));
        assert_eq!(t.nodes, vec![q_int(1), q_int(0)]);

        let v = DimVector::framed(1, vec![3, 2, 1]);
        let t = theta_i(&a(3), &set(&[1, 2]), &v).unwrap();
        assert_eq!(t.inf, q_int(-3));
        assert_eq!(t.nodes, vec![q_int(0), q_int(1), q_int(1)]);
        assert!(t.pairing(&v).is_zero());

        let full = theta_i(&a(3), &set(&[0, 1, 2]), &v).unwrap();
        assert_eq!(full.inf, q_int(-6));
        assert!(in_c_plus(&full));
        assert!(!in_c_plus(&t));
        assert_eq!(theta_i(&a(3), &set(&[]), &v), Err(Error::EmptyIndexSet));
    }

    #[test]
    fn eta_examples() {
        let e = eta_i(&nmap(&[(0, 5)])).unwrap();
        assert_eq!(e.inf, q_int(-5));
        let e = eta_i(&nmap(&[(1, 1), (2, 1)])).unwrap();
        assert_eq!(e.inf, q_int(-2));
        assert!(e.pairing(1, &nmap(&[(1, 1), (2, 1)])).is_zero());
        assert_eq!(eta_i(&BTreeMap::new()), Err(Error::EmptyIndexSet));
    }

    #[test]
    fn faces() {
        let v = DimVector::framed(1, vec![0, 2, 0]);
        let t = theta_i(&a(3), &set(&[1]), &v).unwrap();
        assert_eq!(face_of(&t), Some(set(&[1])));
        let bad = Stability {
            inf: q_int(0),
            nodes: vec![q_int(1), q_int(0), q_int(-1)],
        };
        assert_eq!(face_of(&bad), None);
        let generic = Stability {
            inf: q(-7, 2),
            nodes: vec![q(1, 2), q_int(2), q_int(1)],
        };
        assert_eq!(face_of(&generic), Some(set(&[0, 1, 2])));
        assert!(!in_c_plus(&Stability {
            inf: q_int(0),
            nodes: vec![q_int(0); 3]
        }));
    }

    #[test]
    fn membership_in_v() {
        let m = a(3);
        let n = nmap(&[(1, 2)]);
        assert!(in_v(&m, &n, &DimVector::framed(1, vec![3, 2, 3])));
        assert!(!in_v(&m, &n, &DimVector::framed(1, vec![1, 2, 1])));
    }

    #[test]
    fn vprime_a2_example() {
        let m = a(3);
        let out =
            construct_vprime(&m, &nmap(&[(1, 2)]), &DimVector::framed(1, vec![0, 2, 0])).unwrap();
        assert_eq!(out.v, DimVector::framed(1, vec![3, 2, 3]));
        assert_eq!(out.n, 3);
        assert!(out.k_prime.is_empty());
    }

    #[test]
    fn vprime_with_interior_path() {
        // affine A5: 0 and 3 are opposite, the shortest path is 0-1-2-3
        let m = a(6);
        let out = construct_vprime(
            &m,
            &nmap(&[(3, 1)]),
            &DimVector::framed(1, vec![0, 0, 0, 1, 0, 0]),
        )
        .unwrap();
        assert_eq!(out.path, vec![0, 1, 2, 3]);
        assert_eq!(out.k_prime, vec![1, 2]);
        assert!(in_v(&m, &nmap(&[(3, 1)]), &out.v));
    }

    #[test]
    fn shortest_paths() {
        let m = a(3);
        assert_eq!(
            shortest_path_data(&m, 0, &set(&[1])).unwrap().path,
            vec![0, 1]
        );
        assert!(shortest_path_data(&m, 0, &set(&[0]))
            .unwrap()
            .path
            .is_empty());
        let d4 = build_mckay(GroupFamily::BinaryDihedral(2)).unwrap();
        let p = shortest_path_data(&d4, 0, &set(&[4])).unwrap();
        assert_eq!(p.path, vec![0, 2, 4]);
        assert_eq!(p.interior(), &[2]);
    }

    #[test]
    fn cartan_examples() {
        let m = a(3);
        let b = cartan_blocks(&m, &set(&[0, 2])).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].matrix, vec![vec![2, -1], vec![-1, 2]]);
        let (ok, inv) = cartan_inverse_nonneg(&b[0]).unwrap();
        assert!(ok);
        assert_eq!(inv.get(0, 0), &q(2, 3));
        assert_eq!(inv.get(0, 1), &q(1, 3));

        let b = cartan_blocks(&m, &set(&[1])).unwrap();
        assert_eq!(b[0].matrix, vec![vec![2]]);
        assert_eq!(cartan_inverse_nonneg(&b[0]).unwrap().1.get(0, 0), &q(1, 2));

        let d4 = build_mckay(GroupFamily::BinaryDihedral(2)).unwrap();
        assert_eq!(cartan_blocks(&d4, &set(&[0, 1, 3, 4])).unwrap().len(), 4);
        assert_eq!(
            cartan_blocks(&m, &set(&[0, 1, 2])),
            Err(Error::AffineComponent)
        );
    }

    #[test]
    fn w_bound_examples() {
        let m = a(3);
        let v = DimVector::framed(1, vec![3, 2, 3]);
        assert!(solve_w_bound(&m, &set(&[1]), &v, &v).unwrap());
        assert!(solve_w_bound(&m, &set(&[1]), &v, &DimVector::framed(1, vec![2, 2, 2])).unwrap());
        assert!(!solve_w_bound(&m, &set(&[1]), &v, &DimVector::framed(1, vec![5, 2, 3])).unwrap());
        assert!(solve_w_bound(&m, &set(&[1]), &v, &DimVector::framed(1, vec![3, 1, 3])).is_err());
    }
}
