//! McKay graphs of the finite subgroups of SL(2, ℂ).

use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::cyclotomic::{ClassData, ClassFunction, Cyc, CyclotomicField};
use crate::dimvec::DimVector;
use crate::dynkin::AffineType;
use crate::error::{Error, Result};
use crate::field::{Field, Q};
use num_traits::ToPrimitive;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GroupFamily {
    /// ℤ/m, affine type A_{m-1}.
    Cyclic(usize),
    /// Binary dihedral group of order 4m, affine type D_{m+2}.
    BinaryDihedral(usize),
    BinaryTetrahedral,
    BinaryOctahedral,
    BinaryIcosahedral,
}

impl GroupFamily {
    pub fn order(self) -> u64 {
        match self {
            GroupFamily::Cyclic(m) => m as u64,
            GroupFamily::BinaryDihedral(m) => 4 * m as u64,
            GroupFamily::BinaryTetrahedral => 24,
            GroupFamily::BinaryOctahedral => 48,
            GroupFamily::BinaryIcosahedral => 120,
        }
    }

    pub fn affine_type(self) -> AffineType {
        match self {
            GroupFamily::Cyclic(m) => AffineType::A(m - 1),
            GroupFamily::BinaryDihedral(m) => AffineType::D(m + 2),
            GroupFamily::BinaryTetrahedral => AffineType::E6,
            GroupFamily::BinaryOctahedral => AffineType::E7,
            GroupFamily::BinaryIcosahedral => AffineType::E8,
        }
    }

    pub fn validate(self) -> Result<Self> {
        match self {
            GroupFamily::Cyclic(m) | GroupFamily::BinaryDihedral(m) if m < 2 => Err(
                Error::InvalidGroupParameter(format!("m = {m} must be at least 2")),
            ),
            g => Ok(g),
        }
    }
}

impl fmt::Display for GroupFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupFamily::Cyclic(m) => write!(f, "A{}", m - 1),
            GroupFamily::BinaryDihedral(m) => write!(f, "D{}", m + 2),
            GroupFamily::BinaryTetrahedral => f.write_str("E6"),
            GroupFamily::BinaryOctahedral => f.write_str("E7"),
            GroupFamily::BinaryIcosahedral => f.write_str("E8"),
        }
    }
}

/// Parses affine ADE names: `A<n>` is ℤ/(n+1), `D<n>` the binary dihedral
/// group of order 4(n-2), `E6`, `E7`, `E8`.
impl FromStr for GroupFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidGroupParameter(format!("unrecognised group `{s}`"));
        let (head, tail) = s.split_at(s.chars().next().map_or(0, char::len_utf8));
        let n: usize = tail.parse().map_err(|_| bad())?;
        let g = match (head.to_ascii_uppercase().as_str(), n) {
            ("A", n) if n >= 1 => GroupFamily::Cyclic(n + 1),
            ("D", n) if n >= 4 => GroupFamily::BinaryDihedral(n - 2),
            ("E", 6) => GroupFamily::BinaryTetrahedral,
            ("E", 7) => GroupFamily::BinaryOctahedral,
            ("E", 8) => GroupFamily::BinaryIcosahedral,
            _ => return Err(bad()),
        };
        g.validate()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct McKayData {
    pub group: GroupFamily,
    pub irrep_dims: Vec<u32>,
    pub adjacency: Vec<Vec<u32>>,
}

impl McKayData {
    /// `r`, so that the vertices are `0..=r`.
    pub fn rank(&self) -> usize {
        self.irrep_dims.len() - 1
    }

    pub fn num_vertices(&self) -> usize {
        self.irrep_dims.len()
    }

    pub fn delta(&self) -> DimVector {
        DimVector::unframed(self.irrep_dims.clone())
    }

    /// Neighbours of `k` listed with edge multiplicity, in increasing order.
    pub fn neighbours(&self, k: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for (j, &m) in self.adjacency[k].iter().enumerate() {
            for _ in 0..m {
                out.push(j);
            }
        }
        out
    }

    /// Checks the McKay equality at every vertex and `Σ dim² = |Γ|`.
    pub fn check_invariants(&self) -> Result<()> {
        let n = self.num_vertices();
        for k in 0..n {
            if self.adjacency[k][k] != 0 && self.group.order() > 1 {
                return Err(Error::InvariantViolation(format!("loop at vertex {k}")));
            }
            let s: u32 = (0..n)
                .map(|j| self.adjacency[k][j] * self.irrep_dims[j])
                .sum();
            if s != 2 * self.irrep_dims[k] {
                return Err(Error::InvariantViolation(format!(
                    "McKay equality fails at vertex {k}"
                )));
            }
            for j in 0..n {
                if self.adjacency[k][j] != self.adjacency[j][k] {
                    return Err(Error::InvariantViolation(
                        "adjacency not symmetric".to_string(),
                    ));
                }
            }
        }
        let sq: u64 = self.irrep_dims.iter().map(|&d| (d as u64).pow(2)).sum();
        if sq != self.group.order() {
            return Err(Error::InvariantViolation(format!(
                "sum of squared dimensions {sq} differs from |Γ| = {}",
                self.group.order()
            )));
        }
        Ok(())
    }

    fn preserves(&self, perm: &[usize]) -> bool {
        let n = self.num_vertices();
        (0..n).all(|i| {
            self.irrep_dims[perm[i]] == self.irrep_dims[i]
                && (0..n).all(|j| self.adjacency[perm[i]][perm[j]] == self.adjacency[i][j])
        })
    }
}

pub fn build_mckay(group: GroupFamily) -> Result<McKayData> {
    let group = group.validate()?;
    let (irrep_dims, adjacency) = match group {
        GroupFamily::Cyclic(m) => from_characters(&cyclic_characters(m)),
        GroupFamily::BinaryDihedral(m) => from_characters(&binary_dihedral_characters(m)),
        GroupFamily::BinaryTetrahedral => (vec![1, 1, 2, 2, 3, 2, 1], table(&E6_ADJ)),
        GroupFamily::BinaryOctahedral => (vec![1, 2, 2, 3, 4, 3, 2, 1], table(&E7_ADJ)),
        GroupFamily::BinaryIcosahedral => (vec![1, 2, 3, 4, 6, 5, 4, 3, 2], table(&E8_ADJ)),
    };
    let data = McKayData {
        group,
        irrep_dims,
        adjacency,
    };
    data.check_invariants()?;
    Ok(data)
}

fn table<const N: usize>(rows: &[[u32; N]; N]) -> Vec<Vec<u32>> {
    rows.iter().map(|r| r.to_vec()).collect()
}

#[rustfmt::skip]
const E6_ADJ: [[u32; 7]; 7] = [
    [0, 0, 1, 0, 0, 0, 0],
    [0, 0, 0, 1, 0, 0, 0],
    [1, 0, 0, 0, 1, 0, 0],
    [0, 1, 0, 0, 1, 0, 0],
    [0, 0, 1, 1, 0, 1, 0],
    [0, 0, 0, 0, 1, 0, 1],
    [0, 0, 0, 0, 0, 1, 0],
];

#[rustfmt::skip]
const E7_ADJ: [[u32; 8]; 8] = [
    [0, 1, 0, 0, 0, 0, 0, 0],
    [1, 0, 0, 1, 0, 0, 0, 0],
    [0, 0, 0, 0, 1, 0, 0, 0],
    [0, 1, 0, 0, 1, 0, 0, 0],
    [0, 0, 1, 1, 0, 1, 0, 0],
    [0, 0, 0, 0, 1, 0, 1, 0],
    [0, 0, 0, 0, 0, 1, 0, 1],
    [0, 0, 0, 0, 0, 0, 1, 0],
];

#[rustfmt::skip]
const E8_ADJ: [[u32; 9]; 9] = [
    [0, 0, 0, 0, 0, 0, 0, 0, 1],
    [0, 0, 0, 1, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 1, 0, 0, 0, 0],
    [0, 1, 0, 0, 1, 0, 0, 0, 0],
    [0, 0, 1, 1, 0, 1, 0, 0, 0],
    [0, 0, 0, 0, 1, 0, 1, 0, 0],
    [0, 0, 0, 0, 0, 1, 0, 1, 0],
    [0, 0, 0, 0, 0, 0, 1, 0, 1],
    [1, 0, 0, 0, 0, 0, 0, 1, 0],
];

/// Character table data: classes, the irreducible characters in Bourbaki
/// order, and the character of the defining two-dimensional representation.
pub struct CharacterTable {
    pub classes: ClassData,
    pub irreps: Vec<ClassFunction>,
    pub natural: ClassFunction,
}

pub fn cyclic_characters(m: usize) -> CharacterTable {
    let f = CyclotomicField::new(m);
    let irreps: Vec<ClassFunction> = (0..m as i64)
        .map(|k| ClassFunction((0..m as i64).map(|j| f.zeta_pow(j * k)).collect()))
        .collect();
    let natural = ClassFunction(
        (0..m as i64)
            .map(|j| f.add(&f.zeta_pow(j), &f.zeta_pow(-j)))
            .collect(),
    );
    CharacterTable {
        classes: ClassData {
            field: f,
            sizes: vec![1; m],
        },
        irreps,
        natural,
    }
}

/// Binary dihedral group `⟨a, x | a^{2m} = 1, x² = a^m, x a x⁻¹ = a⁻¹⟩`.
/// Classes: `1`, `a^m`, `{a^{±k}}` for `0 < k < m`, the class of `x`, the class of `ax`.
pub fn binary_dihedral_characters(m: usize) -> CharacterTable {
    let n = 4 * m;
    let f = CyclotomicField::new(n);
    let mi = m as i64;
    // exponents k of the rotation classes a^k, in class order
    let rot: Vec<i64> = [0, mi].into_iter().chain(1..mi).collect();
    let mut sizes: Vec<u64> = rot
        .iter()
        .map(|&k| if k == 0 || k == mi { 1 } else { 2 })
        .collect();
    sizes.push(m as u64);
    sizes.push(m as u64);

    let sign = |k: i64| f.int(if k % 2 == 0 { 1 } else { -1 });
    let c: Cyc = if m % 2 == 0 { f.int(1) } else { f.zeta_pow(mi) };
    let neg_c = f.scale(&c, &Q::from_i64(-1));

    let on_rot = |g: &dyn Fn(i64) -> Cyc| rot.iter().map(|&k| g(k)).collect::<Vec<Cyc>>();
    let with = |mut v: Vec<Cyc>, x: Cyc, ax: Cyc| {
        v.push(x);
        v.push(ax);
        ClassFunction(v)
    };

    let chi0 = with(on_rot(&|_| f.int(1)), f.int(1), f.int(1));
    let chi1 = with(on_rot(&|_| f.int(1)), f.int(-1), f.int(-1));
    let chi2 = with(on_rot(&sign), c.clone(), neg_c.clone());
    let chi3 = with(on_rot(&sign), neg_c, c);
    let rho = |h: i64| {
        with(
            on_rot(&|k| f.add(&f.zeta_pow(2 * h * k), &f.zeta_pow(-2 * h * k))),
            f.zero(),
            f.zero(),
        )
    };

    let mut irreps = vec![chi0, chi1];
    irreps.extend((1..mi).map(rho));
    irreps.push(chi2);
    irreps.push(chi3);
    CharacterTable {
        natural: rho(1),
        classes: ClassData { field: f, sizes },
        irreps,
    }
}

fn from_characters(t: &CharacterTable) -> (Vec<u32>, Vec<Vec<u32>>) {
    let f = &t.classes.field;
    let n = t.irreps.len();
    let as_u32 = |x: Q| -> u32 {
        assert!(x.is_integer(), "non-integral character inner product");
        x.to_integer().to_u32().expect("nonnegative multiplicity")
    };
    let dims = t
        .irreps
        .iter()
        .map(|chi| as_u32(f.as_rational(&chi.0[0]).expect("real degree")))
        .collect();
    let mut adj = vec![vec![0u32; n]; n];
    for i in 0..n {
        let twisted = t.classes.product(&t.irreps[i], &t.natural);
        for j in 0..n {
            let ip = t
                .classes
                .inner_product(&t.irreps[j], &twisted)
                .expect("rational inner product");
            adj[i][j] = as_u32(ip);
        }
    }
    (dims, adj)
}

/// All permutations of the vertices preserving adjacency and irrep dimensions,
/// in lexicographic order of their words `[σ(0), …, σ(r)]`.
pub fn diagram_automorphisms(mckay: &McKayData) -> Vec<Vec<usize>> {
    let n = mckay.num_vertices();
    let mut out = Vec::new();
    let mut perm = Vec::with_capacity(n);
    let mut used = vec![false; n];
    extend_automorphism(mckay, &mut perm, &mut used, &mut out);
    out
}

fn extend_automorphism(
    mckay: &McKayData,
    perm: &mut Vec<usize>,
    used: &mut [bool],
    out: &mut Vec<Vec<usize>>,
) {
    let n = mckay.num_vertices();
    let i = perm.len();
    if i == n {
        out.push(perm.clone());
        return;
    }
    for img in 0..n {
        if used[img] || mckay.irrep_dims[img] != mckay.irrep_dims[i] {
            continue;
        }
        let consistent = (0..i).all(|j| mckay.adjacency[img][perm[j]] == mckay.adjacency[i][j]);
        if !consistent {
            continue;
        }
        used[img] = true;
        perm.push(img);
        extend_automorphism(mckay, perm, used, out);
        perm.pop();
        used[img] = false;
    }
}

/// Chooses an automorphism `ι` with `ι(i) = 0` and returns `ι(0)`.
///
/// Among candidates we take the one with fewest fixed points, then the
/// lexicographically smallest word; on a cycle this picks the rotation.
pub fn iota_of_zero(mckay: &McKayData, i: usize) -> Result<usize> {
    if i >= mckay.num_vertices() || mckay.irrep_dims[i] != 1 {
        return Err(Error::NoSuchAutomorphism(i));
    }
    diagram_automorphisms(mckay)
        .into_iter()
        .filter(|p| p[i] == 0)
        .min_by_key(|p| {
            (
                p.iter().enumerate().filter(|(a, b)| a == *b).count(),
                p.clone(),
            )
        })
        .map(|p| p[0])
        .ok_or(Error::NoSuchAutomorphism(i))
}

/// True when `perm` is an automorphism of the McKay graph.
pub fn is_automorphism(mckay: &McKayData, perm: &[usize]) -> bool {
    perm.len() == mckay.num_vertices() && mckay.preserves(perm)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_two_has_a_double_edge() {
        let d = build_mckay(GroupFamily::Cyclic(2)).unwrap();
        assert_eq!(d.irrep_dims, vec![1, 1]);
        assert_eq!(d.adjacency, vec![vec![0, 2], vec![2, 0]]);
    }

    #[test]
    fn cyclic_three_is_a_triangle() {
        let d = build_mckay(GroupFamily::Cyclic(3)).unwrap();
        assert_eq!(d.delta().nodes, vec![1, 1, 1]);
        assert_eq!(d.adjacency, AffineType::A(2).adjacency());
    }

    #[test]
    fn character_tables_match_dynkin_diagrams() {
        for m in 2..=8 {
            let d = build_mckay(GroupFamily::Cyclic(m)).unwrap();
            assert_eq!(d.adjacency, d.group.affine_type().adjacency());
        }
        for m in 2..=8 {
            let d = build_mckay(GroupFamily::BinaryDihedral(m)).unwrap();
            assert_eq!(d.adjacency, d.group.affine_type().adjacency(), "m = {m}");
            assert_eq!(d.irrep_dims, d.group.affine_type().null_root());
        }
    }

    #[test]
    fn icosahedral_dimensions() {
        let d = build_mckay(GroupFamily::BinaryIcosahedral).unwrap();
        assert_eq!(d.irrep_dims.iter().map(|x| x * x).sum::<u32>(), 120);
        assert_eq!(d.adjacency, AffineType::E8.adjacency());
    }

    #[test]
    fn invalid_parameters() {
        assert!(matches!(
            build_mckay(GroupFamily::Cyclic(1)),
            Err(Error::InvalidGroupParameter(_))
        ));
        assert!("D3".parse::<GroupFamily>().is_err());
        assert!("A0".parse::<GroupFamily>().is_err());
        assert!("F4".parse::<GroupFamily>().is_err());
    }

    #[test]
    fn names_round_trip() {
        for s in ["A1", "A7", "D4", "D9", "E6", "E7", "E8"] {
            let g: GroupFamily = s.parse().unwrap();
            assert_eq!(g.to_string(), s);
        }
        assert_eq!(
            "D4".parse::<GroupFamily>().unwrap(),
            GroupFamily::BinaryDihedral(2)
        );
    }

    #[test]
    fn automorphisms_of_small_diagrams() {
        let a1 = build_mckay(GroupFamily::Cyclic(2)).unwrap();
        assert_eq!(diagram_automorphisms(&a1), vec![vec![0, 1], vec![1, 0]]);
        let d4 = build_mckay(GroupFamily::BinaryDihedral(2)).unwrap();
        let autos = diagram_automorphisms(&d4);
        assert_eq!(autos.len(), 24);
        let orbit: Vec<usize> = {
            let mut o: Vec<usize> = autos.iter().map(|p| p[0]).collect();
            o.sort();
            o.dedup();
            o
        };
        assert_eq!(orbit, vec![0, 1, 3, 4]);
    }

    #[test]
    fn iota_examples() {
        let a1 = build_mckay(GroupFamily::Cyclic(2)).unwrap();
        assert_eq!(iota_of_zero(&a1, 0).unwrap(), 0);
        let a2 = build_mckay(GroupFamily::Cyclic(3)).unwrap();
        assert_eq!(iota_of_zero(&a2, 1).unwrap(), 2);
        let e8 = build_mckay(GroupFamily::BinaryIcosahedral).unwrap();
        assert_eq!(iota_of_zero(&e8, 7), Err(Error::NoSuchAutomorphism(7)));
        assert_eq!(iota_of_zero(&e8, 0).unwrap(), 0);
    }
}
