//! Affine ADE Dynkin diagrams in Bourbaki numbering, built from edge lists.
//! These are the golden references the McKay construction is checked against.

use alloc::vec;
use alloc::vec::Vec;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AffineType {
    A(usize),
    D(usize),
    E6,
    E7,
    E8,
}

impl AffineType {
    /// Rank `r`; the diagram has `r + 1` vertices.
    pub fn rank(self) -> usize {
        match self {
            AffineType::A(r) | AffineType::D(r) => r,
            AffineType::E6 => 6,
            AffineType::E7 => 7,
            AffineType::E8 => 8,
        }
    }

    pub fn edges(self) -> Vec<(usize, usize)> {
        match self {
            AffineType::A(1) => vec![(0, 1), (0, 1)],
            AffineType::A(r) => (0..=r).map(|i| (i, (i + 1) % (r + 1))).collect(),
            AffineType::D(r) => {
                let mut e = vec![(0, 2), (1, 2)];
                e.extend((2..r - 2).map(|i| (i, i + 1)));
                e.push((r - 2, r - 1));
                e.push((r - 2, r));
                e
            }
            AffineType::E6 => vec![(1, 3), (3, 4), (4, 5), (5, 6), (2, 4), (0, 2)],
            AffineType::E7 => vec![(1, 3), (3, 4), (4, 5), (5, 6), (6, 7), (2, 4), (0, 1)],
            AffineType::E8 => vec![
                (1, 3),
                (3, 4),
                (4, 5),
                (5, 6),
                (6, 7),
                (7, 8),
                (2, 4),
                (0, 8),
            ],
        }
    }

    pub fn adjacency(self) -> Vec<Vec<u32>> {
        let n = self.rank() + 1;
        let mut adj = vec![vec![0u32; n]; n];
        for (i, j) in self.edges() {
            adj[i][j] += 1;
            adj[j][i] += 1;
        }
        adj
    }

    /// Marks of the imaginary root.
    pub fn null_root(self) -> Vec<u32> {
        match self {
            AffineType::A(r) => vec![1; r + 1],
            AffineType::D(r) => {
                let mut d = vec![2; r + 1];
                for i in [0, 1, r - 1, r] {
                    d[i] = 1;
                }
                d
            }
            AffineType::E6 => vec![1, 1, 2, 2, 3, 2, 1],
            AffineType::E7 => vec![1, 2, 2, 3, 4, 3, 2, 1],
            AffineType::E8 => vec![1, 2, 3, 4, 6, 5, 4, 3, 2],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_types() -> Vec<AffineType> {
        let mut t: Vec<AffineType> = (1..=8).map(AffineType::A).collect();
        t.extend((4..=10).map(AffineType::D));
        t.extend([AffineType::E6, AffineType::E7, AffineType::E8]);
        t
    }

    #[test]
    fn null_root_is_in_the_kernel_of_the_cartan_matrix() {
        for t in all_types() {
            let adj = t.adjacency();
            let d = t.null_root();
            for k in 0..adj.len() {
                let s: u32 = (0..adj.len()).map(|j| adj[k][j] * d[j]).sum();
                assert_eq!(2 * d[k], s, "{t:?} vertex {k}");
            }
        }
    }

    #[test]
    fn edge_counts() {
        assert_eq!(AffineType::A(1).adjacency(), vec![vec![0, 2], vec![2, 0]]);
        assert_eq!(AffineType::D(4).edges().len(), 4);
        assert_eq!(AffineType::E8.edges().len(), 8);
    }
}
