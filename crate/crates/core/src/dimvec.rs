use alloc::vec::Vec;
use core::fmt;

use crate::quiver::Vertex;

/// Dimension vector on `{∞, 0, …, r}`. `inf` is `None` for vectors on the
/// unframed quiver.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DimVector {
    pub inf: Option<u32>,
    pub nodes: Vec<u32>,
}

impl DimVector {
    pub fn framed(inf: u32, nodes: Vec<u32>) -> Self {
        DimVector {
            inf: Some(inf),
            nodes,
        }
    }

    pub fn unframed(nodes: Vec<u32>) -> Self {
        DimVector { inf: None, nodes }
    }

    pub fn zero(num_nodes: usize, framed: bool) -> Self {
        DimVector {
            inf: framed.then_some(0),
            nodes: alloc::vec![0; num_nodes],
        }
    }

    pub fn is_framed(&self) -> bool {
        self.inf.is_some()
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn get(&self, v: Vertex) -> u32 {
        match v {
            Vertex::Inf => self.inf.unwrap_or(0),
            Vertex::Node(i) => self.nodes[i],
        }
    }

    pub fn set(&mut self, v: Vertex, value: u32) {
        match v {
            Vertex::Inf => self.inf = Some(value),
            Vertex::Node(i) => self.nodes[i] = value,
        }
    }

    /// Sum over the unframed vertices.
    pub fn node_total(&self) -> u32 {
        self.nodes.iter().sum()
    }

    pub fn total(&self) -> u32 {
        self.node_total() + self.inf.unwrap_or(0)
    }

    /// Componentwise `self ≤ other`, including the framing entry.
    pub fn le(&self, other: &Self) -> bool {
        self.nodes.len() == other.nodes.len()
            && self.inf.unwrap_or(0) <= other.inf.unwrap_or(0)
            && self.nodes.iter().zip(&other.nodes).all(|(a, b)| a <= b)
    }

    pub fn add(&self, other: &Self) -> Self {
        DimVector {
            inf: match (self.inf, other.inf) {
                (None, None) => None,
                (a, b) => Some(a.unwrap_or(0) + b.unwrap_or(0)),
            },
            nodes: self
                .nodes
                .iter()
                .zip(&other.nodes)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    /// `self − other`, or `None` if some entry would go negative.
    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        let inf = match (self.inf, other.inf) {
            (a, None) => a,
            (a, Some(b)) => Some(a.unwrap_or(0).checked_sub(b)?),
        };
        let nodes = self
            .nodes
            .iter()
            .zip(&other.nodes)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<u32>>>()?;
        Some(DimVector { inf, nodes })
    }

    /// Entries in slot order: `∞` first (0 when unframed), then the nodes.
    pub fn slots(&self) -> Vec<usize> {
        core::iter::once(self.inf.unwrap_or(0) as usize)
            .chain(self.nodes.iter().map(|&x| x as usize))
            .collect()
    }
}

/// `(1;3,2,3)` for framed vectors, `(1,1,1)` otherwise.
impl fmt::Display for DimVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        if let Some(i) = self.inf {
            write!(f, "{i};")?;
        }
        for (k, v) in self.nodes.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str(")")
    }
}
