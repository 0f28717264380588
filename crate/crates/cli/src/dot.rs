//! Graphviz output for the framed quiver and its sub-quivers.

use std::fmt::Write;

use kq_core::quiver::{ArrowSet, FramedQuiver};
use kq_core::Vertex;

/// Vertices in slot order, then arrows in id order; edges are labelled by
/// arrow id and sign.
pub fn to_dot(q: &FramedQuiver, set: ArrowSet, name: &str) -> String {
    let mut out = String::new();
    writeln!(out, "digraph \"{name}\" {{").unwrap();
    out.push_str("  node [shape=circle];\n");
    let show_inf = set != ArrowSet::Gamma;
    for v in q.vertices() {
        match v {
            Vertex::Inf if show_inf => out.push_str("  \"inf\" [shape=box];\n"),
            Vertex::Inf => {}
            Vertex::Node(i) => writeln!(out, "  \"{i}\";").unwrap(),
        }
    }
    for a in q.arrows_in(set) {
        let sign = if a.eps > 0 { '+' } else { '-' };
        writeln!(
            out,
            "  \"{}\" -> \"{}\" [label=\"a{} {sign}\"];",
            a.tail, a.head, a.id
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use kq_core::mckay::build_mckay;
    use kq_core::quiver::frame;

    #[test]
    fn a1_edges() {
        let q = frame(&build_mckay("A1".parse().unwrap()).unwrap());
        let full = to_dot(&q, ArrowSet::Framed, "A1");
        // b, b*, and two pairs between 0 and 1
        assert_eq!(full.matches("->").count(), 6);
        assert!(full.contains("\"inf\" -> \"0\" [label=\"a0 +\"]"));
        let star = to_dot(&q, ArrowSet::QStar, "A1");
        assert_eq!(star.matches("->").count(), 5);
        let gamma = to_dot(&q, ArrowSet::Gamma, "A1");
        assert_eq!(gamma.matches("->").count(), 4);
        assert!(!gamma.contains("inf"));
    }

    #[test]
    fn deterministic() {
        let q = frame(&build_mckay("E6".parse().unwrap()).unwrap());
        assert_eq!(
            to_dot(&q, ArrowSet::Framed, "E6"),
            to_dot(&q, ArrowSet::Framed, "E6")
        );
    }
}
