//! Ground truth for small cases: monomial ideals of `ℂ[x, y]` invariant
//! under `ℤ/m` (colored partitions) and stability by exhaustive search over
//! submodules of representations defined over `𝔽₂` or `𝔽₃`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::dimvec::DimVector;
use crate::error::{Error, Result};
use crate::field::{q_int, Field, Fp, Q};
use crate::matrix::{Matrix, Subspace};
use crate::quiver::FramedQuiver;
use crate::rep::{Representation, Verdict};
use crate::stability::Stability;

/// Largest total dimension accepted by [`brute_force_stability`].
pub const BRUTE_FORCE_MAX_DIM: usize = 6;

/// A Young diagram whose cell `(a, b)` (monomial `x^a y^b`) has color
/// `(a − b) mod m`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ColoredPartition {
    pub parts: Vec<u32>,
    pub m: usize,
    pub content: Vec<u32>,
}

impl ColoredPartition {
    pub fn new(parts: Vec<u32>, m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidGroupParameter(format!("m = {m}")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) || parts.contains(&0) {
            return Err(Error::PreconditionViolated(format!(
                "{parts:?} is not a partition"
            )));
        }
        let mut content = vec![0u32; m];
        for (a, b) in cells(&parts) {
            content[color(a, b, m)] += 1;
        }
        Ok(ColoredPartition { parts, m, content })
    }

    pub fn size(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn cells(&self) -> Vec<(u32, u32)> {
        cells(&self.parts)
    }

    pub fn contains(&self, a: u32, b: u32) -> bool {
        (b as usize) < self.parts.len() && a < self.parts[b as usize]
    }
}

/// Cells `(a, b)`: row `b` holds `a = 0..parts[b]`.
fn cells(parts: &[u32]) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for (b, &len) in parts.iter().enumerate() {
        for a in 0..len {
            out.push((a, b as u32));
        }
    }
    out
}

pub fn color(a: u32, b: u32, m: usize) -> usize {
    (a as i64 - b as i64).rem_euclid(m as i64) as usize
}

/// All partitions of `n` as weakly decreasing sequences, in reverse
/// lexicographic order (`(n)` first).
pub fn partitions(n: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    partitions_rec(n, n, &mut cur, &mut out);
    out
}

fn partitions_rec(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if rest == 0 {
        out.push(cur.clone());
        return;
    }
    for p in (1..=rest.min(max)).rev() {
        cur.push(p);
        partitions_rec(rest - p, p, cur, out);
        cur.pop();
    }
}

/// Partitions of `Σ v` whose color content is exactly `v`.
pub fn enumerate_colored_partitions(m: usize, v: &[u32]) -> Result<Vec<ColoredPartition>> {
    if m < 2 || v.len() != m {
        return Err(Error::InvalidGroupParameter(format!(
            "need m >= 2 and {m} entries, got {}",
            v.len()
        )));
    }
    let n: u32 = v.iter().sum();
    let mut out = Vec::new();
    for p in partitions(n) {
        let cp = ColoredPartition::new(p, m)?;
        if cp.content == v {
            out.push(cp);
        }
    }
    Ok(out)
}

/// The quiver must be the framed McKay quiver of `ℤ/m`.
fn check_cyclic_quiver(q: &FramedQuiver, m: usize) -> Result<()> {
    let ok = q.num_nodes() == m
        && (0..m).all(|c| {
            let next = (c + 1) % m;
            let want = if m == 2 { 2 } else { 1 };
            q.pairs_between(c, next) == want
        });
    if ok {
        Ok(())
    } else {
        Err(Error::QuiverMismatch(format!(
            "not the framed quiver of Z/{m}"
        )))
    }
}

/// Which arrow plays `x` (raising color) and which plays `y`. For `m = 2`
/// the two parallel pairs are `(x: 0→1, y: 1→0)` with index 0 and
/// `(y: 0→1, x: 1→0)` with index 1, so that each pair is `{x, y}`.
fn role_is_x(q: &FramedQuiver, id: usize, m: usize) -> bool {
    let a = q.arrow(id);
    let (t, h) = (a.tail.node().expect("node"), a.head.node().expect("node"));
    if m == 2 {
        (t == 0) == (a.index == 0)
    } else {
        h == (t + 1) % m
    }
}

/// The module `ℂ[x, y]/J` for the monomial ideal `J` of `p`, with basis the
/// cells sorted by color and then by `(a, b)`. `x` and `y` act by
/// multiplication, `b` sends 1 to the cell `(0, 0)` and `b*` is zero.
pub fn partition_to_rep(p: &ColoredPartition, q: &FramedQuiver) -> Result<Representation<Q>> {
    let m = p.m;
    check_cyclic_quiver(q, m)?;
    let mut by_color: Vec<Vec<(u32, u32)>> = vec![Vec::new(); m];
    for (a, b) in p.cells() {
        by_color[color(a, b, m)].push((a, b));
    }
    for c in &mut by_color {
        c.sort();
    }
    let pos = |a: u32, b: u32| -> Option<usize> {
        if !p.contains(a, b) {
            return None;
        }
        by_color[color(a, b, m)].iter().position(|&x| x == (a, b))
    };
    let dim = DimVector::framed(1, p.content.clone());
    let mut rep = Representation::zero(q, &dim);
    if !by_color[0].is_empty() {
        let mut bm = Matrix::zeros(p.content[0] as usize, 1);
        bm.set(pos(0, 0).expect("origin cell"), 0, Q::one());
        rep.set_map(q.b(), bm)?;
    }
    for arrow in q.arrows() {
        if arrow.id == q.b() || arrow.id == q.b_star() {
            continue;
        }
        let is_x = role_is_x(q, arrow.id, m);
        let t = arrow.tail.node().expect("node");
        let h = arrow.head.node().expect("node");
        let mut mat = Matrix::zeros(p.content[h] as usize, p.content[t] as usize);
        for (col, &(a, b)) in by_color[t].iter().enumerate() {
            let target = if is_x { pos(a + 1, b) } else { pos(a, b + 1) };
            if let Some(row) = target {
                mat.set(row, col, Q::one());
            }
        }
        // natural signs are +1 on x and −1 on y; fix pairs that disagree
        let natural_eps: i8 = if is_x { 1 } else { -1 };
        if natural_eps != arrow.eps && !is_x {
            mat = mat.neg();
        }
        rep.set_map(arrow.id, mat)?;
    }
    Ok(rep)
}

/// Every subspace of `𝔽_P^d`, from reduced echelon forms.
pub fn all_subspaces<const P: u32>(d: usize) -> Vec<Subspace<Fp<P>>> {
    let mut out = Vec::new();
    for k in 0..=d {
        let mut pivots = Vec::new();
        choose(d, k, 0, &mut pivots, &mut |piv| {
            // free slots: (row, col) with col > pivot[row] and col not a pivot
            let free: Vec<(usize, usize)> = piv
                .iter()
                .enumerate()
                .flat_map(|(r, &pc)| {
                    ((pc + 1)..d)
                        .filter(|c| !piv.contains(c))
                        .map(move |c| (r, c))
                })
                .collect();
            let total = (P as usize).pow(free.len() as u32);
            for code in 0..total {
                let mut m: Matrix<Fp<P>> = Matrix::zeros(k, d);
                for (r, &pc) in piv.iter().enumerate() {
                    m.set(r, pc, Fp::<P>::one());
                }
                let mut c = code;
                for &(r, col) in &free {
                    m.set(r, col, Fp::<P>::new((c % P as usize) as i64));
                    c /= P as usize;
                }
                out.push(Subspace::from_rows_matrix(&m));
            }
        });
    }
    out
}

fn choose(n: usize, k: usize, from: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
    if cur.len() == k {
        f(cur);
        return;
    }
    for i in from..n {
        cur.push(i);
        choose(n, k, i + 1, cur, f);
        cur.pop();
    }
}

/// Stability from the definition: enumerates every arrow-closed family of
/// subspaces and evaluates `θ` on each.
pub fn brute_force_stability<const P: u32>(
    rep: &Representation<Fp<P>>,
    theta: &Stability,
) -> Result<Verdict> {
    let total = rep.total_dim();
    if total > BRUTE_FORCE_MAX_DIM {
        return Err(Error::DimensionTooLarge {
            dim: total,
            limit: BRUTE_FORCE_MAX_DIM,
        });
    }
    let dims = rep.dims().to_vec();
    if !theta.pairing_slots(&dims).is_zero() {
        return Ok(Verdict::Unstable);
    }
    let options: Vec<Vec<Subspace<Fp<P>>>> = dims.iter().map(|&d| all_subspaces::<P>(d)).collect();
    let mut values: Vec<(Vec<usize>, Q)> = Vec::new();
    let mut chosen: Vec<Subspace<Fp<P>>> = Vec::new();
    search(rep, theta, &options, &mut chosen, &mut values);

    let mut semistable = true;
    let mut stable = true;
    for (sub, val) in &values {
        let zero = sub.iter().all(|&x| x == 0);
        let full = sub == &dims;
        let negative = val < &q_int(0);
        if negative {
            semistable = false;
        }
        if !zero && !full && !(val > &q_int(0)) {
            stable = false;
        }
    }
    Ok(if stable {
        Verdict::Stable
    } else if semistable {
        Verdict::Semistable
    } else {
        Verdict::Unstable
    })
}

fn search<const P: u32>(
    rep: &Representation<Fp<P>>,
    theta: &Stability,
    options: &[Vec<Subspace<Fp<P>>>],
    chosen: &mut Vec<Subspace<Fp<P>>>,
    values: &mut Vec<(Vec<usize>, Q)>,
) {
    let k = chosen.len();
    if k == options.len() {
        let d: Vec<usize> = chosen.iter().map(Subspace::dim).collect();
        let val = theta.pairing_slots(&d);
        values.push((d, val));
        return;
    }
    for cand in &options[k] {
        chosen.push(cand.clone());
        let closed = rep.quiver().arrows().iter().all(|a| {
            let (t, h) = (a.tail.slot(), a.head.slot());
            if t > k || h > k {
                return true;
            }
            chosen[h].contains_subspace(&chosen[t].image(rep.map(a.id)))
        });
        if closed {
            search(rep, theta, options, chosen, values);
        }
        chosen.pop();
    }
}
