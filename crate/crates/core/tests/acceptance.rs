//! Acceptance criteria 1 to 9. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use kq_core::algebra::{
    add_elements, decomposition_table, scale_element, ternary_multiply, AlgebraKind, Element,
    TernaryElement, TruncatedAlgebra,
};
use kq_core::field::{q_int, Fp};
use kq_core::mckay::{build_mckay, McKayData};
use kq_core::oracle::{
    brute_force_stability, enumerate_colored_partitions, partition_to_rep, partitions,
    ColoredPartition,
};
use kq_core::pipeline::{run_pipeline, Certificate, Nonemptiness, PipelineConfig, PipelineReport};
use kq_core::quiver::{frame, FramedQuiver};
use kq_core::solver::{solve_moment_map, Sequential, SolverConfig};
use kq_core::stability::{
    cartan_blocks, cartan_inverse_nonneg, construct_vprime, in_v, shortest_path_data, theta_i,
    vnj_violations, vprime_at,
};
use kq_core::{DimVector, GroupFamily, Matrix, Representation, Stability, Verdict, Vertex, Q};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `‖μ‖` allowed for a numeric point before rounding.
const RESIDUAL_TOL: f64 = 1e-10;

const LIMIT_1: Duration = Duration::from_secs(1);
const LIMIT_2: Duration = Duration::from_secs(10);
const LIMIT_3: Duration = Duration::from_secs(30);
const LIMIT_4: Duration = Duration::from_secs(5);
const LIMIT_5: Duration = Duration::from_secs(5);
const LIMIT_6: Duration = Duration::from_secs(120);
const LIMIT_8: Duration = Duration::from_secs(300);
const LIMIT_9: Duration = Duration::from_secs(60);

struct Outcome {
    ok: bool,
    detail: String,
}

fn pass(detail: String) -> Outcome {
    Outcome { ok: true, detail }
}

fn fail(detail: String) -> Outcome {
    Outcome { ok: false, detail }
}

fn timed(n: u32, what: &str, limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> bool {
    let t = Instant::now();
    let mut o = f();
    let dt = t.elapsed();
    if let Some(l) = limit {
        if dt > l {
            o.ok = false;
            o.detail = format!("{}; over the {:?} limit", o.detail, l);
        }
    }
    println!(
        "criterion {n} {}: {what}: {} ({:.3}s)",
        if o.ok { "PASS" } else { "FAIL" },
        o.detail,
        dt.as_secs_f64()
    );
    o.ok
}

// ---- criterion 1 -------------------------------------------------------

/// Affine diagrams typed from their shapes, vertex 0 an extending vertex.
fn golden(g: GroupFamily) -> Vec<Vec<u32>> {
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let n = match g {
        GroupFamily::Cyclic(2) => {
            return vec![vec![0, 2], vec![2, 0]];
        }
        GroupFamily::Cyclic(m) => {
            for i in 0..m {
                edges.push((i, (i + 1) % m));
            }
            m
        }
        GroupFamily::BinaryDihedral(m) => {
            // D_{m+2}: a chain 2..=m+1 (as branch points 2 and m) with two
            // leaves at each end
            let r = m + 2;
            edges.push((0, 2));
            edges.push((1, 2));
            for i in 2..r - 2 {
                edges.push((i, i + 1));
            }
            edges.push((r - 2, r - 1));
            edges.push((r - 2, r));
            r + 1
        }
        GroupFamily::BinaryTetrahedral => star(&[2, 2, 2], &mut edges),
        GroupFamily::BinaryOctahedral => star(&[3, 3, 1], &mut edges),
        GroupFamily::BinaryIcosahedral => star(&[5, 2, 1], &mut edges),
    };
    let mut a = vec![vec![0; n]; n];
    for (x, y) in edges {
        a[x][y] += 1;
        a[y][x] += 1;
    }
    a
}

/// A centre with arms of the given lengths; vertex 0 is the tip of the first.
fn star(arms: &[usize], edges: &mut Vec<(usize, usize)>) -> usize {
    let centre = arms[0];
    // first arm: 0 - 1 - ... - centre
    for i in 0..arms[0] {
        edges.push((i, i + 1));
    }
    let mut next = centre + 1;
    for &len in &arms[1..] {
        let mut prev = centre;
        for _ in 0..len {
            edges.push((prev, next));
            prev = next;
            next += 1;
        }
    }
    next
}

/// Some bijection fixing 0 that carries `a` onto `b`.
fn isomorphic_fixing_zero(a: &[Vec<u32>], b: &[Vec<u32>]) -> bool {
    let n = a.len();
    if b.len() != n {
        return false;
    }
    fn extend(a: &[Vec<u32>], b: &[Vec<u32>], perm: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
        let k = perm.len();
        if k == a.len() {
            return true;
        }
        for c in 0..a.len() {
            if used[c] {
                continue;
            }
            if a[k][k] != b[c][c] || (0..k).any(|j| a[k][j] != b[c][perm[j]]) {
                continue;
            }
            perm.push(c);
            used[c] = true;
            if extend(a, b, perm, used) {
                return true;
            }
            perm.pop();
            used[c] = false;
        }
        false
    }
    let mut used = vec![false; n];
    used[0] = true;
    extend(a, b, &mut vec![0], &mut used)
}

fn criterion_1() -> Outcome {
    let mut groups: Vec<GroupFamily> = (2..=8).map(GroupFamily::Cyclic).collect();
    groups.extend((2..=8).map(GroupFamily::BinaryDihedral));
    groups.extend([
        GroupFamily::BinaryTetrahedral,
        GroupFamily::BinaryOctahedral,
        GroupFamily::BinaryIcosahedral,
    ]);
    for &g in &groups {
        let m = match build_mckay(g) {
            Ok(m) => m,
            Err(e) => return fail(format!("{g}: {e}")),
        };
        if !isomorphic_fixing_zero(&m.adjacency, &golden(g)) {
            return fail(format!("{g}: adjacency differs from the affine diagram"));
        }
        for k in 0..m.num_vertices() {
            let s: u32 = (0..m.num_vertices())
                .map(|j| m.adjacency[k][j] * m.irrep_dims[j])
                .sum();
            if s != 2 * m.irrep_dims[k] {
                return fail(format!("{g}: McKay equality fails at {k}"));
            }
        }
        let sq: u64 = m.irrep_dims.iter().map(|&d| (d * d) as u64).sum();
        if sq != g.order() || m.irrep_dims[0] != 1 {
            return fail(format!("{g}: sum of squares {sq} != {}", g.order()));
        }
    }
    pass(format!("{} groups", groups.len()))
}

// ---- criterion 2 -------------------------------------------------------

fn random_group(rng: &mut ChaCha8Rng) -> GroupFamily {
    match rng.random_range(0..5) {
        0 => GroupFamily::Cyclic(rng.random_range(2..=8)),
        1 => GroupFamily::BinaryDihedral(rng.random_range(2..=8)),
        2 => GroupFamily::BinaryTetrahedral,
        3 => GroupFamily::BinaryOctahedral,
        _ => GroupFamily::BinaryIcosahedral,
    }
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut families = std::collections::HashSet::new();
    for case in 0..500 {
        let g = random_group(&mut rng);
        families.insert(core::mem::discriminant(&g));
        let m = build_mckay(g).unwrap();
        let nv = m.num_vertices();
        let mut set = BTreeSet::new();
        while set.is_empty() {
            for k in 0..nv {
                if rng.random_bool(0.3) {
                    set.insert(k);
                }
            }
        }
        let n: BTreeMap<usize, u32> = set.iter().map(|&i| (i, rng.random_range(0..=4))).collect();
        let mut v = DimVector::framed(1, vec![0; nv]);
        for (&i, &x) in &n {
            v.nodes[i] = x;
        }
        let vp = match construct_vprime(&m, &n, &v) {
            Ok(vp) => vp,
            Err(e) => return fail(format!("case {case} {g} {n:?}: {e}")),
        };
        if !in_v(&m, &n, &vp.v) || !v.le(&vp.v) {
            return fail(format!(
                "case {case} {g} {n:?}: {} not in V or not above v",
                vp.v
            ));
        }
        if vp.n > 0 {
            let k: Vec<usize> = (0..nv).filter(|x| !set.contains(x)).collect();
            let path = shortest_path_data(&m, 0, &set).unwrap();
            let smaller = vprime_at(&m, &k, &path, &vp.k_prime, vp.n - 1, &v);
            if smaller.is_some_and(|w| in_v(&m, &n, &w) && v.le(&w)) {
                return fail(format!(
                    "case {case} {g} {n:?}: N = {} is not minimal",
                    vp.n
                ));
            }
        }
    }
    if families.len() != 5 {
        return fail("not every family was drawn".into());
    }
    pass("500 instances".into())
}

// ---- criterion 3 -------------------------------------------------------

fn criterion_3() -> Outcome {
    let mut groups: Vec<GroupFamily> = (2..=9).map(GroupFamily::Cyclic).collect();
    groups.extend((2..=6).map(GroupFamily::BinaryDihedral));
    groups.extend([
        GroupFamily::BinaryTetrahedral,
        GroupFamily::BinaryOctahedral,
        GroupFamily::BinaryIcosahedral,
    ]);
    let mut blocks = 0;
    for g in groups {
        let m = build_mckay(g).unwrap();
        let n = m.num_vertices();
        assert!(n <= 9);
        for mask in 1u32..(1 << n) - 1 {
            let k: BTreeSet<usize> = (0..n).filter(|b| mask >> b & 1 == 1).collect();
            let bs = match cartan_blocks(&m, &k) {
                Ok(b) => b,
                Err(e) => return fail(format!("{g} {k:?}: {e}")),
            };
            for b in bs {
                blocks += 1;
                let c = b.to_matrix();
                let (nonneg, inv) = cartan_inverse_nonneg(&b).unwrap();
                if c.mul(&inv) != Matrix::identity(c.rows()) || !nonneg {
                    return fail(format!("{g} block {:?}", b.vertices));
                }
            }
        }
    }
    pass(format!("{blocks} blocks"))
}

// ---- criterion 4 -------------------------------------------------------

/// Counts by content of colored partitions, written out by hand from a
/// separate enumeration.
const Z2_COUNTS: &[(u32, &[((u32, u32), usize)])] = &[
    (0, &[((0, 0), 1)]),
    (1, &[((1, 0), 1)]),
    (2, &[((1, 1), 2)]),
    (3, &[((1, 2), 1), ((2, 1), 2)]),
    (4, &[((2, 2), 5)]),
    (5, &[((2, 3), 2), ((3, 2), 5)]),
    (6, &[((3, 3), 10), ((4, 2), 1)]),
];

const PARTITION_NUMBERS: [usize; 7] = [1, 1, 2, 3, 5, 7, 11];

fn criterion_4() -> Outcome {
    for &(n, table) in Z2_COUNTS {
        let mut total = 0;
        for v0 in 0..=n {
            let v = [v0, n - v0];
            let got = enumerate_colored_partitions(2, &v).unwrap().len();
            let want = table
                .iter()
                .find(|((a, b), _)| [*a, *b] == v)
                .map_or(0, |&(_, c)| c);
            if got != want {
                return fail(format!("Z/2 content {v:?}: {got} != {want}"));
            }
            total += got;
        }
        if total != PARTITION_NUMBERS[n as usize] {
            return fail(format!("Z/2 n = {n}: total {total}"));
        }
    }
    let z3 = enumerate_colored_partitions(3, &[1, 1, 1]).unwrap().len();
    if z3 != 3 {
        return fail(format!("Z/3 (1,1,1): {z3}"));
    }
    pass("Z/2 up to n = 6 and Z/3 (1,1,1) = 3".into())
}

// ---- criterion 5 -------------------------------------------------------

/// A weight in the open positive cone pairing to zero with `(1, v)`.
fn interior_weight(v: &DimVector) -> Stability {
    let nodes: Vec<Q> = (0..v.num_nodes()).map(|k| q_int(k as i64 + 1)).collect();
    let s: i64 = v
        .nodes
        .iter()
        .enumerate()
        .map(|(k, &x)| (k as i64 + 1) * x as i64)
        .sum();
    Stability {
        inf: q_int(-s),
        nodes,
    }
}

fn criterion_5() -> Outcome {
    let mut count = 0;
    for m in 2..=4 {
        let q = frame(&build_mckay(GroupFamily::Cyclic(m)).unwrap());
        for n in 0..=6 {
            for parts in partitions(n) {
                let p = ColoredPartition::new(parts, m).unwrap();
                let rep = partition_to_rep(&p, &q).unwrap();
                count += 1;
                if !rep.moment_residual().iter().all(Matrix::is_zero) || !rep.is_a_module() {
                    return fail(format!("m = {m} {:?}: not flat", p.parts));
                }
                if !rep.framing_closure().is_full() {
                    return fail(format!("m = {m} {:?}: not cyclic at inf", p.parts));
                }
                let theta = interior_weight(&rep.dim_vector());
                if !matches!(rep.verdict(&theta), Ok(Verdict::Stable)) {
                    return fail(format!("m = {m} {:?}: not stable", p.parts));
                }
            }
        }
    }
    pass(format!("{count} partition modules"))
}

// ---- criterion 6 -------------------------------------------------------

fn random_fp<const P: u32>(rng: &mut ChaCha8Rng) -> Fp<P> {
    Fp::new(rng.random_range(0..P as i64))
}

fn perturb<const P: u32>(
    rep: &Representation<Fp<P>>,
    rng: &mut ChaCha8Rng,
) -> Representation<Fp<P>> {
    let mut out = rep.clone();
    let ids: Vec<usize> = (0..rep.maps().len())
        .filter(|&a| rep.map(a).rows() * rep.map(a).cols() > 0)
        .collect();
    if ids.is_empty() {
        return out;
    }
    for _ in 0..rng.random_range(1..=3) {
        let a = ids[rng.random_range(0..ids.len())];
        let mut m = out.map(a).clone();
        let (r, c) = (rng.random_range(0..m.rows()), rng.random_range(0..m.cols()));
        m.set(r, c, random_fp::<P>(rng));
        out.set_map(a, m).unwrap();
    }
    out
}

fn weights(m: &McKayData, v: &DimVector, rng: &mut ChaCha8Rng) -> Vec<Stability> {
    let n = m.num_vertices();
    let mut out = Vec::new();
    for _ in 0..2 {
        let mut set = BTreeSet::new();
        while set.is_empty() {
            set = (0..n).filter(|_| rng.random_bool(0.5)).collect();
        }
        if v.inf == Some(1) {
            out.push(theta_i(m, &set, v).unwrap());
        }
        // general weights with the same support
        let nodes: Vec<Q> = (0..n)
            .map(|k| {
                if set.contains(&k) {
                    q_int(rng.random_range(1..=3))
                } else {
                    Q::zero()
                }
            })
            .collect();
        let pair: Q = nodes
            .iter()
            .zip(&v.nodes)
            .map(|(w, &x)| w * q_int(x as i64))
            .sum();
        let inf = if v.inf.unwrap_or(0) > 0 {
            -pair / q_int(v.inf.unwrap() as i64)
        } else {
            Q::zero()
        };
        out.push(Stability { inf, nodes });
    }
    out
}

fn gate<const P: u32>(
    m: &McKayData,
    rep: &Representation<Fp<P>>,
    rng: &mut ChaCha8Rng,
    checks: &mut usize,
) -> Result<(), String> {
    for theta in weights(m, &rep.dim_vector(), rng) {
        let fast = rep.verdict(&theta).map_err(|e| e.to_string())?;
        let slow = brute_force_stability(rep, &theta).map_err(|e| e.to_string())?;
        *checks += 1;
        if fast != slow {
            return Err(format!(
                "{} over F{P} at {:?}: {fast} vs brute force {slow}",
                rep.dim_vector(),
                theta
            ));
        }
    }
    Ok(())
}

fn corpus_for<const P: u32>(
    rng: &mut ChaCha8Rng,
    reps: &mut usize,
    checks: &mut usize,
) -> Result<(), String> {
    for mm in 2..=3 {
        let mckay = build_mckay(GroupFamily::Cyclic(mm)).unwrap();
        let q = frame(&mckay);
        for n in 0..=5u32 {
            for parts in partitions(n) {
                let p = ColoredPartition::new(parts, mm).unwrap();
                let Some(rep) = partition_to_rep(&p, &q).unwrap().reduce_mod::<P>() else {
                    continue;
                };
                let mut family = vec![rep.clone()];
                // paddings by vertex simples up to total dimension 6
                let room = 6 - rep.total_dim();
                for k in 0..mm {
                    for extra in 1..=room.min(2) {
                        let mut mult = vec![0u32; mm];
                        mult[k] = extra as u32;
                        family.push(rep.pad_with_simples(&mult).unwrap());
                    }
                }
                let perturbed: Vec<_> = family.iter().map(|r| perturb(r, rng)).collect();
                family.extend(perturbed);
                for r in family {
                    assert!(r.total_dim() <= 6);
                    *reps += 1;
                    gate(&mckay, &r, rng, checks)?;
                }
            }
        }
    }
    Ok(())
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut reps, mut checks) = (0, 0);
    if let Err(e) = corpus_for::<2>(&mut rng, &mut reps, &mut checks) {
        return fail(e);
    }
    if let Err(e) = corpus_for::<3>(&mut rng, &mut reps, &mut checks) {
        return fail(e);
    }
    if reps < 200 {
        return fail(format!("corpus has only {reps} representations"));
    }
    pass(format!("{reps} representations, {checks} verdicts agree"))
}

// ---- criteria 7 and 8 --------------------------------------------------

fn smoke_cases() -> Vec<(GroupFamily, BTreeMap<usize, u32>)> {
    let mut cases: Vec<_> = (0..=4)
        .map(|n0| (GroupFamily::Cyclic(2), [(0, n0)].into_iter().collect()))
        .collect();
    cases.push((
        GroupFamily::Cyclic(3),
        [(0, 1), (1, 1), (2, 1)].into_iter().collect(),
    ));
    cases
}

fn stable_certificates(r: &PipelineReport) -> Vec<&Certificate> {
    let mut out = Vec::new();
    if let Some(c) = &r.semistable {
        if c.verdict == Verdict::Stable {
            out.push(c);
        }
    }
    if let Some((_, c)) = r.v_tilde.as_ref().and_then(|o| o.best()) {
        out.push(c);
    }
    out
}

fn check_smoke(r: &PipelineReport, m: &McKayData, residuals: &mut Vec<f64>) -> Result<(), String> {
    let tag = format!("{} {:?}", r.group, r.n_i);
    if !r.invariants_ok() || !r.errors.is_empty() {
        return Err(format!(
            "{tag}: errors {:?} {:?}",
            r.errors, r.invariant_violations
        ));
    }
    if r.quiver_variety != Nonemptiness::Nonempty || r.moduli != Nonemptiness::Nonempty {
        return Err(format!("{tag}: non-emptiness not certified"));
    }
    let ss = r
        .semistable
        .as_ref()
        .ok_or(format!("{tag}: no certificate"))?;
    ss.verify().map_err(|e| format!("{tag}: {e}"))?;
    let (_, witness) = r
        .v_tilde
        .as_ref()
        .and_then(|o| o.best())
        .ok_or(format!("{tag}: no stable witness"))?;
    witness.verify().map_err(|e| format!("{tag}: {e}"))?;
    if !r.padded_verdict.is_some_and(Verdict::is_semistable) {
        return Err(format!("{tag}: padding lost semistability"));
    }
    let rc = r
        .restriction
        .as_ref()
        .ok_or(format!("{tag}: no restriction"))?;
    if rc.eta_verdict != Verdict::Stable
        || !rc.dims_ok
        || rc.module.inf != 1
        || rc.module.dims != r.n_i
    {
        return Err(format!(
            "{tag}: restriction {:?} {} {:?}",
            rc.eta_verdict, rc.module.inf, rc.module.dims
        ));
    }
    // the numeric solver on its own at v'
    let v = &r.vprime.as_ref().unwrap().v;
    let theta = r.theta.as_ref().unwrap();
    let cfg = SolverConfig::default();
    let sol = solve_moment_map(&frame(m), v, theta, Verdict::Semistable, &cfg, &Sequential)
        .ok_or(format!("{tag}: numeric solver found nothing at {v}"))?;
    residuals.push(sol.residual_sq.sqrt());
    residuals.extend(r.numeric_residuals_sq.iter().map(|x| x.sqrt()));
    Ok(())
}

fn criteria_7_and_8() -> (bool, bool) {
    let mut reports = Vec::new();
    let ok8 = timed(8, "pipeline smoke", Some(LIMIT_8), || {
        let mut residuals = Vec::new();
        for (g, n) in smoke_cases() {
            let m = build_mckay(g).unwrap();
            let r = run_pipeline(g, &n, &PipelineConfig::default(), &Sequential);
            if let Err(e) = check_smoke(&r, &m, &mut residuals) {
                return fail(e);
            }
            reports.push(r);
        }
        let worst = residuals.iter().cloned().fold(0.0, f64::max);
        if worst > RESIDUAL_TOL {
            return fail(format!("numeric residual {worst:e} above {RESIDUAL_TOL:e}"));
        }
        pass(format!(
            "{} runs, {} numeric points, worst residual {worst:.1e}",
            reports.len(),
            residuals.len()
        ))
    });

    // more certificates from other types
    for (g, n) in [
        (GroupFamily::BinaryDihedral(2), vec![(0, 1)]),
        (GroupFamily::Cyclic(4), vec![(0, 2), (2, 1)]),
        (GroupFamily::BinaryTetrahedral, vec![(0, 1)]),
        (GroupFamily::BinaryDihedral(4), vec![(0, 1), (3, 1)]),
    ] {
        let n: BTreeMap<usize, u32> = n.into_iter().collect();
        reports.push(run_pipeline(g, &n, &PipelineConfig::default(), &Sequential));
    }
    let ok7 = timed(7, "Vnj inequality on stable certificates", None, || {
        let mut seen = 0;
        for r in &reports {
            let m = build_mckay(r.group).unwrap();
            let set: BTreeSet<usize> = r.n_i.keys().copied().collect();
            for c in stable_certificates(r) {
                seen += 1;
                let bad = vnj_violations(&m, &set, &c.dim_vector());
                if !bad.is_empty() {
                    return fail(format!(
                        "{} {}: violated at {bad:?}",
                        r.group,
                        c.dim_vector()
                    ));
                }
            }
            if let Some(v) = r.vnj.iter().find(|v| !v.violations.is_empty()) {
                return fail(format!(
                    "{}: report flags {} at {:?}",
                    r.group, v.v, v.violations
                ));
            }
        }
        if seen == 0 {
            return fail("no stable certificates".into());
        }
        pass(format!(
            "{seen} stable certificates from {} runs, zero violations",
            reports.len()
        ))
    });
    (ok7, ok8)
}

// ---- criterion 9 -------------------------------------------------------

fn random_element(
    alg: &TruncatedAlgebra,
    pieces: &[(Vertex, Vertex)],
    rng: &mut ChaCha8Rng,
) -> Element {
    let basis: Vec<_> = alg
        .basis()
        .into_iter()
        .filter(|(t, h, _, _)| pieces.contains(&(*t, *h)))
        .collect();
    let mut x = Element::new();
    for _ in 0..rng.random_range(0..=3) {
        if basis.is_empty() {
            break;
        }
        let (_, _, _, p) = &basis[rng.random_range(0..basis.len())];
        let c = q_int(rng.random_range(-2..=2));
        x = add_elements(&x, &scale_element(&alg.reduce_path(p), &c));
    }
    x
}

fn criterion_9() -> Outcome {
    let mut tables = 0;
    for m in [2, 3] {
        let mckay = build_mckay(GroupFamily::Cyclic(m)).unwrap();
        let q: FramedQuiver = frame(&mckay);
        for mask in 1u32..(1 << m) {
            let set: BTreeSet<usize> = (0..m).filter(|b| mask >> b & 1 == 1).collect();
            let t = match decomposition_table(&q, &set, 6) {
                Ok(t) => t,
                Err(e) => return fail(format!("A{} {set:?}: {e}", m - 1)),
            };
            tables += 1;
            if !t.holds() {
                return fail(format!("A{} {set:?}: {t:?}", m - 1));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut triples = 0;
    for m in [2, 3] {
        let q = frame(&build_mckay(GroupFamily::Cyclic(m)).unwrap());
        let set: BTreeSet<usize> = [0].into_iter().chain((m == 3).then_some(2)).collect();
        let b = TruncatedAlgebra::new(&q, AlgebraKind::B, &set, 6).unwrap();
        let bi: Vec<(Vertex, Vertex)> = set
            .iter()
            .flat_map(|&i| set.iter().map(move |&j| (Vertex::Node(i), Vertex::Node(j))))
            .collect();
        let ri: Vec<(Vertex, Vertex)> = set
            .iter()
            .map(|&i| (Vertex::Node(0), Vertex::Node(i)))
            .collect();
        for _ in 0..500 {
            let mut draw = || TernaryElement {
                b: random_element(&b, &bi, &mut rng),
                r: random_element(&b, &ri, &mut rng),
                c: q_int(rng.random_range(-2..=2)),
            };
            let (x, y, z) = (draw(), draw(), draw());
            let left = ternary_multiply(&b, &ternary_multiply(&b, &x, &y), &z);
            let right = ternary_multiply(&b, &x, &ternary_multiply(&b, &y, &z));
            triples += 1;
            if left != right {
                return fail(format!("A{}: associativity fails", m - 1));
            }
        }
        let one = TernaryElement::one(&b);
        if ternary_multiply(&b, &one, &one) != one || !one.c.is_one() {
            return fail("unit".into());
        }
    }
    pass(format!(
        "{tables} decomposition tables to degree 6, {triples} triples"
    ))
}

fn main() {
    let mut ok = true;
    ok &= timed(1, "McKay construction", Some(LIMIT_1), criterion_1);
    ok &= timed(2, "v' algorithm", Some(LIMIT_2), criterion_2);
    ok &= timed(3, "Cartan positivity", Some(LIMIT_3), criterion_3);
    ok &= timed(4, "oracle counts", Some(LIMIT_4), criterion_4);
    ok &= timed(5, "exact flatness", Some(LIMIT_5), criterion_5);
    ok &= timed(6, "stability oracle gate", Some(LIMIT_6), criterion_6);
    let (ok7, ok8) = criteria_7_and_8();
    ok &= ok7 && ok8;
    ok &= timed(
        9,
        "cornered algebra decomposition",
        Some(LIMIT_9),
        criterion_9,
    );
    if !ok {
        std::process::exit(1);
    }
}
