//! Exact arithmetic in the cyclotomic field ℚ(ζ_N), enough to evaluate
//! character inner products of cyclic and binary dihedral groups.

use alloc::vec;
use alloc::vec::Vec;

use crate::field::{q_int, Field, Q};

/// Integer coefficients of the N-th cyclotomic polynomial, constant term first.
pub fn cyclotomic_polynomial(n: usize) -> Vec<i64> {
    assert!(n >= 1);
    // x^n - 1
    let mut num = vec![0i64; n + 1];
    num[0] = -1;
    num[n] = 1;
    for d in 1..n {
        if n % d == 0 {
            num = divide_monic(&num, &cyclotomic_polynomial(d));
        }
    }
    num
}

fn divide_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut quot = vec![0i64; rem.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dd];
        quot[k] = c;
        for (j, &dj) in den.iter().enumerate() {
            rem[k + j] -= c * dj;
        }
    }
    debug_assert!(rem.iter().all(|&x| x == 0), "inexact division");
    quot
}

/// The field ℚ(ζ_N), elements stored as coefficient vectors of length φ(N)
/// in the power basis 1, ζ, …, ζ^{φ(N)-1}.
#[derive(Clone, Debug)]
pub struct CyclotomicField {
    n: usize,
    phi: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Cyc(Vec<Q>);

impl CyclotomicField {
    pub fn new(n: usize) -> Self {
        CyclotomicField {
            n,
            phi: cyclotomic_polynomial(n),
        }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    fn degree(&self) -> usize {
        self.phi.len() - 1
    }

    pub fn zero(&self) -> Cyc {
        Cyc(vec![Q::zero(); self.degree()])
    }

    pub fn rational(&self, x: Q) -> Cyc {
        let mut c = self.zero();
        c.0[0] = x;
        c
    }

    pub fn int(&self, x: i64) -> Cyc {
        self.rational(q_int(x))
    }

    /// ζ^k for any integer k.
    pub fn zeta_pow(&self, k: i64) -> Cyc {
        let e = k.rem_euclid(self.n as i64) as usize;
        let mut coeffs = vec![Q::zero(); e + 1];
        coeffs[e] = Q::one();
        self.reduce(coeffs)
    }

    fn reduce(&self, mut coeffs: Vec<Q>) -> Cyc {
        let d = self.degree();
        while coeffs.len() > d {
            let top = coeffs.pop().expect("nonempty");
            if top.is_zero() {
                continue;
            }
            let shift = coeffs.len() - d;
            for (j, &pj) in self.phi.iter().take(d).enumerate() {
                coeffs[shift + j] = coeffs[shift + j].sub(&top.mul(&q_int(pj)));
            }
        }
        coeffs.resize(d, Q::zero());
        Cyc(coeffs)
    }

    pub fn add(&self, a: &Cyc, b: &Cyc) -> Cyc {
        Cyc(a.0.iter().zip(&b.0).map(|(x, y)| x.add(y)).collect())
    }

    pub fn mul(&self, a: &Cyc, b: &Cyc) -> Cyc {
        let mut out = vec![Q::zero(); a.0.len() + b.0.len()];
        for (i, x) in a.0.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.0.iter().enumerate() {
                out[i + j] = out[i + j].add(&x.mul(y));
            }
        }
        self.reduce(out)
    }

    pub fn scale(&self, a: &Cyc, s: &Q) -> Cyc {
        Cyc(a.0.iter().map(|x| x.mul(s)).collect())
    }

    /// Complex conjugation, ζ ↦ ζ^{-1}.
    pub fn conj(&self, a: &Cyc) -> Cyc {
        let mut out = self.zero();
        for (k, c) in a.0.iter().enumerate() {
            if !c.is_zero() {
                out = self.add(&out, &self.scale(&self.zeta_pow(-(k as i64)), c));
            }
        }
        out
    }

    /// The value as a rational, if it lies in ℚ.
    pub fn as_rational(&self, a: &Cyc) -> Option<Q> {
        if a.0.iter().skip(1).all(Field::is_zero) {
            Some(a.0[0].clone())
        } else {
            None
        }
    }
}

/// A class function on a group, given on conjugacy classes.
#[derive(Clone, Debug)]
pub struct ClassFunction(pub Vec<Cyc>);

/// Conjugacy-class sizes together with the field the character values live in.
#[derive(Clone, Debug)]
pub struct ClassData {
    pub field: CyclotomicField,
    pub sizes: Vec<u64>,
}

impl ClassData {
    pub fn group_order(&self) -> u64 {
        self.sizes.iter().sum()
    }

    /// `(1/|G|) Σ_g χ(g) conj(ψ(g))`, which must be rational.
    pub fn inner_product(&self, chi: &ClassFunction, psi: &ClassFunction) -> Option<Q> {
        let f = &self.field;
        let mut acc = f.zero();
        for ((size, a), b) in self.sizes.iter().zip(&chi.0).zip(&psi.0) {
            let term = f.mul(a, &f.conj(b));
            acc = f.add(&acc, &f.scale(&term, &q_int(*size as i64)));
        }
        let total = f.as_rational(&acc)?;
        Some(total.mul(&Q::from_i64(self.group_order() as i64).inv()?))
    }

    pub fn product(&self, chi: &ClassFunction, psi: &ClassFunction) -> ClassFunction {
        ClassFunction(
            chi.0
                .iter()
                .zip(&psi.0)
                .map(|(a, b)| self.field.mul(a, b))
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn roots_of_unity_close_up() {
        for n in [3usize, 5, 8, 12] {
            let f = CyclotomicField::new(n);
            let z = f.zeta_pow(1);
            let mut p = f.int(1);
            for _ in 0..n {
                p = f.mul(&p, &z);
            }
            assert_eq!(p, f.int(1));
            // the sum of all n-th roots of unity vanishes
            let mut s = f.zero();
            for k in 0..n as i64 {
                s = f.add(&s, &f.zeta_pow(k));
            }
            assert_eq!(s, f.zero());
        }
    }

    #[test]
    fn conjugation_inverts_roots() {
        let f = CyclotomicField::new(7);
        let z3 = f.zeta_pow(3);
        assert_eq!(f.mul(&z3, &f.conj(&z3)), f.int(1));
    }
}
