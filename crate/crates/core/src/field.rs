//! Scalar fields used by the linear algebra: exact rationals, small prime
//! fields for the brute-force oracle, and `f64` for the numeric solver.

use core::fmt::{self, Debug, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational scalars.
pub type Q = BigRational;

/// Entries with absolute value at or below this are treated as zero in
/// floating-point rank decisions.
pub const FLOAT_ZERO_TOL: f64 = 1e-9;

/// The operations the elimination routines need from a scalar type.
pub trait Field: Clone + PartialEq + Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(n: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Option<Self>;

    /// Pivot preference during elimination. Exact fields only care about
    /// zero versus nonzero; floats prefer the largest magnitude.
    fn magnitude(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            1.0
        }
    }

    fn is_one(&self) -> bool {
        self.sub(&Self::one()).is_zero()
    }
}

impl Field for Q {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
}

impl Field for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(n: i64) -> Self {
        n as f64
    }
    fn is_zero(&self) -> bool {
        abs(*self) <= FLOAT_ZERO_TOL
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        if *self == 0.0 {
            None
        } else {
            Some(1.0 / self)
        }
    }
    fn magnitude(&self) -> f64 {
        abs(*self)
    }
}

/// Floats with a much larger zero threshold. A numeric verdict is only
/// trusted when it agrees with the one computed at [`FLOAT_ZERO_TOL`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Coarse(pub f64);

pub const COARSE_ZERO_TOL: f64 = 1e-5;

impl Field for Coarse {
    fn zero() -> Self {
        Coarse(0.0)
    }
    fn one() -> Self {
        Coarse(1.0)
    }
    fn from_i64(n: i64) -> Self {
        Coarse(n as f64)
    }
    fn is_zero(&self) -> bool {
        abs(self.0) <= COARSE_ZERO_TOL
    }
    fn add(&self, other: &Self) -> Self {
        Coarse(self.0 + other.0)
    }
    fn sub(&self, other: &Self) -> Self {
        Coarse(self.0 - other.0)
    }
    fn mul(&self, other: &Self) -> Self {
        Coarse(self.0 * other.0)
    }
    fn neg(&self) -> Self {
        Coarse(-self.0)
    }
    fn inv(&self) -> Option<Self> {
        (self.0 != 0.0).then(|| Coarse(1.0 / self.0))
    }
    fn magnitude(&self) -> f64 {
        abs(self.0)
    }
}

/// The prime field with `P` elements. Only small primes are used (2 and 3).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fp<const P: u32>(u32);

impl<const P: u32> Fp<P> {
    pub fn new(n: i64) -> Self {
        Fp(n.rem_euclid(P as i64) as u32)
    }

    pub fn value(self) -> u32 {
        self.0
    }

    /// All field elements, in increasing order of representative.
    pub fn elements() -> impl Iterator<Item = Self> {
        (0..P).map(Fp)
    }
}

impl<const P: u32> Debug for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(mod {})", self.0, P)
    }
}

impl<const P: u32> Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u32> Field for Fp<P> {
    fn zero() -> Self {
        Fp(0)
    }
    fn one() -> Self {
        Fp(1 % P)
    }
    fn from_i64(n: i64) -> Self {
        Fp::new(n)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn add(&self, other: &Self) -> Self {
        Fp((self.0 + other.0) % P)
    }
    fn sub(&self, other: &Self) -> Self {
        Fp((self.0 + P - other.0) % P)
    }
    fn mul(&self, other: &Self) -> Self {
        Fp(((self.0 as u64 * other.0 as u64) % P as u64) as u32)
    }
    fn neg(&self) -> Self {
        Fp((P - self.0) % P)
    }
    fn inv(&self) -> Option<Self> {
        if self.0 == 0 {
            return None;
        }
        // Fermat: a^(P-2)
        let mut result = 1u64;
        let mut base = self.0 as u64;
        let mut exp = P - 2;
        while exp > 0 {
            if exp & 1 == 1 {
                result = result * base % P as u64;
            }
            base = base * base % P as u64;
            exp >>= 1;
        }
        Some(Fp(result as u32))
    }
}

pub type F2 = Fp<2>;
pub type F3 = Fp<3>;

pub fn q(num: i64, den: i64) -> Q {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn q_int(n: i64) -> Q {
    BigRational::from_integer(BigInt::from(n))
}

pub fn q_to_f64(x: &Q) -> f64 {
    let n = x.numer().to_f64().unwrap_or(f64::NAN);
    let d = x.denom().to_f64().unwrap_or(f64::NAN);
    n / d
}

/// Reduces a rational modulo `P`; `None` when the denominator is divisible by `P`.
pub fn q_to_fp<const P: u32>(x: &Q) -> Option<Fp<P>> {
    let p = BigInt::from(P);
    let num = (x.numer() % &p + &p) % &p;
    let den = (x.denom() % &p + &p) % &p;
    let den = Fp::<P>::new(den.to_i64()?);
    let inv = den.inv()?;
    Some(Fp::<P>::new(num.to_i64()?).mul(&inv))
}

pub fn abs(x: f64) -> f64 {
    if x < 0.0 {
        -x
    } else {
        x
    }
}

fn floor(x: f64) -> f64 {
    let t = x as i64 as f64;
    if t > x {
        t - 1.0
    } else {
        t
    }
}

/// Best rational approximation of `x` with denominator at most `max_den`,
/// by continued-fraction convergents. `None` for non-finite or huge inputs.
pub fn rationalize(x: f64, max_den: i64) -> Option<Q> {
    if !x.is_finite() || abs(x) > 1e15 {
        return None;
    }
    let (mut p0, mut q0, mut p1, mut q1) = (0i128, 1i128, 1i128, 0i128);
    let mut rest = x;
    for _ in 0..64 {
        let a = floor(rest);
        let ai = a as i128;
        let p2 = ai * p1 + p0;
        let q2 = ai * q1 + q0;
        if q2 > max_den as i128 {
            break;
        }
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        let frac = rest - a;
        if abs(frac) < 1e-12 || abs(x - p1 as f64 / q1 as f64) < 1e-15 {
            break;
        }
        rest = 1.0 / frac;
    }
    if q1 == 0 {
        return None;
    }
    Some(BigRational::new(BigInt::from(p1), BigInt::from(q1)))
}

/// `true` when `x` is a nonnegative rational.
pub fn q_nonneg(x: &Q) -> bool {
    !x.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_inverses() {
        for a in F3::elements().skip(1) {
            assert!(a.mul(&a.inv().unwrap()).is_one());
        }
        assert_eq!(F2::new(-1), F2::new(1));
        assert!(F3::zero().inv().is_none());
    }

    #[test]
    fn rationalize_recovers_simple_fractions() {
        assert_eq!(rationalize(0.75, 100), Some(q(3, 4)));
        assert_eq!(rationalize(-2.5, 10), Some(q(-5, 2)));
        assert_eq!(rationalize(1.0 / 3.0, 1000), Some(q(1, 3)));
        assert_eq!(rationalize(0.0, 1), Some(q(0, 1)));
        assert!(rationalize(f64::NAN, 10).is_none());
    }

    #[test]
    fn reduction_mod_p_respects_denominators() {
        assert_eq!(q_to_fp::<3>(&q(1, 2)), Some(F3::new(2)));
        assert_eq!(q_to_fp::<2>(&q(1, 2)), None);
        assert_eq!(q_to_fp::<3>(&q(-4, 1)), Some(F3::new(2)));
    }
}
