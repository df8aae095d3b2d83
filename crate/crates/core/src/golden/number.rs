use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

/// An exact element `a + b*phi` of `Z[phi]`, `phi = (1 + sqrt 5) / 2`.
///
/// Products reduce with `phi^2 = phi + 1`. Ordering is the real ordering
/// and is decided with integer arithmetic only.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct GoldenNumber {
    a: BigInt,
    b: BigInt,
}

impl GoldenNumber {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>) -> Self {
        Self {
            a: a.into(),
            b: b.into(),
        }
    }

    pub fn integer(a: impl Into<BigInt>) -> Self {
        Self::new(a, 0)
    }

    pub fn zero() -> Self {
        Self::new(0, 0)
    }

    pub fn one() -> Self {
        Self::new(1, 0)
    }

    pub fn phi() -> Self {
        Self::new(0, 1)
    }

    /// `phi^-1 = phi - 1`.
    pub fn phi_inverse() -> Self {
        Self::new(-1, 1)
    }

    /// `sqrt 5 = 2 phi - 1`.
    pub fn sqrt5() -> Self {
        Self::new(-1, 2)
    }

    /// `(-phi)^-n = (1 - phi)^n`.
    pub fn neg_phi_inverse_pow(n: u32) -> Self {
        Self::new(1, -1).pow(n)
    }

    /// `phi^-n = (phi - 1)^n`.
    pub fn phi_inverse_pow(n: u32) -> Self {
        Self::phi_inverse().pow(n)
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    pub fn is_integer(&self) -> bool {
        self.b.is_zero()
    }

    pub fn pow(&self, mut exp: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            exp >>= 1;
        }
        acc
    }

    /// Exact sign as a real number.
    ///
    /// `a + b phi = (c + b sqrt 5) / 2` with `c = 2a + b`; when `c` and `b`
    /// have opposite signs the larger of `c^2` and `5 b^2` wins.
    pub fn signum(&self) -> i8 {
        let c: BigInt = &self.a * 2 + &self.b;
        let sign_of = |x: &BigInt| match x.sign() {
            Sign::Minus => -1i8,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        };
        let (sc, sb) = (sign_of(&c), sign_of(&self.b));
        if sc >= 0 && sb >= 0 {
            return if sc == 0 && sb == 0 { 0 } else { 1 };
        }
        if sc <= 0 && sb <= 0 {
            return -1;
        }
        let c2 = &c * &c;
        let b2 = &self.b * &self.b * 5;
        // c^2 == 5 b^2 has no solution with b != 0
        match (c2.cmp(&b2), sc > 0) {
            (Ordering::Greater, true) | (Ordering::Less, false) => 1,
            _ => -1,
        }
    }

    /// Exact `floor(a + b phi) = a + floor(b phi)`.
    pub fn floor(&self) -> BigInt {
        &self.a + floor_phi_multiple(&self.b)
    }

    /// Exact fractional part, in `[0, 1)`.
    pub fn frac(&self) -> Self {
        Self::new(&self.a - self.floor(), self.b.clone())
    }

    /// Lossy value for display.
    pub fn approx(&self) -> f64 {
        const BITS: u32 = 192;
        let scale = BigInt::one() << BITS;
        let sqrt5 = (BigInt::from(5) << (2 * BITS)).sqrt();
        let twice = &self.a * &scale * 2 + &self.b * &scale + &self.b * sqrt5;
        let (mantissa, shift) = shrink(&twice);
        mantissa * 2f64.powi(shift - BITS as i32 - 1)
    }
}

/// Splits an integer into an `f64` mantissa and a binary exponent so that
/// huge values convert without overflow.
fn shrink(x: &BigInt) -> (f64, i32) {
    let bits = x.bits();
    if bits <= 1000 {
        return (x.to_f64().unwrap_or(0.0), 0);
    }
    let shift = bits - 60;
    ((x >> shift).to_f64().unwrap_or(0.0), shift as i32)
}

/// Exact `floor(k phi)` for any integer `k`.
///
/// For `k >= 0`, `floor(k phi) = (k + isqrt(5 k^2)) div 2`; for `k < 0`,
/// `k phi` is irrational so `floor(k phi) = -floor(-k phi) - 1`.
pub fn floor_phi_multiple(k: &BigInt) -> BigInt {
    match k.sign() {
        Sign::NoSign => BigInt::zero(),
        Sign::Plus => {
            let root: BigInt = (k * k * 5u32).sqrt();
            (k + root).div_floor(&BigInt::from(2))
        }
        Sign::Minus => -floor_phi_multiple(&-k) - 1,
    }
}

/// `floor(k phi)` on machine integers, `k < 2^62`.
pub fn floor_phi_multiple_u64(k: u64) -> u64 {
    assert!(k < 1 << 62, "k too large for the u128 path");
    let k = k as u128;
    ((k + (5 * k * k).sqrt()) / 2) as u64
}

impl PartialOrd for GoldenNumber {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GoldenNumber {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum().cmp(&0)
    }
}

impl fmt::Display for GoldenNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_negative() {
            write!(f, "{} - {}φ", self.a, -&self.b)
        } else {
            write!(f, "{} + {}φ", self.a, self.b)
        }
    }
}

impl Serialize for GoldenNumber {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("GoldenNumber", 3)?;
        st.serialize_field("a", &self.a.to_string())?;
        st.serialize_field("b", &self.b.to_string())?;
        st.serialize_field("approx", &self.approx())?;
        st.end()
    }
}

impl<'a> Add<&'a GoldenNumber> for &'a GoldenNumber {
    type Output = GoldenNumber;
    fn add(self, rhs: &GoldenNumber) -> GoldenNumber {
        GoldenNumber::new(&self.a + &rhs.a, &self.b + &rhs.b)
    }
}

impl<'a> Sub<&'a GoldenNumber> for &'a GoldenNumber {
    type Output = GoldenNumber;
    fn sub(self, rhs: &GoldenNumber) -> GoldenNumber {
        GoldenNumber::new(&self.a - &rhs.a, &self.b - &rhs.b)
    }
}

impl<'a> Mul<&'a GoldenNumber> for &'a GoldenNumber {
    type Output = GoldenNumber;
    /// `(a + b phi)(c + d phi) = (ac + bd) + (ad + bc + bd) phi`.
    fn mul(self, rhs: &GoldenNumber) -> GoldenNumber {
        let bd = &self.b * &rhs.b;
        GoldenNumber::new(
            &self.a * &rhs.a + &bd,
            &self.a * &rhs.b + &self.b * &rhs.a + bd,
        )
    }
}

impl Neg for &GoldenNumber {
    type Output = GoldenNumber;
    fn neg(self) -> GoldenNumber {
        GoldenNumber::new(-&self.a, -&self.b)
    }
}

macro_rules! forward_owned {
    ($($trait:ident $method:ident),*) => {$(
        impl $trait for GoldenNumber {
            type Output = GoldenNumber;
            fn $method(self, rhs: GoldenNumber) -> GoldenNumber {
                (&self).$method(&rhs)
            }
        }
    )*};
}

forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for GoldenNumber {
    type Output = GoldenNumber;
    fn neg(self) -> GoldenNumber {
        -&self
    }
}
