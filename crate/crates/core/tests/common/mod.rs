//! High-precision numeric oracles shared by the integration tests.

use num_bigint::{BigInt, Sign};

pub const PRECISION: usize = 256;

/// Integer square root by Newton iteration, independent of the library.
pub fn isqrt(n: &BigInt) -> BigInt {
    assert!(n.sign() != Sign::Minus);
    if n < &BigInt::from(2) {
        return n.clone();
    }
    let mut x = BigInt::from(1) << ((n.bits() / 2 + 1) as usize);
    loop {
        let y = (&x + n / &x) >> 1;
        if y >= x {
            return x;
        }
        x = y;
    }
}

/// `phi * 2^256`, truncated.
pub fn phi_fixed() -> BigInt {
    let one = BigInt::from(1) << PRECISION;
    let sqrt5 = isqrt(&(BigInt::from(5) << (2 * PRECISION)));
    (one + sqrt5) >> 1
}
