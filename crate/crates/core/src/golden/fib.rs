use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Memoized Fibonacci numbers with `F_0 = 0`, `F_1 = F_2 = 1`.
#[derive(Debug, Clone)]
pub struct FibCache {
    values: Vec<BigInt>,
}

impl Default for FibCache {
    fn default() -> Self {
        Self::new()
    }
}

impl FibCache {
    pub fn new() -> Self {
        Self {
            values: vec![BigInt::zero(), BigInt::one()],
        }
    }

    pub fn get(&mut self, n: usize) -> &BigInt {
        while self.values.len() <= n {
            let len = self.values.len();
            let next = &self.values[len - 1] + &self.values[len - 2];
            self.values.push(next);
        }
        &self.values[n]
    }
}

/// `F_n`, computed directly.
pub fn fib(n: usize) -> BigInt {
    FibCache::new().get(n).clone()
}

/// `F_n` as a machine integer; `None` once it overflows.
pub fn fib_u64(n: usize) -> Option<u64> {
    let (mut a, mut b) = (0u64, Some(1u64));
    for _ in 0..n {
        let current = b?;
        b = a.checked_add(current);
        a = current;
    }
    Some(a)
}
