//! Fibonacci numbers with `F_1 = F_2 = 1`.

use num_bigint::BigUint;
use num_traits::{One, Zero};

/// Returns `F_n` with `F_0 = 0`, `F_1 = F_2 = 1`.
pub fn fibonacci(n: usize) -> BigUint {
    let (mut a, mut b) = (BigUint::zero(), BigUint::one());
    for _ in 0..n {
        let next = &a + &b;
        a = std::mem::replace(&mut b, next);
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        let got: Vec<u64> = (0..12)
            .map(|n| fibonacci(n).try_into().unwrap())
            .collect();
        assert_eq!(got, vec![0, 1, 1, 2, 3, 5, 8, 13, 21, 34, 55, 89]);
    }

    #[test]
    fn exceeds_u64() {
        // F_94 is the first Fibonacci number above u64::MAX.
        assert!(fibonacci(94) > BigUint::from(u64::MAX));
        assert_eq!(fibonacci(93), BigUint::from(12200160415121876738u64));
    }
}
