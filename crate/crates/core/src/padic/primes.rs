use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Prime;

/// Trial division stops at this prime by default.
pub const DEFAULT_TRIAL_BOUND: u64 = 1_000_000;

/// Primes dividing a list of integers, found by trial division.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RelevantPrimes {
    pub primes: Vec<Prime>,
    /// Cofactors left after trial division; composite or prime, but with
    /// no factor below the bound.
    pub unresolved: Vec<BigInt>,
}

impl RelevantPrimes {
    pub fn is_complete(&self) -> bool {
        self.unresolved.is_empty()
    }
}

fn sieve(bound: u64) -> Vec<u64> {
    let n = bound as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Every prime dividing some nonzero entry of `values`, plus `extra`.
/// A cofactor below `bound²` is itself prime and is included; larger
/// cofactors are reported as unresolved.
pub fn relevant_primes(values: &[BigInt], extra: &[Prime], bound: u64) -> RelevantPrimes {
    let mut found: Vec<u64> = extra.iter().map(|p| p.get()).collect();
    let mut unresolved = Vec::new();
    let mut table: Option<Vec<u64>> = None;
    for v in values {
        let mut x = v.abs();
        if x.is_zero() {
            continue;
        }
        let mut i = 0;
        while !x.is_one() {
            let primes = table.get_or_insert_with(|| sieve(bound));
            let Some(&p) = primes.get(i) else { break };
            let pb = BigInt::from(p);
            if &pb * &pb > x {
                break;
            }
            let (q, r) = x.div_rem(&pb);
            if r.is_zero() {
                found.push(p);
                x = q;
                while x.is_multiple_of(&pb) {
                    x /= &pb;
                }
            }
            i += 1;
        }
        if x.is_one() {
            continue;
        }
        let b = BigInt::from(bound);
        match x.to_u64() {
            Some(q) if x < &b * &b => found.push(q),
            _ => unresolved.push(x),
        }
    }
    found.sort_unstable();
    found.dedup();
    let primes = found
        .into_iter()
        .map(|p| Prime::new(p).expect("trial division yields primes"))
        .collect();
    RelevantPrimes { primes, unresolved }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ps(r: &RelevantPrimes) -> Vec<u64> {
        r.primes.iter().map(|p| p.get()).collect()
    }

    #[test]
    fn small_values() {
        let r = relevant_primes(&[BigInt::from(-12), BigInt::from(35), BigInt::zero()], &[], 1000);
        assert_eq!(ps(&r), [2, 3, 5, 7]);
        assert!(r.is_complete());
        let r = relevant_primes(&[BigInt::from(1)], &[Prime::new(31).unwrap()], 1000);
        assert_eq!(ps(&r), [31]);
    }

    #[test]
    fn large_cofactor_is_flagged() {
        // 1000003 · 1000033 > 1000², with no small factor
        let x = BigInt::from(1_000_003u64) * BigInt::from(1_000_033u64) * 4;
        let r = relevant_primes(&[x], &[], 1000);
        assert_eq!(ps(&r), [2]);
        assert_eq!(r.unresolved, [BigInt::from(1_000_003u64) * BigInt::from(1_000_033u64)]);
        // a prime cofactor below bound² is accepted
        let r = relevant_primes(&[BigInt::from(2 * 999_983u64)], &[], 1000);
        assert_eq!(ps(&r), [2, 999_983]);
    }
}
