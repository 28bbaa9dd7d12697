//! Prime sets standing in for root classes, and small-integer number theory.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use crate::pc::Int;
use crate::{Error, Result};

/// The set of primes dividing orders of elements of groups in a root class.
///
/// Every residual or separability property computed by this crate depends on
/// the class only through this set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PrimeSet {
    /// Exactly the listed primes.
    Explicit(BTreeSet<u64>),
    /// Every prime except the listed ones.
    AllExcept(BTreeSet<u64>),
    /// Every prime.
    All,
}

impl PrimeSet {
    /// Builds an explicit set. Rejects an empty list and non-primes.
    pub fn explicit<I: IntoIterator<Item = u64>>(primes: I) -> Result<Self> {
        let set: BTreeSet<u64> = primes.into_iter().collect();
        if set.is_empty() {
            return Err(Error::InvalidArgument("prime set must be nonempty".into()));
        }
        check_primes(&set)?;
        Ok(PrimeSet::Explicit(set))
    }

    pub fn all_except<I: IntoIterator<Item = u64>>(primes: I) -> Result<Self> {
        let set: BTreeSet<u64> = primes.into_iter().collect();
        check_primes(&set)?;
        if set.is_empty() {
            Ok(PrimeSet::All)
        } else {
            Ok(PrimeSet::AllExcept(set))
        }
    }

    pub fn single(p: u64) -> Result<Self> {
        Self::explicit([p])
    }

    pub fn contains(&self, p: u64) -> bool {
        match self {
            PrimeSet::Explicit(s) => s.contains(&p),
            PrimeSet::AllExcept(s) => !s.contains(&p),
            PrimeSet::All => true,
        }
    }

    pub fn is_all(&self) -> bool {
        matches!(self, PrimeSet::All)
    }

    /// True when every prime divisor of `n` lies in the set.
    pub fn is_p_number(&self, n: Int) -> bool {
        assert!(n >= 1, "P-numbers are positive");
        factorize(n).iter().all(|&(p, _)| self.contains(p as u64))
    }

    /// True when no prime divisor of `n` lies in the set.
    pub fn is_p_prime_number(&self, n: Int) -> bool {
        assert!(n >= 1, "P'-numbers are positive");
        factorize(n).iter().all(|&(p, _)| !self.contains(p as u64))
    }

    /// Splits `n` into its P-part and P'-part.
    pub fn p_split(&self, n: Int) -> (Int, Int) {
        assert!(n >= 1, "p_split needs a positive integer");
        let mut inside = 1;
        let mut outside = 1;
        for (p, e) in factorize(n) {
            let pe = p.pow(e);
            if self.contains(p as u64) {
                inside *= pe;
            } else {
                outside *= pe;
            }
        }
        (inside, outside)
    }

    pub fn p_part(&self, n: Int) -> Int {
        self.p_split(n).0
    }

    /// Members of the set not exceeding `bound`, ascending.
    pub fn members_up_to(&self, bound: u64) -> Vec<u64> {
        (2..=bound).filter(|&p| is_prime(p as Int) && self.contains(p)).collect()
    }

    /// Smallest member of the set.
    pub fn smallest(&self) -> u64 {
        match self {
            PrimeSet::Explicit(s) => *s.iter().next().expect("nonempty"),
            _ => {
                let mut p = 2;
                while !(is_prime(p as Int) && self.contains(p)) {
                    p += 1;
                }
                p
            }
        }
    }
}

impl fmt::Display for PrimeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |s: &BTreeSet<u64>| {
            let parts: Vec<alloc::string::String> = s.iter().map(|p| alloc::format!("{p}")).collect();
            parts.join(",")
        };
        match self {
            PrimeSet::Explicit(s) => write!(f, "{}", join(s)),
            PrimeSet::AllExcept(s) => write!(f, "all-except:{}", join(s)),
            PrimeSet::All => write!(f, "all"),
        }
    }
}

fn check_primes(set: &BTreeSet<u64>) -> Result<()> {
    match set.iter().find(|&&p| !is_prime(p as Int)) {
        Some(p) => Err(Error::InvalidArgument(alloc::format!("{p} is not prime"))),
        None => Ok(()),
    }
}

pub fn is_prime(n: Int) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorization by trial division, ascending primes.
pub fn factorize(n: Int) -> Vec<(Int, u32)> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn gcd(a: Int, b: Int) -> Int {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: Int, b: Int) -> Int {
    if a == 0 || b == 0 {
        return 0;
    }
    (a / gcd(a, b) * b).abs()
}

/// Returns `(g, s, t)` with `g = gcd(a, b) = s*a + t*b` and `g >= 0`.
pub fn ext_gcd(a: Int, b: Int) -> (Int, Int, Int) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1, 0);
    let (mut t0, mut t1) = (0, 1);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

/// Inverse of `a` modulo `m` when they are coprime.
pub fn mod_inverse(a: Int, m: Int) -> Option<Int> {
    let (g, s, _) = ext_gcd(a.rem_euclid(m), m);
    (g == 1).then(|| s.rem_euclid(m))
}

/// Positive divisors of `n`, ascending.
pub fn divisors(n: Int) -> Vec<Int> {
    let mut ds = alloc::vec![1];
    for (p, e) in factorize(n) {
        let current = ds.clone();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            ds.extend(current.iter().map(|d| d * pk));
        }
    }
    ds.sort_unstable();
    ds
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two() -> PrimeSet {
        PrimeSet::single(2).unwrap()
    }

    #[test]
    fn p_split_examples() {
        assert_eq!(two().p_split(12), (4, 3));
        assert!(two().is_p_number(1));
        assert!(PrimeSet::All.is_p_number(1));
        assert_eq!(PrimeSet::All.p_split(360), (360, 1));
        let odd = PrimeSet::all_except([2]).unwrap();
        assert_eq!(odd.p_split(360), (45, 8));
    }

    #[test]
    fn rejects_bad_sets() {
        assert!(PrimeSet::explicit([]).is_err());
        assert!(PrimeSet::explicit([4]).is_err());
        assert_eq!(PrimeSet::all_except([]).unwrap(), PrimeSet::All);
    }

    #[test]
    fn number_theory_helpers() {
        assert_eq!(factorize(360), alloc::vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(divisors(12), alloc::vec![1, 2, 3, 4, 6, 12]);
        let (g, s, t) = ext_gcd(6, 10);
        assert_eq!((g, 6 * s + 10 * t), (2, 2));
        assert_eq!(mod_inverse(3, 8), Some(3));
        assert_eq!(mod_inverse(2, 8), None);
        assert_eq!(two().members_up_to(10), alloc::vec![2]);
        assert_eq!(PrimeSet::all_except([2, 3]).unwrap().smallest(), 5);
    }

    proptest::proptest! {
        #[test]
        fn p_split_round_trips(n in 1i128..1_000_000, mask in 0u8..16) {
            let chosen: Vec<u64> = [2u64, 3, 5, 7].iter().enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0).map(|(_, p)| *p).collect();
            let set = if chosen.is_empty() { PrimeSet::all_except([2]).unwrap() } else { PrimeSet::explicit(chosen).unwrap() };
            let (a, b) = set.p_split(n);
            proptest::prop_assert_eq!(a * b, n);
            proptest::prop_assert_eq!(gcd(a, b), 1);
            proptest::prop_assert!(set.is_p_number(a));
            proptest::prop_assert!(set.is_p_prime_number(b));
        }
    }
}
