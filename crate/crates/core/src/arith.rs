//! Machine-word modular arithmetic, primality and integer factorization.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (m as i128, (a % m) as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    if r != 1 {
        return None;
    }
    Some(t.rem_euclid(m as i128) as u64)
}

/// `p^e`, or `None` on `u64` overflow.
pub fn checked_pow(p: u64, e: u32) -> Option<u64> {
    p.checked_pow(e)
}

/// Deterministic Miller-Rabin for all `u64`.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primes `p ≤ n` in increasing order.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    (2..=n).filter(|&p| is_prime_u64(p)).collect()
}

fn pollard_brent(n: u64, c: u64) -> Option<u64> {
    let f = |x: u64| (mul_mod(x, x, n) + c) % n;
    let (mut y, mut r, mut q) = (2u64, 1u64, 1u64);
    let mut g = 1u64;
    let mut x = y;
    let mut ys = y;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            for _ in 0..(128u64.min(r - k)) {
                y = f(y);
                q = mul_mod(q, x.abs_diff(y), n);
            }
            g = q.gcd(&n);
            k += 128;
        }
        r <<= 1;
        if r > 1 << 26 {
            return None;
        }
    }
    if g == n {
        loop {
            ys = f(ys);
            g = x.abs_diff(ys).gcd(&n);
            if g > 1 {
                break;
            }
        }
    }
    (g != n).then_some(g)
}

/// Prime factorization of a `u64`, ascending.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out: Vec<u64> = Vec::new();
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        while n.is_multiple_of(p) {
            out.push(p);
            n /= p;
        }
    }
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime_u64(m) {
            out.push(m);
            continue;
        }
        let d = (1..).find_map(|c| pollard_brent(m, c)).expect("composite has a factor");
        stack.push(d);
        stack.push(m / d);
    }
    out.sort_unstable();
    let mut grouped: Vec<(u64, u32)> = Vec::new();
    for p in out {
        match grouped.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => grouped.push((p, 1)),
        }
    }
    grouped
}

/// Factorization of a big integer; composites that resisted splitting are
/// returned in `unfactored`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IntFactorization {
    pub primes: Vec<(BigUint, u32)>,
    pub unfactored: Vec<BigUint>,
}

impl IntFactorization {
    pub fn is_complete(&self) -> bool {
        self.unfactored.is_empty()
    }

    /// All positive divisors; `None` if the factorization is incomplete.
    pub fn divisors(&self) -> Option<Vec<BigUint>> {
        if !self.is_complete() {
            return None;
        }
        let mut divs = vec![BigUint::one()];
        for (p, e) in &self.primes {
            let mut next = Vec::with_capacity(divs.len() * (*e as usize + 1));
            for d in &divs {
                let mut pk = d.clone();
                next.push(pk.clone());
                for _ in 0..*e {
                    pk *= p;
                    next.push(pk.clone());
                }
            }
            divs = next;
        }
        divs.sort();
        Some(divs)
    }
}

fn is_probable_prime(n: &BigUint) -> bool {
    if let Some(v) = n.to_u64() {
        return is_prime_u64(v);
    }
    let one = BigUint::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    'witness: for a in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53] {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == nm1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_big(n: &BigUint, c: u32, cap: u64) -> Option<BigUint> {
    let c = BigUint::from(c);
    let f = |x: &BigUint| (x * x + &c) % n;
    let mut x = BigUint::from(2u32);
    let mut y = x.clone();
    for _ in 0..cap {
        x = f(&x);
        y = f(&f(&y));
        let diff = if x > y { &x - &y } else { &y - &x };
        let g = diff.gcd(n);
        if g == *n {
            return None;
        }
        if !g.is_one() {
            return Some(g);
        }
    }
    None
}

pub fn factor_biguint(n: &BigUint) -> IntFactorization {
    let mut out = IntFactorization::default();
    if n.is_zero() || n.is_one() {
        return out;
    }
    let mut primes: Vec<BigUint> = Vec::new();
    let mut m = n.clone();
    for p in 2u32..2000 {
        let bp = BigUint::from(p);
        while (&m % &bp).is_zero() {
            primes.push(bp.clone());
            m /= &bp;
        }
    }
    let mut stack = vec![m];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if let Some(v) = m.to_u64() {
            for (p, e) in factor_u64(v) {
                primes.extend(std::iter::repeat_n(BigUint::from(p), e as usize));
            }
            continue;
        }
        if is_probable_prime(&m) {
            primes.push(m);
            continue;
        }
        match (1..8).find_map(|c| pollard_big(&m, c, 200_000)) {
            Some(d) => {
                stack.push(&m / &d);
                stack.push(d);
            }
            None => out.unfactored.push(m),
        }
    }
    primes.sort();
    for p in primes {
        match out.primes.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.primes.push((p, 1)),
        }
    }
    out
}

pub fn factor_bigint(n: &BigInt) -> IntFactorization {
    factor_biguint(n.magnitude())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_matches_sieve() {
        let sieve: Vec<u64> = (2..2000u64).filter(|&n| (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0)).collect();
        assert_eq!(primes_up_to(1999), sieve);
        assert!(is_prime_u64(18_446_744_073_709_551_557));
        assert!(!is_prime_u64(3_215_031_751));
    }

    #[test]
    fn factor_round_trip() {
        for n in [1u64, 2, 360, 1_000_000_007 * 998_244_353, 600_851_475_143, u64::MAX] {
            let f = factor_u64(n);
            assert_eq!(f.iter().fold(1u64, |acc, (p, e)| acc * p.pow(*e)), n);
            assert!(f.iter().all(|(p, _)| is_prime_u64(*p)));
        }
        let big: BigUint = BigUint::from(1_000_000_007u64) * BigUint::from(998_244_353u64) * BigUint::from(1_000_000_009u64);
        let f = factor_biguint(&big);
        assert!(f.is_complete());
        assert_eq!(f.primes.len(), 3);
    }

    #[test]
    fn divisors_of_twelve() {
        let d = factor_biguint(&BigUint::from(12u32)).divisors().unwrap();
        let v: Vec<u64> = d.iter().map(|x| x.to_u64().unwrap()).collect();
        assert_eq!(v, vec![1, 2, 3, 4, 6, 12]);
    }

    #[test]
    fn inverses() {
        assert_eq!(inv_mod(3, 7), Some(5));
        assert_eq!(inv_mod(5, 25), None);
        let m = (1u64 << 61) - 1;
        let a = 123_456_789_012_345u64;
        assert_eq!(mul_mod(a, inv_mod(a, m).unwrap(), m), 1);
    }
}
