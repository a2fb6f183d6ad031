//! Binomial class sums, the cardinalities `|B_g| = 2^{2g-1} + 2^{g-1}` and
//! `|U_g| = 2^{2g-1} - 2^{g-1}`, and the prime tests used with the
//! fixed-point argument for maps of odd prime-power order.

use serde::Serialize;

use crate::error::{Error, Result};

/// Largest genus for which the exact 128-bit sums are computed.
pub const MAX_EXACT_GENUS: usize = 60;

fn check_exact(genus: usize) -> Result<()> {
    if genus == 0 || genus > MAX_EXACT_GENUS {
        Err(Error::OutOfExactRange {
            genus,
            max: MAX_EXACT_GENUS,
        })
    } else {
        Ok(())
    }
}

/// `A_r = sum_{k = r mod 4} C(2g, k)` for `r = 0..3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ClassSums {
    pub genus: usize,
    pub a: [u128; 4],
}

impl ClassSums {
    pub fn total(&self) -> u128 {
        self.a.iter().sum()
    }
}

pub fn class_sums(genus: usize) -> Result<ClassSums> {
    check_exact(genus)?;
    let n = 2 * genus;
    // Pascal row n
    let mut row = vec![0u128; n + 1];
    row[0] = 1;
    for i in 1..=n {
        for k in (1..=i).rev() {
            row[k] += row[k - 1];
        }
    }
    let mut a = [0u128; 4];
    for (k, c) in row.into_iter().enumerate() {
        a[k % 4] += c;
    }
    Ok(ClassSums { genus, a })
}

/// `(A_0 - A_2, A_1 - A_3)` as predicted by `(1 + i)^{2g}`.
pub fn closed_form_differences(genus: usize) -> Result<(i128, i128)> {
    check_exact(genus)?;
    let p = 1i128 << genus;
    Ok(match genus % 4 {
        0 => (p, 0),
        1 => (0, p),
        2 => (-p, 0),
        _ => (0, -p),
    })
}

pub fn closed_form_check(genus: usize) -> Result<bool> {
    let s = class_sums(genus)?;
    let [a0, a1, a2, a3] = s.a.map(|x| x as i128);
    Ok((a0 - a2, a1 - a3) == closed_form_differences(genus)?)
}

/// Zeros of the structure that is constant on the x-orbit: `A_0 + A_1`
/// for constant 0, `A_0 + A_3` for constant 1.
pub fn zero_count_prediction(genus: usize, orbit_constant: bool) -> Result<u128> {
    let s = class_sums(genus)?;
    Ok(if orbit_constant {
        s.a[0] + s.a[3]
    } else {
        s.a[0] + s.a[1]
    })
}

pub fn bg_card(genus: usize) -> Result<u128> {
    check_exact(genus)?;
    Ok((1u128 << (2 * genus - 1)) + (1u128 << (genus - 1)))
}

pub fn ug_card(genus: usize) -> Result<u128> {
    check_exact(genus)?;
    Ok((1u128 << (2 * genus - 1)) - (1u128 << (genus - 1)))
}

pub fn mod_pow(base: u64, mut exp: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let m = modulus as u128;
    let mut b = base as u128 % m;
    let mut acc = 1u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

fn check_odd_prime(p: u64) -> Result<()> {
    if p > 2 && is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotOddPrime(p))
    }
}

/// `p | 2^{2g-1} + 2^{g-1}`, for any `g >= 1`.
pub fn divides_bg(p: u64, genus: u64) -> Result<bool> {
    check_odd_prime(p)?;
    if genus == 0 {
        return Err(Error::ZeroGenus);
    }
    Ok((mod_pow(2, 2 * genus - 1, p) + mod_pow(2, genus - 1, p)).is_multiple_of(p))
}

/// `p | 2^{2g-1} - 2^{g-1}`, for any `g >= 1`.
pub fn divides_ug(p: u64, genus: u64) -> Result<bool> {
    check_odd_prime(p)?;
    if genus == 0 {
        return Err(Error::ZeroGenus);
    }
    Ok(mod_pow(2, 2 * genus - 1, p) == mod_pow(2, genus - 1, p))
}

/// Primes below `limit`, ascending (sieve of Eratosthenes).
pub fn primes_below(limit: u64) -> Vec<u64> {
    let n = limit as usize;
    if n < 3 {
        return Vec::new();
    }
    let mut composite = vec![false; n];
    let mut out = Vec::new();
    for i in 2..n {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j < n {
            composite[j] = true;
            j += i;
        }
    }
    out
}

/// Primes `p < limit` with `p = 7 mod 8`.
pub fn primes_8k7(limit: u64) -> Vec<u64> {
    primes_below(limit)
        .into_iter()
        .filter(|p| p % 8 == 7)
        .collect()
}

/// Least `k >= 1` with `a^k = 1 mod p`, for `gcd(a, p) = 1`.
pub fn multiplicative_order(a: u64, p: u64) -> Result<u64> {
    check_odd_prime(p)?;
    if a.is_multiple_of(p) {
        return Err(Error::ZeroResidue(a as i64));
    }
    let mut cur = a % p;
    let mut k = 1;
    while cur != 1 {
        cur = (cur as u128 * a as u128 % p as u128) as u64;
        k += 1;
    }
    Ok(k)
}

/// `true` iff `p` divides no `2^g + 1`, i.e. the order of 2 mod `p` is odd.
pub fn never_divides_2g_plus_1(p: u64) -> Result<bool> {
    Ok(multiplicative_order(2, p)? % 2 == 1)
}

/// Direct scan of `2^g mod p` over one full period, looking for `-1`.
pub fn some_2g_plus_1_divisible_scan(p: u64) -> Result<bool> {
    check_odd_prime(p)?;
    let mut cur = 2 % p;
    for _ in 0..p {
        if cur == p - 1 {
            return Ok(true);
        }
        cur = cur * 2 % p;
    }
    Ok(false)
}

/// Euler's criterion `a^{(p-1)/2} = 1 mod p`.
pub fn quadratic_residue(a: i64, p: u64) -> Result<bool> {
    check_odd_prime(p)?;
    let r = a.rem_euclid(p as i64) as u64;
    if r == 0 {
        return Err(Error::ZeroResidue(a));
    }
    Ok(mod_pow(r, (p - 1) / 2, p) == 1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PrimeVerdict {
    pub p: u64,
    pub is_8k7: bool,
    pub order_of_two: u64,
    pub never_divides_bg: bool,
}

pub fn prime_verdict(p: u64) -> Result<PrimeVerdict> {
    let order_of_two = multiplicative_order(2, p)?;
    Ok(PrimeVerdict {
        p,
        is_8k7: p % 8 == 7,
        order_of_two,
        never_divides_bg: order_of_two % 2 == 1,
    })
}

impl std::fmt::Display for PrimeVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "p={} 8k7={} ord2={} never_divides_bg={}",
            self.p, self.is_8k7, self.order_of_two, self.never_divides_bg
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binom(n: u128, k: u128) -> u128 {
        // multiplicative formula, exact at these sizes
        (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn class_sum_examples() {
        assert_eq!(class_sums(1).unwrap().a, [1, 2, 1, 0]);
        assert_eq!(class_sums(2).unwrap().a, [2, 4, 6, 4]);
        assert!(class_sums(0).is_err());
        assert!(class_sums(61).is_err());
    }

    #[test]
    fn class_sums_match_direct_binomials() {
        for g in 1..=30usize {
            let mut a = [0u128; 4];
            for k in 0..=(2 * g) {
                a[k % 4] += binom(2 * g as u128, k as u128);
            }
            assert_eq!(class_sums(g).unwrap().a, a, "g={g}");
        }
    }

    #[test]
    fn sums_total_and_closed_forms() {
        for g in 1..=MAX_EXACT_GENUS {
            let s = class_sums(g).unwrap();
            assert_eq!(s.total(), 1u128 << (2 * g));
            assert!(closed_form_check(g).unwrap(), "g={g}");
            let bg = bg_card(g).unwrap();
            assert_eq!(s.a[0] + s.a[1] == bg, g % 4 <= 1);
            assert_eq!(s.a[0] + s.a[3] == bg, g % 4 == 0 || g % 4 == 3);
        }
        let s = class_sums(4).unwrap();
        assert_eq!(s.a[0] as i128 - s.a[2] as i128, 16);
        assert_eq!(s.a[1], s.a[3]);
    }

    #[test]
    fn predictions() {
        assert_eq!(zero_count_prediction(2, false).unwrap(), 6);
        assert_eq!(zero_count_prediction(1, true).unwrap(), 1);
        assert_eq!(zero_count_prediction(4, false).unwrap(), 136);
    }

    #[test]
    fn cardinalities() {
        assert_eq!(bg_card(2).unwrap(), 10);
        assert_eq!(ug_card(1).unwrap(), 1);
        assert_eq!(bg_card(4).unwrap(), 136);
        assert_eq!(bg_card(4).unwrap() % 5, 1);
        assert_eq!(bg_card(60).unwrap(), (1u128 << 119) + (1u128 << 59));
    }

    #[test]
    fn divisibility_examples() {
        assert!(divides_bg(3, 1).unwrap());
        for g in (2..=20).step_by(2) {
            assert!(!divides_bg(3, g).unwrap());
        }
        for g in 1..=20u64 {
            assert_eq!(!divides_bg(5, g).unwrap(), matches!(g % 4, 0 | 1 | 3));
        }
        assert!(divides_bg(4, 1).is_err());
        assert!(divides_bg(2, 1).is_err());
    }

    #[test]
    fn divisibility_matches_exact_arithmetic() {
        for p in primes_below(101).into_iter().filter(|&p| p > 2) {
            for g in 1..=MAX_EXACT_GENUS {
                let exact_b = bg_card(g).unwrap().is_multiple_of(p as u128);
                let exact_u = ug_card(g).unwrap().is_multiple_of(p as u128);
                assert_eq!(divides_bg(p, g as u64).unwrap(), exact_b, "p={p} g={g}");
                assert_eq!(divides_ug(p, g as u64).unwrap(), exact_u, "p={p} g={g}");
            }
        }
    }

    #[test]
    fn prime_lists() {
        assert_eq!(primes_8k7(50), vec![7, 23, 31, 47]);
        assert_eq!(primes_8k7(8)[0], 7);
        for p in primes_8k7(10_000) {
            assert!(quadratic_residue(2, p).unwrap());
            assert!(never_divides_2g_plus_1(p).unwrap());
        }
        assert_eq!(primes_below(20), vec![2, 3, 5, 7, 11, 13, 17, 19]);
    }

    #[test]
    fn order_and_scan() {
        assert_eq!(multiplicative_order(2, 7).unwrap(), 3);
        assert!(never_divides_2g_plus_1(7).unwrap());
        assert!(!never_divides_2g_plus_1(3).unwrap());
        for p in primes_below(10_000).into_iter().filter(|&p| p > 2) {
            assert_eq!(
                never_divides_2g_plus_1(p).unwrap(),
                !some_2g_plus_1_divisible_scan(p).unwrap(),
                "p={p}"
            );
        }
    }

    #[test]
    fn residues() {
        assert!(quadratic_residue(2, 7).unwrap());
        for p in [3u64, 5, 7, 11, 13] {
            assert!(quadratic_residue(1, p).unwrap());
        }
        for p in [3u64, 7, 11, 19, 23] {
            assert!(!quadratic_residue(-1, p).unwrap());
        }
        assert!(quadratic_residue(7, 7).is_err());
        assert!(quadratic_residue(2, 9).is_err());
    }

    #[test]
    fn verdict_line() {
        let v = prime_verdict(7).unwrap();
        assert_eq!(v.to_string(), "p=7 8k7=true ord2=3 never_divides_bg=true");
    }
}
