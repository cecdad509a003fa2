//! Elementary number theory: budgeted factorization and the divisor
//! sets that index twist equations.
//!
//! Factoring uses trial division followed by Brent's variant of
//! Pollard rho.  Every factoring call carries an iteration budget so
//! a pathological resultant degrades into a structured error instead
//! of a hang.  The rho sequence parameters are fixed, so results are
//! reproducible run to run.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// Default iteration budget for one `factor` call.  Generous enough
/// that any 80-bit composite factors in well under a second.
pub const DEFAULT_FACTOR_BUDGET: u64 = 40_000_000;

const TRIAL_DIVISION_LIMIT: u64 = 10_000;

/// Sign and prime factorization of a nonzero integer.
///
/// Primes are stored in ascending order with their exponents.  The
/// unit `1` (or `-1`) has an empty factor list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    sign: i8,
    factors: Vec<(BigUint, u32)>,
}

impl Factorization {
    /// `-1` for negative inputs, `+1` otherwise.
    pub fn sign(&self) -> i8 {
        self.sign
    }

    /// Prime-exponent pairs in ascending prime order.
    pub fn factors(&self) -> &[(BigUint, u32)] {
        &self.factors
    }

    /// Reconstructs the factored integer, sign included.
    pub fn value(&self) -> BigInt {
        let mut m = BigUint::one();
        for (p, e) in &self.factors {
            m *= p.pow(*e);
        }
        let sign = if self.sign < 0 { Sign::Minus } else { Sign::Plus };
        BigInt::from_biguint(sign, m)
    }

    /// Number of distinct prime factors.
    pub fn omega(&self) -> u32 {
        self.factors.len() as u32
    }

    /// Number of positive divisors.
    pub fn tau(&self) -> u64 {
        self.factors.iter().map(|(_, e)| u64::from(*e) + 1).product()
    }

    /// Product of the distinct primes.
    pub fn radical(&self) -> BigUint {
        let mut r = BigUint::one();
        for (p, _) in &self.factors {
            r *= p;
        }
        r
    }

    /// Largest squarefree `s` with `s * t^2 = |n|` for some `t`.
    pub fn squarefree_part(&self) -> BigUint {
        let mut s = BigUint::one();
        for (p, e) in &self.factors {
            if e % 2 == 1 {
                s *= p;
            }
        }
        s
    }

    /// True when no prime exponent reaches `p`.
    pub fn is_pth_power_free(&self, p: u32) -> bool {
        self.factors.iter().all(|(_, e)| *e < p)
    }

    /// All positive divisors, ascending.
    pub fn divisors(&self) -> Vec<BigUint> {
        let mut out = vec![BigUint::one()];
        for (p, e) in &self.factors {
            let prev = out.clone();
            let mut power = BigUint::one();
            for _ in 0..*e {
                power *= p;
                out.extend(prev.iter().map(|d| d * &power));
            }
        }
        out.sort();
        out
    }

    /// Positive squarefree divisors, ascending.  With `signed` both
    /// signs are produced, ordered by absolute value with the
    /// negative one first.
    pub fn squarefree_divisors(&self, signed: bool) -> Vec<BigInt> {
        let mut mags = vec![BigUint::one()];
        for (p, _) in &self.factors {
            let prev = mags.clone();
            mags.extend(prev.iter().map(|d| d * p));
        }
        mags.sort();
        finish_divisor_list(mags, signed)
    }

    /// The p-th-power-free integers supported on the primes of the
    /// factored value: every exponent ranges over `0..p`, both signs
    /// are kept.  Ordered by absolute value, negative first.
    ///
    /// This is deliberately wider than the set of p-free divisors of
    /// the value itself: a prime may appear in `f(x)` to a higher
    /// power than it does in the resultant.
    pub fn pth_power_free_span(&self, p: u32) -> Vec<BigInt> {
        assert!(p >= 2, "power-free span needs p >= 2");
        let mut mags = vec![BigUint::one()];
        for (q, _) in &self.factors {
            let prev = mags.clone();
            let mut power = BigUint::one();
            for _ in 1..p {
                power *= q;
                mags.extend(prev.iter().map(|d| d * &power));
            }
        }
        mags.sort();
        finish_divisor_list(mags, true)
    }
}

fn finish_divisor_list(mags: Vec<BigUint>, signed: bool) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(if signed { 2 * mags.len() } else { mags.len() });
    for m in mags {
        let d = BigInt::from(m);
        if signed {
            out.push(-&d);
        }
        out.push(d);
    }
    out
}

/// Factors `n` under the default iteration budget.
pub fn factor(n: &BigInt) -> Result<Factorization> {
    factor_with_budget(n, DEFAULT_FACTOR_BUDGET)
}

/// Factors `n`, spending at most `budget` iterations of trial
/// division plus rho steps.  Exhausting the budget yields
/// `Error::FactorizationTimeout`.
pub fn factor_with_budget(n: &BigInt, budget: u64) -> Result<Factorization> {
    if n.is_zero() {
        return Err(Error::ZeroArgument);
    }
    let sign = if n.is_negative() { -1 } else { 1 };
    let mut remaining = budget;
    let mut m = n.magnitude().clone();
    let mut factors: Vec<(BigUint, u32)> = Vec::new();

    let push = |p: BigUint, factors: &mut Vec<(BigUint, u32)>| {
        if let Some(last) = factors.iter_mut().find(|(q, _)| *q == p) {
            last.1 += 1;
        } else {
            factors.push((p, 1));
        }
    };

    // Trial division first; this also guarantees rho never sees a
    // number with a tiny factor (where the cycle logic is weakest).
    let mut candidate = 2u64;
    while candidate <= TRIAL_DIVISION_LIMIT {
        if m.is_one() {
            break;
        }
        if remaining == 0 {
            return Err(Error::FactorizationTimeout(n.to_string()));
        }
        remaining -= 1;
        let c = BigUint::from(candidate);
        if &c * &c > m {
            break;
        }
        while (&m % &c).is_zero() {
            m /= &c;
            push(c.clone(), &mut factors);
        }
        candidate = if candidate == 2 { 3 } else { candidate + 2 };
    }

    let mut stack = Vec::new();
    if !m.is_one() {
        stack.push(m);
    }
    while let Some(top) = stack.pop() {
        if top.is_one() {
            continue;
        }
        if is_probable_prime(&top) {
            push(top, &mut factors);
            continue;
        }
        match split_composite(&top, &mut remaining) {
            Some(d) => {
                let q = &top / &d;
                stack.push(d);
                stack.push(q);
            }
            None => return Err(Error::FactorizationTimeout(n.to_string())),
        }
    }

    factors.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(Factorization { sign, factors })
}

/// Squarefree divisors of `n` (both signs when `signed`), via the
/// default factoring budget.
pub fn squarefree_divisors(n: &BigInt, signed: bool) -> Result<Vec<BigInt>> {
    Ok(factor(n)?.squarefree_divisors(signed))
}

/// Twist coefficients for exponent `p`: every p-th-power-free integer
/// supported on the primes of `c`, both signs, ordered by absolute
/// value with the negative one first.
pub fn pfree_twist_coefficients(c: &BigInt, p: u32) -> Result<Vec<BigInt>> {
    Ok(factor(c)?.pth_power_free_span(p))
}

/// Number of distinct primes of `n`.
pub fn omega(n: &BigInt) -> Result<u32> {
    Ok(factor(n)?.omega())
}

/// Number of positive divisors of `n`.
pub fn tau(n: &BigInt) -> Result<u64> {
    Ok(factor(n)?.tau())
}

/// Product of the distinct primes of `n`.
pub fn radical(n: &BigInt) -> Result<BigUint> {
    Ok(factor(n)?.radical())
}

/// Squarefree part of `|n|`.
pub fn squarefree_part(n: &BigInt) -> Result<BigUint> {
    Ok(factor(n)?.squarefree_part())
}

fn split_composite(n: &BigUint, remaining: &mut u64) -> Option<BigUint> {
    // Perfect powers defeat rho's birthday heuristic, so peel them.
    if let Some(root) = perfect_power_base(n) {
        return Some(root);
    }
    let mut c = 1u64;
    loop {
        match pollard_brent(n, c, remaining) {
            RhoOutcome::Factor(d) => return Some(d),
            RhoOutcome::Cycle => c += 1,
            RhoOutcome::OutOfBudget => return None,
        }
    }
}

fn perfect_power_base(n: &BigUint) -> Option<BigUint> {
    let bits = n.bits();
    for k in 2..=bits.max(2) as u32 {
        let r = n.nth_root(k);
        if r.pow(k) == *n {
            return Some(r);
        }
        if r < BigUint::from(2u32) {
            break;
        }
    }
    None
}

enum RhoOutcome {
    Factor(BigUint),
    Cycle,
    OutOfBudget,
}

fn abs_diff(a: &BigUint, b: &BigUint) -> BigUint {
    if a >= b {
        a - b
    } else {
        b - a
    }
}

/// Brent-style rho with batched gcds.  `c` selects the polynomial
/// `x^2 + c`; the start value is fixed at 2.
fn pollard_brent(n: &BigUint, c: u64, remaining: &mut u64) -> RhoOutcome {
    let c = BigUint::from(c);
    let one = BigUint::one();
    let batch = 128u64;

    let mut y = BigUint::from(2u32);
    let mut g = one.clone();
    let mut q = one.clone();
    let mut x = y.clone();
    let mut ys = y.clone();
    let mut r = 1u64;

    while g.is_one() {
        x = y.clone();
        for _ in 0..r {
            y = (&y * &y + &c) % n;
        }
        let mut k = 0u64;
        while k < r && g.is_one() {
            ys = y.clone();
            let steps = batch.min(r - k);
            for _ in 0..steps {
                if *remaining == 0 {
                    return RhoOutcome::OutOfBudget;
                }
                *remaining -= 1;
                y = (&y * &y + &c) % n;
                q = (&q * abs_diff(&x, &y)) % n;
            }
            g = q.gcd(n);
            k += steps;
        }
        r *= 2;
    }

    if &g == n {
        // The batch overshot; replay one step at a time.
        loop {
            if *remaining == 0 {
                return RhoOutcome::OutOfBudget;
            }
            *remaining -= 1;
            ys = (&ys * &ys + &c) % n;
            g = abs_diff(&x, &ys).gcd(n);
            if !g.is_one() {
                break;
            }
        }
    }
    if &g == n {
        RhoOutcome::Cycle
    } else {
        RhoOutcome::Factor(g)
    }
}

const MR_WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Miller-Rabin with the fixed witness set that is deterministic
/// below 2^64; beyond that the same witnesses give a probable-prime
/// answer with error probability far below any practical concern.
pub fn is_probable_prime(n: &BigUint) -> bool {
    let two = BigUint::from(2u32);
    if n < &two {
        return false;
    }
    if n.is_even() {
        return *n == two;
    }
    let n_minus_one = n - 1u32;
    let s = n_minus_one.trailing_zeros().unwrap_or(0);
    let d = &n_minus_one >> s;
    'witness: for &a in &MR_WITNESSES {
        let a = BigUint::from(a);
        if &a >= n {
            continue;
        }
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n_minus_one {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_one {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn u(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn factor_small_composite() {
        // 756 = 2^2 * 3^3 * 7
        let f = factor(&big(756)).unwrap();
        assert_eq!(f.sign(), 1);
        assert_eq!(f.factors(), &[(u(2), 2), (u(3), 3), (u(7), 1)]);
        assert_eq!(f.value(), big(756));
        assert_eq!(f.omega(), 3);
        assert_eq!(f.tau(), 24);
        assert_eq!(f.radical(), u(42));
    }

    #[test]
    fn factor_negative_square() {
        let f = factor(&big(-961)).unwrap();
        assert_eq!(f.sign(), -1);
        assert_eq!(f.factors(), &[(u(31), 2)]);
        assert_eq!(f.value(), big(-961));
    }

    #[test]
    fn factor_units_and_zero() {
        assert_eq!(factor(&big(1)).unwrap().factors(), &[]);
        assert_eq!(factor(&big(-1)).unwrap().sign(), -1);
        assert_eq!(factor(&big(0)), Err(Error::ZeroArgument));
    }

    #[test]
    fn factor_semiprime_and_budget() {
        // (10^9 + 7)(10^9 + 9), both prime
        let n: BigInt = big(1_000_000_007) * big(1_000_000_009);
        let f = factor(&n).unwrap();
        assert_eq!(f.factors(), &[(u(1_000_000_007), 1), (u(1_000_000_009), 1)]);

        match factor_with_budget(&n, 50) {
            Err(Error::FactorizationTimeout(s)) => assert_eq!(s, n.to_string()),
            other => panic!("expected timeout, got {other:?}"),
        }
    }

    #[test]
    fn factor_perfect_power() {
        // 7^4 trips the perfect-power peel, not rho
        let f = factor(&big(2401)).unwrap();
        assert_eq!(f.factors(), &[(u(7), 4)]);
    }

    #[test]
    fn divisor_lists() {
        let f = factor(&big(36)).unwrap();
        let divs: Vec<u64> = f.divisors().iter().map(|d| d.try_into().unwrap()).collect();
        assert_eq!(divs, vec![1, 2, 3, 4, 6, 9, 12, 18, 36]);

        let f = factor(&big(756)).unwrap();
        let sqf: Vec<BigInt> = f.squarefree_divisors(false);
        let expect: Vec<BigInt> = [1, 2, 3, 6, 7, 14, 21, 42].iter().map(|&v| big(v)).collect();
        assert_eq!(sqf, expect);

        let signed = f.squarefree_divisors(true);
        assert_eq!(signed.len(), 16);
        assert_eq!(signed[0], big(-1));
        assert_eq!(signed[1], big(1));
        assert_eq!(signed[14], big(-42));
        assert_eq!(signed[15], big(42));
    }

    #[test]
    fn pth_power_free_span_is_widened() {
        // c = -31: magnitudes 1, 31, 31^2 for p = 3, then both signs
        let f = factor(&big(-31)).unwrap();
        let span = f.pth_power_free_span(3);
        let expect: Vec<BigInt> = [-1, 1, -31, 31, -961, 961].iter().map(|&v| big(v)).collect();
        assert_eq!(span, expect);

        // c = 756 = 2^2 3^3 7, p = 5: the span must contain 7^4 even
        // though 2401 does not divide 756
        let f = factor(&big(756)).unwrap();
        let span = f.pth_power_free_span(5);
        assert_eq!(span.len(), 2 * 125);
        assert!(span.contains(&big(2401)));
        assert!(span.contains(&big(-2401)));
        // but nothing with a 5th power
        assert!(!span.contains(&big(32)));
    }

    #[test]
    fn squarefree_part_examples() {
        assert_eq!(squarefree_part(&big(48)).unwrap(), u(3));
        assert_eq!(squarefree_part(&big(169)).unwrap(), u(1));
        assert_eq!(squarefree_part(&big(-50)).unwrap(), u(2));
    }

    #[test]
    fn primality_spot_checks() {
        assert!(is_probable_prime(&u(2)));
        assert!(is_probable_prime(&u(3109)));
        assert!(is_probable_prime(&u(1_000_000_007)));
        assert!(!is_probable_prime(&u(1)));
        assert!(!is_probable_prime(&u(2401)));
        // Carmichael number
        assert!(!is_probable_prime(&u(561)));
    }

    proptest! {
        #[test]
        fn factorization_round_trips(n in 2i64..200_000) {
            let f = factor(&big(n)).unwrap();
            prop_assert_eq!(f.value(), big(n));
            for (p, _) in f.factors() {
                prop_assert!(is_probable_prime(p));
            }
        }

        #[test]
        fn squarefree_divisor_count_is_two_to_omega(n in 2i64..100_000) {
            let f = factor(&big(n)).unwrap();
            let list = f.squarefree_divisors(false);
            prop_assert_eq!(list.len() as u32, 1u32 << f.omega());
            for d in &list {
                prop_assert!((big(n) % d).is_zero());
                prop_assert!(factor(d).unwrap().is_pth_power_free(2));
            }
        }

        #[test]
        fn power_free_span_members_are_p_free(n in 2i64..5_000, p in 2u32..6) {
            let f = factor(&big(n)).unwrap();
            let span = f.pth_power_free_span(p);
            prop_assert_eq!(span.len(), 2 * (p as usize).pow(f.omega()) as usize);
            let rad = BigInt::from(f.radical());
            for d in span.iter().take(40) {
                let fd = factor(d).unwrap();
                prop_assert!(fd.is_pth_power_free(p));
                // support of d lies inside the support of n
                prop_assert!((&rad % BigInt::from(fd.radical())).is_zero());
            }
        }
    }
}
