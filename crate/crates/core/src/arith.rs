//! Exact integer and rational helpers shared by the recursions.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::sync::OnceLock;

/// Exact arbitrary-precision rational number.
pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn factorial(n: u32) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// `(2m - 1)!!`, with `(-1)!! = 1`.
pub fn odd_double_factorial(m: u32) -> BigInt {
    (1..=m).fold(BigInt::one(), |acc, k| acc * (2 * k - 1))
}

pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Bernoulli numbers with `B_1 = -1/2`, computed once up to a fixed index.
pub fn bernoulli(n: u32) -> Rational {
    static TABLE: OnceLock<Vec<Rational>> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        let len = 64u32;
        let mut b: Vec<Rational> = Vec::with_capacity(len as usize);
        b.push(Rational::one());
        for m in 1..len {
            // sum_{k=0}^{m} C(m+1, k) B_k = 0
            let mut acc = Rational::zero();
            for (k, bk) in b.iter().enumerate() {
                acc += Rational::from_integer(binomial(m + 1, k as u32)) * bk;
            }
            b.push(-acc / Rational::from_integer(BigInt::from(m + 1)));
        }
        b
    });
    table
        .get(n as usize)
        .cloned()
        .unwrap_or_else(|| panic!("bernoulli number B_{n} beyond the precomputed table"))
}

/// Lowest-terms `p/q` text, integers without a denominator.
pub fn format_rational(value: &Rational) -> String {
    let value = value.reduced();
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Iterates over sub-multisets of a multiset given as `(value, multiplicity)` groups.
///
/// The callback receives the chosen multiplicities and the number of ways to pick
/// them from a labelled copy of the multiset (a product of binomials).
pub(crate) fn for_each_submultiset<F>(groups: &[(u32, u32)], mut f: F)
where
    F: FnMut(&[u32], &BigInt),
{
    let mut choice = vec![0u32; groups.len()];
    loop {
        let weight = groups
            .iter()
            .zip(&choice)
            .fold(BigInt::one(), |acc, (&(_, mult), &c)| {
                acc * binomial(mult, c)
            });
        f(&choice, &weight);
        let mut idx = 0;
        loop {
            if idx == groups.len() {
                return;
            }
            if choice[idx] < groups[idx].1 {
                choice[idx] += 1;
                break;
            }
            choice[idx] = 0;
            idx += 1;
        }
    }
}

/// Groups a sorted slice into `(value, multiplicity)` runs.
pub(crate) fn group_sorted(values: &[u32]) -> Vec<(u32, u32)> {
    let mut groups: Vec<(u32, u32)> = Vec::new();
    for &v in values {
        match groups.last_mut() {
            Some((last, mult)) if *last == v => *mult += 1,
            _ => groups.push((v, 1)),
        }
    }
    groups
}

/// Splits grouped values into the chosen part and its complement, both sorted.
pub(crate) fn split_groups(groups: &[(u32, u32)], choice: &[u32]) -> (Vec<u32>, Vec<u32>) {
    let mut left = Vec::new();
    let mut right = Vec::new();
    for (&(value, mult), &c) in groups.iter().zip(choice) {
        left.extend(std::iter::repeat_n(value, c as usize));
        right.extend(std::iter::repeat_n(value, (mult - c) as usize));
    }
    (left, right)
}

pub(crate) fn is_even(n: u32) -> bool {
    n.is_even()
}
