//! Sparse multivariate polynomials with rational coefficients, and Bell polynomials.

use crate::arith::{binomial, Rational};
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Exponent vector; trailing zeros are always trimmed.
pub type Exponents = Vec<u32>;

fn trim(mut e: Exponents) -> Exponents {
    while e.last() == Some(&0) {
        e.pop();
    }
    e
}

/// A polynomial in variables `v_0, v_1, …` (the meaning of each index is up to the caller).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<Exponents, Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term(Vec::new(), c);
        p
    }

    pub fn var(index: usize) -> Self {
        let mut e = vec![0; index + 1];
        e[index] = 1;
        let mut p = Self::zero();
        p.add_term(e, Rational::one());
        p
    }

    pub fn monomial(exponents: Exponents, c: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term(exponents, c);
        p
    }

    pub fn add_term(&mut self, exponents: Exponents, c: Rational) {
        if c.is_zero() {
            return;
        }
        let key = trim(exponents);
        let entry = self.terms.entry(key.clone()).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exponents: &[u32]) -> Rational {
        self.terms
            .get(&trim(exponents.to_vec()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        let mut out = Poly::zero();
        for (e, v) in self.terms() {
            out.add_term(e.clone(), v * c);
        }
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (e1, c1) in self.terms() {
            for (e2, c2) in other.terms() {
                let len = e1.len().max(e2.len());
                let e: Exponents = (0..len)
                    .map(|i| e1.get(i).copied().unwrap_or(0) + e2.get(i).copied().unwrap_or(0))
                    .collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Poly {
        (0..k).fold(Poly::one(), |acc, _| acc.mul(self))
    }

    /// Keeps only the terms accepted by `keep`.
    pub fn filter(&self, mut keep: impl FnMut(&[u32]) -> bool) -> Poly {
        let mut out = Poly::zero();
        for (e, c) in self.terms() {
            if keep(e) {
                out.add_term(e.clone(), c.clone());
            }
        }
        out
    }

    /// Substitutes `values[i]` for variable `i` inside any [`Algebra`].
    pub fn eval<T: Algebra>(&self, values: &[T], unit: &T) -> T {
        let mut acc = unit.zero_like();
        for (e, c) in self.terms() {
            let mut term = unit.clone();
            for (i, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    term = term.mul(&values[i]);
                }
            }
            acc = acc.add(&term.scale(c));
        }
        acc
    }

    /// Weighted degree with weight `i + 1` for variable `i`, if homogeneous.
    pub fn weighted_degree(&self) -> Option<u32> {
        let mut degrees = self.terms.keys().map(|e| {
            e.iter()
                .enumerate()
                .map(|(i, &k)| (i as u32 + 1) * k)
                .sum::<u32>()
        });
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})", crate::arith::format_rational(c))?;
            for (i, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => write!(f, "*x{}", i + 1)?,
                    _ => write!(f, "*x{}^{}", i + 1, k)?,
                }
            }
        }
        Ok(())
    }
}

/// The operations [`Poly::eval`] needs from a target ring.
pub trait Algebra: Clone {
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn scale(&self, c: &Rational) -> Self;
    fn zero_like(&self) -> Self;
}

impl Algebra for Poly {
    fn add(&self, other: &Self) -> Self {
        Poly::add(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        Poly::mul(self, other)
    }
    fn scale(&self, c: &Rational) -> Self {
        Poly::scale(self, c)
    }
    fn zero_like(&self) -> Self {
        Poly::zero()
    }
}

impl Algebra for Rational {
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn scale(&self, c: &Rational) -> Self {
        self * c
    }
    fn zero_like(&self) -> Self {
        Rational::zero()
    }
}

/// Complete Bell polynomial `B_k(x_1, …, x_k)`, variable `x_i` stored at index `i - 1`.
///
/// Built from `B_0 = 1`, `B_{k+1} = Σ_{j=0}^{k} C(k,j) x_{j+1} B_{k-j}`.
pub fn bell_polynomial(k: u32) -> Poly {
    let mut table: Vec<Poly> = vec![Poly::one()];
    for m in 0..k {
        let mut next = Poly::zero();
        for j in 0..=m {
            let c = Rational::from_integer(binomial(m, j));
            next = next.add(
                &Poly::var(j as usize)
                    .mul(&table[(m - j) as usize])
                    .scale(&c),
            );
        }
        table.push(next);
    }
    table.pop().unwrap()
}
