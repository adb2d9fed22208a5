//! Polynomials in `λ_1..λ_g, ψ_1..ψ_n` on a fixed `(g, n)`.

use crate::arith::Rational;
use crate::engine::Engine;
use crate::error::{Error, Result};
use crate::hodge::{lambda_degree, HodgeMonomial};
use crate::moduli::require_stable;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// Exponents of one monomial: `λ_j` at index `j - 1` (trailing zeros trimmed) and
/// `ψ_i` at index `i - 1` (always length `n`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MonomialExponents {
    pub lambda: Vec<u32>,
    pub psi: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HodgePolynomial {
    g: u32,
    n: u32,
    terms: BTreeMap<MonomialExponents, Rational>,
}

impl HodgePolynomial {
    pub fn zero(g: u32, n: u32) -> Self {
        Self {
            g,
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(g: u32, n: u32, c: Rational) -> Self {
        let mut p = Self::zero(g, n);
        p.add_term(Vec::new(), vec![0; n as usize], c);
        p
    }

    /// `λ_j`, `1 ≤ j`. Indices above `g` are kept formally; they integrate to zero.
    pub fn lambda(g: u32, n: u32, j: u32) -> Self {
        assert!(j >= 1, "lambda index starts at 1");
        let mut lambda = vec![0; j as usize];
        lambda[j as usize - 1] = 1;
        let mut p = Self::zero(g, n);
        p.add_term(lambda, vec![0; n as usize], Rational::one());
        p
    }

    /// `ψ_i`, `1 ≤ i ≤ n`.
    pub fn psi(g: u32, n: u32, i: u32) -> Self {
        assert!(i >= 1 && i <= n, "psi index {i} outside 1..={n}");
        let mut psi = vec![0; n as usize];
        psi[i as usize - 1] = 1;
        let mut p = Self::zero(g, n);
        p.add_term(Vec::new(), psi, Rational::one());
        p
    }

    pub fn from_monomial(m: &HodgeMonomial, c: Rational) -> Self {
        let mut p = Self::zero(m.g, m.n());
        p.add_term(m.lambda.clone(), m.psi.clone(), c);
        p
    }

    pub fn genus(&self) -> u32 {
        self.g
    }

    pub fn marking_count(&self) -> u32 {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MonomialExponents, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, mut lambda: Vec<u32>, psi: Vec<u32>, c: Rational) {
        assert_eq!(
            psi.len(),
            self.n as usize,
            "psi exponent vector has wrong length"
        );
        if c.is_zero() {
            return;
        }
        while lambda.last() == Some(&0) {
            lambda.pop();
        }
        let key = MonomialExponents { lambda, psi };
        let entry = self.terms.entry(key.clone()).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if (self.g, self.n) == (other.g, other.n) {
            Ok(())
        } else {
            Err(Error::AmbientMismatch(self.g, self.n, other.g, other.n))
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(e.lambda.clone(), e.psi.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero(self.g, self.n);
        for (e, v) in self.terms() {
            out.add_term(e.lambda.clone(), e.psi.clone(), v * c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = Self::zero(self.g, self.n);
        for (e1, c1) in self.terms() {
            for (e2, c2) in other.terms() {
                let len = e1.lambda.len().max(e2.lambda.len());
                let lambda = (0..len)
                    .map(|i| {
                        e1.lambda.get(i).copied().unwrap_or(0)
                            + e2.lambda.get(i).copied().unwrap_or(0)
                    })
                    .collect();
                let psi = e1.psi.iter().zip(&e2.psi).map(|(a, b)| a + b).collect();
                out.add_term(lambda, psi, c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(self.g, self.n, Rational::one());
        for _ in 0..k {
            acc = acc.mul(self).expect("same ambient");
        }
        acc
    }

    /// The part of total degree `d` (λ_j has degree j, ψ_i degree 1).
    pub fn homogeneous_part(&self, d: u32) -> Self {
        let mut out = Self::zero(self.g, self.n);
        for (e, c) in self.terms() {
            if lambda_degree(&e.lambda) + e.psi.iter().sum::<u32>() == d {
                out.add_term(e.lambda.clone(), e.psi.clone(), c.clone());
            }
        }
        out
    }

    /// Drops every monomial of total degree above `d`.
    pub fn truncate_above(&self, d: u32) -> Self {
        let mut out = Self::zero(self.g, self.n);
        for (e, c) in self.terms() {
            if lambda_degree(&e.lambda) + e.psi.iter().sum::<u32>() <= d {
                out.add_term(e.lambda.clone(), e.psi.clone(), c.clone());
            }
        }
        out
    }
}

impl Engine {
    /// `∫_{M̄_{g,n}} F`, summed monomial by monomial.
    pub fn stable_integral(&self, f: &HodgePolynomial) -> Result<Rational> {
        require_stable(f.g, f.n)?;
        let mut acc = Rational::zero();
        for (e, c) in f.terms() {
            let m = HodgeMonomial::new(f.g, e.lambda.clone(), e.psi.clone());
            acc += c * self.hodge_integral(&m);
        }
        Ok(acc)
    }
}

/// `∫_{M̄_{g,n}} F` with the shared caches.
pub fn stable_integral(f: &HodgePolynomial) -> Result<Rational> {
    Engine::global().stable_integral(f)
}
