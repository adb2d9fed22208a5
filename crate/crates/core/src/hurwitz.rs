//! Single Hurwitz numbers by exhaustive enumeration, and their ELSV evaluation.

use crate::arith::{factorial, Rational};
use crate::engine::Engine;
use crate::error::{Error, Result};
use crate::hodge::HodgeMonomial;
use crate::moduli::{dimension, require_stable};
use num_bigint::BigInt;
use num_traits::Zero;
use std::collections::HashMap;

pub const MAX_DEGREE: u32 = 6;
pub const MAX_TRANSPOSITIONS: u32 = 8;

/// A partition `μ` together with a number of transposition factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HurwitzInstance {
    mu: Vec<u32>,
    m: u32,
}

impl HurwitzInstance {
    pub fn new(mu: impl Into<Vec<u32>>, m: u32) -> Result<Self> {
        let mut mu = mu.into();
        if mu.is_empty() || mu.contains(&0) {
            return Err(Error::InvalidPartition(mu));
        }
        mu.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Self { mu, m })
    }

    pub fn partition(&self) -> &[u32] {
        &self.mu
    }

    pub fn transpositions(&self) -> u32 {
        self.m
    }

    pub fn degree(&self) -> u32 {
        self.mu.iter().sum()
    }

    /// A product of `m` transpositions has sign `(−1)^m`; a permutation of
    /// cycle type `μ` has sign `(−1)^{d − ℓ}`.
    pub fn parity_allows(&self) -> bool {
        (self.m + self.degree() - self.mu.len() as u32).is_multiple_of(2)
    }
}

/// Order in which a tuple of transpositions is multiplied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Composition {
    /// `t_1 t_2 ⋯ t_m` acts by `t_1` first.
    #[default]
    LeftToRight,
    /// `t_1 t_2 ⋯ t_m` acts by `t_m` first.
    RightToLeft,
}

/// The permutation with cycles `(1..μ_1)(μ_1+1..μ_1+μ_2)⋯`, zero-based, as an image table.
pub fn canonical_permutation(mu: &[u32]) -> Vec<u8> {
    let d: u32 = mu.iter().sum();
    let mut perm = vec![0u8; d as usize];
    let mut start = 0usize;
    for &part in mu {
        let len = part as usize;
        for k in 0..len {
            perm[start + k] = (start + (k + 1) % len) as u8;
        }
        start += len;
    }
    perm
}

/// Cycle lengths of a permutation, in decreasing order.
pub fn cycle_type(perm: &[u8]) -> Vec<u32> {
    let mut seen = vec![false; perm.len()];
    let mut cycles = Vec::new();
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = perm[x] as usize;
            len += 1;
        }
        cycles.push(len);
    }
    cycles.sort_unstable_by(|a, b| b.cmp(a));
    cycles
}

/// Upper bound on the number of tuples a naive enumeration would visit.
pub fn enumeration_cost(d: u32, m: u32) -> u128 {
    let transpositions = (d as u128) * (d as u128).saturating_sub(1) / 2;
    transpositions.pow(m)
}

fn guard(d: u32, m: u32) -> Result<()> {
    if d > MAX_DEGREE || m > MAX_TRANSPOSITIONS {
        Err(Error::EnumerationTooLarge { d, m })
    } else {
        Ok(())
    }
}

/// Number of `m`-tuples of transpositions in `S_d` whose product is `target` and
/// which generate a subgroup acting transitively on the `d` points.
///
/// Every tuple is visited, but tuples sharing a prefix state (partial product,
/// orbit partition) are counted together.
pub fn count_transitive_factorizations(
    target: &[u8],
    m: u32,
    composition: Composition,
) -> Result<u64> {
    let d = target.len();
    guard(d as u32, m)?;
    let transpositions: Vec<(usize, usize)> = (0..d)
        .flat_map(|a| (a + 1..d).map(move |b| (a, b)))
        .collect();
    let identity: Vec<u8> = (0..d as u8).collect();
    let mut states: HashMap<(Vec<u8>, Vec<u8>), u64> = HashMap::new();
    states.insert((identity.clone(), identity), 1);
    for _ in 0..m {
        let mut next: HashMap<(Vec<u8>, Vec<u8>), u64> = HashMap::with_capacity(states.len());
        for ((perm, blocks), count) in &states {
            for &(a, b) in &transpositions {
                let mut p = perm.clone();
                match composition {
                    Composition::LeftToRight => {
                        for x in p.iter_mut() {
                            if *x as usize == a {
                                *x = b as u8;
                            } else if *x as usize == b {
                                *x = a as u8;
                            }
                        }
                    }
                    Composition::RightToLeft => p.swap(a, b),
                }
                let mut bl = blocks.clone();
                let (keep, drop) = (bl[a].min(bl[b]), bl[a].max(bl[b]));
                if keep != drop {
                    for x in bl.iter_mut() {
                        if *x == drop {
                            *x = keep;
                        }
                    }
                }
                *next.entry((p, bl)).or_insert(0) += count;
            }
        }
        states = next;
    }
    Ok(states
        .into_iter()
        .filter(|((perm, blocks), _)| perm.as_slice() == target && blocks.iter().all(|&x| x == 0))
        .map(|(_, c)| c)
        .sum())
}

/// `h^m_μ`: transitive factorizations of the canonical permutation of cycle type `μ`.
pub fn hurwitz_brute(inst: &HurwitzInstance) -> Result<u64> {
    guard(inst.degree(), inst.m)?;
    if !inst.parity_allows() {
        return Ok(0);
    }
    count_transitive_factorizations(
        &canonical_permutation(&inst.mu),
        inst.m,
        Composition::LeftToRight,
    )
}

/// Riemann–Hurwitz: `m = 2g − 2 + ℓ + |μ|`.
pub fn riemann_hurwitz_m(g: u32, mu: &[u32]) -> u32 {
    let d: u32 = mu.iter().sum();
    2 * g + mu.len() as u32 + d - 2
}

impl Engine {
    /// `m! ∏ μ_i^{μ_i+1}/μ_i! ∫_{M̄_{g,ℓ}} (1 − λ_1 + ⋯ ± λ_g) / ∏(1 − μ_i ψ_i)`.
    pub fn elsv_value(&self, g: u32, mu: &[u32]) -> Result<Rational> {
        if mu.is_empty() || mu.contains(&0) {
            return Err(Error::InvalidPartition(mu.to_vec()));
        }
        let l = mu.len() as u32;
        require_stable(g, l)?;
        let m = riemann_hurwitz_m(g, mu);
        let mut prefactor = Rational::from_integer(factorial(m));
        for &part in mu {
            prefactor *= Rational::new(BigInt::from(part).pow(part + 1), factorial(part));
        }
        let dim = dimension(g, l);
        let mut integral = Rational::zero();
        for j in 0..=g.min(dim) {
            let mut lambda = vec![0u32; j as usize];
            if j > 0 {
                lambda[j as usize - 1] = 1;
            }
            for psi in compositions(dim - j, l as usize) {
                let weight: BigInt = psi
                    .iter()
                    .zip(mu)
                    .map(|(&e, &part)| BigInt::from(part).pow(e))
                    .product();
                let value = self.hodge_integral(&HodgeMonomial::new(g, lambda.clone(), psi));
                let term = Rational::from_integer(weight) * value;
                if j % 2 == 0 {
                    integral += term;
                } else {
                    integral -= term;
                }
            }
        }
        Ok(prefactor * integral)
    }
}

pub fn elsv_value(g: u32, mu: &[u32]) -> Result<Rational> {
    Engine::global().elsv_value(g, mu)
}

/// All ways to write `total` as an ordered sum of `parts` non-negative integers.
pub(crate) fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    fn go(total: u32, parts: usize, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if parts == 1 {
            prefix.push(total);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for v in 0..=total {
            prefix.push(v);
            go(total - v, parts - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if parts == 0 {
        if total == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    go(total, parts, &mut Vec::new(), &mut out);
    out
}
