#![allow(dead_code)]

use pshodge::arith::int;
use pshodge::moduli::{dimension, is_pseudostable, is_stable};
use pshodge::{HodgePolynomial, Rational, Stratum, Tail, TautClass};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Every exponent vector of length `n` with entries summing to `degree`.
pub fn psi_monomials(n: u32, degree: u32) -> Vec<Vec<u32>> {
    fn go(n: usize, total: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() + 1 == n {
            prefix.push(total);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for v in 0..=total {
            prefix.push(v);
            go(n, total - v, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if degree == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    go(n as usize, degree, &mut Vec::new(), &mut out);
    out
}

pub fn random_psi(rng: &mut impl Rng, n: u32, degree: u32) -> Vec<u32> {
    let mut psi = vec![0; n as usize];
    for _ in 0..degree {
        let i = rng.gen_range(0..n as usize);
        psi[i] += 1;
    }
    psi
}

pub fn psi_class(g: u32, n: u32, psi: &[u32]) -> TautClass {
    let mut c = TautClass::zero(g, n);
    c.add_term(Stratum::new(vec![], psi.to_vec(), vec![]), int(1));
    c
}

pub fn psi_polynomial(g: u32, n: u32, psi: &[u32]) -> HodgePolynomial {
    let mut p = HodgePolynomial::zero(g, n);
    p.add_term(vec![], psi.to_vec(), int(1));
    p
}

/// `(1 + λ_1 + ⋯ + λ_g)(1 − λ_1 + ⋯ ± λ_g) − 1` on `(g, n)`.
pub fn mumford_product(g: u32, n: u32) -> HodgePolynomial {
    let mut plus = HodgePolynomial::constant(g, n, int(1));
    let mut minus = HodgePolynomial::constant(g, n, int(1));
    for j in 1..=g {
        let l = HodgePolynomial::lambda(g, n, j);
        plus = plus.add(&l).unwrap();
        let sign = if j % 2 == 0 { int(1) } else { int(-1) };
        minus = minus.add(&l.scale(&sign)).unwrap();
    }
    plus.mul(&minus)
        .unwrap()
        .sub(&HodgePolynomial::constant(g, n, int(1)))
        .unwrap()
}

/// Pseudostable ambients with `g ≤ max_g`, `n ≤ max_n`.
pub fn pseudostable_ambients(max_g: u32, max_n: u32) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for g in 0..=max_g {
        for n in 0..=max_n {
            if is_pseudostable(g, n) {
                out.push((g, n));
            }
        }
    }
    out
}

/// A small random class: a few strata with low-degree decorations.
pub fn random_class(rng: &mut impl Rng, g: u32, n: u32) -> TautClass {
    let mut c = TautClass::zero(g, n);
    let terms = rng.gen_range(1..=3);
    for _ in 0..terms {
        let max_tails = (0..=g.min(3))
            .filter(|&i| is_stable(g - i, n + i))
            .max()
            .unwrap_or(0);
        let i = rng.gen_range(0..=max_tails);
        let core_genus = g - i;
        let mut lambda = Vec::new();
        if core_genus > 0 && rng.gen_bool(0.5) {
            let j = rng.gen_range(1..=core_genus.min(2));
            lambda = vec![0; j as usize];
            lambda[j as usize - 1] = 1;
        }
        let psi_degree = if n > 0 { rng.gen_range(0..=1) } else { 0 };
        let psi = if n > 0 {
            random_psi(rng, n, psi_degree)
        } else {
            vec![]
        };
        let tails = (0..i)
            .map(|_| Tail::new(rng.gen_range(0..=1), rng.gen_range(0..=1)))
            .collect();
        let coeff = Rational::new(
            rng.gen_range(-3i64..=3).into(),
            rng.gen_range(1i64..=3).into(),
        );
        c.add_term(Stratum::new(lambda, psi, tails), coeff);
    }
    c
}

pub fn dim(g: u32, n: u32) -> u32 {
    dimension(g, n)
}
