//! Desk-scale property suites run by `pshodge selfcheck`.
//!
//! Everything here is deterministic: fixed seeds, fixed ranges, and no timing
//! in the report, so two runs print identical text.

use num_bigint::BigInt;
use pshodge::arith::{factorial, int};
use pshodge::hurwitz::{elsv_value, hurwitz_brute, riemann_hurwitz_m, HurwitzInstance};
use pshodge::moduli::{dimension, is_pseudostable, is_stable};
use pshodge::taut::{class_multiply_with, ExcessSign};
use pshodge::{
    hat_lambda, ps_hodge_integral, stable_integral, wk_integral, HodgePolynomial, Rational,
    Stratum, Tail, TautClass, WkKey,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteResult {
    pub name: &'static str,
    /// Number of individual checks, or the first failure.
    pub outcome: Result<usize, String>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.outcome.is_ok()
    }
}

impl fmt::Display for SuiteResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.outcome {
            Ok(count) => write!(f, "PASS  {} ({count} checks)", self.name),
            Err(why) => write!(f, "FAIL  {}: {why}", self.name),
        }
    }
}

/// Runs every suite; `sign` selects the excess-intersection convention used by
/// the class-product suites, so that a wrong sign can be shown to be caught.
pub fn run(sign: ExcessSign) -> Vec<SuiteResult> {
    vec![
        suite("one-point psi values", one_point),
        suite("Mumford relations", mumford_relations),
        suite("linear Hodge equality", linear_hodge),
        suite("Mumford-failure series", mumford_failure),
        suite("ELSV agreement", elsv),
        suite("hat-lambda1 squared", || hat_lambda_square(sign)),
        suite("algebra properties", || algebra(sign)),
    ]
}

fn suite(name: &'static str, body: impl FnOnce() -> Result<usize, String>) -> SuiteResult {
    SuiteResult {
        name,
        outcome: body(),
    }
}

fn psi_monomials(n: u32, degree: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return if degree == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 0..=degree {
        for mut rest in psi_monomials(n - 1, degree - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn psi_polynomial(g: u32, n: u32, psi: &[u32]) -> HodgePolynomial {
    let mut p = HodgePolynomial::zero(g, n);
    p.add_term(vec![], psi.to_vec(), int(1));
    p
}

/// `∫_{M̄^ps_{g,n}} (2λ_2 − λ_1²) ψ_1^{3g−5+n}`.
pub fn mumford_failure_integral(g: u32, n: u32) -> pshodge::Result<Rational> {
    let l1 = HodgePolynomial::lambda(g, n, 1);
    let l2 = HodgePolynomial::lambda(g, n, 2);
    let f = l2
        .scale(&int(2))
        .sub(&l1.pow(2))?
        .mul(&HodgePolynomial::psi(g, n, 1).pow(3 * g - 5 + n))?;
    ps_hodge_integral(&f)
}

/// `−1/(24^g (g−1)!)`, the coefficient of `t^g` in `−(t/24)(e^{t/24} − 1)`.
pub fn mumford_failure_expected(g: u32) -> Rational {
    -Rational::new(BigInt::from(1), BigInt::from(24).pow(g) * factorial(g - 1))
}

fn one_point() -> Result<usize, String> {
    for g in 1..=6u32 {
        let value = wk_integral(&WkKey::new(g, vec![3 * g - 2]));
        let expected = Rational::new(BigInt::from(1), BigInt::from(24).pow(g) * factorial(g));
        if value != expected {
            return Err(format!("g={g}: got {value}, expected {expected}"));
        }
    }
    Ok(6)
}

fn mumford_relations() -> Result<usize, String> {
    let mut count = 0;
    for g in 1..=3u32 {
        for n in 0..=2u32 {
            if !is_stable(g, n) {
                continue;
            }
            let mut plus = HodgePolynomial::constant(g, n, int(1));
            let mut minus = HodgePolynomial::constant(g, n, int(1));
            for j in 1..=g {
                let l = HodgePolynomial::lambda(g, n, j);
                plus = plus.add(&l).map_err(|e| e.to_string())?;
                let s = if j % 2 == 0 { int(1) } else { int(-1) };
                minus = minus.add(&l.scale(&s)).map_err(|e| e.to_string())?;
            }
            let product = plus.mul(&minus).map_err(|e| e.to_string())?;
            let dim = dimension(g, n);
            for d in 1..=(2 * g).min(dim) {
                let part = product.homogeneous_part(d);
                for psi in psi_monomials(n, dim - d) {
                    let f = part
                        .mul(&psi_polynomial(g, n, &psi))
                        .map_err(|e| e.to_string())?;
                    let v = stable_integral(&f).map_err(|e| e.to_string())?;
                    if v != int(0) {
                        return Err(format!("(g,n)=({g},{n}), degree {d}, psi {psi:?}: {v}"));
                    }
                    count += 1;
                }
            }
        }
    }
    Ok(count)
}

fn linear_hodge() -> Result<usize, String> {
    let mut count = 0;
    for g in 2..=3u32 {
        for n in 0..=2u32 {
            if !is_pseudostable(g, n) {
                continue;
            }
            let dim = dimension(g, n);
            for j in 1..=g.min(dim) {
                for psi in psi_monomials(n, dim - j) {
                    let f = HodgePolynomial::lambda(g, n, j)
                        .mul(&psi_polynomial(g, n, &psi))
                        .map_err(|e| e.to_string())?;
                    let ps = ps_hodge_integral(&f).map_err(|e| e.to_string())?;
                    let st = stable_integral(&f).map_err(|e| e.to_string())?;
                    if ps != st {
                        return Err(format!(
                            "(g,n)=({g},{n}), lambda{j} psi {psi:?}: {ps} vs {st}"
                        ));
                    }
                    count += 1;
                }
            }
        }
    }
    Ok(count)
}

fn mumford_failure() -> Result<usize, String> {
    let mut count = 0;
    for g in 2..=4u32 {
        for n in 1..=2u32 {
            let v = mumford_failure_integral(g, n).map_err(|e| e.to_string())?;
            if v != mumford_failure_expected(g) {
                return Err(format!(
                    "(g,n)=({g},{n}): {v} vs {}",
                    mumford_failure_expected(g)
                ));
            }
            count += 1;
        }
    }
    Ok(count)
}

fn partitions(d: u32, max: u32) -> Vec<Vec<u32>> {
    if d == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in (1..=d.min(max)).rev() {
        for mut rest in partitions(d - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn elsv() -> Result<usize, String> {
    let mut count = 0;
    for d in 1..=4u32 {
        for mu in partitions(d, d) {
            for g in 0..=3u32 {
                if !is_stable(g, mu.len() as u32) {
                    continue;
                }
                let m = riemann_hurwitz_m(g, &mu);
                if m > 7 {
                    continue;
                }
                let inst = HurwitzInstance::new(mu.clone(), m).map_err(|e| e.to_string())?;
                let brute = hurwitz_brute(&inst).map_err(|e| e.to_string())?;
                let formula = elsv_value(g, &mu).map_err(|e| e.to_string())?;
                if Rational::from_integer(brute.into()) != formula {
                    return Err(format!("g={g}, mu={mu:?}: {brute} vs {formula}"));
                }
                count += 1;
            }
        }
    }
    Ok(count)
}

fn hat_lambda_square(sign: ExcessSign) -> Result<usize, String> {
    let mut count = 0;
    for (g, n) in [(2, 1), (2, 2), (3, 0), (3, 1)] {
        let h1 = hat_lambda(g, n, 1).map_err(|e| e.to_string())?;
        let square = class_multiply_with(&h1, &h1, sign).map_err(|e| e.to_string())?;
        let z = vec![0; n as usize];
        let mut expected = TautClass::zero(g, n);
        expected.add_term(Stratum::new(vec![2], z.clone(), vec![]), int(1));
        expected.add_term(Stratum::new(vec![1], z.clone(), vec![Tail::BARE]), int(2));
        expected.add_term(
            Stratum::new(vec![], z.clone(), vec![Tail::new(0, 1)]),
            int(1),
        );
        expected.add_term(
            Stratum::new(vec![], z.clone(), vec![Tail::new(1, 0)]),
            int(-1),
        );
        expected.add_term(Stratum::new(vec![], z, vec![Tail::BARE; 2]), int(1));
        if square != expected {
            return Err(format!(
                "(g,n)=({g},{n}): got {square}, expected {expected}"
            ));
        }
        count += 1;
    }
    Ok(count)
}

fn random_class(rng: &mut ChaCha8Rng, g: u32, n: u32) -> TautClass {
    let mut c = TautClass::zero(g, n);
    for _ in 0..rng.gen_range(1..=3) {
        let max_tails = (0..=g.min(3))
            .filter(|&i| is_stable(g - i, n + i))
            .max()
            .unwrap_or(0);
        let tails_count = rng.gen_range(0..=max_tails);
        let core_genus = g - tails_count;
        let mut lambda = Vec::new();
        if core_genus > 0 && rng.gen_bool(0.5) {
            let j = rng.gen_range(1..=core_genus.min(2)) as usize;
            lambda = vec![0; j];
            lambda[j - 1] = 1;
        }
        let mut psi = vec![0; n as usize];
        if n > 0 && rng.gen_bool(0.5) {
            psi[rng.gen_range(0..n as usize)] = 1;
        }
        let tails = (0..tails_count)
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

fn algebra(sign: ExcessSign) -> Result<usize, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let ambients = [(2, 0), (2, 1), (2, 2), (3, 0), (3, 1), (4, 0)];
    let triples = 40;
    let mul =
        |a: &TautClass, b: &TautClass| class_multiply_with(a, b, sign).map_err(|e| e.to_string());
    for t in 0..triples {
        let (g, n) = ambients[rng.gen_range(0..ambients.len())];
        let a = random_class(&mut rng, g, n);
        let b = random_class(&mut rng, g, n);
        let c = random_class(&mut rng, g, n);
        let ab = mul(&a, &b)?;
        if ab != mul(&b, &a)? {
            return Err(format!(
                "triple {t}: product does not commute for {a} and {b}"
            ));
        }
        if mul(&ab, &c)? != mul(&a, &mul(&b, &c)?)? {
            return Err(format!(
                "triple {t}: product is not associative for {a}, {b}, {c}"
            ));
        }
    }
    Ok(2 * triples)
}
