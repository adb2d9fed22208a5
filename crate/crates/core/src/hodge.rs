//! Stable Hodge integrals: λ classes are rewritten in Chern characters of the
//! Hodge bundle, and each Chern character is eliminated with Mumford's
//! Grothendieck–Riemann–Roch formula until only κ and ψ classes remain.

use crate::arith::{
    bernoulli, factorial, for_each_submultiset, group_sorted, is_even, split_groups, Rational,
};
use crate::engine::Engine;
use crate::moduli::{dimension, is_stable};
use crate::poly::{bell_polynomial, Poly};
use num_bigint::BigInt;
use num_traits::{One, Zero};

/// A monomial `∏λ_j^{a_j} ∏ψ_i^{e_i}` on `M̄_{g,n}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HodgeMonomial {
    pub g: u32,
    /// Exponent of `λ_j` at index `j - 1`.
    pub lambda: Vec<u32>,
    /// Exponent of `ψ_i` at index `i - 1`; its length is `n`.
    pub psi: Vec<u32>,
}

impl HodgeMonomial {
    pub fn new(g: u32, lambda: impl Into<Vec<u32>>, psi: impl Into<Vec<u32>>) -> Self {
        Self {
            g,
            lambda: lambda.into(),
            psi: psi.into(),
        }
    }

    pub fn n(&self) -> u32 {
        self.psi.len() as u32
    }

    pub fn degree(&self) -> u32 {
        lambda_degree(&self.lambda) + self.psi.iter().sum::<u32>()
    }
}

pub(crate) fn lambda_degree(lambda: &[u32]) -> u32 {
    lambda
        .iter()
        .enumerate()
        .map(|(i, &e)| (i as u32 + 1) * e)
        .sum()
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub(crate) struct HodgeKey {
    g: u32,
    lambda: Vec<u32>,
    psi: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub(crate) struct ChKey {
    g: u32,
    psi: Vec<u32>,
    kappa: Vec<u32>,
    ch: Vec<u32>,
}

/// `(−1)^{ℓ−1} (ℓ−1)! ℓ!`, the factor turning `ch_ℓ` into the Bell variable `x_ℓ`.
fn bell_weight(l: u32) -> Rational {
    let magnitude = Rational::from_integer(factorial(l - 1) * factorial(l));
    if l % 2 == 1 {
        magnitude
    } else {
        -magnitude
    }
}

/// `λ_j = (1/j!) B_j(x)` with `x_ℓ = (−1)^{ℓ−1}(ℓ−1)! ℓ! ch_ℓ`, as a polynomial in
/// `ch_1, ch_2, …` (variable `ℓ - 1`). Zero when `j > g`.
pub fn lambda_to_ch(j: u32, g: u32) -> Poly {
    if j > g {
        return Poly::zero();
    }
    let bell = bell_polynomial(j);
    let mut out = Poly::zero();
    for (e, c) in bell.terms() {
        let mut coeff = c.clone();
        for (i, &k) in e.iter().enumerate() {
            coeff *= num_traits::pow(bell_weight(i as u32 + 1), k as usize);
        }
        out.add_term(e.clone(), coeff);
    }
    out.scale(&Rational::new(BigInt::one(), factorial(j)))
}

/// `ch_ℓ` as a polynomial in `λ_1, λ_2, …` (variable `j - 1`), via Newton's identities.
pub fn ch_to_lambda(l: u32) -> Poly {
    // power sums p_k in terms of elementary symmetric e_j = λ_j
    let mut power: Vec<Poly> = vec![Poly::constant(Rational::zero())];
    for k in 1..=l {
        let sign_k = if k % 2 == 1 {
            Rational::one()
        } else {
            -Rational::one()
        };
        let mut p = Poly::var(k as usize - 1).scale(&(sign_k * Rational::from_integer(k.into())));
        for i in 1..k {
            let sign = if i % 2 == 1 {
                Rational::one()
            } else {
                -Rational::one()
            };
            p = p.add(
                &Poly::var(i as usize - 1)
                    .mul(&power[(k - i) as usize])
                    .scale(&sign),
            );
        }
        power.push(p);
    }
    power[l as usize].scale(&Rational::new(BigInt::one(), factorial(l)))
}

/// Drops monomials containing some `ch_{2k}`, `k ≥ 1`; these vanish for the Hodge bundle.
pub fn drop_even_ch(p: &Poly) -> Poly {
    p.filter(|e| {
        e.iter()
            .enumerate()
            .all(|(i, &k)| k == 0 || !is_even(i as u32 + 1))
    })
}

impl Engine {
    pub fn hodge_integral(&self, m: &HodgeMonomial) -> Rational {
        let g = m.g;
        let n = m.n();
        if !is_stable(g, n) || m.degree() != dimension(g, n) {
            return Rational::zero();
        }
        let mut lambda = m.lambda.clone();
        while lambda.last() == Some(&0) {
            lambda.pop();
        }
        if lambda.len() as u32 > g {
            return Rational::zero();
        }
        let mut psi = m.psi.clone();
        psi.sort_unstable();
        if lambda.is_empty() {
            return self.wk_sorted(g, &psi);
        }
        let key = HodgeKey {
            g,
            lambda: lambda.clone(),
            psi: psi.clone(),
        };
        if let Some(v) = self.hodge.get(&key) {
            return v;
        }
        let mut expansion = Poly::one();
        for (i, &e) in lambda.iter().enumerate() {
            let factor = drop_even_ch(&lambda_to_ch(i as u32 + 1, g));
            for _ in 0..e {
                expansion = drop_even_ch(&expansion.mul(&factor));
            }
        }
        let mut acc = Rational::zero();
        for (e, c) in expansion.terms() {
            let mut ch = Vec::new();
            for (i, &k) in e.iter().enumerate() {
                ch.extend(std::iter::repeat_n(i as u32 + 1, k as usize));
            }
            acc += c * self.ch_integral(g, &psi, &[], &ch);
        }
        self.hodge.insert(key, acc)
    }

    /// `∫ ∏ψ ∏κ ∏ch_ℓ(E)` on `M̄_{g,n}`; all slices sorted ascending.
    pub(crate) fn ch_integral(&self, g: u32, psi: &[u32], kappa: &[u32], ch: &[u32]) -> Rational {
        let n = psi.len() as u32;
        if !is_stable(g, n) {
            return Rational::zero();
        }
        let degree: u32 =
            psi.iter().sum::<u32>() + kappa.iter().sum::<u32>() + ch.iter().sum::<u32>();
        if degree != dimension(g, n) {
            return Rational::zero();
        }
        if ch.is_empty() {
            return self.kappa_sorted(g, psi, kappa);
        }
        if g == 0 || ch.iter().any(|&l| is_even(l)) {
            return Rational::zero();
        }
        let key = ChKey {
            g,
            psi: psi.to_vec(),
            kappa: kappa.to_vec(),
            ch: ch.to_vec(),
        };
        if let Some(v) = self.ch.get(&key) {
            return v;
        }
        let value = self.eliminate_ch(g, psi, kappa, ch);
        self.ch.insert(key, value)
    }

    /// ch_ℓ = Bern_{ℓ+1}/(ℓ+1)! [κ_ℓ − Σψ_i^ℓ + ½ Σ_gluings ξ_*(Σ_{a+b=ℓ−1} (−1)^a ψ'^a ψ''^b)].
    fn eliminate_ch(&self, g: u32, psi: &[u32], kappa: &[u32], ch: &[u32]) -> Rational {
        let (&l, rest) = ch.split_last().unwrap();
        let prefactor = bernoulli(l + 1) / Rational::from_integer(factorial(l + 1));

        let mut with_kappa = kappa.to_vec();
        with_kappa.push(l);
        with_kappa.sort_unstable();
        let mut acc = self.ch_integral(g, psi, &with_kappa, rest);

        for (value, mult) in group_sorted(psi) {
            let mut raised = psi.to_vec();
            let pos = raised.iter().position(|&x| x == value).unwrap();
            raised[pos] += l;
            raised.sort_unstable();
            acc -= Rational::from_integer(mult.into()) * self.ch_integral(g, &raised, kappa, rest);
        }

        let mut boundary = Rational::zero();
        for a in 0..l {
            let b = l - 1 - a;
            let mut term = Rational::zero();
            if g >= 1 {
                let mut glued = psi.to_vec();
                glued.push(a);
                glued.push(b);
                glued.sort_unstable();
                term += self.ch_integral(g - 1, &glued, kappa, rest);
            }
            term += self.separating_boundary(g, psi, kappa, rest, a, b);
            if a % 2 == 0 {
                boundary += term;
            } else {
                boundary -= term;
            }
        }
        acc += boundary / Rational::from_integer(2.into());
        prefactor * acc
    }

    /// Sum over ordered separating gluings `M̄_{h,S∪•} × M̄_{g−h,Sᶜ∪•}` with `ψ'^a ψ''^b` at the node.
    fn separating_boundary(
        &self,
        g: u32,
        psi: &[u32],
        kappa: &[u32],
        ch: &[u32],
        a: u32,
        b: u32,
    ) -> Rational {
        let n = psi.len() as u32;
        let psi_groups = group_sorted(psi);
        let kappa_groups = group_sorted(kappa);
        let ch_groups = group_sorted(ch);
        let mut total = Rational::zero();
        for h in 0..=g {
            for_each_submultiset(&psi_groups, |psi_choice, psi_ways| {
                let (mut left_psi, mut right_psi) = split_groups(&psi_groups, psi_choice);
                let n_left = left_psi.len() as u32 + 1;
                let n_right = n - left_psi.len() as u32 + 1;
                if !is_stable(h, n_left) || !is_stable(g - h, n_right) {
                    return;
                }
                left_psi.push(a);
                right_psi.push(b);
                left_psi.sort_unstable();
                right_psi.sort_unstable();
                let left_target = dimension(h, n_left);
                let left_psi_deg: u32 = left_psi.iter().sum();
                if left_psi_deg > left_target {
                    return;
                }
                for_each_submultiset(&kappa_groups, |kappa_choice, kappa_ways| {
                    let (left_kappa, right_kappa) = split_groups(&kappa_groups, kappa_choice);
                    let kappa_deg: u32 = left_kappa.iter().sum();
                    if left_psi_deg + kappa_deg > left_target {
                        return;
                    }
                    for_each_submultiset(&ch_groups, |ch_choice, ch_ways| {
                        let (left_ch, right_ch) = split_groups(&ch_groups, ch_choice);
                        if left_psi_deg + kappa_deg + left_ch.iter().sum::<u32>() != left_target {
                            return;
                        }
                        let left = self.ch_integral(h, &left_psi, &left_kappa, &left_ch);
                        if left.is_zero() {
                            return;
                        }
                        let right = self.ch_integral(g - h, &right_psi, &right_kappa, &right_ch);
                        let ways = psi_ways * kappa_ways * ch_ways;
                        total += Rational::from_integer(ways) * left * right;
                    });
                });
            });
        }
        total
    }
}

/// Exact stable Hodge integral using the shared caches.
pub fn hodge_integral(m: &HodgeMonomial) -> Rational {
    Engine::global().hodge_integral(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};

    #[test]
    fn lambda_to_ch_small_cases() {
        assert_eq!(lambda_to_ch(0, 3), Poly::one());
        assert_eq!(lambda_to_ch(1, 3), Poly::var(0));
        // Newton: e_2 = (p_1^2 - p_2)/2 with p_1 = ch_1, p_2 = 2 ch_2
        let expected = Poly::var(0)
            .pow(2)
            .sub(&Poly::var(1).scale(&int(2)))
            .scale(&rat(1, 2));
        assert_eq!(lambda_to_ch(2, 3), expected);
        assert!(lambda_to_ch(4, 3).is_zero());
    }

    #[test]
    fn ch_lambda_round_trip() {
        for j in 0..=6u32 {
            let ch_values: Vec<Poly> = (1..=j.max(1)).map(ch_to_lambda).collect();
            let composed = lambda_to_ch(j, 10).eval(&ch_values, &Poly::one());
            let expected = if j == 0 {
                Poly::one()
            } else {
                Poly::var(j as usize - 1)
            };
            assert_eq!(composed, expected, "j = {j}");
        }
    }

    #[test]
    fn ch_to_lambda_low_degree() {
        assert_eq!(ch_to_lambda(1), Poly::var(0));
        // ch_2 = (λ_1^2 - 2λ_2)/2
        let expected = Poly::var(0)
            .pow(2)
            .sub(&Poly::var(1).scale(&int(2)))
            .scale(&rat(1, 2));
        assert_eq!(ch_to_lambda(2), expected);
    }

    #[test]
    fn basic_integrals() {
        let e = Engine::new();
        assert_eq!(
            e.hodge_integral(&HodgeMonomial::new(1, vec![1], vec![0])),
            rat(1, 24)
        );
        assert_eq!(
            e.hodge_integral(&HodgeMonomial::new(2, vec![], vec![4])),
            rat(1, 1152)
        );
        // 2λ_2 ψ^2 − λ_1^2 ψ^2 on M̄_{2,1}
        let a = e.hodge_integral(&HodgeMonomial::new(2, vec![0, 1], vec![2]));
        let b = e.hodge_integral(&HodgeMonomial::new(2, vec![2], vec![2]));
        assert_eq!(int(2) * a - b, int(0));
        // 2ψ_1 − λ_1 on M̄_{1,1}
        let psi = e.hodge_integral(&HodgeMonomial::new(1, vec![], vec![1]));
        let lam = e.hodge_integral(&HodgeMonomial::new(1, vec![1], vec![0]));
        assert_eq!(int(2) * psi - lam, rat(1, 24));
    }

    #[test]
    fn known_linear_hodge_values() {
        let e = Engine::new();
        // λ_g λ_{g-1} λ_{g-2} on M̄_3 is 1/1451520
        assert_eq!(
            e.hodge_integral(&HodgeMonomial::new(3, vec![1, 1, 1], vec![])),
            rat(1, 1451520)
        );
        // ∫_{M̄_{2,1}} λ_2 ψ_1^2 = 7/5760, ∫_{M̄_2} λ_1^3 = 1/2880
        assert_eq!(
            e.hodge_integral(&HodgeMonomial::new(2, vec![0, 1], vec![2])),
            rat(7, 5760)
        );
        assert_eq!(
            e.hodge_integral(&HodgeMonomial::new(2, vec![3], vec![])),
            rat(1, 2880)
        );
    }

    #[test]
    fn ch_parity_vanishing() {
        let e = Engine::new();
        assert_eq!(e.ch_integral(2, &[2], &[], &[2]), int(0));
        assert_eq!(e.ch_integral(3, &[], &[3, 2], &[1, 2]), int(0));
    }

    #[test]
    fn rank_bound_and_degree_mismatch() {
        let e = Engine::new();
        assert_eq!(
            e.hodge_integral(&HodgeMonomial::new(1, vec![0, 1], vec![])),
            int(0)
        );
        assert_eq!(
            e.hodge_integral(&HodgeMonomial::new(2, vec![1], vec![1])),
            int(0)
        );
    }
}
