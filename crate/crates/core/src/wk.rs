//! Pure ψ intersection numbers ⟨τ_{d_1}⋯τ_{d_n}⟩_g and κ–ψ integrals.

use crate::arith::{
    for_each_submultiset, group_sorted, odd_double_factorial, rat, split_groups, Rational,
};
use crate::engine::Engine;
use crate::moduli::is_stable;
use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Genus plus a sorted multiset of ψ exponents.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WkKey {
    g: u32,
    d: Vec<u32>,
}

impl WkKey {
    /// Builds the canonical key; the exponents may be given in any order.
    pub fn new(g: u32, exponents: impl Into<Vec<u32>>) -> Self {
        let mut d = exponents.into();
        d.sort_unstable();
        Self { g, d }
    }

    pub fn genus(&self) -> u32 {
        self.g
    }

    pub fn exponents(&self) -> &[u32] {
        &self.d
    }

    pub fn marking_count(&self) -> u32 {
        self.d.len() as u32
    }

    /// True when the key can carry a nonzero value: stable and of top degree.
    pub fn is_top_degree(&self) -> bool {
        let n = self.marking_count();
        is_stable(self.g, n) && self.d.iter().sum::<u32>() == 3 * self.g + n - 3
    }
}

/// `∫ ∏κ_a ∏ψ_i^{e_i}` on `M̄_{g,n}`, with κ_a the pushforward of `ψ_{n+1}^{a+1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KappaPsiMonomial {
    pub g: u32,
    /// ψ exponent for each marking `1..=n`.
    pub psi: Vec<u32>,
    /// One entry `a ≥ 1` per κ_a factor.
    pub kappa: Vec<u32>,
}

impl KappaPsiMonomial {
    pub fn new(g: u32, psi: impl Into<Vec<u32>>, kappa: impl Into<Vec<u32>>) -> Self {
        Self {
            g,
            psi: psi.into(),
            kappa: kappa.into(),
        }
    }

    pub fn n(&self) -> u32 {
        self.psi.len() as u32
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub(crate) struct KappaKey {
    g: u32,
    psi: Vec<u32>,
    kappa: Vec<u32>,
}

impl Engine {
    pub fn wk_integral(&self, key: &WkKey) -> Rational {
        self.wk_sorted(key.g, &key.d)
    }

    /// `d` must be sorted ascending.
    pub(crate) fn wk_sorted(&self, g: u32, d: &[u32]) -> Rational {
        let n = d.len() as u32;
        if !is_stable(g, n) || d.iter().sum::<u32>() != 3 * g + n - 3 {
            return Rational::zero();
        }
        match (g, n) {
            (0, 3) => return Rational::one(),
            (1, 1) => return rat(1, 24),
            _ => {}
        }
        let key = WkKey { g, d: d.to_vec() };
        if let Some(v) = self.wk.get(&key) {
            return v;
        }
        let value = if d[0] == 0 {
            self.string_equation(g, &d[1..])
        } else if d[0] == 1 {
            // dilaton: ⟨τ_1 X⟩_{g,n} = (2g - 2 + n - 1) ⟨X⟩_{g,n-1}
            Rational::from_integer(BigInt::from(2 * g + n - 3)) * self.wk_sorted(g, &d[1..])
        } else {
            self.dvv(g, d)
        };
        self.wk.insert(key, value)
    }

    fn string_equation(&self, g: u32, rest: &[u32]) -> Rational {
        let mut acc = Rational::zero();
        for (value, mult) in group_sorted(rest) {
            if value == 0 {
                continue;
            }
            let mut lowered = rest.to_vec();
            let pos = lowered.iter().position(|&x| x == value).unwrap();
            lowered[pos] -= 1;
            lowered.sort_unstable();
            acc += Rational::from_integer(BigInt::from(mult)) * self.wk_sorted(g, &lowered);
        }
        acc
    }

    /// DVV recursion on the largest exponent `k + 1 ≥ 2`.
    fn dvv(&self, g: u32, d: &[u32]) -> Rational {
        let (&top, rest) = d.split_last().unwrap();
        let k = top - 1;
        let mut acc = Rational::zero();

        for (value, mult) in group_sorted(rest) {
            let num = odd_double_factorial(k + value + 1);
            let den = odd_double_factorial(value);
            let mut raised = rest.to_vec();
            let pos = raised.iter().position(|&x| x == value).unwrap();
            raised[pos] += k;
            raised.sort_unstable();
            acc += Rational::new(num * mult, den) * self.wk_sorted(g, &raised);
        }

        let groups = group_sorted(rest);
        let mut split = Rational::zero();
        for r in 0..k {
            let s = k - 1 - r;
            let weight =
                Rational::from_integer(odd_double_factorial(r + 1) * odd_double_factorial(s + 1));
            if g >= 1 {
                let mut merged = rest.to_vec();
                merged.push(r);
                merged.push(s);
                merged.sort_unstable();
                split += &weight * self.wk_sorted(g - 1, &merged);
            }
            for_each_submultiset(&groups, |choice, ways| {
                let (mut left, mut right) = split_groups(&groups, choice);
                left.push(r);
                right.push(s);
                left.sort_unstable();
                right.sort_unstable();
                let left_n = left.len() as u32;
                let left_sum: u32 = left.iter().sum();
                // genus of the left factor is forced by its degree
                if (left_sum + 3) < left_n || !(left_sum + 3 - left_n).is_multiple_of(3) {
                    return;
                }
                let g1 = (left_sum + 3 - left_n) / 3;
                if g1 > g {
                    return;
                }
                let lv = self.wk_sorted(g1, &left);
                if lv.is_zero() {
                    return;
                }
                let rv = self.wk_sorted(g - g1, &right);
                split += &weight * Rational::from_integer(ways.clone()) * lv * rv;
            });
        }
        acc += split / Rational::from_integer(BigInt::from(2));
        acc / Rational::from_integer(odd_double_factorial(k + 2))
    }

    pub fn kappa_psi_integral(&self, m: &KappaPsiMonomial) -> Rational {
        let mut psi = m.psi.clone();
        psi.sort_unstable();
        let mut kappa = m.kappa.clone();
        kappa.sort_unstable();
        self.kappa_sorted(m.g, &psi, &kappa)
    }

    pub(crate) fn kappa_sorted(&self, g: u32, psi: &[u32], kappa: &[u32]) -> Rational {
        if kappa.is_empty() {
            return self.wk_sorted(g, psi);
        }
        let n = psi.len() as u32;
        if !is_stable(g, n) {
            return Rational::zero();
        }
        let degree: u32 = psi.iter().sum::<u32>() + kappa.iter().sum::<u32>();
        if degree != 3 * g + n - 3 {
            return Rational::zero();
        }
        let key = KappaKey {
            g,
            psi: psi.to_vec(),
            kappa: kappa.to_vec(),
        };
        if let Some(v) = self.kappa.get(&key) {
            return v;
        }
        let first = kappa[0];
        let groups = group_sorted(&kappa[1..]);
        let mut acc = Rational::zero();
        for_each_submultiset(&groups, |choice, ways| {
            let (absorbed, kept) = split_groups(&groups, choice);
            let mut new_psi = psi.to_vec();
            new_psi.push(first + 1 + absorbed.iter().sum::<u32>());
            new_psi.sort_unstable();
            let value = self.kappa_sorted(g, &new_psi, &kept);
            let term = Rational::from_integer(ways.clone()) * value;
            if absorbed.len() % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        });
        self.kappa.insert(key, acc)
    }

    /// κ elimination without the κ memo, removing the entry chosen by `pick` at each step.
    ///
    /// Subsets of the remaining κ entries are enumerated one by one rather than by
    /// multiplicity, so this path shares nothing with [`Engine::kappa_psi_integral`]
    /// beyond the pure ψ numbers.
    pub fn kappa_psi_integral_in_order<P>(&self, m: &KappaPsiMonomial, pick: &mut P) -> Rational
    where
        P: FnMut(&[u32]) -> usize,
    {
        if m.kappa.is_empty() {
            return self.wk_integral(&WkKey::new(m.g, m.psi.clone()));
        }
        let chosen = pick(&m.kappa);
        let first = m.kappa[chosen];
        let others: Vec<u32> = m
            .kappa
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != chosen)
            .map(|(_, &a)| a)
            .collect();
        let mut acc = Rational::zero();
        for mask in 0u32..(1 << others.len()) {
            let mut exponent = first + 1;
            let mut kept = Vec::new();
            for (j, &b) in others.iter().enumerate() {
                if mask & (1 << j) != 0 {
                    exponent += b;
                } else {
                    kept.push(b);
                }
            }
            let mut psi = m.psi.clone();
            psi.push(exponent);
            let value =
                self.kappa_psi_integral_in_order(&KappaPsiMonomial::new(m.g, psi, kept), pick);
            if mask.count_ones() % 2 == 0 {
                acc += value;
            } else {
                acc -= value;
            }
        }
        acc
    }
}

/// Exact value of ⟨τ_{d_1}⋯τ_{d_n}⟩_g using the shared cache.
pub fn wk_integral(key: &WkKey) -> Rational {
    Engine::global().wk_integral(key)
}

/// Exact value of `∫_{M̄_{g,n}} ∏κ_a ∏ψ_i^{e_i}` using the shared cache.
pub fn kappa_psi_integral(m: &KappaPsiMonomial) -> Rational {
    Engine::global().kappa_psi_integral(m)
}

/// `(n - 3)! / ∏ d_i!`, the genus-zero closed form (valid at top degree).
pub fn genus_zero_closed_form(d: &[u32]) -> Rational {
    let n = d.len() as u32;
    let den = d
        .iter()
        .fold(BigInt::one(), |acc, &x| acc * crate::arith::factorial(x));
    Rational::new(crate::arith::factorial(n - 3), den)
}
