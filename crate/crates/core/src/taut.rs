//! Classes supported on elliptic-tail strata of `M̄_{g,n}` and the pseudostable
//! correction of the λ classes.
//!
//! A [`Stratum`] with `i` tails stands for the pushforward `𝒢^i_*` of a monomial
//! on `M̄_{g-i,n+i} × M̄_{1,1}^i`: λ and ψ classes on the core, a power of
//! `ψ⋆` at each attaching marking `n + k`, and a power (0 or 1) of `ψ•` on
//! each tail. The tails are labelled, but since `𝒢^i_*` is invariant under
//! relabelling, a stratum is stored with its tails sorted.

use crate::arith::{factorial, format_rational, rat, Rational};
use crate::engine::Engine;
use crate::error::{Error, Result};
use crate::hodge::{ch_to_lambda, lambda_degree, HodgeMonomial};
use crate::moduli::{dimension, is_stable, require_pseudostable, require_stable};
use crate::poly::Algebra;
use crate::polynomial::HodgePolynomial;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::{BTreeMap, HashMap};
use std::fmt;

/// Decoration of one elliptic tail: `ψ⋆^star` at its attaching point on the core,
/// `ψ•^bullet` on the tail itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tail {
    pub star: u32,
    pub bullet: u32,
}

impl Tail {
    pub const BARE: Tail = Tail { star: 0, bullet: 0 };

    pub fn new(star: u32, bullet: u32) -> Self {
        Self { star, bullet }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Stratum {
    /// Exponent of `λ_j` of the core Hodge bundle at index `j - 1`.
    pub core_lambda: Vec<u32>,
    /// Exponents of `ψ_1..ψ_n` at the original markings.
    pub core_psi: Vec<u32>,
    pub tails: Vec<Tail>,
}

impl Stratum {
    pub fn new(core_lambda: Vec<u32>, core_psi: Vec<u32>, tails: Vec<Tail>) -> Self {
        Self {
            core_lambda,
            core_psi,
            tails,
        }
        .canonical()
    }

    fn canonical(mut self) -> Self {
        while self.core_lambda.last() == Some(&0) {
            self.core_lambda.pop();
        }
        self.tails.sort_unstable();
        self
    }

    pub fn tail_count(&self) -> u32 {
        self.tails.len() as u32
    }

    /// Codimension in `M̄_{g,n}`, counting one for each tail.
    pub fn degree(&self) -> u32 {
        lambda_degree(&self.core_lambda)
            + self.core_psi.iter().sum::<u32>()
            + self
                .tails
                .iter()
                .map(|t| t.star + t.bullet + 1)
                .sum::<u32>()
    }
}

/// One summand of a [`TautClass`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StratumTerm {
    pub coeff: Rational,
    pub stratum: Stratum,
}

/// A formal rational combination of decorated elliptic-tail strata on `M̄_{g,n}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TautClass {
    g: u32,
    n: u32,
    terms: BTreeMap<Stratum, Rational>,
}

impl TautClass {
    pub fn zero(g: u32, n: u32) -> Self {
        Self {
            g,
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(g: u32, n: u32) -> Self {
        let mut c = Self::zero(g, n);
        c.add_term(
            Stratum::new(vec![], vec![0; n as usize], vec![]),
            Rational::one(),
        );
        c
    }

    /// `λ_j` on the ambient space, with no tails.
    pub fn lambda(g: u32, n: u32, j: u32) -> Self {
        let mut lambda = vec![0; j as usize];
        if j > 0 {
            lambda[j as usize - 1] = 1;
        }
        let mut c = Self::zero(g, n);
        c.add_term(
            Stratum::new(lambda, vec![0; n as usize], vec![]),
            Rational::one(),
        );
        c
    }

    pub fn from_terms(g: u32, n: u32, terms: impl IntoIterator<Item = StratumTerm>) -> Self {
        let mut c = Self::zero(g, n);
        for t in terms {
            c.add_term(t.stratum, t.coeff);
        }
        c
    }

    /// The pure ψ/λ class of a polynomial, as tail-free terms.
    pub fn from_polynomial(f: &HodgePolynomial) -> Self {
        let mut c = Self::zero(f.genus(), f.marking_count());
        for (e, coeff) in f.terms() {
            c.add_term(
                Stratum::new(e.lambda.clone(), e.psi.clone(), vec![]),
                coeff.clone(),
            );
        }
        c
    }

    pub fn genus(&self) -> u32 {
        self.g
    }

    pub fn marking_count(&self) -> u32 {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Stratum, &Rational)> {
        self.terms.iter()
    }

    /// Number of strata with a nonzero coefficient.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, s: &Stratum) -> Rational {
        self.terms
            .get(&s.clone().canonical())
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Adds `coeff · stratum`, dropping terms that vanish identically:
    /// `ψ•^2 = 0`, an unstable core, or a core λ index above the core genus.
    pub fn add_term(&mut self, stratum: Stratum, coeff: Rational) {
        assert_eq!(
            stratum.core_psi.len(),
            self.n as usize,
            "stratum has the wrong number of markings"
        );
        if coeff.is_zero() {
            return;
        }
        let stratum = stratum.canonical();
        let i = stratum.tail_count();
        if i > self.g || !is_stable(self.g - i, self.n + i) {
            return;
        }
        if stratum.tails.iter().any(|t| t.bullet > 1) {
            return;
        }
        if stratum.core_lambda.len() as u32 > self.g - i {
            return;
        }
        let entry = self
            .terms
            .entry(stratum.clone())
            .or_insert_with(Rational::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&stratum);
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
        for (s, c) in other.terms() {
            out.add_term(s.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero(self.g, self.n);
        for (s, v) in self.terms() {
            out.add_term(s.clone(), v * c);
        }
        out
    }

    /// Drops every term of degree above `d`.
    pub fn truncate_above(&self, d: u32) -> Self {
        let mut out = Self::zero(self.g, self.n);
        for (s, c) in self.terms() {
            if s.degree() <= d {
                out.add_term(s.clone(), c.clone());
            }
        }
        out
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        class_multiply(self, other)
    }
}

impl Algebra for TautClass {
    fn add(&self, other: &Self) -> Self {
        TautClass::add(self, other).expect("classes on the same ambient")
    }
    fn mul(&self, other: &Self) -> Self {
        class_multiply(self, other).expect("classes on the same ambient")
    }
    fn scale(&self, c: &Rational) -> Self {
        TautClass::scale(self, c)
    }
    fn zero_like(&self) -> Self {
        TautClass::zero(self.g, self.n)
    }
}

fn write_power(f: &mut fmt::Formatter<'_>, name: &str, k: u32, first: &mut bool) -> fmt::Result {
    if k == 0 {
        return Ok(());
    }
    if !*first {
        write!(f, "*")?;
    }
    *first = false;
    if k == 1 {
        write!(f, "{name}")
    } else {
        write!(f, "{name}^{k}")
    }
}

impl fmt::Display for Stratum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let inner = |f: &mut fmt::Formatter<'_>| -> fmt::Result {
            let mut first = true;
            for (j, &e) in self.core_lambda.iter().enumerate() {
                write_power(f, &format!("lambda{}", j + 1), e, &mut first)?;
            }
            for (i, &e) in self.core_psi.iter().enumerate() {
                write_power(f, &format!("psi{}", i + 1), e, &mut first)?;
            }
            for (k, t) in self.tails.iter().enumerate() {
                write_power(f, &format!("star{}", k + 1), t.star, &mut first)?;
                write_power(f, &format!("bullet{}", k + 1), t.bullet, &mut first)?;
            }
            if first {
                write!(f, "1")?;
            }
            Ok(())
        };
        if self.tails.is_empty() {
            inner(f)
        } else {
            write!(f, "G{}[", self.tails.len())?;
            inner(f)?;
            write!(f, "]")
        }
    }
}

impl fmt::Display for TautClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (s, c)) in self.terms().enumerate() {
            let negative = c < &Rational::zero();
            let magnitude = if negative { -c.clone() } else { c.clone() };
            match (idx, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if !magnitude.is_one() {
                write!(f, "{}*", format_rational(&magnitude))?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// Restriction of `∏λ_j^{e_j}` from a core to the stratum where `k` new tails
/// bud off it: `c(E) ↦ c(E_core) ∏(1 + ψ•_t)`.
///
/// Returns `(multiplicity, core λ exponents, ψ• exponent per new tail)`, with
/// every tail exponent at most one.
pub fn restrict_lambda(lambda: &[u32], k: usize) -> Vec<(BigInt, Vec<u32>, Vec<u32>)> {
    let mut states: HashMap<(Vec<u32>, Vec<u32>), BigInt> = HashMap::new();
    states.insert((Vec::new(), vec![0; k]), BigInt::one());
    for (idx, &e) in lambda.iter().enumerate() {
        let j = idx + 1;
        for _ in 0..e {
            let mut next: HashMap<(Vec<u32>, Vec<u32>), BigInt> = HashMap::new();
            for ((lam, bullets), count) in &states {
                let free: Vec<usize> = (0..k).filter(|&t| bullets[t] == 0).collect();
                for mask in 0u32..(1 << free.len()) {
                    let s = mask.count_ones() as usize;
                    if s > j {
                        continue;
                    }
                    let mut new_bullets = bullets.clone();
                    for (bit, &t) in free.iter().enumerate() {
                        if mask & (1 << bit) != 0 {
                            new_bullets[t] = 1;
                        }
                    }
                    let mut new_lam = lam.clone();
                    let rest = j - s;
                    if rest > 0 {
                        if new_lam.len() < rest {
                            new_lam.resize(rest, 0);
                        }
                        new_lam[rest - 1] += 1;
                    }
                    *next
                        .entry((new_lam, new_bullets))
                        .or_insert_with(BigInt::zero) += count;
                }
            }
            states = next;
        }
    }
    let mut out: Vec<_> = states
        .into_iter()
        .map(|((lam, bullets), count)| (count, lam, bullets))
        .collect();
    out.sort();
    out
}

/// `λ_j` restricted to a stratum with `k` new tails, as a class with those tails.
///
/// The core λ indices refer to the core of genus `g − k`.
pub fn restrict_lambda_to_tails(g: u32, n: u32, j: u32, k: u32) -> TautClass {
    let mut lambda = vec![0; j as usize];
    if j > 0 {
        lambda[j as usize - 1] = 1;
    }
    let mut out = TautClass::zero(g, n);
    for (count, lam, bullets) in restrict_lambda(&lambda, k as usize) {
        let tails = bullets.iter().map(|&b| Tail::new(0, b)).collect();
        out.add_term(
            Stratum::new(lam, vec![0; n as usize], tails),
            Rational::from_integer(count),
        );
    }
    out
}

/// Sign convention of the excess bundle on a shared tail. Only `Standard`,
/// `c_1 = −ψ⋆ − ψ•`, is geometric; `Flipped` exists to show the self-checks detect it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExcessSign {
    #[default]
    Standard,
    Flipped,
}

/// All partial injections from `0..i` into `0..j`.
fn partial_matchings(i: usize, j: usize) -> Vec<Vec<Option<usize>>> {
    fn go(
        p: usize,
        i: usize,
        used: &mut Vec<bool>,
        cur: &mut Vec<Option<usize>>,
        out: &mut Vec<Vec<Option<usize>>>,
    ) {
        if p == i {
            out.push(cur.clone());
            return;
        }
        cur.push(None);
        go(p + 1, i, used, cur, out);
        cur.pop();
        for q in 0..used.len() {
            if !used[q] {
                used[q] = true;
                cur.push(Some(q));
                go(p + 1, i, used, cur, out);
                cur.pop();
                used[q] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(0, i, &mut vec![false; j], &mut Vec::new(), &mut out);
    out
}

fn multiply_strata(
    a: &Stratum,
    b: &Stratum,
    coeff: &Rational,
    sign: ExcessSign,
    out: &mut TautClass,
) {
    let i = a.tails.len();
    let j = b.tails.len();
    let psi: Vec<u32> = a
        .core_psi
        .iter()
        .zip(&b.core_psi)
        .map(|(x, y)| x + y)
        .collect();
    for matching in partial_matchings(i, j) {
        let matched: Vec<usize> = (0..i).filter(|&p| matching[p].is_some()).collect();
        let mut base: Vec<Tail> = a.tails.clone();
        for &p in &matched {
            let q = matching[p].unwrap();
            base[p].star += b.tails[q].star;
            base[p].bullet += b.tails[q].bullet;
        }
        let unmatched_b: Vec<usize> = (0..j).filter(|q| !matching.contains(&Some(*q))).collect();
        base.extend(unmatched_b.iter().map(|&q| b.tails[q]));
        // positions that are new tails for a's core, resp. for b's core
        let new_for_a: Vec<usize> = (i..i + unmatched_b.len()).collect();
        let new_for_b: Vec<usize> = (0..i).filter(|&p| matching[p].is_none()).collect();

        let restricted_a = restrict_lambda(&a.core_lambda, new_for_a.len());
        let restricted_b = restrict_lambda(&b.core_lambda, new_for_b.len());
        let excess_coeff = match sign {
            ExcessSign::Standard if matched.len() % 2 == 1 => -coeff.clone(),
            _ => coeff.clone(),
        };
        for (count_a, lam_a, bullets_a) in &restricted_a {
            for (count_b, lam_b, bullets_b) in &restricted_b {
                let mut tails = base.clone();
                for (t, &pos) in new_for_a.iter().enumerate() {
                    tails[pos].bullet += bullets_a[t];
                }
                for (t, &pos) in new_for_b.iter().enumerate() {
                    tails[pos].bullet += bullets_b[t];
                }
                let len = lam_a.len().max(lam_b.len());
                let lambda: Vec<u32> = (0..len)
                    .map(|x| {
                        lam_a.get(x).copied().unwrap_or(0) + lam_b.get(x).copied().unwrap_or(0)
                    })
                    .collect();
                let c = &excess_coeff * Rational::from_integer(count_a * count_b);
                // each shared tail picks ψ⋆ or ψ• from its excess factor
                for mask in 0u32..(1 << matched.len()) {
                    let mut decorated = tails.clone();
                    for (bit, &p) in matched.iter().enumerate() {
                        if mask & (1 << bit) != 0 {
                            decorated[p].bullet += 1;
                        } else {
                            decorated[p].star += 1;
                        }
                    }
                    out.add_term(
                        Stratum::new(lambda.clone(), psi.clone(), decorated),
                        c.clone(),
                    );
                }
            }
        }
    }
}

/// Product of two classes via the excess intersection formula for tail strata.
pub fn class_multiply(a: &TautClass, b: &TautClass) -> Result<TautClass> {
    class_multiply_with(a, b, ExcessSign::Standard)
}

pub fn class_multiply_with(a: &TautClass, b: &TautClass, sign: ExcessSign) -> Result<TautClass> {
    a.check_same(b)?;
    let mut out = TautClass::zero(a.g, a.n);
    for (sa, ca) in a.terms() {
        for (sb, cb) in b.terms() {
            multiply_strata(sa, sb, &(ca * cb), sign, &mut out);
        }
    }
    Ok(out)
}

/// `ĥλ_j = λ_j + Σ_{i=1}^{j} (1/i!) 𝒢^i_*(p_0^* λ_{j−i})`.
pub fn hat_lambda(g: u32, n: u32, j: u32) -> Result<TautClass> {
    require_pseudostable(g, n)?;
    if j == 0 {
        return Ok(TautClass::one(g, n));
    }
    if j > g {
        return Ok(TautClass::zero(g, n));
    }
    let mut out = TautClass::lambda(g, n, j);
    for i in 1..=j {
        let mut lambda = vec![0; (j - i) as usize];
        if j > i {
            lambda[(j - i - 1) as usize] = 1;
        }
        let stratum = Stratum::new(lambda, vec![0; n as usize], vec![Tail::BARE; i as usize]);
        out.add_term(stratum, Rational::new(BigInt::one(), factorial(i)));
    }
    Ok(out)
}

/// Pullback of `ch_l(E)` from the pseudostable space:
/// `ch_l(E) − ((−1)^l / l!) 𝒢_*(ψ⋆^{l−1} − ψ• ψ⋆^{l−2})`.
///
/// `ch_l(E)` itself is written in λ classes through Newton's identities.
pub fn t_pullback_ch(g: u32, n: u32, l: u32) -> Result<TautClass> {
    require_stable(g, n)?;
    assert!(l >= 1, "Chern character index starts at 1");
    let mut out = TautClass::zero(g, n);
    for (e, c) in ch_to_lambda(l).terms() {
        out.add_term(
            Stratum::new(e.clone(), vec![0; n as usize], vec![]),
            c.clone(),
        );
    }
    let sign = if l.is_multiple_of(2) {
        -Rational::one()
    } else {
        Rational::one()
    };
    let factor = sign / Rational::from_integer(factorial(l));
    let zeros = vec![0; n as usize];
    out.add_term(
        Stratum::new(vec![], zeros.clone(), vec![Tail::new(l - 1, 0)]),
        factor.clone(),
    );
    if l >= 2 {
        out.add_term(
            Stratum::new(vec![], zeros, vec![Tail::new(l - 2, 1)]),
            -factor,
        );
    }
    Ok(out)
}

impl Engine {
    /// Integral over `M̄_{g,n}`: each stratum factors as a core integral times
    /// `∫_{M̄_{1,1}} ψ• = 1/24` per tail (zero if some tail carries no `ψ•`).
    pub fn class_integrate(&self, class: &TautClass) -> Rational {
        let (g, n) = (class.g, class.n);
        if !is_stable(g, n) {
            return Rational::zero();
        }
        let dim = dimension(g, n);
        let mut acc = Rational::zero();
        for (s, c) in class.terms() {
            if s.degree() != dim || s.tails.iter().any(|t| t.bullet == 0) {
                continue;
            }
            let k = s.tail_count();
            let mut psi = s.core_psi.clone();
            psi.extend(s.tails.iter().map(|t| t.star));
            let core = HodgeMonomial::new(g - k, s.core_lambda.clone(), psi);
            let tails = num_traits::pow(rat(1, 24), k as usize);
            acc += c * tails * self.hodge_integral(&core);
        }
        acc
    }

    /// `∫_{M̄^{ps}_{g,n}} F(λ, ψ) = ∫_{M̄_{g,n}} F(ĥλ, ψ)`.
    pub fn ps_hodge_integral(&self, f: &HodgePolynomial) -> Result<Rational> {
        let (g, n) = (f.genus(), f.marking_count());
        require_pseudostable(g, n)?;
        let dim = dimension(g, n);
        let hats: Vec<TautClass> = (1..=g)
            .map(|j| hat_lambda(g, n, j))
            .collect::<Result<_>>()?;
        let mut acc = Rational::zero();
        for (e, c) in f.terms() {
            if e.lambda.len() as u32 > g && e.lambda[g as usize..].iter().any(|&x| x > 0) {
                continue;
            }
            let mut class = TautClass::zero(g, n);
            class.add_term(Stratum::new(vec![], e.psi.clone(), vec![]), c.clone());
            class = class.truncate_above(dim);
            for (idx, &power) in e.lambda.iter().enumerate() {
                for _ in 0..power {
                    class = class_multiply(&class, &hats[idx])?.truncate_above(dim);
                }
            }
            acc += self.class_integrate(&class);
        }
        Ok(acc)
    }
}

pub fn class_integrate(class: &TautClass) -> Rational {
    Engine::global().class_integrate(class)
}

/// Pseudostable Hodge integral of `F` on the ambient `(g, n)` carried by `F`.
pub fn ps_hodge_integral(f: &HodgePolynomial) -> Result<Rational> {
    Engine::global().ps_hodge_integral(f)
}
