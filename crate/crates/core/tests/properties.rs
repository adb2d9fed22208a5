mod common;

use common::*;
use proptest::prelude::*;
use pshodge::arith::int;
use pshodge::hodge::{ch_to_lambda, lambda_to_ch};
use pshodge::hurwitz::{canonical_permutation, count_transitive_factorizations, Composition};
use pshodge::moduli::is_stable;
use pshodge::poly::Poly;
use pshodge::wk::genus_zero_closed_form;
use pshodge::{
    class_integrate, class_multiply, hat_lambda, hodge_integral, ps_hodge_integral,
    stable_integral, wk_integral, HodgeMonomial, HodgePolynomial, Rational, WkKey,
};
use rand::Rng;

/// A genus and exponent list with `3g − 3 + n ≤ max_dim` and top degree.
fn top_degree_key(max_g: u32, max_dim: u32) -> impl Strategy<Value = (u32, Vec<u32>)> {
    (0..=max_g, 1..=8u32, any::<u64>()).prop_filter_map("unstable", move |(g, n, seed)| {
        if !is_stable(g, n) || dim(g, n) > max_dim {
            return None;
        }
        let mut r = rng(seed);
        Some((g, random_psi(&mut r, n, dim(g, n))))
    })
}

fn lambda_poly_to_hodge(p: &Poly, g: u32, n: u32, psi: &[u32]) -> HodgePolynomial {
    let mut out = HodgePolynomial::zero(g, n);
    for (e, c) in p.terms() {
        out.add_term(e.clone(), psi.to_vec(), c.clone());
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn string_equation((g, d) in top_degree_key(3, 11)) {
        let mut with_point = d.clone();
        with_point.push(0);
        let lhs = wk_integral(&WkKey::new(g, with_point));
        let mut rhs = int(0);
        for i in 0..d.len() {
            if d[i] > 0 {
                let mut lowered = d.clone();
                lowered[i] -= 1;
                rhs += wk_integral(&WkKey::new(g, lowered));
            }
        }
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn dilaton_equation((g, d) in top_degree_key(3, 11)) {
        let n = d.len() as i64;
        let mut with_point = d.clone();
        with_point.push(1);
        let lhs = wk_integral(&WkKey::new(g, with_point));
        prop_assert_eq!(lhs, int(2 * g as i64 - 2 + n) * wk_integral(&WkKey::new(g, d)));
    }

    #[test]
    fn genus_zero_matches_closed_form((_, d) in top_degree_key(0, 9)) {
        prop_assert_eq!(wk_integral(&WkKey::new(0, d.clone())), genus_zero_closed_form(&d));
    }

    #[test]
    fn hodge_integrals_are_symmetric(g in 1..=3u32, n in 1..=4u32, seed in any::<u64>()) {
        prop_assume!(dim(g, n) >= 1);
        let mut r = rng(seed);
        let j = r.gen_range(1..=g.min(dim(g, n)));
        let mut lambda = vec![0; j as usize];
        lambda[j as usize - 1] = 1;
        let psi = random_psi(&mut r, n, dim(g, n) - j);
        let mut permuted = psi.clone();
        permuted.rotate_left(1);
        let a = hodge_integral(&HodgeMonomial::new(g, lambda.clone(), psi));
        let b = hodge_integral(&HodgeMonomial::new(g, lambda, permuted));
        prop_assert_eq!(a, b);
    }

    #[test]
    fn stable_integral_is_linear(g in 1..=3u32, n in 1..=3u32, a in -5i64..=5, b in -5i64..=5, seed in any::<u64>()) {
        let mut r = rng(seed);
        let top = dim(g, n);
        let j = r.gen_range(1..=g.min(top));
        let f = HodgePolynomial::lambda(g, n, j)
            .mul(&psi_polynomial(g, n, &random_psi(&mut r, n, top - j)))
            .unwrap();
        let h = psi_polynomial(g, n, &random_psi(&mut r, n, top));
        let combo = f.scale(&int(a)).add(&h.scale(&int(b))).unwrap();
        let lhs = stable_integral(&combo).unwrap();
        let rhs = int(a) * stable_integral(&f).unwrap() + int(b) * stable_integral(&h).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn psi_only_integrands_ignore_the_space(g in 1..=4u32, n in 1..=3u32, seed in any::<u64>()) {
        prop_assume!(pshodge::moduli::is_pseudostable(g, n));
        let mut r = rng(seed);
        let f = psi_polynomial(g, n, &random_psi(&mut r, n, dim(g, n)));
        prop_assert_eq!(ps_hodge_integral(&f).unwrap(), stable_integral(&f).unwrap());
    }
}

#[test]
fn lambda_g_squared_vanishes() {
    for g in 1..=3u32 {
        for n in 1..=3u32 {
            if 2 * g > dim(g, n) {
                continue;
            }
            let mut lambda = vec![0; g as usize];
            lambda[g as usize - 1] = 2;
            for psi in psi_monomials(n, dim(g, n) - 2 * g) {
                let value = hodge_integral(&HodgeMonomial::new(g, lambda.clone(), psi.clone()));
                assert_eq!(value, int(0), "g = {g}, n = {n}, psi {psi:?}");
            }
        }
    }
}

#[test]
fn even_chern_characters_integrate_to_zero() {
    let mut r = rng(11);
    for _ in 0..30 {
        let g = r.gen_range(2..=4u32);
        let n = r.gen_range(1..=2u32);
        for l in [2u32, 4] {
            if l > dim(g, n) {
                continue;
            }
            let psi = random_psi(&mut r, n, dim(g, n) - l);
            let f = lambda_poly_to_hodge(&ch_to_lambda(l), g, n, &psi);
            assert_eq!(
                stable_integral(&f).unwrap(),
                int(0),
                "ch{l} on ({g},{n}) psi {psi:?}"
            );
        }
    }
}

#[test]
fn ch_lambda_round_trip() {
    for l in 1..=6u32 {
        let lambdas: Vec<Poly> = (1..=l).map(|j| lambda_to_ch(j, l)).collect();
        let back = ch_to_lambda(l).eval(&lambdas, &Poly::one());
        assert_eq!(back, Poly::var(l as usize - 1), "l = {l}");
    }
}

#[test]
fn hat_lambda_corrections_vanish_against_psi() {
    let mut r = rng(12);
    for (g, n) in pseudostable_ambients(4, 3) {
        if n == 0 {
            continue;
        }
        for j in 1..=g.min(dim(g, n)) {
            let hat = hat_lambda(g, n, j).unwrap();
            let psi = random_psi(&mut r, n, dim(g, n) - j);
            let psi_c = psi_class(g, n, &psi);
            for (stratum, coeff) in hat.terms() {
                if stratum.tail_count() == 0 {
                    continue;
                }
                let mut single = pshodge::TautClass::zero(g, n);
                single.add_term(stratum.clone(), coeff.clone());
                let value = class_integrate(&class_multiply(&single, &psi_c).unwrap());
                assert_eq!(value, int(0), "({g},{n}) j = {j}: {single}");
            }
        }
    }
}

#[test]
fn products_commute_under_integration() {
    let mut r = rng(13);
    let ambients: Vec<(u32, u32)> = pseudostable_ambients(3, 2)
        .into_iter()
        .filter(|&(_, n)| n >= 1)
        .collect();
    for _ in 0..30 {
        let (g, n) = ambients[r.gen_range(0..ambients.len())];
        let a = random_class(&mut r, g, n);
        let b = random_class(&mut r, g, n);
        let ab = class_multiply(&a, &b).unwrap();
        let ba = class_multiply(&b, &a).unwrap();
        for d in 0..=dim(g, n) {
            let psi = random_psi(&mut r, n, d);
            let c = psi_class(g, n, &psi);
            let x: Rational = class_integrate(&class_multiply(&ab, &c).unwrap());
            let y: Rational = class_integrate(&class_multiply(&ba, &c).unwrap());
            assert_eq!(x, y);
        }
    }
}

#[test]
fn hurwitz_parity_obstruction() {
    for mu in [
        vec![1u32],
        vec![2],
        vec![1, 1],
        vec![3],
        vec![2, 1],
        vec![2, 2],
        vec![3, 1],
    ] {
        let d: u32 = mu.iter().sum();
        for m in 0..=6u32 {
            if (m + d - mu.len() as u32).is_multiple_of(2) {
                continue;
            }
            let target = canonical_permutation(&mu);
            for composition in [Composition::LeftToRight, Composition::RightToLeft] {
                let count = count_transitive_factorizations(&target, m, composition).unwrap();
                assert_eq!(count, 0, "mu = {mu:?}, m = {m}");
            }
        }
    }
}

#[test]
fn concurrent_lookups_agree() {
    let engine = std::sync::Arc::new(pshodge::Engine::new());
    let keys: Vec<WkKey> = (1..=5u32)
        .flat_map(|g| {
            [
                WkKey::new(g, vec![3 * g - 2]),
                WkKey::new(g, vec![1, 3 * g - 2]),
            ]
        })
        .collect();
    let handles: Vec<_> = (0..8)
        .map(|t| {
            let engine = engine.clone();
            let mut keys = keys.clone();
            keys.rotate_left(t);
            std::thread::spawn(move || {
                let mut values: Vec<(WkKey, Rational)> = keys
                    .into_iter()
                    .map(|k| {
                        let v = engine.wk_integral(&k);
                        (k, v)
                    })
                    .collect();
                values.sort_by(|a, b| a.0.cmp(&b.0));
                values
            })
        })
        .collect();
    let results: Vec<_> = handles.into_iter().map(|h| h.join().unwrap()).collect();
    for r in &results[1..] {
        assert_eq!(r, &results[0]);
    }
    for (k, v) in &results[0] {
        assert_eq!(*v, wk_integral(k));
        assert_eq!(engine.wk_cache().get(k).as_ref().unwrap_or(v), v);
    }
}
