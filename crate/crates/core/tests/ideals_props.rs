mod common;

use expsum::ideals::{buchberger, milnor_sum, normal_form, origin_supported, OrderKind, QuotientDim, TermOrder};
use expsum::{linalg, make_field, FieldSpec, Monomial, MultiPoly};
use proptest::prelude::*;

fn prime_fields() -> impl Strategy<Value = FieldSpec> {
    prop::sample::select(vec![2u32, 3, 5, 7, 11]).prop_map(|p| make_field(p, 1, None).unwrap())
}

/// Zero-dimensional ideal: pure powers with random lower terms, plus extras.
fn zero_dim_ideal() -> impl Strategy<Value = Vec<MultiPoly>> {
    prime_fields().prop_flat_map(|k| {
        (
            common::poly(k.clone(), 2, 1, 3),
            common::poly(k.clone(), 2, 1, 3),
            prop::collection::vec(common::poly(k.clone(), 2, 3, 3), 0..=2),
            2u32..=4,
            2u32..=4,
            Just(k),
        )
            .prop_map(|(a, b, extra, d1, d2, k)| {
                let x1 = MultiPoly::monomial(&k, 2, Monomial::new(vec![d1, 0]), k.one());
                let x2 = MultiPoly::monomial(&k, 2, Monomial::new(vec![0, d2]), k.one());
                let mut gens = vec![x1.add(&a), x2.add(&b)];
                gens.extend(extra.into_iter().filter(|g| !g.is_zero()));
                gens
            })
    })
}

fn orders() -> Vec<TermOrder> {
    vec![
        TermOrder::grevlex(2),
        TermOrder::lex(2),
        TermOrder::graded_lex(2),
        TermOrder::with_permutation(OrderKind::Lex, vec![1, 0]).unwrap(),
    ]
}

/// `dim F[x]/J` by linear algebra on `{m g : deg(m g) <= hi}`, restricted to
/// degree `<= lo`.
fn macaulay_quotient_dim(gens: &[MultiPoly], lo: u32, hi: u32) -> usize {
    let field = gens[0].field();
    let n = gens[0].nvars();
    let mut cols: Vec<Monomial> = (0..=hi).rev().flat_map(|d| Monomial::all_of_degree(n, d)).collect();
    cols.dedup();
    let index: std::collections::HashMap<Monomial, usize> = cols.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    let mut rows = Vec::new();
    for g in gens {
        let dg = g.degree().unwrap() as u32;
        if dg > hi {
            continue;
        }
        for d in 0..=hi - dg {
            for m in Monomial::all_of_degree(n, d) {
                let mut row = vec![field.zero(); cols.len()];
                for (u, c) in g.terms() {
                    row[index[&u.mul(&m)]] = *c;
                }
                rows.push(row);
            }
        }
    }
    let (_, pivots) = linalg::row_reduce(field, &rows, cols.len());
    let low_start = cols.iter().position(|m| m.degree() <= lo as u64).unwrap();
    let low_total = cols.len() - low_start;
    low_total - pivots.iter().filter(|&&c| c >= low_start).count()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn reduced_basis_is_canonical(gens in zero_dim_ideal()) {
        for order in orders() {
            let gb = buchberger(&gens, &order).unwrap();
            let again = buchberger(&gens, &order).unwrap();
            prop_assert_eq!(gb.generators(), again.generators());
            let from_basis = buchberger(gb.generators(), &order).unwrap();
            prop_assert_eq!(gb.generators(), from_basis.generators());
            let mut reversed = gens.clone();
            reversed.reverse();
            let from_reversed = buchberger(&reversed, &order).unwrap();
            prop_assert_eq!(gb.generators(), from_reversed.generators());
        }
    }

    #[test]
    fn quotient_dim_is_order_independent(gens in zero_dim_ideal()) {
        let dims: Vec<QuotientDim> = orders().iter().map(|o| buchberger(&gens, o).unwrap().quotient_dim()).collect();
        prop_assert!(matches!(dims[0], QuotientDim::Finite(_)));
        for d in &dims {
            prop_assert_eq!(*d, dims[0]);
        }
    }

    #[test]
    fn normal_form_is_idempotent_and_linear(
        (gens, f, g, c) in zero_dim_ideal().prop_flat_map(|gens| {
            let k = gens[0].field().clone();
            let q = k.order();
            (Just(gens), common::poly(k.clone(), 2, 6, 6), common::poly(k, 2, 6, 6), 0..q)
        }),
    ) {
        let field = f.field().clone();
        let c = field.element_at(c);
        for order in orders() {
            let gb = buchberger(&gens, &order).unwrap();
            let nf = normal_form(&f, &gb);
            prop_assert_eq!(normal_form(&nf, &gb), nf.clone());
            let lhs = normal_form(&f.add(&g.scale(&c)), &gb);
            let rhs = nf.add(&normal_form(&g, &gb).scale(&c));
            prop_assert_eq!(lhs, rhs);
            // f - NF(f) lies in the ideal
            prop_assert!(normal_form(&f.sub(&nf), &gb).is_zero());
        }
    }

    #[test]
    fn origin_support_is_invariant_under_linear_change(
        (forms, m) in prime_fields().prop_flat_map(|k| {
            (prop::collection::vec(common::form(k.clone(), 3, 2, 4), 2..=3), common::invertible_matrix(k, 3))
        }),
    ) {
        let field = forms[0].field().clone();
        let order = TermOrder::grevlex(3);
        let images = common::affine_images(&field, &m, &[0, 0, 0]);
        let moved: Vec<MultiPoly> = forms.iter().map(|f| f.substitute(&images).unwrap()).collect();
        let before = origin_supported(&buchberger(&forms, &order).unwrap());
        let after = origin_supported(&buchberger(&moved, &order).unwrap());
        prop_assert_eq!(before, after);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn milnor_sum_matches_macaulay_oracle(f in prime_fields().prop_flat_map(|k| common::poly(k, 2, 4, 6))) {
        prop_assume!(f.degree().unwrap_or(0) >= 2);
        let QuotientDim::Finite(mu) = milnor_sum(&f).unwrap() else { return Ok(()) };
        prop_assume!(mu <= 20);
        let gens: Vec<MultiPoly> = f.gradient().into_iter().filter(|g| !g.is_zero()).collect();
        prop_assume!(!gens.is_empty());
        let staircase = buchberger(&gens, &TermOrder::grevlex(2)).unwrap().standard_monomials().unwrap();
        let lo = staircase.iter().map(Monomial::degree).max().unwrap_or(0) as u32;
        let oracle = macaulay_quotient_dim(&gens, lo, lo + 16);
        prop_assert_eq!(oracle as u64, mu);
    }
}

#[test]
fn milnor_oracle_on_known_singularities() {
    let f7 = make_field(7, 1, None).unwrap();
    for (src, mu) in [("x1^3 + x2^3", 4u64), ("x1^2 + x2^2", 1), ("x1*x2 + x1 + x2", 1)] {
        let f = MultiPoly::parse(src, 2, &f7).unwrap();
        let got = milnor_sum(&f).unwrap().finite();
        assert_eq!(got, Some(mu), "{src}");
        let gens: Vec<MultiPoly> = f.gradient();
        let oracle = macaulay_quotient_dim(&gens, 8, 24);
        assert_eq!(Some(oracle as u64), got, "{src}");
    }
}
