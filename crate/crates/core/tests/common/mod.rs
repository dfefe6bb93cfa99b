#![allow(dead_code)]

use expsum::{FieldSpec, Monomial, MultiPoly};
use proptest::prelude::*;

/// Random polynomial in `n` variables with total degree `<= max_deg`.
pub fn poly(field: FieldSpec, n: usize, max_deg: u32, max_terms: usize) -> impl Strategy<Value = MultiPoly> {
    let order = field.order();
    prop::collection::vec((prop::collection::vec(0..=max_deg, n), 0..order), 0..=max_terms).prop_map(move |terms| {
        MultiPoly::from_terms(
            &field,
            n,
            terms
                .into_iter()
                .filter(|(e, _)| e.iter().sum::<u32>() <= max_deg)
                .map(|(e, c)| (Monomial::new(e), field.element_at(c))),
        )
    })
}

/// Random homogeneous form of degree `d`.
pub fn form(field: FieldSpec, n: usize, d: u32, max_terms: usize) -> impl Strategy<Value = MultiPoly> {
    let monos = Monomial::all_of_degree(n, d);
    let order = field.order();
    prop::collection::vec((0..monos.len(), 0..order), 1..=max_terms).prop_map(move |terms| {
        MultiPoly::from_terms(&field, n, terms.into_iter().map(|(i, c)| (monos[i].clone(), field.element_at(c))))
    })
    .prop_filter("zero form", |f| !f.is_zero())
}

/// Invertible `n x n` matrix over the field, as a list of rows of indices.
pub fn invertible_matrix(field: FieldSpec, n: usize) -> impl Strategy<Value = Vec<Vec<u64>>> {
    let order = field.order();
    prop::collection::vec(prop::collection::vec(0..order, n), n).prop_filter("singular", move |m| {
        let rows: Vec<Vec<_>> = m.iter().map(|r| r.iter().map(|&c| field.element_at(c)).collect()).collect();
        expsum::linalg::rank(&field, &rows, n) == n
    })
}

/// `x_i -> sum_j m[i][j] x_j + b_i`.
pub fn affine_images(field: &FieldSpec, m: &[Vec<u64>], b: &[u64]) -> Vec<MultiPoly> {
    let n = m.len();
    (0..n)
        .map(|i| {
            let mut g = MultiPoly::constant(field, n, field.element_at(b[i]));
            for j in 0..n {
                g.add_term(Monomial::var(n, j), field.element_at(m[i][j]));
            }
            g
        })
        .collect()
}
