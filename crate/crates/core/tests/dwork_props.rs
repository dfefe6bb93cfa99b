mod common;

use expsum::dwork::{
    b_range, b_range_nonempty, psi, shift, solve_gamma, teichmuller, theta_coefficients, trace_formula_report,
    DworkParams, PadicRing, Series,
};
use expsum::{make_field, Monomial};
use proptest::prelude::*;

#[test]
fn b_range_emptiness_matches_inequality() {
    let mut checked = 0;
    for p in (2..=50u64).filter(|&p| expsum::ff::is_prime(p)) {
        for delta in 1..=12u64 {
            for e in 1..=delta {
                let empty = b_range(p, delta, e).unwrap().is_empty();
                assert_eq!(empty, !b_range_nonempty(p, delta, e).unwrap(), "p = {p}, delta = {delta}, e = {e}");
                checked += 1;
            }
        }
    }
    assert_eq!(checked, 15 * 78);
}

#[test]
fn b_range_at_e2_needs_delta_2_or_4() {
    for p in (2..=50u64).filter(|&p| expsum::ff::is_prime(p)) {
        let threshold = if p == 2 { 4 } else { 2 };
        for delta in 2..=12u64 {
            assert_eq!(b_range_nonempty(p, delta, 2).unwrap(), delta >= threshold, "p = {p}, delta = {delta}");
        }
    }
}

#[test]
fn theta_valuation_bound() {
    for (p, n) in [(2u32, 6u32), (3, 5), (5, 4), (7, 3), (11, 2)] {
        let ring = PadicRing::new(p, n).unwrap();
        let gamma = solve_gamma(&ring).unwrap();
        let imax = (n * (p - 1)) as usize + 5;
        let theta = theta_coefficients(&ring, &gamma, imax).unwrap();
        for (i, v) in theta.valuations.iter().enumerate() {
            // units of 1/(p-1), capped by the precision
            assert!(v.at_least((i as u64).min((n * (p - 1)) as u64)), "p = {p}, i = {i}");
        }
    }
}

fn ring_strategy() -> impl Strategy<Value = PadicRing> {
    prop::sample::select(vec![(2u32, 5u32), (3, 4), (5, 3), (7, 3), (13, 2)]).prop_map(|(p, n)| PadicRing::new(p, n).unwrap())
}

fn series(ring: &PadicRing, entries: Vec<(Vec<u32>, i64)>) -> Series {
    entries
        .into_iter()
        .map(|(e, c)| (Monomial::new(e), ring.from_int(c)))
        .filter(|(_, c)| !c.is_zero())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn teichmuller_is_multiplicative(ring in ring_strategy(), a in any::<u64>(), b in any::<u64>()) {
        let field = make_field(ring.p(), 1, None).unwrap();
        let x = field.element_at(a % field.order());
        let y = field.element_at(b % field.order());
        let lx = teichmuller(&ring, &x).unwrap();
        let ly = teichmuller(&ring, &y).unwrap();
        prop_assert_eq!(teichmuller(&ring, &field.mul(&x, &y)).unwrap(), ring.mul(&lx, &ly));
        prop_assert_eq!(ring.pow(&lx, ring.p() as u128), lx);
    }

    #[test]
    fn psi_shift_identity(
        ring in ring_strategy(),
        entries in prop::collection::vec((prop::collection::vec(0u32..12, 2), -50i64..50), 0..12),
        u in prop::collection::vec(0u32..4, 2),
    ) {
        let p = ring.p();
        let s = series(&ring, entries);
        let u = Monomial::new(u);
        let pu = Monomial::new(u.exponents().iter().map(|e| e * p).collect());
        prop_assert_eq!(psi(p, &shift(&s, &pu)), shift(&psi(p, &s), &u));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn trace_congruence_for_random_polynomials(
        f in prop::sample::select(vec![2u32, 3, 5])
            .prop_flat_map(|p| common::poly(make_field(p, 1, None).unwrap(), 1, 3, 3)),
    ) {
        let delta = f.degree().unwrap_or(0);
        let rep = trace_formula_report(&f, 2, DworkParams::default_for(delta), None).unwrap();
        for row in &rep.rows {
            prop_assert!(row.pass, "{} i = {}: ord = {}", f, row.i, row.difference_valuation.as_rational());
        }
    }
}
