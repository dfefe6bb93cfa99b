mod common;

use expsum::charsum::{
    exponential_sum, l_series, lambda_from_newton, power_sums, rational_reconstruct, RationalFunction, DEFAULT_BUDGET,
};
use expsum::{make_field, CycInt, CycRational, FieldSpec, Monomial, MultiPoly};
use num_bigint::BigInt;
use proptest::prelude::*;

fn sum(f: &MultiPoly, i: usize) -> CycInt {
    exponential_sum(f, i, DEFAULT_BUDGET).unwrap()
}

fn small_fields() -> impl Strategy<Value = FieldSpec> {
    prop::sample::select(vec![(2u32, 1usize), (3, 1), (5, 1), (7, 1), (2, 2), (3, 2)])
        .prop_map(|(p, a)| make_field(p, a, None).unwrap())
}

fn cyc(p: u32) -> impl Strategy<Value = CycInt> {
    prop::collection::vec(-20i64..=20, (p - 1) as usize)
        .prop_map(move |c| CycInt::from_coords(p, c.into_iter().map(BigInt::from).collect()))
}

#[test]
fn galois_equivariance_exhaustive_over_scalars() {
    for (p, src, n) in [(5u32, "x1^3 + 2*x1", 1usize), (7, "x1^2*x2 + x2 + 3", 2), (3, "x1*x2 + x1 + x2", 2)] {
        let field = make_field(p, 1, None).unwrap();
        let f = MultiPoly::parse(src, n, &field).unwrap();
        for i in 1..=2 {
            let s = sum(&f, i);
            for c in 1..p as u64 {
                let cf = f.scale(&field.from_u64(c));
                assert_eq!(sum(&cf, i), s.galois(c), "{src}, c = {c}, i = {i}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn galois_equivariance(
        (f, c) in small_fields().prop_flat_map(|k| {
            let p = k.characteristic() as u64;
            (common::poly(k, 2, 4, 5), 1..p)
        }),
        i in 1usize..=2,
    ) {
        let cf = f.scale(&f.field().from_u64(c));
        prop_assert_eq!(sum(&cf, i), sum(&f, i).galois(c));
    }

    #[test]
    fn affine_invariance(
        (f, m, b) in small_fields().prop_flat_map(|k| {
            let q = k.order();
            (common::poly(k.clone(), 2, 4, 5), common::invertible_matrix(k, 2), prop::collection::vec(0..q, 2))
        }),
    ) {
        let images = common::affine_images(f.field(), &m, &b);
        let g = f.substitute(&images).unwrap();
        prop_assert_eq!(sum(&g, 1), sum(&f, 1));
    }

    #[test]
    fn additivity_over_disjoint_variables(
        (f, g) in small_fields().prop_flat_map(|k| (common::poly(k.clone(), 1, 4, 4), common::poly(k, 1, 4, 4))),
        i in 1usize..=2,
    ) {
        let field = f.field().clone();
        let x1 = MultiPoly::var(&field, 2, 0);
        let x2 = MultiPoly::var(&field, 2, 1);
        let fg = f.substitute(&[x1]).unwrap().add(&g.substitute(&[x2]).unwrap());
        prop_assert_eq!(sum(&fg, i), sum(&f, i).mul(&sum(&g, i)));
    }

    #[test]
    fn newton_roundtrip(
        (p, lambda_tail) in prop::sample::select(vec![2u32, 3, 5, 7])
            .prop_flat_map(|p| (Just(p), prop::collection::vec(cyc(p), 1..=4))),
        n in 1usize..=3,
    ) {
        let mut lambda = vec![CycInt::one(p)];
        lambda.extend(lambda_tail);
        prop_assume!(!lambda.last().unwrap().is_zero());
        let d = lambda.len() - 1;
        let m = d + 3;
        let sign = |x: CycInt| if n % 2 == 0 { x } else { x.neg() };
        let sums: Vec<CycInt> = power_sums(&lambda, m).into_iter().map(sign).collect();
        prop_assert_eq!(lambda_from_newton(&sums, n, d).unwrap(), lambda.clone());
        let back: Vec<CycInt> = power_sums(&lambda, d).into_iter().map(sign).collect();
        prop_assert_eq!(&back[..], &sums[..d]);
    }

    #[test]
    fn reconstruction_reexpands(
        (p, num, den) in prop::sample::select(vec![2u32, 3, 5])
            .prop_flat_map(|p| (Just(p), prop::collection::vec(cyc(p), 1..=3), prop::collection::vec(cyc(p), 0..=2))),
    ) {
        let to_r = |v: &[CycInt]| v.iter().map(CycInt::to_rational).collect::<Vec<_>>();
        let mut den_full = vec![CycInt::one(p)];
        den_full.extend(den);
        let rf = RationalFunction { num: to_r(&num), den: to_r(&den_full) };
        let dnum = num.len() - 1;
        let dden = den_full.len() - 1;
        let len = dnum + dden + 3;
        let series: Vec<CycInt> = rf.expand(len).iter().map(|c| c.as_cyc_int().unwrap().clone()).collect();
        let got = rational_reconstruct(&series, dnum, dden).unwrap();
        let expanded: Vec<CycRational> = got.expand(len);
        prop_assert_eq!(expanded, series.iter().map(CycInt::to_rational).collect::<Vec<_>>());
        prop_assert!(got.num_degree() <= dnum && got.den_degree() <= dden);
    }

    #[test]
    fn l_series_of_power_sums_is_the_polynomial(
        (p, tail) in prop::sample::select(vec![3u32, 5]).prop_flat_map(|p| (Just(p), prop::collection::vec(cyc(p), 1..=3))),
    ) {
        // exp(sum S_i t^i / i) with S_i = -P_i is the polynomial itself
        let mut poly = vec![CycInt::one(p)];
        poly.extend(tail);
        let m = poly.len() + 2;
        let s: Vec<CycInt> = power_sums(&poly, m).into_iter().map(|x| x.neg()).collect();
        let l = l_series(&s).unwrap();
        for (k, c) in l.iter().enumerate() {
            let want = poly.get(k).cloned().unwrap_or_else(|| CycInt::zero(p));
            prop_assert_eq!(c, &want);
        }
    }
}

#[test]
fn point_count_sum_of_zero_polynomial() {
    let f = make_field(2, 2, None).unwrap();
    let zero = MultiPoly::zero(&f, 2);
    assert_eq!(sum(&zero, 2), CycInt::from_int(2, 256));
    let m = Monomial::var(2, 0);
    let x1 = MultiPoly::monomial(&f, 2, m, f.one());
    assert!(sum(&x1, 1).is_zero());
}
