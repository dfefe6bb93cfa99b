use expsum::{make_field, ExtensionSpec, FieldSpec};
use proptest::prelude::*;

const SMALL_FIELDS: &[(u32, usize)] = &[(2, 1), (2, 3), (2, 9), (3, 2), (3, 5), (5, 3), (7, 3), (13, 2), (23, 1), (31, 1)];

#[test]
fn frobenius_fixes_every_element() {
    for &(p, a) in SMALL_FIELDS {
        let f = make_field(p, a, None).unwrap();
        assert!(f.order() <= 512);
        for x in f.elements() {
            assert_eq!(f.pow(&x, f.order() as u128), x, "F_{}^{}", p, a);
        }
    }
}

#[test]
fn trace_is_transitive_exhaustively() {
    for &(p, a, i) in &[(2u32, 1usize, 4usize), (2, 2, 3), (2, 3, 3), (3, 1, 5), (3, 2, 2), (5, 1, 3), (7, 1, 3), (2, 4, 2)] {
        let base = make_field(p, a, None).unwrap();
        let ext = ExtensionSpec::new(&base, i).unwrap();
        assert!(ext.big().order() <= 512);
        for x in ext.big().elements() {
            let rel = ext.relative_trace(&x).unwrap();
            assert_eq!(ext.big().absolute_trace(&x), base.absolute_trace(&rel));
        }
    }
}

#[test]
fn relative_trace_of_embedded_element_is_multiplication_by_step() {
    for &(p, a, i) in &[(2u32, 2usize, 3usize), (3, 2, 2), (3, 1, 4), (5, 2, 2)] {
        let base = make_field(p, a, None).unwrap();
        let ext = ExtensionSpec::new(&base, i).unwrap();
        for x in base.elements() {
            let y = ext.embed(&x);
            assert_eq!(ext.relative_trace(&y).unwrap(), base.scale(i as u64, &x));
        }
    }
}

fn field_strategy() -> impl Strategy<Value = FieldSpec> {
    prop::sample::select(vec![(2u32, 1usize), (2, 4), (3, 3), (5, 2), (7, 1), (11, 2), (101, 1)])
        .prop_map(|(p, a)| make_field(p, a, None).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn absolute_trace_is_linear(f in field_strategy(), i in any::<u64>(), j in any::<u64>(), c in any::<u64>()) {
        let x = f.element_at(i % f.order());
        let y = f.element_at(j % f.order());
        let p = f.characteristic();
        let tx = f.absolute_trace(&x);
        let ty = f.absolute_trace(&y);
        prop_assert_eq!(f.absolute_trace(&f.add(&x, &y)), (tx + ty) % p);
        let c = c % p as u64;
        prop_assert_eq!(f.absolute_trace(&f.scale(c, &x)) as u64, c * tx as u64 % p as u64);
    }

    #[test]
    fn embedding_is_a_ring_homomorphism(i in any::<u64>(), j in any::<u64>(), step in 1usize..4) {
        let base = make_field(3, 2, None).unwrap();
        let ext = ExtensionSpec::new(&base, step).unwrap();
        let x = base.element_at(i % 9);
        let y = base.element_at(j % 9);
        prop_assert_eq!(ext.embed(&base.add(&x, &y)), ext.big().add(&ext.embed(&x), &ext.embed(&y)));
        prop_assert_eq!(ext.embed(&base.mul(&x, &y)), ext.big().mul(&ext.embed(&x), &ext.embed(&y)));
        prop_assert_eq!(ext.pull_back(&ext.embed(&x)), Some(x));
    }

    #[test]
    fn inverse_and_index_roundtrip(f in field_strategy(), i in any::<u64>()) {
        let x = f.element_at(i % f.order());
        prop_assert_eq!(f.element_at(f.index(&x)), x);
        match f.inv(&x) {
            Some(y) => prop_assert_eq!(f.mul(&x, &y), f.one()),
            None => prop_assert!(x.is_zero()),
        }
    }
}
