//! Exponential sums `S_i = sum_{x in F_{q^i}^n} zeta_p^{Tr f(x)}`, the
//! L-function they generate, and numerical purity checks.
//!
//! The additive character is `t -> zeta_p^{Tr_{F_q/F_p}(t)}`, so composing
//! with the relative trace down from `F_{q^i}` gives the absolute trace of
//! the big field.

pub mod cycpoly;
pub mod cyclotomic;
pub mod lfunction;
pub mod numeric;
pub mod weil;

use rayon::prelude::*;
use serde::Serialize;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::ff::{ExtensionSpec, FieldElement, FieldSpec};
use crate::mpoly::MultiPoly;

pub use cyclotomic::{CycInt, CycRational};
pub use lfunction::{
    l_series, lambda_from_newton, power_sums, rational_reconstruct, LOptions, LReport, RationalFunction,
};
pub use numeric::{Complex, Real};
pub use weil::{weil_check, EmbeddingRoots, WeilReport};

pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Number of points of `A^n(F_{q^i})`, saturating at `u128::MAX`.
pub fn point_count(q: u64, n: usize, i: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..n * i {
        acc = acc.saturating_mul(q as u128);
    }
    acc
}

/// `S(A^n(F_{q^i}), f)` by full enumeration.
pub fn exponential_sum(f: &MultiPoly, i: usize, budget: u64) -> Result<CycInt> {
    let field = f.field();
    let required = point_count(field.order(), f.nvars(), i);
    if required > budget as u128 {
        return Err(Error::BudgetExceeded { required, budget });
    }
    let ext = ExtensionSpec::new(field, i)?;
    let counts = trace_counts(f, &ext);
    Ok(CycInt::from_counts(field.characteristic(), &counts))
}

/// `S_1, ..., S_m`.
pub fn exponential_sums(f: &MultiPoly, m: usize, budget: u64) -> Result<Vec<CycInt>> {
    (1..=m).map(|i| exponential_sum(f, i, budget)).collect()
}

/// `counts[r] = #{x : Tr f(x) = r}` over `F_{q^i}^n`.
fn trace_counts(f: &MultiPoly, ext: &ExtensionSpec) -> Vec<u64> {
    let big = ext.big();
    let p = big.characteristic() as usize;
    let n = f.nvars();
    if n == 0 {
        let mut counts = vec![0u64; p];
        let v = f.terms().next().map_or(big.zero(), |(_, c)| ext.embed(c));
        counts[big.absolute_trace(&v) as usize] = 1;
        return counts;
    }
    let last = n - 1;
    let top = f.terms().map(|(m, _)| m.exponents()[last] as usize).max().unwrap_or(0);
    // f = sum_e g_e(x_1..x_{n-1}) x_n^e
    let mut slices: Vec<Vec<(Vec<u32>, FieldElement)>> = vec![Vec::new(); top + 1];
    for (m, c) in f.terms() {
        let e = m.exponents();
        slices[e[last] as usize].push((e[..last].to_vec(), ext.embed(c)));
    }
    let order = big.order();
    let prefixes = point_count(order, n - 1, 1) as u64;

    let run = |prefix: u64, start: u64, end: u64, counts: &mut Vec<u64>| {
        let point = prefix_point(big, prefix, n - 1);
        let g: Vec<FieldElement> = slices
            .iter()
            .map(|terms| {
                let mut acc = big.zero();
                for (exps, c) in terms {
                    let mut t = *c;
                    for (x, &e) in point.iter().zip(exps) {
                        if e > 0 {
                            t = big.mul(&t, &big.pow(x, e as u128));
                        }
                    }
                    acc = big.add(&acc, &t);
                }
                acc
            })
            .collect();
        for x in big.elements_range(start, end) {
            let mut v = g[top];
            for e in (0..top).rev() {
                v = big.add(&big.mul(&v, &x), &g[e]);
            }
            counts[big.absolute_trace(&v) as usize] += 1;
        }
    };

    let add = |mut a: Vec<u64>, b: Vec<u64>| {
        for (x, y) in a.iter_mut().zip(b) {
            *x += y;
        }
        a
    };
    if n == 1 {
        let chunks = order.min(64);
        let step = order.div_ceil(chunks);
        (0..chunks)
            .into_par_iter()
            .fold(
                || vec![0u64; p],
                |mut acc, c| {
                    run(0, c * step, ((c + 1) * step).min(order), &mut acc);
                    acc
                },
            )
            .reduce(|| vec![0u64; p], add)
    } else {
        (0..prefixes)
            .into_par_iter()
            .fold(
                || vec![0u64; p],
                |mut acc, prefix| {
                    run(prefix, 0, order, &mut acc);
                    acc
                },
            )
            .reduce(|| vec![0u64; p], add)
    }
}

fn prefix_point(field: &FieldSpec, mut index: u64, len: usize) -> Vec<FieldElement> {
    let q = field.order();
    (0..len)
        .map(|_| {
            let x = field.element_at(index % q);
            index /= q;
            x
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct SumBoundRow {
    pub i: usize,
    pub sum: CycInt,
    /// `max_c |sigma_c(S_i)|`.
    pub max_modulus: String,
    /// `M_f q^{n i / 2}`.
    pub bound: String,
    pub margin: String,
    pub within: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SumBoundReport {
    pub milnor: u64,
    pub decimal_digits: u32,
    pub rows: Vec<SumBoundRow>,
    pub all_within: bool,
}

/// Compares `|S_i|` under every embedding with `M_f q^{n i/2}` for
/// `i = 1..=i_max`.
pub fn sum_bound_check(f: &MultiPoly, milnor: u64, i_max: usize, budget: u64) -> Result<SumBoundReport> {
    let digits = 50;
    let bits = numeric::bits_for_digits(digits);
    let p = f.field().characteristic();
    let q = f.field().order();
    let n = f.nvars();
    let roots: Vec<Vec<Complex>> =
        (1..p as u64).map(|c| Complex::roots_of_unity(p, c, bits)).collect();
    let mut rows = Vec::new();
    for i in 1..=i_max {
        let s = exponential_sum(f, i, budget)?;
        // |S|^2 = S * conj(S), bound^2 = M^2 q^{n i}
        let bound_sq = BigInt::from(milnor).pow(2) * BigInt::from(q).pow((n * i) as u32);
        let norm_form = s.mul(&s.galois(p as u64 - 1));
        let mut within = true;
        let mut max_sq = Real::zero(bits);
        for (c, table) in (1..p as u64).zip(&roots) {
            let exact = norm_form.galois(c);
            let numeric = s.embed_with(table, bits).norm_sqr();
            let ok = match exact.as_integer() {
                Some(v) => *v <= bound_sq,
                None => numeric.cmp_value(&Real::from_int(&bound_sq, bits)).is_le(),
            };
            within &= ok;
            max_sq = max_sq.max(numeric);
        }
        let max_modulus = max_sq.sqrt();
        let bound = Real::from_int(&bound_sq, bits).sqrt();
        rows.push(SumBoundRow {
            i,
            sum: s,
            max_modulus: max_modulus.to_decimal(digits / 2),
            margin: bound.sub(&max_modulus).to_decimal(digits / 2),
            bound: bound.to_decimal(digits / 2),
            within,
        });
    }
    let all_within = rows.iter().all(|r| r.within);
    Ok(SumBoundReport { milnor, decimal_digits: digits / 2, rows, all_within })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::make_field;

    fn naive_sum(f: &MultiPoly, i: usize) -> CycInt {
        let ext = ExtensionSpec::new(f.field(), i).unwrap();
        let big = ext.big();
        let p = big.characteristic();
        let n = f.nvars();
        let mut counts = vec![0u64; p as usize];
        let total = point_count(big.order(), n, 1) as u64;
        for idx in 0..total {
            let pt = prefix_point(big, idx, n);
            let v = f.evaluate_in(&ext, &pt).unwrap();
            counts[big.absolute_trace(&v) as usize] += 1;
        }
        CycInt::from_counts(p, &counts)
    }

    #[test]
    fn small_sums() {
        let f3 = make_field(3, 1, None).unwrap();
        let x = MultiPoly::parse("x1", 1, &f3).unwrap();
        assert!(exponential_sum(&x, 1, DEFAULT_BUDGET).unwrap().is_zero());
        let sq = MultiPoly::parse("x1^2", 1, &f3).unwrap();
        let s = exponential_sum(&sq, 1, DEFAULT_BUDGET).unwrap();
        assert_eq!(s, CycInt::from_coords(3, vec![1.into(), 2.into()]));
        let art = MultiPoly::parse("x1^3 - x1", 1, &f3).unwrap();
        for i in 1..=3 {
            let s = exponential_sum(&art, i, DEFAULT_BUDGET).unwrap();
            assert_eq!(s, CycInt::from_int(3, 3i64.pow(i as u32)));
        }
    }

    #[test]
    fn matches_naive_enumeration() {
        let f4 = make_field(2, 2, None).unwrap();
        let f = MultiPoly::parse("g*x1^3*x2 + x2^2 + x1 + 1", 2, &f4).unwrap();
        for i in 1..=2 {
            assert_eq!(exponential_sum(&f, i, DEFAULT_BUDGET).unwrap(), naive_sum(&f, i));
        }
        let f5 = make_field(5, 1, None).unwrap();
        let g = MultiPoly::parse("x1^2*x3 + 2*x2^3 + x3", 3, &f5).unwrap();
        assert_eq!(exponential_sum(&g, 1, DEFAULT_BUDGET).unwrap(), naive_sum(&g, 1));
    }

    #[test]
    fn budget_is_enforced() {
        let f3 = make_field(3, 1, None).unwrap();
        let f = MultiPoly::parse("x1*x2", 2, &f3).unwrap();
        match exponential_sum(&f, 2, 80) {
            Err(Error::BudgetExceeded { required, budget }) => {
                assert_eq!(required, 81);
                assert_eq!(budget, 80);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn bound_equality_cases() {
        let f3 = make_field(3, 1, None).unwrap();
        let sq = MultiPoly::parse("x1^2", 1, &f3).unwrap();
        let r = sum_bound_check(&sq, 1, 2, DEFAULT_BUDGET).unwrap();
        assert!(r.all_within);
        assert!(r.rows[0].max_modulus.starts_with("1.7320508075688772935"));
        let g = MultiPoly::parse("x1*x2 + x1 + x2", 2, &f3).unwrap();
        let r = sum_bound_check(&g, 1, 2, DEFAULT_BUDGET).unwrap();
        assert!(r.all_within);
        assert!(r.rows[0].max_modulus.starts_with("3.0000000000"));
    }
}
