use num_bigint::BigInt;
use serde::Serialize;

use super::cycpoly::{self, CycPoly};
use super::cyclotomic::{CycInt, CycRational};
use super::weil::{weil_check, WeilReport};
use super::{exponential_sum, DEFAULT_BUDGET};
use crate::error::{Error, Result};
use crate::mpoly::MultiPoly;

/// Coefficients `L_0 = 1, L_1, ..., L_m` of `exp(sum_i S_i t^i / i)`.
pub fn l_series(sums: &[CycInt]) -> Result<Vec<CycInt>> {
    let p = sums.first().map(CycInt::p).ok_or(Error::InsufficientTerms { needed: 1, got: 0 })?;
    let mut l = vec![CycInt::one(p)];
    for k in 1..=sums.len() {
        // k L_k = sum_{i=1}^k S_i L_{k-i}
        let mut acc = CycInt::zero(p);
        for i in 1..=k {
            acc = acc.add(&sums[i - 1].mul(&l[k - i]));
        }
        let lk = acc.div_exact(&BigInt::from(k)).ok_or(Error::NonIntegral(k))?;
        l.push(lk);
    }
    Ok(l)
}

/// `Lambda(t) = prod (1 - alpha_j t)` of degree `d` from the power sums
/// `P_i = (-1)^n S_i`.  Sums beyond `d` are used as a consistency check.
pub fn lambda_from_newton(sums: &[CycInt], n: usize, d: usize) -> Result<Vec<CycInt>> {
    if sums.len() < d.max(1) {
        return Err(Error::InsufficientTerms { needed: d.max(1), got: sums.len() });
    }
    let p = sums[0].p();
    let power: Vec<CycInt> = sums.iter().map(|s| if n.is_multiple_of(2) { s.clone() } else { s.neg() }).collect();
    // e_k with k e_k = sum_{i=1}^k (-1)^{i-1} e_{k-i} P_i
    let mut e = vec![CycInt::one(p)];
    for k in 1..=sums.len() {
        let mut acc = CycInt::zero(p);
        for i in 1..=k {
            let term = if k - i < e.len() { e[k - i].mul(&power[i - 1]) } else { CycInt::zero(p) };
            acc = if i % 2 == 1 { acc.add(&term) } else { acc.sub(&term) };
        }
        if k <= d {
            let ek = acc.div_exact(&BigInt::from(k)).ok_or_else(|| Error::DegreeMismatch {
                expected: d,
                detail: format!("e_{k} is not integral"),
            })?;
            e.push(ek);
        } else if !acc.is_zero() {
            return Err(Error::DegreeMismatch {
                expected: d,
                detail: format!("e_{k} would be nonzero"),
            });
        }
    }
    Ok(e.iter().enumerate().map(|(k, ek)| if k % 2 == 0 { ek.clone() } else { ek.neg() }).collect())
}

/// Power sums `P_1..P_m` of the reciprocal roots of `c_0 + c_1 t + ...`
/// with `c_0 = 1`, i.e. `log` of the polynomial is `-sum P_i t^i / i`.
pub fn power_sums(poly: &[CycInt], m: usize) -> Vec<CycInt> {
    let p = poly[0].p();
    assert_eq!(poly[0], CycInt::one(p), "constant term must be 1");
    let c = |k: usize| poly.get(k).cloned().unwrap_or_else(|| CycInt::zero(p));
    let mut out: Vec<CycInt> = Vec::with_capacity(m);
    for k in 1..=m {
        // P_k = -k c_k - sum_{i=1}^{k-1} c_{k-i} P_i
        let mut acc = c(k).scale(&BigInt::from(k)).neg();
        for i in 1..k {
            acc = acc.sub(&c(k - i).mul(&out[i - 1]));
        }
        out.push(acc);
    }
    out
}

/// `num / den` with `den(0) = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RationalFunction {
    pub num: Vec<CycRational>,
    pub den: Vec<CycRational>,
}

impl RationalFunction {
    pub fn num_degree(&self) -> usize {
        cycpoly::degree(&self.num).unwrap_or(0)
    }

    pub fn den_degree(&self) -> usize {
        cycpoly::degree(&self.den).unwrap_or(0)
    }

    /// Taylor coefficients `0..len`.
    pub fn expand(&self, len: usize) -> Vec<CycRational> {
        let p = self.den[0].p();
        let inv0 = self.den[0].inv().expect("den(0) != 0");
        let zero = CycRational::zero(p);
        let mut out: Vec<CycRational> = Vec::with_capacity(len);
        for k in 0..len {
            let mut acc = self.num.get(k).unwrap_or(&zero).clone();
            for j in 1..=k.min(self.den.len() - 1) {
                acc = acc.sub(&self.den[j].mul(&out[k - j]));
            }
            out.push(acc.mul(&inv0));
        }
        out
    }

    /// Integral coefficient lists, when every coefficient lies in `Z[zeta_p]`.
    pub fn integral_parts(&self) -> Option<(Vec<CycInt>, Vec<CycInt>)> {
        let conv = |v: &[CycRational]| v.iter().map(|c| c.as_cyc_int().cloned()).collect::<Option<Vec<_>>>();
        Some((conv(&self.num)?, conv(&self.den)?))
    }
}

/// Smallest-denominator `P/Q` with `deg P <= dmax_num`, `deg Q <= dmax_den`,
/// `Q(0) = 1`, agreeing with `series` in every given coefficient.
pub fn rational_reconstruct(series: &[CycInt], dmax_num: usize, dmax_den: usize) -> Result<RationalFunction> {
    let needed = dmax_num + dmax_den + 1;
    if series.len() < needed {
        return Err(Error::InsufficientTerms { needed, got: series.len() });
    }
    let p = series[0].p();
    let c: Vec<CycRational> = series.iter().map(CycInt::to_rational).collect();
    let len = c.len();
    for e in 0..=dmax_den {
        // unknowns q_1..q_e; equations k = dmax_num+1 .. len-1:
        // sum_{j=1}^e c_{k-j} q_j = -c_k
        let rows: Vec<(Vec<CycRational>, CycRational)> = (dmax_num + 1..len)
            .map(|k| {
                let row = (1..=e)
                    .map(|j| if k >= j { c[k - j].clone() } else { CycRational::zero(p) })
                    .collect();
                (row, c[k].neg())
            })
            .collect();
        let Some(qs) = solve_consistent(rows, e, p) else { continue };
        let mut den: CycPoly = std::iter::once(CycRational::one(p)).chain(qs).collect();
        cycpoly::trim(&mut den);
        let mut num: CycPoly = (0..=dmax_num.min(len - 1))
            .map(|k| {
                let mut acc = CycRational::zero(p);
                for (j, qj) in den.iter().enumerate().take(k + 1) {
                    acc = acc.add(&qj.mul(&c[k - j]));
                }
                acc
            })
            .collect();
        cycpoly::trim(&mut num);
        let rf = RationalFunction { num, den };
        debug_assert_eq!(rf.expand(len), c);
        return Ok(rf);
    }
    Err(Error::NoRationalFunction { num: dmax_num, den: dmax_den })
}

/// Exact solution of an overdetermined system, `None` if inconsistent.
/// Free variables (if any) are set to zero.
fn solve_consistent(mut rows: Vec<(Vec<CycRational>, CycRational)>, nvars: usize, p: u32) -> Option<Vec<CycRational>> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..nvars {
        let Some(piv) = (r..rows.len()).find(|&i| !rows[i].0[col].is_zero()) else { continue };
        rows.swap(r, piv);
        let inv = rows[r].0[col].inv().expect("nonzero pivot");
        let (row, rhs) = rows[r].clone();
        let row: Vec<CycRational> = row.iter().map(|x| x.mul(&inv)).collect();
        let rhs = rhs.mul(&inv);
        for i in 0..rows.len() {
            if i == r || rows[i].0[col].is_zero() {
                continue;
            }
            let factor = rows[i].0[col].clone();
            for (j, x) in row.iter().enumerate() {
                rows[i].0[j] = rows[i].0[j].sub(&factor.mul(x));
            }
            rows[i].1 = rows[i].1.sub(&factor.mul(&rhs));
        }
        rows[r] = (row, rhs);
        pivots.push(col);
        r += 1;
    }
    if rows[r..].iter().any(|(_, rhs)| !rhs.is_zero()) {
        return None;
    }
    let mut x = vec![CycRational::zero(p); nvars];
    for (i, &col) in pivots.iter().enumerate() {
        x[col] = rows[i].1.clone();
    }
    Some(x)
}

#[derive(Clone, Debug)]
pub struct LOptions {
    /// Number of sums; defaults to `2 (delta-1)^n + 2`, or `d + 2` with a
    /// degree hint.
    pub m: Option<usize>,
    /// Expected degree of `Lambda`; switches to Newton's identities.
    pub degree_hint: Option<usize>,
    pub budget: u64,
    pub tol: f64,
}

impl Default for LOptions {
    fn default() -> Self {
        LOptions { m: None, degree_hint: None, budget: DEFAULT_BUDGET, tol: 1e-9 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LReport {
    pub q: u64,
    pub n: usize,
    pub sums: Vec<CycInt>,
    pub l_series: Vec<CycInt>,
    pub method: &'static str,
    /// Numerator and denominator of `L` (reconstruction only).
    pub numerator: Option<Vec<CycInt>>,
    pub denominator: Option<Vec<CycInt>>,
    pub lambda: Option<Vec<CycInt>>,
    pub lambda_degree: Option<usize>,
    pub root_moduli: Option<WeilReport>,
    /// First `i` whose enumeration exceeded the budget, if any.
    pub budget_stop: Option<usize>,
}

impl LReport {
    pub fn compute(f: &MultiPoly, opts: &LOptions) -> Result<LReport> {
        let q = f.field().order();
        let n = f.nvars();
        let delta = f.degree().unwrap_or(0) as u32;
        let default_m = match opts.degree_hint {
            Some(d) => d + 2,
            None => 2 * (delta.saturating_sub(1) as usize).pow(n as u32) + 2,
        };
        let m = opts.m.unwrap_or(default_m).max(1);
        let mut sums = Vec::with_capacity(m);
        let mut budget_stop = None;
        for i in 1..=m {
            match exponential_sum(f, i, opts.budget) {
                Ok(s) => sums.push(s),
                Err(Error::BudgetExceeded { .. }) if !sums.is_empty() => {
                    budget_stop = Some(i);
                    break;
                }
                Err(e) => return Err(e),
            }
        }
        let series = l_series(&sums)?;
        let mut report = LReport {
            q,
            n,
            sums,
            l_series: series,
            method: "",
            numerator: None,
            denominator: None,
            lambda: None,
            lambda_degree: None,
            root_moduli: None,
            budget_stop,
        };
        if let Some(d) = opts.degree_hint {
            report.method = "newton";
            report.lambda = Some(lambda_from_newton(&report.sums, n, d)?);
        } else {
            report.method = "reconstruction";
            let len = report.l_series.len();
            let dnum = (len - 1) / 2;
            let dden = len - 1 - dnum;
            let rf = rational_reconstruct(&report.l_series, dnum, dden)?;
            let (num, den) = rf.integral_parts().ok_or(Error::NonIntegral(0))?;
            let lambda = if n % 2 == 1 {
                (rf.den_degree() == 0).then(|| num.clone())
            } else {
                (rf.num_degree() == 0).then(|| den.clone())
            };
            report.numerator = Some(num);
            report.denominator = Some(den);
            report.lambda = lambda;
        }
        if let Some(lambda) = &report.lambda {
            report.lambda_degree = Some(lambda.iter().rposition(|c| !c.is_zero()).unwrap_or(0));
            report.root_moduli = Some(weil_check(lambda, q, n, opts.tol)?);
        }
        Ok(report)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(p: u32, v: i64) -> CycInt {
        CycInt::from_int(p, v)
    }

    #[test]
    fn geometric_series() {
        let sums: Vec<CycInt> = (1..=5).map(|i| int(3, 3i64.pow(i))).collect();
        let l = l_series(&sums).unwrap();
        for (k, c) in l.iter().enumerate() {
            assert_eq!(*c, int(3, 3i64.pow(k as u32)));
        }
        let rf = rational_reconstruct(&l, 0, 1).unwrap();
        assert_eq!(rf.num, vec![CycRational::one(3)]);
        assert_eq!(rf.den, vec![CycRational::one(3), int(3, -3).to_rational()]);
    }

    #[test]
    fn first_order_expansion() {
        let s = CycInt::from_coords(5, vec![1.into(), (-2).into(), 0.into(), 7.into()]);
        let l = l_series(std::slice::from_ref(&s)).unwrap();
        assert_eq!(l, vec![CycInt::one(5), s]);
    }

    #[test]
    fn newton_on_linear_lambda() {
        // S_i = 3^i zeta^{-i}, n = 2: Lambda = 1 - 3 zeta^2 t
        let p = 3;
        let sums: Vec<CycInt> =
            (1..=4u64).map(|i| CycInt::zeta_pow(p, 2 * i).scale(&BigInt::from(3i64.pow(i as u32)))).collect();
        let lambda = lambda_from_newton(&sums, 2, 1).unwrap();
        assert_eq!(lambda, vec![CycInt::one(p), CycInt::zeta_pow(p, 2).scale(&BigInt::from(-3))]);
        assert!(lambda_from_newton(&sums, 2, 0).is_err());
        let back = power_sums(&lambda, 4);
        assert_eq!(back, sums);
    }

    #[test]
    fn polynomial_series_reconstructs_to_itself() {
        let poly = vec![int(5, 1), int(5, 4), int(5, -2)];
        let mut series = poly.clone();
        series.extend([int(5, 0), int(5, 0)]);
        let rf = rational_reconstruct(&series, 2, 2).unwrap();
        assert_eq!(rf.den_degree(), 0);
        assert_eq!(rf.integral_parts().unwrap().0, poly);
    }

    #[test]
    fn reconstruction_fails_cleanly() {
        // 1/(1-t)^2 does not fit (num 0, den 1)
        let series: Vec<CycInt> = (1..=4).map(|k| int(3, k)).collect();
        assert!(matches!(rational_reconstruct(&series, 0, 1), Err(Error::NoRationalFunction { .. })));
        assert!(matches!(rational_reconstruct(&series, 3, 3), Err(Error::InsufficientTerms { .. })));
    }

    #[test]
    fn report_for_cubic_over_f7() {
        let f7 = crate::ff::make_field(7, 1, None).unwrap();
        let f = MultiPoly::parse("x1^3 + x1", 1, &f7).unwrap();
        let r = LReport::compute(&f, &LOptions::default()).unwrap();
        assert_eq!(r.lambda_degree, Some(2));
        let w = r.root_moduli.unwrap();
        assert!(w.pass);
        assert!(w.embeddings.iter().all(|e| e.moduli.iter().all(|m| m.starts_with("2.645751311064590590501615"))));
        let hinted = LReport::compute(&f, &LOptions { degree_hint: Some(2), ..Default::default() }).unwrap();
        assert_eq!(hinted.lambda, r.lambda);
    }

    #[test]
    fn artin_schreier_is_not_polynomial() {
        let f3 = crate::ff::make_field(3, 1, None).unwrap();
        let f = MultiPoly::parse("x1^3 - x1", 1, &f3).unwrap();
        let r = LReport::compute(&f, &LOptions::default()).unwrap();
        assert_eq!(r.lambda, None);
        assert_eq!(r.numerator.unwrap(), vec![int(3, 1)]);
        assert_eq!(r.denominator.unwrap(), vec![int(3, 1), int(3, -3)]);
    }
}
