use num_bigint::BigInt;
use serde::Serialize;

use super::cycpoly;
use super::cyclotomic::{CycInt, CycRational};
use super::numeric::{bits_for_digits, monic_roots, Complex, Real};
use crate::error::{Error, Result};

const START_DIGITS: u32 = 50;
const MAX_DIGITS: u32 = 800;
const REPORT_DIGITS: u32 = 40;

#[derive(Clone, Debug, Serialize)]
pub struct EmbeddingRoots {
    /// `zeta -> exp(2 pi i c / p)`.
    pub c: u64,
    /// `|alpha|` for each reciprocal root, with multiplicity, ascending.
    pub moduli: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct WeilReport {
    pub q: u64,
    pub n: usize,
    pub degree: usize,
    /// `q^{n/2}`.
    pub target: String,
    pub working_digits: u32,
    pub decimal_digits: u32,
    pub embeddings: Vec<EmbeddingRoots>,
    pub max_deviation: String,
    pub tol: f64,
    pub pass: bool,
}

/// Reciprocal roots of `Lambda` under every complex embedding, compared
/// with `q^{n/2}`.
pub fn weil_check(lambda: &[CycInt], q: u64, n: usize, tol: f64) -> Result<WeilReport> {
    let p = lambda.first().map(CycInt::p).ok_or(Error::InvalidArgument("empty polynomial".into()))?;
    if lambda[0] != CycInt::one(p) {
        return Err(Error::InvalidArgument("Lambda(0) must be 1".into()));
    }
    let degree = lambda.iter().rposition(|c| !c.is_zero()).unwrap_or(0);
    // t^d Lambda(1/t) is monic and its roots are the reciprocal roots
    let reversed: Vec<CycRational> = lambda[..=degree].iter().rev().map(CycInt::to_rational).collect();
    let factors = if degree == 0 { Vec::new() } else { cycpoly::squarefree(&reversed, p) };

    let mut digits = START_DIGITS;
    loop {
        if let Some(report) = attempt(&factors, p, q, n, degree, tol, digits) {
            return Ok(report);
        }
        if digits >= MAX_DIGITS {
            return Err(Error::RootFinding(digits));
        }
        digits = (digits * 2).min(MAX_DIGITS);
    }
}

fn attempt(
    factors: &[(Vec<CycRational>, usize)],
    p: u32,
    q: u64,
    n: usize,
    degree: usize,
    tol: f64,
    digits: u32,
) -> Option<WeilReport> {
    let bits = bits_for_digits(digits);
    let target = Real::from_int(&BigInt::from(q).pow(n as u32), bits).sqrt();
    let mut max_dev = Real::zero(bits);
    let mut embeddings = Vec::new();
    for c in 1..p as u64 {
        let table = Complex::roots_of_unity(p, c, bits);
        let mut moduli: Vec<Real> = Vec::with_capacity(degree);
        for (g, mult) in factors {
            let d = g.len() - 1;
            let coeffs: Vec<Complex> = g[..d].iter().map(|a| a.embed_with(&table, bits)).collect();
            let roots = monic_roots(&coeffs, bits)?;
            for r in roots {
                let m = r.abs();
                max_dev = max_dev.max(m.sub(&target).abs());
                for _ in 0..*mult {
                    moduli.push(m.clone());
                }
            }
        }
        moduli.sort_by(|a, b| a.cmp_value(b));
        embeddings.push(EmbeddingRoots {
            c,
            moduli: moduli.iter().map(|m| m.to_decimal(REPORT_DIGITS)).collect(),
        });
    }
    let pass = max_dev.cmp_value(&Real::from_f64(tol, bits)).is_le();
    Some(WeilReport {
        q,
        n,
        degree,
        target: target.to_decimal(REPORT_DIGITS),
        working_digits: digits,
        decimal_digits: REPORT_DIGITS,
        embeddings,
        max_deviation: max_dev.to_decimal(REPORT_DIGITS),
        tol,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_lambda_has_exact_modulus() {
        let lambda = vec![CycInt::one(3), CycInt::zeta_pow(3, 2).scale(&BigInt::from(-3))];
        let r = weil_check(&lambda, 3, 2, 1e-30).unwrap();
        assert!(r.pass);
        assert_eq!(r.embeddings.len(), 2);
        for e in &r.embeddings {
            assert_eq!(e.moduli, vec![format!("3.{}", "0".repeat(40))]);
        }
    }

    #[test]
    fn constant_lambda_is_vacuous() {
        let r = weil_check(&[CycInt::one(7)], 7, 1, 1e-9).unwrap();
        assert!(r.pass);
        assert_eq!(r.degree, 0);
        assert!(r.embeddings.iter().all(|e| e.moduli.is_empty()));
    }

    #[test]
    fn repeated_roots_are_handled() {
        // (1 - 2t)^2 = 1 - 4t + 4t^2, moduli 2 = 4^{1/2}
        let lambda = vec![CycInt::one(5), CycInt::from_int(5, -4), CycInt::from_int(5, 4)];
        let r = weil_check(&lambda, 4, 1, 1e-40).unwrap();
        assert!(r.pass);
        assert_eq!(r.embeddings[0].moduli.len(), 2);
    }

    #[test]
    fn impure_roots_fail() {
        // 1 - 3t with target sqrt(3)
        let lambda = vec![CycInt::one(3), CycInt::from_int(3, -3)];
        assert!(!weil_check(&lambda, 3, 1, 1e-9).unwrap().pass);
    }
}
