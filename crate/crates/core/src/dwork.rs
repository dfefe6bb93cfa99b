//! Truncated Dwork theory over `F_p`: the ring `Z_p[pi]/(p^N)` with
//! `pi^{p-1} = -p`, the Artin-Hasse splitting function `theta(t) = E(gamma t)`,
//! Teichmüller lifts, the operators `alpha_k` on monomial bases of degree
//! `<= D`, and the trace congruences `sum_k (-1)^k Tr(alpha_k^i) = S_i`.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::charsum::{exponential_sum, CycInt, DEFAULT_BUDGET};
use crate::error::{Error, Result};
use crate::ff::{is_prime, FieldElement, FieldSpec};
use crate::mpoly::{Monomial, MultiPoly};

/// Element of `R_N` on the basis `1, pi, ..., pi^{p-2}`, coefficients mod `p^N`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PadicElement {
    coeffs: Vec<u64>,
}

impl PadicElement {
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

impl fmt::Debug for PadicElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.coeffs)
    }
}

impl Serialize for PadicElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coeffs.serialize(s)
    }
}

/// A valuation in units of `1/(p-1)`; `None` means `>= N` (zero in `R_N`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Valuation {
    pub units: Option<u64>,
    pub ramification: u64,
}

impl Valuation {
    /// Exact rational rendering, `"inf"` for zero.
    pub fn as_rational(&self) -> String {
        match self.units {
            None => "inf".to_string(),
            Some(u) => {
                let r = num_rational::Ratio::new(u, self.ramification);
                if *r.denom() == 1 {
                    r.numer().to_string()
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            }
        }
    }

    /// `self >= v` for a rational `v = units / (p-1)`.
    pub fn at_least(&self, units: u64) -> bool {
        self.units.is_none_or(|u| u >= units)
    }
}

impl Serialize for Valuation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.as_rational())
    }
}

/// `R_N = Z_p[pi]/(p^N)`, `pi^{p-1} = -p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicRing {
    p: u64,
    n: u32,
    modulus: u64,
}

impl PadicRing {
    pub fn new(p: u32, n: u32) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if n == 0 {
            return Err(Error::InvalidArgument("precision N must be >= 1".into()));
        }
        let modulus = (p as u64)
            .checked_pow(n)
            .filter(|&m| m <= 1 << 62)
            .ok_or_else(|| Error::FieldTooLarge(format!("{p}^{n} exceeds 2^62")))?;
        Ok(PadicRing { p: p as u64, n, modulus })
    }

    pub fn p(&self) -> u32 {
        self.p as u32
    }

    pub fn precision(&self) -> u32 {
        self.n
    }

    /// `p^N`.
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    fn e(&self) -> usize {
        self.p as usize - 1
    }

    pub fn zero(&self) -> PadicElement {
        PadicElement { coeffs: vec![0; self.e()] }
    }

    pub fn one(&self) -> PadicElement {
        self.from_int(1)
    }

    fn reduce_i128(&self, v: i128) -> u64 {
        v.rem_euclid(self.modulus as i128) as u64
    }

    pub fn from_int(&self, v: i64) -> PadicElement {
        let mut z = self.zero();
        z.coeffs[0] = self.reduce_i128(v as i128);
        z
    }

    pub fn from_bigint(&self, v: &BigInt) -> PadicElement {
        let m = BigInt::from(self.modulus);
        let r = v.mod_floor(&m).to_u64().expect("reduced");
        let mut z = self.zero();
        z.coeffs[0] = r;
        z
    }

    /// Image of a `p`-integral rational.
    pub fn from_rational(&self, v: &BigRational) -> Result<PadicElement> {
        let m = BigInt::from(self.modulus);
        let den = v.denom().mod_floor(&m);
        let g = den.extended_gcd(&m);
        if !g.gcd.is_one() {
            return Err(Error::ValuationBound(format!("{v} is not p-integral")));
        }
        Ok(self.from_bigint(&(v.numer() * g.x)))
    }

    /// `pi^e`.
    pub fn pi_pow(&self, e: u64) -> PadicElement {
        let pe = self.p - 1;
        let (q, r) = (e / pe, e % pe);
        let mut z = self.zero();
        if q >= self.n as u64 {
            return z;
        }
        let mag = self.p.pow(q as u32);
        z.coeffs[r as usize] = if q % 2 == 0 { mag % self.modulus } else { (self.modulus - mag) % self.modulus };
        z
    }

    pub fn pi(&self) -> PadicElement {
        self.pi_pow(1)
    }

    pub fn add(&self, a: &PadicElement, b: &PadicElement) -> PadicElement {
        let m = self.modulus;
        PadicElement { coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| (x + y) % m).collect() }
    }

    pub fn neg(&self, a: &PadicElement) -> PadicElement {
        let m = self.modulus;
        PadicElement { coeffs: a.coeffs.iter().map(|x| (m - x) % m).collect() }
    }

    pub fn sub(&self, a: &PadicElement, b: &PadicElement) -> PadicElement {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, c: u64, a: &PadicElement) -> PadicElement {
        let m = self.modulus as u128;
        let c = c as u128 % m;
        PadicElement { coeffs: a.coeffs.iter().map(|&x| (x as u128 * c % m) as u64).collect() }
    }

    pub fn mul(&self, a: &PadicElement, b: &PadicElement) -> PadicElement {
        let e = self.e();
        let m = self.modulus as u128;
        let mut acc = vec![0u128; 2 * e];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                if y != 0 {
                    acc[i + j] = (acc[i + j] + x as u128 * y as u128) % m;
                }
            }
        }
        // pi^{e + j} = -p pi^j
        let mut out = vec![0u64; e];
        for j in 0..e {
            let hi = acc[j + e] * self.p as u128 % m;
            out[j] = ((acc[j] + m - hi) % m) as u64;
        }
        PadicElement { coeffs: out }
    }

    pub fn pow(&self, a: &PadicElement, mut exp: u128) -> PadicElement {
        let mut acc = self.one();
        let mut base = a.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            exp >>= 1;
            if exp > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    pub fn valuation(&self, a: &PadicElement) -> Valuation {
        let e = self.e() as u64;
        let mut best: Option<u64> = None;
        for (j, &c) in a.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let mut v = 0u64;
            let mut c = c;
            while c % self.p == 0 {
                c /= self.p;
                v += 1;
            }
            let units = v * e + j as u64;
            best = Some(best.map_or(units, |b| b.min(units)));
        }
        Valuation { units: best, ramification: e }
    }

    /// Inverse of a unit by Newton iteration, `None` for non-units.
    pub fn inv(&self, a: &PadicElement) -> Option<PadicElement> {
        let a0 = a.coeffs[0] % self.p;
        if a0 == 0 {
            return None;
        }
        let mut x = self.from_int(inv_mod(a0, self.p) as i64);
        let two = self.from_int(2);
        for _ in 0..128 {
            let next = self.mul(&x, &self.sub(&two, &self.mul(a, &x)));
            if next == x {
                return Some(x);
            }
            x = next;
        }
        None
    }

    /// Image of `sum_j c_j z^j` for a cyclotomic integer and a chosen `z`.
    pub fn eval_cyc(&self, s: &CycInt, z: &PadicElement) -> PadicElement {
        let mut acc = self.zero();
        let mut zj = self.one();
        for c in s.coords() {
            acc = self.add(&acc, &self.mul(&self.from_bigint(c), &zj));
            zj = self.mul(&zj, z);
        }
        acc
    }
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let (mut b, mut e, mut acc) = (a % p, p - 2, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            acc = (acc as u128 * b as u128 % p as u128) as u64;
        }
        b = (b as u128 * b as u128 % p as u128) as u64;
        e >>= 1;
    }
    acc
}

/// `gamma` with `sum_i gamma^{p^i}/p^i = 0` and `ord gamma = 1/(p-1)`,
/// found as `gamma = pi u` with `u` a unit root of
/// `h(u) = sum_i (-1)^i pi^{p^i - i(p-1) - 1} u^{p^i}`.
pub fn solve_gamma(ring: &PadicRing) -> Result<PadicElement> {
    let u = solve_gamma_unit(ring)?;
    let gamma = ring.mul(&ring.pi(), &u);
    if ring.valuation(&gamma).units != Some(1) && ring.precision() as u64 * (ring.p - 1) > 1 {
        return Err(Error::NewtonFailure("gamma has the wrong valuation".into()));
    }
    Ok(gamma)
}

/// Exponents `p^i - i(p-1) - 1` below `N(p-1)`, with `i`.
fn gamma_terms(ring: &PadicRing) -> Vec<(u32, u64)> {
    let cap = ring.n as u64 * (ring.p - 1);
    let mut out = Vec::new();
    let mut i = 0u32;
    loop {
        let pi_exp = ring.p.checked_pow(i).map(|pp| pp - i as u64 * (ring.p - 1) - 1);
        match pi_exp {
            Some(e) if e < cap => out.push((i, e)),
            _ => break,
        }
        i += 1;
    }
    out
}

fn h_value(ring: &PadicRing, u: &PadicElement, terms: &[(u32, u64)]) -> (PadicElement, PadicElement) {
    let mut h = ring.zero();
    let mut dh = ring.zero();
    for &(i, e) in terms {
        let pp = ring.p.pow(i) as u128;
        let coef = ring.pi_pow(e);
        let coef = if i % 2 == 0 { coef } else { ring.neg(&coef) };
        let upow_minus = ring.pow(u, pp - 1);
        h = ring.add(&h, &ring.mul(&coef, &ring.mul(&upow_minus, u)));
        dh = ring.add(&dh, &ring.scale((pp % ring.modulus as u128) as u64, &ring.mul(&coef, &upow_minus)));
    }
    (h, dh)
}

fn solve_gamma_unit(ring: &PadicRing) -> Result<PadicElement> {
    let terms = gamma_terms(ring);
    let mut u = ring.one();
    for _ in 0..256 {
        let (h, dh) = h_value(ring, &u, &terms);
        if h.is_zero() {
            return Ok(u);
        }
        let inv = ring.inv(&dh).ok_or_else(|| Error::NewtonFailure("h'(u) is not a unit".into()))?;
        u = ring.sub(&u, &ring.mul(&h, &inv));
    }
    Err(Error::NewtonFailure("gamma iteration did not stabilize".into()))
}

/// Artin-Hasse coefficients `E(t) = sum e_i t^i`, exact.
pub fn artin_hasse_coefficients(p: u32, imax: usize) -> Vec<BigRational> {
    let mut e: Vec<BigRational> = vec![BigRational::one()];
    for i in 1..=imax {
        let mut acc = BigRational::zero();
        let mut pj = 1usize;
        while pj <= i {
            acc += &e[i - pj];
            pj = match pj.checked_mul(p as usize) {
                Some(v) => v,
                None => break,
            };
        }
        e.push(acc / BigRational::from_integer(BigInt::from(i)));
    }
    e
}

/// `lambda_0, ..., lambda_imax` with `theta(t) = E(gamma t) = sum lambda_i t^i`.
#[derive(Clone, Debug, Serialize)]
pub struct ThetaSeries {
    pub lambdas: Vec<PadicElement>,
    pub valuations: Vec<Valuation>,
}

pub fn theta_coefficients(ring: &PadicRing, gamma: &PadicElement, imax: usize) -> Result<ThetaSeries> {
    let e = artin_hasse_coefficients(ring.p(), imax);
    let mut lambdas = Vec::with_capacity(imax + 1);
    let mut valuations = Vec::with_capacity(imax + 1);
    let mut gpow = ring.one();
    let cap = ring.n as u64 * (ring.p - 1);
    for (i, ei) in e.iter().enumerate() {
        let l = ring.mul(&ring.from_rational(ei)?, &gpow);
        let v = ring.valuation(&l);
        if !v.at_least((i as u64).min(cap)) {
            return Err(Error::ValuationBound(format!("ord lambda_{i} = {} < {i}/{}", v.as_rational(), ring.p - 1)));
        }
        lambdas.push(l);
        valuations.push(v);
        gpow = ring.mul(&gpow, gamma);
    }
    Ok(ThetaSeries { lambdas, valuations })
}

/// Teichmüller lift of an element of `F_p` to `Z_p / p^N`.
pub fn teichmuller(ring: &PadicRing, c: &FieldElement) -> Result<PadicElement> {
    let v = c.as_prime().ok_or_else(|| Error::Unsupported("Teichmüller lifts are implemented for F_p only".into()))?;
    Ok(teichmuller_int(ring, v as u64))
}

fn teichmuller_int(ring: &PadicRing, c: u64) -> PadicElement {
    let m = ring.modulus as u128;
    let mut x = (c % ring.p) as u128;
    for _ in 0..ring.n {
        // x <- x^p
        let (mut b, mut e, mut acc) = (x, ring.p, 1u128);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b % m;
            }
            b = b * b % m;
            e >>= 1;
        }
        x = acc;
    }
    ring.from_int(x as i64)
}

/// Sparse truncated power series in `n` variables over `R_N`.
pub type Series = HashMap<Monomial, PadicElement>;

/// `psi(sum A_w x^w) = sum A_{pw} x^w`.
pub fn psi(p: u32, s: &Series) -> Series {
    s.iter()
        .filter(|(w, _)| w.exponents().iter().all(|&e| e % p == 0))
        .map(|(w, a)| (Monomial::new(w.exponents().iter().map(|&e| e / p).collect()), a.clone()))
        .collect()
}

/// `x^u * s`.
pub fn shift(s: &Series, u: &Monomial) -> Series {
    s.iter().map(|(w, a)| (w.mul(u), a.clone())).collect()
}

fn series_mul(ring: &PadicRing, a: &Series, b: &Series, max_deg: u64) -> Series {
    let mut out: Series = HashMap::new();
    for (wa, ca) in a {
        for (wb, cb) in b {
            if wa.degree() + wb.degree() > max_deg {
                continue;
            }
            let w = wa.mul(wb);
            let v = ring.mul(ca, cb);
            let e = out.entry(w).or_insert_with(|| ring.zero());
            *e = ring.add(e, &v);
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

fn require_prime_field(f: &MultiPoly) -> Result<()> {
    if f.field().degree() != 1 {
        return Err(Error::Unsupported("Dwork operators are implemented for q = p only".into()));
    }
    Ok(())
}

/// Parameters of the truncated operator.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct DworkParams {
    /// Degree cutoff `D` of the monomial basis.
    pub cutoff: u32,
    /// Ring precision `N`.
    pub precision: u32,
}

impl DworkParams {
    /// `D = 3 delta`, `N = floor((D+1)/delta) + 1`.
    pub fn default_for(delta: u64) -> Self {
        let d = 3 * delta.max(1) as u32;
        DworkParams { cutoff: d, precision: (d + 1) / delta.max(1) as u32 + 1 }
    }
}

/// `floor((D+1)/delta)`, or `N` when `delta = 0`.
pub fn guaranteed_precision(delta: u64, params: &DworkParams) -> u32 {
    if delta == 0 {
        params.precision
    } else {
        ((params.cutoff as u64 + 1) / delta) as u32
    }
}

/// Everything the operators need, computed once per `(f, D, N)`.
#[derive(Clone, Debug)]
pub struct DworkContext {
    pub ring: PadicRing,
    pub field: FieldSpec,
    pub n: usize,
    pub delta: u64,
    pub params: DworkParams,
    pub gamma: PadicElement,
    pub theta: ThetaSeries,
    /// Image of `zeta_p`, equal to `theta(1)`.
    pub zeta: PadicElement,
    pub f0: Series,
    pub guaranteed: u32,
}

impl DworkContext {
    pub fn new(f: &MultiPoly, params: DworkParams) -> Result<Self> {
        require_prime_field(f)?;
        let field = f.field().clone();
        let p = field.characteristic();
        let ring = PadicRing::new(p, params.precision)?;
        let n = f.nvars();
        let delta = f.degree().unwrap_or(0);
        let gamma = solve_gamma(&ring)?;
        let cap = params.precision as usize * (p as usize - 1);
        let range = p as u64 * (params.cutoff as u64 + n as u64);
        let imax = cap.max(1);
        let theta = theta_coefficients(&ring, &gamma, imax)?;
        let zeta = theta.lambdas[..cap.min(theta.lambdas.len())]
            .iter()
            .fold(ring.zero(), |acc, l| ring.add(&acc, l));
        let hensel = cyclotomic_root(&ring)?;
        if hensel != zeta {
            return Err(Error::NewtonFailure("theta(1) differs from the Hensel root of Phi_p".into()));
        }
        let f0 = f0_series(&ring, f, &theta, range)?;
        let guaranteed = guaranteed_precision(delta, &params);
        Ok(DworkContext { ring, field, n, delta, params, gamma, theta, zeta, f0, guaranteed })
    }

    fn f0_at(&self, w: &[i64]) -> Option<&PadicElement> {
        if w.iter().any(|&e| e < 0) {
            return None;
        }
        self.f0.get(&Monomial::new(w.iter().map(|&e| e as u32).collect()))
    }

    /// Monomials `x^v` with `|v| <= D`, ascending degree.
    pub fn basis(&self) -> Vec<Monomial> {
        (0..=self.params.cutoff).flat_map(|d| Monomial::all_of_degree(self.n, d)).collect()
    }

    /// `alpha_k` as one block per `k`-subset.
    pub fn alpha_k(&self, k: usize) -> TruncatedOperator {
        let basis = self.basis();
        let p = self.ring.p as i64;
        let scale = self.ring.p.pow((self.n - k) as u32);
        let blocks = k_subsets(self.n, k)
            .into_iter()
            .map(|subset| {
                let mut ones = vec![0i64; self.n];
                for &i in &subset {
                    ones[i] = 1;
                }
                let matrix: Vec<Vec<PadicElement>> = basis
                    .iter()
                    .map(|v| {
                        basis
                            .iter()
                            .map(|u| {
                                let w: Vec<i64> = (0..self.n)
                                    .map(|j| {
                                        p * (v.exponents()[j] as i64 + ones[j]) - (u.exponents()[j] as i64 + ones[j])
                                    })
                                    .collect();
                                match self.f0_at(&w) {
                                    Some(c) => self.ring.scale(scale, c),
                                    None => self.ring.zero(),
                                }
                            })
                            .collect()
                    })
                    .collect();
                OperatorBlock { subset: subset.iter().map(|i| i + 1).collect(), matrix }
            })
            .collect();
        TruncatedOperator { k, cutoff: self.params.cutoff, guaranteed_precision: self.guaranteed, basis, blocks }
    }

    /// `sum_k (-1)^k Tr(alpha_k^i)`.
    pub fn trace_sum(&self, i: usize) -> PadicElement {
        let ring = &self.ring;
        let mut acc = ring.zero();
        for k in 0..=self.n {
            let tr = self.alpha_k(k).trace_of_power(ring, i);
            acc = if k % 2 == 0 { ring.add(&acc, &tr) } else { ring.sub(&acc, &tr) };
        }
        acc
    }
}

/// Root of `Phi_p` congruent to `1 + pi` mod `pi^2`, by Hensel on
/// `H(w) = Phi_p(1 + pi w)/p`.
pub fn cyclotomic_root(ring: &PadicRing) -> Result<PadicElement> {
    let p = ring.p;
    if p == 2 {
        return Ok(ring.from_int(-1));
    }
    // H(w) = 1 - w^{p-1} + sum_{j=2}^{p-1} (C(p,j)/p) pi^{j-1} w^{j-1}
    let binom_over_p: Vec<u64> = (0..p)
        .map(|j| {
            if j < 2 {
                return 0;
            }
            let b = num_integer::binomial(BigInt::from(p), BigInt::from(j)) / BigInt::from(p);
            (b % BigInt::from(ring.modulus)).to_u64().expect("reduced")
        })
        .collect();
    let eval = |w: &PadicElement| -> (PadicElement, PadicElement) {
        let mut h = ring.sub(&ring.one(), &ring.pow(w, p as u128 - 1));
        let mut dh = ring.neg(&ring.scale(p - 1, &ring.pow(w, p as u128 - 2)));
        for j in 2..p {
            let c = ring.scale(binom_over_p[j as usize], &ring.pi_pow(j - 1));
            h = ring.add(&h, &ring.mul(&c, &ring.pow(w, (j - 1) as u128)));
            if j >= 3 {
                dh = ring.add(&dh, &ring.scale(j - 1, &ring.mul(&c, &ring.pow(w, (j - 2) as u128))));
            } else {
                dh = ring.add(&dh, &c);
            }
        }
        (h, dh)
    };
    let mut w = ring.one();
    for _ in 0..256 {
        let (h, dh) = eval(&w);
        if h.is_zero() {
            return Ok(ring.add(&ring.one(), &ring.mul(&ring.pi(), &w)));
        }
        let inv = ring.inv(&dh).ok_or_else(|| Error::NewtonFailure("H'(w) is not a unit".into()))?;
        w = ring.sub(&w, &ring.mul(&h, &inv));
    }
    Err(Error::NewtonFailure("cyclotomic Hensel iteration did not stabilize".into()))
}

fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

fn f0_series(ring: &PadicRing, f: &MultiPoly, theta: &ThetaSeries, range: u64) -> Result<Series> {
    let n = f.nvars();
    let cap = ring.n as usize * (ring.p as usize - 1);
    let mut acc: Series = HashMap::new();
    acc.insert(Monomial::one(n), ring.one());
    for (u, a) in f.terms() {
        let lift = teichmuller(ring, a)?;
        let deg = u.degree();
        let mut factor: Series = HashMap::new();
        let mut lpow = ring.one();
        let mut mono = Monomial::one(n);
        for (i, lambda) in theta.lambdas.iter().enumerate().take(cap) {
            if deg > 0 && i as u64 * deg > range {
                break;
            }
            let c = ring.mul(lambda, &lpow);
            if !c.is_zero() {
                let e = factor.entry(mono.clone()).or_insert_with(|| ring.zero());
                *e = ring.add(e, &c);
            }
            lpow = ring.mul(&lpow, &lift);
            mono = mono.mul(u);
        }
        factor.retain(|_, v| !v.is_zero());
        acc = series_mul(ring, &acc, &factor, range);
    }
    // truncation lemma: ord F_0[w] >= |w| / (delta (p-1))
    let delta = f.degree().unwrap_or(0);
    if delta > 0 {
        for (w, c) in &acc {
            let v = ring.valuation(c);
            // units of 1/(p-1): need units >= |w| / delta
            let need = w.degree().div_ceil(delta);
            if !v.at_least(need.min(ring.n as u64 * (ring.p - 1))) {
                return Err(Error::ValuationBound(format!(
                    "ord F_0[{:?}] = {} below |w|/(delta(p-1))",
                    w.exponents(),
                    v.as_rational()
                )));
            }
        }
    }
    Ok(acc)
}

/// Coefficients of `F_0(x) = prod_u theta(a_u x^u)` up to total degree `range`.
pub fn f0_coefficients(f: &MultiPoly, params: DworkParams, range: u64) -> Result<Series> {
    require_prime_field(f)?;
    let ring = PadicRing::new(f.field().characteristic(), params.precision)?;
    let gamma = solve_gamma(&ring)?;
    let cap = params.precision as usize * (ring.p as usize - 1);
    let theta = theta_coefficients(&ring, &gamma, cap.max(1))?;
    f0_series(&ring, f, &theta, range)
}

#[derive(Clone, Debug)]
pub struct OperatorBlock {
    /// 1-based subset `S`.
    pub subset: Vec<usize>,
    pub matrix: Vec<Vec<PadicElement>>,
}

/// Matrix of `alpha_k` on `{x^v dx_S : |v| <= D}`, block diagonal in `S`.
#[derive(Clone, Debug)]
pub struct TruncatedOperator {
    pub k: usize,
    pub cutoff: u32,
    /// Traces of powers are exact modulo `p^G` (and `p^N`).
    pub guaranteed_precision: u32,
    pub basis: Vec<Monomial>,
    pub blocks: Vec<OperatorBlock>,
}

fn mat_mul(ring: &PadicRing, a: &[Vec<PadicElement>], b: &[Vec<PadicElement>]) -> Vec<Vec<PadicElement>> {
    let m = a.len();
    (0..m)
        .into_par_iter()
        .map(|i| {
            (0..m)
                .map(|j| {
                    let mut acc = ring.zero();
                    for (l, x) in a[i].iter().enumerate() {
                        if !x.is_zero() && !b[l][j].is_zero() {
                            acc = ring.add(&acc, &ring.mul(x, &b[l][j]));
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

impl TruncatedOperator {
    pub fn trace_of_power(&self, ring: &PadicRing, i: usize) -> PadicElement {
        let mut total = ring.zero();
        for block in &self.blocks {
            let mut m = block.matrix.clone();
            for _ in 1..i {
                m = mat_mul(ring, &m, &block.matrix);
            }
            for (j, row) in m.iter().enumerate() {
                total = ring.add(&total, &row[j]);
            }
        }
        total
    }
}

pub fn alpha_k_matrix(f: &MultiPoly, k: usize, params: DworkParams, requested: Option<u32>) -> Result<TruncatedOperator> {
    let ctx = DworkContext::new(f, params)?;
    if k > ctx.n {
        return Err(Error::InvalidArgument(format!("k = {k} exceeds n = {}", ctx.n)));
    }
    if let Some(req) = requested {
        if ctx.guaranteed < req {
            return Err(Error::PrecisionTooSmall { requested: req, guaranteed: ctx.guaranteed });
        }
    }
    Ok(ctx.alpha_k(k))
}

#[derive(Clone, Debug, Serialize)]
pub struct TraceRow {
    pub i: usize,
    pub sum: CycInt,
    pub sum_image: PadicElement,
    pub trace: PadicElement,
    pub difference_valuation: Valuation,
    /// Congruence is asserted modulo `p^{compared}`.
    pub compared: u32,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct TraceReport {
    pub p: u32,
    pub n: usize,
    pub delta: u64,
    pub params: DworkParams,
    /// Derived truncation bound `floor((D+1)/delta)`.
    pub guaranteed_precision: u32,
    pub gamma: PadicElement,
    pub zeta_image: PadicElement,
    pub rows: Vec<TraceRow>,
    pub pass: bool,
}

/// `T_i` against `S_i` for `i = 1..=i_max`, reported without failing.
pub fn trace_formula_report(f: &MultiPoly, i_max: usize, params: DworkParams, budget: Option<u64>) -> Result<TraceReport> {
    let ctx = DworkContext::new(f, params)?;
    let ring = &ctx.ring;
    let compared = ctx.guaranteed.min(params.precision);
    let units = compared as u64 * (ring.p - 1);
    let mut rows = Vec::with_capacity(i_max);
    for i in 1..=i_max {
        let s = exponential_sum(f, i, budget.unwrap_or(DEFAULT_BUDGET))?;
        let image = ring.eval_cyc(&s, &ctx.zeta);
        let t = ctx.trace_sum(i);
        let v = ring.valuation(&ring.sub(&t, &image));
        rows.push(TraceRow { i, sum: s, sum_image: image, trace: t, difference_valuation: v, compared, pass: v.at_least(units) });
    }
    let pass = rows.iter().all(|r| r.pass);
    Ok(TraceReport {
        p: ring.p(),
        n: ctx.n,
        delta: ctx.delta,
        params,
        guaranteed_precision: ctx.guaranteed,
        gamma: ctx.gamma.clone(),
        zeta_image: ctx.zeta.clone(),
        rows,
        pass,
    })
}

/// As [`trace_formula_report`], failing on the first broken congruence.
pub fn trace_formula_check(f: &MultiPoly, i_max: usize, params: DworkParams) -> Result<TraceReport> {
    let report = trace_formula_report(f, i_max, params, None)?;
    if let Some(bad) = report.rows.iter().find(|r| !r.pass) {
        return Err(Error::CongruenceFailure {
            i: bad.i,
            detail: format!(
                "ord(T - S) = {} < {}",
                bad.difference_valuation.as_rational(),
                bad.compared
            ),
        });
    }
    Ok(report)
}

fn rational_string(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// The open interval `delta/((p-1)(delta-e+1)) < b < p delta/((p-1) delta + e - 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BRange {
    pub p: u64,
    pub delta: u64,
    pub e: u64,
    pub lower: BigRational,
    pub upper: BigRational,
}

impl BRange {
    pub fn is_empty(&self) -> bool {
        self.lower >= self.upper
    }
}

impl Serialize for BRange {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("BRange", 6)?;
        st.serialize_field("p", &self.p)?;
        st.serialize_field("delta", &self.delta)?;
        st.serialize_field("e", &self.e)?;
        st.serialize_field("lower", &rational_string(&self.lower))?;
        st.serialize_field("upper", &rational_string(&self.upper))?;
        st.serialize_field("empty", &self.is_empty())?;
        st.end()
    }
}

fn check_b_args(p: u64, delta: u64, e: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if e < 1 || e > delta {
        return Err(Error::InvalidBRange { delta, e });
    }
    Ok(())
}

pub fn b_range(p: u64, delta: u64, e: u64) -> Result<BRange> {
    check_b_args(p, delta, e)?;
    let big = |x: u64| BigInt::from(x);
    let lower = BigRational::new(big(delta), big(p - 1) * big(delta - e + 1));
    let upper = BigRational::new(big(p) * big(delta), big(p - 1) * big(delta) + big(e - 1));
    Ok(BRange { p, delta, e, lower, upper })
}

/// `(1 + p/(p-1)^2)(e - 1) < delta`.
pub fn b_range_nonempty(p: u64, delta: u64, e: u64) -> Result<bool> {
    check_b_args(p, delta, e)?;
    let pm1 = BigInt::from(p - 1);
    let lhs = (BigRational::one() + BigRational::new(BigInt::from(p), &pm1 * &pm1)) * BigRational::from_integer(BigInt::from(e - 1));
    Ok(lhs < BigRational::from_integer(BigInt::from(delta)))
}

/// Signed helper used by reports: `v_p` of a nonzero integer.
pub fn p_adic_valuation(v: &BigInt, p: u64) -> Option<u64> {
    if v.is_zero() {
        return None;
    }
    let mut x = v.abs();
    let pb = BigInt::from(p);
    let mut k = 0;
    while (&x % &pb).is_zero() {
        x /= &pb;
        k += 1;
    }
    Some(k)
}
