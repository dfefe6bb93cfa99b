//! Exact arithmetic in `Z[zeta_p]` and `Q(zeta_p)`.
//!
//! Elements are stored on the power basis `1, zeta, ..., zeta^{p-2}`; products
//! are formed in the redundant length-`p` basis and folded back with
//! `zeta^{p-1} = -(1 + zeta + ... + zeta^{p-2})`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use super::numeric::{Complex, Real};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycInt {
    p: u32,
    coords: Vec<BigInt>,
}

impl fmt::Debug for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (j, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            parts.push(match j {
                0 => c.to_string(),
                1 => format!("{c}*z"),
                _ => format!("{c}*z^{j}"),
            });
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl Serialize for CycInt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let strings: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        strings.serialize(s)
    }
}

impl CycInt {
    pub fn zero(p: u32) -> Self {
        assert!(p >= 2, "cyclotomic prime");
        CycInt { p, coords: vec![BigInt::zero(); p as usize - 1] }
    }

    pub fn one(p: u32) -> Self {
        Self::from_int(p, BigInt::one())
    }

    pub fn from_int(p: u32, v: impl Into<BigInt>) -> Self {
        let mut z = Self::zero(p);
        z.coords[0] = v.into();
        z
    }

    /// `zeta^j`.
    pub fn zeta_pow(p: u32, j: u64) -> Self {
        let mut r = vec![BigInt::zero(); p as usize];
        r[(j % p as u64) as usize] = BigInt::one();
        Self::from_redundant(p, r)
    }

    /// Canonical form of `sum_{j<p} r_j zeta^j`.
    pub fn from_redundant(p: u32, mut r: Vec<BigInt>) -> Self {
        assert_eq!(r.len(), p as usize);
        let top = r.pop().expect("p >= 2");
        if !top.is_zero() {
            for c in r.iter_mut() {
                *c -= &top;
            }
        }
        CycInt { p, coords: r }
    }

    /// `sum_r counts[r] zeta^r`.
    pub fn from_counts(p: u32, counts: &[u64]) -> Self {
        Self::from_redundant(p, counts.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn from_coords(p: u32, coords: Vec<BigInt>) -> Self {
        assert_eq!(coords.len(), p as usize - 1);
        CycInt { p, coords }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    /// The rational integer value, if the element lies in `Z`.
    pub fn as_integer(&self) -> Option<&BigInt> {
        self.coords[1..].iter().all(Zero::is_zero).then(|| &self.coords[0])
    }

    pub fn add(&self, o: &CycInt) -> CycInt {
        debug_assert_eq!(self.p, o.p);
        CycInt { p: self.p, coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, o: &CycInt) -> CycInt {
        debug_assert_eq!(self.p, o.p);
        CycInt { p: self.p, coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a - b).collect() }
    }

    pub fn neg(&self) -> CycInt {
        CycInt { p: self.p, coords: self.coords.iter().map(|a| -a).collect() }
    }

    pub fn scale(&self, k: &BigInt) -> CycInt {
        CycInt { p: self.p, coords: self.coords.iter().map(|a| a * k).collect() }
    }

    pub fn mul(&self, o: &CycInt) -> CycInt {
        debug_assert_eq!(self.p, o.p);
        let p = self.p as usize;
        let mut r = vec![BigInt::zero(); p];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coords.iter().enumerate() {
                if !b.is_zero() {
                    r[(i + j) % p] += a * b;
                }
            }
        }
        Self::from_redundant(self.p, r)
    }

    pub fn pow(&self, mut e: u32) -> CycInt {
        let mut acc = CycInt::one(self.p);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// The Galois automorphism `zeta -> zeta^c`, `p` not dividing `c`.
    pub fn galois(&self, c: u64) -> CycInt {
        let p = self.p as usize;
        assert!(!c.is_multiple_of(p as u64), "Galois exponent must be prime to p");
        let mut r = vec![BigInt::zero(); p];
        for (j, a) in self.coords.iter().enumerate() {
            r[(j as u64 * c % p as u64) as usize] += a;
        }
        Self::from_redundant(self.p, r)
    }

    /// Gcd of the coordinates (non-negative).
    pub fn content(&self) -> BigInt {
        self.coords.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Division by a rational integer, if exact.
    pub fn div_exact(&self, k: &BigInt) -> Option<CycInt> {
        let mut coords = Vec::with_capacity(self.coords.len());
        for c in &self.coords {
            let (q, r) = c.div_rem(k);
            if !r.is_zero() {
                return None;
            }
            coords.push(q);
        }
        Some(CycInt { p: self.p, coords })
    }

    /// Product of all `p-1` conjugates, a rational integer.
    pub fn norm(&self) -> BigInt {
        let (_, n) = self.norm_cofactor();
        n
    }

    /// `(prod_{c=2}^{p-1} sigma_c(self), norm)`.
    fn norm_cofactor(&self) -> (CycInt, BigInt) {
        let mut cof = CycInt::one(self.p);
        for c in 2..self.p as u64 {
            cof = cof.mul(&self.galois(c));
        }
        let n = self.mul(&cof);
        let n = n.as_integer().cloned().expect("norm lies in Z");
        (cof, n)
    }

    /// Numerical image under `zeta -> exp(2 pi i c / p)`.
    pub fn embed(&self, c: u64, bits: u32) -> Complex {
        self.embed_with(&Complex::roots_of_unity(self.p, c, bits), bits)
    }

    /// Same as [`embed`](Self::embed) with a precomputed table from
    /// [`Complex::roots_of_unity`].
    pub fn embed_with(&self, roots: &[Complex], bits: u32) -> Complex {
        let mut acc = Complex::zero(bits);
        for (a, w) in self.coords.iter().zip(roots) {
            if !a.is_zero() {
                acc = acc.add(&w.scale_int(a));
            }
        }
        acc
    }

    pub fn to_rational(&self) -> CycRational {
        CycRational { num: self.clone(), den: BigInt::one() }
    }
}

/// An element of `Q(zeta_p)` as `num / den`, `den > 0`, reduced.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycRational {
    num: CycInt,
    den: BigInt,
}

impl fmt::Debug for CycRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CycRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/{}", self.num, self.den)
        }
    }
}

impl Serialize for CycRational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("CycRational", 2)?;
        st.serialize_field("num", &self.num)?;
        st.serialize_field("den", &self.den.to_string())?;
        st.end()
    }
}

impl CycRational {
    pub fn new(num: CycInt, den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let mut r = CycRational { num, den };
        r.normalize();
        r
    }

    pub fn zero(p: u32) -> Self {
        CycInt::zero(p).to_rational()
    }

    pub fn one(p: u32) -> Self {
        CycInt::one(p).to_rational()
    }

    fn normalize(&mut self) {
        if self.den.is_negative() {
            self.den = -&self.den;
            self.num = self.num.neg();
        }
        let g = self.num.content().gcd(&self.den);
        if !g.is_one() && !g.is_zero() {
            self.num = self.num.div_exact(&g).expect("gcd divides");
            self.den = &self.den / &g;
        }
        if self.num.is_zero() {
            self.den = BigInt::one();
        }
    }

    pub fn p(&self) -> u32 {
        self.num.p
    }

    pub fn numerator(&self) -> &CycInt {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// `Some` when the denominator is 1.
    pub fn as_cyc_int(&self) -> Option<&CycInt> {
        self.den.is_one().then_some(&self.num)
    }

    pub fn add(&self, o: &CycRational) -> CycRational {
        let num = self.num.scale(&o.den).add(&o.num.scale(&self.den));
        CycRational::new(num, &self.den * &o.den)
    }

    pub fn sub(&self, o: &CycRational) -> CycRational {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> CycRational {
        CycRational { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, o: &CycRational) -> CycRational {
        CycRational::new(self.num.mul(&o.num), &self.den * &o.den)
    }

    pub fn div_int(&self, k: &BigInt) -> CycRational {
        CycRational::new(self.num.clone(), &self.den * k)
    }

    pub fn inv(&self) -> Option<CycRational> {
        if self.is_zero() {
            return None;
        }
        let (cof, norm) = self.num.norm_cofactor();
        Some(CycRational::new(cof.scale(&self.den), norm))
    }

    pub fn div(&self, o: &CycRational) -> Option<CycRational> {
        o.inv().map(|i| self.mul(&i))
    }

    pub fn embed(&self, c: u64, bits: u32) -> Complex {
        self.embed_with(&Complex::roots_of_unity(self.p(), c, bits), bits)
    }

    pub fn embed_with(&self, roots: &[Complex], bits: u32) -> Complex {
        let z = self.num.embed_with(roots, bits);
        let d = Real::from_int(&self.den, bits);
        Complex::new(z.re.div(&d), z.im.div(&d))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(p: u32, coords: &[i64]) -> CycInt {
        CycInt::from_coords(p, coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    #[test]
    fn sum_of_all_roots_vanishes() {
        for p in [2u32, 3, 5, 7] {
            let s = (0..p as u64).fold(CycInt::zero(p), |acc, j| acc.add(&CycInt::zeta_pow(p, j)));
            assert!(s.is_zero(), "p = {p}");
        }
    }

    #[test]
    fn zeta_has_order_p() {
        let zeta = CycInt::zeta_pow(5, 1);
        assert_eq!(zeta.pow(5), CycInt::one(5));
        assert_ne!(zeta.pow(2), CycInt::one(5));
        // zeta_3^{-1} = zeta^2 = -1 - zeta
        assert_eq!(CycInt::zeta_pow(3, 2), z(3, &[-1, -1]));
    }

    #[test]
    fn galois_is_a_ring_automorphism() {
        let a = z(5, &[1, -2, 0, 3]);
        let b = z(5, &[0, 4, 1, -1]);
        for c in 1..5 {
            assert_eq!(a.mul(&b).galois(c), a.galois(c).mul(&b.galois(c)));
            assert_eq!(a.add(&b).galois(c), a.galois(c).add(&b.galois(c)));
        }
    }

    #[test]
    fn norms_and_inverses() {
        // N(1 - zeta_p) = p
        for p in [3u32, 5, 7] {
            let x = CycInt::one(p).sub(&CycInt::zeta_pow(p, 1));
            assert_eq!(x.norm(), BigInt::from(p));
        }
        let a = z(7, &[2, 0, -1, 3, 0, 1]).to_rational();
        let inv = a.inv().unwrap();
        assert_eq!(a.mul(&inv), CycRational::one(7));
        let two = CycInt::from_int(2, 6).to_rational();
        assert_eq!(two.inv().unwrap(), CycRational::new(CycInt::one(2), BigInt::from(6)));
    }

    #[test]
    fn embedding_of_one_plus_two_zeta() {
        // |1 + 2 zeta_3|^2 = 3
        let x = z(3, &[1, 2]);
        for c in 1..3 {
            let w = x.embed(c, 200);
            let n2 = w.norm_sqr();
            assert!(n2.sub(&Real::from_int(&BigInt::from(3), 200)).abs().lt_pow2(-150));
        }
    }
}
