//! Fixed-point multiprecision reals and complex numbers, used only for
//! embedding cyclotomic values into `C` and locating polynomial roots.

use std::cmp::Ordering;

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};

const GUARD: u32 = 48;

/// `m / 2^bits`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Real {
    m: BigInt,
    bits: u32,
}

pub fn bits_for_digits(digits: u32) -> u32 {
    // log2(10) < 3.3220
    (digits as u64 * 33220 / 10000) as u32 + 16
}

impl Real {
    pub fn zero(bits: u32) -> Self {
        Real { m: BigInt::zero(), bits }
    }

    pub fn from_int(v: &BigInt, bits: u32) -> Self {
        Real { m: v << bits, bits }
    }

    pub fn from_i64(v: i64, bits: u32) -> Self {
        Self::from_int(&BigInt::from(v), bits)
    }

    pub fn from_ratio(num: &BigInt, den: &BigInt, bits: u32) -> Self {
        Real { m: (num << bits) / den, bits }
    }

    pub fn from_f64(x: f64, bits: u32) -> Self {
        assert!(x.is_finite());
        if x == 0.0 {
            return Self::zero(bits);
        }
        let raw = x.abs().to_bits();
        let exp = ((raw >> 52) & 0x7ff) as i64;
        let frac = raw & ((1u64 << 52) - 1);
        let (mant, e) = if exp == 0 { (frac, -1074) } else { (frac | (1u64 << 52), exp - 1075) };
        let shift = bits as i64 + e;
        let mut m = BigInt::from(mant);
        m = if shift >= 0 { m << shift as usize } else { m >> (-shift) as usize };
        if x < 0.0 {
            m = -m;
        }
        Real { m, bits }
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn with_bits(&self, bits: u32) -> Real {
        let m = match bits.cmp(&self.bits) {
            Ordering::Equal => self.m.clone(),
            Ordering::Greater => &self.m << (bits - self.bits),
            Ordering::Less => &self.m >> (self.bits - bits),
        };
        Real { m, bits }
    }

    pub fn add(&self, o: &Real) -> Real {
        debug_assert_eq!(self.bits, o.bits);
        Real { m: &self.m + &o.m, bits: self.bits }
    }

    pub fn sub(&self, o: &Real) -> Real {
        debug_assert_eq!(self.bits, o.bits);
        Real { m: &self.m - &o.m, bits: self.bits }
    }

    pub fn neg(&self) -> Real {
        Real { m: -&self.m, bits: self.bits }
    }

    pub fn abs(&self) -> Real {
        Real { m: self.m.abs(), bits: self.bits }
    }

    pub fn mul(&self, o: &Real) -> Real {
        debug_assert_eq!(self.bits, o.bits);
        Real { m: (&self.m * &o.m) >> self.bits, bits: self.bits }
    }

    pub fn div(&self, o: &Real) -> Real {
        debug_assert_eq!(self.bits, o.bits);
        Real { m: (&self.m << self.bits) / &o.m, bits: self.bits }
    }

    pub fn scale_int(&self, k: &BigInt) -> Real {
        Real { m: &self.m * k, bits: self.bits }
    }

    pub fn half(&self) -> Real {
        Real { m: &self.m >> 1, bits: self.bits }
    }

    pub fn sqrt(&self) -> Real {
        assert!(!self.m.is_negative(), "square root of a negative number");
        Real { m: (&self.m << self.bits).sqrt(), bits: self.bits }
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.m.is_negative()
    }

    /// `|self| < 2^k`.
    pub fn lt_pow2(&self, k: i64) -> bool {
        let e = self.bits as i64 + k;
        if e < 0 {
            return self.m.is_zero();
        }
        self.m.abs() < (BigInt::one() << e as usize)
    }

    pub fn to_f64(&self) -> f64 {
        // keep ~60 significant bits
        let excess = self.m.bits().saturating_sub(60);
        let top = (&self.m >> excess as usize).to_f64().unwrap_or(0.0);
        top * 2f64.powi(excess as i32 - self.bits as i32)
    }

    /// Rounded decimal expansion with exactly `digits` fractional digits.
    pub fn to_decimal(&self, digits: u32) -> String {
        let scaled = &self.m * BigInt::from(10u32).pow(digits);
        let half = BigInt::one() << (self.bits.max(1) - 1) as usize;
        let rounded: BigInt = if self.bits == 0 {
            scaled
        } else if scaled.is_negative() {
            -((-&scaled + &half) >> self.bits as usize)
        } else {
            (scaled + &half) >> self.bits as usize
        };
        let neg = rounded.sign() == Sign::Minus;
        let mut s = rounded.abs().to_string();
        if digits == 0 {
            return if neg { format!("-{s}") } else { s };
        }
        let d = digits as usize;
        if s.len() <= d {
            s = format!("{}{}", "0".repeat(d + 1 - s.len()), s);
        }
        let (int_part, frac) = s.split_at(s.len() - d);
        format!("{}{}.{}", if neg { "-" } else { "" }, int_part, frac)
    }

    pub fn cmp_value(&self, o: &Real) -> Ordering {
        debug_assert_eq!(self.bits, o.bits);
        self.m.cmp(&o.m)
    }

    pub fn max(self, o: Real) -> Real {
        if self.cmp_value(&o) == Ordering::Less {
            o
        } else {
            self
        }
    }

    /// `pi` via Machin's formula.
    pub fn pi(bits: u32) -> Real {
        let w = bits + GUARD;
        let atan_inv = |x: u32| -> BigInt {
            let x2 = BigInt::from(x) * BigInt::from(x);
            let mut term = (BigInt::one() << w as usize) / BigInt::from(x);
            let mut sum = BigInt::zero();
            let mut k = 0u32;
            while !term.is_zero() {
                let t = &term / BigInt::from(2 * k + 1);
                if k.is_multiple_of(2) {
                    sum += t;
                } else {
                    sum -= t;
                }
                term /= &x2;
                k += 1;
            }
            sum
        };
        let m = atan_inv(5) * 16 - atan_inv(239) * 4;
        Real { m: m >> GUARD as usize, bits }
    }

    /// `(cos x, sin x)` by Taylor series after reduction to `[-pi, pi]`.
    pub fn cos_sin(&self) -> (Real, Real) {
        let bits = self.bits;
        let w = bits + GUARD;
        let x = self.with_bits(w);
        let two_pi = Real::pi(w).scale_int(&BigInt::from(2));
        let pi = two_pi.half();
        // reduce
        let k = x.add(&pi).div(&two_pi);
        let k_floor = &k.m >> w as usize;
        let x = x.sub(&two_pi.scale_int(&k_floor));
        let mut cos = Real::from_i64(1, w);
        let mut sin = x.clone();
        let x2 = x.mul(&x);
        let mut term_c = Real::from_i64(1, w);
        let mut term_s = x;
        let mut n = 1u64;
        loop {
            term_c = term_c.mul(&x2).neg();
            term_c.m /= BigInt::from((2 * n - 1) * (2 * n));
            term_s = term_s.mul(&x2).neg();
            term_s.m /= BigInt::from((2 * n) * (2 * n + 1));
            if term_c.is_zero() && term_s.is_zero() {
                break;
            }
            cos = cos.add(&term_c);
            sin = sin.add(&term_s);
            n += 1;
        }
        (cos.with_bits(bits), sin.with_bits(bits))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Complex {
    pub re: Real,
    pub im: Real,
}

impl Complex {
    pub fn new(re: Real, im: Real) -> Self {
        Complex { re, im }
    }

    pub fn zero(bits: u32) -> Self {
        Complex { re: Real::zero(bits), im: Real::zero(bits) }
    }

    pub fn from_real(re: Real) -> Self {
        let bits = re.bits;
        Complex { re, im: Real::zero(bits) }
    }

    pub fn from_f64(re: f64, im: f64, bits: u32) -> Self {
        Complex { re: Real::from_f64(re, bits), im: Real::from_f64(im, bits) }
    }

    pub fn add(&self, o: &Complex) -> Complex {
        Complex { re: self.re.add(&o.re), im: self.im.add(&o.im) }
    }

    pub fn sub(&self, o: &Complex) -> Complex {
        Complex { re: self.re.sub(&o.re), im: self.im.sub(&o.im) }
    }

    pub fn mul(&self, o: &Complex) -> Complex {
        Complex {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }

    pub fn div(&self, o: &Complex) -> Complex {
        let d = o.norm_sqr();
        let re = self.re.mul(&o.re).add(&self.im.mul(&o.im)).div(&d);
        let im = self.im.mul(&o.re).sub(&self.re.mul(&o.im)).div(&d);
        Complex { re, im }
    }

    pub fn scale_int(&self, k: &BigInt) -> Complex {
        Complex { re: self.re.scale_int(k), im: self.im.scale_int(k) }
    }

    pub fn norm_sqr(&self) -> Real {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }

    pub fn abs(&self) -> Real {
        self.norm_sqr().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// `[w^0, ..., w^{p-2}]` with `w = exp(2 pi i c / p)`.
    pub fn roots_of_unity(p: u32, c: u64, bits: u32) -> Vec<Complex> {
        let w_bits = bits + GUARD;
        let angle = Real::pi(w_bits)
            .scale_int(&BigInt::from(2 * (c % p as u64)))
            .div(&Real::from_i64(p as i64, w_bits));
        let (cos, sin) = angle.cos_sin();
        let w = Complex::new(cos, sin);
        let mut out = Vec::with_capacity(p as usize - 1);
        let mut cur = Complex::from_real(Real::from_i64(1, w_bits));
        for _ in 0..p - 1 {
            out.push(Complex::new(cur.re.with_bits(bits), cur.im.with_bits(bits)));
            cur = cur.mul(&w);
        }
        out
    }
}

/// Roots of the monic polynomial `c_0 + c_1 z + ... + c_{d-1} z^{d-1} + z^d`
/// by Weierstrass (Durand-Kerner) iteration.  `None` on non-convergence.
/// Intended for square-free input, where convergence is quadratic.
pub fn monic_roots(coeffs: &[Complex], bits: u32) -> Option<Vec<Complex>> {
    let d = coeffs.len();
    if d == 0 {
        return Some(Vec::new());
    }
    let eval = |z: &Complex| -> Complex {
        let mut acc = Complex::from_real(Real::from_i64(1, bits));
        for c in coeffs.iter().rev() {
            acc = acc.mul(z).add(c);
        }
        acc
    };
    // initial guesses on the circle of the geometric-mean root radius
    let a0 = coeffs[0].abs().to_f64();
    let radius = if a0 > 0.0 { a0.powf(1.0 / d as f64) } else { 1.0 };
    let mut z: Vec<Complex> = (0..d)
        .map(|k| {
            let t = 2.0 * std::f64::consts::PI * k as f64 / d as f64 + 0.4;
            Complex::from_f64(radius * t.cos(), radius * t.sin(), bits)
        })
        .collect();
    let scale = radius.max(1.0);
    let tol_exp = -(bits as i64) / 2 + scale.log2().ceil() as i64;
    let mut settled = 0;
    for _ in 0..4000 {
        let mut worst_small = true;
        for k in 0..d {
            let num = eval(&z[k]);
            let mut den = Complex::from_real(Real::from_i64(1, bits));
            for j in 0..d {
                if j != k {
                    den = den.mul(&z[k].sub(&z[j]));
                }
            }
            if den.is_zero() {
                // coincident iterates: nudge apart
                let nudge = Complex::from_f64(1e-6 * scale, 1e-6 * scale * (k as f64 + 1.0), bits);
                z[k] = z[k].add(&nudge);
                worst_small = false;
                continue;
            }
            let delta = num.div(&den);
            if !(delta.re.lt_pow2(tol_exp) && delta.im.lt_pow2(tol_exp)) {
                worst_small = false;
            }
            z[k] = z[k].sub(&delta);
        }
        if worst_small {
            settled += 1;
            if settled >= 2 {
                return Some(z);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pi_and_trig() {
        let pi = Real::pi(200);
        assert!(pi.to_decimal(40).starts_with("3.141592653589793238462643383279"));
        let (c, s) = pi.half().cos_sin();
        assert!(c.lt_pow2(-180));
        assert!(s.sub(&Real::from_i64(1, 200)).lt_pow2(-180));
    }

    #[test]
    fn sqrt_and_decimal() {
        let r = Real::from_i64(7, 256).sqrt();
        assert_eq!(r.to_decimal(20), "2.64575131106459059050");
        assert_eq!(Real::from_f64(-0.5, 64).to_decimal(3), "-0.500");
        assert_eq!(Real::from_f64(1e-9, 128).to_decimal(9), "0.000000001");
    }

    #[test]
    fn roots_of_quadratic() {
        // z^2 + 7 has roots +- i sqrt 7
        let bits = 200;
        let coeffs = [Complex::from_real(Real::from_i64(7, bits)), Complex::zero(bits)];
        let roots = monic_roots(&coeffs, bits).unwrap();
        let s7 = Real::from_i64(7, bits).sqrt();
        for r in roots {
            assert!(r.abs().sub(&s7).lt_pow2(-90));
        }
    }
}
