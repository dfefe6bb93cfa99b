//! Finite fields `F_{p^a}` in a polynomial basis.
//!
//! A [`FieldSpec`] is a cheap, shareable handle; [`FieldElement`]s are plain
//! `Copy` values carrying a small tag of the field that created them, and all
//! arithmetic goes through the field handle.  Elements are enumerated in the
//! order of their index `c_0 + c_1 p + ... + c_{a-1} p^{a-1}`, i.e.
//! lexicographically on the coefficient list read from the highest power down.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest supported absolute extension degree.
pub const MAX_DEGREE: usize = 32;

/// Largest supported field size `p^a` for `a > 1` (indices must fit a `u64`).
const MAX_ORDER_BITS: u32 = 62;

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    tag: u32,
    degree: u8,
    coeffs: [u32; MAX_DEGREE],
}

impl FieldElement {
    /// Coefficients in the polynomial basis `1, g, ..., g^{a-1}`.
    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs[..self.degree as usize]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs().iter().all(|&c| c == 0)
    }

    /// `Some(c)` when the element lies in the prime field.
    pub fn as_prime(&self) -> Option<u32> {
        if self.coeffs()[1..].iter().all(|&c| c == 0) {
            Some(self.coeffs[0])
        } else {
            None
        }
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.coeffs())
    }
}

struct Inner {
    p: u32,
    degree: usize,
    /// Monic modulus, low to high, length `degree + 1`.
    modulus: Vec<u32>,
    tag: u32,
    order: u64,
    /// `Tr(g^j)` for the basis powers.
    basis_traces: Vec<u32>,
}

/// The finite field `F_{p^a}`.
#[derive(Clone)]
pub struct FieldSpec {
    inner: Arc<Inner>,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degree() == 1 {
            write!(f, "F_{}", self.characteristic())
        } else {
            write!(f, "F_{}^{} mod {:?}", self.characteristic(), self.degree(), self.inner.modulus)
        }
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.inner.p == other.inner.p && self.inner.modulus == other.inner.modulus
    }
}

impl Eq for FieldSpec {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

fn fnv_tag(p: u32, modulus: &[u32]) -> u32 {
    let mut h: u32 = 0x811c_9dc5;
    for w in std::iter::once(p).chain(modulus.iter().copied()) {
        for b in w.to_le_bytes() {
            h ^= b as u32;
            h = h.wrapping_mul(0x0100_0193);
        }
    }
    h
}

/// Builds `F_{p^a}`.  Without a modulus (and `a > 1`) the lexicographically
/// smallest monic irreducible of degree `a` is used.  The modulus may be given
/// low-to-high either with or without its leading `1`.
pub fn make_field(p: u32, degree: usize, modulus: Option<&[u32]>) -> Result<FieldSpec> {
    FieldSpec::new(p, degree, modulus)
}

impl FieldSpec {
    pub fn new(p: u32, degree: usize, modulus: Option<&[u32]>) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if p >= 1 << 31 {
            return Err(Error::FieldTooLarge(format!("characteristic {p} exceeds 2^31")));
        }
        if degree == 0 || degree > MAX_DEGREE {
            return Err(Error::FieldTooLarge(format!(
                "extension degree {degree} outside 1..={MAX_DEGREE}"
            )));
        }
        let order = (p as u128).checked_pow(degree as u32);
        let order = match order {
            Some(o) if degree == 1 || o <= 1u128 << MAX_ORDER_BITS => o as u64,
            _ => {
                return Err(Error::FieldTooLarge(format!(
                    "{p}^{degree} exceeds 2^{MAX_ORDER_BITS}"
                )))
            }
        };
        let modulus = if degree == 1 {
            if let Some(m) = modulus {
                let ok = matches!(m, [_, 1] | [_]);
                if !ok {
                    return Err(Error::InvalidModulus(format!("{m:?} is not monic of degree 1")));
                }
            }
            vec![0, 1]
        } else {
            match modulus {
                Some(m) => {
                    let mut m: Vec<u32> = m.iter().map(|&c| c % p).collect();
                    if m.len() == degree {
                        m.push(1);
                    }
                    if m.len() != degree + 1 || m[degree] != 1 {
                        return Err(Error::InvalidModulus(format!(
                            "{m:?} is not a monic polynomial of degree {degree}"
                        )));
                    }
                    if !upoly::is_irreducible(&m, p) {
                        return Err(Error::ReducibleModulus { modulus: m, p });
                    }
                    m
                }
                None => upoly::smallest_irreducible(p, degree),
            }
        };
        let tag = fnv_tag(p, &modulus);
        let draft = FieldSpec {
            inner: Arc::new(Inner { p, degree, modulus, tag, order, basis_traces: Vec::new() }),
        };
        let traces = (0..degree)
            .map(|j| {
                let mut e = draft.zero();
                e.coeffs[j] = 1;
                draft.trace_by_definition(&e)
            })
            .collect();
        let mut inner = Arc::try_unwrap(draft.inner).ok().expect("draft field has a single owner");
        inner.basis_traces = traces;
        Ok(FieldSpec { inner: Arc::new(inner) })
    }

    pub fn prime_field(p: u32) -> Result<Self> {
        Self::new(p, 1, None)
    }

    pub fn characteristic(&self) -> u32 {
        self.inner.p
    }

    pub fn degree(&self) -> usize {
        self.inner.degree
    }

    pub fn order(&self) -> u64 {
        self.inner.order
    }

    /// The defining modulus, present iff the degree exceeds 1.
    pub fn modulus(&self) -> Option<&[u32]> {
        (self.inner.degree > 1).then_some(&self.inner.modulus[..])
    }

    pub fn contains(&self, x: &FieldElement) -> bool {
        x.tag == self.inner.tag
    }

    fn blank(&self) -> FieldElement {
        FieldElement { tag: self.inner.tag, degree: self.inner.degree as u8, coeffs: [0; MAX_DEGREE] }
    }

    pub fn zero(&self) -> FieldElement {
        self.blank()
    }

    pub fn one(&self) -> FieldElement {
        self.from_u64(1)
    }

    pub fn from_u64(&self, c: u64) -> FieldElement {
        let mut e = self.blank();
        e.coeffs[0] = (c % self.inner.p as u64) as u32;
        e
    }

    pub fn from_i64(&self, c: i64) -> FieldElement {
        let p = self.inner.p as i64;
        self.from_u64(c.rem_euclid(p) as u64)
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FieldElement> {
        if coeffs.len() > self.inner.degree {
            return Err(Error::DimensionMismatch { expected: self.inner.degree, got: coeffs.len() });
        }
        let mut e = self.blank();
        for (slot, &c) in e.coeffs.iter_mut().zip(coeffs) {
            *slot = c % self.inner.p;
        }
        Ok(e)
    }

    /// The class of the polynomial variable (a root of the modulus).
    pub fn generator(&self) -> FieldElement {
        if self.inner.degree == 1 {
            // root of the degree-1 modulus `x`
            return self.zero();
        }
        let mut e = self.blank();
        e.coeffs[1] = 1;
        e
    }

    pub fn add(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        let p = self.inner.p;
        let mut e = self.blank();
        for j in 0..self.inner.degree {
            let s = x.coeffs[j] as u64 + y.coeffs[j] as u64;
            e.coeffs[j] = (s % p as u64) as u32;
        }
        e
    }

    pub fn neg(&self, x: &FieldElement) -> FieldElement {
        let p = self.inner.p;
        let mut e = self.blank();
        for j in 0..self.inner.degree {
            e.coeffs[j] = if x.coeffs[j] == 0 { 0 } else { p - x.coeffs[j] };
        }
        e
    }

    pub fn sub(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        self.add(x, &self.neg(y))
    }

    pub fn scale(&self, c: u64, x: &FieldElement) -> FieldElement {
        let p = self.inner.p as u64;
        let c = c % p;
        let mut e = self.blank();
        for j in 0..self.inner.degree {
            e.coeffs[j] = (x.coeffs[j] as u64 * c % p) as u32;
        }
        e
    }

    pub fn mul(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        let m = self.inner.degree;
        let p = self.inner.p as u64;
        let mut e = self.blank();
        if m == 1 {
            e.coeffs[0] = (x.coeffs[0] as u64 * y.coeffs[0] as u64 % p) as u32;
            return e;
        }
        // m * (p-1)^2 < 2^64 because p^m <= 2^62 with m >= 2
        let mut prod = [0u64; 2 * MAX_DEGREE - 1];
        for i in 0..m {
            let xi = x.coeffs[i] as u64;
            if xi == 0 {
                continue;
            }
            for j in 0..m {
                prod[i + j] += xi * y.coeffs[j] as u64;
            }
        }
        for c in prod.iter_mut().take(2 * m - 1) {
            *c %= p;
        }
        let modulus = &self.inner.modulus;
        for k in (m..2 * m - 1).rev() {
            let t = prod[k];
            if t == 0 {
                continue;
            }
            prod[k] = 0;
            for j in 0..m {
                let idx = k - m + j;
                prod[idx] = (prod[idx] + t * ((p - modulus[j] as u64) % p)) % p;
            }
        }
        for j in 0..m {
            e.coeffs[j] = prod[j] as u32;
        }
        e
    }

    pub fn square(&self, x: &FieldElement) -> FieldElement {
        self.mul(x, x)
    }

    pub fn pow(&self, x: &FieldElement, mut exp: u128) -> FieldElement {
        let mut base = *x;
        let mut acc = self.one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            exp >>= 1;
            if exp > 0 {
                base = self.square(&base);
            }
        }
        acc
    }

    pub fn inv(&self, x: &FieldElement) -> Option<FieldElement> {
        if x.is_zero() {
            None
        } else {
            Some(self.pow(x, self.inner.order as u128 - 2))
        }
    }

    pub fn frobenius(&self, x: &FieldElement) -> FieldElement {
        self.pow(x, self.inner.p as u128)
    }

    fn trace_by_definition(&self, x: &FieldElement) -> u32 {
        let mut acc = self.zero();
        let mut cur = *x;
        for _ in 0..self.inner.degree {
            acc = self.add(&acc, &cur);
            cur = self.frobenius(&cur);
        }
        debug_assert!(acc.as_prime().is_some());
        acc.coeffs[0]
    }

    /// `x + x^p + ... + x^{p^{a-1}}`, computed from the precomputed traces of
    /// the basis powers (the trace is `F_p`-linear).
    pub fn absolute_trace(&self, x: &FieldElement) -> u32 {
        let p = self.inner.p as u64;
        let mut acc = 0u64;
        for (c, t) in x.coeffs().iter().zip(&self.inner.basis_traces) {
            acc = (acc + *c as u64 * *t as u64) % p;
        }
        acc as u32
    }

    pub fn index(&self, x: &FieldElement) -> u64 {
        let p = self.inner.p as u64;
        x.coeffs().iter().rev().fold(0u64, |acc, &c| acc * p + c as u64)
    }

    pub fn element_at(&self, mut index: u64) -> FieldElement {
        let p = self.inner.p as u64;
        let mut e = self.blank();
        for j in 0..self.inner.degree {
            e.coeffs[j] = (index % p) as u32;
            index /= p;
        }
        e
    }

    /// All `p^a` elements in index order.
    pub fn elements(&self) -> Elements {
        Elements { field: self.clone(), next: Some(self.zero()) }
    }

    /// Elements with index in `[start, end)`.
    pub fn elements_range(&self, start: u64, end: u64) -> impl Iterator<Item = FieldElement> {
        let end = end.min(self.order());
        let mut it = Elements {
            field: self.clone(),
            next: (start < end).then(|| self.element_at(start)),
        };
        let count = end.saturating_sub(start);
        (0..count).map(move |_| it.next().expect("range within field"))
    }

    pub(crate) fn increment(&self, x: &mut FieldElement) -> bool {
        let p = self.inner.p;
        for j in 0..self.inner.degree {
            x.coeffs[j] += 1;
            if x.coeffs[j] < p {
                return true;
            }
            x.coeffs[j] = 0;
        }
        false
    }

    /// Printable form: an integer for prime-field elements, otherwise a
    /// polynomial in `g` (the generator).
    pub fn format_element(&self, x: &FieldElement) -> String {
        if let Some(c) = x.as_prime() {
            return c.to_string();
        }
        let mut parts = Vec::new();
        for (j, &c) in x.coeffs().iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let var = match j {
                0 => String::new(),
                1 => "g".to_string(),
                _ => format!("g^{j}"),
            };
            parts.push(match (c, j) {
                (_, 0) => c.to_string(),
                (1, _) => var,
                _ => format!("{c}*{var}"),
            });
        }
        parts.join(" + ")
    }
}

/// Restartable enumeration of a field in index order.
pub struct Elements {
    field: FieldSpec,
    next: Option<FieldElement>,
}

impl Iterator for Elements {
    type Item = FieldElement;

    fn next(&mut self) -> Option<FieldElement> {
        let cur = self.next?;
        let mut succ = cur;
        self.next = self.field.increment(&mut succ).then_some(succ);
        Some(cur)
    }
}

/// `F_{q^i}` realised as `F_{p^{a i}}` together with an embedding of `F_q`.
#[derive(Clone, Debug)]
pub struct ExtensionSpec {
    base: FieldSpec,
    step: usize,
    big: FieldSpec,
    /// Image of the base generator.
    root: FieldElement,
    /// Images of `1, g, ..., g^{a-1}`.
    basis_images: Vec<FieldElement>,
}

impl ExtensionSpec {
    pub fn new(base: &FieldSpec, step: usize) -> Result<Self> {
        if step == 0 {
            return Err(Error::InvalidArgument("extension step must be >= 1".into()));
        }
        if step == 1 {
            let basis_images = (0..base.degree())
                .map(|j| base.element_at((base.characteristic() as u64).pow(j as u32)))
                .collect();
            return Ok(ExtensionSpec {
                base: base.clone(),
                step,
                big: base.clone(),
                root: base.generator(),
                basis_images,
            });
        }
        let p = base.characteristic();
        let a = base.degree();
        let big = FieldSpec::new(p, a * step, None)?;
        if a == 1 {
            return Ok(ExtensionSpec {
                base: base.clone(),
                step,
                root: big.zero(),
                basis_images: vec![big.one()],
                big,
            });
        }
        // F_q inside F_{q^i} is the kernel of x -> x^q - x (an F_p-linear map).
        let q = base.order() as u128;
        let m = big.degree();
        let columns: Vec<Vec<u32>> = (0..m)
            .map(|j| {
                let y = big.element_at((p as u64).pow(j as u32));
                big.sub(&big.pow(&y, q), &y).coeffs().to_vec()
            })
            .collect();
        let kernel = fp_linalg::nullspace(&columns, m, p);
        debug_assert_eq!(kernel.len(), a);
        let modulus = base.modulus().expect("degree > 1");
        let mut best: Option<(u64, FieldElement)> = None;
        for combo in 0..base.order() {
            let mut digits = combo;
            let mut x = big.zero();
            for vec in &kernel {
                let c = (digits % p as u64) as u32;
                digits /= p as u64;
                let v = big.from_coeffs(vec).expect("kernel vector length");
                x = big.add(&x, &big.scale(c as u64, &v));
            }
            // Horner on the base modulus, whose coefficients are in F_p
            let val = modulus
                .iter()
                .rev()
                .fold(big.zero(), |acc, &c| big.add(&big.mul(&acc, &x), &big.from_u64(c as u64)));
            if val.is_zero() {
                let idx = big.index(&x);
                if best.as_ref().is_none_or(|(b, _)| idx < *b) {
                    best = Some((idx, x));
                }
            }
        }
        let root = best.expect("a degree-a irreducible splits in F_{q^i}").1;
        let mut basis_images = Vec::with_capacity(a);
        let mut cur = big.one();
        for _ in 0..a {
            basis_images.push(cur);
            cur = big.mul(&cur, &root);
        }
        Ok(ExtensionSpec { base: base.clone(), step, big, root, basis_images })
    }

    pub fn base(&self) -> &FieldSpec {
        &self.base
    }

    pub fn big(&self) -> &FieldSpec {
        &self.big
    }

    pub fn step(&self) -> usize {
        self.step
    }

    /// Image of the base field's generator in the extension.
    pub fn root(&self) -> &FieldElement {
        &self.root
    }

    pub fn embed(&self, x: &FieldElement) -> FieldElement {
        if self.step == 1 {
            return *x;
        }
        let big = &self.big;
        x.coeffs()
            .iter()
            .zip(&self.basis_images)
            .fold(big.zero(), |acc, (&c, img)| big.add(&acc, &big.scale(c as u64, img)))
    }

    /// Inverse of [`embed`](Self::embed) on its image.
    pub fn pull_back(&self, y: &FieldElement) -> Option<FieldElement> {
        if self.step == 1 {
            return Some(*y);
        }
        let columns: Vec<Vec<u32>> = self.basis_images.iter().map(|b| b.coeffs().to_vec()).collect();
        let sol = fp_linalg::solve(&columns, y.coeffs(), self.base.characteristic())?;
        self.base.from_coeffs(&sol).ok()
    }

    /// `sum_{j<i} x^{q^j}`, returned as an element of the base field.
    pub fn relative_trace(&self, x: &FieldElement) -> Result<FieldElement> {
        if !self.big.contains(x) {
            return Err(Error::ForeignElement);
        }
        let q = self.base.order() as u128;
        let mut acc = self.big.zero();
        let mut cur = *x;
        for _ in 0..self.step {
            acc = self.big.add(&acc, &cur);
            cur = self.big.pow(&cur, q);
        }
        self.pull_back(&acc).ok_or(Error::ForeignElement)
    }
}

/// Dense univariate polynomials over `F_p`, low to high.
mod upoly {
    fn trim(a: &mut Vec<u64>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    fn inv_mod(a: u64, p: u64) -> u64 {
        let mut r = 1u64;
        let mut b = a % p;
        let mut e = p - 2;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        r
    }

    fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        let mut a = a.to_vec();
        trim(&mut a);
        let dm = m.len() - 1;
        let lead_inv = inv_mod(m[dm], p);
        while a.len() > dm {
            let k = a.len() - 1;
            let t = a[k] * lead_inv % p;
            for j in 0..=dm {
                let idx = k - dm + j;
                a[idx] = (a[idx] + (p - t) * m[j]) % p;
            }
            trim(&mut a);
        }
        a
    }

    fn mul_mod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut prod = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        rem(&prod, m, p)
    }

    fn pow_mod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
        let mut acc = vec![1u64];
        let mut b = rem(base, m, p);
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_mod(&acc, &b, m, p);
            }
            e >>= 1;
            if e > 0 {
                b = mul_mod(&b, &b, m, p);
            }
        }
        acc
    }

    fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut a = a.to_vec();
        let mut b = b.to_vec();
        trim(&mut a);
        trim(&mut b);
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    /// Irreducible iff `gcd(x^{p^j} - x, m) = 1` for all `1 <= j < deg m`
    /// (and `deg m >= 1`).
    pub fn is_irreducible(m: &[u32], p: u32) -> bool {
        let p = p as u64;
        let m: Vec<u64> = m.iter().map(|&c| c as u64).collect();
        let d = m.len() - 1;
        if d == 0 {
            return false;
        }
        if d == 1 {
            return true;
        }
        let x = vec![0u64, 1];
        let mut cur = x.clone();
        for _ in 1..d {
            cur = pow_mod(&cur, p, &m, p);
            let mut diff = cur.clone();
            diff.resize(diff.len().max(2), 0);
            diff[1] = (diff[1] + p - 1) % p;
            let g = gcd(&m, &diff, p);
            if g.len() != 1 {
                return false;
            }
        }
        true
    }

    pub fn smallest_irreducible(p: u32, d: usize) -> Vec<u32> {
        let mut coeffs = vec![0u32; d + 1];
        coeffs[d] = 1;
        loop {
            if coeffs[0] != 0 && is_irreducible(&coeffs, p) {
                return coeffs;
            }
            // increment the lower coefficients as a base-p counter, c_0 least significant
            let mut j = 0;
            loop {
                coeffs[j] += 1;
                if coeffs[j] < p {
                    break;
                }
                coeffs[j] = 0;
                j += 1;
                assert!(j < d, "irreducible polynomials exist in every degree");
            }
        }
    }
}

/// Small dense linear algebra mod a prime, column-oriented inputs.
pub(crate) mod fp_linalg {
    fn inv(a: u64, p: u64) -> u64 {
        let mut r = 1u64;
        let mut b = a % p;
        let mut e = p - 2;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        r
    }

    /// Reduced row echelon form in place; returns pivot columns.
    fn rref(rows: &mut [Vec<u64>], p: u64) -> Vec<usize> {
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..ncols {
            let Some(piv) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
                continue;
            };
            rows.swap(r, piv);
            let iv = inv(rows[r][c], p);
            for x in rows[r].iter_mut() {
                *x = *x * iv % p;
            }
            for i in 0..rows.len() {
                if i != r && rows[i][c] != 0 {
                    let f = rows[i][c];
                    for j in 0..ncols {
                        rows[i][j] = (rows[i][j] + (p - f) * rows[r][j]) % p;
                    }
                }
            }
            pivots.push(c);
            r += 1;
            if r == rows.len() {
                break;
            }
        }
        pivots
    }

    /// Kernel of the matrix with the given columns (each of length `nrows`).
    pub fn nullspace(columns: &[Vec<u32>], nrows: usize, p: u32) -> Vec<Vec<u32>> {
        let p = p as u64;
        let ncols = columns.len();
        let mut rows: Vec<Vec<u64>> = (0..nrows)
            .map(|i| columns.iter().map(|c| c[i] as u64).collect())
            .collect();
        let pivots = rref(&mut rows, p);
        let mut basis = Vec::new();
        for free in (0..ncols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![0u32; ncols];
            v[free] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = ((p - rows[r][free]) % p) as u32;
            }
            basis.push(v);
        }
        basis
    }

    /// Solves `sum_j x_j columns[j] = rhs`, if possible.
    pub fn solve(columns: &[Vec<u32>], rhs: &[u32], p: u32) -> Option<Vec<u32>> {
        let p = p as u64;
        let ncols = columns.len();
        let nrows = rhs.len();
        let mut rows: Vec<Vec<u64>> = (0..nrows)
            .map(|i| {
                let mut row: Vec<u64> = columns.iter().map(|c| c[i] as u64).collect();
                row.push(rhs[i] as u64);
                row
            })
            .collect();
        let pivots = rref(&mut rows, p);
        if pivots.contains(&ncols) {
            return None;
        }
        let mut x = vec![0u32; ncols];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = rows[r][ncols] as u32;
        }
        Some(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_construction() {
        let f3 = make_field(3, 1, None).unwrap();
        assert_eq!(f3.order(), 3);
        assert!(f3.modulus().is_none());
        assert_eq!(make_field(4, 1, None).unwrap_err(), Error::NotPrime(4));
    }

    #[test]
    fn f4_uses_the_unique_irreducible_quadratic() {
        let f4 = make_field(2, 2, None).unwrap();
        assert_eq!(f4.modulus().unwrap(), &[1, 1, 1]);
        // exhaustive: of x^2, x^2+1, x^2+x, x^2+x+1 only the last is irreducible
        let irreducible: Vec<_> = [[0u32, 0, 1], [1, 0, 1], [0, 1, 1], [1, 1, 1]]
            .iter()
            .filter(|m| upoly::is_irreducible(&m[..], 2))
            .collect();
        assert_eq!(irreducible, vec![&[1, 1, 1]]);
    }

    #[test]
    fn reducible_modulus_is_rejected() {
        let err = make_field(3, 2, Some(&[2, 0, 1])).unwrap_err(); // x^2 - 1
        assert!(matches!(err, Error::ReducibleModulus { .. }));
        assert!(make_field(3, 2, Some(&[1, 0])).is_ok()); // x^2 + 1, leading 1 implicit
    }

    #[test]
    fn traces_in_small_fields() {
        let f4 = make_field(2, 2, None).unwrap();
        assert_eq!(f4.absolute_trace(&f4.one()), 0);
        let f7 = make_field(7, 1, None).unwrap();
        assert_eq!(f7.absolute_trace(&f7.from_u64(5)), 5);
        let f9 = make_field(3, 2, Some(&[1, 0, 1])).unwrap();
        assert_eq!(f9.absolute_trace(&f9.generator()), 0);
    }

    #[test]
    fn enumeration_order_and_frobenius() {
        let f3 = make_field(3, 1, None).unwrap();
        let v: Vec<u32> = f3.elements().map(|x| x.coeffs()[0]).collect();
        assert_eq!(v, vec![0, 1, 2]);
        let f9 = make_field(3, 2, None).unwrap();
        let all: Vec<_> = f9.elements().collect();
        assert_eq!(all.len(), 9);
        for (i, x) in all.iter().enumerate() {
            assert_eq!(f9.index(x), i as u64);
            assert_eq!(f9.pow(x, 9), *x);
        }
        let mid: Vec<_> = f9.elements_range(3, 6).collect();
        assert_eq!(mid, all[3..6].to_vec());
    }

    #[test]
    fn inverse_and_generator() {
        let f8 = make_field(2, 3, None).unwrap();
        assert_eq!(f8.modulus().unwrap(), &[1, 1, 0, 1]);
        for x in f8.elements().skip(1) {
            let y = f8.inv(&x).unwrap();
            assert_eq!(f8.mul(&x, &y), f8.one());
        }
        assert!(f8.inv(&f8.zero()).is_none());
    }

    #[test]
    fn relative_trace_basics() {
        let f9 = make_field(3, 2, None).unwrap();
        let ext = ExtensionSpec::new(&f9, 1).unwrap();
        for x in f9.elements() {
            assert_eq!(ext.relative_trace(&x).unwrap(), x);
        }
        let f3 = make_field(3, 1, None).unwrap();
        let ext = ExtensionSpec::new(&f3, 2).unwrap();
        for x in ext.big().elements() {
            let t = ext.relative_trace(&x).unwrap();
            let te = ext.embed(&t);
            assert_eq!(ext.big().pow(&te, 3), te);
        }
        let wrong = f3.one();
        assert_eq!(ext.relative_trace(&wrong).unwrap_err(), Error::ForeignElement);
    }

    #[test]
    fn embedding_is_a_ring_homomorphism() {
        let f4 = make_field(2, 2, None).unwrap();
        let ext = ExtensionSpec::new(&f4, 3).unwrap();
        let big = ext.big();
        for x in f4.elements() {
            for y in f4.elements() {
                let s = ext.embed(&f4.add(&x, &y));
                assert_eq!(s, big.add(&ext.embed(&x), &ext.embed(&y)));
                let m = ext.embed(&f4.mul(&x, &y));
                assert_eq!(m, big.mul(&ext.embed(&x), &ext.embed(&y)));
            }
            assert_eq!(ext.pull_back(&ext.embed(&x)), Some(x));
        }
    }
}
