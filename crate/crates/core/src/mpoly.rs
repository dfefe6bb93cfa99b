//! Sparse multivariate polynomials over a finite field.
//!
//! Terms are stored in a `BTreeMap` keyed by exponent vector (lexicographic
//! key order, used only for storage); printing and all leading-term questions
//! use graded reverse lexicographic order.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::ff::{ExtensionSpec, FieldElement, FieldSpec};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<u32>);

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    /// The variable `x_{i+1}` (0-based index).
    pub fn var(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn checked_mul(&self, other: &Monomial) -> Option<Monomial> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_add(*b))
            .collect::<Option<Vec<_>>>()
            .map(Monomial)
    }

    /// Product; exponents beyond `u32` are a hard error.
    pub fn mul(&self, other: &Monomial) -> Monomial {
        self.checked_mul(other).expect("monomial exponent overflow")
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self` when `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        self.divides(other)
            .then(|| Monomial(other.0.iter().zip(&self.0).map(|(b, a)| b - a).collect()))
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.min(b)).collect())
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Graded reverse lexicographic comparison with `x1 > x2 > ... > xn`.
    pub fn grevlex_cmp(&self, other: &Monomial) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            for (a, b) in self.0.iter().zip(&other.0).rev() {
                if a != b {
                    return b.cmp(a);
                }
            }
            Ordering::Equal
        })
    }

    /// All monomials in `n` variables of total degree exactly `d`, in
    /// descending grevlex order.
    pub fn all_of_degree(n: usize, d: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; n];
        fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
            let n = cur.len();
            if i + 1 == n {
                cur[i] = left;
                out.push(Monomial(cur.clone()));
                return;
            }
            for e in (0..=left).rev() {
                cur[i] = e;
                rec(i + 1, left - e, cur, out);
            }
            cur[i] = 0;
        }
        if n == 0 {
            if d == 0 {
                out.push(Monomial(Vec::new()));
            }
            return out;
        }
        rec(0, d, &mut cur, &mut out);
        out.sort_by(|a, b| b.grevlex_cmp(a));
        out
    }

    fn write_vars(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "x{}", i + 1)?;
            } else {
                write!(f, "x{}^{}", i + 1, e)?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    n: usize,
    field: FieldSpec,
    terms: BTreeMap<Monomial, FieldElement>,
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly({self})")
    }
}

/// Homogeneous decomposition `f = f^(delta) + ... + f^(0)`.
#[derive(Clone, Debug)]
pub struct HomogDecomp {
    /// `parts[j]` is the homogeneous part of degree `j` (possibly zero).
    pub parts: Vec<MultiPoly>,
    pub delta: u64,
    /// Largest `1 <= j < delta` with a nonzero part of degree `j`.
    pub delta_prime: Option<u64>,
}

impl HomogDecomp {
    pub fn top(&self) -> &MultiPoly {
        &self.parts[self.delta as usize]
    }

    pub fn second(&self) -> Option<&MultiPoly> {
        self.delta_prime.map(|j| &self.parts[j as usize])
    }
}

impl MultiPoly {
    pub fn zero(field: &FieldSpec, n: usize) -> Self {
        MultiPoly { n, field: field.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(field: &FieldSpec, n: usize, c: FieldElement) -> Self {
        Self::monomial(field, n, Monomial::one(n), c)
    }

    pub fn one(field: &FieldSpec, n: usize) -> Self {
        Self::constant(field, n, field.one())
    }

    /// The variable `x_{i+1}` (0-based index).
    pub fn var(field: &FieldSpec, n: usize, i: usize) -> Self {
        Self::monomial(field, n, Monomial::var(n, i), field.one())
    }

    pub fn monomial(field: &FieldSpec, n: usize, m: Monomial, c: FieldElement) -> Self {
        assert_eq!(m.nvars(), n, "monomial arity");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MultiPoly { n, field: field.clone(), terms }
    }

    pub fn from_terms(
        field: &FieldSpec,
        n: usize,
        terms: impl IntoIterator<Item = (Monomial, FieldElement)>,
    ) -> Self {
        let mut p = Self::zero(field, n);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: FieldElement) {
        assert_eq!(m.nvars(), self.n, "monomial arity");
        if c.is_zero() {
            return;
        }
        let f = &self.field;
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let s = f.add(existing, &c);
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &FieldElement)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> FieldElement {
        self.terms.get(m).copied().unwrap_or_else(|| self.field.zero())
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u64> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    /// Terms in descending grevlex order.
    pub fn sorted_terms(&self) -> Vec<(&Monomial, &FieldElement)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| b.0.grevlex_cmp(a.0));
        v
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), *c);
        }
        out
    }

    pub fn neg(&self) -> MultiPoly {
        let f = &self.field;
        MultiPoly {
            n: self.n,
            field: f.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), f.neg(c))).collect(),
        }
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &FieldElement) -> MultiPoly {
        let f = &self.field;
        MultiPoly::from_terms(f, self.n, self.terms.iter().map(|(m, a)| (m.clone(), f.mul(a, c))))
    }

    pub fn mul_term(&self, m: &Monomial, c: &FieldElement) -> MultiPoly {
        let f = &self.field;
        MultiPoly::from_terms(f, self.n, self.terms.iter().map(|(k, a)| (k.mul(m), f.mul(a, c))))
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        let f = &self.field;
        let mut out = MultiPoly::zero(f, self.n);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), f.mul(c1, c2));
            }
        }
        out
    }

    pub fn pow(&self, mut e: u32) -> MultiPoly {
        let mut acc = MultiPoly::one(&self.field, self.n);
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

    /// Partition of the terms by total degree, with `delta` and `delta'`.
    pub fn homogeneous_parts(&self) -> Result<HomogDecomp> {
        let delta = self.degree().ok_or(Error::ZeroPolynomial)?;
        let mut parts = vec![MultiPoly::zero(&self.field, self.n); delta as usize + 1];
        for (m, c) in &self.terms {
            parts[m.degree() as usize].terms.insert(m.clone(), *c);
        }
        let delta_prime = (1..delta).rev().find(|&j| !parts[j as usize].is_zero());
        Ok(HomogDecomp { parts, delta, delta_prime })
    }

    /// Formal derivative with respect to `x_{i+1}` (0-based index).
    pub fn partial_derivative(&self, i: usize) -> MultiPoly {
        assert!(i < self.n, "variable index out of range");
        let f = &self.field;
        let mut out = MultiPoly::zero(f, self.n);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let coeff = f.scale(e as u64, c);
            if coeff.is_zero() {
                continue;
            }
            let mut exps = m.0.clone();
            exps[i] -= 1;
            out.add_term(Monomial(exps), coeff);
        }
        out
    }

    pub fn gradient(&self) -> Vec<MultiPoly> {
        (0..self.n).map(|i| self.partial_derivative(i)).collect()
    }

    /// Term-by-term evaluation at a point of the coefficient field.
    pub fn evaluate(&self, point: &[FieldElement]) -> Result<FieldElement> {
        if point.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: point.len() });
        }
        if point.iter().any(|x| !self.field.contains(x)) {
            return Err(Error::ForeignElement);
        }
        Ok(eval_naive(&self.field, self.terms.iter().map(|(m, c)| (m, *c)), point))
    }

    /// Evaluation at a point of `F_{q^i}`, with coefficients embedded.
    pub fn evaluate_in(&self, ext: &ExtensionSpec, point: &[FieldElement]) -> Result<FieldElement> {
        if point.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: point.len() });
        }
        if point.iter().any(|x| !ext.big().contains(x)) {
            return Err(Error::ForeignElement);
        }
        Ok(eval_naive(ext.big(), self.terms.iter().map(|(m, c)| (m, ext.embed(c))), point))
    }

    /// `f(g_1, ..., g_n)` for polynomials `g_i` in a common ring.
    pub fn substitute(&self, images: &[MultiPoly]) -> Result<MultiPoly> {
        if images.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: images.len() });
        }
        let target_n = images.first().map_or(0, |g| g.n);
        let f = &self.field;
        let mut out = MultiPoly::zero(f, target_n);
        let mut cache: BTreeMap<(usize, u32), MultiPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut term = MultiPoly::constant(f, target_n, *c);
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let power = cache.entry((i, e)).or_insert_with(|| images[i].pow(e));
                term = term.mul(power);
            }
            out = out.add(&term);
        }
        Ok(out)
    }

    /// Parses `text` with variables `x1..xn`, integer coefficients, `+ - * ^`
    /// and parentheses.  In extension fields `g` denotes the generator.
    pub fn parse(text: &str, n: usize, field: &FieldSpec) -> Result<MultiPoly> {
        let mut parser = Parser { src: text.as_bytes(), pos: 0, n, field };
        let poly = parser.expr()?;
        parser.skip_ws();
        if parser.pos != parser.src.len() {
            return Err(parser.error("unexpected trailing input"));
        }
        Ok(poly)
    }
}

pub(crate) fn eval_naive<'a>(
    field: &FieldSpec,
    terms: impl Iterator<Item = (&'a Monomial, FieldElement)>,
    point: &[FieldElement],
) -> FieldElement {
    let mut acc = field.zero();
    for (m, c) in terms {
        let mut t = c;
        for (x, &e) in point.iter().zip(&m.0) {
            if e > 0 {
                t = field.mul(&t, &field.pow(x, e as u128));
            }
        }
        acc = field.add(&acc, &t);
    }
    acc
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.sorted_terms().into_iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let cs = self.field.format_element(c);
            let wrapped = if cs.contains('+') { format!("({cs})") } else { cs };
            if m.is_one() {
                write!(f, "{wrapped}")?;
            } else {
                if wrapped != "1" {
                    write!(f, "{wrapped}*")?;
                }
                m.write_vars(f)?;
            }
        }
        Ok(())
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    n: usize,
    field: &'a FieldSpec,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Parse { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<MultiPoly> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly> {
        let mut acc = self.unary()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = acc.mul(&self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<MultiPoly> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<MultiPoly> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            let digits = self.digits();
            if digits.is_empty() {
                return Err(self.error("expected a non-negative integer exponent"));
            }
            let e: u32 = std::str::from_utf8(digits)
                .expect("ascii digits")
                .parse()
                .map_err(|_| Error::Parse { pos: start, msg: "exponent does not fit in 32 bits".into() })?;
            if base.terms.keys().any(|m| m.0.iter().any(|&x| (x as u64) * (e as u64) > u32::MAX as u64)) {
                return Err(Error::ExponentOverflow);
            }
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn digits(&mut self) -> &[u8] {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        &self.src[start..self.pos]
    }

    fn atom(&mut self) -> Result<MultiPoly> {
        let field = self.field;
        let n = self.n;
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let p = field.characteristic() as u64;
                let value = self.digits().iter().fold(0u64, |acc, d| (acc * 10 + (d - b'0') as u64) % p);
                Ok(MultiPoly::constant(field, n, field.from_u64(value)))
            }
            Some(b'x') => {
                let start = self.pos;
                self.pos += 1;
                let digits = self.digits();
                if digits.is_empty() {
                    return Err(Error::Parse { pos: start, msg: "expected a variable index after 'x'".into() });
                }
                let index: usize = std::str::from_utf8(digits)
                    .expect("ascii digits")
                    .parse()
                    .map_err(|_| Error::Parse { pos: start, msg: "variable index too large".into() })?;
                if index == 0 || index > n {
                    return Err(Error::VariableOutOfRange { index, n });
                }
                Ok(MultiPoly::var(field, n, index - 1))
            }
            Some(b'g') => {
                if field.degree() == 1 {
                    return Err(self.error("'g' is only defined in extension fields"));
                }
                self.pos += 1;
                Ok(MultiPoly::constant(field, n, field.generator()))
            }
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

impl std::str::FromStr for Monomial {
    type Err = Error;

    /// Parses a comma separated exponent list such as `2,0,1`.
    fn from_str(s: &str) -> Result<Self> {
        s.split(',')
            .enumerate()
            .map(|(i, t)| {
                t.trim().parse::<u32>().map_err(|_| Error::Parse { pos: i, msg: format!("bad exponent '{t}'") })
            })
            .collect::<Result<Vec<_>>>()
            .map(Monomial)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::make_field;

    fn f(p: u32) -> FieldSpec {
        make_field(p, 1, None).unwrap()
    }

    #[test]
    fn parse_examples() {
        let f3 = f(3);
        let p = MultiPoly::parse("x1^3 + x1*x2 + 1", 2, &f3).unwrap();
        assert_eq!(p.num_terms(), 3);
        assert_eq!(p.degree(), Some(3));
        assert!(MultiPoly::parse("3*x1", 1, &f3).unwrap().is_zero());
        let f5 = f(5);
        let q = MultiPoly::parse("x1^2 - x2", 2, &f5).unwrap();
        assert_eq!(q.coefficient(&Monomial::new(vec![0, 1])), f5.from_u64(4));
    }

    #[test]
    fn parse_errors_carry_positions() {
        let f3 = f(3);
        assert_eq!(
            MultiPoly::parse("x1 + x3", 2, &f3).unwrap_err(),
            Error::VariableOutOfRange { index: 3, n: 2 }
        );
        match MultiPoly::parse("x1 + * x2", 2, &f3).unwrap_err() {
            Error::Parse { pos, .. } => assert_eq!(pos, 5),
            e => panic!("unexpected {e:?}"),
        }
        assert!(matches!(MultiPoly::parse("(x1 + 1", 1, &f3), Err(Error::Parse { .. })));
        assert!(matches!(MultiPoly::parse("x1 x2", 2, &f3), Err(Error::Parse { .. })));
        assert!(matches!(MultiPoly::parse("g*x1", 1, &f3), Err(Error::Parse { .. })));
    }

    #[test]
    fn canonical_printing() {
        let f7 = f(7);
        let p = MultiPoly::parse("1 + x2 + 3*x1*x2 + x1^3 - x1", 2, &f7).unwrap();
        assert_eq!(p.to_string(), "x1^3 + 3*x1*x2 + 6*x1 + x2 + 1");
        let f9 = make_field(3, 2, None).unwrap();
        let q = MultiPoly::parse("(g + 1)*x1^2 + g", 1, &f9).unwrap();
        assert_eq!(q.to_string(), "(g + 1)*x1^2 + g");
        assert_eq!(MultiPoly::parse(&q.to_string(), 1, &f9).unwrap(), q);
    }

    #[test]
    fn homogeneous_parts_examples() {
        let f3 = f(3);
        let p = MultiPoly::parse("x1^3 + x1*x2 + 1", 2, &f3).unwrap();
        let d = p.homogeneous_parts().unwrap();
        assert_eq!((d.delta, d.delta_prime), (3, Some(2)));
        assert_eq!(d.parts[3].to_string(), "x1^3");
        assert_eq!(d.parts[2].to_string(), "x1*x2");
        assert!(d.parts[1].is_zero());
        assert_eq!(d.parts[0].to_string(), "1");

        let h = MultiPoly::parse("x1^2 + x2^2", 2, &f3).unwrap();
        let d = h.homogeneous_parts().unwrap();
        assert_eq!((d.delta, d.delta_prime), (2, None));

        let g = MultiPoly::parse("x1*x2 + x1 + x2", 2, &f3).unwrap();
        let d = g.homogeneous_parts().unwrap();
        assert_eq!((d.delta, d.delta_prime), (2, Some(1)));
        assert_eq!(d.parts[1].to_string(), "x1 + x2");

        assert_eq!(MultiPoly::zero(&f3, 2).homogeneous_parts().unwrap_err(), Error::ZeroPolynomial);
    }

    #[test]
    fn derivative_examples() {
        for p in [2u32, 3, 5, 7] {
            let fp = f(p);
            let g = MultiPoly::parse(&format!("x1^{p} - x1"), 1, &fp).unwrap();
            assert_eq!(g.partial_derivative(0), MultiPoly::constant(&fp, 1, fp.from_i64(-1)));
        }
        let f7 = f(7);
        let g = MultiPoly::parse("x1^3 + x1", 1, &f7).unwrap();
        assert_eq!(g.partial_derivative(0).to_string(), "3*x1^2 + 1");
        let h = MultiPoly::parse("x1*x2", 2, &f7).unwrap();
        assert_eq!(h.partial_derivative(0).to_string(), "x2");
    }

    #[test]
    fn evaluation_examples() {
        let f3 = f(3);
        let one = MultiPoly::one(&f3, 2);
        assert_eq!(one.evaluate(&[f3.from_u64(2), f3.zero()]).unwrap(), f3.one());
        let g = MultiPoly::parse("x1*x2 + x1 + x2", 2, &f3).unwrap();
        assert_eq!(g.evaluate(&[f3.one(), f3.one()]).unwrap(), f3.zero());
        assert_eq!(
            g.evaluate(&[f3.one()]).unwrap_err(),
            Error::DimensionMismatch { expected: 2, got: 1 }
        );
    }

    #[test]
    fn substitution_matches_evaluation() {
        let f5 = f(5);
        let g = MultiPoly::parse("x1^2*x2 + 3*x2 + 1", 2, &f5).unwrap();
        let images = [
            MultiPoly::parse("x1 + 2*x2 + 1", 2, &f5).unwrap(),
            MultiPoly::parse("3*x2", 2, &f5).unwrap(),
        ];
        let s = g.substitute(&images).unwrap();
        for x in f5.elements() {
            for y in f5.elements() {
                let pt = [x, y];
                let inner: Vec<_> = images.iter().map(|h| h.evaluate(&pt).unwrap()).collect();
                assert_eq!(s.evaluate(&pt).unwrap(), g.evaluate(&inner).unwrap());
            }
        }
    }

    #[test]
    fn monomials_of_degree() {
        let ms = Monomial::all_of_degree(3, 2);
        assert_eq!(ms.len(), 6);
        assert_eq!(ms[0].exponents(), &[2, 0, 0]);
        assert_eq!(Monomial::all_of_degree(2, 0), vec![Monomial::one(2)]);
    }
}
