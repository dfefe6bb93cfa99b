//! Gröbner bases over `F_q` and the ideal-theoretic checks built on them:
//! quotient dimensions, Milnor numbers, support at the origin, and smooth
//! complete intersection tests for families of forms.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ff::{FieldElement, FieldSpec};
use crate::mpoly::{Monomial, MultiPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrderKind {
    Grevlex,
    Lex,
    GradedLex,
}

/// A monomial order; `perm[0]` is the most significant variable.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TermOrder {
    kind: OrderKind,
    perm: Vec<usize>,
}

impl TermOrder {
    pub fn new(kind: OrderKind, n: usize) -> Self {
        TermOrder { kind, perm: (0..n).collect() }
    }

    pub fn grevlex(n: usize) -> Self {
        Self::new(OrderKind::Grevlex, n)
    }

    pub fn lex(n: usize) -> Self {
        Self::new(OrderKind::Lex, n)
    }

    pub fn graded_lex(n: usize) -> Self {
        Self::new(OrderKind::GradedLex, n)
    }

    pub fn with_permutation(kind: OrderKind, perm: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; perm.len()];
        for &i in &perm {
            if i >= perm.len() || seen[i] {
                return Err(Error::InvalidArgument(format!("{perm:?} is not a permutation")));
            }
            seen[i] = true;
        }
        Ok(TermOrder { kind, perm })
    }

    pub fn kind(&self) -> OrderKind {
        self.kind
    }

    pub fn nvars(&self) -> usize {
        self.perm.len()
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        let (ea, eb) = (a.exponents(), b.exponents());
        let lex = || {
            for &i in &self.perm {
                if ea[i] != eb[i] {
                    return ea[i].cmp(&eb[i]);
                }
            }
            Ordering::Equal
        };
        match self.kind {
            OrderKind::Lex => lex(),
            OrderKind::GradedLex => a.degree().cmp(&b.degree()).then_with(lex),
            OrderKind::Grevlex => a.degree().cmp(&b.degree()).then_with(|| {
                for &i in self.perm.iter().rev() {
                    if ea[i] != eb[i] {
                        return eb[i].cmp(&ea[i]);
                    }
                }
                Ordering::Equal
            }),
        }
    }
}

type Term = (Monomial, FieldElement);

/// Polynomial as terms in strictly descending order.
struct Ctx<'a> {
    field: &'a FieldSpec,
    order: &'a TermOrder,
}

impl Ctx<'_> {
    fn sorted(&self, f: &MultiPoly) -> Vec<Term> {
        let mut v: Vec<Term> = f.terms().map(|(m, c)| (m.clone(), *c)).collect();
        v.sort_by(|a, b| self.order.cmp(&b.0, &a.0));
        v
    }

    /// `f - c * m * g`.
    fn sub_mul(&self, f: &[Term], c: &FieldElement, m: &Monomial, g: &[Term]) -> Vec<Term> {
        let fld = self.field;
        let mut out = Vec::with_capacity(f.len() + g.len());
        let (mut i, mut j) = (0, 0);
        while i < f.len() || j < g.len() {
            let gm = g.get(j).map(|(gm, _)| gm.mul(m));
            let ord = match (f.get(i), &gm) {
                (Some(a), Some(b)) => self.order.cmp(&a.0, b),
                (Some(_), None) => Ordering::Greater,
                (None, _) => Ordering::Less,
            };
            match ord {
                Ordering::Greater => {
                    out.push(f[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((gm.expect("term"), fld.neg(&fld.mul(c, &g[j].1))));
                    j += 1;
                }
                Ordering::Equal => {
                    let v = fld.sub(&f[i].1, &fld.mul(c, &g[j].1));
                    if !v.is_zero() {
                        out.push((f[i].0.clone(), v));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out
    }

    fn monic(&self, f: Vec<Term>) -> Vec<Term> {
        let Some((_, lc)) = f.first() else { return f };
        let inv = self.field.inv(lc).expect("nonzero");
        f.into_iter().map(|(m, c)| (m, self.field.mul(&c, &inv))).collect()
    }

    /// Full reduction by a list of monic polynomials.
    fn reduce(&self, f: Vec<Term>, basis: &[Vec<Term>]) -> Vec<Term> {
        let mut rem = Vec::new();
        let mut f = f;
        let mut i = 0;
        while i < f.len() {
            let (m, c) = f[i].clone();
            let divisor = basis.iter().find(|g| g.first().is_some_and(|(lm, _)| lm.divides(&m)));
            match divisor {
                Some(g) => {
                    let q = g[0].0.quotient_of(&m).expect("divides");
                    f = self.sub_mul(&f[i..], &c, &q, g);
                    i = 0;
                }
                None => {
                    rem.push((m, c));
                    i += 1;
                }
            }
        }
        rem
    }

    fn s_poly(&self, f: &[Term], g: &[Term]) -> Vec<Term> {
        let l = f[0].0.lcm(&g[0].0);
        let uf = f[0].0.quotient_of(&l).expect("lcm");
        let ug = g[0].0.quotient_of(&l).expect("lcm");
        let one = self.field.one();
        let zero: Vec<Term> = Vec::new();
        let a = self.sub_mul(&zero, &self.field.neg(&one), &uf, f);
        self.sub_mul(&a, &one, &ug, g)
    }

    fn to_poly(&self, n: usize, terms: &[Term]) -> MultiPoly {
        MultiPoly::from_terms(self.field, n, terms.iter().cloned())
    }
}

#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    order: TermOrder,
    field: FieldSpec,
    n: usize,
    sorted: Vec<Vec<Term>>,
    generators: Vec<MultiPoly>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum QuotientDim {
    Finite(u64),
    Infinite,
}

impl QuotientDim {
    pub fn finite(self) -> Option<u64> {
        match self {
            QuotientDim::Finite(d) => Some(d),
            QuotientDim::Infinite => None,
        }
    }
}

/// Reduced Gröbner basis of the ideal generated by `gens`.
pub fn buchberger(gens: &[MultiPoly], order: &TermOrder) -> Result<GroebnerBasis> {
    let n = order.nvars();
    let field = match gens.first() {
        Some(g) => g.field().clone(),
        None => return Err(Error::InvalidArgument("empty generator list".into())),
    };
    for g in gens {
        if g.nvars() != n {
            return Err(Error::DimensionMismatch { expected: n, got: g.nvars() });
        }
        if g.field() != &field {
            return Err(Error::ForeignElement);
        }
    }
    let ctx = Ctx { field: &field, order };
    let mut basis: Vec<Vec<Term>> = Vec::new();
    for g in gens {
        let r = ctx.reduce(ctx.sorted(g), &basis);
        if !r.is_empty() {
            basis.push(ctx.monic(r));
        }
    }
    let mut pairs: BTreeSet<(usize, usize)> = BTreeSet::new();
    for j in 0..basis.len() {
        for i in 0..j {
            pairs.insert((i, j));
        }
    }
    while !pairs.is_empty() {
        // normal strategy: smallest lcm first
        let &(i, j) = pairs
            .iter()
            .min_by(|a, b| {
                let la = basis[a.0][0].0.lcm(&basis[a.1][0].0);
                let lb = basis[b.0][0].0.lcm(&basis[b.1][0].0);
                la.degree().cmp(&lb.degree()).then_with(|| order.cmp(&la, &lb)).then_with(|| a.cmp(b))
            })
            .expect("nonempty");
        pairs.remove(&(i, j));
        let (li, lj) = (&basis[i][0].0, &basis[j][0].0);
        if li.is_coprime(lj) {
            continue;
        }
        let l = li.lcm(lj);
        let key = |a: usize, b: usize| (a.min(b), a.max(b));
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && basis[k][0].0.divides(&l)
                && !pairs.contains(&key(i, k))
                && !pairs.contains(&key(j, k))
        });
        if chain {
            continue;
        }
        let s = ctx.s_poly(&basis[i], &basis[j]);
        let r = ctx.reduce(s, &basis);
        if r.is_empty() {
            continue;
        }
        let r = ctx.monic(r);
        let new = basis.len();
        basis.push(r);
        for k in 0..new {
            pairs.insert((k, new));
        }
    }
    // minimalize and interreduce
    let lms: Vec<Monomial> = basis.iter().map(|g| g[0].0.clone()).collect();
    let keep: Vec<usize> = (0..basis.len())
        .filter(|&i| !(0..basis.len()).any(|j| j != i && lms[j].divides(&lms[i]) && (lms[j] != lms[i] || j < i)))
        .collect();
    let minimal: Vec<Vec<Term>> = keep.iter().map(|&i| basis[i].clone()).collect();
    let mut reduced: Vec<Vec<Term>> = Vec::with_capacity(minimal.len());
    for (i, g) in minimal.iter().enumerate() {
        let others: Vec<Vec<Term>> =
            minimal.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, h)| h.clone()).collect();
        let mut tail = ctx.reduce(g[1..].to_vec(), &others);
        let mut out = vec![g[0].clone()];
        out.append(&mut tail);
        reduced.push(out);
    }
    reduced.sort_by(|a, b| order.cmp(&a[0].0, &b[0].0));
    let generators = reduced.iter().map(|g| ctx.to_poly(n, g)).collect();
    Ok(GroebnerBasis { order: order.clone(), field, n, sorted: reduced, generators })
}

impl GroebnerBasis {
    pub fn order(&self) -> &TermOrder {
        &self.order
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    /// Monic generators sorted by ascending leading monomial.
    pub fn generators(&self) -> &[MultiPoly] {
        &self.generators
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.sorted.iter().map(|g| g[0].0.clone()).collect()
    }

    pub fn is_unit(&self) -> bool {
        self.sorted.iter().any(|g| g[0].0.is_one())
    }

    pub fn normal_form(&self, f: &MultiPoly) -> MultiPoly {
        let ctx = Ctx { field: &self.field, order: &self.order };
        let r = ctx.reduce(ctx.sorted(f), &self.sorted);
        ctx.to_poly(self.n, &r)
    }

    /// Exponent `a_j` of a pure power `x_j^{a_j}` among the leading
    /// monomials, per variable.
    fn pure_powers(&self) -> Vec<Option<u32>> {
        let mut out = vec![None; self.n];
        for m in self.leading_monomials() {
            let e = m.exponents();
            let support: Vec<usize> = (0..self.n).filter(|&i| e[i] > 0).collect();
            if support.len() == 1 {
                let j = support[0];
                out[j] = Some(out[j].map_or(e[j], |a: u32| a.min(e[j])));
            }
        }
        out
    }

    /// Standard monomials, when finitely many.
    pub fn standard_monomials(&self) -> Option<Vec<Monomial>> {
        if self.is_unit() {
            return Some(Vec::new());
        }
        let bounds: Vec<u32> = self.pure_powers().into_iter().collect::<Option<Vec<_>>>()?;
        let lms = self.leading_monomials();
        let mut out = Vec::new();
        let mut cur = vec![0u32; self.n];
        fn rec(i: usize, cur: &mut Vec<u32>, bounds: &[u32], lms: &[Monomial], out: &mut Vec<Monomial>) {
            if i == cur.len() {
                let m = Monomial::new(cur.clone());
                if !lms.iter().any(|l| l.divides(&m)) {
                    out.push(m);
                }
                return;
            }
            for e in 0..bounds[i] {
                cur[i] = e;
                // prune: if the prefix with zeros after is already divisible
                let probe = Monomial::new(cur.iter().enumerate().map(|(j, &x)| if j <= i { x } else { 0 }).collect());
                if lms.iter().any(|l| l.divides(&probe)) {
                    break;
                }
                rec(i + 1, cur, bounds, lms, out);
            }
            cur[i] = 0;
        }
        rec(0, &mut cur, &bounds, &lms, &mut out);
        out.sort_by(|a, b| self.order.cmp(a, b));
        Some(out)
    }

    pub fn quotient_dim(&self) -> QuotientDim {
        match self.standard_monomials() {
            Some(s) => QuotientDim::Finite(s.len() as u64),
            None => QuotientDim::Infinite,
        }
    }

    /// Whether the common zeros over the algebraic closure are at most the
    /// origin: every `x_j^D` lies in the ideal, `D` the quotient dimension.
    pub fn origin_supported(&self) -> bool {
        let d = match self.quotient_dim() {
            QuotientDim::Finite(d) => d,
            QuotientDim::Infinite => return false,
        };
        if d == 0 {
            return true;
        }
        (0..self.n).all(|j| {
            let mut e = vec![0u32; self.n];
            e[j] = d as u32;
            let xj = MultiPoly::monomial(&self.field, self.n, Monomial::new(e), self.field.one());
            self.normal_form(&xj).is_zero()
        })
    }
}

pub fn normal_form(f: &MultiPoly, gb: &GroebnerBasis) -> MultiPoly {
    gb.normal_form(f)
}

pub fn quotient_dim(gb: &GroebnerBasis) -> QuotientDim {
    gb.quotient_dim()
}

pub fn origin_supported(gb: &GroebnerBasis) -> bool {
    gb.origin_supported()
}

/// Gröbner basis (grevlex) of the Jacobian ideal.
pub fn jacobian_basis(f: &MultiPoly) -> Result<GroebnerBasis> {
    let n = f.nvars();
    if n == 0 {
        return Err(Error::InvalidArgument("no variables".into()));
    }
    buchberger(&f.gradient(), &TermOrder::grevlex(n))
}

/// `dim F_q[x]/(df/dx_1, ..., df/dx_n)`.
pub fn milnor_sum(f: &MultiPoly) -> Result<QuotientDim> {
    Ok(jacobian_basis(f)?.quotient_dim())
}

/// Numerator `N(t)` of the Hilbert series `N(t)/(1-t)^n` of `F[x]/(gens)`
/// for a monomial ideal, low to high.
pub fn hilbert_numerator(gens: &[Monomial]) -> Vec<i64> {
    let mut g = minimalize(gens);
    g.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| a.cmp(b)));
    let mut out = numerator_rec(&g);
    while out.len() > 1 && out.last() == Some(&0) {
        out.pop();
    }
    out
}

fn minimalize(gens: &[Monomial]) -> Vec<Monomial> {
    let mut out: Vec<Monomial> = Vec::new();
    for (i, m) in gens.iter().enumerate() {
        let redundant = gens
            .iter()
            .enumerate()
            .any(|(j, o)| j != i && o.divides(m) && (o != m || j < i));
        if !redundant {
            out.push(m.clone());
        }
    }
    out
}

fn poly_sub(a: &mut Vec<i64>, b: &[i64], shift: usize) {
    if a.len() < b.len() + shift {
        a.resize(b.len() + shift, 0);
    }
    for (i, x) in b.iter().enumerate() {
        a[i + shift] -= x;
    }
}

fn numerator_rec(gens: &[Monomial]) -> Vec<i64> {
    if gens.is_empty() {
        return vec![1];
    }
    let pairwise_coprime = gens.iter().enumerate().all(|(i, a)| gens[i + 1..].iter().all(|b| a.is_coprime(b)));
    if pairwise_coprime {
        let mut acc = vec![1i64];
        for m in gens {
            let d = m.degree() as usize;
            let mut next = acc.clone();
            poly_sub(&mut next, &acc, d);
            acc = next;
        }
        return acc;
    }
    let (last, rest) = gens.split_last().expect("nonempty");
    let mut base = numerator_rec(rest);
    let colon: Vec<Monomial> =
        rest.iter().map(|m| last.gcd(m).quotient_of(m).expect("gcd divides")).collect();
    let colon = minimalize(&colon);
    let tail = numerator_rec(&colon);
    poly_sub(&mut base, &tail, last.degree() as usize);
    base
}

fn prod_one_minus(degrees: &[u64]) -> Vec<i64> {
    let mut acc = vec![1i64];
    for &d in degrees {
        let mut next = acc.clone();
        poly_sub(&mut next, &acc, d as usize);
        acc = next;
    }
    while acc.len() > 1 && acc.last() == Some(&0) {
        acc.pop();
    }
    acc
}

fn determinant(m: &[Vec<MultiPoly>], field: &FieldSpec, n: usize) -> MultiPoly {
    let k = m.len();
    if k == 1 {
        return m[0][0].clone();
    }
    let mut acc = MultiPoly::zero(field, n);
    for c in 0..k {
        if m[0][c].is_zero() {
            continue;
        }
        let minor: Vec<Vec<MultiPoly>> =
            m[1..].iter().map(|row| row.iter().enumerate().filter(|&(j, _)| j != c).map(|(_, x)| x.clone()).collect()).collect();
        let term = m[0][c].mul(&determinant(&minor, field, n));
        acc = if c % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
    }
    acc
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
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

/// All nonzero `k x k` minors of the Jacobian matrix of `forms`.
pub fn jacobian_minors(forms: &[MultiPoly]) -> Vec<MultiPoly> {
    let Some(first) = forms.first() else { return Vec::new() };
    let n = first.nvars();
    let field = first.field().clone();
    let k = forms.len();
    if k > n {
        return Vec::new();
    }
    let jac: Vec<Vec<MultiPoly>> = forms.iter().map(MultiPoly::gradient).collect();
    combinations(n, k)
        .into_iter()
        .map(|cols| {
            let sub: Vec<Vec<MultiPoly>> = jac.iter().map(|row| cols.iter().map(|&c| row[c].clone()).collect()).collect();
            determinant(&sub, &field, n)
        })
        .filter(|d| !d.is_zero())
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct CiCheck {
    pub forms: Vec<String>,
    pub codim: usize,
    /// Hilbert-series test; absent when `codim >= n`.
    pub complete_intersection: Option<bool>,
    pub singular_locus_empty: bool,
    pub smooth: bool,
    /// Generators of the ideal on which the criterion failed.
    pub witness: Option<Vec<String>>,
}

/// Whether the forms cut out a smooth complete intersection of codimension
/// `forms.len()` in projective space (the empty scheme counts when
/// `forms.len() >= n`).
pub fn smooth_ci_check(forms: &[MultiPoly]) -> Result<CiCheck> {
    let first = forms.first().ok_or(Error::InvalidArgument("no forms".into()))?;
    let n = first.nvars();
    for f in forms {
        if !f.is_homogeneous() || f.is_zero() {
            return Err(Error::NotHomogeneous);
        }
    }
    let k = forms.len();
    let order = TermOrder::grevlex(n);
    let names = |v: &[MultiPoly]| v.iter().map(|f| f.to_string()).collect::<Vec<_>>();
    let gb = buchberger(forms, &order)?;
    if k >= n {
        let ok = gb.origin_supported();
        return Ok(CiCheck {
            forms: names(forms),
            codim: k,
            complete_intersection: None,
            singular_locus_empty: ok,
            smooth: ok,
            witness: (!ok).then(|| names(forms)),
        });
    }
    let degrees: Vec<u64> = forms.iter().map(|f| f.degree().expect("nonzero")).collect();
    let ci = hilbert_numerator(&gb.leading_monomials()) == prod_one_minus(&degrees);
    let mut augmented = forms.to_vec();
    augmented.extend(jacobian_minors(forms));
    let sing_empty = buchberger(&augmented, &order)?.origin_supported();
    let smooth = ci && sing_empty;
    let witness = if !ci {
        Some(names(forms))
    } else if !sing_empty {
        Some(names(&augmented))
    } else {
        None
    };
    Ok(CiCheck {
        forms: names(forms),
        codim: k,
        complete_intersection: Some(ci),
        singular_locus_empty: sing_empty,
        smooth,
        witness,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SubsetResult {
    /// 1-based factor indices.
    pub subset: Vec<usize>,
    pub factors: CiCheck,
    /// The same family with `f^(delta')` adjoined, when required.
    pub with_second_part: Option<CiCheck>,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CIReport {
    pub p: u32,
    pub delta: u64,
    pub delta_prime: u64,
    pub multiplicities: Vec<u32>,
    /// `delta * delta' * a_1 * ... * a_r`.
    pub coprimality_product: String,
    pub coprime: bool,
    pub subsets: Vec<SubsetResult>,
    pub pass: bool,
    /// `delta - delta' + 1` on overall pass.
    pub predicted_e: Option<u64>,
}

/// Hypothesis check for a leading form factored as `prod f_i^{a_i}`: every
/// subfamily (and, where required, the subfamily with `f^(delta')` adjoined)
/// must cut out a smooth complete intersection, and `p` must not divide
/// `delta delta' a_1 ... a_r`.
pub fn theorem_1_18_check(
    factors: &[(MultiPoly, u32)],
    fdelta_prime: Option<&MultiPoly>,
    f: &MultiPoly,
) -> Result<CIReport> {
    let decomp = f.homogeneous_parts()?;
    let field = f.field();
    if factors.is_empty() {
        return Err(Error::FactorizationMismatch("no factors given".into()));
    }
    let mut product = MultiPoly::one(field, f.nvars());
    for (g, a) in factors {
        if g.nvars() != f.nvars() {
            return Err(Error::DimensionMismatch { expected: f.nvars(), got: g.nvars() });
        }
        if g.field() != field {
            return Err(Error::ForeignElement);
        }
        if !g.is_homogeneous() || g.is_zero() {
            return Err(Error::NotHomogeneous);
        }
        product = product.mul(&g.pow(*a));
    }
    if !equal_up_to_scalar(&product, decomp.top()) {
        return Err(Error::FactorizationMismatch(format!(
            "product of factors is {product}, leading form is {}",
            decomp.top()
        )));
    }
    let delta_prime = decomp.delta_prime.ok_or(Error::MissingDeltaPrime)?;
    let second = decomp.second().expect("delta' present").clone();
    if let Some(given) = fdelta_prime {
        if given != &second {
            return Err(Error::FactorizationMismatch(format!(
                "given f^(delta') = {given}, decomposition gives {second}"
            )));
        }
    }
    let p = field.characteristic();
    let mut product_int = num_bigint::BigInt::from(decomp.delta) * delta_prime;
    for (_, a) in factors {
        product_int *= *a;
    }
    let coprime = decomp.delta % p as u64 != 0
        && delta_prime % p as u64 != 0
        && factors.iter().all(|(_, a)| a % p != 0);

    let r = factors.len();
    let masks: Vec<u32> = (1..(1u32 << r)).collect();
    let subsets: Vec<SubsetResult> = masks
        .par_iter()
        .map(|&mask| -> Result<SubsetResult> {
            let idx: Vec<usize> = (0..r).filter(|i| mask & (1 << i) != 0).collect();
            let forms: Vec<MultiPoly> = idx.iter().map(|&i| factors[i].0.clone()).collect();
            let base = smooth_ci_check(&forms)?;
            let needs_second = idx.len() >= 2 || factors[idx[0]].1 > 1;
            let with_second = if needs_second {
                let mut fam = vec![second.clone()];
                fam.extend(forms);
                Some(smooth_ci_check(&fam)?)
            } else {
                None
            };
            let pass = base.smooth && with_second.as_ref().is_none_or(|c| c.smooth);
            Ok(SubsetResult {
                subset: idx.iter().map(|i| i + 1).collect(),
                factors: base,
                with_second_part: with_second,
                pass,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let pass = coprime && subsets.iter().all(|s| s.pass);
    Ok(CIReport {
        p,
        delta: decomp.delta,
        delta_prime,
        multiplicities: factors.iter().map(|(_, a)| *a).collect(),
        coprimality_product: product_int.to_string(),
        coprime,
        subsets,
        pass,
        predicted_e: pass.then(|| decomp.delta - delta_prime + 1),
    })
}

fn equal_up_to_scalar(a: &MultiPoly, b: &MultiPoly) -> bool {
    let (Some((ma, ca)), Some((_, _))) = (a.terms().next(), b.terms().next()) else {
        return a.is_zero() && b.is_zero();
    };
    let cb = b.coefficient(ma);
    if cb.is_zero() {
        return false;
    }
    let field = a.field();
    let s = field.mul(&cb, &field.inv(ca).expect("nonzero"));
    &a.scale(&s) == b
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::make_field;

    fn polys(src: &[&str], n: usize, f: &FieldSpec) -> Vec<MultiPoly> {
        src.iter().map(|s| MultiPoly::parse(s, n, f).unwrap()).collect()
    }

    #[test]
    fn orders_are_distinct() {
        let a = Monomial::new(vec![1, 0, 2]);
        let b = Monomial::new(vec![0, 2, 1]);
        assert_eq!(TermOrder::lex(3).cmp(&a, &b), Ordering::Greater);
        assert_eq!(TermOrder::graded_lex(3).cmp(&a, &b), Ordering::Greater);
        // grevlex: last variable exponent 2 > 1, so a < b
        assert_eq!(TermOrder::grevlex(3).cmp(&a, &b), Ordering::Less);
        let rev = TermOrder::with_permutation(OrderKind::Lex, vec![2, 1, 0]).unwrap();
        assert_eq!(rev.cmp(&a, &b), Ordering::Greater);
        assert!(TermOrder::with_permutation(OrderKind::Lex, vec![0, 0, 1]).is_err());
    }

    #[test]
    fn reduced_bases_of_simple_ideals() {
        let f3 = make_field(3, 1, None).unwrap();
        let gens = polys(&["x1", "x2"], 2, &f3);
        let gb = buchberger(&gens, &TermOrder::grevlex(2)).unwrap();
        assert_eq!(gb.generators().len(), 2);
        assert_eq!(gb.quotient_dim(), QuotientDim::Finite(1));
        let lin = polys(&["x2 + 1", "x1 + 1"], 2, &f3);
        for ord in [TermOrder::grevlex(2), TermOrder::lex(2)] {
            let gb = buchberger(&lin, &ord).unwrap();
            let mut got: Vec<String> = gb.generators().iter().map(|g| g.to_string()).collect();
            got.sort();
            assert_eq!(got, vec!["x1 + 1", "x2 + 1"]);
            let x1sq = MultiPoly::parse("x1^2", 2, &f3).unwrap();
            assert_eq!(gb.normal_form(&x1sq), MultiPoly::one(&f3, 2));
            assert!(!gb.origin_supported());
        }
    }

    #[test]
    fn two_quadrics_over_f7() {
        let f7 = make_field(7, 1, None).unwrap();
        let gens = polys(&["x1^2 - x2", "x2^2 - x1"], 2, &f7);
        let gb = buchberger(&gens, &TermOrder::grevlex(2)).unwrap();
        assert_eq!(gb.quotient_dim(), QuotientDim::Finite(4));
        let lex = buchberger(&gens, &TermOrder::lex(2)).unwrap();
        assert_eq!(lex.quotient_dim(), QuotientDim::Finite(4));
        for g in &gens {
            assert!(gb.normal_form(g).is_zero());
        }
    }

    #[test]
    fn quotient_dims() {
        let f7 = make_field(7, 1, None).unwrap();
        let unit = buchberger(&polys(&["x1 + 1", "x1"], 1, &f7), &TermOrder::grevlex(1)).unwrap();
        assert!(unit.is_unit());
        assert_eq!(unit.quotient_dim(), QuotientDim::Finite(0));
        let sq = buchberger(&polys(&["x1^2", "x2^2"], 2, &f7), &TermOrder::grevlex(2)).unwrap();
        assert_eq!(sq.quotient_dim(), QuotientDim::Finite(4));
        assert!(sq.origin_supported());
        let one_var = buchberger(&polys(&["3*x1^2 + 1"], 1, &f7), &TermOrder::grevlex(1)).unwrap();
        assert_eq!(one_var.quotient_dim(), QuotientDim::Finite(2));
        let line = buchberger(&polys(&["x1"], 2, &f7), &TermOrder::grevlex(2)).unwrap();
        assert_eq!(line.quotient_dim(), QuotientDim::Infinite);
    }

    #[test]
    fn milnor_numbers() {
        let f3 = make_field(3, 1, None).unwrap();
        assert_eq!(milnor_sum(&MultiPoly::parse("x1", 1, &f3).unwrap()).unwrap(), QuotientDim::Finite(0));
        let art = MultiPoly::parse("x1^3 - x1", 1, &f3).unwrap();
        assert_eq!(milnor_sum(&art).unwrap(), QuotientDim::Finite(0));
        let g = MultiPoly::parse("x1*x2 + x1 + x2", 2, &f3).unwrap();
        assert_eq!(milnor_sum(&g).unwrap(), QuotientDim::Finite(1));
    }

    #[test]
    fn hilbert_numerators() {
        let m = |e: &[u32]| Monomial::new(e.to_vec());
        assert_eq!(hilbert_numerator(&[]), vec![1]);
        assert_eq!(hilbert_numerator(&[m(&[2, 0]), m(&[0, 2])]), vec![1, 0, -2, 0, 1]);
        // (x^2, xy): 1 - 2t^2 + t^3
        assert_eq!(hilbert_numerator(&[m(&[2, 0]), m(&[1, 1])]), vec![1, 0, -2, 1]);
        assert_eq!(hilbert_numerator(&[m(&[0, 0])]), vec![0]);
    }

    #[test]
    fn smooth_complete_intersections() {
        let f3 = make_field(3, 1, None).unwrap();
        assert!(smooth_ci_check(&polys(&["x1", "x2"], 2, &f3)).unwrap().smooth);
        let node = smooth_ci_check(&polys(&["x1*x2"], 2, &f3)).unwrap();
        assert!(node.smooth);
        let double = smooth_ci_check(&polys(&["x1^2"], 2, &f3)).unwrap();
        assert!(!double.smooth);
        assert_eq!(double.complete_intersection, Some(true));
        assert!(double.witness.is_some());
        assert_eq!(
            smooth_ci_check(&polys(&["x1 + x2^2"], 2, &f3)).unwrap_err(),
            Error::NotHomogeneous
        );
    }

    #[test]
    fn factored_leading_form() {
        let f3 = make_field(3, 1, None).unwrap();
        let f = MultiPoly::parse("x1*x2 + x1 + x2", 2, &f3).unwrap();
        let factors: Vec<(MultiPoly, u32)> = polys(&["x1", "x2"], 2, &f3).into_iter().map(|g| (g, 1)).collect();
        let r = theorem_1_18_check(&factors, None, &f).unwrap();
        assert!(r.pass);
        assert_eq!(r.predicted_e, Some(2));
        assert_eq!(r.subsets.len(), 3);
        assert!(r.subsets[2].with_second_part.is_some());

        let f2 = make_field(2, 1, None).unwrap();
        let f = MultiPoly::parse("x1*x2 + x1 + x2", 2, &f2).unwrap();
        let factors: Vec<(MultiPoly, u32)> = polys(&["x1", "x2"], 2, &f2).into_iter().map(|g| (g, 1)).collect();
        let r = theorem_1_18_check(&factors, None, &f).unwrap();
        assert!(!r.coprime);
        assert!(!r.pass);
        assert_eq!(r.predicted_e, None);
    }

    #[test]
    fn repeated_factor_sharing_a_zero() {
        let f5 = make_field(5, 1, None).unwrap();
        let f = MultiPoly::parse("x1^2*x2 + x1*x2", 2, &f5).unwrap();
        let factors = vec![
            (MultiPoly::parse("x1", 2, &f5).unwrap(), 2),
            (MultiPoly::parse("x2", 2, &f5).unwrap(), 1),
        ];
        let r = theorem_1_18_check(&factors, None, &f).unwrap();
        assert!(!r.pass);
        let failing = r.subsets.iter().find(|s| s.subset == vec![1]).unwrap();
        assert!(!failing.pass);
        assert!(failing.with_second_part.as_ref().unwrap().witness.is_some());
    }

    #[test]
    fn factorization_errors() {
        let f3 = make_field(3, 1, None).unwrap();
        let f = MultiPoly::parse("x1*x2 + x1", 2, &f3).unwrap();
        let wrong = vec![(MultiPoly::parse("x1", 2, &f3).unwrap(), 2)];
        assert!(matches!(theorem_1_18_check(&wrong, None, &f), Err(Error::FactorizationMismatch(_))));
        let homog = MultiPoly::parse("x1*x2", 2, &f3).unwrap();
        let factors = vec![
            (MultiPoly::parse("x1", 2, &f3).unwrap(), 1),
            (MultiPoly::parse("2*x2", 2, &f3).unwrap(), 1),
        ];
        assert_eq!(theorem_1_18_check(&factors, None, &homog).unwrap_err(), Error::MissingDeltaPrime);
    }
}
