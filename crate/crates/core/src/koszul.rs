//! The complex `(Omega^., phi_f)` with `phi_f(w) = df ^ w`, filtered by the
//! weight `deg w = l + (n-k)(delta-1)` of a `k`-form with coefficients of
//! degree `l`, and the pages of its spectral sequence over `F_q`.
//!
//! Writing `f = sum_j f^(delta-j)`, the piece `df^(delta-j) ^ .` lowers
//! weight by exactly `j`, so `phi_f` preserves the increasing filtration
//! `F_r = {weight <= r}` and acts on the associated graded as the Koszul
//! differential of `f^(delta)`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rayon::prelude::*;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::ff::{FieldElement, FieldSpec};
use crate::ideals::{jacobian_basis, QuotientDim};
use crate::linalg;
use crate::mpoly::{Monomial, MultiPoly};

/// The basis element `mono * dx_{i_1} ^ ... ^ dx_{i_k}` (0-based indices).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FormBasisIndex {
    pub subset: Vec<usize>,
    pub mono: Monomial,
}

impl FormBasisIndex {
    pub fn k(&self) -> usize {
        self.subset.len()
    }
}

impl fmt::Display for FormBasisIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, &e) in self.mono.exponents().iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(format!("x{}", i + 1)),
                _ => parts.push(format!("x{}^{}", i + 1, e)),
            }
        }
        let coeff = if parts.is_empty() { "1".to_string() } else { parts.join("*") };
        if self.subset.is_empty() {
            write!(f, "{coeff}")
        } else {
            let dx: Vec<String> = self.subset.iter().map(|i| format!("dx{}", i + 1)).collect();
            write!(f, "{coeff} {}", dx.join("^"))
        }
    }
}

impl Serialize for FormBasisIndex {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GradedDegree {
    pub coeff_deg: u64,
    pub form_deg: usize,
    pub weight: i64,
}

impl GradedDegree {
    pub fn new(n: usize, delta: u64, coeff_deg: u64, form_deg: usize) -> Self {
        let weight = coeff_deg as i64 + (n - form_deg) as i64 * (delta as i64 - 1);
        GradedDegree { coeff_deg, form_deg, weight }
    }
}

/// A `k`-form as a sparse combination of basis elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KForm {
    pub n: usize,
    pub k: usize,
    pub terms: BTreeMap<FormBasisIndex, FieldElement>,
}

impl KForm {
    pub fn zero(n: usize, k: usize) -> Self {
        KForm { n, k, terms: BTreeMap::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, field: &FieldSpec, idx: FormBasisIndex, c: FieldElement) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(idx).or_insert_with(|| field.zero());
        *e = field.add(e, &c);
        if e.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }
}

/// `(-1)^{#{s in S : s < i}}` and `S + {i}`, or `None` if `i` is in `S`.
fn wedge_index(i: usize, subset: &[usize]) -> Option<(bool, Vec<usize>)> {
    if subset.contains(&i) {
        return None;
    }
    let below = subset.iter().filter(|&&s| s < i).count();
    let mut out = subset.to_vec();
    out.insert(below, i);
    Some((below % 2 == 1, out))
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
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

/// `df ^ omega` for an arbitrary polynomial `f`.
pub fn phi_f(f: &MultiPoly, omega: &KForm) -> KForm {
    let field = f.field();
    let grad = f.gradient();
    let mut out = KForm::zero(omega.n, omega.k + 1);
    for (idx, c) in &omega.terms {
        for (i, g) in grad.iter().enumerate() {
            let Some((negate, subset)) = wedge_index(i, &idx.subset) else { continue };
            for (m, a) in g.terms() {
                let mut v = field.mul(a, c);
                if negate {
                    v = field.neg(&v);
                }
                out.add_term(field, FormBasisIndex { subset: subset.clone(), mono: m.mul(&idx.mono) }, v);
            }
        }
    }
    out
}

/// A finite list of basis forms over a set of weights, with an index.
struct Space {
    elems: Vec<FormBasisIndex>,
    weights: Vec<i64>,
    index: HashMap<FormBasisIndex, usize>,
}

impl Space {
    fn dim(&self) -> usize {
        self.elems.len()
    }
}

/// The filtered complex attached to `f`.
#[derive(Clone, Debug)]
pub struct FilteredComplex {
    f: MultiPoly,
    n: usize,
    delta: u64,
    grad: Vec<MultiPoly>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectralCell {
    pub r: i64,
    pub s: i64,
    pub dim: usize,
    /// Weight-`r` parts of cycles spanning a complement of the boundaries.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<Vec<(FormBasisIndex, String)>>>,
}

impl FilteredComplex {
    pub fn new(f: &MultiPoly) -> Result<Self> {
        let delta = f.degree().ok_or(Error::ZeroPolynomial)?;
        if delta == 0 {
            return Err(Error::InvalidArgument("f must have positive degree".into()));
        }
        Ok(FilteredComplex { f: f.clone(), n: f.nvars(), delta, grad: f.gradient() })
    }

    pub fn delta(&self) -> u64 {
        self.delta
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> &FieldSpec {
        self.f.field()
    }

    fn shift(&self, k: usize) -> i64 {
        (self.n - k) as i64 * (self.delta as i64 - 1)
    }

    pub fn weight_of(&self, idx: &FormBasisIndex) -> i64 {
        GradedDegree::new(self.n, self.delta, idx.mono.degree(), idx.k()).weight
    }

    /// Basis of the `k`-forms of weight exactly `w`.
    pub fn basis(&self, k: usize, w: i64) -> Vec<FormBasisIndex> {
        if k > self.n {
            return Vec::new();
        }
        let l = w - self.shift(k);
        if l < 0 {
            return Vec::new();
        }
        let monos = Monomial::all_of_degree(self.n, l as u32);
        let mut out = Vec::new();
        for s in subsets(self.n, k) {
            for m in &monos {
                out.push(FormBasisIndex { subset: s.clone(), mono: m.clone() });
            }
        }
        out
    }

    fn space(&self, k: usize, lo: i64, hi: i64) -> Space {
        let mut elems = Vec::new();
        let mut weights = Vec::new();
        for w in lo.max(0)..=hi {
            for b in self.basis(k, w) {
                elems.push(b);
                weights.push(w);
            }
        }
        let index = elems.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        Space { elems, weights, index }
    }

    /// Matrix (rows = target coordinates) of `phi_f` from `src` to `dst`,
    /// dropping image components outside `dst`.  With `top_only`, only
    /// `df^(delta)` is used.
    fn matrix(&self, src: &Space, dst: &Space, top_only: bool) -> Vec<Vec<FieldElement>> {
        let field = self.field();
        let mut rows = vec![vec![field.zero(); src.dim()]; dst.dim()];
        for (col, idx) in src.elems.iter().enumerate() {
            for (i, g) in self.grad.iter().enumerate() {
                let Some((negate, subset)) = wedge_index(i, &idx.subset) else { continue };
                for (m, a) in g.terms() {
                    if top_only && m.degree() + 1 != self.delta {
                        continue;
                    }
                    let key = FormBasisIndex { subset: subset.clone(), mono: m.mul(&idx.mono) };
                    if let Some(&row) = dst.index.get(&key) {
                        let v = if negate { field.neg(a) } else { *a };
                        rows[row][col] = field.add(&rows[row][col], &v);
                    }
                }
            }
        }
        rows
    }

    pub fn phi(&self, omega: &KForm) -> KForm {
        phi_f(&self.f, omega)
    }

    /// `dim E_t^{r,s}` (with a spanning witness on request).
    pub fn page_cell(&self, t: usize, r: i64, s: i64, want_witness: bool) -> SpectralCell {
        assert!(t >= 1, "pages start at 1");
        let field = self.field();
        let k = r + s;
        let empty = SpectralCell { r, s, dim: 0, witness: want_witness.then(Vec::new) };
        if k < 0 || k > self.n as i64 || r < 0 {
            return empty;
        }
        let k = k as usize;
        let t = t as i64;
        // cycles: weight window [r-t+1, r] of Omega^k, condition on the same
        // window of Omega^{k+1}
        let src = self.space(k, r - t + 1, r);
        let top_cols: Vec<usize> = (0..src.dim()).filter(|&c| src.weights[c] == r).collect();
        if top_cols.is_empty() {
            return empty;
        }
        let cycles: Vec<Vec<FieldElement>> = if k == self.n {
            (0..src.dim())
                .map(|c| (0..src.dim()).map(|j| if j == c { field.one() } else { field.zero() }).collect())
                .collect()
        } else {
            let dst = self.space(k + 1, r - t + 1, r);
            let m = self.matrix(&src, &dst, false);
            linalg::nullspace(field, &m, src.dim())
        };
        let z_top: Vec<Vec<FieldElement>> =
            cycles.iter().map(|v| top_cols.iter().map(|&c| v[c]).collect()).collect();
        // boundaries: phi of the (k-1)-forms in weights [r, r+t-1] whose
        // image vanishes in weights [r+1, r+t-1], projected to weight r
        let b_top: Vec<Vec<FieldElement>> = if k == 0 {
            Vec::new()
        } else {
            let pre = self.space(k - 1, r, r + t - 1);
            let gens: Vec<Vec<FieldElement>> = if t == 1 {
                (0..pre.dim())
                    .map(|c| (0..pre.dim()).map(|j| if j == c { field.one() } else { field.zero() }).collect())
                    .collect()
            } else {
                let upper = self.space(k, r + 1, r + t - 1);
                let m = self.matrix(&pre, &upper, false);
                linalg::nullspace(field, &m, pre.dim())
            };
            let at_r = self.space(k, r, r);
            let m = self.matrix(&pre, &at_r, false);
            gens.iter().map(|v| linalg::apply(field, &m, v)).collect()
        };
        // the boundary projection is expressed in the `at_r` basis, which
        // coincides with the ordering of `top_cols` in `src`
        let ncols = top_cols.len();
        let z_rank = linalg::rank(field, &z_top, ncols);
        let b_rank = linalg::rank(field, &b_top, ncols);
        let dim = z_rank - b_rank;
        let witness = want_witness.then(|| {
            let (mut basis, _) = linalg::row_reduce(field, &b_top, ncols);
            let mut rank = basis.len();
            let mut out = Vec::new();
            for v in &z_top {
                if out.len() == dim {
                    break;
                }
                let mut trial = basis.clone();
                trial.push(v.clone());
                let new_rank = linalg::rank(field, &trial, ncols);
                if new_rank > rank {
                    rank = new_rank;
                    basis = trial;
                    let terms = v
                        .iter()
                        .enumerate()
                        .filter(|(_, c)| !c.is_zero())
                        .map(|(j, c)| (src.elems[top_cols[j]].clone(), field.format_element(c)))
                        .collect();
                    out.push(terms);
                }
            }
            out
        });
        SpectralCell { r, s, dim, witness }
    }

    /// All cells `0 <= r <= r_max`, `0 <= r + s <= n` of page `t`.
    pub fn page(&self, t: usize, r_max: i64) -> PageTable {
        let cells: Vec<(i64, i64)> =
            (0..=r_max).flat_map(|r| (0..=self.n as i64).map(move |k| (r, k - r))).collect();
        let dims: Vec<SpectralCell> = cells.par_iter().map(|&(r, s)| self.page_cell(t, r, s, false)).collect();
        PageTable { t, n: self.n, delta: self.delta, r_max, cells: dims.into_iter().map(|c| ((c.r, c.s), c.dim)).collect() }
    }
}

/// `dim E_t^{r,s}` for the filtered complex of `f`.
pub fn spectral_page(f: &MultiPoly, t: usize, r: i64, s: i64) -> Result<usize> {
    Ok(FilteredComplex::new(f)?.page_cell(t, r, s, false).dim)
}

/// `dim E_1^{r,s}` computed directly as Koszul homology of `df^(delta)` on
/// the weight-`r` slice.
pub fn graded_piece_dims(fdelta: &MultiPoly, r: i64, s: i64) -> Result<usize> {
    if !fdelta.is_homogeneous() {
        return Err(Error::NotHomogeneous);
    }
    let cx = FilteredComplex::new(fdelta)?;
    let n = cx.n as i64;
    let k = r + s;
    if k < 0 || k > n || r < 0 {
        return Ok(0);
    }
    let field = cx.field();
    let slice = |k: i64| if (0..=n).contains(&k) { Some(cx.space(k as usize, r, r)) } else { None };
    let here = slice(k).expect("k in range");
    if here.dim() == 0 {
        return Ok(0);
    }
    let kernel = match slice(k + 1) {
        Some(next) if next.dim() > 0 => here.dim() - linalg::rank(field, &cx.matrix(&here, &next, true), here.dim()),
        _ => here.dim(),
    };
    let image = match slice(k - 1) {
        Some(prev) if prev.dim() > 0 => linalg::rank(field, &cx.matrix(&prev, &here, true), prev.dim()),
        _ => 0,
    };
    Ok(kernel - image)
}

/// Page dimensions keyed by `(r, s)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PageTable {
    pub t: usize,
    pub n: usize,
    pub delta: u64,
    pub r_max: i64,
    pub cells: BTreeMap<(i64, i64), usize>,
}

impl PageTable {
    pub fn get(&self, r: i64, s: i64) -> usize {
        self.cells.get(&(r, s)).copied().unwrap_or(0)
    }

    /// `sum_r dim E^{r, m - r}` over the computed range.
    pub fn total(&self, m: i64) -> usize {
        self.cells.iter().filter(|((r, s), _)| r + s == m).map(|(_, d)| d).sum()
    }
}

impl Serialize for PageTable {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        struct Cells<'a>(&'a BTreeMap<(i64, i64), usize>);
        impl Serialize for Cells<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut m = s.serialize_map(Some(self.0.len()))?;
                for ((r, t), d) in self.0 {
                    m.serialize_entry(&format!("{r},{t}"), d)?;
                }
                m.end()
            }
        }
        let mut m = s.serialize_map(Some(5))?;
        m.serialize_entry("t", &self.t)?;
        m.serialize_entry("n", &self.n)?;
        m.serialize_entry("delta", &self.delta)?;
        m.serialize_entry("r_max", &self.r_max)?;
        m.serialize_entry("cells", &Cells(&self.cells))?;
        m.end()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "mode", content = "m")]
pub enum VanishingMode {
    Single(usize),
    AllExceptTop,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "kebab-case", tag = "verdict")]
pub enum Vanishing {
    /// Every scanned cell vanished.  Not a proof beyond `r_bound`.
    VerifiedToBound { page: usize, r_bound: i64, cells_checked: usize },
    Counterexample { page: usize, cell: SpectralCell },
}

impl Vanishing {
    pub fn verified(&self) -> bool {
        matches!(self, Vanishing::VerifiedToBound { .. })
    }
}

pub fn default_r_bound(n: usize, delta: u64) -> i64 {
    (n as i64 + 1) * (delta as i64 - 1)
}

/// Scans `E_e^{r,s}` with `r <= r_bound` and `r + s` as selected by `mode`.
pub fn check_vanishing(f: &MultiPoly, e: usize, mode: VanishingMode, r_bound: Option<i64>) -> Result<Vanishing> {
    let cx = FilteredComplex::new(f)?;
    let n = cx.n;
    let r_bound = r_bound.unwrap_or_else(|| default_r_bound(n, cx.delta));
    let degrees: Vec<usize> = match mode {
        VanishingMode::Single(m) => vec![m],
        VanishingMode::AllExceptTop => (0..n).collect(),
    };
    let cells: Vec<(i64, i64)> = (0..=r_bound)
        .flat_map(|r| degrees.iter().map(move |&m| (r, m as i64 - r)))
        .collect();
    let dims: Vec<usize> = cells.par_iter().map(|&(r, s)| cx.page_cell(e, r, s, false).dim).collect();
    match cells.iter().zip(&dims).find(|(_, &d)| d > 0) {
        Some((&(r, s), _)) => Ok(Vanishing::Counterexample { page: e, cell: cx.page_cell(e, r, s, true) }),
        None => Ok(Vanishing::VerifiedToBound { page: e, r_bound, cells_checked: cells.len() }),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RegularSequence {
    pub regular: bool,
    pub quotient_dim: QuotientDim,
    /// `(delta - 1)^n`.
    pub expected: u64,
}

/// Whether the partials of the form `fdelta` are a regular sequence, via
/// `dim F_q[x]/(partials) = (delta-1)^n`.
pub fn regular_sequence_check(fdelta: &MultiPoly) -> Result<RegularSequence> {
    if !fdelta.is_homogeneous() {
        return Err(Error::NotHomogeneous);
    }
    let delta = fdelta.degree().ok_or(Error::ZeroPolynomial)?;
    if delta == 0 {
        return Err(Error::InvalidArgument("form of degree 0".into()));
    }
    let quotient_dim = jacobian_basis(fdelta)?.quotient_dim();
    let expected = (delta - 1).pow(fdelta.nvars() as u32);
    Ok(RegularSequence { regular: quotient_dim == QuotientDim::Finite(expected), quotient_dim, expected })
}

/// `dim H^n = M_f`, when the critical locus is isolated.
pub fn h_top_dimension(f: &MultiPoly) -> Result<u64> {
    jacobian_basis(f)?.quotient_dim().finite().ok_or(Error::NonIsolated)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::make_field;

    fn poly(s: &str, n: usize, p: u32) -> MultiPoly {
        MultiPoly::parse(s, n, &make_field(p, 1, None).unwrap()).unwrap()
    }

    #[test]
    fn phi_of_one_and_top_form() {
        let f = poly("x1*x2", 2, 5);
        let field = f.field().clone();
        let mut one = KForm::zero(2, 0);
        one.add_term(&field, FormBasisIndex { subset: vec![], mono: Monomial::one(2) }, field.one());
        let d = phi_f(&f, &one);
        let want: BTreeMap<FormBasisIndex, FieldElement> = [
            (FormBasisIndex { subset: vec![0], mono: Monomial::var(2, 1) }, field.one()),
            (FormBasisIndex { subset: vec![1], mono: Monomial::var(2, 0) }, field.one()),
        ]
        .into_iter()
        .collect();
        assert_eq!(d.terms, want);
        assert!(phi_f(&f, &d).is_zero());
        let mut top = KForm::zero(2, 2);
        top.add_term(&field, FormBasisIndex { subset: vec![0, 1], mono: Monomial::one(2) }, field.one());
        assert!(phi_f(&f, &top).is_zero());
    }

    #[test]
    fn koszul_counts() {
        let f = poly("x1^2 + x2^2", 2, 3);
        let total: usize = (0..=4).map(|r| graded_piece_dims(&f, r, 2 - r).unwrap()).sum();
        assert_eq!(total, 1);
        let g = poly("x1^2", 2, 3);
        let off: usize = (0..=4).map(|r| graded_piece_dims(&g, r, 1 - r).unwrap()).sum();
        assert!(off > 0);
        let h = poly("x1*x2", 2, 3);
        for r in 0..=4 {
            for k in [0i64, 1] {
                assert_eq!(graded_piece_dims(&h, r, k - r).unwrap(), 0);
            }
        }
    }

    #[test]
    fn first_page_agrees_with_koszul_homology() {
        let f = poly("x1^3 + 2*x1*x2^2 + x2 + x1^2 + 1", 2, 5);
        let top = f.homogeneous_parts().unwrap().top().clone();
        let cx = FilteredComplex::new(&f).unwrap();
        for r in 0..=7 {
            for k in 0..=2i64 {
                assert_eq!(cx.page_cell(1, r, k - r, false).dim, graded_piece_dims(&top, r, k - r).unwrap(), "r={r} k={k}");
            }
        }
    }

    #[test]
    fn second_page_of_the_hyperbola() {
        let f = poly("x1*x2 + x1 + x2", 2, 3);
        let v = check_vanishing(&f, 2, VanishingMode::AllExceptTop, None).unwrap();
        assert!(v.verified());
        let page = FilteredComplex::new(&f).unwrap().page(2, 3);
        assert_eq!(page.total(2), 1);
    }

    #[test]
    fn artin_schreier_counterexample() {
        let f = poly("x1^3 - x1", 1, 3);
        match check_vanishing(&f, 1, VanishingMode::AllExceptTop, None).unwrap() {
            Vanishing::Counterexample { cell, .. } => {
                assert_eq!((cell.r, cell.s), (2, -2));
                assert_eq!(cell.witness.unwrap().len(), cell.dim);
            }
            v => panic!("expected a counterexample, got {v:?}"),
        }
    }

    #[test]
    fn regular_sequences() {
        let r = regular_sequence_check(&poly("x1^2 + x2^2", 2, 3)).unwrap();
        assert!(r.regular);
        assert_eq!(r.quotient_dim, QuotientDim::Finite(1));
        assert!(!regular_sequence_check(&poly("x1^2", 2, 3)).unwrap().regular);
        let c = regular_sequence_check(&poly("x1^3 + x2^3", 2, 7)).unwrap();
        assert_eq!(c.quotient_dim, QuotientDim::Finite(4));
    }

    #[test]
    fn top_cohomology_dimensions() {
        assert_eq!(h_top_dimension(&poly("x1*x2 + x1 + x2", 2, 3)).unwrap(), 1);
        assert_eq!(h_top_dimension(&poly("x1", 1, 3)).unwrap(), 0);
        assert_eq!(h_top_dimension(&poly("x1^3 + x1", 1, 7)).unwrap(), 2);
        assert_eq!(h_top_dimension(&poly("x1^2", 2, 7)).unwrap_err(), Error::NonIsolated);
    }

    #[test]
    fn page_table_json_keys() {
        let f = poly("x1*x2", 2, 3);
        let page = FilteredComplex::new(&f).unwrap().page(1, 2);
        let json = serde_json::to_value(&page).unwrap();
        assert_eq!(json["cells"]["0,2"], 1);
        assert_eq!(json["cells"]["1,1"], 0);
    }
}
