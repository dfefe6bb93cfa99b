//! Dense univariate polynomials over `Q(zeta_p)`, coefficients low to high.

use super::cyclotomic::CycRational;

pub type CycPoly = Vec<CycRational>;

pub fn trim(a: &mut CycPoly) {
    while a.len() > 1 && a.last().is_some_and(CycRational::is_zero) {
        a.pop();
    }
}

pub fn is_zero(a: &[CycRational]) -> bool {
    a.iter().all(CycRational::is_zero)
}

/// Degree, with `None` for the zero polynomial.
pub fn degree(a: &[CycRational]) -> Option<usize> {
    a.iter().rposition(|c| !c.is_zero())
}

pub fn derivative(a: &[CycRational], p: u32) -> CycPoly {
    if a.len() <= 1 {
        return vec![CycRational::zero(p)];
    }
    a.iter()
        .enumerate()
        .skip(1)
        .map(|(j, c)| c.mul(&super::CycInt::from_int(p, j as u64).to_rational()))
        .collect()
}

pub fn sub(a: &[CycRational], b: &[CycRational], p: u32) -> CycPoly {
    let len = a.len().max(b.len());
    let zero = CycRational::zero(p);
    let mut out: CycPoly =
        (0..len).map(|j| a.get(j).unwrap_or(&zero).sub(b.get(j).unwrap_or(&zero))).collect();
    trim(&mut out);
    out
}

pub fn mul(a: &[CycRational], b: &[CycRational], p: u32) -> CycPoly {
    let mut out = vec![CycRational::zero(p); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(&x.mul(y));
        }
    }
    trim(&mut out);
    out
}

pub fn monic(a: &[CycRational]) -> CycPoly {
    let d = degree(a).expect("monic of the zero polynomial");
    let inv = a[d].inv().expect("nonzero leading coefficient");
    a[..=d].iter().map(|c| c.mul(&inv)).collect()
}

/// Euclidean division; `b` must be nonzero.
pub fn divrem(a: &[CycRational], b: &[CycRational], p: u32) -> (CycPoly, CycPoly) {
    let db = degree(b).expect("division by the zero polynomial");
    let lead_inv = b[db].inv().expect("nonzero leading coefficient");
    let mut r: CycPoly = a.to_vec();
    trim(&mut r);
    let da = match degree(&r) {
        Some(d) if d >= db => d,
        _ => return (vec![CycRational::zero(p)], r),
    };
    let mut q = vec![CycRational::zero(p); da - db + 1];
    for k in (db..=da).rev() {
        if r[k].is_zero() {
            continue;
        }
        let c = r[k].mul(&lead_inv);
        for (j, bj) in b[..=db].iter().enumerate() {
            let idx = k - db + j;
            r[idx] = r[idx].sub(&c.mul(bj));
        }
        q[k - db] = c;
    }
    r.truncate(db.max(1));
    trim(&mut r);
    trim(&mut q);
    (q, r)
}

/// Monic gcd.
pub fn gcd(a: &[CycRational], b: &[CycRational], p: u32) -> CycPoly {
    let mut x: CycPoly = a.to_vec();
    let mut y: CycPoly = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !is_zero(&y) {
        let (_, r) = divrem(&x, &y, p);
        x = monic(&y);
        y = r;
    }
    if is_zero(&x) {
        return x;
    }
    monic(&x)
}

/// Yun's square-free decomposition of a monic polynomial of positive
/// degree: pairs `(g_i, i)` with `a = prod g_i^i` and each `g_i` square-free
/// and monic.  Trivial factors are omitted.
pub fn squarefree(a: &[CycRational], p: u32) -> Vec<(CycPoly, usize)> {
    let a = monic(a);
    let da = derivative(&a, p);
    let g = gcd(&a, &da, p);
    let mut b = divrem(&a, &g, p).0;
    let mut c = divrem(&da, &g, p).0;
    let mut d = sub(&c, &derivative(&b, p), p);
    let mut out = Vec::new();
    let mut i = 1;
    while degree(&b).unwrap_or(0) > 0 {
        let gi = gcd(&b, &d, p);
        b = divrem(&b, &gi, p).0;
        c = divrem(&d, &gi, p).0;
        d = sub(&c, &derivative(&b, p), p);
        if degree(&gi).unwrap_or(0) > 0 {
            out.push((gi, i));
        }
        i += 1;
    }
    out
}
