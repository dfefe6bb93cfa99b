//! Dense Gaussian elimination over `F_q`.  Prime fields take a `u32` fast
//! path; extension fields go through [`FieldSpec`] arithmetic.

use crate::ff::{FieldElement, FieldSpec};

trait Ops {
    type T: Copy;
    fn is_zero(&self, x: &Self::T) -> bool;
    fn mul(&self, x: &Self::T, y: &Self::T) -> Self::T;
    fn sub(&self, x: &Self::T, y: &Self::T) -> Self::T;
    fn inv(&self, x: &Self::T) -> Self::T;
}

struct Prime(u64);

impl Ops for Prime {
    type T = u32;
    fn is_zero(&self, x: &u32) -> bool {
        *x == 0
    }
    fn mul(&self, x: &u32, y: &u32) -> u32 {
        (*x as u64 * *y as u64 % self.0) as u32
    }
    fn sub(&self, x: &u32, y: &u32) -> u32 {
        ((*x as u64 + self.0 - *y as u64) % self.0) as u32
    }
    fn inv(&self, x: &u32) -> u32 {
        let (mut b, mut e, mut acc) = (*x as u64, self.0 - 2, 1u64);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b % self.0;
            }
            b = b * b % self.0;
            e >>= 1;
        }
        acc as u32
    }
}

struct General<'a>(&'a FieldSpec);

impl Ops for General<'_> {
    type T = FieldElement;
    fn is_zero(&self, x: &FieldElement) -> bool {
        x.is_zero()
    }
    fn mul(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        self.0.mul(x, y)
    }
    fn sub(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        self.0.sub(x, y)
    }
    fn inv(&self, x: &FieldElement) -> FieldElement {
        self.0.inv(x).expect("nonzero pivot")
    }
}

/// Reduced row echelon form in place; returns pivot columns.
fn rref<O: Ops>(ops: &O, rows: &mut Vec<Vec<O::T>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(piv) = (r..rows.len()).find(|&i| !ops.is_zero(&rows[i][col])) else { continue };
        rows.swap(r, piv);
        let inv = ops.inv(&rows[r][col]);
        for x in rows[r].iter_mut() {
            *x = ops.mul(x, &inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || ops.is_zero(&row[col]) {
                continue;
            }
            let factor = row[col];
            for (x, y) in row.iter_mut().zip(&pivot_row).skip(col) {
                if !ops.is_zero(y) {
                    *x = ops.sub(x, &ops.mul(&factor, y));
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

fn nullspace_from_rref<T: Copy>(rows: &[Vec<T>], pivots: &[usize], ncols: usize, zero: T, minus_one: T) -> Vec<Vec<T>> {
    let mut is_pivot = vec![false; ncols];
    for &c in pivots {
        is_pivot[c] = true;
    }
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![zero; ncols];
        v[free] = minus_one;
        for (row, &pc) in rows.iter().zip(pivots) {
            // x_pc = -row[free] * x_free, with x_free = -1
            v[pc] = row[free];
        }
        basis.push(v);
    }
    basis
}

fn to_u32(rows: &[Vec<FieldElement>]) -> Vec<Vec<u32>> {
    rows.iter().map(|r| r.iter().map(|x| x.coeffs()[0]).collect()).collect()
}

fn from_u32(field: &FieldSpec, rows: Vec<Vec<u32>>) -> Vec<Vec<FieldElement>> {
    rows.into_iter().map(|r| r.into_iter().map(|x| field.from_u64(x as u64)).collect()).collect()
}

/// Row-reduced basis of the row space and its pivot columns.
pub fn row_reduce(field: &FieldSpec, rows: &[Vec<FieldElement>], ncols: usize) -> (Vec<Vec<FieldElement>>, Vec<usize>) {
    if field.degree() == 1 {
        let mut r = to_u32(rows);
        let piv = rref(&Prime(field.characteristic() as u64), &mut r, ncols);
        (from_u32(field, r), piv)
    } else {
        let mut r = rows.to_vec();
        let piv = rref(&General(field), &mut r, ncols);
        (r, piv)
    }
}

pub fn rank(field: &FieldSpec, rows: &[Vec<FieldElement>], ncols: usize) -> usize {
    if rows.is_empty() || ncols == 0 {
        return 0;
    }
    if field.degree() == 1 {
        let mut r = to_u32(rows);
        rref(&Prime(field.characteristic() as u64), &mut r, ncols).len()
    } else {
        let mut r = rows.to_vec();
        rref(&General(field), &mut r, ncols).len()
    }
}

/// Basis of `{x : A x = 0}` for `A` given by rows of length `ncols`.
pub fn nullspace(field: &FieldSpec, rows: &[Vec<FieldElement>], ncols: usize) -> Vec<Vec<FieldElement>> {
    if field.degree() == 1 {
        let ops = Prime(field.characteristic() as u64);
        let mut r = to_u32(rows);
        let piv = rref(&ops, &mut r, ncols);
        let minus_one = field.characteristic() - 1;
        let basis = nullspace_from_rref(&r, &piv, ncols, 0u32, minus_one);
        from_u32(field, basis)
    } else {
        let ops = General(field);
        let mut r = rows.to_vec();
        let piv = rref(&ops, &mut r, ncols);
        nullspace_from_rref(&r, &piv, ncols, field.zero(), field.neg(&field.one()))
    }
}

/// Image of column vectors: `A v` for `A` given by rows.
pub fn apply(field: &FieldSpec, rows: &[Vec<FieldElement>], v: &[FieldElement]) -> Vec<FieldElement> {
    rows.iter()
        .map(|row| {
            row.iter().zip(v).fold(field.zero(), |acc, (a, b)| {
                if a.is_zero() || b.is_zero() {
                    acc
                } else {
                    field.add(&acc, &field.mul(a, b))
                }
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::make_field;

    fn mat(f: &FieldSpec, rows: &[&[u64]]) -> Vec<Vec<FieldElement>> {
        rows.iter().map(|r| r.iter().map(|&x| f.from_u64(x)).collect()).collect()
    }

    #[test]
    fn rank_and_kernel_over_prime_field() {
        let f = make_field(5, 1, None).unwrap();
        let a = mat(&f, &[&[1, 2, 3], &[0, 1, 4], &[1, 3, 2]]);
        // row 3 = row 1 + row 2
        assert_eq!(rank(&f, &a, 3), 2);
        let ker = nullspace(&f, &a, 3);
        assert_eq!(ker.len(), 1);
        assert!(apply(&f, &a, &ker[0]).iter().all(FieldElement::is_zero));
    }

    #[test]
    fn kernel_over_extension_field() {
        let f = make_field(3, 2, None).unwrap();
        let g = f.generator();
        let a = vec![vec![f.one(), g, f.mul(&g, &g)], vec![g, f.mul(&g, &g), f.pow(&g, 3)]];
        assert_eq!(rank(&f, &a, 3), 1);
        let ker = nullspace(&f, &a, 3);
        assert_eq!(ker.len(), 2);
        for v in &ker {
            assert!(apply(&f, &a, v).iter().all(FieldElement::is_zero));
        }
    }
}
