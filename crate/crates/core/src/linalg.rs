//! Dense exact matrices and canonical subspace calculus.
//!
//! Subspaces are stored as reduced row-echelon bases with strictly
//! increasing pivot columns. That normal form is unique, so structural
//! equality of [`Subspace`] values is equality of subspaces, and fixed-point
//! loops (submodule closures) terminate detectably.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::scalar::{FieldSpec, Scalar};

/// A dense matrix acting on column vectors, row-major storage.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    field: FieldSpec,
    entries: Vec<Scalar>,
}

impl Matrix {
    pub fn zero(field: FieldSpec, rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            field,
            entries: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let mut m = Matrix::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(field: FieldSpec, cols: usize, rows: Vec<Vec<Scalar>>) -> Self {
        let nrows = rows.len();
        let mut entries = Vec::with_capacity(nrows * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged row");
            for e in &r {
                assert_eq!(e.field(), field, "entry field mismatch");
            }
            entries.extend(r);
        }
        Matrix { rows: nrows, cols, field, entries }
    }

    pub fn from_columns(field: FieldSpec, dim: usize, cols: Vec<Vec<Scalar>>) -> Self {
        let ncols = cols.len();
        let mut m = Matrix::zero(field, dim, ncols);
        for (j, c) in cols.into_iter().enumerate() {
            assert_eq!(c.len(), dim, "ragged column");
            for (i, e) in c.into_iter().enumerate() {
                assert_eq!(e.field(), field, "entry field mismatch");
                m.set(i, j, e);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> Vec<Scalar> {
        self.entries[r * self.cols..(r + 1) * self.cols].to_vec()
    }

    pub fn column(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zero(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        assert_eq!(self.field, other.field, "field mismatch in matrix product");
        let mut out = Matrix::zero(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = &*out.get(i, j) + &(a * b);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in matrix-vector product");
        let mut out = vec![self.field.zero(); self.rows];
        for (k, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for i in 0..self.rows {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                out[i] = &out[i] + &(a * x);
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for i in 0..self.rows * self.cols {
            out.entries[i] = &out.entries[i] + &other.entries[i];
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols);
        assert_eq!(self.field, other.field);
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        Matrix { rows: self.rows + other.rows, cols: self.cols, field: self.field, entries }
    }

    /// Places `other` to the right of `self`.
    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        assert_eq!(self.field, other.field);
        let mut out = Matrix::zero(self.field, self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(r, c, self.get(r, c).clone());
            }
            for c in 0..other.cols {
                out.set(r, self.cols + c, other.get(r, c).clone());
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        let mut sp = Subspace::zero(self.field, self.cols);
        for r in 0..self.rows {
            sp.insert(self.row(r));
        }
        sp.dim()
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.field, other.field);
        let mut out = Matrix::zero(self.field, self.rows + other.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(r, c, self.get(r, c).clone());
            }
        }
        for r in 0..other.rows {
            for c in 0..other.cols {
                out.set(self.rows + r, self.cols + c, other.get(r, c).clone());
            }
        }
        out
    }

    /// Returns `true` when every column has exactly one nonzero entry equal
    /// to one. Actions on free-module bases have this shape.
    pub fn is_permutation_like(&self) -> bool {
        (0..self.cols).all(|c| {
            let mut ones = 0;
            for r in 0..self.rows {
                let e = self.get(r, c);
                if e.is_one() {
                    ones += 1;
                } else if !e.is_zero() {
                    return false;
                }
            }
            ones == 1
        })
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {}", self.rows, self.cols, self.field)?;
        for r in 0..self.rows {
            write!(f, "  [")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// A linear subspace of `k^d` in canonical reduced echelon form.
#[derive(Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient_dim: usize,
    field: FieldSpec,
    rows: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(field: FieldSpec, ambient_dim: usize) -> Self {
        Subspace { ambient_dim, field, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(field: FieldSpec, ambient_dim: usize) -> Self {
        let mut s = Subspace::zero(field, ambient_dim);
        for i in 0..ambient_dim {
            let mut v = vec![field.zero(); ambient_dim];
            v[i] = field.one();
            s.insert(v);
        }
        s
    }

    pub fn span(field: FieldSpec, ambient_dim: usize, vectors: &[Vec<Scalar>]) -> Self {
        let mut s = Subspace::zero(field, ambient_dim);
        for v in vectors {
            s.insert(v.clone());
        }
        s
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Canonical basis vectors (the echelon rows).
    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.rows
    }

    /// The basis as a matrix whose columns are the basis vectors.
    pub fn basis_matrix(&self) -> Matrix {
        Matrix::from_columns(self.field, self.ambient_dim, self.rows.clone())
    }

    fn reduce(&self, v: &mut [Scalar]) {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let c = v[p].clone();
            for (x, y) in v.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x = &*x - &(&c * y);
                }
            }
        }
    }

    /// Adds a vector to the span; returns `true` if the dimension grew.
    pub fn insert(&mut self, mut v: Vec<Scalar>) -> bool {
        assert_eq!(v.len(), self.ambient_dim, "dimension mismatch");
        self.reduce(&mut v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[p].inverse().expect("nonzero entry");
        for x in v.iter_mut() {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
        // Back-eliminate the new pivot column from existing rows.
        for row in self.rows.iter_mut() {
            if row[p].is_zero() {
                continue;
            }
            let c = row[p].clone();
            for (x, y) in row.iter_mut().zip(&v) {
                if !y.is_zero() {
                    *x = &*x - &(&c * y);
                }
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(at, p);
        self.rows.insert(at, v);
        true
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        assert_eq!(v.len(), self.ambient_dim, "dimension mismatch");
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(Scalar::is_zero)
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.rows.iter().all(|r| self.contains(r))
    }

    /// Coordinates of `v` in the echelon basis, or `None` if `v` is outside.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        let coords: Vec<Scalar> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut w = v.to_vec();
        self.reduce(&mut w);
        if w.iter().all(Scalar::is_zero) {
            Some(coords)
        } else {
            None
        }
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace dim {} of k^{}", self.dim(), self.ambient_dim)
    }
}

/// Kernel `{v : m v = 0}` of a matrix.
pub fn kernel(m: &Matrix) -> Subspace {
    // Row-reduce m, then read the null space off the free columns.
    let mut row_space = Subspace::zero(m.field(), m.cols());
    for r in 0..m.rows() {
        row_space.insert(m.row(r));
    }
    let mut out = Subspace::zero(m.field(), m.cols());
    let pivot_set: Vec<usize> = row_space.pivots().to_vec();
    for free in 0..m.cols() {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut v = vec![m.field().zero(); m.cols()];
        v[free] = m.field().one();
        for (row, &p) in row_space.basis().iter().zip(&pivot_set) {
            v[p] = -&row[free];
        }
        out.insert(v);
    }
    out
}

/// Column space of a matrix.
pub fn image(m: &Matrix) -> Subspace {
    let mut out = Subspace::zero(m.field(), m.rows());
    for c in 0..m.cols() {
        out.insert(m.column(c));
    }
    out
}

pub fn sum(a: &Subspace, b: &Subspace) -> Subspace {
    assert_eq!(a.ambient_dim(), b.ambient_dim(), "dimension mismatch");
    assert_eq!(a.field(), b.field(), "field mismatch");
    let mut out = a.clone();
    for r in b.basis() {
        out.insert(r.clone());
    }
    out
}

pub fn intersect(a: &Subspace, b: &Subspace) -> Subspace {
    assert_eq!(a.ambient_dim(), b.ambient_dim(), "dimension mismatch");
    assert_eq!(a.field(), b.field(), "field mismatch");
    // x in both spans: x = A alpha = B beta. Kernel of [A | -B] yields alpha.
    let am = a.basis_matrix();
    let bm = b.basis_matrix();
    let mut neg_b = bm.clone();
    for r in 0..neg_b.rows() {
        for c in 0..neg_b.cols() {
            let v = -neg_b.get(r, c);
            neg_b.set(r, c, v);
        }
    }
    let stacked = am.hstack(&neg_b);
    let ker = kernel(&stacked);
    let mut out = Subspace::zero(a.field(), a.ambient_dim());
    for k in ker.basis() {
        let alpha = &k[..a.dim()];
        let x = am.mul_vec(alpha);
        out.insert(x);
    }
    out
}

/// Projection and section realising the quotient `k^ambient / w`.
///
/// The projection has rank `ambient - dim w` and kernel exactly `w`; the
/// section satisfies `projection * section = identity` on the quotient, and
/// its columns are standard basis vectors at the non-pivot coordinates of
/// `w` (so quotient bases are deterministic echelon-pivot complements).
pub fn quotient_basis(ambient_dim: usize, w: &Subspace) -> (Matrix, Matrix) {
    assert_eq!(w.ambient_dim(), ambient_dim, "dimension mismatch");
    let field = w.field();
    let free: Vec<usize> = (0..ambient_dim).filter(|c| !w.pivots().contains(c)).collect();
    let q = free.len();
    let mut projection = Matrix::zero(field, q, ambient_dim);
    for (j, &c) in free.iter().enumerate() {
        projection.set(j, c, field.one());
        for (row, &p) in w.basis().iter().zip(w.pivots()) {
            projection.set(j, p, -&row[c]);
        }
    }
    let mut section = Matrix::zero(field, ambient_dim, q);
    for (j, &c) in free.iter().enumerate() {
        section.set(c, j, field.one());
    }
    (projection, section)
}

/// Some `x` with `m x = b`, or `None` when `b` is outside the image.
pub fn solve(m: &Matrix, b: &[Scalar]) -> Option<Vec<Scalar>> {
    assert_eq!(m.rows(), b.len(), "dimension mismatch");
    let field = m.field();
    // Eliminate on the augmented transpose: rows are columns of m.
    let mut basis = Subspace::zero(field, m.rows());
    let mut combos: Vec<Vec<Scalar>> = Vec::new(); // combos[i]: preimage of basis row i
    let mut col_combo = vec![field.zero(); m.cols()];
    for c in 0..m.cols() {
        let mut v = m.column(c);
        let mut pre = vec![field.zero(); m.cols()];
        pre[c] = field.one();
        // Reduce v tracking the preimage combination.
        reduce_tracked(&basis, &combos, &mut v, &mut pre);
        if let Some(p) = v.iter().position(|x| !x.is_zero()) {
            let inv = v[p].inverse().unwrap();
            scale(&mut v, &inv);
            scale(&mut pre, &inv);
            back_eliminate(&mut basis, &mut combos, p, &v, &pre);
            let at = basis.pivots.partition_point(|&q| q < p);
            basis.pivots.insert(at, p);
            basis.rows.insert(at, v);
            combos.insert(at, pre);
        }
    }
    let mut target = b.to_vec();
    reduce_tracked(&basis, &combos, &mut target, &mut col_combo);
    if target.iter().all(Scalar::is_zero) {
        for x in col_combo.iter_mut() {
            *x = -&*x;
        }
        Some(col_combo)
    } else {
        None
    }
}

fn scale(v: &mut [Scalar], s: &Scalar) {
    for x in v.iter_mut() {
        if !x.is_zero() {
            *x = &*x * s;
        }
    }
}

fn reduce_tracked(
    basis: &Subspace,
    combos: &[Vec<Scalar>],
    v: &mut [Scalar],
    pre: &mut [Scalar],
) {
    for ((row, &p), combo) in basis.rows.iter().zip(&basis.pivots).zip(combos) {
        if v[p].is_zero() {
            continue;
        }
        let c = v[p].clone();
        for (x, y) in v.iter_mut().zip(row) {
            if !y.is_zero() {
                *x = &*x - &(&c * y);
            }
        }
        for (x, y) in pre.iter_mut().zip(combo) {
            if !y.is_zero() {
                *x = &*x - &(&c * y);
            }
        }
    }
}

fn back_eliminate(
    basis: &mut Subspace,
    combos: &mut [Vec<Scalar>],
    p: usize,
    v: &[Scalar],
    pre: &[Scalar],
) {
    for (row, combo) in basis.rows.iter_mut().zip(combos.iter_mut()) {
        if row[p].is_zero() {
            continue;
        }
        let c = row[p].clone();
        for (x, y) in row.iter_mut().zip(v) {
            if !y.is_zero() {
                *x = &*x - &(&c * y);
            }
        }
        for (x, y) in combo.iter_mut().zip(pre) {
            if !y.is_zero() {
                *x = &*x - &(&c * y);
            }
        }
    }
}

/// Solves `m X = B` column by column; `None` if any column is unsolvable.
pub fn solve_matrix(m: &Matrix, b: &Matrix) -> Option<Matrix> {
    assert_eq!(m.rows(), b.rows(), "dimension mismatch");
    let mut cols = Vec::with_capacity(b.cols());
    for c in 0..b.cols() {
        cols.push(solve(m, &b.column(c))?);
    }
    Some(Matrix::from_columns(m.field(), m.cols(), cols))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    fn qv(v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&x| q().from_integer(x)).collect()
    }

    fn qm(cols: usize, rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(q(), cols, rows.iter().map(|r| qv(r)).collect())
    }

    #[test]
    fn kernel_examples() {
        // [1 1] has kernel spanned by (1, -1)
        let k = kernel(&qm(2, &[&[1, 1]]));
        assert_eq!(k.dim(), 1);
        assert!(k.contains(&qv(&[1, -1])));
        // zero 2x2 has full kernel
        assert_eq!(kernel(&Matrix::zero(q(), 2, 2)).dim(), 2);
        // [1 2; 2 4] has rank 1, kernel spanned by (2, -1)
        let k = kernel(&qm(2, &[&[1, 2], &[2, 4]]));
        assert_eq!(k.dim(), 1);
        assert!(k.contains(&qv(&[2, -1])));
    }

    #[test]
    fn image_sum_intersect_examples() {
        assert_eq!(image(&Matrix::identity(q(), 3)), Subspace::full(q(), 3));
        let e1 = Subspace::span(q(), 2, &[qv(&[1, 0])]);
        let e2 = Subspace::span(q(), 2, &[qv(&[0, 1])]);
        assert_eq!(sum(&e1, &e2), Subspace::full(q(), 2));
        let diag = Subspace::span(q(), 2, &[qv(&[1, 1])]);
        assert!(intersect(&e1, &diag).is_zero());
        assert_eq!(intersect(&sum(&e1, &e2), &diag), diag);
    }

    #[test]
    fn quotient_examples() {
        // ambient 2, w = span{(1,1)}: quotient dim 1, projection kills (1,1)
        let w = Subspace::span(q(), 2, &[qv(&[1, 1])]);
        let (p, s) = quotient_basis(2, &w);
        assert_eq!(p.rows(), 1);
        assert!(p.mul_vec(&qv(&[1, 1])).iter().all(Scalar::is_zero));
        assert_eq!(p.mul(&s), Matrix::identity(q(), 1));
        // w = 0: projection is the identity
        let (p, _) = quotient_basis(2, &Subspace::zero(q(), 2));
        assert_eq!(p, Matrix::identity(q(), 2));
        // w full: 0-dim quotient
        let (p, _) = quotient_basis(2, &Subspace::full(q(), 2));
        assert_eq!(p.rows(), 0);
    }

    #[test]
    fn solve_examples() {
        // [2] x = [6] -> x = 3
        let x = solve(&qm(1, &[&[2]]), &qv(&[6])).unwrap();
        assert_eq!(x, qv(&[3]));
        // [1 0]^T x = (0,1)^T: unsolvable
        let m = qm(1, &[&[1], &[0]]);
        assert!(solve(&m, &qv(&[0, 1])).is_none());
        // identity system returns b
        let b = qv(&[4, -7, 2]);
        assert_eq!(solve(&Matrix::identity(q(), 3), &b).unwrap(), b);
    }

    #[test]
    fn subspace_equality_is_canonical() {
        let a = Subspace::span(q(), 3, &[qv(&[1, 2, 3]), qv(&[0, 1, 1])]);
        let b = Subspace::span(q(), 3, &[qv(&[2, 5, 7]), qv(&[1, 3, 4])]);
        assert_eq!(a, b);
        assert_eq!(sum(&a, &b), a);
    }

    #[test]
    fn works_over_prime_fields() {
        let f2 = FieldSpec::PrimeField(2);
        let m = Matrix::from_rows(
            f2,
            2,
            alloc::vec![
                alloc::vec![f2.one(), f2.one()],
                alloc::vec![f2.one(), f2.one()]
            ],
        );
        let k = kernel(&m);
        assert_eq!(k.dim(), 1);
        assert!(k.contains(&[f2.one(), f2.one()]));
    }

    fn arb_matrix() -> impl Strategy<Value = Matrix> {
        (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
            proptest::collection::vec(-4i64..4, r * c).prop_map(move |vals| Matrix {
                rows: r,
                cols: c,
                field: q(),
                entries: vals.into_iter().map(|x| q().from_integer(x)).collect(),
            })
        })
    }

    proptest! {
        #[test]
        fn rank_nullity(m in arb_matrix()) {
            prop_assert_eq!(m.rank() + kernel(&m).dim(), m.cols());
            prop_assert_eq!(image(&m).dim(), m.rank());
        }

        #[test]
        fn quotient_projection_section(m in arb_matrix()) {
            let w = image(&m);
            let (p, s) = quotient_basis(m.rows(), &w);
            prop_assert_eq!(p.mul(&s), Matrix::identity(q(), p.rows()));
            prop_assert_eq!(p.rows() + w.dim(), m.rows());
            prop_assert_eq!(kernel(&p), w);
        }

        #[test]
        fn sum_detects_containment(a in arb_matrix(), b in arb_matrix()) {
            prop_assume!(a.rows() == b.rows());
            let sa = image(&a);
            let sb = image(&b);
            let total = sum(&sa, &sb);
            prop_assert_eq!(total == sa, sa.contains_subspace(&sb));
        }

        #[test]
        fn solve_agrees_with_image(m in arb_matrix(), coeffs in proptest::collection::vec(-3i64..3, 1..5)) {
            prop_assume!(coeffs.len() >= m.cols());
            let x: Vec<Scalar> = coeffs[..m.cols()].iter().map(|&v| q().from_integer(v)).collect();
            let b = m.mul_vec(&x);
            let sol = solve(&m, &b).expect("b is in the image by construction");
            prop_assert_eq!(m.mul_vec(&sol), b);
        }
    }
}
