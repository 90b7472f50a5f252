//! Exact dense linear algebra: matrices, reduced row-echelon form and
//! canonical subspace bases.
//!
//! Operators act on row vectors from the right: the image of `v` under `M`
//! is `v·M`, and row `j` of `M` holds the image of the `j`-th basis vector.

use std::fmt;

use thiserror::Error;

use crate::field::{FieldError, FieldSpec, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is singular")]
    Singular,
    #[error(transparent)]
    Field(#[from] FieldError),
}

pub type LinalgResult<T> = Result<T, LinalgError>;

fn expect_len(expected: usize, found: usize) -> LinalgResult<()> {
    if expected == found {
        Ok(())
    } else {
        Err(LinalgError::DimensionMismatch { expected, found })
    }
}

/// Dense matrix over an exact field, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn new(field: &FieldSpec, rows: usize, cols: usize, data: Vec<Scalar>) -> LinalgResult<Self> {
        expect_len(rows * cols, data.len())?;
        for s in &data {
            field.check(s)?;
        }
        Ok(Matrix {
            field: field.clone(),
            rows,
            cols,
            data,
        })
    }

    pub fn zeros(field: &FieldSpec, rows: usize, cols: usize) -> Self {
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: &FieldSpec, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = field.one();
        }
        m
    }

    /// Matrix unit `e_ij` (0-based indices).
    pub fn unit(field: &FieldSpec, n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        m.data[i * n + j] = field.one();
        m
    }

    pub fn from_rows(field: &FieldSpec, rows: &[Vec<Scalar>]) -> LinalgResult<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            expect_len(cols, r.len())?;
            data.extend(r.iter().cloned());
        }
        Self::new(field, rows.len(), cols, data)
    }

    /// Build from small integers; convenient for tests and fixed tables.
    pub fn from_i64(field: &FieldSpec, rows: &[&[i64]]) -> LinalgResult<Self> {
        let rows: Vec<Vec<Scalar>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| field.from_i64(x)).collect())
            .collect();
        Self::from_rows(field, &rows)
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Scalar) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vectors(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// Row-major entries; the coordinate convention for operator spaces.
    pub fn flatten(&self) -> Vec<Scalar> {
        self.data.clone()
    }

    pub fn from_flat(field: &FieldSpec, n: usize, flat: &[Scalar]) -> LinalgResult<Self> {
        Self::new(field, n, n, flat.to_vec())
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> LinalgResult<Matrix> {
        expect_len(self.cols, other.rows)?;
        let mut out = Matrix::zeros(&self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j].add_mul_assign(a, b);
                    }
                }
            }
        }
        Ok(out)
    }

    fn zip_with(&self, other: &Matrix, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> LinalgResult<Matrix> {
        expect_len(self.rows, other.rows)?;
        expect_len(self.cols, other.cols)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect();
        Ok(Matrix { data, ..self.clone() })
    }

    pub fn add(&self, other: &Matrix) -> LinalgResult<Matrix> {
        self.zip_with(other, Scalar::add)
    }

    pub fn sub(&self, other: &Matrix) -> LinalgResult<Matrix> {
        self.zip_with(other, Scalar::sub)
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        Matrix {
            data: self.data.iter().map(|x| x.mul(c)).collect(),
            ..self.clone()
        }
    }

    pub fn neg(&self) -> Matrix {
        Matrix {
            data: self.data.iter().map(Scalar::neg).collect(),
            ..self.clone()
        }
    }

    /// `self·other − other·self`.
    pub fn commutator(&self, other: &Matrix) -> LinalgResult<Matrix> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    /// Row vector times matrix.
    pub fn apply_row(&self, v: &[Scalar]) -> LinalgResult<Vec<Scalar>> {
        expect_len(self.rows, v.len())?;
        let mut out = vec![self.field.zero(); self.cols];
        for (i, a) in v.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                o.add_mul_assign(a, self.get(i, j));
            }
        }
        Ok(out)
    }

    /// Matrix times column vector.
    pub fn apply_col(&self, v: &[Scalar]) -> LinalgResult<Vec<Scalar>> {
        expect_len(self.cols, v.len())?;
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = self.field.zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    acc.add_mul_assign(a, b);
                }
                acc
            })
            .collect())
    }

    /// Reduced row-echelon form, rank and pivot columns. Pivots are chosen
    /// as the first nonzero entry in column order.
    pub fn rref(&self) -> (Matrix, usize, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m.get(r, c).inv().expect("pivot is nonzero");
            for j in c..m.cols {
                let v = m.get(r, j).mul(&inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let factor = m.get(i, c).neg();
                for j in c..m.cols {
                    if m.get(r, j).is_zero() {
                        continue;
                    }
                    let mut v = m.get(i, j).clone();
                    v.add_mul_assign(&factor, m.get(r, j));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, r, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1
    }

    /// Canonical basis of `{v : self·v = 0}` (column vectors).
    pub fn nullspace(&self) -> SubspaceBasis {
        let (r, rank, pivots) = self.rref();
        let mut vectors = Vec::with_capacity(self.cols - rank);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        for &f in &free {
            let mut v = vec![self.field.zero(); self.cols];
            v[f] = self.field.one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = r.get(i, f).neg();
            }
            vectors.push(v);
        }
        SubspaceBasis::span(&self.field, self.cols, &vectors).expect("lengths agree")
    }

    /// Canonical basis of `{v : v·self = 0}` (row vectors).
    pub fn left_nullspace(&self) -> SubspaceBasis {
        self.transpose().nullspace()
    }

    pub fn determinant(&self) -> LinalgResult<Scalar> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let mut m = self.clone();
        let n = m.rows;
        let mut det = self.field.one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return Ok(self.field.zero());
            };
            if p != c {
                m.swap_rows(p, c);
                det = det.neg();
            }
            let pivot = m.get(c, c).clone();
            det = det.mul(&pivot);
            let inv = pivot.inv()?;
            for i in c + 1..n {
                if m.get(i, c).is_zero() {
                    continue;
                }
                let factor = m.get(i, c).mul(&inv).neg();
                for j in c..n {
                    let mut v = m.get(i, j).clone();
                    v.add_mul_assign(&factor, m.get(c, j));
                    m.set(i, j, v);
                }
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> LinalgResult<Matrix> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(&self.field, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, self.field.one());
        }
        let (r, rank, pivots) = aug.rref();
        if rank < n || pivots[n - 1] >= n {
            return Err(LinalgError::Singular);
        }
        let mut inv = Matrix::zeros(&self.field, n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j).clone());
            }
        }
        Ok(inv)
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Incrementally maintained reduced row-echelon basis.
///
/// Rows stay fully reduced after every insertion, so the basis is canonical
/// at all times and the coefficient of a stored row in a reduction is just
/// the entry of the candidate vector at that row's pivot.
#[derive(Debug, Clone)]
pub struct EchelonBuilder {
    field: FieldSpec,
    cols: usize,
    rows: Vec<EchelonRow>,
}

#[derive(Debug, Clone)]
struct EchelonRow {
    pivot: usize,
    dense: Vec<Scalar>,
    support: Vec<usize>,
}

impl EchelonRow {
    fn new(pivot: usize, dense: Vec<Scalar>) -> Self {
        let support = support_of(&dense);
        EchelonRow { pivot, dense, support }
    }
}

fn support_of(v: &[Scalar]) -> Vec<usize> {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, _)| i)
        .collect()
}

impl EchelonBuilder {
    pub fn new(field: &FieldSpec, cols: usize) -> Self {
        EchelonBuilder {
            field: field.clone(),
            cols,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.cols
    }

    /// Residue of `v` after subtracting its projection onto the current span.
    pub fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        let mut out = v.to_vec();
        for row in &self.rows {
            let coef = out[row.pivot].clone();
            if coef.is_zero() {
                continue;
            }
            let neg = coef.neg();
            for &j in &row.support {
                out[j].add_mul_assign(&neg, &row.dense[j]);
            }
        }
        out
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.reduce(v).iter().all(Scalar::is_zero)
    }

    /// Insert `v`; returns whether the span grew.
    pub fn insert(&mut self, v: &[Scalar]) -> LinalgResult<bool> {
        expect_len(self.cols, v.len())?;
        let mut r = self.reduce(v);
        let Some(pivot) = r.iter().position(|x| !x.is_zero()) else {
            return Ok(false);
        };
        let inv = r[pivot].inv()?;
        for x in r.iter_mut().skip(pivot) {
            if !x.is_zero() {
                *x = x.mul(&inv);
            }
        }
        let new_row = EchelonRow::new(pivot, r);
        for row in &mut self.rows {
            let coef = row.dense[pivot].clone();
            if coef.is_zero() {
                continue;
            }
            let neg = coef.neg();
            for &j in &new_row.support {
                row.dense[j].add_mul_assign(&neg, &new_row.dense[j]);
            }
            row.support = support_of(&row.dense);
        }
        let at = self.rows.partition_point(|row| row.pivot < pivot);
        self.rows.insert(at, new_row);
        Ok(true)
    }

    pub fn into_subspace(self) -> SubspaceBasis {
        SubspaceBasis {
            field: self.field,
            ambient_dim: self.cols,
            pivots: self.rows.iter().map(|r| r.pivot).collect(),
            vectors: self.rows.into_iter().map(|r| r.dense).collect(),
        }
    }

    pub fn to_subspace(&self) -> SubspaceBasis {
        self.clone().into_subspace()
    }
}

impl SubspaceBasis {
    /// Span of the vectors produced by `rows_of` over all `items`. Chunks of
    /// items are reduced in parallel and the partial bases merged, so the
    /// full list of vectors is never materialized.
    pub fn span_parallel<T: Sync>(
        field: &FieldSpec,
        ambient_dim: usize,
        items: &[T],
        rows_of: impl Fn(&T) -> Vec<Vec<Scalar>> + Sync,
    ) -> LinalgResult<Self> {
        use rayon::prelude::*;
        const CHUNK: usize = 16;
        let merged = items
            .par_chunks(CHUNK)
            .map(|chunk| {
                let mut b = EchelonBuilder::new(field, ambient_dim);
                for v in chunk.iter().flat_map(&rows_of) {
                    if b.is_full() {
                        break;
                    }
                    b.insert(&v)?;
                }
                Ok::<_, LinalgError>(b)
            })
            .try_reduce(
                || EchelonBuilder::new(field, ambient_dim),
                |a, b| {
                    let (mut big, small) = if a.rank() >= b.rank() { (a, b) } else { (b, a) };
                    for row in small.rows {
                        if big.is_full() {
                            break;
                        }
                        big.insert(&row.dense)?;
                    }
                    Ok(big)
                },
            )?;
        Ok(merged.into_subspace())
    }
}

/// Canonical (reduced row-echelon) basis of a subspace of `F^n`.
///
/// Two equal subspaces always have identical representations, so derived
/// `PartialEq` is subspace equality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubspaceBasis {
    field: FieldSpec,
    ambient_dim: usize,
    vectors: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl SubspaceBasis {
    pub fn span(field: &FieldSpec, ambient_dim: usize, vectors: &[Vec<Scalar>]) -> LinalgResult<Self> {
        let mut b = EchelonBuilder::new(field, ambient_dim);
        for v in vectors {
            b.insert(v)?;
        }
        Ok(b.into_subspace())
    }

    pub fn zero(field: &FieldSpec, ambient_dim: usize) -> Self {
        SubspaceBasis {
            field: field.clone(),
            ambient_dim,
            vectors: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(field: &FieldSpec, ambient_dim: usize) -> Self {
        Matrix::identity(field, ambient_dim).row_space()
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_zero(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.vectors.len() == self.ambient_dim
    }

    pub fn vectors(&self) -> &[Vec<Scalar>] {
        &self.vectors
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    fn builder(&self) -> EchelonBuilder {
        EchelonBuilder {
            field: self.field.clone(),
            cols: self.ambient_dim,
            rows: self
                .vectors
                .iter()
                .zip(&self.pivots)
                .map(|(v, &p)| EchelonRow::new(p, v.clone()))
                .collect(),
        }
    }

    fn same_ambient(&self, other: &SubspaceBasis) -> LinalgResult<()> {
        expect_len(self.ambient_dim, other.ambient_dim)
    }

    /// Coordinates of `v` with respect to the canonical basis, if `v` lies in the span.
    pub fn coordinates(&self, v: &[Scalar]) -> LinalgResult<Option<Vec<Scalar>>> {
        expect_len(self.ambient_dim, v.len())?;
        let coords: Vec<Scalar> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut rebuilt = vec![self.field.zero(); self.ambient_dim];
        for (c, b) in coords.iter().zip(&self.vectors) {
            for (r, x) in rebuilt.iter_mut().zip(b) {
                r.add_mul_assign(c, x);
            }
        }
        Ok((rebuilt == v).then_some(coords))
    }

    pub fn member(&self, v: &[Scalar]) -> LinalgResult<bool> {
        expect_len(self.ambient_dim, v.len())?;
        Ok(self.builder().contains(v))
    }

    pub fn contains(&self, other: &SubspaceBasis) -> LinalgResult<bool> {
        self.same_ambient(other)?;
        let b = self.builder();
        Ok(other.vectors.iter().all(|v| b.contains(v)))
    }

    pub fn equals(&self, other: &SubspaceBasis) -> LinalgResult<bool> {
        self.same_ambient(other)?;
        Ok(self == other)
    }

    pub fn sum(&self, other: &SubspaceBasis) -> LinalgResult<SubspaceBasis> {
        self.same_ambient(other)?;
        let mut b = self.builder();
        for v in &other.vectors {
            b.insert(v)?;
        }
        Ok(b.into_subspace())
    }

    /// Vectors orthogonal to the subspace under the standard dot product.
    pub fn annihilator(&self) -> SubspaceBasis {
        if self.vectors.is_empty() {
            return SubspaceBasis::full(&self.field, self.ambient_dim);
        }
        Matrix::from_rows(&self.field, &self.vectors)
            .expect("rows share a length")
            .nullspace()
    }

    pub fn intersect(&self, other: &SubspaceBasis) -> LinalgResult<SubspaceBasis> {
        self.same_ambient(other)?;
        Ok(self.annihilator().sum(&other.annihilator())?.annihilator())
    }

    /// Apply a linear map given by a function on vectors and return the span of the images.
    pub fn image(&self, f: impl Fn(&[Scalar]) -> Vec<Scalar>, target_dim: usize) -> LinalgResult<SubspaceBasis> {
        let images: Vec<Vec<Scalar>> = self.vectors.iter().map(|v| f(v)).collect();
        SubspaceBasis::span(&self.field, target_dim, &images)
    }
}

impl Matrix {
    pub fn row_space(&self) -> SubspaceBasis {
        SubspaceBasis::span(&self.field, self.cols, &self.row_vectors()).expect("rows share a length")
    }
}

/// Smallest product-closed subspace of `d×d` matrices containing the
/// generators, as a subspace of the flattened (row-major) operator space.
///
/// The algebra generated by a set `G` is spanned by nonempty words in `G`,
/// so it is enough to close the span under left multiplication by the
/// generators.
pub fn matrix_algebra_closure(field: &FieldSpec, d: usize, generators: &[Matrix]) -> LinalgResult<SubspaceBasis> {
    for g in generators {
        expect_len(d, g.rows())?;
        expect_len(d, g.cols())?;
    }
    let mut span = EchelonBuilder::new(field, d * d);
    let mut gens = Vec::new();
    for g in generators {
        if span.insert(&g.flatten())? {
            gens.push(g.clone());
        }
    }
    let mut queue = gens.clone();
    let mut next = 0;
    while next < queue.len() && !span.is_full() {
        let x = queue[next].clone();
        next += 1;
        for g in &gens {
            let p = g.mul(&x)?;
            if span.insert(&p.flatten())? {
                queue.push(p);
            }
        }
    }
    Ok(span.into_subspace())
}
