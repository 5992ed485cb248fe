//! Dense exact linear algebra over a [`Field`].
//!
//! Vectors are plain `Vec<Scalar>`; matrices are row-major. Elimination is
//! Gauss–Jordan with the first nonzero entry as pivot, so bases come out the
//! same on every run.

use thiserror::Error;

use crate::field::{Field, Scalar};

pub type Vector = Vec<Scalar>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("subspace is not contained in the ambient span")]
    InconsistentSubspace,
    #[error("dimension mismatch: {0}")]
    Shape(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat {
    pub field: Field,
    pub rows: usize,
    pub cols: usize,
    data: Vec<Scalar>,
}

impl Mat {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Self {
        Mat { field: field.clone(), rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: &Field, n: usize) -> Self {
        let mut m = Mat::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_cols(field: &Field, rows: usize, cols: &[Vector]) -> Self {
        let mut m = Mat::zeros(field, rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows, "column {j} has wrong length");
            for (i, v) in c.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn from_rows(field: &Field, cols: usize, rows: &[Vector]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "row has wrong length");
            data.extend(r.iter().cloned());
        }
        Mat { field: field.clone(), rows: rows.len(), cols, data }
    }

    pub fn from_i64(field: &Field, rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows: Vec<Vector> = rows.iter().map(|r| r.iter().map(|&v| field.from_i64(v)).collect()).collect();
        Mat::from_rows(field, cols, &rows)
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn col(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row(&self, i: usize) -> Vector {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn columns(&self) -> Vec<Vector> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| self.field.is_zero(v))
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let f = &self.field;
        let mut out = Mat::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if f.is_zero(b) {
                        continue;
                    }
                    let cur = f.add(out.get(i, j), &f.mul(a, b));
                    out.set(i, j, cur);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vector {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        let f = &self.field;
        (0..self.rows)
            .map(|i| {
                let mut acc = f.zero();
                for (j, x) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !f.is_zero(a) && !f.is_zero(x) {
                        acc = f.add(&acc, &f.mul(a, x));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| self.field.add(a, b)).collect();
        Mat { field: self.field.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| self.field.sub(a, b)).collect();
        Mat { field: self.field.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: &Scalar) -> Mat {
        let data = self.data.iter().map(|a| self.field.mul(a, c)).collect();
        Mat { field: self.field.clone(), rows: self.rows, cols: self.cols, data }
    }

    /// Stack `self` on top of `other`.
    pub fn vstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Mat { field: self.field.clone(), rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place(self.cols);
        (m, pivots)
    }

    /// Row-reduce in place, choosing pivots only among the first `limit`
    /// columns. Returns the pivot columns.
    fn rref_in_place(&mut self, limit: usize) -> Vec<usize> {
        let f = self.field.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..limit {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !f.is_zero(self.get(i, c))) else {
                continue;
            };
            if p != r {
                for j in 0..self.cols {
                    self.data.swap(p * self.cols + j, r * self.cols + j);
                }
            }
            let inv = f.inv(self.get(r, c)).expect("pivot is nonzero");
            for j in c..self.cols {
                let v = f.mul(self.get(r, j), &inv);
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let factor = self.get(i, c).clone();
                if f.is_zero(&factor) {
                    continue;
                }
                for j in c..self.cols {
                    let rv = self.get(r, j);
                    if f.is_zero(rv) {
                        continue;
                    }
                    let v = f.sub(self.get(i, j), &f.mul(&factor, rv));
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the null space, returned as a matrix whose columns span it.
    pub fn kernel_basis(&self) -> Mat {
        Mat::from_cols(&self.field, self.cols, &self.kernel_vectors())
    }

    pub fn kernel_vectors(&self) -> Vec<Vector> {
        let f = &self.field;
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut out = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![f.zero(); self.cols];
            v[free] = f.one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = f.neg(r.get(row, free));
            }
            out.push(v);
        }
        out
    }

    /// A basis of the column space, taken from the original columns.
    pub fn image_vectors(&self) -> Vec<Vector> {
        let (_, pivots) = self.rref();
        pivots.iter().map(|&j| self.col(j)).collect()
    }

    /// Some `x` with `self * x = b`, or `None` if the system is inconsistent.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vector> {
        Solver::new(self).solve(b)
    }
}

/// Precomputed elimination for repeated solves against one matrix.
#[derive(Clone, Debug)]
pub struct Solver {
    field: Field,
    transform: Mat,
    pivots: Vec<usize>,
    cols: usize,
}

impl Solver {
    pub fn new(m: &Mat) -> Self {
        let f = &m.field;
        // [M | I] reduced on the M block gives T with T M = rref(M).
        let mut aug = Mat::zeros(f, m.rows, m.cols + m.rows);
        for i in 0..m.rows {
            for j in 0..m.cols {
                aug.set(i, j, m.get(i, j).clone());
            }
            aug.set(i, m.cols + i, f.one());
        }
        let pivots = aug.rref_in_place(m.cols);
        let mut transform = Mat::zeros(f, m.rows, m.rows);
        for i in 0..m.rows {
            for j in 0..m.rows {
                transform.set(i, j, aug.get(i, m.cols + j).clone());
            }
        }
        Solver { field: f.clone(), transform, pivots, cols: m.cols }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn solve(&self, b: &[Scalar]) -> Option<Vector> {
        let w = self.transform.mul_vec(b);
        if w[self.pivots.len()..].iter().any(|c| !self.field.is_zero(c)) {
            return None;
        }
        let mut x = vec![self.field.zero(); self.cols];
        for (k, &p) in self.pivots.iter().enumerate() {
            x[p] = w[k].clone();
        }
        Some(x)
    }

    pub fn contains(&self, b: &[Scalar]) -> bool {
        let w = self.transform.mul_vec(b);
        w[self.pivots.len()..].iter().all(|c| self.field.is_zero(c))
    }
}

pub fn rank_of(field: &Field, dim: usize, vectors: &[Vector]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    Mat::from_cols(field, dim, vectors).rank()
}

/// Whether `v` lies in the span of `vectors`.
pub fn in_span(field: &Field, dim: usize, vectors: &[Vector], v: &[Scalar]) -> bool {
    if vectors.is_empty() {
        return v.iter().all(|c| field.is_zero(c));
    }
    Mat::from_cols(field, dim, vectors).solve(v).is_some()
}

/// Linearly independent subset spanning the same space (first-come order).
pub fn independent_subset(field: &Field, dim: usize, vectors: &[Vector]) -> Vec<Vector> {
    if vectors.is_empty() {
        return Vec::new();
    }
    Mat::from_cols(field, dim, vectors).image_vectors()
}

/// Whether two families span the same subspace.
pub fn same_span(field: &Field, dim: usize, a: &[Vector], b: &[Vector]) -> bool {
    let ra = rank_of(field, dim, a);
    let rb = rank_of(field, dim, b);
    let mut both = a.to_vec();
    both.extend(b.iter().cloned());
    ra == rb && rank_of(field, dim, &both) == ra
}

/// Intersection of two column spans, as a basis.
pub fn intersect(field: &Field, dim: usize, a: &[Vector], b: &[Vector]) -> Vec<Vector> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    // Solve sum x_i a_i - sum y_j b_j = 0 and read off sum x_i a_i.
    let mut cols = a.to_vec();
    cols.extend(b.iter().map(|v| v.iter().map(|c| field.neg(c)).collect()));
    let ker = Mat::from_cols(field, dim, &cols).kernel_vectors();
    let amat = Mat::from_cols(field, dim, a);
    let images: Vec<Vector> = ker.iter().map(|k| amat.mul_vec(&k[..a.len()])).collect();
    independent_subset(field, dim, &images)
}

/// Representatives of `span(amb)` modulo `span(sub)`.
pub fn quotient_basis(field: &Field, dim: usize, sub: &[Vector], amb: &[Vector]) -> Result<Vec<Vector>, LinalgError> {
    for v in sub.iter().chain(amb) {
        if v.len() != dim {
            return Err(LinalgError::Shape(format!("expected length {dim}, found {}", v.len())));
        }
    }
    if !sub.is_empty() {
        let amb_solver = if amb.is_empty() { None } else { Some(Solver::new(&Mat::from_cols(field, dim, amb))) };
        for v in sub {
            let ok = match &amb_solver {
                Some(s) => s.contains(v),
                None => v.iter().all(|c| field.is_zero(c)),
            };
            if !ok {
                return Err(LinalgError::InconsistentSubspace);
            }
        }
    }
    // Pivot columns of [sub | amb] that fall in the amb block.
    let mut cols = sub.to_vec();
    cols.extend(amb.iter().cloned());
    if cols.is_empty() {
        return Ok(Vec::new());
    }
    let (_, pivots) = Mat::from_cols(field, dim, &cols).rref();
    Ok(pivots.into_iter().filter(|&p| p >= sub.len()).map(|p| cols[p].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q() -> Field {
        Field::rationals()
    }

    #[test]
    fn kernel_examples() {
        let f = q();
        assert_eq!(Mat::identity(&f, 2).kernel_basis().cols, 0);
        assert_eq!(Mat::zeros(&f, 2, 2).kernel_basis().cols, 2);
        let k = Mat::from_i64(&f, &[&[1, 1], &[1, 1]]).kernel_vectors();
        assert_eq!(k, vec![vec![f.from_i64(-1), f.from_i64(1)]]);
    }

    #[test]
    fn quotient_examples() {
        let f = q();
        let e1 = vec![f.one(), f.zero()];
        let e2 = vec![f.zero(), f.one()];
        assert_eq!(quotient_basis(&f, 2, &[], &[e1.clone(), e2.clone()]).unwrap().len(), 2);
        assert!(quotient_basis(&f, 2, &[e1.clone(), e2.clone()], &[e1.clone(), e2.clone()]).unwrap().is_empty());
        let diag = vec![f.one(), f.one()];
        let reps = quotient_basis(&f, 2, std::slice::from_ref(&diag), &[e1.clone(), e2.clone()]).unwrap();
        assert_eq!(reps.len(), 1);
        assert!(!in_span(&f, 2, std::slice::from_ref(&diag), &reps[0]));
        assert_eq!(
            quotient_basis(&f, 2, &[diag], &[e1]).unwrap_err(),
            LinalgError::InconsistentSubspace
        );
    }

    #[test]
    fn solver_reuse() {
        let f = q();
        let m = Mat::from_i64(&f, &[&[1, 2], &[2, 4], &[0, 1]]);
        let s = Solver::new(&m);
        let x = s.solve(&[f.from_i64(3), f.from_i64(6), f.from_i64(1)]).unwrap();
        assert_eq!(x, vec![f.from_i64(1), f.from_i64(1)]);
        assert!(s.solve(&[f.from_i64(1), f.from_i64(0), f.from_i64(0)]).is_none());
    }

    #[test]
    fn intersection_of_planes() {
        let f = q();
        let v = |a: i64, b: i64, c: i64| vec![f.from_i64(a), f.from_i64(b), f.from_i64(c)];
        let a = [v(1, 0, 0), v(0, 1, 0)];
        let b = [v(0, 1, 0), v(0, 0, 1)];
        let i = intersect(&f, 3, &a, &b);
        assert_eq!(i.len(), 1);
        assert!(same_span(&f, 3, &i, &[v(0, 1, 0)]));
    }

    fn small_matrix() -> impl Strategy<Value = (usize, usize, Vec<i64>)> {
        (1usize..6, 1usize..6).prop_flat_map(|(r, c)| (Just(r), Just(c), proptest::collection::vec(-3i64..4, r * c)))
    }

    proptest! {
        #[test]
        fn rank_nullity((r, c, vals) in small_matrix()) {
            for f in [q(), Field::prime(5).unwrap()] {
                let rows: Vec<Vector> = vals.chunks(c).map(|row| row.iter().map(|&v| f.from_i64(v)).collect()).collect();
                let m = Mat::from_rows(&f, c, &rows);
                prop_assert_eq!(rows.len(), r);
                let ker = m.kernel_vectors();
                prop_assert_eq!(m.rank() + ker.len(), c);
                for k in &ker {
                    prop_assert!(m.mul_vec(k).iter().all(|x| f.is_zero(x)));
                }
                prop_assert_eq!(rank_of(&f, c, &ker), ker.len());
            }
        }
    }
}
