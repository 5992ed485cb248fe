//! Bimodules over `A`, the small cochain complex with spaces `M^{alpha^t}`
//! and its cohomology.

use serde_json::{json, Value};
use thiserror::Error;

use crate::field::{Field, Scalar};
use crate::kalgebra::Validation;
use crate::linalg::{quotient_basis, LinalgError, Mat, Solver, Vector};
use crate::monogenic::MonogenicAlgebra;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CohomologyError {
    #[error("d o d != 0 entering degree {0}; the input data are inconsistent")]
    DSquared(usize),
    #[error("differential into degree {0} leaves the twisted-invariant subspace")]
    LeavesSubspace(usize),
    #[error("degree {r} needs the complex through degree {needed}, built only through {built}")]
    DegreeBound { r: usize, needed: usize, built: usize },
    #[error("vector is not a cocycle of degree {0}")]
    NotCocycle(usize),
    #[error("vector does not lie in the cochain space of degree {0}")]
    NotCochain(usize),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A finite-dimensional `A`-bimodule given by action matrices of the
/// generators: the basis of `K` and `x`.
#[derive(Clone, Debug)]
pub struct Bimodule {
    pub field: Field,
    pub dim: usize,
    pub left_k: Vec<Mat>,
    pub right_k: Vec<Mat>,
    /// `left_x_pows[d]` and `right_x_pows[d]` are the actions of `x^d`, `d < n`.
    left_x_pows: Vec<Mat>,
    right_x_pows: Vec<Mat>,
}

impl Bimodule {
    pub fn new(alg: &MonogenicAlgebra, left_k: Vec<Mat>, right_k: Vec<Mat>, left_x: Mat, right_x: Mat) -> Self {
        let field = alg.field().clone();
        let dim = left_x.rows;
        let mut left_x_pows = vec![Mat::identity(&field, dim)];
        let mut right_x_pows = vec![Mat::identity(&field, dim)];
        for d in 1..alg.n {
            left_x_pows.push(left_x.mul(&left_x_pows[d - 1]));
            right_x_pows.push(right_x.mul(&right_x_pows[d - 1]));
        }
        Bimodule { field, dim, left_k, right_k, left_x_pows, right_x_pows }
    }

    /// `A` acting on itself on both sides.
    pub fn regular(alg: &MonogenicAlgebra) -> Self {
        let left_k = (0..alg.k.dim).map(|b| alg.left_mul_matrix(&alg.from_k(&alg.k.basis(b)))).collect();
        let right_k = (0..alg.k.dim).map(|b| alg.right_mul_matrix(&alg.from_k(&alg.k.basis(b)))).collect();
        Bimodule::new(alg, left_k, right_k, alg.left_mul_matrix(&alg.x()), alg.right_mul_matrix(&alg.x()))
    }

    pub fn left_x(&self) -> &Mat {
        &self.left_x_pows[1]
    }

    pub fn right_x(&self) -> &Mat {
        &self.right_x_pows[1]
    }

    fn k_combination(&self, mats: &[Mat], c: &[Scalar]) -> Mat {
        let mut out = Mat::zeros(&self.field, self.dim, self.dim);
        for (b, v) in c.iter().enumerate() {
            if !self.field.is_zero(v) {
                out = out.add(&mats[b].scale(v));
            }
        }
        out
    }

    /// Matrix of `m -> a m`.
    pub fn left_action(&self, alg: &MonogenicAlgebra, a: &[Scalar]) -> Mat {
        let mut out = Mat::zeros(&self.field, self.dim, self.dim);
        for d in 0..alg.n {
            let c = alg.coeff(a, d);
            if alg.k.is_zero(c) {
                continue;
            }
            out = out.add(&self.k_combination(&self.left_k, c).mul(&self.left_x_pows[d]));
        }
        out
    }

    /// Matrix of `m -> m a`.
    pub fn right_action(&self, alg: &MonogenicAlgebra, a: &[Scalar]) -> Mat {
        let mut out = Mat::zeros(&self.field, self.dim, self.dim);
        for d in 0..alg.n {
            let c = alg.coeff(a, d);
            if alg.k.is_zero(c) {
                continue;
            }
            out = out.add(&self.right_x_pows[d].mul(&self.k_combination(&self.right_k, c)));
        }
        out
    }

    /// Commuting actions and the defining relations of `A`.
    pub fn validate(&self, alg: &MonogenicAlgebra) -> Validation {
        let k = &alg.k;
        let id = Mat::identity(&self.field, self.dim);
        if self.k_combination(&self.left_k, &k.unit) != id || self.k_combination(&self.right_k, &k.unit) != id {
            return Validation::fail("unit of K does not act as the identity");
        }
        let (lx, rx) = (self.left_x(), self.right_x());
        if lx.mul(rx) != rx.mul(lx) {
            return Validation::fail("left and right actions of x do not commute");
        }
        for b in 0..k.dim {
            let (l, r) = (&self.left_k[b], &self.right_k[b]);
            if l.mul(rx) != rx.mul(l) || r.mul(lx) != lx.mul(r) {
                return Validation::fail(format!("actions of {} and x do not commute", k.basis_names[b]));
            }
            for c in 0..k.dim {
                if l.mul(&self.right_k[c]) != self.right_k[c].mul(l) {
                    return Validation::fail("left and right K-actions do not commute");
                }
                let prod = k.basis_product(b, c);
                if l.mul(&self.left_k[c]) != self.k_combination(&self.left_k, prod) {
                    return Validation::fail("left K-action is not multiplicative");
                }
                if self.right_k[c].mul(r) != self.k_combination(&self.right_k, prod) {
                    return Validation::fail("right K-action is not multiplicative");
                }
            }
            let a = alg.alpha.apply(&k.basis(b));
            if lx.mul(l) != self.k_combination(&self.left_k, &a).mul(lx) {
                return Validation::fail(format!("x {} != alpha({}) x on the left", k.basis_names[b], k.basis_names[b]));
            }
            if r.mul(rx) != rx.mul(&self.k_combination(&self.right_k, &a)) {
                return Validation::fail(format!("x {} != alpha({}) x on the right", k.basis_names[b], k.basis_names[b]));
            }
        }
        let f = alg.reduce(&alg.f_poly());
        debug_assert!(alg.is_zero(&f));
        let mut lf = self.left_x_pows[alg.n - 1].mul(lx);
        let mut rf = rx.mul(&self.right_x_pows[alg.n - 1]);
        for i in 1..=alg.n {
            let lam = alg.lambda(i);
            if k.is_zero(&lam) {
                continue;
            }
            let e = alg.n - i;
            lf = lf.add(&self.k_combination(&self.left_k, &lam).mul(&self.left_x_pows[e]));
            rf = rf.add(&self.right_x_pows[e].mul(&self.k_combination(&self.right_k, &lam)));
        }
        if !lf.is_zero() || !rf.is_zero() {
            return Validation::fail("f does not act as zero");
        }
        Validation::pass()
    }

    /// Basis of `M^{alpha^r} = { m : m lambda = alpha^r(lambda) m }`.
    pub fn twisted_invariants(&self, alg: &MonogenicAlgebra, r: usize) -> Vec<Vector> {
        let mut stacked: Option<Mat> = None;
        for b in 0..alg.k.dim {
            let twisted = alg.alpha_apply(r, &alg.k.basis(b));
            let m = self.right_k[b].sub(&self.k_combination(&self.left_k, &twisted));
            stacked = Some(match stacked {
                None => m,
                Some(s) => s.vstack(&m),
            });
        }
        match stacked {
            Some(m) => m.kernel_vectors(),
            None => Mat::identity(&self.field, self.dim).columns(),
        }
    }

    /// Ambient matrix of the differential entering degree `r >= 1`.
    pub fn differential(&self, alg: &MonogenicAlgebra, r: usize) -> Mat {
        assert!(r >= 1);
        if r % 2 == 1 {
            self.left_x().sub(self.right_x())
        } else {
            let mut out = Mat::zeros(&self.field, self.dim, self.dim);
            for i in 1..=alg.n {
                let lam = alg.lambda(alg.n - i);
                if alg.k.is_zero(&lam) {
                    continue;
                }
                let l_lam = self.k_combination(&self.left_k, &lam);
                for l in 0..i {
                    let left = l_lam.mul(&self.left_x_pows[l]);
                    // x^{i-l-1} may reach x^{n-1} at most since i <= n
                    let right = &self.right_x_pows[i - l - 1];
                    out = out.add(&left.mul(right));
                }
            }
            out
        }
    }
}

/// `C^r = M^{alpha^{t(r)}}` with differentials `d^r : C^{r-1} -> C^r`.
#[derive(Clone, Debug)]
pub struct SmallComplex {
    pub field: Field,
    pub ambient_dim: usize,
    pub bound: usize,
    pub twists: Vec<usize>,
    /// Basis of `C^r` in ambient coordinates.
    pub bases: Vec<Vec<Vector>>,
    /// `diffs[r]` is `d^r` in the chosen bases (`diffs[0]` is empty).
    pub diffs: Vec<Mat>,
    pub ambient_diffs: Vec<Mat>,
    solvers: Vec<Option<Solver>>,
}

impl SmallComplex {
    pub fn build(alg: &MonogenicAlgebra, m: &Bimodule, bound: usize) -> Result<Self, CohomologyError> {
        let field = m.field.clone();
        let mut twists = Vec::new();
        let mut bases = Vec::new();
        let mut solvers = Vec::new();
        for r in 0..=bound {
            let t = alg.twist(r);
            let basis = m.twisted_invariants(alg, t);
            solvers.push(if basis.is_empty() { None } else { Some(Solver::new(&Mat::from_cols(&field, m.dim, &basis))) });
            twists.push(t);
            bases.push(basis);
        }
        let mut diffs = vec![Mat::zeros(&field, 0, 0)];
        let mut ambient_diffs = vec![Mat::zeros(&field, 0, 0)];
        for r in 1..=bound {
            let amb = m.differential(alg, r);
            let mut d = Mat::zeros(&field, bases[r].len(), bases[r - 1].len());
            for (j, v) in bases[r - 1].iter().enumerate() {
                let image = amb.mul_vec(v);
                let coords = coords_in(&solvers[r], &field, &image).ok_or(CohomologyError::LeavesSubspace(r))?;
                for (i, c) in coords.into_iter().enumerate() {
                    d.set(i, j, c);
                }
            }
            if r >= 2 && !d.mul(&diffs[r - 1]).is_zero() {
                return Err(CohomologyError::DSquared(r));
            }
            diffs.push(d);
            ambient_diffs.push(amb);
        }
        Ok(SmallComplex { field, ambient_dim: m.dim, bound, twists, bases, diffs, ambient_diffs, solvers })
    }

    pub fn regular(alg: &MonogenicAlgebra, bound: usize) -> Result<Self, CohomologyError> {
        SmallComplex::build(alg, &Bimodule::regular(alg), bound)
    }

    pub fn cochain_dim(&self, r: usize) -> usize {
        self.bases[r].len()
    }

    /// Coordinates of an ambient vector in the basis of `C^r`.
    pub fn to_coords(&self, r: usize, v: &[Scalar]) -> Result<Vector, CohomologyError> {
        coords_in(&self.solvers[r], &self.field, v).ok_or(CohomologyError::NotCochain(r))
    }

    pub fn from_coords(&self, r: usize, c: &[Scalar]) -> Vector {
        let mut out = vec![self.field.zero(); self.ambient_dim];
        for (v, x) in self.bases[r].iter().zip(c) {
            if self.field.is_zero(x) {
                continue;
            }
            for (o, y) in out.iter_mut().zip(v) {
                *o = self.field.add(o, &self.field.mul(x, y));
            }
        }
        out
    }

    pub fn contains(&self, r: usize, v: &[Scalar]) -> bool {
        coords_in(&self.solvers[r], &self.field, v).is_some()
    }

    /// Ambient `d^{r+1}(v)`.
    pub fn apply_d(&self, r: usize, v: &[Scalar]) -> Vector {
        self.ambient_diffs[r + 1].mul_vec(v)
    }

    pub fn rank_in(&self, r: usize) -> usize {
        if r == 0 {
            0
        } else {
            self.diffs[r].rank()
        }
    }

    pub fn cohomology(&self, r: usize) -> Result<CohomologyGroup, CohomologyError> {
        if r + 1 > self.bound {
            return Err(CohomologyError::DegreeBound { r, needed: r + 1, built: self.bound });
        }
        let dim_c = self.cochain_dim(r);
        let cocycles = self.diffs[r + 1].kernel_vectors();
        let boundaries = if r == 0 { Vec::new() } else { self.diffs[r].image_vectors() };
        let reps_coords = quotient_basis(&self.field, dim_c, &boundaries, &cocycles)?;
        let reps = reps_coords.iter().map(|c| self.from_coords(r, c)).collect();
        let mut cols = boundaries.clone();
        cols.extend(reps_coords.iter().cloned());
        let class_solver = if cols.is_empty() { None } else { Some(Solver::new(&Mat::from_cols(&self.field, dim_c, &cols))) };
        Ok(CohomologyGroup {
            degree: r,
            dim: reps_coords.len(),
            dim_cochain: dim_c,
            rank_in: boundaries.len(),
            rank_out: dim_c - cocycles.len(),
            reps_coords,
            reps,
            boundary_count: boundaries.len(),
            class_solver,
        })
    }

    /// All groups `H^0 .. H^{bound-1}`.
    pub fn all_cohomology(&self) -> Result<Vec<CohomologyGroup>, CohomologyError> {
        (0..self.bound).map(|r| self.cohomology(r)).collect()
    }

    /// Cocycles of degree `r` in ambient coordinates (needs `r + 1 <= bound`).
    pub fn cocycles(&self, r: usize) -> Vec<Vector> {
        self.diffs[r + 1].kernel_vectors().iter().map(|c| self.from_coords(r, c)).collect()
    }

    /// Coboundaries of degree `r` in ambient coordinates.
    pub fn coboundaries(&self, r: usize) -> Vec<Vector> {
        if r == 0 {
            return Vec::new();
        }
        self.diffs[r].image_vectors().iter().map(|c| self.from_coords(r, c)).collect()
    }

    pub fn is_cocycle(&self, r: usize, v: &[Scalar]) -> bool {
        self.contains(r, v) && (r + 1 > self.bound || self.apply_d(r, v).iter().all(|c| self.field.is_zero(c)))
    }

    pub fn is_coboundary(&self, r: usize, v: &[Scalar]) -> bool {
        if r == 0 {
            return v.iter().all(|c| self.field.is_zero(c));
        }
        let Ok(c) = self.to_coords(r, v) else { return false };
        if self.diffs[r].cols == 0 {
            return c.iter().all(|x| self.field.is_zero(x));
        }
        self.diffs[r].solve(&c).is_some()
    }

    /// Whether two cocycles of degree `r` are cohomologous.
    pub fn classes_equal(&self, r: usize, a: &[Scalar], b: &[Scalar]) -> Result<bool, CohomologyError> {
        if !self.is_cocycle(r, a) || !self.is_cocycle(r, b) {
            return Err(CohomologyError::NotCocycle(r));
        }
        let diff: Vector = a.iter().zip(b).map(|(x, y)| self.field.sub(x, y)).collect();
        Ok(self.is_coboundary(r, &diff))
    }
}

fn coords_in(solver: &Option<Solver>, field: &Field, v: &[Scalar]) -> Option<Vector> {
    match solver {
        Some(s) => s.solve(v),
        None => v.iter().all(|c| field.is_zero(c)).then(Vec::new),
    }
}

/// `H^r` with explicit representatives.
#[derive(Clone, Debug)]
pub struct CohomologyGroup {
    pub degree: usize,
    pub dim: usize,
    pub dim_cochain: usize,
    pub rank_in: usize,
    pub rank_out: usize,
    /// Representatives in coordinates of `C^r`.
    pub reps_coords: Vec<Vector>,
    /// Representatives in ambient coordinates.
    pub reps: Vec<Vector>,
    boundary_count: usize,
    class_solver: Option<Solver>,
}

impl CohomologyGroup {
    /// Coordinates of the class of a cocycle in the representative basis.
    pub fn class_coords(&self, complex: &SmallComplex, v: &[Scalar]) -> Result<Vector, CohomologyError> {
        let c = complex.to_coords(self.degree, v)?;
        let Some(solver) = &self.class_solver else {
            return if c.iter().all(|x| complex.field.is_zero(x)) { Ok(Vec::new()) } else { Err(CohomologyError::NotCocycle(self.degree)) };
        };
        let x = solver.solve(&c).ok_or(CohomologyError::NotCocycle(self.degree))?;
        Ok(x[self.boundary_count..].to_vec())
    }

    pub fn report(&self, alg: &MonogenicAlgebra, twist: usize) -> Value {
        json!({
            "degree": self.degree,
            "dim_cochain": self.dim_cochain,
            "twist_exponent": twist,
            "rank_in": self.rank_in,
            "rank_out": self.rank_out,
            "dim_H": self.dim,
            "representatives": self.reps.iter().map(|r| alg.display(r)).collect::<Vec<_>>(),
        })
    }
}

/// Dimension table `dim H^0 .. dim H^{bound-1}`.
pub fn dimension_table(alg: &MonogenicAlgebra, bound: usize) -> Result<Vec<usize>, CohomologyError> {
    let c = SmallComplex::regular(alg, bound)?;
    Ok(c.all_cohomology()?.iter().map(|g| g.dim).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kalgebra::{endo_from_character, group_algebra, AlgebraK, Endo, GroupData};

    fn sweedler() -> MonogenicAlgebra {
        let q = Field::rationals();
        let g = GroupData::cyclic(2).cyclic_character(&q, &q.from_i64(-1)).unwrap();
        let k = group_algebra(&g, &q);
        let alpha = endo_from_character(&g, &q).unwrap();
        MonogenicAlgebra::new(k.clone(), alpha, vec![k.zero(), k.zero()]).unwrap()
    }

    fn truncated(field: &Field, lambdas: &[i64]) -> MonogenicAlgebra {
        let k = AlgebraK::scalars(field);
        let alpha = Endo::identity(&k);
        MonogenicAlgebra::new(k, alpha, lambdas.iter().map(|&v| vec![field.from_i64(v)]).collect()).unwrap()
    }

    #[test]
    fn regular_bimodules() {
        let a = sweedler();
        let m = Bimodule::regular(&a);
        assert_eq!(m.dim, 4);
        assert!(m.validate(&a).ok);
        let q = Field::rationals();
        assert_eq!(Bimodule::regular(&truncated(&q, &[0, 0])).dim, 2);
    }

    #[test]
    fn twisted_invariants_of_sweedler() {
        let a = sweedler();
        let m = Bimodule::regular(&a);
        let t0 = m.twisted_invariants(&a, 0);
        assert!(crate::linalg::same_span(a.field(), 4, &t0, &[a.one(), a.from_k(&a.k.basis(1))]));
        let t1 = m.twisted_invariants(&a, 1);
        assert!(crate::linalg::same_span(a.field(), 4, &t1, &[a.x(), a.mono(&a.k.basis(1), 1)]));
        let q = Field::rationals();
        let b = truncated(&q, &[0, 0]);
        assert_eq!(Bimodule::regular(&b).twisted_invariants(&b, 3).len(), 2);
    }

    #[test]
    fn sweedler_complex_and_cohomology() {
        let a = sweedler();
        let c = SmallComplex::regular(&a, 5).unwrap();
        assert!((0..=4).all(|r| c.cochain_dim(r) == 2));
        let dims: Vec<usize> = c.all_cohomology().unwrap().iter().map(|h| h.dim).collect();
        assert_eq!(dims, vec![1; 5]);
        // x is not a coboundary, g x is
        assert!(!c.classes_equal(1, &a.x(), &a.zero()).unwrap());
        assert!(c.classes_equal(1, &a.mono(&a.k.basis(1), 1), &a.zero()).unwrap());
        assert!(c.classes_equal(1, &a.x(), &a.x()).unwrap());
    }

    #[test]
    fn alpha_identity_cases() {
        let q = Field::rationals();
        let c = SmallComplex::regular(&truncated(&q, &[0, 0]), 5).unwrap();
        assert!(c.diffs[1].is_zero());
        assert_eq!(c.diffs[2].rank(), 1);
        assert_eq!(dimension_table(&truncated(&q, &[0, 0]), 5).unwrap(), vec![2, 1, 1, 1, 1]);
        assert_eq!(dimension_table(&truncated(&q, &[0, -1]), 5).unwrap(), vec![2, 0, 0, 0, 0]);
        let f3 = Field::prime(3).unwrap();
        assert_eq!(dimension_table(&truncated(&f3, &[0, 0, 0]), 5).unwrap(), vec![3; 5]);
    }

    #[test]
    fn unit_is_always_a_degree_zero_class() {
        let a = sweedler();
        let c = SmallComplex::regular(&a, 2).unwrap();
        let h0 = c.cohomology(0).unwrap();
        assert!(c.is_cocycle(0, &a.one()));
        assert_eq!(h0.class_coords(&c, &a.one()).unwrap().len(), 1);
    }
}
