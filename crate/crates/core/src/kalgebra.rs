//! Finite-dimensional base algebras `K`, endomorphisms of `K`, and the group
//! data used to build group algebras with twisting characters.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::field::{Field, Scalar};
use crate::linalg::{Mat, Vector};

/// Coordinates of an element of `K` in its basis.
pub type KElem = Vector;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("structure constant index out of range: {0:?}")]
    Index((usize, usize, usize)),
    #[error("algebra fails validation: {0}")]
    Invalid(String),
    #[error("invalid group table: {0}")]
    Group(String),
    #[error("invalid character: {0}")]
    Character(String),
    #[error("trigonometric constants are inconsistent: {0}")]
    Trig(String),
    #[error("endomorphism is not multiplicative: {0}")]
    Endo(String),
    #[error("matrix has wrong shape: expected {expected}x{expected}, found {rows}x{cols}")]
    Shape { expected: usize, rows: usize, cols: usize },
}

/// Exact values of the rotation used to twist the quaternions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trig {
    pub cos: Scalar,
    pub sin: Scalar,
    pub cos_half: Scalar,
    pub sin_half: Scalar,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Origin {
    Table,
    Group(GroupData),
    Quaternion(Trig),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraK {
    pub field: Field,
    pub dim: usize,
    pub basis_names: Vec<String>,
    pub unit: KElem,
    /// `table[i][j]` holds the coordinates of `e_i e_j`.
    table: Vec<Vec<KElem>>,
    pub origin: Origin,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Validation {
    pub ok: bool,
    pub failure: Option<String>,
}

impl Validation {
    pub fn pass() -> Self {
        Validation { ok: true, failure: None }
    }

    pub fn fail(msg: impl Into<String>) -> Self {
        Validation { ok: false, failure: Some(msg.into()) }
    }
}

impl AlgebraK {
    /// Build from sparse structure constants `(i, j, k, c)` meaning
    /// `e_i e_j` has coefficient `c` on `e_k`. Absent entries are zero.
    pub fn from_structure_constants(
        field: &Field,
        basis_names: Vec<String>,
        unit: KElem,
        constants: &[(usize, usize, usize, Scalar)],
    ) -> Result<Self, AlgebraError> {
        let dim = basis_names.len();
        let mut table = vec![vec![vec![field.zero(); dim]; dim]; dim];
        for (i, j, k, c) in constants {
            if *i >= dim || *j >= dim || *k >= dim {
                return Err(AlgebraError::Index((*i, *j, *k)));
            }
            table[*i][*j][*k] = field.add(&table[*i][*j][*k], c);
        }
        Ok(AlgebraK { field: field.clone(), dim, basis_names, unit, table, origin: Origin::Table })
    }

    /// The field itself, as a one-dimensional algebra.
    pub fn scalars(field: &Field) -> Self {
        AlgebraK::from_structure_constants(field, vec!["1".into()], vec![field.one()], &[(0, 0, 0, field.one())])
            .expect("valid")
    }

    /// `k x k` with componentwise product.
    pub fn split_product(field: &Field) -> Self {
        AlgebraK::from_structure_constants(
            field,
            vec!["e1".into(), "e2".into()],
            vec![field.one(), field.one()],
            &[(0, 0, 0, field.one()), (1, 1, 1, field.one())],
        )
        .expect("valid")
    }

    pub fn zero(&self) -> KElem {
        vec![self.field.zero(); self.dim]
    }

    pub fn one(&self) -> KElem {
        self.unit.clone()
    }

    pub fn basis(&self, i: usize) -> KElem {
        let mut v = self.zero();
        v[i] = self.field.one();
        v
    }

    pub fn scalar(&self, c: &Scalar) -> KElem {
        self.scale(c, &self.unit)
    }

    pub fn is_zero(&self, a: &[Scalar]) -> bool {
        a.iter().all(|c| self.field.is_zero(c))
    }

    pub fn add(&self, a: &[Scalar], b: &[Scalar]) -> KElem {
        a.iter().zip(b).map(|(x, y)| self.field.add(x, y)).collect()
    }

    pub fn sub(&self, a: &[Scalar], b: &[Scalar]) -> KElem {
        a.iter().zip(b).map(|(x, y)| self.field.sub(x, y)).collect()
    }

    pub fn neg(&self, a: &[Scalar]) -> KElem {
        a.iter().map(|x| self.field.neg(x)).collect()
    }

    pub fn scale(&self, c: &Scalar, a: &[Scalar]) -> KElem {
        a.iter().map(|x| self.field.mul(c, x)).collect()
    }

    pub fn basis_product(&self, i: usize, j: usize) -> &KElem {
        &self.table[i][j]
    }

    pub fn mul(&self, a: &[Scalar], b: &[Scalar]) -> KElem {
        let f = &self.field;
        let mut out = self.zero();
        for (i, ai) in a.iter().enumerate() {
            if f.is_zero(ai) {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if f.is_zero(bj) {
                    continue;
                }
                let c = f.mul(ai, bj);
                for (k, t) in self.table[i][j].iter().enumerate() {
                    if !f.is_zero(t) {
                        out[k] = f.add(&out[k], &f.mul(&c, t));
                    }
                }
            }
        }
        out
    }

    pub fn pow(&self, a: &[Scalar], e: usize) -> KElem {
        let mut out = self.one();
        for _ in 0..e {
            out = self.mul(&out, a);
        }
        out
    }

    /// Matrix of `v -> a v`.
    pub fn left_mul_matrix(&self, a: &[Scalar]) -> Mat {
        let cols: Vec<KElem> = (0..self.dim).map(|j| self.mul(a, &self.basis(j))).collect();
        Mat::from_cols(&self.field, self.dim, &cols)
    }

    /// Matrix of `v -> v a`.
    pub fn right_mul_matrix(&self, a: &[Scalar]) -> Mat {
        let cols: Vec<KElem> = (0..self.dim).map(|j| self.mul(&self.basis(j), a)).collect();
        Mat::from_cols(&self.field, self.dim, &cols)
    }

    /// Exhaustive associativity and unit-law check.
    pub fn validate(&self) -> Validation {
        if self.unit.len() != self.dim {
            return Validation::fail("unit has wrong length");
        }
        for i in 0..self.dim {
            let e = self.basis(i);
            if self.mul(&self.unit, &e) != e || self.mul(&e, &self.unit) != e {
                return Validation::fail(format!("unit law fails at basis element {}", i + 1));
            }
        }
        for i in 0..self.dim {
            for j in 0..self.dim {
                let ij = &self.table[i][j];
                for k in 0..self.dim {
                    let left = self.mul(ij, &self.basis(k));
                    let right = self.mul(&self.basis(i), &self.table[j][k]);
                    if left != right {
                        return Validation::fail(format!(
                            "associativity fails at basis triple ({}, {}, {})",
                            i + 1,
                            j + 1,
                            k + 1
                        ));
                    }
                }
            }
        }
        Validation::pass()
    }

    pub fn commutes(&self, a: &[Scalar], b: &[Scalar]) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    /// Basis of the center, as the common kernel of `z -> z e_i - e_i z`.
    pub fn center(&self) -> Vec<KElem> {
        let mut stacked: Option<Mat> = None;
        for i in 0..self.dim {
            let e = self.basis(i);
            let m = self.right_mul_matrix(&e).sub(&self.left_mul_matrix(&e));
            stacked = Some(match stacked {
                None => m,
                Some(s) => s.vstack(&m),
            });
        }
        stacked.map(|m| m.kernel_vectors()).unwrap_or_default()
    }

    pub fn is_central(&self, z: &[Scalar]) -> bool {
        (0..self.dim).all(|i| self.commutes(z, &self.basis(i)))
    }

    /// Kernels of left and right multiplication by `a`.
    pub fn annihilators(&self, a: &[Scalar]) -> (Vec<KElem>, Vec<KElem>) {
        // mu a = 0 is the kernel of right multiplication, a mu = 0 of left.
        (self.right_mul_matrix(a).kernel_vectors(), self.left_mul_matrix(a).kernel_vectors())
    }

    /// Neither a left nor a right zero divisor (and nonzero).
    pub fn is_regular(&self, a: &[Scalar]) -> bool {
        let (l, r) = self.annihilators(a);
        l.is_empty() && r.is_empty()
    }

    pub fn group(&self) -> Option<&GroupData> {
        match &self.origin {
            Origin::Group(g) => Some(g),
            _ => None,
        }
    }

    pub fn display(&self, a: &[Scalar]) -> String {
        let mut parts = Vec::new();
        for (i, c) in a.iter().enumerate() {
            if self.field.is_zero(c) {
                continue;
            }
            let name = &self.basis_names[i];
            let coeff = self.field.display(c);
            parts.push(if coeff == "1" {
                name.clone()
            } else if coeff.contains([' ', '+']) || coeff[1..].contains('-') {
                format!("({coeff})*{name}")
            } else {
                format!("{coeff}*{name}")
            });
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

/// An algebra endomorphism, stored by its matrix (column `j` is `alpha(e_j)`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Endo {
    pub matrix: Mat,
    pub is_automorphism: bool,
}

impl Endo {
    pub fn new(matrix: Mat) -> Self {
        let is_automorphism = matrix.rows == matrix.cols && matrix.rank() == matrix.rows;
        Endo { matrix, is_automorphism }
    }

    pub fn identity(k: &AlgebraK) -> Self {
        Endo::new(Mat::identity(&k.field, k.dim))
    }

    /// Checked constructor.
    pub fn for_algebra(k: &AlgebraK, matrix: Mat) -> Result<Self, AlgebraError> {
        if matrix.rows != k.dim || matrix.cols != k.dim {
            return Err(AlgebraError::Shape { expected: k.dim, rows: matrix.rows, cols: matrix.cols });
        }
        let e = Endo::new(matrix);
        let v = e.validate(k);
        if !v.ok {
            return Err(AlgebraError::Endo(v.failure.unwrap_or_default()));
        }
        Ok(e)
    }

    pub fn apply(&self, a: &[Scalar]) -> KElem {
        self.matrix.mul_vec(a)
    }

    pub fn compose(&self, other: &Endo) -> Endo {
        Endo::new(self.matrix.mul(&other.matrix))
    }

    pub fn power(&self, e: usize) -> Endo {
        let mut m = Mat::identity(&self.matrix.field, self.matrix.rows);
        for _ in 0..e {
            m = self.matrix.mul(&m);
        }
        Endo { matrix: m, is_automorphism: self.is_automorphism }
    }

    pub fn is_identity(&self) -> bool {
        self.matrix == Mat::identity(&self.matrix.field, self.matrix.rows)
    }

    /// alpha(1) = 1 and alpha(e_i e_j) = alpha(e_i) alpha(e_j) for all pairs.
    pub fn validate(&self, k: &AlgebraK) -> Validation {
        if self.apply(&k.unit) != k.unit {
            return Validation::fail("alpha(1) != 1");
        }
        let images: Vec<KElem> = (0..k.dim).map(|i| self.matrix.col(i)).collect();
        for i in 0..k.dim {
            for j in 0..k.dim {
                if self.apply(k.basis_product(i, j)) != k.mul(&images[i], &images[j]) {
                    return Validation::fail(format!(
                        "alpha({} {}) != alpha({}) alpha({})",
                        k.basis_names[i], k.basis_names[j], k.basis_names[i], k.basis_names[j]
                    ));
                }
            }
        }
        Validation::pass()
    }

    /// Smallest `v >= 1` with `alpha^v = id`, searched up to `limit`.
    pub fn order(&self, limit: usize) -> Option<usize> {
        let id = Mat::identity(&self.matrix.field, self.matrix.rows);
        let mut m = self.matrix.clone();
        for v in 1..=limit {
            if m == id {
                return Some(v);
            }
            m = self.matrix.mul(&m);
        }
        None
    }
}

/// A finite group given by its multiplication table, with an optional
/// linear character.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupData {
    pub labels: Vec<String>,
    pub table: Vec<Vec<usize>>,
    pub identity: usize,
    pub inverses: Vec<usize>,
    pub character: Option<Vec<Scalar>>,
}

impl GroupData {
    pub fn from_table(labels: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self, AlgebraError> {
        let n = table.len();
        if n == 0 || labels.len() != n || table.iter().any(|row| row.len() != n || row.iter().any(|&x| x >= n)) {
            return Err(AlgebraError::Group("table must be square with entries in range".into()));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| table[e][g] == g && table[g][e] == g))
            .ok_or_else(|| AlgebraError::Group("no identity element".into()))?;
        let mut inverses = vec![0; n];
        for g in 0..n {
            inverses[g] = (0..n)
                .find(|&h| table[g][h] == identity && table[h][g] == identity)
                .ok_or_else(|| AlgebraError::Group(format!("{} has no inverse", labels[g])))?;
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(AlgebraError::Group(format!(
                            "associativity fails at ({}, {}, {})",
                            labels[a], labels[b], labels[c]
                        )));
                    }
                }
            }
        }
        Ok(GroupData { labels, table, identity, inverses, character: None })
    }

    /// `C_n = <g>`, elements `g^0 .. g^{n-1}`.
    pub fn cyclic(n: usize) -> Self {
        let labels = (0..n).map(|j| power_label("g", j)).collect();
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        GroupData::from_table(labels, table).expect("cyclic table is a group")
    }

    /// `<g, h : g^u = 1 = h^4, h g = g^{-1} h>`, element `g^j h^l` at index
    /// `4 j + l`.
    pub fn gh4(u: usize) -> Self {
        assert!(u >= 1, "u must be positive");
        let idx = |j: usize, l: usize| 4 * j + l;
        let mut labels = vec![String::new(); 4 * u];
        let mut table = vec![vec![0; 4 * u]; 4 * u];
        for j in 0..u {
            for l in 0..4 {
                labels[idx(j, l)] = join_labels(&power_label("g", j), &power_label("h", l));
                for j2 in 0..u {
                    for l2 in 0..4 {
                        // h^l g^{j2} = g^{(-1)^l j2} h^l
                        let moved = if l % 2 == 0 { j2 } else { (u - j2) % u };
                        table[idx(j, l)][idx(j2, l2)] = idx((j + moved) % u, (l + l2) % 4);
                    }
                }
            }
        }
        let g = GroupData::from_table(labels, table).expect("gh4 table is a group");
        debug_assert!(g.check_gh4_relations(u));
        g
    }

    fn check_gh4_relations(&self, u: usize) -> bool {
        let g = 4 % self.order();
        let h = 1;
        let g = if u == 1 { self.identity } else { g };
        self.power(g, u) == self.identity
            && self.power(h, 4) == self.identity
            && self.mul(h, g) == self.mul(self.inverses[g], h)
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn power(&self, a: usize, e: usize) -> usize {
        (0..e).fold(self.identity, |acc, _| self.mul(acc, a))
    }

    pub fn conjugate(&self, h: usize, g: usize) -> usize {
        self.mul(self.mul(h, g), self.inverses[h])
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Conjugacy classes, each sorted, listed by smallest member.
    pub fn conj_classes(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.order()];
        let mut out = Vec::new();
        for g in 0..self.order() {
            if seen[g] {
                continue;
            }
            let class: BTreeSet<usize> = (0..self.order()).map(|h| self.conjugate(h, g)).collect();
            for &c in &class {
                seen[c] = true;
            }
            out.push(class.into_iter().collect());
        }
        out
    }

    pub fn centralizer(&self, g: usize) -> Vec<usize> {
        (0..self.order()).filter(|&h| self.mul(h, g) == self.mul(g, h)).collect()
    }

    pub fn center(&self) -> Vec<usize> {
        (0..self.order()).filter(|&g| self.centralizer(g).len() == self.order()).collect()
    }

    pub fn is_central(&self, g: usize) -> bool {
        self.centralizer(g).len() == self.order()
    }

    /// Attach a character given elementwise, validating multiplicativity.
    pub fn with_character(mut self, field: &Field, values: Vec<Scalar>) -> Result<Self, AlgebraError> {
        if values.len() != self.order() {
            return Err(AlgebraError::Character("one value per group element is required".into()));
        }
        if !field.is_one(&values[self.identity]) {
            return Err(AlgebraError::Character("chi(1) != 1".into()));
        }
        for a in 0..self.order() {
            if field.is_zero(&values[a]) {
                return Err(AlgebraError::Character(format!("chi({}) = 0", self.labels[a])));
            }
            for b in 0..self.order() {
                if values[self.mul(a, b)] != field.mul(&values[a], &values[b]) {
                    return Err(AlgebraError::Character(format!(
                        "chi({} {}) != chi({}) chi({})",
                        self.labels[a], self.labels[b], self.labels[a], self.labels[b]
                    )));
                }
            }
        }
        self.character = Some(values);
        Ok(self)
    }

    /// Character of a cyclic group from the value on the generator.
    pub fn cyclic_character(self, field: &Field, chi_g: &Scalar) -> Result<Self, AlgebraError> {
        let values = (0..self.order()).map(|j| field.pow(chi_g, j as u64)).collect();
        self.with_character(field, values)
    }

    /// Character of a `gh4` group from its values on `g` and `h`.
    pub fn gh4_character(self, field: &Field, chi_g: &Scalar, chi_h: &Scalar) -> Result<Self, AlgebraError> {
        let values = (0..self.order())
            .map(|e| field.mul(&field.pow(chi_g, (e / 4) as u64), &field.pow(chi_h, (e % 4) as u64)))
            .collect();
        self.with_character(field, values)
    }

    pub fn chi(&self, g: usize) -> &Scalar {
        &self.character.as_ref().expect("group carries a character")[g]
    }

    /// Value of the r-th power of the character.
    pub fn chi_pow(&self, field: &Field, g: usize, r: usize) -> Scalar {
        field.pow(self.chi(g), r as u64)
    }

    /// Kernel of the character.
    pub fn kernel(&self, field: &Field) -> Vec<usize> {
        (0..self.order()).filter(|&g| field.is_one(self.chi(g))).collect()
    }

    /// Smallest `v >= 1` with `chi^v` trivial.
    pub fn character_order(&self, field: &Field) -> usize {
        (1..=self.order())
            .find(|&v| (0..self.order()).all(|g| field.is_one(&self.chi_pow(field, g, v))))
            .expect("character values are roots of unity of order dividing |G|")
    }

    /// Subgroup generated by `g`.
    pub fn cyclic_subgroup(&self, g: usize) -> Vec<usize> {
        let mut out = vec![self.identity];
        let mut x = g;
        while x != self.identity {
            out.push(x);
            x = self.mul(x, g);
        }
        out.sort();
        out
    }

    /// Quotient by a normal subgroup. Returns the quotient and the map from
    /// elements to cosets. The character descends when it is trivial on the
    /// subgroup.
    pub fn quotient(&self, field: &Field, normal: &[usize]) -> Result<(GroupData, Vec<usize>), AlgebraError> {
        for &n in normal {
            for h in 0..self.order() {
                if !normal.contains(&self.conjugate(h, n)) {
                    return Err(AlgebraError::Group("subgroup is not normal".into()));
                }
            }
        }
        let mut coset_of = vec![usize::MAX; self.order()];
        let mut reps = Vec::new();
        for g in 0..self.order() {
            if coset_of[g] != usize::MAX {
                continue;
            }
            for &n in normal {
                coset_of[self.mul(g, n)] = reps.len();
            }
            reps.push(g);
        }
        let labels = reps.iter().map(|&r| format!("[{}]", self.labels[r])).collect();
        let table = reps.iter().map(|&a| reps.iter().map(|&b| coset_of[self.mul(a, b)]).collect()).collect();
        let mut q = GroupData::from_table(labels, table)?;
        if let Some(chi) = &self.character {
            if normal.iter().all(|&n| field.is_one(&chi[n])) {
                let values = reps.iter().map(|&r| chi[r].clone()).collect();
                q = q.with_character(field, values)?;
            }
        }
        Ok((q, coset_of))
    }
}

fn power_label(sym: &str, e: usize) -> String {
    match e {
        0 => "1".into(),
        1 => sym.into(),
        _ => format!("{sym}^{e}"),
    }
}

fn join_labels(a: &str, b: &str) -> String {
    match (a, b) {
        ("1", _) => b.into(),
        (_, "1") => a.into(),
        _ => format!("{a}{b}"),
    }
}

/// The group algebra `k[G]` with basis `e_g`.
pub fn group_algebra(g: &GroupData, field: &Field) -> AlgebraK {
    let n = g.order();
    let mut constants = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            constants.push((a, b, g.mul(a, b), field.one()));
        }
    }
    let mut unit = vec![field.zero(); n];
    unit[g.identity] = field.one();
    let mut k = AlgebraK::from_structure_constants(field, g.labels.clone(), unit, &constants).expect("indices in range");
    k.origin = Origin::Group(g.clone());
    k
}

/// Class sums of the group algebra, one per conjugacy class.
pub fn class_sums(g: &GroupData, field: &Field) -> Vec<KElem> {
    g.conj_classes()
        .into_iter()
        .map(|class| {
            let mut v = vec![field.zero(); g.order()];
            for c in class {
                v[c] = field.one();
            }
            v
        })
        .collect()
}

/// `alpha(g) = chi(g) g`.
pub fn endo_from_character(g: &GroupData, field: &Field) -> Result<Endo, AlgebraError> {
    let chi = g.character.as_ref().ok_or_else(|| AlgebraError::Character("group has no character".into()))?;
    let mut m = Mat::zeros(field, g.order(), g.order());
    for (e, v) in chi.iter().enumerate() {
        if field.is_zero(v) {
            return Err(AlgebraError::Character(format!("chi({}) = 0", g.labels[e])));
        }
        m.set(e, e, v.clone());
    }
    Ok(Endo::new(m))
}

/// Quaternions `{1, i, j, k}` over `field` with `alpha` the rotation by
/// `theta` in the `(i, j)` plane.
pub fn quaternion_algebra(field: &Field, trig: Trig) -> Result<(AlgebraK, Endo), AlgebraError> {
    let f = field;
    let sq = |a: &Scalar| f.mul(a, a);
    let one = f.one();
    if f.add(&sq(&trig.cos), &sq(&trig.sin)) != one {
        return Err(AlgebraError::Trig("cos^2 + sin^2 != 1".into()));
    }
    if f.add(&sq(&trig.cos_half), &sq(&trig.sin_half)) != one {
        return Err(AlgebraError::Trig("half-angle cos^2 + sin^2 != 1".into()));
    }
    if f.sub(&sq(&trig.cos_half), &sq(&trig.sin_half)) != trig.cos {
        return Err(AlgebraError::Trig("cos != cos_half^2 - sin_half^2".into()));
    }
    if f.mul(&f.from_i64(2), &f.mul(&trig.sin_half, &trig.cos_half)) != trig.sin {
        return Err(AlgebraError::Trig("sin != 2 sin_half cos_half".into()));
    }
    // basis 0:1 1:i 2:j 3:k
    let m1 = f.from_i64(-1);
    let table: [(usize, usize, usize, i64); 16] = [
        (0, 0, 0, 1),
        (0, 1, 1, 1),
        (0, 2, 2, 1),
        (0, 3, 3, 1),
        (1, 0, 1, 1),
        (2, 0, 2, 1),
        (3, 0, 3, 1),
        (1, 1, 0, -1),
        (2, 2, 0, -1),
        (3, 3, 0, -1),
        (1, 2, 3, 1),
        (2, 1, 3, -1),
        (2, 3, 1, 1),
        (3, 2, 1, -1),
        (3, 1, 2, 1),
        (1, 3, 2, -1),
    ];
    let constants: Vec<_> = table.iter().map(|&(a, b, c, s)| (a, b, c, if s == 1 { one.clone() } else { m1.clone() })).collect();
    let names = ["1", "i", "j", "k"].iter().map(|s| s.to_string()).collect();
    let unit = vec![one.clone(), f.zero(), f.zero(), f.zero()];
    let mut k = AlgebraK::from_structure_constants(f, names, unit, &constants)?;
    k.origin = Origin::Quaternion(trig.clone());
    let mut m = Mat::zeros(f, 4, 4);
    m.set(0, 0, one.clone());
    // alpha(i) = cos i + sin j, alpha(j) = -sin i + cos j, alpha(k) = k
    m.set(1, 1, trig.cos.clone());
    m.set(2, 1, trig.sin.clone());
    m.set(1, 2, f.neg(&trig.sin));
    m.set(2, 2, trig.cos.clone());
    m.set(3, 3, one);
    let alpha = Endo::for_algebra(&k, m)?;
    Ok((k, alpha))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalars_and_c2_validate() {
        let q = Field::rationals();
        assert!(AlgebraK::scalars(&q).validate().ok);
        let k = group_algebra(&GroupData::cyclic(2), &q);
        assert_eq!(k.dim, 2);
        assert!(k.validate().ok);
        assert_eq!(k.mul(&k.basis(1), &k.basis(1)), k.one());
    }

    #[test]
    fn corrupted_constant_is_reported() {
        let q = Field::rationals();
        let k = AlgebraK::from_structure_constants(
            &q,
            vec!["1".into(), "g".into()],
            vec![q.one(), q.zero()],
            &[(0, 0, 0, q.from_i64(2)), (0, 1, 1, q.one()), (1, 0, 1, q.one()), (1, 1, 0, q.one())],
        )
        .unwrap();
        let v = k.validate();
        assert!(!v.ok);
        assert!(v.failure.unwrap().contains("1"));
    }

    #[test]
    fn gh4_family() {
        assert_eq!(GroupData::gh4(1).order(), 4);
        let g8 = GroupData::gh4(2);
        assert_eq!(g8.order(), 8);
        let g = GroupData::gh4(3);
        assert_eq!(g.order(), 12);
        let (gen_g, gen_h) = (4, 1);
        assert_eq!(g.conjugate(gen_h, gen_g), g.inverses[gen_g]);
        assert_eq!(g.power(gen_g, 3), g.identity);
        assert_eq!(g.power(gen_h, 4), g.identity);
        let class_of_g = g.conj_classes().into_iter().find(|c| c.contains(&gen_g)).unwrap();
        assert_eq!(class_of_g, vec![gen_g, g.inverses[gen_g]]);
        assert!(g.conj_classes().contains(&vec![g.identity]));
    }

    #[test]
    fn center_dimensions() {
        let q = Field::rationals();
        let k = group_algebra(&GroupData::cyclic(4), &q);
        assert_eq!(k.center().len(), 4);
        let g = GroupData::gh4(3);
        let k = group_algebra(&g, &q);
        assert_eq!(k.center().len(), g.conj_classes().len());
        for s in class_sums(&g, &q) {
            assert!(k.is_central(&s));
        }
    }

    #[test]
    fn quaternion_rotation_by_pi() {
        let q = Field::rationals();
        let trig = Trig { cos: q.from_i64(-1), sin: q.zero(), cos_half: q.zero(), sin_half: q.one() };
        let (k, alpha) = quaternion_algebra(&q, trig).unwrap();
        assert!(k.validate().ok);
        assert_eq!(k.center().len(), 1);
        assert_eq!(alpha.apply(&k.basis(1)), k.neg(&k.basis(1)));
        assert_eq!(alpha.apply(&k.basis(2)), k.neg(&k.basis(2)));
        assert_eq!(alpha.apply(&k.basis(3)), k.basis(3));
    }

    #[test]
    fn quaternion_rotation_by_half_pi() {
        let f = Field::q_extension(&[-2, 0, 1], "s").unwrap();
        let half = f.div(&f.generator(), &f.from_i64(2)).unwrap();
        let trig = Trig { cos: f.zero(), sin: f.one(), cos_half: half.clone(), sin_half: half };
        assert!(quaternion_algebra(&f, trig).is_ok());
        let q = Field::rationals();
        let bad = Trig { cos: q.one(), sin: q.one(), cos_half: q.one(), sin_half: q.zero() };
        assert!(matches!(quaternion_algebra(&q, bad), Err(AlgebraError::Trig(_))));
    }

    #[test]
    fn characters_and_endos() {
        let q = Field::rationals();
        let g = GroupData::cyclic(2).cyclic_character(&q, &q.from_i64(-1)).unwrap();
        let alpha = endo_from_character(&g, &q).unwrap();
        assert_eq!(alpha.matrix, Mat::from_i64(&q, &[&[1, 0], &[0, -1]]));
        let k = group_algebra(&g, &q);
        assert!(alpha.validate(&k).ok);
        let trivial = GroupData::cyclic(3).cyclic_character(&q, &q.one()).unwrap();
        assert!(endo_from_character(&trivial, &q).unwrap().is_identity());

        let qi = Field::q_extension(&[1, 0, 1], "i").unwrap();
        let g = GroupData::gh4(3).gh4_character(&qi, &qi.one(), &qi.generator()).unwrap();
        let alpha = endo_from_character(&g, &qi).unwrap();
        for e in 0..12 {
            assert_eq!(alpha.matrix.get(e, e), &qi.pow(&qi.generator(), (e % 4) as u64));
        }
        // chi^r matches alpha^r
        for r in 0..5 {
            let mut values = Vec::new();
            for e in 0..12 {
                values.push(g.chi_pow(&qi, e, r));
            }
            let gr = GroupData::gh4(3).with_character(&qi, values).unwrap();
            assert_eq!(endo_from_character(&gr, &qi).unwrap().matrix, alpha.power(r).matrix);
        }
    }

    #[test]
    fn quotient_of_c4_by_square() {
        let qi = Field::q_extension(&[1, 0, 1], "i").unwrap();
        let g = GroupData::cyclic(4).cyclic_character(&qi, &qi.from_i64(-1)).unwrap();
        let sub = g.cyclic_subgroup(2);
        let (quot, map) = g.quotient(&qi, &sub).unwrap();
        assert_eq!(quot.order(), 2);
        assert_eq!(map[1], map[3]);
        assert!(quot.character.is_some());
    }
}
