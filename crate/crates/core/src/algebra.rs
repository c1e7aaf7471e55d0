//! Finite-dimensional graded-commutative algebras over ℚ with a differential.
//!
//! An algebra is stored as a fixed ordered basis with degrees, a full table
//! of structure constants `b_i · b_j = Σ_k c_ijk b_k` and the images `d(b_i)`.
//! All Koszul signs are resolved once, when the table is built; afterwards
//! every product is a plain bilinear extension of the table.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{display_scalar, factorial, sign, Scalar};

/// Sparse coefficient vector: `(basis index, coefficient)` pairs with distinct
/// indices and nonzero coefficients, sorted by index.
pub type SparseVec = Vec<(usize, Scalar)>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedAlgebra {
    names: Vec<String>,
    degrees: Vec<usize>,
    unit: usize,
    products: Vec<Vec<SparseVec>>,
    differential: Vec<SparseVec>,
}

fn normalize(entries: impl IntoIterator<Item = (usize, Scalar)>) -> SparseVec {
    let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
    for (i, c) in entries {
        *acc.entry(i).or_insert_with(Scalar::zero) += c;
    }
    acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

fn dense_to_sparse(v: &[Scalar]) -> SparseVec {
    v.iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (i, c.clone()))
        .collect()
}

/// Incremental construction of a [`GradedAlgebra`].
///
/// The first basis element added is the unit and must have degree 0. Products
/// with the unit are filled in automatically unless set explicitly.
#[derive(Debug, Default)]
pub struct AlgebraBuilder {
    names: Vec<String>,
    degrees: Vec<usize>,
    products: BTreeMap<(usize, usize), SparseVec>,
    differential: BTreeMap<usize, SparseVec>,
}

impl AlgebraBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn basis(&mut self, name: impl Into<String>, degree: usize) -> usize {
        self.names.push(name.into());
        self.degrees.push(degree);
        self.names.len() - 1
    }

    pub fn product(&mut self, i: usize, j: usize, value: impl IntoIterator<Item = (usize, Scalar)>) -> &mut Self {
        self.products.insert((i, j), normalize(value));
        self
    }

    pub fn differential(&mut self, i: usize, value: impl IntoIterator<Item = (usize, Scalar)>) -> &mut Self {
        self.differential.insert(i, normalize(value));
        self
    }

    /// Checks shapes only; use [`algebra_check`] for the axioms.
    pub fn build(self) -> Result<GradedAlgebra> {
        let n = self.names.len();
        if n == 0 {
            return Err(Error::InvalidAlgebra("empty basis".into()));
        }
        if self.degrees[0] != 0 {
            return Err(Error::InvalidAlgebra("the unit must have degree 0".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for name in &self.names {
            if !seen.insert(name.as_str()) {
                return Err(Error::InvalidAlgebra(format!("duplicate basis name {name:?}")));
            }
        }
        let in_range = |v: &SparseVec| v.iter().all(|(k, _)| *k < n);
        let mut products = vec![vec![SparseVec::new(); n]; n];
        for i in 0..n {
            products[0][i] = vec![(i, Scalar::one())];
            products[i][0] = vec![(i, Scalar::one())];
        }
        for ((i, j), v) in self.products {
            if i >= n || j >= n || !in_range(&v) {
                return Err(Error::InvalidAlgebra(format!("product ({i}, {j}) out of range")));
            }
            products[i][j] = v;
        }
        let mut differential = vec![SparseVec::new(); n];
        for (i, v) in self.differential {
            if i >= n || !in_range(&v) {
                return Err(Error::InvalidAlgebra(format!("differential of {i} out of range")));
            }
            differential[i] = v;
        }
        Ok(GradedAlgebra {
            names: self.names,
            degrees: self.degrees,
            unit: 0,
            products,
            differential,
        })
    }
}

impl GradedAlgebra {
    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn unit_index(&self) -> usize {
        self.unit
    }

    pub fn degree(&self, i: usize) -> usize {
        self.degrees[i]
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn top_degree(&self) -> usize {
        self.degrees.iter().copied().max().unwrap_or(0)
    }

    pub fn basis_in_degree(&self, degree: usize) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.degrees[i] == degree).collect()
    }

    /// Graded dimensions `dim A^0, ..., dim A^top`.
    pub fn graded_dims(&self) -> Vec<usize> {
        let mut dims = vec![0; self.top_degree() + 1];
        for &d in &self.degrees {
            dims[d] += 1;
        }
        dims
    }

    /// Exactly one basis element in degree 0 (necessarily the unit).
    pub fn is_connected(&self) -> bool {
        self.basis_in_degree(0).len() == 1
    }

    pub fn product(&self, i: usize, j: usize) -> &SparseVec {
        &self.products[i][j]
    }

    pub fn differential_of(&self, i: usize) -> &SparseVec {
        &self.differential[i]
    }

    pub fn has_zero_differential(&self) -> bool {
        self.differential.iter().all(Vec::is_empty)
    }

    fn mul_dense(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); self.dim()];
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let ab = a * b;
                for (k, c) in &self.products[i][j] {
                    out[*k] += &ab * c;
                }
            }
        }
        out
    }

    fn diff_dense(&self, x: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); self.dim()];
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (k, c) in &self.differential[i] {
                out[*k] += a * c;
            }
        }
        out
    }

    /// Matrix of `d` on the full basis.
    pub fn differential_matrix(&self) -> Matrix {
        let mut m = Matrix::zeros(self.dim(), self.dim());
        for j in 0..self.dim() {
            for (i, c) in &self.differential[j] {
                m[(*i, j)] = c.clone();
            }
        }
        m
    }

    /// Matrix of `x ↦ z·x` on the full basis.
    pub fn left_multiplication(&self, z: &[Scalar]) -> Matrix {
        let mut m = Matrix::zeros(self.dim(), self.dim());
        for (i, a) in z.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for j in 0..self.dim() {
                for (k, c) in &self.products[i][j] {
                    m[(*k, j)] += a * c;
                }
            }
        }
        m
    }

    /// Adjoins an odd generator `g` with `d g = dg`, giving `A ⊕ g·A`.
    ///
    /// The basis is `[b_0, ..., b_{N-1}, g·b_0, ..., g·b_{N-1}]`. Products
    /// follow `(g^s a)(g^t b) = (-1)^{t|a|} g^{s+t} ab` and `g² = 0`; the
    /// differential is `d(a + g·b) = da + dg·b - g·db`.
    pub fn odd_extension(base: &GradedAlgebra, name: &str, degree: usize, dg: &[Scalar]) -> Result<GradedAlgebra> {
        if degree.is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!(
                "generator {name} must have odd degree, got {degree}"
            )));
        }
        let n = base.dim();
        assert_eq!(dg.len(), n);
        for (i, c) in dg.iter().enumerate() {
            if !c.is_zero() && base.degrees[i] != degree + 1 {
                return Err(Error::Degree {
                    what: format!("d{name}"),
                    expected: degree + 1,
                    found: base.degrees[i].to_string(),
                });
            }
        }
        if base.diff_dense(dg).iter().any(|c| !c.is_zero()) {
            return Err(Error::NotClosed(format!("d{name}")));
        }
        let mut names = base.names.clone();
        let mut degrees = base.degrees.clone();
        for i in 0..n {
            names.push(if i == base.unit {
                name.to_string()
            } else {
                format!("{name}·{}", base.names[i])
            });
            degrees.push(base.degrees[i] + degree);
        }
        let mut products = vec![vec![SparseVec::new(); 2 * n]; 2 * n];
        for (s, t) in [(0, 0), (0, 1), (1, 0)] {
            for i in 0..n {
                for j in 0..n {
                    let sg = sign(t * base.degrees[i]);
                    products[s * n + i][t * n + j] = base.products[i][j]
                        .iter()
                        .map(|(k, c)| ((s + t) * n + k, &sg * c))
                        .collect();
                }
            }
        }
        let mut differential = vec![SparseVec::new(); 2 * n];
        for i in 0..n {
            differential[i] = base.differential[i].clone();
            let mut unit_i = vec![Scalar::zero(); n];
            unit_i[i] = Scalar::one();
            let dg_b = base.mul_dense(dg, &unit_i);
            let mut entries = dense_to_sparse(&dg_b);
            entries.extend(base.differential[i].iter().map(|(k, c)| (n + k, -c.clone())));
            differential[n + i] = normalize(entries);
        }
        Ok(GradedAlgebra {
            names,
            degrees,
            unit: base.unit,
            products,
            differential,
        })
    }

    /// Graded tensor product `A ⊗ B` with basis `a_i ⊗ b_j` in row-major order.
    pub fn tensor(a: &GradedAlgebra, b: &GradedAlgebra) -> GradedAlgebra {
        let (na, nb) = (a.dim(), b.dim());
        let clash = b
            .names
            .iter()
            .enumerate()
            .any(|(j, name)| j != b.unit && a.names.iter().enumerate().any(|(i, m)| i != a.unit && m == name));
        let right_name = |j: usize| {
            if clash {
                format!("{}'", b.names[j])
            } else {
                b.names[j].clone()
            }
        };
        let mut names = Vec::with_capacity(na * nb);
        let mut degrees = Vec::with_capacity(na * nb);
        for i in 0..na {
            for j in 0..nb {
                names.push(match (i == a.unit, j == b.unit) {
                    (true, true) => a.names[i].clone(),
                    (true, false) => right_name(j),
                    (false, true) => a.names[i].clone(),
                    (false, false) => format!("{}·{}", a.names[i], right_name(j)),
                });
                degrees.push(a.degrees[i] + b.degrees[j]);
            }
        }
        let idx = |i: usize, j: usize| i * nb + j;
        let mut products = vec![vec![SparseVec::new(); na * nb]; na * nb];
        for i1 in 0..na {
            for j1 in 0..nb {
                for i2 in 0..na {
                    for j2 in 0..nb {
                        let sg = sign(b.degrees[j1] * a.degrees[i2]);
                        let mut entries = Vec::new();
                        for (ka, ca) in &a.products[i1][i2] {
                            for (kb, cb) in &b.products[j1][j2] {
                                entries.push((idx(*ka, *kb), &sg * ca * cb));
                            }
                        }
                        products[idx(i1, j1)][idx(i2, j2)] = normalize(entries);
                    }
                }
            }
        }
        let mut differential = vec![SparseVec::new(); na * nb];
        for i in 0..na {
            for j in 0..nb {
                let sg = sign(a.degrees[i]);
                let mut entries: Vec<(usize, Scalar)> =
                    a.differential[i].iter().map(|(k, c)| (idx(*k, j), c.clone())).collect();
                entries.extend(b.differential[j].iter().map(|(k, c)| (idx(i, *k), &sg * c)));
                differential[idx(i, j)] = normalize(entries);
            }
        }
        GradedAlgebra {
            names,
            degrees,
            unit: idx(a.unit, b.unit),
            products,
            differential,
        }
    }
}

/// A violated algebra axiom with the basis indices that witness it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomViolation {
    pub axiom: Axiom,
    pub witness: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axiom {
    ProductDegree,
    GradedCommutativity,
    Associativity,
    Unit,
    DifferentialDegree,
    DifferentialSquare,
    Leibniz,
}

impl fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} violated at basis indices {:?}", self.axiom, self.witness)
    }
}

/// Lists every violated axiom. An empty report means `alg` is a valid
/// commutative differential graded algebra.
pub fn algebra_check(alg: &GradedAlgebra) -> Vec<AxiomViolation> {
    let n = alg.dim();
    let mut out = Vec::new();
    let mut report = |axiom, witness: Vec<usize>| out.push(AxiomViolation { axiom, witness });
    let unit_vec = |i: usize| {
        let mut v = vec![Scalar::zero(); n];
        v[i] = Scalar::one();
        v
    };

    if alg.degrees[alg.unit] != 0 {
        report(Axiom::Unit, vec![alg.unit]);
    }
    for i in 0..n {
        let e = vec![(i, Scalar::one())];
        if alg.products[alg.unit][i] != e || alg.products[i][alg.unit] != e {
            report(Axiom::Unit, vec![i]);
        }
    }
    for i in 0..n {
        for j in 0..n {
            let d = alg.degrees[i] + alg.degrees[j];
            if alg.products[i][j].iter().any(|(k, _)| alg.degrees[*k] != d) {
                report(Axiom::ProductDegree, vec![i, j]);
            }
        }
    }
    for i in 0..n {
        for j in i..n {
            let sg = sign(alg.degrees[i] * alg.degrees[j]);
            let swapped: SparseVec = normalize(alg.products[j][i].iter().map(|(k, c)| (*k, &sg * c)));
            if alg.products[i][j] != swapped {
                report(Axiom::GradedCommutativity, vec![i, j]);
            }
        }
    }
    let basis: Vec<Vec<Scalar>> = (0..n).map(unit_vec).collect();
    // products of a sparse vector with a basis element, on either side
    let times = |v: &SparseVec, k: usize| -> SparseVec {
        normalize(v.iter().flat_map(|(l, c)| alg.products[*l][k].iter().map(move |(m, x)| (*m, c * x))))
    };
    let times_left = |i: usize, v: &SparseVec| -> SparseVec {
        normalize(v.iter().flat_map(|(l, c)| alg.products[i][*l].iter().map(move |(m, x)| (*m, c * x))))
    };
    for i in 0..n {
        for j in 0..n {
            let ij = &alg.products[i][j];
            for k in 0..n {
                if times(ij, k) != times_left(i, &alg.products[j][k]) {
                    report(Axiom::Associativity, vec![i, j, k]);
                }
            }
        }
    }
    for i in 0..n {
        if alg.differential[i].iter().any(|(k, _)| alg.degrees[*k] != alg.degrees[i] + 1) {
            report(Axiom::DifferentialDegree, vec![i]);
        }
        let di = alg.diff_dense(&basis[i]);
        if alg.diff_dense(&di).iter().any(|c| !c.is_zero()) {
            report(Axiom::DifferentialSquare, vec![i]);
        }
    }
    let diff = |v: &SparseVec| -> SparseVec {
        normalize(v.iter().flat_map(|(l, c)| alg.differential[*l].iter().map(move |(m, x)| (*m, c * x))))
    };
    for i in 0..n {
        for j in 0..n {
            let lhs = diff(&alg.products[i][j]);
            let sg = sign(alg.degrees[i]);
            let rhs = normalize(
                times(&alg.differential[i], j)
                    .into_iter()
                    .chain(times_left(i, &alg.differential[j]).into_iter().map(|(m, x)| (m, &sg * x))),
            );
            if lhs != rhs {
                report(Axiom::Leibniz, vec![i, j]);
            }
        }
    }
    out
}

/// A (possibly inhomogeneous) element of a [`GradedAlgebra`].
///
/// The arithmetic operators panic when mixing algebras; [`Element::mul`] is
/// the checked product.
#[derive(Clone)]
pub struct Element {
    algebra: Arc<GradedAlgebra>,
    coeffs: Vec<Scalar>,
}

impl Element {
    pub fn zero(algebra: &Arc<GradedAlgebra>) -> Self {
        Element {
            algebra: Arc::clone(algebra),
            coeffs: vec![Scalar::zero(); algebra.dim()],
        }
    }

    pub fn unit(algebra: &Arc<GradedAlgebra>) -> Self {
        Self::basis(algebra, algebra.unit)
    }

    pub fn basis(algebra: &Arc<GradedAlgebra>, i: usize) -> Self {
        let mut e = Self::zero(algebra);
        e.coeffs[i] = Scalar::one();
        e
    }

    pub fn named(algebra: &Arc<GradedAlgebra>, name: &str) -> Option<Self> {
        algebra.index_of(name).map(|i| Self::basis(algebra, i))
    }

    pub fn from_coeffs(algebra: &Arc<GradedAlgebra>, coeffs: Vec<Scalar>) -> Self {
        assert_eq!(coeffs.len(), algebra.dim(), "coefficient vector has wrong length");
        Element {
            algebra: Arc::clone(algebra),
            coeffs,
        }
    }

    pub fn from_sparse(algebra: &Arc<GradedAlgebra>, entries: &[(usize, Scalar)]) -> Self {
        let mut e = Self::zero(algebra);
        for (i, c) in entries {
            e.coeffs[*i] += c;
        }
        e
    }

    pub fn algebra(&self) -> &Arc<GradedAlgebra> {
        &self.algebra
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &Scalar {
        &self.coeffs[i]
    }

    pub fn into_coeffs(self) -> Vec<Scalar> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn same_algebra(&self, other: &Element) -> bool {
        Arc::ptr_eq(&self.algebra, &other.algebra) || self.algebra == other.algebra
    }

    /// Degree shared by all nonzero coefficients; `None` for zero or
    /// inhomogeneous elements.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut degree = None;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let d = self.algebra.degrees[i];
            match degree {
                None => degree = Some(d),
                Some(prev) if prev != d => return None,
                _ => {}
            }
        }
        degree
    }

    /// True for zero and for elements homogeneous of degree `degree`.
    pub fn is_homogeneous_of(&self, degree: usize) -> bool {
        self.coeffs
            .iter()
            .enumerate()
            .all(|(i, c)| c.is_zero() || self.algebra.degrees[i] == degree)
    }

    /// Degrees carrying a nonzero coefficient, ascending.
    pub fn degrees_present(&self) -> Vec<usize> {
        let mut ds: Vec<usize> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, _)| self.algebra.degrees[i])
            .collect();
        ds.sort_unstable();
        ds.dedup();
        ds
    }

    pub fn component(&self, degree: usize) -> Element {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                if self.algebra.degrees[i] == degree {
                    c.clone()
                } else {
                    Scalar::zero()
                }
            })
            .collect();
        Element {
            algebra: Arc::clone(&self.algebra),
            coeffs,
        }
    }

    pub fn mul(&self, other: &Element) -> Result<Element> {
        if !self.same_algebra(other) {
            return Err(Error::AlgebraMismatch);
        }
        Ok(Element {
            algebra: Arc::clone(&self.algebra),
            coeffs: self.algebra.mul_dense(&self.coeffs, &other.coeffs),
        })
    }

    pub fn scale(&self, c: &Scalar) -> Element {
        Element {
            algebra: Arc::clone(&self.algebra),
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    pub fn d(&self) -> Element {
        Element {
            algebra: Arc::clone(&self.algebra),
            coeffs: self.algebra.diff_dense(&self.coeffs),
        }
    }

    pub fn is_closed(&self) -> bool {
        self.d().is_zero()
    }

    /// `Σ xᵏ/k!`, a finite sum because every component has positive even
    /// degree.
    pub fn exp(&self) -> Result<Element> {
        if self.degrees_present().iter().any(|&d| d == 0 || d % 2 == 1) {
            return Err(Error::InvalidParameter(
                "exponential needs an element of positive even degrees".into(),
            ));
        }
        let mut sum = Element::unit(&self.algebra);
        let mut power = Element::unit(&self.algebra);
        for k in 1.. {
            power = &power * self;
            if power.is_zero() {
                break;
            }
            sum = &sum + &power.scale(&factorial(k).recip());
        }
        Ok(sum)
    }

    fn zip_with(&self, other: &Element, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> Element {
        assert!(self.same_algebra(other), "elements belong to different algebras");
        Element {
            algebra: Arc::clone(&self.algebra),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| f(a, b)).collect(),
        }
    }
}

impl PartialEq for Element {
    fn eq(&self, other: &Self) -> bool {
        self.same_algebra(other) && self.coeffs == other.coeffs
    }
}

impl Eq for Element {}

impl Add for &Element {
    type Output = Element;
    fn add(self, rhs: &Element) -> Element {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &Element {
    type Output = Element;
    fn sub(self, rhs: &Element) -> Element {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        self.scale(&-Scalar::one())
    }
}

impl Mul for &Element {
    type Output = Element;
    fn mul(self, rhs: &Element) -> Element {
        Element::mul(self, rhs).expect("elements belong to different algebras")
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                let name = &self.algebra.names[i];
                if c.is_one() {
                    name.clone()
                } else if i == self.algebra.unit {
                    display_scalar(c)
                } else {
                    format!("{}·{}", display_scalar(c), name)
                }
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Element({self})")
    }
}
