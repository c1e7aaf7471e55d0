//! Finite cochain complexes, chain maps and their induced maps on cohomology.
//!
//! A complex is a list of slots with one differential per slot. Integer
//! graded complexes have slots `0..len` and `d_k: C^k → C^{k+1}`, with the
//! last differential landing in the zero space. Cyclic complexes have slots
//! `0..N` indexed modulo `N` and the last differential wraps to slot 0.

use num_traits::Zero;
use serde::Serialize;

use crate::algebra::GradedAlgebra;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase", tag = "kind", content = "modulus")]
pub enum Grading {
    Integer,
    Cyclic(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Complex {
    grading: Grading,
    dims: Vec<usize>,
    diffs: Vec<Matrix>,
}

impl Complex {
    /// `diffs[k]` must be a `dim(next(k)) × dim(k)` matrix (zero rows when
    /// there is no next slot), and consecutive differentials must compose to
    /// zero.
    pub fn new(grading: Grading, dims: Vec<usize>, diffs: Vec<Matrix>) -> Result<Self> {
        if let Grading::Cyclic(n) = grading {
            if n == 0 || dims.len() != n {
                return Err(Error::Incompatible(format!(
                    "cyclic complex with modulus {n} needs {n} slots, got {}",
                    dims.len()
                )));
            }
        }
        if diffs.len() != dims.len() {
            return Err(Error::Incompatible("one differential per slot required".into()));
        }
        let complex = Complex { grading, dims, diffs };
        for k in 0..complex.len() {
            let rows = complex.next(k).map_or(0, |t| complex.dims[t]);
            let d = &complex.diffs[k];
            if d.nrows() != rows || d.ncols() != complex.dims[k] {
                return Err(Error::Incompatible(format!("differential {k} has the wrong shape")));
            }
        }
        for k in 0..complex.len() {
            if let Some(t) = complex.next(k) {
                if !complex.diffs[t].mul(&complex.diffs[k]).is_zero() {
                    return Err(Error::Incompatible(format!("d∘d ≠ 0 starting at slot {k}")));
                }
            }
        }
        Ok(complex)
    }

    /// The complex of `op` acting on `layout`'s slots. Entries of `op` that
    /// do not go from slot `k` to `next(k)` are rejected.
    pub fn from_operator(layout: &Layout, op: &Matrix) -> Result<Self> {
        let n = layout.len();
        let mut diffs = Vec::with_capacity(n);
        for k in 0..n {
            let next = layout.next(k);
            for (t, rows) in layout.slots.iter().enumerate() {
                if Some(t) == next {
                    continue;
                }
                if !op.select(rows, &layout.slots[k]).is_zero() {
                    return Err(Error::Incompatible(format!(
                        "operator does not respect the grading at slot {k}"
                    )));
                }
            }
            let rows: &[usize] = next.map_or(&[], |t| &layout.slots[t]);
            diffs.push(op.select(rows, &layout.slots[k]));
        }
        Complex::new(layout.grading, layout.dims(), diffs)
    }

    pub fn grading(&self) -> Grading {
        self.grading
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn differential(&self, k: usize) -> &Matrix {
        &self.diffs[k]
    }

    pub fn next(&self, k: usize) -> Option<usize> {
        step(self.grading, self.len(), k, 1)
    }

    pub fn prev(&self, k: usize) -> Option<usize> {
        step(self.grading, self.len(), k, -1)
    }

    /// `dim H^k = dim ker d_k - rank d_{k-1}` for every slot.
    pub fn cohomology_dims(&self) -> Vec<usize> {
        let ranks: Vec<usize> = self.diffs.iter().map(Matrix::rank).collect();
        (0..self.len())
            .map(|k| {
                let incoming = self.prev(k).map_or(0, |p| ranks[p]);
                self.dims[k] - ranks[k] - incoming
            })
            .collect()
    }

    /// Alternating sum of slot dimensions (integer grading).
    pub fn euler_characteristic(&self) -> i64 {
        alternating_sum(&self.dims)
    }

    /// Cocycle representatives of a basis of `H^k`, chosen by exact row
    /// reduction of `[boundaries | cocycles]`.
    pub fn cohomology_basis(&self, k: usize) -> CohomologyBasis {
        let dim = self.dims[k];
        let cocycles = self.diffs[k].kernel();
        let boundary_columns: Vec<Vec<Scalar>> = match self.prev(k) {
            Some(p) => {
                let d = &self.diffs[p];
                (0..d.ncols()).map(|j| d.column(j)).filter(|c| c.iter().any(|x| !x.is_zero())).collect()
            }
            None => Vec::new(),
        };
        let nb = boundary_columns.len();
        let mut all = boundary_columns.clone();
        all.extend(cocycles.iter().cloned());
        let pivots = Matrix::from_columns(dim, &all).echelon().pivots;
        let boundaries: Vec<Vec<Scalar>> = pivots
            .iter()
            .filter(|&&p| p < nb)
            .map(|&p| boundary_columns[p].clone())
            .collect();
        let representatives: Vec<Vec<Scalar>> = pivots
            .iter()
            .filter(|&&p| p >= nb)
            .map(|&p| all[p].clone())
            .collect();
        let mut columns = boundaries.clone();
        columns.extend(representatives.iter().cloned());
        CohomologyBasis {
            dim,
            boundary_rank: boundaries.len(),
            representatives,
            frame: Matrix::from_columns(dim, &columns),
        }
    }
}

fn step(grading: Grading, len: usize, k: usize, delta: i64) -> Option<usize> {
    let target = k as i64 + delta;
    match grading {
        Grading::Cyclic(n) => Some(target.rem_euclid(n as i64) as usize),
        Grading::Integer => (0..len as i64).contains(&target).then_some(target as usize),
    }
}

pub(crate) fn alternating_sum(dims: &[usize]) -> i64 {
    dims.iter()
        .enumerate()
        .map(|(k, &d)| if k % 2 == 0 { d as i64 } else { -(d as i64) })
        .sum()
}

/// A chosen basis of one cohomology space.
#[derive(Clone, Debug)]
pub struct CohomologyBasis {
    dim: usize,
    boundary_rank: usize,
    representatives: Vec<Vec<Scalar>>,
    frame: Matrix,
}

impl CohomologyBasis {
    pub fn representatives(&self) -> &[Vec<Scalar>] {
        &self.representatives
    }

    pub fn rank(&self) -> usize {
        self.representatives.len()
    }

    /// Coordinates of the class of cocycle `v` in the representative basis,
    /// or `None` when `v` is not a cocycle of this slot.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(v.len(), self.dim);
        self.frame.solve(v).map(|x| x[self.boundary_rank..].to_vec())
    }
}

/// Assignment of algebra basis elements to complex slots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Layout {
    grading: Grading,
    slots: Vec<Vec<usize>>,
    slot_of: Vec<(usize, usize)>,
}

impl Layout {
    /// Slots by degree (`Integer`, `0..=top`) or by degree mod `N`.
    pub fn of_algebra(alg: &GradedAlgebra, grading: Grading) -> Self {
        let count = match grading {
            Grading::Integer => alg.top_degree() + 1,
            Grading::Cyclic(n) => n,
        };
        let mut slots = vec![Vec::new(); count];
        let mut slot_of = Vec::with_capacity(alg.dim());
        for i in 0..alg.dim() {
            let d = alg.degree(i);
            let s = match grading {
                Grading::Integer => d,
                Grading::Cyclic(n) => d % n,
            };
            slot_of.push((s, slots[s].len()));
            slots[s].push(i);
        }
        Layout {
            grading,
            slots,
            slot_of,
        }
    }

    pub fn grading(&self) -> Grading {
        self.grading
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn slot(&self, k: usize) -> &[usize] {
        &self.slots[k]
    }

    /// `(slot, position within slot)` of a basis index.
    pub fn locate(&self, basis_index: usize) -> (usize, usize) {
        self.slot_of[basis_index]
    }

    pub fn dims(&self) -> Vec<usize> {
        self.slots.iter().map(Vec::len).collect()
    }

    pub fn next(&self, k: usize) -> Option<usize> {
        step(self.grading, self.len(), k, 1)
    }

    pub fn shifted(&self, k: usize, shift: i64) -> Option<usize> {
        step(self.grading, self.len(), k, shift)
    }

    /// Expands a slot vector to a full basis vector of length `total`.
    pub fn embed(&self, k: usize, v: &[Scalar], total: usize) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); total];
        for (pos, &i) in self.slots[k].iter().enumerate() {
            out[i] = v[pos].clone();
        }
        out
    }

    /// Restricts a full basis vector to slot `k`.
    pub fn restrict(&self, k: usize, v: &[Scalar]) -> Vec<Scalar> {
        self.slots[k].iter().map(|&i| v[i].clone()).collect()
    }
}

/// A cochain map `f: C → D` of degree `shift`: `f_k: C^k → D^{k+shift}`
/// with `d_D ∘ f = f ∘ d_C` exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap {
    source: Complex,
    target: Complex,
    shift: i64,
    maps: Vec<Matrix>,
}

impl ChainMap {
    pub fn new(source: Complex, target: Complex, shift: i64, maps: Vec<Matrix>) -> Result<Self> {
        if source.grading != target.grading {
            return Err(Error::Incompatible("source and target gradings differ".into()));
        }
        if maps.len() != source.len() {
            return Err(Error::Incompatible("one matrix per source slot required".into()));
        }
        let f = ChainMap {
            source,
            target,
            shift,
            maps,
        };
        for k in 0..f.source.len() {
            let rows = f.target_slot(k).map_or(0, |t| f.target.dims[t]);
            if f.maps[k].nrows() != rows || f.maps[k].ncols() != f.source.dims[k] {
                return Err(Error::Incompatible(format!("map at slot {k} has the wrong shape")));
            }
        }
        if let Some(slot) = f.commutation_failure() {
            return Err(Error::NotChainMap { slot });
        }
        Ok(f)
    }

    /// Builds the chain map from a full-basis matrix `op` between two
    /// algebra layouts.
    pub fn from_operator(
        source: Complex,
        source_layout: &Layout,
        target: Complex,
        target_layout: &Layout,
        shift: i64,
        op: &Matrix,
    ) -> Result<Self> {
        let mut maps = Vec::with_capacity(source.len());
        for k in 0..source.len() {
            let t = target_layout.shifted(k, shift);
            for (slot, rows) in target_layout.slots.iter().enumerate() {
                if Some(slot) != t && !op.select(rows, source_layout.slot(k)).is_zero() {
                    return Err(Error::Incompatible(format!(
                        "operator does not have degree {shift} at slot {k}"
                    )));
                }
            }
            let rows: &[usize] = t.map_or(&[], |t| target_layout.slot(t));
            maps.push(op.select(rows, source_layout.slot(k)));
        }
        ChainMap::new(source, target, shift, maps)
    }

    pub fn identity(c: &Complex) -> Self {
        let maps = c.dims.iter().map(|&d| Matrix::identity(d)).collect();
        ChainMap {
            source: c.clone(),
            target: c.clone(),
            shift: 0,
            maps,
        }
    }

    pub fn zero(source: &Complex, target: &Complex, shift: i64) -> Result<Self> {
        let maps = (0..source.len())
            .map(|k| {
                let rows = step(target.grading, target.len(), k, shift).map_or(0, |t| target.dims[t]);
                Matrix::zeros(rows, source.dims[k])
            })
            .collect();
        ChainMap::new(source.clone(), target.clone(), shift, maps)
    }

    pub fn source(&self) -> &Complex {
        &self.source
    }

    pub fn target(&self) -> &Complex {
        &self.target
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn matrix(&self, k: usize) -> &Matrix {
        &self.maps[k]
    }

    pub fn target_slot(&self, k: usize) -> Option<usize> {
        step(self.target.grading, self.target.len(), k, self.shift)
    }

    /// First source slot where `d ∘ f ≠ f ∘ d`.
    pub fn commutation_failure(&self) -> Option<usize> {
        for k in 0..self.source.len() {
            let lhs = match self.target_slot(k) {
                Some(t) => self.target.diffs[t].mul(&self.maps[k]),
                None => continue,
            };
            let rhs = match self.source.next(k) {
                Some(s) => self.maps[s].mul(&self.source.diffs[k]),
                None => Matrix::zeros(lhs.nrows(), lhs.ncols()),
            };
            if lhs.nrows() != rhs.nrows() {
                // target slot of next(k) is out of range: d∘f must vanish
                if !lhs.is_zero() {
                    return Some(k);
                }
                continue;
            }
            if lhs != rhs {
                return Some(k);
            }
        }
        None
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &ChainMap) -> Result<ChainMap> {
        if inner.target != self.source {
            return Err(Error::Incompatible("composition of non-matching chain maps".into()));
        }
        let maps = (0..inner.source.len())
            .map(|k| match inner.target_slot(k) {
                Some(t) => self.maps[t].mul(&inner.maps[k]),
                None => {
                    let rows = step(self.target.grading, self.target.len(), k, inner.shift + self.shift)
                        .map_or(0, |t| self.target.dims[t]);
                    Matrix::zeros(rows, inner.source.dims[k])
                }
            })
            .collect();
        ChainMap::new(inner.source.clone(), self.target.clone(), inner.shift + self.shift, maps)
    }
}

/// The map a chain map induces on cohomology, slot by slot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InducedMap {
    pub matrices: Vec<Matrix>,
    pub injective: Vec<bool>,
    pub surjective: Vec<bool>,
}

impl InducedMap {
    pub fn is_isomorphism(&self) -> bool {
        self.injective.iter().chain(&self.surjective).all(|&b| b)
    }
}

/// Matrices of `f` on the chosen cohomology bases of source and target.
pub fn induced_map_on_cohomology(f: &ChainMap) -> Result<InducedMap> {
    if let Some(slot) = f.commutation_failure() {
        return Err(Error::NotChainMap { slot });
    }
    let target_bases: Vec<CohomologyBasis> = (0..f.target.len()).map(|k| f.target.cohomology_basis(k)).collect();
    let mut matrices = Vec::new();
    let mut injective = Vec::new();
    let mut surjective = Vec::new();
    for k in 0..f.source.len() {
        let source_basis = f.source.cohomology_basis(k);
        let h_src = source_basis.rank();
        let (m, h_tgt) = match f.target_slot(k) {
            Some(t) => {
                let tb = &target_bases[t];
                let columns: Vec<Vec<Scalar>> = source_basis
                    .representatives()
                    .iter()
                    .map(|rep| {
                        tb.coordinates(&f.maps[k].apply(rep))
                            .expect("chain maps send cocycles to cocycles")
                    })
                    .collect();
                (Matrix::from_columns(tb.rank(), &columns), tb.rank())
            }
            None => (Matrix::zeros(0, h_src), 0),
        };
        let r = m.rank();
        injective.push(r == h_src);
        surjective.push(r == h_tgt);
        matrices.push(m);
    }
    Ok(InducedMap {
        matrices,
        injective,
        surjective,
    })
}

/// The integer-graded complex `(A, d)` of an algebra, with its layout.
pub fn de_rham_complex(alg: &GradedAlgebra) -> (Complex, Layout) {
    let layout = Layout::of_algebra(alg, Grading::Integer);
    let complex = Complex::from_operator(&layout, &alg.differential_matrix())
        .expect("the differential of a graded algebra has degree +1");
    (complex, layout)
}

/// Left multiplication by a closed even element `z`, as a chain map of the
/// de Rham complex of `alg` to itself raising degree by `|z|`.
pub fn multiplication_map(alg: &GradedAlgebra, z: &[Scalar], degree: usize) -> Result<ChainMap> {
    let (c, layout) = de_rham_complex(alg);
    ChainMap::from_operator(c.clone(), &layout, c, &layout, degree as i64, &alg.left_multiplication(z))
}
