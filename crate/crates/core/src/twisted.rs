//! Twisted complexes `(A, d^H = d + H∧)` for a closed form `H` of odd degree
//! `2m + 1`, graded modulo `2m`.
//!
//! Besides the twisted cohomology itself this module provides the gauge
//! isomorphisms `e^B: (A, d^H) → (A, d^{H'})` for `H - H' = dB`, and the
//! second page of the spectral sequence running from de Rham cohomology to
//! twisted cohomology, i.e. the cohomology of `[H]∪` acting on `H(A)`.

use std::sync::Arc;

use num_traits::Zero;

use crate::algebra::{Element, GradedAlgebra};
use crate::bundle::{SphereBundleModel, TwistedClass};
use crate::complex::{de_rham_complex, ChainMap, Complex, Grading, Layout};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

#[derive(Clone, Debug)]
pub struct TwistedComplex {
    algebra: Arc<GradedAlgebra>,
    twist: Element,
    twist_degree: usize,
    layout: Layout,
    complex: Complex,
}

impl TwistedComplex {
    /// Fails unless `twist` is closed and homogeneous of odd degree
    /// `twist_degree ≥ 3`. Zero is accepted for any such degree.
    pub fn build(algebra: &Arc<GradedAlgebra>, twist: &Element, twist_degree: usize) -> Result<Self> {
        if twist_degree.is_multiple_of(2) || twist_degree < 3 {
            return Err(Error::InvalidParameter(format!(
                "twist must have odd degree at least 3, got {twist_degree}"
            )));
        }
        if !twist.same_algebra(&Element::zero(algebra)) {
            return Err(Error::AlgebraMismatch);
        }
        if !twist.is_homogeneous_of(twist_degree) {
            return Err(Error::Degree {
                what: "H".into(),
                expected: twist_degree,
                found: format!("{:?}", twist.degrees_present()),
            });
        }
        if !twist.is_closed() {
            return Err(Error::NotClosed("H".into()));
        }
        let layout = Layout::of_algebra(algebra, Grading::Cyclic(twist_degree - 1));
        let op = algebra
            .differential_matrix()
            .add(&algebra.left_multiplication(twist.coeffs()));
        let complex = Complex::from_operator(&layout, &op)?;
        Ok(TwistedComplex {
            algebra: Arc::clone(algebra),
            twist: twist.clone(),
            twist_degree,
            layout,
            complex,
        })
    }

    pub fn of_bundle(bundle: &SphereBundleModel, h: &TwistedClass) -> Result<Self> {
        Self::build(bundle.total(), &h.to_total(bundle), h.degree())
    }

    pub fn algebra(&self) -> &Arc<GradedAlgebra> {
        &self.algebra
    }

    pub fn twist(&self) -> &Element {
        &self.twist
    }

    pub fn twist_degree(&self) -> usize {
        self.twist_degree
    }

    pub fn modulus(&self) -> usize {
        self.twist_degree - 1
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn complex(&self) -> &Complex {
        &self.complex
    }

    /// `dim H^{[r]}_{d^H}` for `r = 0, ..., 2m - 1`.
    pub fn dims(&self) -> Vec<usize> {
        self.complex.cohomology_dims()
    }

    /// Full matrix of `d^H` on the algebra basis.
    pub fn operator(&self) -> Matrix {
        self.algebra
            .differential_matrix()
            .add(&self.algebra.left_multiplication(self.twist.coeffs()))
    }
}

pub fn build_twisted(algebra: &Arc<GradedAlgebra>, twist: &Element, twist_degree: usize) -> Result<TwistedComplex> {
    TwistedComplex::build(algebra, twist, twist_degree)
}

pub fn twisted_dims(t: &TwistedComplex) -> Vec<usize> {
    t.dims()
}

/// Sums integer-graded dimensions over residue classes mod `modulus`.
pub fn fold(dims: &[usize], modulus: usize) -> Vec<usize> {
    let mut out = vec![0; modulus];
    for (j, d) in dims.iter().enumerate() {
        out[j % modulus] += d;
    }
    out
}

/// `x ↦ e^B ∧ x` from `(A, d^H)` to `(A, d^{H'})`, requiring `H - H' = dB`.
///
/// `B` may be inhomogeneous but every component must sit in a positive
/// degree divisible by the modulus, so that `e^B` preserves residues.
pub fn gauge_map(source: &TwistedComplex, target: &TwistedComplex, b: &Element) -> Result<ChainMap> {
    if !source.algebra.as_ref().eq(&target.algebra) || source.twist_degree != target.twist_degree {
        return Err(Error::Incompatible("gauge maps relate twists on one algebra".into()));
    }
    if !b.same_algebra(&source.twist) {
        return Err(Error::AlgebraMismatch);
    }
    let modulus = source.modulus();
    if let Some(&d) = b.degrees_present().iter().find(|&&d| d == 0 || d % modulus != 0) {
        return Err(Error::InvalidParameter(format!(
            "gauge form has a component in degree {d}, expected positive multiples of {modulus}"
        )));
    }
    if &source.twist - &target.twist != b.d() {
        return Err(Error::GaugeCondition);
    }
    let exp = b.exp()?;
    ChainMap::from_operator(
        source.complex.clone(),
        &source.layout,
        target.complex.clone(),
        &target.layout,
        0,
        &source.algebra.left_multiplication(exp.coeffs()),
    )
}

/// `[H]∪` on de Rham cohomology and the two spectral pages it determines.
#[derive(Clone, Debug)]
pub struct CupOperator {
    /// `dim H^j` for every degree `j`.
    pub de_rham: Vec<usize>,
    /// `[H]∪: H^j → H^{j + |H|}` in the chosen cohomology bases, indexed by `j`.
    pub matrices: Vec<Matrix>,
    /// `H(A)` folded mod `2m` with `[H]∪` as differential.
    pub page: Complex,
    /// First page: folded de Rham dimensions.
    pub e1: Vec<usize>,
    /// Second page: cohomology of `[H]∪`.
    pub e2: Vec<usize>,
}

impl CupOperator {
    pub fn degenerates_at_first_page(&self) -> bool {
        self.e1 == self.e2
    }

    pub fn is_zero(&self) -> bool {
        self.matrices.iter().all(Matrix::is_zero)
    }
}

pub fn cup_h_operator(algebra: &Arc<GradedAlgebra>, twist: &Element, twist_degree: usize) -> Result<CupOperator> {
    // validates closedness and degree
    let twisted = TwistedComplex::build(algebra, twist, twist_degree)?;
    let modulus = twisted.modulus();
    let (complex, layout) = de_rham_complex(algebra);
    let bases: Vec<_> = (0..complex.len()).map(|j| complex.cohomology_basis(j)).collect();
    let de_rham: Vec<usize> = bases.iter().map(|b| b.rank()).collect();
    let lmul = algebra.left_multiplication(twist.coeffs());
    let n = algebra.dim();
    let mut matrices = Vec::with_capacity(complex.len());
    for j in 0..complex.len() {
        let t = j + twist_degree;
        let rows = if t < complex.len() { de_rham[t] } else { 0 };
        let columns: Vec<Vec<Scalar>> = bases[j]
            .representatives()
            .iter()
            .map(|rep| {
                if t >= complex.len() {
                    return Vec::new();
                }
                let image = lmul.apply(&layout.embed(j, rep, n));
                bases[t]
                    .coordinates(&layout.restrict(t, &image))
                    .expect("H∧ maps cocycles to cocycles")
            })
            .collect();
        matrices.push(if rows == 0 {
            Matrix::zeros(0, columns.len())
        } else {
            Matrix::from_columns(rows, &columns)
        });
    }

    // Residue r of the page is ⊕_{j ≡ r} H^j, ordered by ascending j.
    let mut offsets = vec![0usize; de_rham.len()];
    let mut e1 = vec![0usize; modulus];
    for (j, &h) in de_rham.iter().enumerate() {
        offsets[j] = e1[j % modulus];
        e1[j % modulus] += h;
    }
    let mut diffs: Vec<Matrix> = (0..modulus)
        .map(|r| Matrix::zeros(e1[(r + 1) % modulus], e1[r]))
        .collect();
    for (j, m) in matrices.iter().enumerate() {
        let t = j + twist_degree;
        if t >= de_rham.len() {
            continue;
        }
        let r = j % modulus;
        for row in 0..m.nrows() {
            for col in 0..m.ncols() {
                let x = &m[(row, col)];
                if !x.is_zero() {
                    diffs[r][(offsets[t] + row, offsets[j] + col)] = x.clone();
                }
            }
        }
    }
    let page = Complex::new(Grading::Cyclic(modulus), e1.clone(), diffs)?;
    let e2 = page.cohomology_dims();
    Ok(CupOperator {
        de_rham,
        matrices,
        page,
        e1,
        e2,
    })
}
