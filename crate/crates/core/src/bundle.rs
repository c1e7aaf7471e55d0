//! Finite models of oriented odd-dimensional sphere bundles.
//!
//! For a bundle `π: E → M` with fiber `S^m`, `m = 2n - 1`, and a global
//! angular form `ψ` with `dψ = π*e`, the forms `π*a + ψ∧π*b` make up a
//! subcomplex of `Ω(E)` computing `H(E)`. Over a finite model `A` of `M` this
//! is the algebra `A ⊕ ψ·A` with `ψ² = 0` and
//!
//! ```text
//! d(a + ψ·b) = da + e·b - ψ·db
//! ```
//!
//! Elements are kept in the normal form `a + ψ·b` with base coefficients on
//! the right of `ψ`.

use std::sync::Arc;

use crate::algebra::{Element, GradedAlgebra};
use crate::complex::{de_rham_complex, induced_map_on_cohomology, multiplication_map, Complex};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SphereBundleModel {
    base: Arc<GradedAlgebra>,
    fiber_dim: usize,
    euler: Element,
    total: Arc<GradedAlgebra>,
}

/// `a + ψ·b` with `a, b` in the base.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BundleElement {
    pub a: Element,
    pub b: Element,
}

impl BundleElement {
    pub fn new(a: Element, b: Element) -> Self {
        BundleElement { a, b }
    }
}

impl SphereBundleModel {
    /// Bundle with angular form named `ψ`.
    pub fn new(base: &Arc<GradedAlgebra>, fiber_dim: usize, euler: Element) -> Result<Self> {
        Self::with_angular_name(base, fiber_dim, euler, "ψ")
    }

    pub fn with_angular_name(base: &Arc<GradedAlgebra>, fiber_dim: usize, euler: Element, name: &str) -> Result<Self> {
        if fiber_dim.is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!(
                "fiber dimension must be odd, got {fiber_dim}"
            )));
        }
        if !Arc::ptr_eq(euler.algebra(), base) && **euler.algebra() != **base {
            return Err(Error::AlgebraMismatch);
        }
        if !euler.is_homogeneous_of(fiber_dim + 1) {
            return Err(Error::Degree {
                what: "Euler class".into(),
                expected: fiber_dim + 1,
                found: format!("{:?}", euler.degrees_present()),
            });
        }
        if !euler.is_closed() {
            return Err(Error::NotClosed("Euler class".into()));
        }
        let total = Arc::new(GradedAlgebra::odd_extension(base, name, fiber_dim, euler.coeffs())?);
        Ok(SphereBundleModel {
            base: Arc::clone(base),
            fiber_dim,
            euler,
            total,
        })
    }

    /// `M × S^m`.
    pub fn trivial(base: &Arc<GradedAlgebra>, fiber_dim: usize) -> Result<Self> {
        Self::new(base, fiber_dim, Element::zero(base))
    }

    pub fn base(&self) -> &Arc<GradedAlgebra> {
        &self.base
    }

    pub fn fiber_dim(&self) -> usize {
        self.fiber_dim
    }

    /// `n` with `m = 2n - 1`.
    pub fn half_rank(&self) -> usize {
        self.fiber_dim.div_ceil(2)
    }

    pub fn euler(&self) -> &Element {
        &self.euler
    }

    /// The algebra `A ⊕ ψ·A`.
    pub fn total(&self) -> &Arc<GradedAlgebra> {
        &self.total
    }

    pub fn angular_form(&self) -> Element {
        Element::basis(&self.total, self.base.dim() + self.base.unit_index())
    }

    /// The integer-graded complex `(A ⊕ ψ·A, d)`.
    pub fn model_complex(&self) -> Complex {
        de_rham_complex(&self.total).0
    }

    pub fn de_rham_dims(&self) -> Vec<usize> {
        self.model_complex().cohomology_dims()
    }

    pub fn to_total(&self, x: &BundleElement) -> Element {
        let n = self.base.dim();
        let mut coeffs = x.a.coeffs().to_vec();
        coeffs.extend_from_slice(x.b.coeffs());
        debug_assert_eq!(coeffs.len(), 2 * n);
        Element::from_coeffs(&self.total, coeffs)
    }

    pub fn split(&self, x: &Element) -> BundleElement {
        let n = self.base.dim();
        let c = x.coeffs();
        BundleElement {
            a: Element::from_coeffs(&self.base, c[..n].to_vec()),
            b: Element::from_coeffs(&self.base, c[n..].to_vec()),
        }
    }

    /// `a ↦ a + ψ·0`.
    pub fn pullback(&self, a: &Element) -> BundleElement {
        BundleElement {
            a: a.clone(),
            b: Element::zero(&self.base),
        }
    }

    /// `π_*(a + ψ·b) = b`.
    pub fn fiber_integrate(&self, x: &BundleElement) -> Element {
        x.b.clone()
    }

    /// Ranks of `∪e: H^j(M) → H^{j+m+1}(M)` for every `j`.
    pub fn euler_cup_ranks(&self) -> Vec<usize> {
        let cup = multiplication_map(&self.base, self.euler.coeffs(), self.fiber_dim + 1)
            .expect("a closed even element acts by a chain map");
        let induced = induced_map_on_cohomology(&cup).expect("chain map");
        induced.matrices.iter().map(|m| m.rank()).collect()
    }

    /// Betti numbers of `E` predicted by the Gysin sequence from those of the
    /// base and the ranks of `∪e`:
    /// `dim H^j(E) = dim ker(∪e on H^{j-m}) + dim coker(∪e into H^j)`.
    pub fn gysin_dims(&self) -> Vec<usize> {
        let base_h = de_rham_complex(&self.base).0.cohomology_dims();
        let ranks = self.euler_cup_ranks();
        let m = self.fiber_dim;
        let top = self.total.top_degree();
        (0..=top)
            .map(|j| {
                let kernel = if j >= m && j - m < base_h.len() {
                    base_h[j - m] - ranks[j - m]
                } else {
                    0
                };
                let cokernel = if j < base_h.len() {
                    let incoming = if j > m { ranks[j - m - 1] } else { 0 };
                    base_h[j] - incoming
                } else {
                    0
                };
                kernel + cokernel
            })
            .collect()
    }
}

/// A closed form `H = π*H₀ + ψ∧π*ê` of odd degree `2(n+k) - 1` on a bundle.
///
/// Closedness is `dê = 0` and `dH₀ + e·ê = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedClass {
    h0: Element,
    ehat: Element,
    degree: usize,
}

impl TwistedClass {
    pub fn new(bundle: &SphereBundleModel, h0: Element, ehat: Element, degree: usize) -> Result<Self> {
        let m = bundle.fiber_dim;
        if degree.is_multiple_of(2) || degree < m + 2 {
            return Err(Error::InvalidParameter(format!(
                "twist degree must be odd and at least {} for fiber dimension {m}, got {degree}",
                m + 2
            )));
        }
        for x in [&h0, &ehat] {
            if !x.same_algebra(&bundle.euler) {
                return Err(Error::AlgebraMismatch);
            }
        }
        if !h0.is_homogeneous_of(degree) {
            return Err(Error::Degree {
                what: "H0".into(),
                expected: degree,
                found: format!("{:?}", h0.degrees_present()),
            });
        }
        if !ehat.is_homogeneous_of(degree - m) {
            return Err(Error::Degree {
                what: "ê".into(),
                expected: degree - m,
                found: format!("{:?}", ehat.degrees_present()),
            });
        }
        if !ehat.is_closed() {
            return Err(Error::NotClosed("ê".into()));
        }
        if !(&h0.d() + &(&bundle.euler * &ehat)).is_zero() {
            return Err(Error::ClosureCondition);
        }
        Ok(TwistedClass { h0, ehat, degree })
    }

    pub fn zero(bundle: &SphereBundleModel, degree: usize) -> Result<Self> {
        let z = Element::zero(&bundle.base);
        Self::new(bundle, z.clone(), z, degree)
    }

    /// `H = ψ·ê`.
    pub fn vertical(bundle: &SphereBundleModel, ehat: Element) -> Result<Self> {
        let degree = ehat
            .homogeneous_degree()
            .ok_or_else(|| Error::InvalidParameter("ê must be nonzero and homogeneous".into()))?
            + bundle.fiber_dim;
        Self::new(bundle, Element::zero(&bundle.base), ehat, degree)
    }

    /// Splits an element of the bundle model into `(H₀, ê)`.
    pub fn from_total(bundle: &SphereBundleModel, h: &Element, degree: usize) -> Result<Self> {
        if !h.same_algebra(&Element::zero(&bundle.total)) {
            return Err(Error::AlgebraMismatch);
        }
        let parts = bundle.split(h);
        Self::new(bundle, parts.a, parts.b, degree)
    }

    pub fn h0(&self) -> &Element {
        &self.h0
    }

    pub fn ehat(&self) -> &Element {
        &self.ehat
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// `k` with `deg H = 2(n + k) - 1`.
    pub fn dual_half_rank(&self, bundle: &SphereBundleModel) -> usize {
        self.degree.div_ceil(2) - bundle.half_rank()
    }

    /// Twisting modulus `2(n + k - 1) = deg H - 1`.
    pub fn modulus(&self) -> usize {
        self.degree - 1
    }

    pub fn to_total(&self, bundle: &SphereBundleModel) -> Element {
        bundle.to_total(&BundleElement::new(self.h0.clone(), self.ehat.clone()))
    }
}

/// `π_*[H] = ê`, the Euler class of any T-dual.
pub fn euler_of_dual(bundle: &SphereBundleModel, h: &TwistedClass) -> Element {
    bundle.fiber_integrate(&BundleElement::new(h.h0.clone(), h.ehat.clone()))
}
