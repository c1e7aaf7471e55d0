//! Spherical T-duality over a fixed base.
//!
//! A pair `(E, H)`, `(Ê, Ĥ)` of sphere bundles over the same base with fibers
//! `S^{2n-1}` and `S^{2k-1}` is related through the fiber product `E ×_M Ê`,
//! modelled here by the algebra
//!
//! ```text
//! A·1 ⊕ A·ψ ⊕ A·ψ̂ ⊕ A·ψ̂ψ,     dψ = e,  dψ̂ = ê_Ê,  ψ̂ψ = -ψψ̂
//! ```
//!
//! A witness `F` of degree `2(n+k-1)` must satisfy `dF = p*H - p̂*Ĥ`, and its
//! double fiber integral (the `ψ̂ψ·1` coefficient) must be nonzero.
//!
//! The transform `τ_F(φ) = p̂_*(e^F ∧ p*φ)` integrates over the `E` fiber with
//! the fiber form moved to the right, `p̂_*(x ∧ ψ) = x`. With this orientation
//! `τ_F` commutes with the twisted differentials on the nose.

use std::sync::Arc;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::algebra::{Element, GradedAlgebra};
use crate::bundle::{BundleElement, SphereBundleModel, TwistedClass};
use crate::complex::{induced_map_on_cohomology, ChainMap, InducedMap};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{format_scalar, sign, Scalar};
use crate::twisted::TwistedComplex;

/// Name of the angular form on the dual bundle.
pub const DUAL_ANGULAR_NAME: &str = "ψ̂";

/// The model of `E ×_M Ê`.
#[derive(Clone, Debug)]
pub struct CorrespondenceModel {
    left: SphereBundleModel,
    right: SphereBundleModel,
    algebra: Arc<GradedAlgebra>,
}

/// Summands of the correspondence model, in basis order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Block {
    Base = 0,
    Psi = 1,
    PsiHat = 2,
    PsiHatPsi = 3,
}

impl CorrespondenceModel {
    pub fn new(left: &SphereBundleModel, right: &SphereBundleModel) -> Result<Self> {
        if !Arc::ptr_eq(left.base(), right.base()) && left.base() != right.base() {
            return Err(Error::Incompatible("T-duality needs a common base".into()));
        }
        let pulled = left.to_total(&left.pullback(right.euler()));
        let algebra = GradedAlgebra::odd_extension(left.total(), DUAL_ANGULAR_NAME, right.fiber_dim(), pulled.coeffs())?;
        Ok(CorrespondenceModel {
            left: left.clone(),
            right: right.clone(),
            algebra: Arc::new(algebra),
        })
    }

    pub fn left(&self) -> &SphereBundleModel {
        &self.left
    }

    pub fn right(&self) -> &SphereBundleModel {
        &self.right
    }

    pub fn algebra(&self) -> &Arc<GradedAlgebra> {
        &self.algebra
    }

    fn base_dim(&self) -> usize {
        self.left.base().dim()
    }

    fn index(&self, block: Block, i: usize) -> usize {
        block as usize * self.base_dim() + i
    }

    /// Assembles `c₀ + ψ·c₁ + ψ̂·c₂ + ψ̂ψ·c₃`.
    pub fn from_blocks(&self, blocks: [&Element; 4]) -> Element {
        let mut coeffs = Vec::with_capacity(4 * self.base_dim());
        for b in blocks {
            coeffs.extend_from_slice(b.coeffs());
        }
        Element::from_coeffs(&self.algebra, coeffs)
    }

    /// Inverse of [`CorrespondenceModel::from_blocks`].
    pub fn blocks(&self, x: &Element) -> [Element; 4] {
        let n = self.base_dim();
        let base = self.left.base();
        let part = |b: usize| Element::from_coeffs(base, x.coeffs()[b * n..(b + 1) * n].to_vec());
        [part(0), part(1), part(2), part(3)]
    }

    /// `p*: Ω_ψ(E) → Ω(E ×_M Ê)`.
    pub fn pull_left(&self, x: &Element) -> Element {
        let mut coeffs = x.coeffs().to_vec();
        coeffs.resize(4 * self.base_dim(), Scalar::zero());
        Element::from_coeffs(&self.algebra, coeffs)
    }

    /// `p̂*: Ω_ψ̂(Ê) → Ω(E ×_M Ê)`.
    pub fn pull_right(&self, x: &Element) -> Element {
        let parts = self.right.split(x);
        let zero = Element::zero(self.left.base());
        self.from_blocks([&parts.a, &zero, &parts.b, &zero])
    }

    /// `p̂_*`, integration over the `E` fiber with `p̂_*(y ∧ ψ) = y`.
    ///
    /// In base-coefficient normal form `ψ·c = (-1)^{|c|} c·ψ`, so
    /// `ψ·c ↦ (-1)^{|c|} c` and `ψ̂ψ·c ↦ (-1)^{|c|} ψ̂·c`.
    pub fn push_right(&self, x: &Element) -> Element {
        let n = self.base_dim();
        let base = self.left.base();
        let mut coeffs = vec![Scalar::zero(); 2 * n];
        for i in 0..n {
            let s = sign(base.degree(i));
            coeffs[i] = &s * x.coeff(self.index(Block::Psi, i));
            coeffs[n + i] = &s * x.coeff(self.index(Block::PsiHatPsi, i));
        }
        Element::from_coeffs(self.right.total(), coeffs)
    }

    /// `(π∘p)_*`: the `ψ̂ψ` block, as a base element.
    pub fn double_integral(&self, x: &Element) -> Element {
        self.blocks(x)[Block::PsiHatPsi as usize].clone()
    }

    /// `ψ̂ψ`.
    pub fn pairing_form(&self) -> Element {
        Element::basis(&self.algebra, self.index(Block::PsiHatPsi, self.left.base().unit_index()))
    }

    /// Degree of T-duality witnesses, `2(n + k - 1)`.
    pub fn witness_degree(&self) -> usize {
        self.left.fiber_dim() + self.right.fiber_dim()
    }

    /// Full matrix (columns: basis of `Ω_ψ(E)`, rows: basis of `Ω_ψ̂(Ê)`) of
    /// `φ ↦ p̂_*(e^F ∧ p*φ)` for any even `F` of positive degree.
    pub fn tau_matrix(&self, f: &Element) -> Result<Matrix> {
        if !f.same_algebra(&Element::zero(&self.algebra)) {
            return Err(Error::AlgebraMismatch);
        }
        let exp = f.exp()?;
        let columns: Vec<Vec<Scalar>> = (0..self.left.total().dim())
            .map(|j| {
                let phi = Element::basis(self.left.total(), j);
                self.push_right(&(&exp * &self.pull_left(&phi))).into_coeffs()
            })
            .collect();
        Ok(Matrix::from_columns(self.right.total().dim(), &columns))
    }
}

/// `F = F₃ + ψ·F₂ + ψ̂·F₁ + λ·ψ̂ψ` with `F₁, F₂, F₃` in the base.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorrespondenceForm {
    pub f3: Element,
    pub f2: Element,
    pub f1: Element,
    pub lambda: Scalar,
}

impl CorrespondenceForm {
    /// `λ·ψ̂ψ`.
    pub fn pure(base: &Arc<GradedAlgebra>, lambda: Scalar) -> Self {
        let z = Element::zero(base);
        CorrespondenceForm {
            f3: z.clone(),
            f2: z.clone(),
            f1: z,
            lambda,
        }
    }

    pub fn to_element(&self, model: &CorrespondenceModel) -> Element {
        let base = model.left.base();
        let top = Element::unit(base).scale(&self.lambda);
        model.from_blocks([&self.f3, &self.f2, &self.f1, &top])
    }

    /// Reads a form off the correspondence model. The `ψ̂ψ` block must be a
    /// constant, which is forced by degree over a connected base.
    pub fn from_element(model: &CorrespondenceModel, x: &Element) -> Result<Self> {
        let [f3, f2, f1, top] = model.blocks(x);
        let base = model.left.base();
        let unit = base.unit_index();
        if top.coeffs().iter().enumerate().any(|(i, c)| i != unit && !c.is_zero()) {
            return Err(Error::Witness("the ψ̂ψ component is not a constant".into()));
        }
        Ok(CorrespondenceForm {
            f3,
            f2,
            f1,
            lambda: top.coeff(unit).clone(),
        })
    }

    /// Checks the forced degrees `|F₃| = 2(n+k-1)`, `|F₂| = 2k-1`,
    /// `|F₁| = 2n-1`.
    pub fn degree_failures(&self, model: &CorrespondenceModel) -> Vec<String> {
        let total = model.witness_degree();
        let mut out = Vec::new();
        for (name, x, deg) in [
            ("F3", &self.f3, total),
            ("F2", &self.f2, model.right.fiber_dim()),
            ("F1", &self.f1, model.left.fiber_dim()),
        ] {
            if !x.is_homogeneous_of(deg) {
                out.push(format!("{name} must have degree {deg}, found {:?}", x.degrees_present()));
            }
        }
        out
    }
}

/// Two sphere bundles with twists and a witness form.
#[derive(Clone, Debug)]
pub struct TDualPair {
    correspondence: CorrespondenceModel,
    h: TwistedClass,
    h_hat: TwistedClass,
    witness: CorrespondenceForm,
}

/// Outcome of [`verify_pair`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairVerification {
    pub differential_identity: bool,
    pub degrees_match: bool,
    #[serde(serialize_with = "serialize_scalar")]
    pub pairing: Scalar,
    pub nondegenerate: bool,
    pub unimodular: bool,
    pub failures: Vec<String>,
}

fn serialize_scalar<S: serde::Serializer>(x: &Scalar, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_scalar(x))
}

impl PairVerification {
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }
}

impl TDualPair {
    /// Validates every pair invariant; see [`verify_pair`].
    pub fn new(
        left: &SphereBundleModel,
        h: TwistedClass,
        right: &SphereBundleModel,
        h_hat: TwistedClass,
        witness: CorrespondenceForm,
    ) -> Result<Self> {
        let pair = Self::unchecked(left, h, right, h_hat, witness)?;
        let report = verify_pair(&pair);
        if !report.is_valid() {
            return Err(Error::Witness(report.failures.join("; ")));
        }
        Ok(pair)
    }

    /// Assembles a pair without checking the witness, e.g. to report on it
    /// with [`verify_pair`].
    pub fn unchecked(
        left: &SphereBundleModel,
        h: TwistedClass,
        right: &SphereBundleModel,
        h_hat: TwistedClass,
        witness: CorrespondenceForm,
    ) -> Result<Self> {
        Ok(TDualPair {
            correspondence: CorrespondenceModel::new(left, right)?,
            h,
            h_hat,
            witness,
        })
    }

    /// Swaps the witness without checking anything. Used to inspect
    /// deliberately broken pairs.
    pub fn with_witness_unchecked(&self, witness: CorrespondenceForm) -> Self {
        TDualPair {
            witness,
            ..self.clone()
        }
    }

    pub fn correspondence(&self) -> &CorrespondenceModel {
        &self.correspondence
    }

    pub fn left(&self) -> &SphereBundleModel {
        &self.correspondence.left
    }

    pub fn right(&self) -> &SphereBundleModel {
        &self.correspondence.right
    }

    pub fn h(&self) -> &TwistedClass {
        &self.h
    }

    pub fn h_hat(&self) -> &TwistedClass {
        &self.h_hat
    }

    pub fn witness(&self) -> &CorrespondenceForm {
        &self.witness
    }

    pub fn witness_element(&self) -> Element {
        self.witness.to_element(&self.correspondence)
    }

    /// `(π∘p)_* F`.
    pub fn pairing(&self) -> &Scalar {
        &self.witness.lambda
    }

    pub fn is_unimodular(&self) -> bool {
        self.witness.lambda.is_one()
    }

    /// Twisting modulus `2(n + k - 1)`.
    pub fn modulus(&self) -> usize {
        self.h.modulus()
    }

    /// Degree shift `2k - 1` of `τ_F`.
    pub fn shift(&self) -> usize {
        self.right().fiber_dim()
    }

    pub fn left_twisted(&self) -> Result<TwistedComplex> {
        TwistedComplex::of_bundle(self.left(), &self.h)
    }

    pub fn right_twisted(&self) -> Result<TwistedComplex> {
        TwistedComplex::of_bundle(self.right(), &self.h_hat)
    }
}

/// Constructs the T-dual of `(E, H)` for a nonzero scale `λ`: the
/// `S^{2k-1}`-bundle with Euler representative `λê`, twist
/// `Ĥ = H₀ + (1/λ) ψ̂·e` and witness `F = (1/λ) ψ̂ψ`.
///
/// That `λê` is the Euler class of an actual bundle is the caller's
/// assumption; rational models cannot see integrality.
pub fn dualize(bundle: &SphereBundleModel, h: &TwistedClass, lambda: &Scalar) -> Result<TDualPair> {
    if lambda.is_zero() {
        return Err(Error::ZeroLambda);
    }
    // re-validate: closure condition and degrees
    let h = TwistedClass::new(bundle, h.h0().clone(), h.ehat().clone(), h.degree())?;
    let k = h.dual_half_rank(bundle);
    let base = bundle.base();
    let right = SphereBundleModel::with_angular_name(base, 2 * k - 1, h.ehat().scale(lambda), DUAL_ANGULAR_NAME)?;
    let inv = lambda.recip();
    let h_hat = TwistedClass::new(&right, h.h0().clone(), bundle.euler().scale(&inv), h.degree())?;
    TDualPair::new(bundle, h, &right, h_hat, CorrespondenceForm::pure(base, inv))
}

/// Checks `dF = p*H - p̂*Ĥ`, degrees, and computes the pairing `(π∘p)_* F`.
pub fn verify_pair(pair: &TDualPair) -> PairVerification {
    let model = &pair.correspondence;
    let mut failures = Vec::new();

    let n = pair.left().half_rank();
    let k = pair.right().half_rank();
    let expected = 2 * (n + k) - 1;
    let degrees_match = pair.h.degree() == expected && pair.h_hat.degree() == expected;
    if !degrees_match {
        failures.push(format!(
            "twists must both have degree 2(n+k)-1 = {expected}, found {} and {}",
            pair.h.degree(),
            pair.h_hat.degree()
        ));
    }
    let degree_failures = pair.witness.degree_failures(model);
    let degrees_match = degrees_match && degree_failures.is_empty();
    failures.extend(degree_failures);

    let f = pair.witness.to_element(model);
    let lhs = f.d();
    let rhs = &model.pull_left(&pair.h.to_total(pair.left())) - &model.pull_right(&pair.h_hat.to_total(pair.right()));
    let differential_identity = lhs == rhs;
    if !differential_identity {
        failures.push("dF ≠ p*H - p̂*Ĥ".into());
    }

    let pairing = pair.witness.lambda.clone();
    let nondegenerate = !pairing.is_zero();
    if !nondegenerate {
        failures.push("the witness integrates to 0 over the fibers".into());
    }
    PairVerification {
        differential_identity,
        degrees_match,
        unimodular: pairing.is_one(),
        pairing,
        nondegenerate,
        failures,
    }
}

/// Gauge shift: if `H' = H + dB` and `Ĥ' = Ĥ + dB̂`, then
/// `F + p*B - p̂*B̂` witnesses `(E, H')` and `(Ê, Ĥ')`.
pub fn gauge_shift_pair(pair: &TDualPair, b: &Element, b_hat: &Element) -> Result<TDualPair> {
    let deg = pair.correspondence.witness_degree();
    for (name, x) in [("B", b), ("B̂", b_hat)] {
        if !x.is_homogeneous_of(deg) {
            return Err(Error::Degree {
                what: name.into(),
                expected: deg,
                found: format!("{:?}", x.degrees_present()),
            });
        }
    }
    let left = pair.left();
    let right = pair.right();
    let h = TwistedClass::from_total(left, &(&pair.h.to_total(left) + &b.d()), pair.h.degree())?;
    let h_hat = TwistedClass::from_total(right, &(&pair.h_hat.to_total(right) + &b_hat.d()), pair.h_hat.degree())?;
    let model = &pair.correspondence;
    let f = &(&pair.witness_element() + &model.pull_left(b)) - &model.pull_right(b_hat);
    let witness = CorrespondenceForm::from_element(model, &f)?;
    TDualPair::new(left, h, right, h_hat, witness)
}

/// `τ_F(φ) = p̂_*(e^F ∧ p*φ)`.
pub fn tau(pair: &TDualPair, phi: &BundleElement) -> Result<BundleElement> {
    let model = &pair.correspondence;
    let exp = pair.witness_element().exp()?;
    let image = model.push_right(&(&exp * &model.pull_left(&pair.left().to_total(phi))));
    Ok(pair.right().split(&image))
}

/// `τ_F` as a chain map `(Ω_ψ(E), d^H) → (Ω_ψ̂(Ê), d^Ĥ)` of degree `2k - 1`
/// modulo `2(n + k - 1)`.
pub fn tau_as_chain_map(pair: &TDualPair) -> Result<ChainMap> {
    let source = pair.left_twisted()?;
    let target = pair.right_twisted()?;
    let op = pair.correspondence.tau_matrix(&pair.witness_element())?;
    ChainMap::from_operator(
        source.complex().clone(),
        source.layout(),
        target.complex().clone(),
        target.layout(),
        pair.shift() as i64,
        &op,
    )
}

/// Twisted dimensions on both sides and the map `τ_F` induces between them.
#[derive(Clone, Debug)]
pub struct IsomorphismCheck {
    pub left_dims: Vec<usize>,
    pub right_dims: Vec<usize>,
    pub shift: usize,
    pub induced: InducedMap,
}

impl IsomorphismCheck {
    pub fn is_isomorphism(&self) -> bool {
        self.induced.is_isomorphism()
    }

    /// `dim H^{[i]}(E, H) = dim H^{[i + 2k - 1]}(Ê, Ĥ)` for every residue.
    pub fn dims_match_under_shift(&self) -> bool {
        let n = self.left_dims.len();
        n == self.right_dims.len() && (0..n).all(|i| self.left_dims[i] == self.right_dims[(i + self.shift) % n])
    }
}

pub fn check_isomorphism(pair: &TDualPair) -> Result<IsomorphismCheck> {
    let f = tau_as_chain_map(pair)?;
    Ok(IsomorphismCheck {
        left_dims: f.source().cohomology_dims(),
        right_dims: f.target().cohomology_dims(),
        shift: pair.shift() % pair.modulus(),
        induced: induced_map_on_cohomology(&f)?,
    })
}

/// `τ_{F'} = e^{ψ̂·F₁} ∘ τ' ∘ e^{ψ·F₂ + F₃}` with middle map
/// `τ' = p̂_* e^{λψ̂ψ} p*`. All three are full-basis matrices.
#[derive(Clone, Debug)]
pub struct TauFactorization {
    pub left: Matrix,
    pub middle: Matrix,
    pub right: Matrix,
    pub composite: Matrix,
}

/// Explicit action of the middle map:
/// `φ₀ + ψ·φ₁ ↦ P(φ₁) + λ ψ̂·P(φ₀)`, where `P` multiplies each degree-`j`
/// component by `(-1)^j`.
pub fn middle_map(right: &SphereBundleModel, lambda: &Scalar, phi: &BundleElement) -> BundleElement {
    let parity = |x: &Element| {
        let base = x.algebra();
        let coeffs = x.coeffs().iter().enumerate().map(|(i, c)| sign(base.degree(i)) * c).collect();
        Element::from_coeffs(base, coeffs)
    };
    let _ = right;
    BundleElement::new(parity(&phi.b), parity(&phi.a).scale(lambda))
}

pub fn tau_middle_decomposition(pair: &TDualPair, form: &CorrespondenceForm) -> Result<TauFactorization> {
    if form.lambda.is_zero() {
        return Err(Error::ZeroLambda);
    }
    let model = &pair.correspondence;
    let left_bundle = pair.left();
    let right_bundle = pair.right();
    let base = left_bundle.base();
    let zero = Element::zero(base);

    let outer_left = right_bundle
        .to_total(&BundleElement::new(zero.clone(), form.f1.clone()))
        .exp()?;
    let outer_right = left_bundle
        .to_total(&BundleElement::new(form.f3.clone(), form.f2.clone()))
        .exp()?;
    let left = right_bundle.total().left_multiplication(outer_left.coeffs());
    let right = left_bundle.total().left_multiplication(outer_right.coeffs());
    let middle_form = CorrespondenceForm::pure(base, form.lambda.clone()).to_element(model);
    let middle = model.tau_matrix(&middle_form)?;

    for j in 0..left_bundle.total().dim() {
        let phi = left_bundle.split(&Element::basis(left_bundle.total(), j));
        let expected = right_bundle.to_total(&middle_map(right_bundle, &form.lambda, &phi));
        if middle.column(j) != expected.coeffs() {
            return Err(Error::Incompatible(format!(
                "middle map disagrees with its explicit formula on basis element {j}"
            )));
        }
    }
    let composite = left.mul(&middle).mul(&right);
    Ok(TauFactorization {
        left,
        middle,
        right,
        composite,
    })
}

/// Replaces a candidate witness by one with the same pairing as the pair's
/// own witness. A mismatch is only repairable when both Euler
/// representatives vanish, by adding `μ·ψ̂ψ`.
pub fn normalize_witness(pair: &TDualPair, candidate: &CorrespondenceForm) -> Result<CorrespondenceForm> {
    let model = &pair.correspondence;
    let expected_d = &model.pull_left(&pair.h.to_total(pair.left())) - &model.pull_right(&pair.h_hat.to_total(pair.right()));
    if candidate.to_element(model).d() != expected_d {
        return Err(Error::Witness("candidate does not satisfy dF = p*H - p̂*Ĥ".into()));
    }
    let mu = pair.pairing() - &candidate.lambda;
    if mu.is_zero() {
        return Ok(candidate.clone());
    }
    if pair.left().euler().is_zero() && pair.right().euler().is_zero() {
        return Ok(CorrespondenceForm {
            lambda: &candidate.lambda + &mu,
            ..candidate.clone()
        });
    }
    Err(Error::Witness(
        "pairings differ although an Euler representative is nonzero".into(),
    ))
}
