//! Worked scenarios, each built end to end (construct, dualize, verify,
//! compare dimensions) and checked against expected values.
//!
//! Expectations carry a provenance tag: `PAPER` values are stated results
//! about the scenario, `DERIVED` values are concrete numbers computed once by
//! an independent rank computation and frozen here.

use std::sync::Arc;

use num_traits::Zero;
use serde::Serialize;
use serde_json::json;

use crate::algebra::{Element, GradedAlgebra};
use crate::bundle::{BundleElement, SphereBundleModel, TwistedClass};
use crate::complex::de_rham_complex;
use crate::error::{Error, Result};
use crate::library;
use crate::scalar::{format_scalar, int, Scalar};
use crate::tduality::{check_isomorphism, dualize, middle_map, tau, verify_pair, PairVerification, TDualPair};
use crate::twisted::cup_h_operator;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Provenance {
    #[serde(rename = "PAPER")]
    Paper,
    #[serde(rename = "DERIVED")]
    Derived,
}

impl std::fmt::Display for Provenance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Provenance::Paper => "PAPER",
            Provenance::Derived => "DERIVED",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub provenance: Provenance,
    pub expected: String,
    pub actual: String,
    pub passed: bool,
}

impl Check {
    fn compare<T: std::fmt::Debug + PartialEq>(name: &str, provenance: Provenance, expected: T, actual: T) -> Self {
        Check {
            name: name.into(),
            provenance,
            passed: expected == actual,
            expected: format!("{expected:?}"),
            actual: format!("{actual:?}"),
        }
    }

    fn holds(name: &str, provenance: Provenance, actual: bool) -> Self {
        Self::compare(name, provenance, true, actual)
    }
}

/// One side of a pair, summarized.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SideSummary {
    pub fiber_dim: usize,
    pub euler: String,
    pub twist: String,
    pub twist_degree: usize,
    pub de_rham: Vec<usize>,
    pub twisted: Vec<usize>,
    pub e1: Vec<usize>,
    pub e2: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScenarioReport {
    pub scenario: String,
    pub parameters: serde_json::Map<String, serde_json::Value>,
    pub left: SideSummary,
    pub right: SideSummary,
    pub modulus: usize,
    pub shift: usize,
    pub verification: PairVerification,
    pub isomorphism: bool,
    pub checks: Vec<Check>,
}

impl ScenarioReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Scenario {
    /// `S¹ → S^{2n+1} → ℂPⁿ` with `H = ψ·ωⁿ`.
    Hopf { n: usize },
    /// `M × S^{2n-1}` with `H = 0`; its dual is `M × S^{2k-1}` with `Ĥ = 0`.
    Trivial { n: usize, k: usize, base: String },
    /// A nontrivial `S^{2n-1}`-bundle with `H = 0`, dual to `M × S^{2k-1}`
    /// with `Ĥ = ψ̂·e`.
    ZeroTwist { n: usize, k: usize, base: String },
    /// Circle bundle with Euler class the Kähler form `ω` over a base of
    /// complex dimension `N`, twisted by `ψ·ω^N`.
    Kahler { base: String },
}

pub const SCENARIO_NAMES: [&str; 4] = ["hopf", "trivial", "zero-twist", "kahler"];

impl Scenario {
    /// Resolves a name and optional knobs, filling in defaults.
    pub fn from_name(name: &str, n: Option<usize>, k: Option<usize>, base: Option<&str>) -> Result<Self> {
        let base = |default: &str| base.unwrap_or(default).to_string();
        let reject = |what: &str| Err(Error::InvalidParameter(format!("scenario {name:?} takes no {what}")));
        match name {
            "hopf" => {
                if k.is_some() {
                    return reject("--k");
                }
                Ok(Scenario::Hopf { n: n.unwrap_or(1) })
            }
            "trivial" => Ok(Scenario::Trivial {
                n: n.unwrap_or(1),
                k: k.unwrap_or(1),
                base: base("cp1"),
            }),
            "zero-twist" => Ok(Scenario::ZeroTwist {
                n: n.unwrap_or(1),
                k: k.unwrap_or(1),
                base: base("cp1"),
            }),
            "kahler" => {
                if n.is_some() || k.is_some() {
                    return reject("--n or --k");
                }
                Ok(Scenario::Kahler {
                    base: base("product:cp1,cp1"),
                })
            }
            _ => Err(Error::InvalidParameter(format!(
                "unknown scenario {name:?}, expected one of {}",
                SCENARIO_NAMES.join(", ")
            ))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Scenario::Hopf { .. } => "hopf",
            Scenario::Trivial { .. } => "trivial",
            Scenario::ZeroTwist { .. } => "zero-twist",
            Scenario::Kahler { .. } => "kahler",
        }
    }

    pub fn parameters(&self) -> serde_json::Map<String, serde_json::Value> {
        let value = match self {
            Scenario::Hopf { n } => json!({ "n": n }),
            Scenario::Trivial { n, k, base } | Scenario::ZeroTwist { n, k, base } => {
                json!({ "n": n, "k": k, "base": base })
            }
            Scenario::Kahler { base } => json!({ "base": base }),
        };
        match value {
            serde_json::Value::Object(map) => map,
            _ => unreachable!(),
        }
    }

    /// The starting bundle and twist.
    pub fn left(&self) -> Result<(SphereBundleModel, TwistedClass)> {
        let positive = |name: &str, v: usize| {
            if v == 0 {
                Err(Error::InvalidParameter(format!("{name} must be at least 1")))
            } else {
                Ok(v)
            }
        };
        match self {
            Scenario::Hopf { n } => {
                let n = positive("n", *n)?;
                let base = Arc::new(library::cp(n)?);
                let w = Element::named(&base, "w").expect("cp has w");
                let bundle = SphereBundleModel::new(&base, 1, w.clone())?;
                let twist = TwistedClass::vertical(&bundle, power(&w, n))?;
                Ok((bundle, twist))
            }
            Scenario::Trivial { n, k, base } => {
                let (n, k) = (positive("n", *n)?, positive("k", *k)?);
                let base = Arc::new(library::parse_base(base)?);
                let bundle = SphereBundleModel::trivial(&base, 2 * n - 1)?;
                let twist = TwistedClass::zero(&bundle, 2 * (n + k) - 1)?;
                Ok((bundle, twist))
            }
            Scenario::ZeroTwist { n, k, base } => {
                let (n, k) = (positive("n", *n)?, positive("k", *k)?);
                let base = Arc::new(library::parse_base(base)?);
                let e = degree_sum(&base, 2 * n);
                if e.is_zero() {
                    return Err(Error::InvalidParameter(format!(
                        "the base has no classes of degree {} for a nontrivial Euler class",
                        2 * n
                    )));
                }
                let bundle = SphereBundleModel::new(&base, 2 * n - 1, e)?;
                let twist = TwistedClass::zero(&bundle, 2 * (n + k) - 1)?;
                Ok((bundle, twist))
            }
            Scenario::Kahler { base } => {
                let base = Arc::new(library::parse_base(base)?);
                let top = base.top_degree();
                let omega = degree_sum(&base, 2);
                if top % 2 == 1 || top == 0 || power(&omega, top / 2).is_zero() {
                    return Err(Error::InvalidParameter(
                        "the base needs a degree-2 class ω with ω^N ≠ 0 in top degree 2N".into(),
                    ));
                }
                let bundle = SphereBundleModel::new(&base, 1, omega.clone())?;
                let twist = TwistedClass::vertical(&bundle, power(&omega, top / 2))?;
                Ok((bundle, twist))
            }
        }
    }

    pub fn build(&self) -> Result<TDualPair> {
        let (bundle, twist) = self.left()?;
        dualize(&bundle, &twist, &int(1))
    }

    pub fn run(&self) -> Result<ScenarioReport> {
        let pair = self.build()?;
        let left = summarize(pair.left(), pair.h())?;
        let right = summarize(pair.right(), pair.h_hat())?;
        let verification = verify_pair(&pair);
        let iso = check_isomorphism(&pair)?;
        let mut checks = vec![
            Check::holds("dF = p*H - p̂*Ĥ", Provenance::Paper, verification.differential_identity),
            Check::compare("pairing", Provenance::Paper, "1/1".to_string(), format_scalar(&verification.pairing)),
            Check::holds("τ_F is an isomorphism", Provenance::Paper, iso.is_isomorphism()),
            Check::holds("dims agree under the 2k-1 shift", Provenance::Paper, iso.dims_match_under_shift()),
        ];
        let zeros = |len: usize| vec![0; len];
        match self {
            Scenario::Hopf { n } => {
                let modulus = pair.modulus();
                checks.push(Check::compare("twisted dims of E", Provenance::Paper, zeros(modulus), left.twisted.clone()));
                checks.push(Check::compare("twisted dims of Ê", Provenance::Paper, zeros(modulus), right.twisted.clone()));
                let mut sphere = zeros(2 * n + 2);
                sphere[0] = 1;
                sphere[2 * n + 1] = 1;
                checks.push(Check::compare("de Rham dims of E", Provenance::Derived, sphere, left.de_rham.clone()));
            }
            Scenario::Trivial { n, k, base } => {
                checks.push(Check::holds(
                    "τ_F(a + ψ·b) = ±b + ±ψ̂·a",
                    Provenance::Paper,
                    trivial_formula_holds(&pair)?,
                ));
                if let Some((e, d)) = trivial_fixture(base, *n, *k) {
                    checks.push(Check::compare("twisted dims of E", Provenance::Derived, e, left.twisted.clone()));
                    checks.push(Check::compare("twisted dims of Ê", Provenance::Derived, d, right.twisted.clone()));
                }
            }
            Scenario::ZeroTwist { n, k, base } => {
                checks.push(Check::holds("E₂ = E₁ for (E, 0)", Provenance::Paper, left.e1 == left.e2));
                checks.push(Check::holds("E₂ ≠ E₁ for the dual", Provenance::Paper, right.e1 != right.e2));
                if let Some(f) = zero_twist_fixture(base, *n, *k) {
                    checks.push(Check::compare("twisted dims of E", Provenance::Derived, f.left, left.twisted.clone()));
                    checks.push(Check::compare("twisted dims of Ê", Provenance::Derived, f.right, right.twisted.clone()));
                    if let Some((e1, e2)) = f.right_pages {
                        checks.push(Check::compare("E₁ of the dual", Provenance::Derived, e1, right.e1.clone()));
                        checks.push(Check::compare("E₂ of the dual", Provenance::Derived, e2, right.e2.clone()));
                    }
                }
            }
            Scenario::Kahler { base } => {
                let betti = de_rham_complex(pair.left().base()).0.cohomology_dims();
                checks.push(Check::compare(
                    "twisted dims of E follow primitive cohomology",
                    Provenance::Paper,
                    primitive_pattern(&betti),
                    left.twisted.clone(),
                ));
                if let Some(f) = kahler_fixture(base) {
                    checks.push(Check::compare("de Rham dims of E", Provenance::Derived, f.left_de_rham, left.de_rham.clone()));
                    checks.push(Check::compare("twisted dims of E", Provenance::Derived, f.left_twisted, left.twisted.clone()));
                    checks.push(Check::compare("de Rham dims of Ê", Provenance::Derived, f.right_de_rham, right.de_rham.clone()));
                    checks.push(Check::compare("twisted dims of Ê", Provenance::Derived, f.right_twisted, right.twisted.clone()));
                }
            }
        }
        Ok(ScenarioReport {
            scenario: self.name().into(),
            parameters: self.parameters(),
            left,
            right,
            modulus: pair.modulus(),
            shift: iso.shift,
            verification,
            isomorphism: iso.is_isomorphism(),
            checks,
        })
    }
}

fn power(x: &Element, n: usize) -> Element {
    (0..n).fold(Element::unit(x.algebra()), |acc, _| &acc * x)
}

/// Sum of the basis elements of a given degree.
fn degree_sum(base: &Arc<GradedAlgebra>, degree: usize) -> Element {
    let mut coeffs = vec![Scalar::zero(); base.dim()];
    for i in base.basis_in_degree(degree) {
        coeffs[i] = int(1);
    }
    Element::from_coeffs(base, coeffs)
}

fn summarize(bundle: &SphereBundleModel, h: &TwistedClass) -> Result<SideSummary> {
    let twist = h.to_total(bundle);
    let cup = cup_h_operator(bundle.total(), &twist, h.degree())?;
    let twisted = crate::twisted::TwistedComplex::of_bundle(bundle, h)?.dims();
    Ok(SideSummary {
        fiber_dim: bundle.fiber_dim(),
        euler: bundle.euler().to_string(),
        twist: twist.to_string(),
        twist_degree: h.degree(),
        de_rham: cup.de_rham.clone(),
        twisted,
        e1: cup.e1,
        e2: cup.e2,
    })
}

/// On a trivial pair `F = ψ̂ψ`, so `τ_F` is the middle map with `λ = 1`.
fn trivial_formula_holds(pair: &TDualPair) -> Result<bool> {
    let left = pair.left();
    for j in 0..left.total().dim() {
        let phi: BundleElement = left.split(&Element::basis(left.total(), j));
        if tau(pair, &phi)? != middle_map(pair.right(), &int(1), &phi) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Twisted dimensions predicted from the Betti numbers `b` of a base of
/// complex dimension `N`: `0` in residue `0`, `P^i` for `0 < i ≤ N` and
/// `P^{2N+1-i}` for `N < i < 2N`, with `P^j = b_j - b_{j-2}`.
pub fn primitive_pattern(betti: &[usize]) -> Vec<usize> {
    let big_n = (betti.len() - 1) / 2;
    let b = |j: usize| betti.get(j).copied().unwrap_or(0);
    let p = |j: usize| b(j) - if j >= 2 { b(j - 2) } else { 0 };
    (0..2 * big_n)
        .map(|i| match i {
            0 => 0,
            i if i <= big_n => p(i),
            i => p(2 * big_n + 1 - i),
        })
        .collect()
}

/// Frozen `(E, Ê)` twisted dimensions for trivial pairs.
pub fn trivial_fixture(base: &str, n: usize, k: usize) -> Option<(Vec<usize>, Vec<usize>)> {
    let v = |a: &[usize], b: &[usize]| Some((a.to_vec(), b.to_vec()));
    match (base, n, k) {
        ("cp1", 1, 1) => v(&[2, 2], &[2, 2]),
        ("cp1", 1, 2) | ("cp1", 2, 1) => v(&[1, 1, 1, 1], &[1, 1, 1, 1]),
        ("cp2", 1, 1) => v(&[3, 3], &[3, 3]),
        ("cp2", 1, 2) => v(&[2, 2, 1, 1], &[2, 1, 1, 2]),
        ("cp2", 2, 1) => v(&[2, 1, 1, 2], &[2, 2, 1, 1]),
        ("torus2", 1, 1) => v(&[4, 4], &[4, 4]),
        ("torus2", 1, 2) => v(&[1, 3, 3, 1], &[3, 3, 1, 1]),
        ("torus2", 2, 1) => v(&[3, 3, 1, 1], &[1, 3, 3, 1]),
        _ => None,
    }
}

pub struct ZeroTwistFixture {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    pub right_pages: Option<(Vec<usize>, Vec<usize>)>,
}

pub fn zero_twist_fixture(base: &str, n: usize, k: usize) -> Option<ZeroTwistFixture> {
    match (base, n, k) {
        ("cp1", 1, 1) => Some(ZeroTwistFixture {
            left: vec![1, 1],
            right: vec![1, 1],
            right_pages: Some((vec![2, 2], vec![1, 1])),
        }),
        ("cp1", 1, 2) => Some(ZeroTwistFixture {
            left: vec![1, 0, 0, 1],
            right: vec![0, 0, 1, 1],
            right_pages: None,
        }),
        _ => None,
    }
}

pub struct KahlerFixture {
    pub left_de_rham: Vec<usize>,
    pub left_twisted: Vec<usize>,
    pub right_de_rham: Vec<usize>,
    pub right_twisted: Vec<usize>,
}

pub fn kahler_fixture(base: &str) -> Option<KahlerFixture> {
    match base {
        "product:cp1,cp1" => Some(KahlerFixture {
            left_de_rham: vec![1, 0, 1, 1, 0, 1],
            left_twisted: vec![0, 0, 1, 1],
            right_de_rham: vec![1, 0, 2, 0, 0, 2, 0, 1],
            right_twisted: vec![0, 1, 1, 0],
        }),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_scenarios_pass() {
        for name in SCENARIO_NAMES {
            let s = Scenario::from_name(name, None, None, None).unwrap();
            let report = s.run().unwrap();
            let failed: Vec<_> = report.checks.iter().filter(|c| !c.passed).collect();
            assert!(failed.is_empty(), "{name}: {failed:?}");
        }
    }

    #[test]
    fn primitive_pattern_of_projective_spaces() {
        assert_eq!(primitive_pattern(&[1, 0, 1]), vec![0, 0]);
        assert_eq!(primitive_pattern(&[1, 0, 2, 0, 1]), vec![0, 0, 1, 1]);
        assert_eq!(primitive_pattern(&[1, 0, 1, 0, 1, 0, 1]), vec![0; 6]);
    }

    #[test]
    fn bad_knobs() {
        assert!(Scenario::from_name("hopf", None, Some(2), None).is_err());
        assert!(Scenario::from_name("kahler", Some(1), None, None).is_err());
        assert!(Scenario::from_name("mirror", None, None, None).is_err());
        let s = Scenario::from_name("zero-twist", Some(2), None, Some("cp1")).unwrap();
        assert!(matches!(s.run(), Err(Error::InvalidParameter(_))));
        let s = Scenario::from_name("kahler", None, None, Some("torus3")).unwrap();
        assert!(matches!(s.run(), Err(Error::InvalidParameter(_))));
    }
}
