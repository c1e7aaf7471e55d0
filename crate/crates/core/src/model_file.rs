//! JSON model files.
//!
//! Two document kinds share one layout for the base algebra:
//!
//! ```json
//! {
//!   "kind": "bundle",
//!   "base": {
//!     "basis": [{ "name": "1", "degree": 0 }, { "name": "w", "degree": 2 }],
//!     "products": [{ "left": "w", "right": "w", "value": {} }],
//!     "differential": []
//!   },
//!   "bundle": { "fiber_dim": 1, "euler": { "w": "1/1" } },
//!   "twist": { "degree": 3, "h0": {}, "ehat": { "w": "1/1" } },
//!   "lambda": "1/1"
//! }
//! ```
//!
//! Linear combinations map basis names to rationals written `"p/q"`. The
//! first basis element is the unit; its products are implied. Products and
//! differentials that are not listed are zero. A `"pair"` document carries
//! `left`/`h`, `right`/`h_hat` and a `witness` with components `f3`, `f2`,
//! `f1` and the constant `pairing`.
//!
//! Syntax and shape problems are [`Error::Parse`]; files that are well formed
//! but describe invalid objects give [`Error::Validation`].

use std::path::Path;
use std::sync::Arc;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::algebra::{algebra_check, AlgebraBuilder, Element, GradedAlgebra};
use crate::bundle::{SphereBundleModel, TwistedClass};
use crate::error::{Error, Result};
use crate::scalar::{format_scalar, parse_scalar, Scalar};
use crate::tduality::{CorrespondenceForm, TDualPair, DUAL_ANGULAR_NAME};

/// `{name: "p/q"}`, in basis order when emitted.
pub type Combination = Map<String, Value>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisEntry {
    pub name: String,
    pub degree: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductEntry {
    pub left: String,
    pub right: String,
    pub value: Combination,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DifferentialEntry {
    pub of: String,
    pub value: Combination,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BaseSpec {
    pub basis: Vec<BasisEntry>,
    #[serde(default)]
    pub products: Vec<ProductEntry>,
    #[serde(default)]
    pub differential: Vec<DifferentialEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleSpec {
    pub fiber_dim: usize,
    pub euler: Combination,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwistSpec {
    pub degree: usize,
    #[serde(default)]
    pub h0: Combination,
    pub ehat: Combination,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessSpec {
    #[serde(default)]
    pub f3: Combination,
    #[serde(default)]
    pub f2: Combination,
    #[serde(default)]
    pub f1: Combination,
    pub pairing: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleFile {
    pub kind: String,
    pub base: BaseSpec,
    pub bundle: BundleSpec,
    pub twist: TwistSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairFile {
    pub kind: String,
    pub base: BaseSpec,
    pub left: BundleSpec,
    pub h: TwistSpec,
    pub right: BundleSpec,
    pub h_hat: TwistSpec,
    pub witness: WitnessSpec,
}

/// A bundle with a twist, as read from a `"bundle"` document.
#[derive(Clone, Debug)]
pub struct BundleModel {
    pub bundle: SphereBundleModel,
    pub twist: TwistedClass,
    pub lambda: Option<Scalar>,
}

#[derive(Clone, Debug)]
pub enum Document {
    Bundle(BundleModel),
    Pair(TDualPair),
}

pub fn read_document(path: &Path) -> Result<Document> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    parse_document(&text)
}

pub fn parse_document(text: &str) -> Result<Document> {
    let value: Value = serde_json::from_str(text).map_err(json_error)?;
    let kind = value
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| Error::Parse("missing string field `kind`".into()))?;
    match kind {
        "bundle" => {
            let file: BundleFile = serde_json::from_str(text).map_err(json_error)?;
            file.load().map(Document::Bundle)
        }
        "pair" => {
            let file: PairFile = serde_json::from_str(text).map_err(json_error)?;
            file.load().map(Document::Pair)
        }
        other => Err(Error::Parse(format!("unknown kind {other:?}, expected \"bundle\" or \"pair\""))),
    }
}

pub fn parse_bundle(text: &str) -> Result<BundleModel> {
    match parse_document(text)? {
        Document::Bundle(m) => Ok(m),
        Document::Pair(_) => Err(Error::Parse("expected a bundle document, found a pair".into())),
    }
}

pub fn parse_pair(text: &str) -> Result<TDualPair> {
    match parse_document(text)? {
        Document::Pair(p) => Ok(p),
        Document::Bundle(_) => Err(Error::Parse("expected a pair document, found a bundle".into())),
    }
}

fn json_error(e: serde_json::Error) -> Error {
    Error::Parse(e.to_string())
}

fn validation(field: &str, e: Error) -> Error {
    match e {
        Error::Parse(_) | Error::Validation(_) => e,
        other => Error::Validation(format!("{field}: {other}")),
    }
}

impl BaseSpec {
    pub fn load(&self) -> Result<Arc<GradedAlgebra>> {
        let mut b = AlgebraBuilder::new();
        for entry in &self.basis {
            b.basis(entry.name.clone(), entry.degree);
        }
        let names: Vec<&str> = self.basis.iter().map(|e| e.name.as_str()).collect();
        let lookup = |field: &str, name: &str| {
            names
                .iter()
                .position(|n| *n == name)
                .ok_or_else(|| Error::Validation(format!("{field}: unknown basis element {name:?}")))
        };
        for (i, p) in self.products.iter().enumerate() {
            let field = format!("base.products[{i}]");
            let l = lookup(&field, &p.left)?;
            let r = lookup(&field, &p.right)?;
            let v = sparse(&format!("{field}.value"), &names, &p.value)?;
            b.product(l, r, v);
        }
        for (i, d) in self.differential.iter().enumerate() {
            let field = format!("base.differential[{i}]");
            let x = lookup(&field, &d.of)?;
            let v = sparse(&format!("{field}.value"), &names, &d.value)?;
            b.differential(x, v);
        }
        let alg = b.build().map_err(|e| validation("base", e))?;
        let violations = algebra_check(&alg);
        if let Some(v) = violations.first() {
            return Err(Error::Validation(format!(
                "base: {} violation(s), first {:?} at {:?}",
                violations.len(),
                v.axiom,
                v.witness
            )));
        }
        Ok(Arc::new(alg))
    }

    pub fn of(alg: &GradedAlgebra) -> Self {
        let n = alg.dim();
        let unit = alg.unit_index();
        let names = alg.names();
        let mut products = Vec::new();
        for i in (0..n).filter(|&i| i != unit) {
            for j in (0..n).filter(|&j| j != unit) {
                let v = alg.product(i, j);
                if !v.is_empty() {
                    products.push(ProductEntry {
                        left: names[i].clone(),
                        right: names[j].clone(),
                        value: combination_of_sparse(names, v),
                    });
                }
            }
        }
        let differential = (0..n)
            .filter(|&i| !alg.differential_of(i).is_empty())
            .map(|i| DifferentialEntry {
                of: names[i].clone(),
                value: combination_of_sparse(names, alg.differential_of(i)),
            })
            .collect();
        BaseSpec {
            basis: (0..n)
                .map(|i| BasisEntry {
                    name: names[i].clone(),
                    degree: alg.degree(i),
                })
                .collect(),
            products,
            differential,
        }
    }
}

fn sparse(field: &str, names: &[&str], c: &Combination) -> Result<Vec<(usize, Scalar)>> {
    let mut out = Vec::new();
    for (name, value) in c {
        let text = value
            .as_str()
            .ok_or_else(|| Error::Parse(format!("{field}[{name:?}]: expected a \"p/q\" string")))?;
        let x = parse_scalar(text).map_err(|e| Error::Parse(format!("{field}[{name:?}]: {e}")))?;
        let i = names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::Validation(format!("{field}: unknown basis element {name:?}")))?;
        out.push((i, x));
    }
    Ok(out)
}

fn element(field: &str, base: &Arc<GradedAlgebra>, c: &Combination) -> Result<Element> {
    let names: Vec<&str> = base.names().iter().map(String::as_str).collect();
    Ok(Element::from_sparse(base, &sparse(field, &names, c)?))
}

fn combination_of_sparse(names: &[String], v: &[(usize, Scalar)]) -> Combination {
    let mut sorted: Vec<&(usize, Scalar)> = v.iter().filter(|(_, c)| !c.is_zero()).collect();
    sorted.sort_by_key(|(i, _)| *i);
    sorted
        .into_iter()
        .map(|(i, c)| (names[*i].clone(), Value::String(format_scalar(c))))
        .collect()
}

/// Nonzero coefficients in basis order.
pub fn combination(x: &Element) -> Combination {
    let names = x.algebra().names();
    x.coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (names[i].clone(), Value::String(format_scalar(c))))
        .collect()
}

fn parse_rational(field: &str, text: &str) -> Result<Scalar> {
    parse_scalar(text).map_err(|e| Error::Parse(format!("{field}: {e}")))
}

fn load_bundle(field: &str, base: &Arc<GradedAlgebra>, spec: &BundleSpec, angular: &str) -> Result<SphereBundleModel> {
    let euler = element(&format!("{field}.euler"), base, &spec.euler)?;
    SphereBundleModel::with_angular_name(base, spec.fiber_dim, euler, angular).map_err(|e| validation(field, e))
}

fn load_twist(field: &str, bundle: &SphereBundleModel, spec: &TwistSpec) -> Result<TwistedClass> {
    let base = bundle.base();
    let h0 = element(&format!("{field}.h0"), base, &spec.h0)?;
    let ehat = element(&format!("{field}.ehat"), base, &spec.ehat)?;
    TwistedClass::new(bundle, h0, ehat, spec.degree).map_err(|e| validation(field, e))
}

fn check_kind(kind: &str, expected: &str) -> Result<()> {
    if kind == expected {
        Ok(())
    } else {
        Err(Error::Parse(format!("kind must be {expected:?}, found {kind:?}")))
    }
}

impl BundleFile {
    pub fn load(&self) -> Result<BundleModel> {
        check_kind(&self.kind, "bundle")?;
        let base = self.base.load()?;
        let bundle = load_bundle("bundle", &base, &self.bundle, "ψ")?;
        let twist = load_twist("twist", &bundle, &self.twist)?;
        let lambda = self.lambda.as_deref().map(|t| parse_rational("lambda", t)).transpose()?;
        if lambda.as_ref().is_some_and(Zero::is_zero) {
            return Err(Error::Validation("lambda: must be nonzero".into()));
        }
        Ok(BundleModel { bundle, twist, lambda })
    }

    pub fn of(model: &BundleModel) -> Self {
        BundleFile {
            kind: "bundle".into(),
            base: BaseSpec::of(model.bundle.base()),
            bundle: bundle_spec(&model.bundle),
            twist: twist_spec(&model.twist),
            lambda: model.lambda.as_ref().map(format_scalar),
        }
    }
}

fn bundle_spec(b: &SphereBundleModel) -> BundleSpec {
    BundleSpec {
        fiber_dim: b.fiber_dim(),
        euler: combination(b.euler()),
    }
}

fn twist_spec(h: &TwistedClass) -> TwistSpec {
    TwistSpec {
        degree: h.degree(),
        h0: combination(h.h0()),
        ehat: combination(h.ehat()),
    }
}

impl PairFile {
    /// Loads without checking the witness equation; see
    /// [`crate::tduality::verify_pair`].
    pub fn load(&self) -> Result<TDualPair> {
        check_kind(&self.kind, "pair")?;
        let base = self.base.load()?;
        let left = load_bundle("left", &base, &self.left, "ψ")?;
        let h = load_twist("h", &left, &self.h)?;
        let right = load_bundle("right", &base, &self.right, DUAL_ANGULAR_NAME)?;
        let h_hat = load_twist("h_hat", &right, &self.h_hat)?;
        let witness = CorrespondenceForm {
            f3: element("witness.f3", &base, &self.witness.f3)?,
            f2: element("witness.f2", &base, &self.witness.f2)?,
            f1: element("witness.f1", &base, &self.witness.f1)?,
            lambda: parse_rational("witness.pairing", &self.witness.pairing)?,
        };
        TDualPair::unchecked(&left, h, &right, h_hat, witness).map_err(|e| validation("pair", e))
    }

    pub fn of(pair: &TDualPair) -> Self {
        let w = pair.witness();
        PairFile {
            kind: "pair".into(),
            base: BaseSpec::of(pair.left().base()),
            left: bundle_spec(pair.left()),
            h: twist_spec(pair.h()),
            right: bundle_spec(pair.right()),
            h_hat: twist_spec(pair.h_hat()),
            witness: WitnessSpec {
                f3: combination(&w.f3),
                f2: combination(&w.f2),
                f1: combination(&w.f1),
                pairing: format_scalar(&w.lambda),
            },
        }
    }
}

fn to_text<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("model files serialize");
    s.push('\n');
    s
}

/// Canonical text of a bundle document.
pub fn emit_bundle(model: &BundleModel) -> String {
    to_text(&BundleFile::of(model))
}

/// Canonical text of a pair document.
pub fn emit_pair(pair: &TDualPair) -> String {
    to_text(&PairFile::of(pair))
}

pub fn emit_document(doc: &Document) -> String {
    match doc {
        Document::Bundle(m) => emit_bundle(m),
        Document::Pair(p) => emit_pair(p),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::library;
    use crate::scalar::int;

    fn hopf() -> BundleModel {
        let b = Arc::new(library::cp(1).unwrap());
        let w = Element::named(&b, "w").unwrap();
        let bundle = SphereBundleModel::new(&b, 1, w.clone()).unwrap();
        let twist = TwistedClass::vertical(&bundle, w).unwrap();
        BundleModel {
            bundle,
            twist,
            lambda: None,
        }
    }

    #[test]
    fn bundle_round_trip() {
        let text = emit_bundle(&hopf());
        let back = parse_bundle(&text).unwrap();
        assert_eq!(back.bundle.base().as_ref(), hopf().bundle.base().as_ref());
        assert_eq!(emit_bundle(&back), text);
    }

    #[test]
    fn pair_round_trip() {
        let m = hopf();
        let pair = crate::tduality::dualize(&m.bundle, &m.twist, &int(2)).unwrap();
        let text = emit_pair(&pair);
        assert!(text.contains("\"pairing\": \"1/2\""));
        let back = parse_pair(&text).unwrap();
        assert_eq!(emit_pair(&back), text);
        assert!(crate::tduality::verify_pair(&back).is_valid());
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_document(""), Err(Error::Parse(_))));
        assert!(matches!(parse_document("{}"), Err(Error::Parse(_))));
        assert!(matches!(parse_document("{\"kind\": \"torus\"}"), Err(Error::Parse(_))));
        let text = emit_bundle(&hopf()).replace("\"w\": \"1/1\"", "\"w\": \"1/0\"");
        assert!(matches!(parse_document(&text), Err(Error::Parse(_))));
    }

    #[test]
    fn validation_errors() {
        let text = emit_bundle(&hopf());
        let odd_euler = text.replacen("\"fiber_dim\": 1", "\"fiber_dim\": 3", 1);
        let err = parse_document(&odd_euler).unwrap_err();
        assert!(matches!(&err, Error::Validation(msg) if msg.contains("bundle") && msg.contains("degree 4")), "{err}");
        let unknown = text.replacen("\"euler\": {\n      \"w\"", "\"euler\": {\n      \"v\"", 1);
        assert!(matches!(parse_document(&unknown), Err(Error::Validation(_))));
    }
}
