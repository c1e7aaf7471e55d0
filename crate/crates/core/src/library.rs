//! Formal models of common base spaces: cohomology rings with zero
//! differential.

use std::sync::Arc;

use crate::algebra::{AlgebraBuilder, GradedAlgebra};
use crate::error::{Error, Result};
use crate::scalar::{int, sign};

/// `H(pt) = ℚ`.
pub fn point() -> GradedAlgebra {
    let mut b = AlgebraBuilder::new();
    b.basis("1", 0);
    b.build().expect("point model")
}

/// `H(ℂPⁿ) = ℚ[w]/(w^{n+1})`, `|w| = 2`. Basis `1, w, w^2, ..., w^n`.
pub fn cp(n: usize) -> Result<GradedAlgebra> {
    if n == 0 {
        return Err(Error::InvalidParameter("cp(n) needs n >= 1".into()));
    }
    let mut b = AlgebraBuilder::new();
    for j in 0..=n {
        let name = match j {
            0 => "1".to_string(),
            1 => "w".to_string(),
            _ => format!("w^{j}"),
        };
        b.basis(name, 2 * j);
    }
    for i in 1..=n {
        for j in 1..=n {
            if i + j <= n {
                b.product(i, j, [(i + j, int(1))]);
            } else {
                b.product(i, j, []);
            }
        }
    }
    b.build()
}

/// `H(Sᵐ) = Λ[s]` (or `ℚ[s]/s²` for even `m`), `|s| = m`.
pub fn sphere(m: usize) -> Result<GradedAlgebra> {
    if m == 0 {
        return Err(Error::InvalidParameter("sphere(m) needs m >= 1".into()));
    }
    let mut b = AlgebraBuilder::new();
    b.basis("1", 0);
    let s = b.basis("s", m);
    b.product(s, s, []);
    b.build()
}

/// `H(Tʳ) = Λ[x1, ..., xr]`, basis ordered by word length then
/// lexicographically.
pub fn torus(r: usize) -> Result<GradedAlgebra> {
    if r == 0 {
        return Err(Error::InvalidParameter("torus(r) needs r >= 1".into()));
    }
    let mut subsets: Vec<Vec<usize>> = (0u32..1 << r)
        .map(|mask| (0..r).filter(|i| mask & (1 << i) != 0).collect())
        .collect();
    subsets.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    let mut b = AlgebraBuilder::new();
    for s in &subsets {
        let name = if s.is_empty() {
            "1".to_string()
        } else {
            s.iter().map(|i| format!("x{}", i + 1)).collect()
        };
        b.basis(name, s.len());
    }
    let index_of = |s: &[usize]| subsets.iter().position(|t| t == s).expect("subset");
    for (i, a) in subsets.iter().enumerate() {
        for (j, c) in subsets.iter().enumerate() {
            if a.is_empty() || c.is_empty() {
                continue;
            }
            if a.iter().any(|x| c.contains(x)) {
                b.product(i, j, []);
                continue;
            }
            let word: Vec<usize> = a.iter().chain(c).copied().collect();
            let inversions = (0..word.len())
                .flat_map(|p| (p + 1..word.len()).map(move |q| (p, q)))
                .filter(|&(p, q)| word[p] > word[q])
                .count();
            let mut sorted = word.clone();
            sorted.sort_unstable();
            b.product(i, j, [(index_of(&sorted), sign(inversions))]);
        }
    }
    b.build()
}

/// Graded tensor product, the model of `M × N`.
pub fn product(a: &GradedAlgebra, b: &GradedAlgebra) -> GradedAlgebra {
    GradedAlgebra::tensor(a, b)
}

/// Parses a base description: `point`, `cpN`, `torusR`, `sphereM` or
/// `product:X,Y,...` with each factor one of the former.
pub fn parse_base(spec: &str) -> Result<GradedAlgebra> {
    let spec = spec.trim();
    if let Some(factors) = spec.strip_prefix("product:") {
        let mut parts = factors.split(',').map(str::trim).filter(|s| !s.is_empty());
        let first = parts
            .next()
            .ok_or_else(|| Error::InvalidParameter("product needs at least one factor".into()))?;
        let mut acc = parse_simple(first)?;
        for part in parts {
            acc = product(&acc, &parse_simple(part)?);
        }
        return Ok(acc);
    }
    parse_simple(spec)
}

fn parse_simple(spec: &str) -> Result<GradedAlgebra> {
    let number = |rest: &str| {
        rest.parse::<usize>()
            .map_err(|_| Error::InvalidParameter(format!("bad base description {spec:?}")))
    };
    if spec == "point" {
        Ok(point())
    } else if let Some(rest) = spec.strip_prefix("cp") {
        cp(number(rest)?)
    } else if let Some(rest) = spec.strip_prefix("torus") {
        torus(number(rest)?)
    } else if let Some(rest) = spec.strip_prefix("sphere") {
        sphere(number(rest)?)
    } else {
        Err(Error::InvalidParameter(format!(
            "unknown base {spec:?} (expected point, cpN, torusR, sphereM or product:...)"
        )))
    }
}

/// Shared handle for a base model.
pub fn shared(alg: GradedAlgebra) -> Arc<GradedAlgebra> {
    Arc::new(alg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{algebra_check, Element};

    #[test]
    fn graded_dimensions() {
        assert_eq!(cp(2).unwrap().graded_dims(), vec![1, 0, 1, 0, 1]);
        assert_eq!(torus(2).unwrap().graded_dims(), vec![1, 2, 1]);
        assert_eq!(torus(3).unwrap().graded_dims(), vec![1, 3, 3, 1]);
        assert_eq!(sphere(3).unwrap().graded_dims(), vec![1, 0, 0, 1]);
        assert_eq!(point().graded_dims(), vec![1]);
        let p = product(&cp(1).unwrap(), &cp(1).unwrap());
        assert_eq!(p.graded_dims(), vec![1, 0, 2, 0, 1]);
    }

    #[test]
    fn library_models_are_valid() {
        for alg in [
            point(),
            cp(1).unwrap(),
            cp(3).unwrap(),
            sphere(2).unwrap(),
            sphere(5).unwrap(),
            torus(3).unwrap(),
            product(&torus(2).unwrap(), &cp(2).unwrap()),
            product(&sphere(3).unwrap(), &torus(1).unwrap()),
        ] {
            assert!(algebra_check(&alg).is_empty(), "{:?}", alg.names());
        }
    }

    #[test]
    fn cp2_truncation() {
        let cp2 = shared(cp(2).unwrap());
        let w = Element::named(&cp2, "w").unwrap();
        let w3 = &(&w * &w) * &w;
        assert!(w3.is_zero());
    }

    #[test]
    fn product_of_projective_lines() {
        let p = shared(parse_base("product:cp1,cp1").unwrap());
        assert_eq!(p.names(), ["1", "w'", "w", "w·w'"]);
        let a = Element::named(&p, "w").unwrap();
        let b = Element::named(&p, "w'").unwrap();
        assert!((&a * &a).is_zero());
        assert!((&b * &b).is_zero());
        assert_eq!(&a * &b, &b * &a);
        assert!(!(&a * &b).is_zero());
    }

    #[test]
    fn invalid_parameters() {
        assert!(cp(0).is_err());
        assert!(torus(0).is_err());
        assert!(sphere(0).is_err());
        assert!(parse_base("cpx").is_err());
        assert!(parse_base("klein").is_err());
        assert!(parse_base("product:").is_err());
        assert_eq!(parse_base("torus2").unwrap().dim(), 4);
    }
}
