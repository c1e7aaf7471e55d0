//! Shared fixtures for the integration tests.
//!
//! The rank oracle here deliberately avoids the crate's own elimination: it
//! clears denominators and runs fraction-free (Bareiss) elimination over
//! `BigInt`, on matrices assembled directly from structure constants.
#![allow(dead_code)]

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use spherical_tduality::algebra::{Element, GradedAlgebra};
use spherical_tduality::bundle::{SphereBundleModel, TwistedClass};
use spherical_tduality::library;
use spherical_tduality::scalar::{int, Scalar};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Rank by fraction-free elimination.
pub fn bareiss_rank(rows: &[Vec<Scalar>]) -> usize {
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|row| {
            let lcm = row.iter().fold(BigInt::one(), |acc, x| num_integer::Integer::lcm(&acc, x.denom()));
            row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect()
        })
        .collect();
    let ncols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev = BigInt::one();
    for col in 0..ncols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        for r in rank + 1..m.len() {
            for c in col + 1..ncols {
                let v = (&m[rank][col] * &m[r][c] - &m[r][col] * &m[rank][c]) / &prev;
                m[r][c] = v;
            }
            m[r][col] = BigInt::zero();
        }
        prev = m[rank][col].clone();
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

/// `x ↦ d x + z·x` as a dense matrix, from the structure constants.
pub fn operator_matrix(alg: &GradedAlgebra, z: &[Scalar]) -> Vec<Vec<Scalar>> {
    let n = alg.dim();
    let mut m = vec![vec![Scalar::zero(); n]; n];
    for j in 0..n {
        for (i, c) in alg.differential_of(j) {
            m[*i][j] += c;
        }
        for (k, zk) in z.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (i, c) in alg.product(k, j) {
                m[*i][j] += zk * c;
            }
        }
    }
    m
}

/// Cohomology dimensions of `d + z·` graded mod `modulus` (or by degree when
/// `modulus` is `None`).
pub fn oracle_dims(alg: &GradedAlgebra, z: &[Scalar], modulus: Option<usize>) -> Vec<usize> {
    let m = operator_matrix(alg, z);
    let slots = modulus.unwrap_or(alg.top_degree() + 1);
    let slot_of = |i: usize| alg.degree(i) % slots;
    let columns_in = |s: usize| -> Vec<usize> { (0..alg.dim()).filter(|&i| slot_of(i) == s).collect() };
    let rank_from = |s: usize| {
        let cols = columns_in(s);
        let rows: Vec<Vec<Scalar>> = m.iter().map(|row| cols.iter().map(|&c| row[c].clone()).collect()).collect();
        bareiss_rank(&rows)
    };
    let ranks: Vec<usize> = (0..slots).map(rank_from).collect();
    (0..slots)
        .map(|s| {
            let incoming = match modulus {
                Some(_) => ranks[(s + slots - 1) % slots],
                None if s > 0 => ranks[s - 1],
                None => 0,
            };
            columns_in(s).len() - ranks[s] - incoming
        })
        .collect()
}

pub fn bases() -> Vec<(&'static str, Arc<GradedAlgebra>)> {
    ["point", "cp1", "cp2", "cp3", "torus2", "torus3", "torus4", "sphere2", "product:cp1,cp1", "product:cp1,torus2", "product:cp2,cp1"]
        .into_iter()
        .map(|s| (s, Arc::new(library::parse_base(s).unwrap())))
        .collect()
}

pub fn random_scalar(rng: &mut ChaCha8Rng) -> Scalar {
    let num = rng.gen_range(-3i64..=3);
    let den = rng.gen_range(1i64..=2);
    Scalar::new(num.into(), den.into())
}

/// Random element of the given degree; closed if requested.
pub fn random_element(rng: &mut ChaCha8Rng, alg: &Arc<GradedAlgebra>, degree: usize, closed: bool) -> Element {
    let candidates: Vec<Element> = if closed {
        closed_basis(alg, degree)
    } else {
        alg.basis_in_degree(degree).into_iter().map(|i| Element::basis(alg, i)).collect()
    };
    candidates
        .iter()
        .fold(Element::zero(alg), |acc, b| &acc + &b.scale(&random_scalar(rng)))
}

/// Basis of the closed elements of one degree.
pub fn closed_basis(alg: &Arc<GradedAlgebra>, degree: usize) -> Vec<Element> {
    let idx = alg.basis_in_degree(degree);
    let d = alg.differential_matrix().select(&(0..alg.dim()).collect::<Vec<_>>(), &idx);
    d.kernel()
        .into_iter()
        .map(|v| {
            let mut coeffs = vec![Scalar::zero(); alg.dim()];
            for (k, &i) in idx.iter().enumerate() {
                coeffs[i] = v[k].clone();
            }
            Element::from_coeffs(alg, coeffs)
        })
        .collect()
}

/// Random sphere bundle over a random base; the Euler class may vanish.
pub fn random_bundle(rng: &mut ChaCha8Rng) -> SphereBundleModel {
    let bases = bases();
    let (_, base) = &bases[rng.gen_range(0..bases.len())];
    let fiber = [1, 1, 3, 5][rng.gen_range(0..4)];
    let euler = random_element(rng, base, fiber + 1, true);
    SphereBundleModel::new(base, fiber, euler).unwrap()
}

/// Random closed twist of degree `m + 2k` on a bundle.
pub fn random_twist(rng: &mut ChaCha8Rng, bundle: &SphereBundleModel, k: usize) -> TwistedClass {
    let degree = bundle.fiber_dim() + 2 * k;
    let h = random_element(rng, bundle.total(), degree, true);
    TwistedClass::from_total(bundle, &h, degree).unwrap()
}

/// Bundles and twists used across the acceptance criteria.
pub fn corpus() -> Vec<(String, SphereBundleModel, TwistedClass)> {
    use spherical_tduality::catalog::Scenario;
    let mut out = Vec::new();
    let scenarios = [
        Scenario::Hopf { n: 1 },
        Scenario::Hopf { n: 2 },
        Scenario::Hopf { n: 3 },
        Scenario::Trivial { n: 1, k: 1, base: "cp1".into() },
        Scenario::Trivial { n: 1, k: 2, base: "cp2".into() },
        Scenario::Trivial { n: 2, k: 1, base: "torus2".into() },
        Scenario::ZeroTwist { n: 1, k: 1, base: "cp1".into() },
        Scenario::ZeroTwist { n: 1, k: 2, base: "product:cp1,cp1".into() },
        Scenario::Kahler { base: "product:cp1,cp1".into() },
        Scenario::Kahler { base: "product:cp2,cp1".into() },
    ];
    for s in scenarios {
        let (bundle, twist) = s.left().unwrap();
        out.push((format!("{s:?}"), bundle, twist));
    }
    let t = Arc::new(library::torus(4).unwrap());
    let bundle = SphereBundleModel::trivial(&t, 1).unwrap();
    let twist = TwistedClass::new(
        &bundle,
        Element::named(&t, "x1x2x3").unwrap(),
        Element::named(&t, "x3x4").unwrap(),
        3,
    )
    .unwrap();
    out.push(("torus4 with H0 = x1x2x3".into(), bundle, twist));
    let b = Arc::new(library::parse_base("product:cp1,torus2").unwrap());
    let e = &Element::named(&b, "w").unwrap() + &Element::named(&b, "x1x2").unwrap().scale(&int(2));
    let bundle = SphereBundleModel::new(&b, 1, e).unwrap();
    let h = TwistedClass::vertical(&bundle, Element::named(&b, "w·x1x2").unwrap()).unwrap();
    out.push(("cp1 × torus2, e = w + 2·x1x2".into(), bundle, h));
    out
}
