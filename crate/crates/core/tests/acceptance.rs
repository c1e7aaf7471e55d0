//! Acceptance criteria. Every comparison is an exact identity over ℚ; the
//! only numeric bounds are wall-clock limits.
//!
//! Runs without the libtest harness so that each criterion prints one line.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_traits::Zero;
use rand::Rng;

use common::{corpus, oracle_dims, random_bundle, random_element, random_twist, rng};
use spherical_tduality::algebra::{algebra_check, Element};
use spherical_tduality::bundle::{BundleElement, SphereBundleModel, TwistedClass};
use spherical_tduality::catalog::{primitive_pattern, Scenario};
use spherical_tduality::complex::{de_rham_complex, induced_map_on_cohomology, ChainMap};
use spherical_tduality::library;
use spherical_tduality::scalar::{int, ratio, sign, Scalar};
use spherical_tduality::tduality::{check_isomorphism, dualize, gauge_shift_pair, tau, verify_pair, TDualPair};
use spherical_tduality::twisted::{cup_h_operator, gauge_map, TwistedComplex};

type Outcome = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn within(limit: Duration, label: &str, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    f()?;
    let took = start.elapsed();
    ensure!(took <= limit, "{label} took {took:?}, limit {limit:?}");
    Ok(())
}

fn twisted(bundle: &SphereBundleModel, h: &TwistedClass) -> Vec<usize> {
    TwistedComplex::of_bundle(bundle, h).unwrap().dims()
}

fn parity(x: &Element) -> Element {
    let alg = x.algebra();
    Element::from_coeffs(alg, x.coeffs().iter().enumerate().map(|(i, c)| sign(alg.degree(i)) * c).collect())
}

fn hopf_vanishing() -> Outcome {
    for n in 1..=3 {
        within(Duration::from_secs(1), &format!("n = {n}"), || {
            let pair = Scenario::Hopf { n }.build().map_err(|e| e.to_string())?;
            let zeros = vec![0; 2 * n];
            ensure!(twisted(pair.left(), pair.h()) == zeros, "n = {n}: E side not zero");
            ensure!(twisted(pair.right(), pair.h_hat()) == zeros, "n = {n}: dual side not zero");
            Ok(())
        })?;
    }
    Ok(())
}

fn trivial_pairs() -> Outcome {
    for base in ["cp1", "cp2", "torus2"] {
        for (n, k) in [(1, 1), (1, 2), (2, 1)] {
            within(Duration::from_secs(1), &format!("{base} ({n},{k})"), || {
                let pair = Scenario::Trivial { n, k, base: base.into() }.build().map_err(|e| e.to_string())?;
                let left = pair.left();
                // τ(a + σ·b) = (-1)^{|b|} b + (-1)^{|a|} σ̂·a on every basis element
                for j in 0..left.total().dim() {
                    let phi = left.split(&Element::basis(left.total(), j));
                    let image = tau(&pair, &phi).map_err(|e| e.to_string())?;
                    let expected = BundleElement::new(parity(&phi.b), parity(&phi.a));
                    ensure!(image == expected, "{base} ({n},{k}): τ wrong on basis element {j}");
                }
                let check = check_isomorphism(&pair).map_err(|e| e.to_string())?;
                ensure!(check.is_isomorphism(), "{base} ({n},{k}): not an isomorphism");
                ensure!(check.shift == 2 * k - 1, "{base} ({n},{k}): shift {}", check.shift);
                ensure!(check.dims_match_under_shift(), "{base} ({n},{k}): dims {:?} vs {:?}", check.left_dims, check.right_dims);
                Ok(())
            })?;
        }
    }
    Ok(())
}

fn existence_identities() -> Outcome {
    for (name, bundle, h) in corpus() {
        for lambda in [int(1), int(2), ratio(1, 3)] {
            within(Duration::from_secs(1), &name, || {
                let pair = dualize(&bundle, &h, &lambda).map_err(|e| e.to_string())?;
                let v = verify_pair(&pair);
                ensure!(v.differential_identity, "{name}, λ = {lambda}: dF ≠ p*H - p̂*Ĥ");
                ensure!(v.pairing == lambda.recip(), "{name}, λ = {lambda}: pairing {}", v.pairing);
                ensure!(!v.pairing.is_zero(), "{name}: degenerate");
                Ok(())
            })?;
        }
    }
    Ok(())
}

fn chain_map_pairs() -> Vec<(String, TDualPair)> {
    let mut pairs: Vec<(String, TDualPair)> = corpus()
        .into_iter()
        .map(|(name, bundle, h)| (name, dualize(&bundle, &h, &int(1)).unwrap()))
        .collect();
    let mut r = rng(41);
    let originals = pairs.clone();
    for (name, pair) in originals {
        let deg = pair.correspondence().witness_degree();
        let b = random_element(&mut r, pair.left().total(), deg, false);
        let b_hat = random_element(&mut r, pair.right().total(), deg, false);
        pairs.push((format!("{name} + gauge shift"), gauge_shift_pair(&pair, &b, &b_hat).unwrap()));
    }
    pairs
}

fn chain_map_and_isomorphism() -> Outcome {
    within(Duration::from_secs(5), "corpus", || {
        let pairs = chain_map_pairs();
        ensure!(pairs.len() >= 12, "corpus has only {} pairs", pairs.len());
        for (name, pair) in &pairs {
            let t = pair.correspondence().tau_matrix(&pair.witness_element()).map_err(|e| e.to_string())?;
            let d_left = pair.left_twisted().unwrap().operator();
            let d_right = pair.right_twisted().unwrap().operator();
            ensure!(d_right.mul(&t) == t.mul(&d_left), "{name}: d^Ĥ∘τ ≠ τ∘d^H");
            let check = check_isomorphism(pair).map_err(|e| e.to_string())?;
            ensure!(check.is_isomorphism(), "{name}: induced map not invertible");
        }
        Ok(())
    })
}

fn gauge_invariance() -> Outcome {
    let bundles: Vec<SphereBundleModel> = corpus().into_iter().map(|(_, b, _)| b).collect();
    let mut r = rng(5);
    for case in 0..20 {
        let bundle = &bundles[r.gen_range(0..bundles.len())];
        let k = r.gen_range(1..=2);
        let h = random_twist(&mut r, bundle, k);
        let total = bundle.total();
        let b = random_element(&mut r, total, h.modulus(), false);
        let twist = h.to_total(bundle);
        let source = TwistedComplex::build(total, &twist, h.degree()).unwrap();
        let target = TwistedComplex::build(total, &(&twist - &b.d()), h.degree()).unwrap();
        ensure!(source.dims() == target.dims(), "case {case}: dims changed");
        let f = gauge_map(&source, &target, &b).map_err(|e| format!("case {case}: {e}"))?;
        let g = gauge_map(&target, &source, &b.scale(&int(-1))).map_err(|e| format!("case {case}: {e}"))?;
        ensure!(g.compose(&f).unwrap() == ChainMap::identity(source.complex()), "case {case}: e^-B∘e^B ≠ 1");
        ensure!(
            induced_map_on_cohomology(&f).unwrap().is_isomorphism(),
            "case {case}: e^B not a quasi-isomorphism"
        );
    }
    Ok(())
}

fn kahler_pattern() -> Outcome {
    let pair = Scenario::Kahler { base: "product:cp1,cp1".into() }.build().map_err(|e| e.to_string())?;
    let left = twisted(pair.left(), pair.h());
    ensure!(left == vec![0, 0, 1, 1], "E side {left:?}");
    let right = twisted(pair.right(), pair.h_hat());
    ensure!(right == vec![0, 1, 1, 0], "dual side {right:?}");
    let h_total = pair.h().to_total(pair.left());
    let oracle = oracle_dims(pair.left().total(), h_total.coeffs(), Some(pair.modulus()));
    ensure!(oracle == left, "rank oracle disagrees: {oracle:?}");
    let betti = de_rham_complex(pair.left().base()).0.cohomology_dims();
    ensure!(primitive_pattern(&betti) == left, "primitive pattern {:?}", primitive_pattern(&betti));
    ensure!(left[0] == 0, "residue 0 must vanish");
    let de_rham = pair.left().de_rham_dims();
    ensure!((1..4).all(|i| left[i] <= de_rham[i] + de_rham.get(i + 4).copied().unwrap_or(0)), "exceeds H(E)");
    Ok(())
}

fn spectral_contrast() -> Outcome {
    for (base, k) in [("cp1", 1), ("cp1", 2), ("cp2", 1), ("product:cp1,cp1", 1)] {
        let pair = Scenario::ZeroTwist { n: 1, k, base: base.into() }.build().map_err(|e| e.to_string())?;
        let pages = |bundle: &SphereBundleModel, h: &TwistedClass| {
            let cup = cup_h_operator(bundle.total(), &h.to_total(bundle), h.degree()).unwrap();
            (cup.e1, cup.e2)
        };
        let (l1, l2) = pages(pair.left(), pair.h());
        let (r1, r2) = pages(pair.right(), pair.h_hat());
        ensure!(l1 == l2, "{base}, k = {k}: E side E₂ {l2:?} ≠ E₁ {l1:?}");
        ensure!(r1 != r2, "{base}, k = {k}: dual side E₂ = E₁ = {r1:?}");
        if (base, k) == ("cp1", 1) {
            ensure!((r1.clone(), r2.clone()) == (vec![2, 2], vec![1, 1]), "dual pages {r1:?}, {r2:?}");
        }
    }
    Ok(())
}

fn property_suite() -> Outcome {
    within(Duration::from_secs(30), "property suite", || {
        let mut models: Vec<(String, SphereBundleModel, TwistedClass)> = corpus();
        let mut r = rng(99);
        for i in 0..30 {
            let bundle = random_bundle(&mut r);
            let k = r.gen_range(1..=2);
            let h = random_twist(&mut r, &bundle, k);
            models.push((format!("random {i}"), bundle, h));
        }
        for (name, bundle, h) in &models {
            let pair = dualize(bundle, h, &int(1)).unwrap();
            for (side, b, t) in [("E", pair.left(), pair.h()), ("Ê", pair.right(), pair.h_hat())] {
                let alg = b.total();
                ensure!(alg.dim() <= 200, "{name} {side}: too large");
                ensure!(algebra_check(alg).is_empty(), "{name} {side}: axiom violated");
                let d = alg.differential_matrix();
                ensure!(d.mul(&d).is_zero(), "{name} {side}: d² ≠ 0");
                let op = TwistedComplex::of_bundle(b, t).unwrap().operator();
                ensure!(op.mul(&op).is_zero(), "{name} {side}: (d^H)² ≠ 0");
                let zero = vec![Scalar::zero(); alg.dim()];
                ensure!(b.de_rham_dims() == oracle_dims(alg, &zero, None), "{name} {side}: de Rham vs oracle");
                let twist = t.to_total(b);
                ensure!(
                    twisted(b, t) == oracle_dims(alg, twist.coeffs(), Some(t.modulus())),
                    "{name} {side}: twisted vs oracle"
                );
                // projection formula on a spread of base and total elements
                let base = b.base();
                for deg in 0..=base.top_degree() {
                    let a = random_element(&mut r, base, deg, false);
                    let x = random_element(&mut r, alg, (deg + 1) % (alg.top_degree() + 1), false);
                    let pa = b.to_total(&b.pullback(&a));
                    let push = |y: &Element| b.fiber_integrate(&b.split(y));
                    ensure!(push(&(&x * &pa)) == &push(&x) * &a, "{name} {side}: π_*(x·π*a) ≠ π_*x·a");
                }
            }
        }
        let point = std::sync::Arc::new(library::point());
        ensure!(algebra_check(&point).is_empty(), "point model");
        Ok(())
    })
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("Hopf vanishing, n = 1, 2, 3", hopf_vanishing),
        ("trivial pairs: τ formula and shifted dims", trivial_pairs),
        ("dualize: dF = p*H - p̂*Ĥ and pairing 1/λ", existence_identities),
        ("τ is a chain map inducing isomorphisms", chain_map_and_isomorphism),
        ("gauge invariance over 20 random (H, B)", gauge_invariance),
        ("Kähler circle bundle over cp1 × cp1", kahler_pattern),
        ("E₂ = E₁ for (E, 0), E₂ ≠ E₁ for its dual", spectral_contrast),
        ("property suite against the rank oracle", property_suite),
    ];
    let mut failed = 0;
    for (i, (label, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(msg)
        });
        let took = start.elapsed().as_secs_f64();
        match outcome {
            Ok(()) => println!("criterion {}: PASS  {label}  (exact, {took:.3} s)", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {}: FAIL  {label}  (exact, {took:.3} s): {msg}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
