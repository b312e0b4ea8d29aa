//! The entropy property suite as plain checks over generated distributions,
//! shared by the proptest target and the acceptance runner.

use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

use entropia::entropy::{
    product_distribution, renyi_entropy, shannon_entropy, Distribution, RenyiOrder,
};

pub const CASES: u32 = 1000;
pub const TOL: f64 = 1e-9;
pub const EXACT_TOL: f64 = 1e-12;

/// Non-negative weights with at least one positive entry, including exact
/// zeros.
pub fn weights(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(prop_oneof![1 => Just(0.0), 4 => 0.0..1.0f64], 1..=max_len)
        .prop_filter("some mass", |w| w.iter().sum::<f64>() > 1e-6)
}

pub fn dist(max_len: usize) -> impl Strategy<Value = Distribution> {
    weights(max_len).prop_map(|w| Distribution::from_weights(&w).expect("positive mass"))
}

fn close(a: f64, b: f64, tol: f64, what: &str) -> Result<(), TestCaseError> {
    prop_assert!((a - b).abs() <= tol, "{what}: {a} vs {b}");
    Ok(())
}

pub fn non_negativity(d: &Distribution) -> Result<(), TestCaseError> {
    prop_assert!(shannon_entropy(d) >= 0.0);
    Ok(())
}

/// `perm` is a permutation of `0..d.len()`.
pub fn symmetry(d: &Distribution, perm: &[usize]) -> Result<(), TestCaseError> {
    let p = d.probabilities();
    let q = Distribution::new(perm.iter().map(|&i| p[i]).collect()).expect("permuted");
    close(shannon_entropy(d), shannon_entropy(&q), TOL, "symmetry")
}

/// A distribution paired with a random permutation of its indices.
pub fn dist_and_perm(max_len: usize) -> impl Strategy<Value = (Distribution, Vec<usize>)> {
    dist(max_len).prop_flat_map(|d| {
        let n = d.len();
        (Just(d), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
    })
}

pub fn normality() -> Result<(), TestCaseError> {
    let d = Distribution::new(vec![0.5, 0.5]).unwrap();
    close(shannon_entropy(&d), 1.0, EXACT_TOL, "normality")
}

pub fn expansibility(d: &Distribution, at: usize) -> Result<(), TestCaseError> {
    let mut p = d.probabilities().to_vec();
    p.insert(at % (p.len() + 1), 0.0);
    let e = Distribution::new(p).unwrap();
    close(
        shannon_entropy(d),
        shannon_entropy(&e),
        TOL,
        "expansibility",
    )
}

pub fn decisivity(len: usize, at: usize) -> Result<(), TestCaseError> {
    let mut p = vec![0.0; len];
    p[at % len] = 1.0;
    close(
        shannon_entropy(&Distribution::new(p).unwrap()),
        0.0,
        EXACT_TOL,
        "decisivity",
    )
}

pub fn additivity(a: &Distribution, b: &Distribution) -> Result<(), TestCaseError> {
    let ab = product_distribution(a, b);
    close(
        shannon_entropy(&ab),
        shannon_entropy(a) + shannon_entropy(b),
        TOL,
        "additivity",
    )
}

/// Perturbs the product of `a` and `b`, renormalizes, and compares against
/// the joint's own marginals.
pub fn subadditivity(
    a: &Distribution,
    b: &Distribution,
    noise: &[f64],
) -> Result<(), TestCaseError> {
    let (n, m) = (a.len(), b.len());
    let joint: Vec<f64> = product_distribution(a, b)
        .probabilities()
        .iter()
        .enumerate()
        .map(|(i, p)| p * (1.0 + noise[i % noise.len()]))
        .collect();
    let joint = Distribution::from_weights(&joint).unwrap();
    let p = joint.probabilities();
    let row: Vec<f64> = (0..n).map(|i| (0..m).map(|j| p[i * m + j]).sum()).collect();
    let col: Vec<f64> = (0..m).map(|j| (0..n).map(|i| p[i * m + j]).sum()).collect();
    let hr = shannon_entropy(&Distribution::from_weights(&row).unwrap());
    let hc = shannon_entropy(&Distribution::from_weights(&col).unwrap());
    prop_assert!(shannon_entropy(&joint) <= hr + hc + TOL);
    Ok(())
}

pub fn maximality(d: &Distribution) -> Result<(), TestCaseError> {
    let a = d.len() as f64;
    let h = shannon_entropy(d);
    prop_assert!(h <= a.log2() + TOL);
    // Near-equality forces near-uniformity: log2 a - H is the divergence from
    // uniform, bounded below by ||p - u||_1^2 / (2 ln 2).
    if h >= a.log2() - TOL {
        let l1: f64 = d.probabilities().iter().map(|p| (p - 1.0 / a).abs()).sum();
        prop_assert!(l1 <= 1e-4, "H at max but l1 distance {l1}");
    }
    let u = Distribution::uniform(d.len()).unwrap();
    close(shannon_entropy(&u), a.log2(), TOL, "uniform maximum")
}

pub fn renyi_monotonicity(d: &Distribution, a1: f64, a2: f64) -> Result<(), TestCaseError> {
    let (lo, hi) = if a1 <= a2 { (a1, a2) } else { (a2, a1) };
    let h_lo = renyi_entropy(d, RenyiOrder::new(lo).unwrap());
    let h_hi = renyi_entropy(d, RenyiOrder::new(hi).unwrap());
    prop_assert!(h_lo + TOL >= h_hi, "H_{lo}={h_lo} < H_{hi}={h_hi}");
    Ok(())
}

pub fn order() -> impl Strategy<Value = f64> {
    prop_oneof![0.01..1.0f64, Just(1.0), 1.0..50.0f64]
}

pub fn noise() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-0.9..0.9f64, 1..16)
}

/// Runs one property `CASES` times; `Err` carries the failure message.
pub fn run<S, F>(strategy: S, check: F) -> Result<(), String>
where
    S: Strategy,
    F: Fn(S::Value) -> Result<(), TestCaseError>,
{
    let mut runner = proptest::test_runner::TestRunner::new(ProptestConfig {
        cases: CASES,
        failure_persistence: None,
        ..ProptestConfig::default()
    });
    runner.run(&strategy, check).map_err(|e| e.to_string())
}

/// Every property by name, each over `CASES` generated inputs.
pub fn suite() -> Vec<(&'static str, Result<(), String>)> {
    vec![
        ("non-negativity", run(dist(12), |d| non_negativity(&d))),
        (
            "symmetry",
            run(dist_and_perm(12), |(d, p)| symmetry(&d, &p)),
        ),
        ("normality", run(Just(()), |_| normality())),
        (
            "expansibility",
            run((dist(12), 0usize..13), |(d, i)| expansibility(&d, i)),
        ),
        (
            "decisivity",
            run((1usize..12, 0usize..12), |(n, i)| decisivity(n, i)),
        ),
        (
            "additivity",
            run((dist(8), dist(8)), |(a, b)| additivity(&a, &b)),
        ),
        (
            "subadditivity",
            run((dist(6), dist(6), noise()), |(a, b, z)| {
                subadditivity(&a, &b, &z)
            }),
        ),
        ("maximality", run(dist(12), |d| maximality(&d))),
        (
            "renyi monotonicity",
            run((dist(12), order(), order()), |(d, a, b)| {
                renyi_monotonicity(&d, a, b)
            }),
        ),
    ]
}
